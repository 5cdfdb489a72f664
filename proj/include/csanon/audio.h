// Copyright 2026 The csanon Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CSANON_AUDIO_H_
#define CSANON_AUDIO_H_

#include <filesystem>
#include <vector>

namespace csanon {

// Mono audio with samples nominally in [-1, 1].
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate_hz = 16000;

  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

enum class SampleFormat { kPcm16, kFloat32 };

struct WavFile {
  AudioBuffer audio;
  SampleFormat format = SampleFormat::kPcm16;
};

// Throws Error if the buffer is empty, has a non-positive rate, or holds a
// non-finite sample.
void ValidateAudio(const AudioBuffer& audio);

// RIFF/WAVE, mono, 16-bit PCM or 32-bit IEEE float (WAVE_FORMAT_EXTENSIBLE
// accepted). Throws Error on anything else.
WavFile ReadWav(const std::filesystem::path& path);

// Float output is clipped to [-1, 1]; 16-bit output is rounded and
// saturated. Parent directories are created as needed.
void WriteWav(const std::filesystem::path& path, const AudioBuffer& audio,
              SampleFormat format);

// RMS level over the whole buffer in dB re full scale, floored at -120 dB.
double RmsDb(const AudioBuffer& audio);

double PeakAbs(const AudioBuffer& audio);

}  // namespace csanon

#endif  // CSANON_AUDIO_H_
