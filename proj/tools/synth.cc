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

#include "synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace csanon {

namespace {

struct Resonator {
  double b1 = 0.0, b2 = 0.0, y1 = 0.0, y2 = 0.0;

  void Set(double freq_hz, double bandwidth_hz, int rate) {
    const double r = std::exp(-std::numbers::pi * bandwidth_hz / rate);
    b1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq_hz / rate);
    b2 = -r * r;
  }
  double Step(double x) {
    const double y = x + b1 * y1 + b2 * y2;
    y2 = y1;
    y1 = y;
    return y;
  }
};

// F1-F3 of a few cardinal vowels.
constexpr std::array<std::array<double, 3>, 5> kVowels = {{
    {730, 1090, 2440},  // a
    {270, 2290, 3010},  // i
    {300, 870, 2240},   // u
    {530, 1840, 2480},  // e
    {570, 840, 2410},   // o
}};

void NormalizePeak(std::vector<float>* samples, double peak) {
  double max_abs = 0.0;
  for (float s : *samples) max_abs = std::max(max_abs, std::fabs(static_cast<double>(s)));
  if (max_abs <= 0.0) return;
  const double gain = peak / max_abs;
  for (float& s : *samples) s = static_cast<float>(s * gain);
}

}  // namespace

AudioBuffer SynthesizeSpeechLike(double duration_s, int sample_rate_hz,
                                 const VoiceParams& voice, Rng* rng) {
  AudioBuffer audio;
  audio.sample_rate_hz = sample_rate_hz;
  const auto n = static_cast<size_t>(std::lround(duration_s * sample_rate_hz));
  audio.samples.assign(std::max<size_t>(n, 1), 0.0f);

  std::array<Resonator, 3> formants;
  double phase = 0.0;
  size_t t = 0;
  while (t < audio.samples.size()) {
    const auto syllable = static_cast<size_t>(rng->Uniform(0.15, 0.3) * sample_rate_hz);
    const auto pause = static_cast<size_t>(rng->Uniform(0.02, 0.08) * sample_rate_hz);
    const auto& from = kVowels[rng->Index(kVowels.size())];
    const auto& to = kVowels[rng->Index(kVowels.size())];
    const double f0 = voice.f0_hz * rng->Uniform(0.9, 1.1);
    for (size_t k = 0; k < syllable && t < audio.samples.size(); ++k, ++t) {
      const double pos = static_cast<double>(k) / syllable;
      if (k % 32 == 0) {
        for (int f = 0; f < 3; ++f) {
          const double freq = voice.formant_scale * (from[f] + (to[f] - from[f]) * pos);
          formants[f].Set(freq, 60.0 + 40.0 * f, sample_rate_hz);
        }
      }
      const double pitch = f0 * (1.0 + 0.03 * std::sin(2.0 * std::numbers::pi * 5.0 * t /
                                                        sample_rate_hz));
      phase += pitch / sample_rate_hz;
      double source = 0.05 * rng->Normal();
      if (phase >= 1.0) {
        phase -= 1.0;
        source += 1.0;
      }
      double y = source;
      for (Resonator& r : formants) y = r.Step(y) * 0.5;
      const double envelope = std::sin(std::numbers::pi * pos);
      audio.samples[t] = static_cast<float>(y * envelope);
    }
    for (size_t k = 0; k < pause && t < audio.samples.size(); ++k, ++t) {
      audio.samples[t] = static_cast<float>(1e-3 * rng->Normal());
    }
  }
  NormalizePeak(&audio.samples, voice.peak);
  return audio;
}

AudioBuffer SingleResonance(double duration_s, int sample_rate_hz,
                            double centre_hz, double radius, double peak,
                            Rng* rng) {
  AudioBuffer audio;
  audio.sample_rate_hz = sample_rate_hz;
  const auto n = static_cast<size_t>(std::lround(duration_s * sample_rate_hz));
  audio.samples.resize(std::max<size_t>(n, 1));
  const double b1 = 2.0 * radius * std::cos(2.0 * std::numbers::pi * centre_hz / sample_rate_hz);
  const double b2 = -radius * radius;
  double y1 = 0.0, y2 = 0.0;
  for (float& s : audio.samples) {
    const double y = rng->Normal() + b1 * y1 + b2 * y2;
    y2 = y1;
    y1 = y;
    s = static_cast<float>(y);
  }
  NormalizePeak(&audio.samples, peak);
  return audio;
}

}  // namespace csanon
