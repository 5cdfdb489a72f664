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

#include "csanon/audio.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "csanon/error.h"

namespace csanon {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;
constexpr double kRmsFloorDb = -120.0;

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

uint16_t ReadU16(const char* p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

uint32_t ReadU32(const char* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

template <typename T>
void Put(std::string* out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out->append(bytes, sizeof(T));
}

}  // namespace

void ValidateAudio(const AudioBuffer& audio) {
  if (audio.sample_rate_hz <= 0) throw Error("audio: non-positive sample rate");
  if (audio.samples.empty()) throw Error("audio: empty buffer");
  for (float s : audio.samples) {
    if (!std::isfinite(s)) throw Error("audio: non-finite sample");
  }
}

WavFile ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (data.size() < 12 || data.compare(0, 4, "RIFF") != 0 ||
      data.compare(8, 4, "WAVE") != 0) {
    throw Error(where + "not a RIFF/WAVE file");
  }

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const char* pcm = nullptr;
  size_t pcm_bytes = 0;
  size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const std::string id = data.substr(pos, 4);
    const size_t size = ReadU32(data.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + size > data.size() && id != "data") {
      throw Error(where + "truncated '" + id + "' chunk");
    }
    if (id == "fmt ") {
      if (size < 16) throw Error(where + "short fmt chunk");
      format = ReadU16(data.data() + body);
      channels = ReadU16(data.data() + body + 2);
      rate = ReadU32(data.data() + body + 4);
      bits = ReadU16(data.data() + body + 14);
      if (format == kFormatExtensible) {
        if (size < 26) throw Error(where + "short extensible fmt chunk");
        format = ReadU16(data.data() + body + 24);
      }
    } else if (id == "data") {
      pcm = data.data() + body;
      pcm_bytes = std::min(size, data.size() - body);
    }
    pos = body + size + (size & 1);
  }
  if (format == 0) throw Error(where + "missing fmt chunk");
  if (pcm == nullptr) throw Error(where + "missing data chunk");
  if (channels != 1) {
    throw Error(where + "expected mono, got " + std::to_string(channels) +
                " channels");
  }
  if (rate == 0) throw Error(where + "zero sample rate");

  WavFile wav;
  wav.audio.sample_rate_hz = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    wav.format = SampleFormat::kPcm16;
    const size_t n = pcm_bytes / 2;
    wav.audio.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const auto v = static_cast<int16_t>(ReadU16(pcm + 2 * i));
      wav.audio.samples[i] = static_cast<float>(v) / 32768.0f;
    }
  } else if (format == kFormatFloat && bits == 32) {
    wav.format = SampleFormat::kFloat32;
    const size_t n = pcm_bytes / 4;
    wav.audio.samples.resize(n);
    std::memcpy(wav.audio.samples.data(), pcm, n * 4);
  } else {
    throw Error(where + "unsupported encoding (format " +
                std::to_string(format) + ", " + std::to_string(bits) +
                " bits)");
  }
  return wav;
}

void WriteWav(const std::filesystem::path& path, const AudioBuffer& audio,
              SampleFormat format) {
  const bool is_float = format == SampleFormat::kFloat32;
  const uint16_t bytes_per_sample = is_float ? 4 : 2;
  const auto data_bytes =
      static_cast<uint32_t>(audio.samples.size() * bytes_per_sample);

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  Put<uint32_t>(&out, 36 + data_bytes);
  out += "WAVEfmt ";
  Put<uint32_t>(&out, 16);
  Put<uint16_t>(&out, is_float ? kFormatFloat : kFormatPcm);
  Put<uint16_t>(&out, 1);
  Put<uint32_t>(&out, static_cast<uint32_t>(audio.sample_rate_hz));
  Put<uint32_t>(&out,
                static_cast<uint32_t>(audio.sample_rate_hz) * bytes_per_sample);
  Put<uint16_t>(&out, bytes_per_sample);
  Put<uint16_t>(&out, static_cast<uint16_t>(8 * bytes_per_sample));
  out += "data";
  Put<uint32_t>(&out, data_bytes);
  for (float s : audio.samples) {
    const float clipped = std::clamp(s, -1.0f, 1.0f);
    if (is_float) {
      Put<float>(&out, clipped);
    } else {
      const long q = std::lround(static_cast<double>(clipped) * 32768.0);
      Put<int16_t>(&out, static_cast<int16_t>(std::clamp(q, -32768L, 32767L)));
    }
  }

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error("short write to " + path.string());
}

double RmsDb(const AudioBuffer& audio) {
  if (audio.samples.empty()) return kRmsFloorDb;
  double energy = 0.0;
  for (float s : audio.samples) energy += static_cast<double>(s) * s;
  const double rms = std::sqrt(energy / audio.samples.size());
  if (rms <= 0.0) return kRmsFloorDb;
  return std::max(kRmsFloorDb, 20.0 * std::log10(rms));
}

double PeakAbs(const AudioBuffer& audio) {
  double peak = 0.0;
  for (float s : audio.samples) peak = std::max(peak, std::fabs(static_cast<double>(s)));
  return peak;
}

}  // namespace csanon
