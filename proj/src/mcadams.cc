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

#include "csanon/mcadams.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csanon/error.h"
#include "csanon/lpc.h"
#include "csanon/random.h"

namespace csanon {

namespace {

// Frames with less energy than this are treated as digital silence.
constexpr double kSilenceEnergy = 1e-12;

bool AllFinite(const std::vector<double>& values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace

void McAdamsConfig::Validate() const {
  if (!(alpha > 0.0)) throw Error("McAdams coefficient must be positive");
  if (!(frame_ms > 0.0)) throw Error("frame length must be positive");
  if (!(hop_ms > 0.0) || hop_ms > frame_ms) {
    throw Error("hop must lie in (0, frame length]");
  }
  if (lpc_order < 0) throw Error("LPC order must be non-negative");
  if (!(imag_eps >= 0.0)) throw Error("imag_eps must be non-negative");
  if (randomize_alpha) {
    const auto [lo, hi] = *randomize_alpha;
    if (!(lo > 0.0) || !(hi >= lo)) {
      throw Error("alpha range must satisfy 0 < lo <= hi");
    }
  }
}

int McAdamsConfig::OrderFor(int sample_rate_hz) const {
  return lpc_order > 0 ? lpc_order : DefaultLpcOrder(sample_rate_hz);
}

int DefaultLpcOrder(int sample_rate_hz) {
  return static_cast<int>(std::lround(sample_rate_hz / 1000.0)) + 4;
}

std::vector<double> HannWindow(int length) {
  std::vector<double> w(length);
  for (int n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
  }
  return w;
}

FrameLayout LayoutFor(const McAdamsConfig& cfg, int sample_rate_hz) {
  FrameLayout layout;
  layout.frame_length = std::max(
      2, static_cast<int>(std::lround(cfg.frame_ms * sample_rate_hz / 1000.0)));
  layout.hop = std::clamp(
      static_cast<int>(std::lround(cfg.hop_ms * sample_rate_hz / 1000.0)), 1,
      layout.frame_length);
  return layout;
}

std::vector<Frame> FrameSignal(const AudioBuffer& audio,
                               const McAdamsConfig& cfg) {
  const FrameLayout layout = LayoutFor(cfg, audio.sample_rate_hz);
  const std::vector<double> window = HannWindow(layout.frame_length);
  const auto length = static_cast<std::ptrdiff_t>(audio.samples.size());
  const std::ptrdiff_t first = -(layout.frame_length - layout.hop);

  std::vector<Frame> frames;
  // The last frame starts at or after length - hop, so every sample has the
  // same number of covering frames as an interior sample.
  for (std::ptrdiff_t start = first;; start += layout.hop) {
    Frame frame;
    frame.start = start;
    frame.samples.assign(layout.frame_length, 0.0);
    for (int n = 0; n < layout.frame_length; ++n) {
      const std::ptrdiff_t t = start + n;
      if (t >= 0 && t < length) frame.samples[n] = audio.samples[t] * window[n];
    }
    frames.push_back(std::move(frame));
    if (start >= length - layout.hop) break;
  }
  return frames;
}

std::vector<double> OverlapAdd(const std::vector<Frame>& frames, size_t length,
                               const std::vector<double>* window) {
  std::vector<double> out(length, 0.0);
  std::vector<double> weight(window != nullptr ? length : 0, 0.0);
  const auto n_out = static_cast<std::ptrdiff_t>(length);
  for (const Frame& frame : frames) {
    for (size_t n = 0; n < frame.samples.size(); ++n) {
      const std::ptrdiff_t t = frame.start + static_cast<std::ptrdiff_t>(n);
      if (t < 0 || t >= n_out) continue;
      out[t] += frame.samples[n];
      if (window != nullptr) weight[t] += (*window)[n];
    }
  }
  if (window != nullptr) {
    for (size_t t = 0; t < length; ++t) {
      if (weight[t] > 1e-8) out[t] /= weight[t];
    }
  }
  return out;
}

double ResolveAlpha(const McAdamsConfig& cfg, std::string_view utt_id) {
  if (!cfg.randomize_alpha) return cfg.alpha;
  Rng rng(MixSeed(cfg.seed, utt_id));
  return rng.Uniform(cfg.randomize_alpha->first, cfg.randomize_alpha->second);
}

AnonymizationResult McAdamsAnonymize(const AudioBuffer& audio,
                                     const McAdamsConfig& cfg,
                                     std::string_view utt_id) {
  cfg.Validate();
  ValidateAudio(audio);

  AnonymizationResult result;
  result.alpha = ResolveAlpha(cfg, utt_id);
  result.audio.sample_rate_hz = audio.sample_rate_hz;

  const FrameLayout layout = LayoutFor(cfg, audio.sample_rate_hz);
  const int order = std::min(cfg.OrderFor(audio.sample_rate_hz),
                             layout.frame_length - 1);
  const std::vector<double> window = HannWindow(layout.frame_length);
  std::vector<Frame> frames = FrameSignal(audio, cfg);
  result.frames = static_cast<int>(frames.size());

  for (size_t index = 0; index < frames.size(); ++index) {
    std::vector<double>& x = frames[index].samples;
    const std::vector<double> r = Autocorrelate(x, order);
    if (!(r[0] > kSilenceEnergy)) {
      ++result.silent_frames;
      continue;
    }
    const std::optional<LpcModel> model = LevinsonDurbin(r);
    if (!model) {
      ++result.silent_frames;
      continue;
    }
    try {
      const PoleSet poles = LpcToPoles(*model, static_cast<int>(index));
      const PoleSet shifted = ShiftPoles(poles, result.alpha, cfg.imag_eps);
      if (!AllPolesInsideUnitCircle(shifted)) {
        throw RootFindingError("unstable warped filter", static_cast<int>(index));
      }
      const LpcModel warped = PolesToLpc(shifted);
      const std::vector<double> residual = AnalysisFilter(model->coefficients, x);
      std::vector<double> y = SynthesisFilter(warped.coefficients, residual);
      if (!AllFinite(y)) {
        throw RootFindingError("non-finite synthesis output",
                               static_cast<int>(index));
      }
      x = std::move(y);
    } catch (const Error&) {
      // The windowed input frame stays in place.
      ++result.failed_frames;
    }
  }

  const std::vector<double> out =
      OverlapAdd(frames, audio.samples.size(), &window);
  double out_peak = 0.0;
  for (double v : out) out_peak = std::max(out_peak, std::fabs(v));
  double gain = 1.0;
  if (out_peak > 1.0) {
    gain = PeakAbs(audio) / out_peak;
    result.peak_normalized = true;
  }
  result.audio.samples.resize(out.size());
  for (size_t t = 0; t < out.size(); ++t) {
    result.audio.samples[t] = static_cast<float>(out[t] * gain);
  }
  return result;
}

}  // namespace csanon
