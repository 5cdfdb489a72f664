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

// Signal-processing voice anonymizer. Each analysis frame is modelled by an
// all-pole filter whose pole phases are raised to the McAdams coefficient;
// the frame's LPC residual is then re-filtered through the warped filter and
// the frames are overlap-added.

#ifndef CSANON_MCADAMS_H_
#define CSANON_MCADAMS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "csanon/audio.h"

namespace csanon {

struct McAdamsConfig {
  double alpha = 0.8;
  double frame_ms = 20.0;
  double hop_ms = 10.0;
  // 0 selects the rate-dependent default (see DefaultLpcOrder).
  int lpc_order = 0;
  // Poles with |Im| at or below this are treated as real.
  double imag_eps = 1e-6;
  // When set, alpha is drawn uniformly from [first, second] once per
  // utterance, seeded by seed and the utterance id.
  std::optional<std::pair<double, double>> randomize_alpha;
  uint64_t seed = 0;

  // Throws Error on alpha <= 0, hop outside (0, frame], a bad alpha range or
  // a negative order.
  void Validate() const;
  int OrderFor(int sample_rate_hz) const;
};

// 20 at 16 kHz, round(rate / 1000) + 4 in general.
int DefaultLpcOrder(int sample_rate_hz);

// Periodic Hann window, which overlap-adds to exactly one at 50% overlap.
std::vector<double> HannWindow(int length);

struct FrameLayout {
  int frame_length = 0;
  int hop = 0;
};

FrameLayout LayoutFor(const McAdamsConfig& cfg, int sample_rate_hz);

struct Frame {
  // Position of samples[0] in the input; negative for the head frames.
  std::ptrdiff_t start = 0;
  std::vector<double> samples;
};

// Hann-windowed frames. The first frame starts frame_length - hop samples
// before the signal and frames continue until every input sample lies in the
// fully overlapped region, so a constant signal overlap-adds back to itself
// at the 50% hop. Samples outside the input are zero.
std::vector<Frame> FrameSignal(const AudioBuffer& audio,
                               const McAdamsConfig& cfg);

// Sums frames into a buffer of the given length. With window set, each
// output sample is divided by the summed window weight at that position.
std::vector<double> OverlapAdd(const std::vector<Frame>& frames,
                               size_t length,
                               const std::vector<double>* window = nullptr);

struct AnonymizationResult {
  AudioBuffer audio;
  double alpha = 1.0;
  int frames = 0;
  int silent_frames = 0;
  // Frames that hit a DSP failure and were copied through.
  int failed_frames = 0;
  bool peak_normalized = false;
};

// The alpha used for an utterance: cfg.alpha, or the seeded draw when
// randomize_alpha is set.
double ResolveAlpha(const McAdamsConfig& cfg, std::string_view utt_id);

// Output has the input's length and rate. Silent frames and frames whose
// analysis fails are copied through. If the result would clip it is scaled
// so its peak matches the input peak.
AnonymizationResult McAdamsAnonymize(const AudioBuffer& audio,
                                     const McAdamsConfig& cfg,
                                     std::string_view utt_id = {});

}  // namespace csanon

#endif  // CSANON_MCADAMS_H_
