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

// Synthetic test signals: a vowel-like source-filter model standing in for
// speech, and a noise-excited single resonance.

#ifndef CSANON_TOOLS_SYNTH_H_
#define CSANON_TOOLS_SYNTH_H_

#include "csanon/audio.h"
#include "csanon/random.h"

namespace csanon {

struct VoiceParams {
  double f0_hz = 150.0;
  // Scales every formant frequency (vocal-tract length).
  double formant_scale = 1.0;
  double peak = 0.5;
};

// Glottal pulses plus aspiration noise through three time-varying formant
// resonators, shaped into 150-300 ms syllables with short pauses.
AudioBuffer SynthesizeSpeechLike(double duration_s, int sample_rate_hz,
                                 const VoiceParams& voice, Rng* rng);

// White noise through a two-pole resonator at centre_hz with pole radius
// `radius`, normalized to the given peak.
AudioBuffer SingleResonance(double duration_s, int sample_rate_hz,
                            double centre_hz, double radius, double peak,
                            Rng* rng);

}  // namespace csanon

#endif  // CSANON_TOOLS_SYNTH_H_
