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

// All-pole modelling: autocorrelation, Levinson-Durbin, and the mapping
// between predictor coefficients and pole positions that the McAdams
// transformation works on.

#ifndef CSANON_LPC_H_
#define CSANON_LPC_H_

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "csanon/error.h"

namespace csanon {

// A(z) = 1 + sum_k coefficients[k-1] z^-k.
struct LpcModel {
  std::vector<double> coefficients;
  double prediction_error = 0.0;

  int order() const { return static_cast<int>(coefficients.size()); }
};

// Roots of z^p A(z). Complex roots appear in conjugate pairs.
struct PoleSet {
  std::vector<std::complex<double>> poles;
};

class RootFindingError : public Error {
 public:
  RootFindingError(const std::string& what, int frame_index)
      : Error(frame_index >= 0
                  ? "frame " + std::to_string(frame_index) + ": " + what
                  : what),
        frame_index_(frame_index) {}
  int frame_index() const { return frame_index_; }

 private:
  int frame_index_;
};

// r[k] = sum_t frame[t] * frame[t + k] for k = 0..order.
// Requires order < frame.size().
std::vector<double> Autocorrelate(std::span<const double> frame, int order);

// Solves the Toeplitz normal equations for the predictor of order
// r.size() - 1. If a reflection coefficient reaches magnitude 1 the recursion
// stops and the model of the last stable order is returned.
// Returns nullopt for a silent frame (r[0] <= 0) or when not even a first
// order model is stable; callers then pass the frame through untouched.
std::optional<LpcModel> LevinsonDurbin(std::span<const double> r);

// Eigenvalues of the balanced companion matrix, refined by Newton steps on
// the polynomial and paired into exact conjugates. Throws RootFindingError
// when the eigen solver fails or a root's residual exceeds
// 1e-6 * max(1, |a|). frame_index is only used for the error message.
PoleSet LpcToPoles(const LpcModel& model, int frame_index = -1);

// Expands prod (z - p) into monic real coefficients. Complex poles must come
// in conjugate pairs within 1e-9 (relative to max(1, |p|)); throws Error
// otherwise. prediction_error of the result is 0.
LpcModel PolesToLpc(const PoleSet& poles);

// McAdams warp: each pole with |Im| > imag_eps keeps its magnitude while its
// phase phi (taken in (0, pi) for the upper representative) becomes
// phi^alpha, clamped to [1e-9, pi - 1e-9] and mirrored to the conjugate.
// Real poles keep their position. Any pole with magnitude >= 1 is pulled in
// to 1 - 1e-6. Poles whose phase and magnitude are unchanged are copied
// bit for bit.
PoleSet ShiftPoles(const PoleSet& poles, double alpha, double imag_eps);

bool AllPolesInsideUnitCircle(const PoleSet& poles);

// e[n] = x[n] + sum_k a_k x[n-k], zero initial state.
std::vector<double> AnalysisFilter(std::span<const double> coefficients,
                                   std::span<const double> signal);

// y[n] = e[n] - sum_k a_k y[n-k], zero initial state.
std::vector<double> SynthesisFilter(std::span<const double> coefficients,
                                    std::span<const double> excitation);

}  // namespace csanon

#endif  // CSANON_LPC_H_
