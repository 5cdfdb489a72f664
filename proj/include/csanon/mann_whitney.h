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

#ifndef CSANON_MANN_WHITNEY_H_
#define CSANON_MANN_WHITNEY_H_

#include <span>

namespace csanon {

// Significance level used for every reported rank test.
inline constexpr double kSignificanceLevel = 0.025;

struct MannWhitneyResult {
  // U statistic of sample A (midranks on ties).
  double u = 0.0;
  // One-sided p-value for "A is stochastically greater than B".
  double p = 1.0;
  bool exact = false;
  bool significant = false;
};

// Exact null distribution when |A| + |B| <= 12 and there are no ties;
// otherwise the normal approximation with tie-corrected variance and a
// continuity correction. Throws Error if either sample is empty.
MannWhitneyResult MannWhitneyUGreater(std::span<const double> a,
                                      std::span<const double> b,
                                      double alpha = kSignificanceLevel);

}  // namespace csanon

#endif  // CSANON_MANN_WHITNEY_H_
