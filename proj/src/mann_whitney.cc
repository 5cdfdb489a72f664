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

#include "csanon/mann_whitney.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "csanon/error.h"

namespace csanon {

namespace {

constexpr size_t kExactLimit = 12;

// Number of orderings of na A's and nb B's for each value of U_A, by the
// recurrence f(na, nb, u) = f(na - 1, nb, u - nb) + f(na, nb - 1, u).
std::vector<double> ExactUDistribution(int na, int nb) {
  const int max_u = na * nb;
  // table[i][j] is the distribution for i A's and j B's.
  std::vector<std::vector<std::vector<double>>> table(
      na + 1, std::vector<std::vector<double>>(nb + 1));
  for (int i = 0; i <= na; ++i) {
    for (int j = 0; j <= nb; ++j) {
      std::vector<double>& f = table[i][j];
      f.assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        f[0] = 1.0;
        continue;
      }
      // The largest element is either an A (adding j to U) or a B.
      const std::vector<double>& with_a = table[i - 1][j];
      const std::vector<double>& with_b = table[i][j - 1];
      for (size_t u = 0; u < with_a.size(); ++u) f[u + j] += with_a[u];
      for (size_t u = 0; u < with_b.size(); ++u) f[u] += with_b[u];
    }
  }
  std::vector<double> dist = table[na][nb];
  dist.resize(max_u + 1, 0.0);
  return dist;
}

}  // namespace

MannWhitneyResult MannWhitneyUGreater(std::span<const double> a,
                                      std::span<const double> b, double alpha) {
  if (a.empty() || b.empty()) throw Error("Mann-Whitney U: empty sample");
  const size_t na = a.size(), nb = b.size(), n = na + nb;

  struct Item {
    double value;
    bool from_a;
  };
  std::vector<Item> pooled;
  pooled.reserve(n);
  for (double v : a) pooled.push_back({v, true});
  for (double v : b) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(),
            [](const Item& x, const Item& y) { return x.value < y.value; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  bool ties = false;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && pooled[j].value == pooled[i].value) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    const auto t = static_cast<double>(j - i);
    if (j - i > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    for (size_t k = i; k < j; ++k) {
      if (pooled[k].from_a) rank_sum_a += midrank;
    }
    i = j;
  }

  MannWhitneyResult result;
  const auto dna = static_cast<double>(na), dnb = static_cast<double>(nb);
  result.u = rank_sum_a - dna * (dna + 1.0) / 2.0;

  if (n <= kExactLimit && !ties) {
    result.exact = true;
    const std::vector<double> dist =
        ExactUDistribution(static_cast<int>(na), static_cast<int>(nb));
    double total = 0.0, tail = 0.0;
    const auto u_obs = static_cast<size_t>(std::lround(result.u));
    for (size_t u = 0; u < dist.size(); ++u) {
      total += dist[u];
      if (u >= u_obs) tail += dist[u];
    }
    result.p = tail / total;
  } else {
    const double dn = static_cast<double>(n);
    const double mean = dna * dnb / 2.0;
    const double var =
        dna * dnb / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    if (var <= 0.0) {
      result.p = 1.0;
    } else {
      const double z = (result.u - mean - 0.5) / std::sqrt(var);
      result.p = 0.5 * std::erfc(z / std::sqrt(2.0));
    }
  }
  result.p = std::clamp(result.p, 0.0, 1.0);
  result.significant = result.p < alpha;
  return result;
}

}  // namespace csanon
