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
#include <vector>

#include "csanon/error.h"
#include "csanon/random.h"
#include "doctest.h"
#include "oracles.h"

namespace csanon {
namespace {

MannWhitneyResult Test(std::vector<double> a, std::vector<double> b) {
  return MannWhitneyUGreater(a, b);
}

TEST_CASE("small exact examples") {
  MannWhitneyResult r = Test({3, 4}, {1, 2});
  CHECK(r.u == 4.0);
  CHECK(r.exact);
  CHECK(r.p == doctest::Approx(1.0 / 6.0));
  CHECK_FALSE(r.significant);

  r = Test({1, 2}, {3, 4});
  CHECK(r.u == 0.0);
  CHECK(r.p == 1.0);

  // The most extreme of C(10, 5) = 252 arrangements.
  r = Test({6, 7, 8, 9, 10}, {1, 2, 3, 4, 5});
  CHECK(r.p == doctest::Approx(1.0 / 252.0));
  CHECK(r.significant);
}

TEST_CASE("identical samples are never significant") {
  for (int n : {2, 5, 20, 40}) {
    std::vector<double> a;
    for (int i = 0; i < n; ++i) a.push_back(i % 3);
    const MannWhitneyResult r = Test(a, a);
    CAPTURE(n);
    CHECK(r.u == doctest::Approx(n * n / 2.0));
    CHECK(r.p >= 0.5);
    CHECK_FALSE(r.significant);
  }
  const MannWhitneyResult constant = Test({1, 1, 1}, {1, 1});
  CHECK(constant.p == 1.0);
}

TEST_CASE("exact mode matches permutation enumeration") {
  Rng rng(77);
  int compared = 0;
  for (int na = 1; na <= 4; ++na) {
    for (int nb = 1; nb <= 4; ++nb) {
      for (int rep = 0; rep < 50; ++rep) {
        // Distinct values in random order so exact mode applies.
        std::vector<double> pool(na + nb);
        for (size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<double>(i);
        Shuffle(&pool, &rng);
        const std::vector<double> a(pool.begin(), pool.begin() + na);
        const std::vector<double> b(pool.begin() + na, pool.end());
        const MannWhitneyResult r = Test(a, b);
        REQUIRE(r.exact);
        CHECK(r.p == doctest::Approx(oracle::PermutationMannWhitneyP(a, b)).epsilon(1e-12));
        ++compared;
      }
    }
  }
  CHECK(compared == 800);
}

TEST_CASE("exact distribution at the size limit") {
  Rng rng(5);
  for (int na = 1; na < 12; ++na) {
    std::vector<double> pool(12);
    for (size_t i = 0; i < pool.size(); ++i) pool[i] = rng.Normal();
    const std::vector<double> a(pool.begin(), pool.begin() + na);
    const std::vector<double> b(pool.begin() + na, pool.end());
    const MannWhitneyResult r = Test(a, b);
    REQUIRE(r.exact);
    CHECK(r.p == doctest::Approx(oracle::PermutationMannWhitneyP(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("normal approximation holds its size under the null") {
  Rng rng(2025);
  constexpr int kSims = 10000;
  int rejections = 0;
  for (int s = 0; s < kSims; ++s) {
    std::vector<double> a(30), b(30);
    for (double& x : a) x = rng.Normal();
    for (double& x : b) x = rng.Normal();
    const MannWhitneyResult r = Test(a, b);
    REQUIRE_FALSE(r.exact);
    if (r.significant) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / kSims;
  CAPTURE(rate);
  CHECK(std::fabs(rate - kSignificanceLevel) <= 0.01);
}

TEST_CASE("approximation detects a real shift") {
  Rng rng(3);
  std::vector<double> a(40), b(40);
  for (double& x : a) x = 1.0 + rng.Normal();
  for (double& x : b) x = rng.Normal();
  const MannWhitneyResult r = Test(a, b);
  CHECK(r.significant);
  CHECK(r.p < 1e-3);
}

TEST_CASE("empty samples are rejected") {
  CHECK_THROWS_AS(Test({}, {1.0}), Error);
  CHECK_THROWS_AS(Test({1.0}, {}), Error);
}

}  // namespace
}  // namespace csanon
