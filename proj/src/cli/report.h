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

// Plain-text table and number formatting for the human-readable reports.

#ifndef CSANON_CLI_REPORT_H_
#define CSANON_CLI_REPORT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csanon/mann_whitney.h"

namespace csanon::cli {

// First column left-aligned, the rest right-aligned, separated by " | ".
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header);

  void AddRow(std::vector<std::string> cells);
  // Horizontal rule before the next row.
  void AddRule();
  std::string Render() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<size_t> rules_;
};

// 7533 -> "7,533".
std::string FormatCount(int64_t n);
// 0.509 -> "50.90" with two decimals.
std::string FormatPercent(double fraction, int decimals = 2);
// (4926, 0.654) -> "4,926 (65%)".
std::string CountWithPercent(int64_t n, double fraction);
std::string FormatFixed(double value, int decimals);
// "*" when the test was run and is significant.
std::string SignificanceMark(const std::optional<MannWhitneyResult>& test);

}  // namespace csanon::cli

#endif  // CSANON_CLI_REPORT_H_
