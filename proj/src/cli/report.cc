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

#include "cli/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "csanon/utf8.h"

namespace csanon::cli {

namespace {

size_t DisplayWidth(const std::string& s) { return utf8::Decode(s).size(); }

std::string Pad(const std::string& s, size_t width, bool left) {
  const size_t w = DisplayWidth(s);
  if (w >= width) return s;
  const std::string fill(width - w, ' ');
  return left ? s + fill : fill + s;
}

}  // namespace

TextTable::TextTable(std::vector<std::string> header) : header_(std::move(header)) {}

void TextTable::AddRow(std::vector<std::string> cells) {
  cells.resize(header_.size());
  rows_.push_back(std::move(cells));
}

void TextTable::AddRule() { rules_.push_back(rows_.size()); }

std::string TextTable::Render() const {
  std::vector<size_t> widths(header_.size(), 0);
  for (size_t c = 0; c < header_.size(); ++c) widths[c] = DisplayWidth(header_[c]);
  for (const auto& row : rows_) {
    for (size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], DisplayWidth(row[c]));
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out += " | ";
      out += Pad(cells[c], widths[c], c == 0);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + '\n';
  };
  std::string rule;
  for (size_t c = 0; c < widths.size(); ++c) {
    if (c > 0) rule += "-+-";
    rule += std::string(widths[c], '-');
  }
  rule += '\n';

  std::string out = line(header_) + rule;
  for (size_t r = 0; r < rows_.size(); ++r) {
    if (r > 0 && std::count(rules_.begin(), rules_.end(), r) > 0) out += rule;
    out += line(rows_[r]);
  }
  return out;
}

std::string FormatCount(int64_t n) {
  std::string digits = std::to_string(n < 0 ? -n : n);
  std::string out;
  for (size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return n < 0 ? "-" + out : out;
}

std::string FormatFixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string out = buf;
  if (out == "-0" || out.find_first_not_of("-0.") == std::string::npos) {
    if (out[0] == '-') out.erase(0, 1);
  }
  return out;
}

std::string FormatPercent(double fraction, int decimals) {
  return FormatFixed(100.0 * fraction, decimals);
}

std::string CountWithPercent(int64_t n, double fraction) {
  return FormatCount(n) + " (" + FormatPercent(fraction, 0) + "%)";
}

std::string SignificanceMark(const std::optional<MannWhitneyResult>& test) {
  return test && test->significant ? "*" : "";
}

}  // namespace csanon::cli
