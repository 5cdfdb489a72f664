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

#include "csanon/align_metrics.h"

#include <algorithm>
#include <fstream>

#include "csanon/error.h"
#include "csanon/utf8.h"

namespace csanon {

std::string_view RateKindName(RateKind kind) {
  switch (kind) {
    case RateKind::kWer: return "WER";
    case RateKind::kCer: return "CER";
    case RateKind::kMer: return "MER";
    case RateKind::kPer: return "PER";
  }
  return "MER";
}

PinyinTable PinyinTable::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open Pinyin table " + path.string());
  PinyinTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.string(), line_no, "expected <codepoint>\\t<readings>");
    }
    char32_t cp = 0;
    try {
      size_t used = 0;
      cp = static_cast<char32_t>(std::stoul(line.substr(0, tab), &used, 16));
      if (used != tab) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(path.string(), line_no, "bad hex codepoint");
    }
    std::vector<std::string> readings;
    std::string rest = line.substr(tab + 1);
    size_t start = 0;
    while (start <= rest.size()) {
      const size_t comma = std::min(rest.find(',', start), rest.size());
      if (comma > start) readings.push_back(rest.substr(start, comma - start));
      start = comma + 1;
    }
    if (readings.empty()) throw ParseError(path.string(), line_no, "no readings");
    table.Add(cp, std::move(readings));
  }
  return table;
}

void PinyinTable::Add(char32_t codepoint, std::vector<std::string> readings) {
  readings_[codepoint] = std::move(readings);
}

const std::vector<std::string>* PinyinTable::Find(char32_t codepoint) const {
  const auto it = readings_.find(codepoint);
  return it == readings_.end() ? nullptr : &it->second;
}

std::string HanToPinyin(const Token& token, const PinyinTable& table,
                        PinyinMode mode, size_t* unmapped) {
  const std::u32string cps = utf8::Decode(token.surface);
  const std::vector<std::string>* readings =
      cps.size() == 1 ? table.Find(cps[0]) : nullptr;
  if (readings == nullptr) {
    if (unmapped != nullptr) ++*unmapped;
    return token.surface;
  }
  std::string reading = readings->front();
  if (mode == PinyinMode::kToneless) {
    while (!reading.empty() && reading.back() >= '0' && reading.back() <= '9') {
      reading.pop_back();
    }
  }
  return reading;
}

AlignmentCounts Align(std::span<const std::string> ref,
                      std::span<const std::string> hyp) {
  if (ref.empty()) throw EmptyReferenceError("alignment with empty reference");
  const size_t n = ref.size(), m = hyp.size();
  // Cost is (edits, insertions + deletions), compared lexicographically.
  struct Cost {
    int64_t edits;
    int64_t gaps;
    bool operator<(const Cost& o) const {
      return edits != o.edits ? edits < o.edits : gaps < o.gaps;
    }
    bool operator==(const Cost&) const = default;
  };
  std::vector<Cost> table((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> Cost& { return table[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) at(i, 0) = {static_cast<int64_t>(i), static_cast<int64_t>(i)};
  for (size_t j = 0; j <= m; ++j) at(0, j) = {static_cast<int64_t>(j), static_cast<int64_t>(j)};
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const bool same = ref[i - 1] == hyp[j - 1];
      Cost best = at(i - 1, j - 1);
      best.edits += same ? 0 : 1;
      Cost del = at(i - 1, j);
      del.edits += 1;
      del.gaps += 1;
      Cost ins = at(i, j - 1);
      ins.edits += 1;
      ins.gaps += 1;
      if (del < best) best = del;
      if (ins < best) best = ins;
      at(i, j) = best;
    }
  }

  AlignmentCounts counts;
  counts.ref_length = static_cast<int64_t>(n);
  size_t i = n, j = m;
  // Traceback priority: diagonal, then deletion, then insertion.
  while (i > 0 || j > 0) {
    const Cost here = at(i, j);
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      Cost diag = at(i - 1, j - 1);
      diag.edits += same ? 0 : 1;
      if (diag == here) {
        if (!same) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0) {
      Cost del = at(i - 1, j);
      del.edits += 1;
      del.gaps += 1;
      if (del == here) {
        ++counts.deletions;
        --i;
        continue;
      }
    }
    ++counts.insertions;
    --j;
  }
  return counts;
}

ErrorRateReport MakeReport(RateKind kind, const AlignmentCounts& counts) {
  if (counts.ref_length <= 0) {
    throw EmptyReferenceError("error rate over an empty reference");
  }
  ErrorRateReport report;
  report.kind = kind;
  report.counts = counts;
  report.rate = static_cast<double>(counts.errors()) /
                static_cast<double>(counts.ref_length);
  return report;
}

std::vector<std::string> MixedUnits(std::string_view text,
                                    const PinyinTable& table, PinyinMode mode,
                                    size_t* unmapped) {
  const Transcript transcript = TokenizeMixed(text);
  std::vector<std::string> units;
  units.reserve(transcript.tokens.size());
  for (const Token& token : transcript.tokens) {
    if (token.lang == Lang::kCmn) {
      units.push_back(HanToPinyin(token, table, mode, unmapped));
    } else {
      units.push_back(token.surface);
    }
  }
  return units;
}

ErrorRateReport MixedErrorRate(std::string_view ref_text,
                               std::string_view hyp_text,
                               const PinyinTable& table, PinyinMode mode,
                               size_t* unmapped) {
  const std::vector<std::string> ref = MixedUnits(ref_text, table, mode, unmapped);
  const std::vector<std::string> hyp = MixedUnits(hyp_text, table, mode, unmapped);
  return MakeReport(RateKind::kMer, Align(ref, hyp));
}

ErrorRateReport PhoneErrorRate(std::span<const std::string> ref_phones,
                               std::span<const std::string> hyp_phones) {
  return MakeReport(RateKind::kPer, Align(ref_phones, hyp_phones));
}

ErrorRateReport CorpusRate(std::span<const AlignmentCounts> counts,
                           RateKind kind) {
  if (counts.empty()) throw Error("corpus rate over no utterances");
  AlignmentCounts total;
  for (const AlignmentCounts& c : counts) {
    total.substitutions += c.substitutions;
    total.deletions += c.deletions;
    total.insertions += c.insertions;
    total.ref_length += c.ref_length;
  }
  return MakeReport(kind, total);
}

}  // namespace csanon
