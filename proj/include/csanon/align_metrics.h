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

// Edit-distance scoring: word, character, mixed (word + Pinyin syllable) and
// phone error rates.

#ifndef CSANON_ALIGN_METRICS_H_
#define CSANON_ALIGN_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "csanon/transcript.h"

namespace csanon {

struct AlignmentCounts {
  int64_t substitutions = 0;
  int64_t deletions = 0;
  int64_t insertions = 0;
  int64_t ref_length = 0;

  int64_t errors() const { return substitutions + deletions + insertions; }
  bool operator==(const AlignmentCounts&) const = default;
};

enum class RateKind { kWer, kCer, kMer, kPer };
std::string_view RateKindName(RateKind kind);

struct ErrorRateReport {
  RateKind kind = RateKind::kMer;
  AlignmentCounts counts;
  // (S + D + I) / N; may exceed 1.
  double rate = 0.0;
};

// Codepoint to Pinyin readings, primary reading first, tones as digits
// ("hao3"). Loaded from "<hex codepoint>\t<reading>[,<reading>...]" lines.
class PinyinTable {
 public:
  static PinyinTable Load(const std::filesystem::path& path);

  void Add(char32_t codepoint, std::vector<std::string> readings);
  const std::vector<std::string>* Find(char32_t codepoint) const;
  size_t size() const { return readings_.size(); }

 private:
  std::unordered_map<char32_t, std::vector<std::string>> readings_;
};

enum class PinyinMode { kToneless, kNumberedTone };

// Primary reading of a single-character CMN token. Unmapped characters come
// back unchanged and bump *unmapped when given.
std::string HanToPinyin(const Token& token, const PinyinTable& table,
                        PinyinMode mode = PinyinMode::kToneless,
                        size_t* unmapped = nullptr);

// Minimum unit-cost edit alignment. Among minimal alignments the one with
// the most substitutions is taken, so the counts are unique.
// Throws EmptyReferenceError if ref is empty.
AlignmentCounts Align(std::span<const std::string> ref,
                      std::span<const std::string> hyp);

ErrorRateReport MakeReport(RateKind kind, const AlignmentCounts& counts);

// Scoring units for MER: Latin words as-is, Han characters as Pinyin.
std::vector<std::string> MixedUnits(std::string_view text,
                                    const PinyinTable& table,
                                    PinyinMode mode = PinyinMode::kToneless,
                                    size_t* unmapped = nullptr);

ErrorRateReport MixedErrorRate(std::string_view ref_text,
                               std::string_view hyp_text,
                               const PinyinTable& table,
                               PinyinMode mode = PinyinMode::kToneless,
                               size_t* unmapped = nullptr);

ErrorRateReport PhoneErrorRate(std::span<const std::string> ref_phones,
                               std::span<const std::string> hyp_phones);

// Pooled rate: sum of errors over sum of reference lengths.
// Throws Error on an empty list or a zero total reference length.
ErrorRateReport CorpusRate(std::span<const AlignmentCounts> counts,
                           RateKind kind);

}  // namespace csanon

#endif  // CSANON_ALIGN_METRICS_H_
