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

// Code-switching analysis: token language tagging, code-switching point
// counts before and after anonymization, and annotation-based ablations of
// the utility metric.

#ifndef CSANON_CS_ANALYSIS_H_
#define CSANON_CS_ANALYSIS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "csanon/align_metrics.h"
#include "csanon/corpus.h"
#include "csanon/mann_whitney.h"
#include "csanon/transcript.h"

namespace csanon {

struct LanguageLexicon {
  Lang language = Lang::kEng;
  std::unordered_set<std::string> words;

  // One lowercased word per line; '#' comments. Throws Error when empty.
  static LanguageLexicon Load(const std::filesystem::path& path, Lang language);
};

// Retags every token from its surface. All-Han tokens become CMN and
// digit-only tokens NEUTRAL. A word in exactly one lexicon takes that
// lexicon's language; a word in several takes the language of the nearest
// singly-claimed word to its left, else to its right, else matrix_lang; a
// word in none is OTHER.
Transcript TagTokens(const Transcript& transcript,
                     std::span<const LanguageLexicon> lexicons,
                     Lang matrix_lang);

// Adjacent language changes over the ENG/CMN/SPA tokens; other tokens are
// skipped.
int CountCsp(const Transcript& tagged);

struct CspRecord {
  std::string utt_id;
  int csp_orig = 0;
  int csp_anon = 0;
  AlignmentCounts counts;
  double mer = 0.0;
};

struct CspCategory {
  std::string name;
  int64_t count = 0;
  // count / n_total.
  double fraction = 0.0;
  // Pooled MER over the category; nullopt when empty.
  std::optional<double> mer;
  // Rank test of the category's per-utterance MERs against the total's.
  std::optional<MannWhitneyResult> test;
  // "greater" or "less": the alternative tested against the total.
  std::string alternative;
};

struct CspAggregate {
  int64_t n_input = 0;
  // Utterances with no code-switching point before anonymization; excluded.
  int64_t n_excluded_zero_orig = 0;
  int64_t n_total = 0;
  int64_t n_reduced = 0;
  int64_t n_zero = 0;
  int64_t n_equal = 0;
  int64_t n_increased = 0;
  double mean_csp_orig = 0.0;
  double mean_csp_anon = 0.0;
  double mer_total = 0.0;
  // reduced, zero, equal in that order.
  std::vector<CspCategory> categories;
  std::vector<CspRecord> records;
};

// orig and anon hold tagged transcripts of the recognized text before and
// after anonymization; mer holds per-utterance alignment counts after
// anonymization. All three must share one key set (Error lists the ids that
// are missing). Reduced and zero categories are tested for higher MER than
// the total, the equal category for lower MER.
CspAggregate CspCompare(const std::map<std::string, Transcript>& orig,
                        const std::map<std::string, Transcript>& anon,
                        const std::map<std::string, AlignmentCounts>& mer);

struct AblationExperiment {
  std::string name;
  std::set<std::string> flags;
};

// Lines of "<name> <flag> [<flag> ...]"; '#' comments.
std::vector<AblationExperiment> LoadAblationExperiments(
    const std::filesystem::path& path);

struct AblationReport {
  std::string name;
  std::optional<LangSetting> setting;
  int64_t n_before = 0;
  int64_t n_after = 0;
  double size_fraction = 0.0;
  double mer_before = 0.0;
  double mer_after = 0.0;
  // (after - before) / before; nullopt when mer_before is zero.
  std::optional<double> relative_change;
};

// Drops utterances carrying any of the flags and compares pooled MER over
// the utterances of the manifest (optionally one setting) that have counts.
// Throws Error if nothing is left before or after the removal.
AblationReport SubsetAblation(const CorpusManifest& manifest,
                              const std::map<std::string, AlignmentCounts>& mer,
                              const AblationExperiment& experiment,
                              std::optional<LangSetting> setting = std::nullopt);

}  // namespace csanon

#endif  // CSANON_CS_ANALYSIS_H_
