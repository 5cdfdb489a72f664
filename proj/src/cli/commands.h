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

// The toolkit's subcommands as library calls. Each Run* function reads its
// inputs, writes its outputs under `out`, logs progress to `log` and returns
// the process exit status: kExitOk, or kExitIncomplete when some utterance
// was skipped. Fatal problems are thrown as csanon::Error.

#ifndef CSANON_CLI_COMMANDS_H_
#define CSANON_CLI_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "csanon/align_metrics.h"
#include "csanon/corpus.h"
#include "csanon/mcadams.h"

namespace csanon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIncomplete = 1;
inline constexpr int kExitError = 2;

struct CommonOptions {
  std::string manifest;
  std::string out = "out";
  uint64_t seed = 0;
  int jobs = 1;
};

struct PrepOptions {
  // Base for relative audio paths; defaults to the manifest's directory.
  std::string audio_root;
  std::string particles;
  std::string patterns;
  std::string lexicon_en;
  std::string lexicon_es;
  std::string matrix_lang = "eng";
  double max_duration_s = 42.0;
  ConcatOptions concat;
  int n_enroll_min = 4;
  int n_enroll_max = 10;
};

struct AnonymizeOptions {
  std::string audio_root;
  McAdamsConfig mcadams;
};

struct PrivacyOptions {
  std::string embeddings;
  std::string label = "system";
  bool allow_partial = false;
};

struct UtilityOptions {
  std::string hyps;
  std::string phones_ref;
  std::string phones_hyp;
  std::string pinyin;
  bool numbered_tones = false;
  // "all" or a split name.
  std::string split = "all";
  std::string label = "system";
  bool allow_partial = false;
};

struct CspOptions {
  std::string orig_hyps;
  std::string anon_hyps;
  std::string mer;
  std::string lexicon_en;
  std::string lexicon_es;
  std::string matrix_lang = "eng";
  // Hypotheses are "surface/TAG" sequences from an external tagger.
  bool pretagged = false;
};

struct AblateOptions {
  std::string mer;
  std::string experiments;
  // Comma-separated experiment names; empty runs all of them.
  std::string only;
  bool by_setting = true;
};

struct ReportOptions {
  // Comma-separated NAME=DIR pairs, in column order.
  std::string systems;
  std::string dataset = "corpus";
  std::string split = "test";
};

int RunPrep(const CommonOptions& common, const PrepOptions& options, std::ostream& log);
int RunAnonymize(const CommonOptions& common, const AnonymizeOptions& options,
                 std::ostream& log);
int RunEvalPrivacy(const CommonOptions& common, const PrivacyOptions& options,
                   std::ostream& log);
int RunEvalUtility(const CommonOptions& common, const UtilityOptions& options,
                   std::ostream& log);
int RunAnalyzeCsp(const CommonOptions& common, const CspOptions& options,
                  std::ostream& log);
int RunAblate(const CommonOptions& common, const AblateOptions& options,
              std::ostream& log);
int RunReport(const CommonOptions& common, const ReportOptions& options,
              std::ostream& log);

// utt_id, S, D, I, N, rate with a header line.
std::string FormatRateTable(const std::map<std::string, AlignmentCounts>& counts);
std::map<std::string, AlignmentCounts> LoadRateTable(const std::string& path);

}  // namespace csanon::cli

#endif  // CSANON_CLI_COMMANDS_H_
