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

// Corpus data model and the preparation steps that turn an annotated
// code-switching corpus into anonymization-ready utterances.

#ifndef CSANON_CORPUS_H_
#define CSANON_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "csanon/audio.h"
#include "csanon/transcript.h"

namespace csanon {

enum class Gender { kF, kM };
enum class Split { kTrain, kDev, kTest };
enum class Subset { kEnroll, kTrial, kUnassigned };
enum class LangSetting { kEn, kZh, kEs, kCs, kUnknown };

std::string_view GenderName(Gender g);
std::string_view SplitName(Split s);
std::string_view SubsetName(Subset s);
std::string_view LangSettingName(LangSetting s);
std::optional<Gender> ParseGender(std::string_view name);
std::optional<Split> ParseSplit(std::string_view name);
std::optional<Subset> ParseSubset(std::string_view name);
std::optional<LangSetting> ParseLangSetting(std::string_view name);

struct Utterance {
  std::string utt_id;
  std::string speaker_id;
  Gender gender = Gender::kF;
  Split split = Split::kTest;
  Subset subset = Subset::kUnassigned;
  LangSetting lang_setting = LangSetting::kUnknown;
  std::string audio_path;
  std::string transcript;
  std::set<std::string> annotations;
  double duration_s = 0.0;

  bool HasFlag(const std::string& flag) const {
    return annotations.count(flag) > 0;
  }
  bool operator==(const Utterance&) const = default;
};

struct CorpusManifest {
  std::string name;
  std::vector<Utterance> utterances;
};

// One JSON object per line. utt_id, speaker_id, gender and split are
// required; other fields default (subset=unassigned, lang_setting=unknown).
// Unknown fields are ignored. Errors carry the 1-based line number.
CorpusManifest ParseManifest(std::istream& in, const std::string& source);
CorpusManifest LoadManifest(const std::filesystem::path& path);

std::string FormatManifestLine(const Utterance& utt);
std::string FormatManifest(const CorpusManifest& manifest);
void SaveManifest(const std::filesystem::path& path,
                  const CorpusManifest& manifest);

struct CleanupRules {
  // Matched against the lowercased token.
  std::unordered_set<std::string> particles;
  std::vector<std::regex> patterns;

  static CleanupRules Load(const std::filesystem::path& particle_file,
                           const std::filesystem::path& pattern_file);
};

// Removes pattern matches, drops particle tokens, collapses whitespace.
std::string CleanTranscript(std::string_view raw, const CleanupRules& rules);

// CS when at least two of ENG/CMN/SPA occur; the single language's setting
// when one occurs; matrix otherwise. OTHER and NEUTRAL tokens do not count.
LangSetting PartitionLanguageSetting(const Transcript& tagged,
                                     LangSetting matrix);

struct UtteranceAudio {
  Utterance utt;
  AudioBuffer audio;
};

struct ConcatOptions {
  double min_duration_s = 2.0;
  double loudness_tol_db = 3.0;
  double gap_s = 0.1;
};

struct ConcatResult {
  std::vector<UtteranceAudio> utterances;
  // Short utterances that found no partner to reach the minimum duration.
  std::vector<std::string> dropped;
};

// Within each (speaker, language setting) group, short utterances are taken
// in ascending duration order. Each seeds a merge that repeatedly appends the
// next unused short whose RMS level is within loudness_tol_db of the seed's
// (same sample rate), separated by gap_s of silence, until the minimum is
// reached. Merged ids and transcripts are joined in merge order ('+' and
// ' '); annotations are unioned. Groups that stay short are dropped.
// Output is sorted by utt_id.
ConcatResult ConcatShortUtterances(std::vector<UtteranceAudio> utts,
                                   const ConcatOptions& options);

struct EnrollOptions {
  int n_enroll_min = 4;
  int n_enroll_max = 10;
  uint64_t seed = 0;
};

// count / 4 clamped to [n_min, n_max].
int EnrollCount(int count, int n_min, int n_max);

// For every dev/test (speaker, language setting) group, a seeded random
// choice of EnrollCount utterances becomes enroll and the rest trial. Train
// utterances are reset to unassigned. The choice depends only on the seed
// and the group's utt_ids. Throws Error naming the speaker when a group has
// n_enroll_min or fewer utterances.
CorpusManifest SplitEnrollTrial(CorpusManifest manifest,
                                const EnrollOptions& options);

}  // namespace csanon

#endif  // CSANON_CORPUS_H_
