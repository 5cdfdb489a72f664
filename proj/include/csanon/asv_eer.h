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

// Speaker-verification privacy metric over externally computed embeddings:
// enrollment, cosine scoring, trial construction and equal error rate.

#ifndef CSANON_ASV_EER_H_
#define CSANON_ASV_EER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "csanon/corpus.h"

namespace csanon {

struct SpeakerEmbedding {
  std::string utt_id;
  std::vector<double> vector;
};

// JSONL rows {"utt_id": ..., "embedding": [...]}. The dimension of the first
// row is enforced on the rest; vectors must be finite with non-zero norm.
std::vector<SpeakerEmbedding> LoadEmbeddings(const std::filesystem::path& path);

// Mean of the embeddings, length-normalized. speaker_id only labels errors.
std::vector<double> EnrollSpeaker(std::span<const std::vector<double>> embeddings,
                                  const std::string& speaker_id);

// Cosine similarity; throws Error on zero norm or a dimension mismatch.
double CosineScore(std::span<const double> model, std::span<const double> trial);

enum class TrialLabel { kTarget, kNontarget };

struct Trial {
  std::string enroll_speaker;
  std::string utt_id;
  TrialLabel label = TrialLabel::kNontarget;
};

struct TrialList {
  std::vector<Trial> trials;
};

// Every enroll speaker of the given gender and setting against every trial
// utterance of that gender and setting, ordered by speaker then utt_id.
// With split set only that split is used. Throws Error if either label
// class would be empty.
TrialList BuildTrials(const CorpusManifest& manifest, LangSetting setting,
                      Gender gender, std::optional<Split> split = std::nullopt);

struct ScoredTrial {
  double score = 0.0;
  TrialLabel label = TrialLabel::kNontarget;
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
  int64_t n_target = 0;
  int64_t n_nontarget = 0;
};

// FRR(t) is the fraction of targets scoring below t, FAR(t) the fraction of
// non-targets scoring at or above t. Operating points are taken at each
// distinct score and above the maximum; the EER is read at the first point
// where FRR >= FAR, interpolating linearly from the previous point when the
// two are not equal there.
EerResult ComputeEer(std::span<const ScoredTrial> scores);

double GenderAveragedEer(const EerResult& female, const EerResult& male);

struct ScoreRow {
  std::string enroll_speaker;
  std::string utt_id;
  double score = 0.0;
  TrialLabel label = TrialLabel::kNontarget;
};

// TSV: enroll_speaker, utt_id, score, label (target|nontarget).
std::string FormatScores(std::span<const ScoreRow> rows);
std::vector<ScoreRow> LoadScores(const std::filesystem::path& path);

}  // namespace csanon

#endif  // CSANON_ASV_EER_H_
