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

#include "csanon/asv_eer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "json.hpp"

#include "csanon/error.h"
#include "csanon/text_io.h"

namespace csanon {

namespace {

double Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

std::vector<SpeakerEmbedding> LoadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings " + path.string());
  std::vector<SpeakerEmbedding> out;
  std::set<std::string> seen;
  size_t dim = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    SpeakerEmbedding emb;
    try {
      const nlohmann::json obj = nlohmann::json::parse(line);
      emb.utt_id = obj.at("utt_id").get<std::string>();
      emb.vector = obj.at("embedding").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
    if (emb.vector.empty()) throw ParseError(path.string(), line_no, "empty embedding");
    if (dim == 0) dim = emb.vector.size();
    if (emb.vector.size() != dim) {
      throw ParseError(path.string(), line_no,
                       "dimension " + std::to_string(emb.vector.size()) +
                           " differs from " + std::to_string(dim));
    }
    for (double x : emb.vector) {
      if (!std::isfinite(x)) throw ParseError(path.string(), line_no, "non-finite value");
    }
    if (Norm(emb.vector) == 0.0) throw ParseError(path.string(), line_no, "zero-norm embedding");
    if (!seen.insert(emb.utt_id).second) {
      throw ParseError(path.string(), line_no, "duplicate utt_id '" + emb.utt_id + "'");
    }
    out.push_back(std::move(emb));
  }
  return out;
}

std::vector<double> EnrollSpeaker(std::span<const std::vector<double>> embeddings,
                                  const std::string& speaker_id) {
  if (embeddings.empty()) throw Error("speaker '" + speaker_id + "' has no enrollment embeddings");
  const size_t dim = embeddings.front().size();
  std::vector<double> mean(dim, 0.0);
  for (const std::vector<double>& e : embeddings) {
    if (e.size() != dim) throw Error("speaker '" + speaker_id + "': embedding dimensions differ");
    for (size_t i = 0; i < dim; ++i) mean[i] += e[i];
  }
  for (double& x : mean) x /= static_cast<double>(embeddings.size());
  const double norm = Norm(mean);
  if (!(norm > 0.0)) throw Error("speaker '" + speaker_id + "': zero-norm enrollment mean");
  for (double& x : mean) x /= norm;
  return mean;
}

double CosineScore(std::span<const double> model, std::span<const double> trial) {
  if (model.size() != trial.size()) throw Error("cosine score: dimension mismatch");
  const double nm = Norm(model), nt = Norm(trial);
  if (!(nm > 0.0) || !(nt > 0.0)) throw Error("cosine score: zero-norm vector");
  double dot = 0.0;
  for (size_t i = 0; i < model.size(); ++i) dot += model[i] * trial[i];
  return std::clamp(dot / (nm * nt), -1.0, 1.0);
}

TrialList BuildTrials(const CorpusManifest& manifest, LangSetting setting,
                      Gender gender, std::optional<Split> split) {
  std::set<std::string> speakers;
  std::map<std::string, std::string> trial_speaker;
  for (const Utterance& u : manifest.utterances) {
    if (u.lang_setting != setting || u.gender != gender) continue;
    if (u.split == Split::kTrain || (split && u.split != *split)) continue;
    if (u.subset == Subset::kEnroll) speakers.insert(u.speaker_id);
    if (u.subset == Subset::kTrial) trial_speaker[u.utt_id] = u.speaker_id;
  }
  TrialList list;
  size_t targets = 0;
  for (const std::string& spk : speakers) {
    for (const auto& [utt, owner] : trial_speaker) {
      const bool target = owner == spk;
      targets += target ? 1 : 0;
      list.trials.push_back({spk, utt, target ? TrialLabel::kTarget : TrialLabel::kNontarget});
    }
  }
  const std::string where = std::string(LangSettingName(setting)) + "/" +
                            std::string(GenderName(gender));
  if (targets == 0) throw Error("no target trials for " + where);
  if (targets == list.trials.size()) throw Error("no non-target trials for " + where);
  return list;
}

EerResult ComputeEer(std::span<const ScoredTrial> scores) {
  EerResult result;
  std::vector<ScoredTrial> sorted(scores.begin(), scores.end());
  for (const ScoredTrial& s : sorted) {
    if (std::isnan(s.score)) throw Error("EER: NaN score");
    (s.label == TrialLabel::kTarget ? result.n_target : result.n_nontarget) += 1;
  }
  if (result.n_target == 0 || result.n_nontarget == 0) {
    throw Error("EER needs at least one target and one non-target score");
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredTrial& a, const ScoredTrial& b) { return a.score < b.score; });

  const auto n_t = static_cast<double>(result.n_target);
  const auto n_n = static_cast<double>(result.n_nontarget);
  int64_t targets_below = 0, nontargets_below = 0;
  double prev_frr = 0.0, prev_far = 1.0, prev_threshold = sorted.front().score;
  size_t i = 0;
  while (true) {
    const bool past_end = i == sorted.size();
    const double threshold = past_end ? std::numeric_limits<double>::infinity()
                                      : sorted[i].score;
    const double frr = targets_below / n_t;
    const double far = (result.n_nontarget - nontargets_below) / n_n;
    if (frr >= far) {
      if (frr == far) {
        result.eer = frr;
        result.threshold = past_end ? std::nextafter(prev_threshold, threshold) : threshold;
      } else {
        const double s = (prev_far - prev_frr) / ((frr - prev_frr) - (far - prev_far));
        result.eer = prev_frr + s * (frr - prev_frr);
        result.threshold = past_end
                               ? std::nextafter(prev_threshold, threshold)
                               : prev_threshold + s * (threshold - prev_threshold);
      }
      return result;
    }
    prev_frr = frr;
    prev_far = far;
    prev_threshold = threshold;
    // Advance past every score equal to this threshold.
    for (; i < sorted.size() && sorted[i].score == threshold; ++i) {
      (sorted[i].label == TrialLabel::kTarget ? targets_below : nontargets_below) += 1;
    }
  }
}

double GenderAveragedEer(const EerResult& female, const EerResult& male) {
  return 0.5 * (female.eer + male.eer);
}

std::string FormatScores(std::span<const ScoreRow> rows) {
  std::string out;
  char buf[64];
  for (const ScoreRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.9f", r.score);
    out += r.enroll_speaker + '\t' + r.utt_id + '\t' + buf + '\t' +
           (r.label == TrialLabel::kTarget ? "target" : "nontarget") + '\n';
  }
  return out;
}

std::vector<ScoreRow> LoadScores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scores " + path.string());
  std::vector<ScoreRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitTabs(line);
    if (f.size() != 4) throw ParseError(path.string(), line_no, "expected 4 columns");
    ScoreRow row{f[0], f[1], 0.0, TrialLabel::kNontarget};
    try {
      size_t used = 0;
      row.score = std::stod(f[2], &used);
      if (used != f[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(path.string(), line_no, "bad score '" + f[2] + "'");
    }
    if (f[3] == "target") {
      row.label = TrialLabel::kTarget;
    } else if (f[3] != "nontarget") {
      throw ParseError(path.string(), line_no, "bad label '" + f[3] + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace csanon
