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

#include "cli/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "cli/parallel.h"
#include "cli/report.h"
#include "csanon/asv_eer.h"
#include "csanon/audio.h"
#include "csanon/cs_analysis.h"
#include "csanon/error.h"
#include "csanon/text_io.h"
#include "csanon/utf8.h"

namespace csanon::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr LangSetting kSettingOrder[] = {LangSetting::kEn, LangSetting::kZh,
                                         LangSetting::kEs, LangSetting::kCs,
                                         LangSetting::kUnknown};
constexpr Split kSplitOrder[] = {Split::kTrain, Split::kDev, Split::kTest};
constexpr Gender kGenderOrder[] = {Gender::kF, Gender::kM};

fs::path ManifestDir(const std::string& manifest) {
  const fs::path dir = fs::path(manifest).parent_path();
  return dir.empty() ? fs::path(".") : dir;
}

fs::path ResolveAudio(const fs::path& root, const std::string& audio_path) {
  const fs::path p(audio_path);
  return p.is_absolute() ? p : root / p;
}

void WriteJson(const fs::path& path, const Json& json) {
  WriteTextFile(path, json.dump(2) + "\n");
}

Json ReadJson(const fs::path& path) {
  try {
    return Json::parse(ReadTextFile(path));
  } catch (const Json::exception& e) {
    throw Error("bad JSON in " + path.string() + ": " + e.what());
  }
}

std::string JoinIds(const std::vector<std::string>& ids, size_t limit = 10) {
  std::string out;
  for (size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i > 0) out += ", ";
    out += ids[i];
  }
  if (ids.size() > limit) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

Lang ParseMatrixLang(const std::string& name) {
  std::string upper;
  for (char c : name) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  const std::optional<Lang> lang = ParseLang(upper);
  if (!lang || (*lang != Lang::kEng && *lang != Lang::kCmn && *lang != Lang::kSpa)) {
    throw Error("matrix language must be eng, cmn or spa, got '" + name + "'");
  }
  return *lang;
}

LangSetting SettingFor(Lang lang) {
  switch (lang) {
    case Lang::kEng: return LangSetting::kEn;
    case Lang::kCmn: return LangSetting::kZh;
    case Lang::kSpa: return LangSetting::kEs;
    default: return LangSetting::kUnknown;
  }
}

std::vector<LanguageLexicon> LoadLexicons(const std::string& en, const std::string& es) {
  std::vector<LanguageLexicon> lexicons;
  if (!en.empty()) lexicons.push_back(LanguageLexicon::Load(en, Lang::kEng));
  if (!es.empty()) lexicons.push_back(LanguageLexicon::Load(es, Lang::kSpa));
  return lexicons;
}

// True when 16-bit PCM stores the buffer without loss.
bool FitsPcm16(const AudioBuffer& audio) {
  for (float x : audio.samples) {
    const double scaled = static_cast<double>(x) * 32768.0;
    if (scaled != std::round(scaled) || scaled < -32768.0 || scaled > 32767.0) return false;
  }
  return true;
}

std::string Fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::vector<std::string> SplitList(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const size_t b = item.find_first_not_of(' ');
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(' ') - b + 1));
  }
  return out;
}

Json CountsJson(const AlignmentCounts& c) {
  Json j;
  j["S"] = c.substitutions;
  j["D"] = c.deletions;
  j["I"] = c.insertions;
  j["N"] = c.ref_length;
  return j;
}


// ---------------------------------------------------------------- prep

struct SubsetCell {
  int64_t utterances = 0;
  std::set<std::string> speakers;
};

std::string PrepTable(const CorpusManifest& manifest) {
  std::map<std::pair<Split, Gender>, std::map<std::pair<LangSetting, Subset>, int64_t>> cells;
  std::map<std::pair<Split, Gender>, std::set<std::string>> speakers;
  std::set<LangSetting> settings;
  std::set<std::pair<LangSetting, Subset>> columns;
  for (const Utterance& u : manifest.utterances) {
    ++cells[{u.split, u.gender}][{u.lang_setting, u.subset}];
    speakers[{u.split, u.gender}].insert(u.speaker_id);
    columns.insert({u.lang_setting, u.subset});
  }
  std::vector<std::pair<LangSetting, Subset>> ordered;
  std::vector<std::string> header{"Split", "Speakers"};
  for (LangSetting s : kSettingOrder) {
    for (Subset sub : {Subset::kEnroll, Subset::kTrial, Subset::kUnassigned}) {
      if (columns.count({s, sub}) == 0) continue;
      ordered.emplace_back(s, sub);
      header.push_back(std::string(LangSettingName(s)) + " " + std::string(SubsetName(sub)));
    }
  }
  TextTable table(header);
  for (Split split : kSplitOrder) {
    for (Gender g : kGenderOrder) {
      const auto it = cells.find({split, g});
      if (it == cells.end()) continue;
      std::vector<std::string> row{std::string(SplitName(split)) + " " +
                                       std::string(GenderName(g)),
                                   FormatCount(static_cast<int64_t>(speakers[{split, g}].size()))};
      for (const auto& key : ordered) {
        const auto c = it->second.find(key);
        row.push_back(c == it->second.end() ? "0" : FormatCount(c->second));
      }
      table.AddRow(row);
    }
  }
  return table.Render();
}

Json PrepCounts(const CorpusManifest& manifest) {
  std::map<std::tuple<Split, Gender, LangSetting, Subset>, SubsetCell> cells;
  for (const Utterance& u : manifest.utterances) {
    SubsetCell& c = cells[{u.split, u.gender, u.lang_setting, u.subset}];
    ++c.utterances;
    c.speakers.insert(u.speaker_id);
  }
  Json out = Json::array();
  for (const auto& [key, cell] : cells) {
    Json row;
    row["split"] = SplitName(std::get<0>(key));
    row["gender"] = GenderName(std::get<1>(key));
    row["lang_setting"] = LangSettingName(std::get<2>(key));
    row["subset"] = SubsetName(std::get<3>(key));
    row["speakers"] = cell.speakers.size();
    row["utterances"] = cell.utterances;
    out.push_back(row);
  }
  return out;
}

}  // namespace

int RunPrep(const CommonOptions& common, const PrepOptions& options, std::ostream& log) {
  if (options.max_duration_s < options.concat.min_duration_s) {
    throw Error("max duration must not be below the minimum duration");
  }
  const CorpusManifest input = LoadManifest(common.manifest);
  const fs::path audio_root =
      options.audio_root.empty() ? ManifestDir(common.manifest) : fs::path(options.audio_root);
  const CleanupRules rules = CleanupRules::Load(options.particles, options.patterns);
  const std::vector<LanguageLexicon> lexicons =
      LoadLexicons(options.lexicon_en, options.lexicon_es);
  const Lang matrix = ParseMatrixLang(options.matrix_lang);
  const fs::path out = common.out;

  std::vector<std::string> overlap, empty, too_long;
  std::vector<Utterance> kept;
  for (Utterance u : input.utterances) {
    if (u.HasFlag("overlap")) {
      overlap.push_back(u.utt_id);
      continue;
    }
    u.transcript = CleanTranscript(u.transcript, rules);
    if (u.transcript.empty()) {
      empty.push_back(u.utt_id);
      continue;
    }
    const Transcript tagged = TagTokens(TokenizeMixed(u.transcript, u.utt_id), lexicons, matrix);
    u.lang_setting = PartitionLanguageSetting(tagged, SettingFor(matrix));
    kept.push_back(std::move(u));
  }

  std::vector<AudioBuffer> audio(kept.size());
  std::vector<std::string> errors(kept.size());
  ParallelFor(kept.size(), common.jobs, [&](size_t i) {
    try {
      if (kept[i].audio_path.empty()) throw Error("no audio_path");
      audio[i] = ReadWav(ResolveAudio(audio_root, kept[i].audio_path)).audio;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  Json audio_errors = Json::array();
  std::map<Split, std::vector<UtteranceAudio>> by_split;
  for (size_t i = 0; i < kept.size(); ++i) {
    if (!errors[i].empty()) {
      audio_errors.push_back({{"utt_id", kept[i].utt_id}, {"error", errors[i]}});
      log << "prep: skipping " << kept[i].utt_id << ": " << errors[i] << "\n";
      continue;
    }
    if (audio[i].DurationSeconds() > options.max_duration_s) {
      too_long.push_back(kept[i].utt_id);
      continue;
    }
    by_split[kept[i].split].push_back({std::move(kept[i]), std::move(audio[i])});
  }

  std::vector<UtteranceAudio> prepared;
  std::vector<std::string> too_short;
  for (auto& [split, utts] : by_split) {
    ConcatResult merged = ConcatShortUtterances(std::move(utts), options.concat);
    for (UtteranceAudio& ua : merged.utterances) prepared.push_back(std::move(ua));
    too_short.insert(too_short.end(), merged.dropped.begin(), merged.dropped.end());
  }
  std::sort(prepared.begin(), prepared.end(), [](const auto& a, const auto& b) {
    return a.utt.utt_id < b.utt.utt_id;
  });
  std::sort(too_short.begin(), too_short.end());

  std::set<std::string> input_ids;
  for (const Utterance& u : input.utterances) input_ids.insert(u.utt_id);
  CorpusManifest manifest;
  manifest.name = input.name;
  std::vector<std::string> merged_ids;
  for (UtteranceAudio& ua : prepared) {
    if (input_ids.count(ua.utt.utt_id) == 0) merged_ids.push_back(ua.utt.utt_id);
    ua.utt.audio_path = "audio/" + ua.utt.utt_id + ".wav";
    ua.utt.duration_s = ua.audio.DurationSeconds();
    manifest.utterances.push_back(ua.utt);
  }
  EnrollOptions enroll{options.n_enroll_min, options.n_enroll_max, common.seed};
  manifest = SplitEnrollTrial(std::move(manifest), enroll);

  ParallelFor(prepared.size(), common.jobs, [&](size_t i) {
    const AudioBuffer& a = prepared[i].audio;
    WriteWav(out / manifest.utterances[i].audio_path, a,
             FitsPcm16(a) ? SampleFormat::kPcm16 : SampleFormat::kFloat32);
  });
  SaveManifest(out / "manifest.jsonl", manifest);

  Json report;
  report["manifest"] = common.manifest;
  report["n_input"] = input.utterances.size();
  report["n_output"] = manifest.utterances.size();
  report["excluded"] = {{"overlap", overlap},
                        {"empty_transcript", empty},
                        {"too_long", too_long},
                        {"too_short", too_short}};
  report["audio_errors"] = audio_errors;
  report["merged"] = merged_ids;
  report["counts"] = PrepCounts(manifest);
  WriteJson(out / "prep_report.json", report);
  WriteTextFile(out / "prep_table.txt", PrepTable(manifest));

  log << "prep: " << input.utterances.size() << " in, " << manifest.utterances.size()
      << " out (" << overlap.size() << " overlap, " << empty.size() << " empty, "
      << too_long.size() << " too long, " << too_short.size() << " too short, "
      << audio_errors.size() << " unreadable)\n";
  return audio_errors.empty() ? kExitOk : kExitIncomplete;
}

// ---------------------------------------------------------------- anonymize

int RunAnonymize(const CommonOptions& common, const AnonymizeOptions& options,
                 std::ostream& log) {
  const CorpusManifest input = LoadManifest(common.manifest);
  McAdamsConfig cfg = options.mcadams;
  cfg.seed = common.seed;
  cfg.Validate();
  const fs::path audio_root =
      options.audio_root.empty() ? ManifestDir(common.manifest) : fs::path(options.audio_root);
  const fs::path out = common.out;

  std::vector<Utterance> utts = input.utterances;
  std::sort(utts.begin(), utts.end(),
            [](const Utterance& a, const Utterance& b) { return a.utt_id < b.utt_id; });

  std::set<std::string> targets;
  std::vector<std::string> rel_paths(utts.size());
  for (size_t i = 0; i < utts.size(); ++i) {
    const fs::path p = fs::path(utts[i].audio_path).lexically_normal();
    const bool mirror = !p.empty() && p.is_relative() && *p.begin() != "..";
    rel_paths[i] = mirror ? p.generic_string() : "audio/" + utts[i].utt_id + ".wav";
    if (!targets.insert(rel_paths[i]).second) {
      throw Error("two utterances map to the output file " + rel_paths[i]);
    }
  }

  struct Outcome {
    std::string error;
    AnonymizationResult result;
  };
  std::vector<Outcome> outcomes(utts.size());
  ParallelFor(utts.size(), common.jobs, [&](size_t i) {
    Outcome& o = outcomes[i];
    try {
      const WavFile wav = ReadWav(ResolveAudio(audio_root, utts[i].audio_path));
      o.result = McAdamsAnonymize(wav.audio, cfg, utts[i].utt_id);
      WriteWav(out / rel_paths[i], o.result.audio, wav.format);
      o.result.audio.samples.clear();
      o.result.audio.samples.shrink_to_fit();
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  });

  CorpusManifest manifest;
  manifest.name = input.name;
  std::string tsv = "utt_id\talpha\tsample_rate_hz\tframes\tsilent_frames\tfailed_frames\tpeak_normalized\n";
  Json skipped = Json::array();
  int64_t frames = 0, silent = 0, failed = 0, normalized = 0;
  std::map<int, int64_t> rates;
  for (size_t i = 0; i < utts.size(); ++i) {
    const Outcome& o = outcomes[i];
    if (!o.error.empty()) {
      skipped.push_back({{"utt_id", utts[i].utt_id}, {"error", o.error}});
      log << "anonymize: skipping " << utts[i].utt_id << ": " << o.error << "\n";
      continue;
    }
    const AnonymizationResult& r = o.result;
    tsv += utts[i].utt_id + "\t" + Fixed(r.alpha, 9) + "\t" +
           std::to_string(r.audio.sample_rate_hz) + "\t" + std::to_string(r.frames) + "\t" +
           std::to_string(r.silent_frames) + "\t" + std::to_string(r.failed_frames) + "\t" +
           (r.peak_normalized ? "1" : "0") + "\n";
    frames += r.frames;
    silent += r.silent_frames;
    failed += r.failed_frames;
    normalized += r.peak_normalized ? 1 : 0;
    ++rates[r.audio.sample_rate_hz];
    Utterance u = utts[i];
    u.audio_path = rel_paths[i];
    manifest.utterances.push_back(std::move(u));
  }
  SaveManifest(out / "manifest.jsonl", manifest);
  WriteTextFile(out / "anonymize_log.tsv", tsv);

  Json report;
  report["manifest"] = common.manifest;
  Json config;
  config["alpha"] = cfg.alpha;
  if (cfg.randomize_alpha) {
    config["randomize_alpha"] = {cfg.randomize_alpha->first, cfg.randomize_alpha->second};
  } else {
    config["randomize_alpha"] = nullptr;
  }
  config["frame_ms"] = cfg.frame_ms;
  config["hop_ms"] = cfg.hop_ms;
  config["lpc_order"] = cfg.lpc_order;
  config["imag_eps"] = cfg.imag_eps;
  config["seed"] = cfg.seed;
  report["config"] = config;
  report["n_input"] = utts.size();
  report["n_written"] = manifest.utterances.size();
  report["skipped"] = skipped;
  report["frames"] = frames;
  report["silent_frames"] = silent;
  report["copy_through_frames"] = failed;
  report["peak_normalized_utterances"] = normalized;
  Json rate_json = Json::object();
  for (const auto& [rate, n] : rates) rate_json[std::to_string(rate)] = n;
  report["sample_rates_hz"] = rate_json;
  report["resampling"] = "none; audio processed at its native rate";
  WriteJson(out / "anonymize_report.json", report);

  log << "anonymize: " << manifest.utterances.size() << " of " << utts.size()
      << " utterances written, " << failed << " copy-through frames\n";
  return skipped.empty() ? kExitOk : kExitIncomplete;
}

// ---------------------------------------------------------------- eval-privacy

namespace {

Json EerJson(const EerResult& r) {
  Json j;
  j["eer"] = r.eer;
  j["threshold"] = r.threshold;
  j["n_target"] = r.n_target;
  j["n_nontarget"] = r.n_nontarget;
  return j;
}

struct GenderEers {
  std::map<Gender, EerResult> by_gender;

  // Unweighted mean over the genders present.
  double Average() const {
    if (by_gender.size() == 2) {
      return GenderAveragedEer(by_gender.at(Gender::kF), by_gender.at(Gender::kM));
    }
    return by_gender.begin()->second.eer;
  }

  Json ToJson() const {
    Json genders = Json::object();
    for (const auto& [g, r] : by_gender) genders[std::string(GenderName(g))] = EerJson(r);
    return genders;
  }
};

void AddPrivacyRow(TextTable* table, const std::string& label, const GenderEers& e) {
  int64_t targets = 0, nontargets = 0;
  std::vector<std::string> row{label};
  for (Gender g : kGenderOrder) {
    const auto it = e.by_gender.find(g);
    row.push_back(it == e.by_gender.end() ? "-" : FormatPercent(it->second.eer));
    if (it != e.by_gender.end()) {
      targets += it->second.n_target;
      nontargets += it->second.n_nontarget;
    }
  }
  row.push_back(FormatPercent(e.Average()));
  row.push_back(FormatCount(targets));
  row.push_back(FormatCount(nontargets));
  table->AddRow(row);
}

}  // namespace

int RunEvalPrivacy(const CommonOptions& common, const PrivacyOptions& options,
                   std::ostream& log) {
  const CorpusManifest input = LoadManifest(common.manifest);
  std::map<std::string, std::vector<double>> embeddings;
  for (SpeakerEmbedding& e : LoadEmbeddings(options.embeddings)) {
    embeddings[e.utt_id] = std::move(e.vector);
  }
  const fs::path out = common.out;

  CorpusManifest usable;
  std::vector<std::string> missing;
  for (const Utterance& u : input.utterances) {
    if (u.split == Split::kTrain || u.subset == Subset::kUnassigned) continue;
    if (embeddings.count(u.utt_id) == 0) {
      missing.push_back(u.utt_id);
      continue;
    }
    usable.utterances.push_back(u);
  }
  std::sort(missing.begin(), missing.end());
  if (!missing.empty() && !options.allow_partial) {
    throw Error("no embedding for " + std::to_string(missing.size()) +
                " enroll/trial utterances: " + JoinIds(missing));
  }

  std::set<std::tuple<Split, LangSetting, Gender>> present;
  for (const Utterance& u : usable.utterances) present.insert({u.split, u.lang_setting, u.gender});

  Json results = Json::array(), pooled_json = Json::array(), skipped = Json::array();
  TextTable table({"Split Setting", "EER F (%)", "EER M (%)", "EER avg (%)", "Targets",
                   "Non-targets"});
  bool incomplete = !missing.empty();
  for (Split split : kSplitOrder) {
    std::map<Gender, std::vector<ScoredTrial>> pooled;
    for (LangSetting setting : kSettingOrder) {
      GenderEers eers;
      for (Gender gender : kGenderOrder) {
        if (present.count({split, setting, gender}) == 0) continue;
        const std::string where = std::string(SplitName(split)) + " " +
                                  std::string(LangSettingName(setting)) + " " +
                                  std::string(GenderName(gender));
        TrialList trials;
        try {
          trials = BuildTrials(usable, setting, gender, split);
        } catch (const Error& e) {
          skipped.push_back({{"split", SplitName(split)},
                             {"lang_setting", LangSettingName(setting)},
                             {"gender", GenderName(gender)},
                             {"reason", e.what()}});
          log << "eval-privacy: skipping " << where << ": " << e.what() << "\n";
          incomplete = true;
          continue;
        }
        std::map<std::string, std::vector<std::vector<double>>> enroll;
        for (const Utterance& u : usable.utterances) {
          if (u.split == split && u.lang_setting == setting && u.gender == gender &&
              u.subset == Subset::kEnroll) {
            enroll[u.speaker_id].push_back(embeddings.at(u.utt_id));
          }
        }
        std::map<std::string, std::vector<double>> models;
        for (const auto& [spk, embs] : enroll) models[spk] = EnrollSpeaker(embs, spk);

        std::vector<ScoreRow> rows;
        std::vector<ScoredTrial> scored;
        for (const Trial& t : trials.trials) {
          const double s = CosineScore(models.at(t.enroll_speaker), embeddings.at(t.utt_id));
          rows.push_back({t.enroll_speaker, t.utt_id, s, t.label});
          scored.push_back({s, t.label});
        }
        WriteTextFile(out / "scores" /
                          (std::string(SplitName(split)) + "_" +
                           std::string(LangSettingName(setting)) + "_" +
                           std::string(GenderName(gender)) + ".tsv"),
                      FormatScores(rows));
        eers.by_gender[gender] = ComputeEer(scored);
        auto& pool = pooled[gender];
        pool.insert(pool.end(), scored.begin(), scored.end());
      }
      if (eers.by_gender.empty()) continue;
      Json row;
      row["split"] = SplitName(split);
      row["lang_setting"] = LangSettingName(setting);
      row["genders"] = eers.ToJson();
      row["eer_avg"] = eers.Average();
      results.push_back(row);
      AddPrivacyRow(&table, std::string(SplitName(split)) + " " +
                                std::string(LangSettingName(setting)), eers);
    }
    if (pooled.empty()) continue;
    GenderEers all;
    for (const auto& [gender, scored] : pooled) all.by_gender[gender] = ComputeEer(scored);
    Json row;
    row["split"] = SplitName(split);
    row["genders"] = all.ToJson();
    row["eer_avg"] = all.Average();
    pooled_json.push_back(row);
    table.AddRule();
    AddPrivacyRow(&table, std::string(SplitName(split)) + " ALL", all);
    table.AddRule();
  }
  if (results.empty()) throw Error("no enroll/trial structure to evaluate");

  Json report;
  report["label"] = options.label;
  report["manifest"] = common.manifest;
  report["embeddings"] = options.embeddings;
  report["missing_embeddings"] = missing;
  report["results"] = results;
  report["pooled"] = pooled_json;
  report["skipped"] = skipped;
  WriteJson(out / "privacy.json", report);
  WriteTextFile(out / "privacy_table.txt",
                "Privacy (" + options.label + "): EER, higher is better\n" + table.Render());
  log << "eval-privacy: " << results.size() << " split/setting groups scored\n";
  return incomplete ? kExitIncomplete : kExitOk;
}

// ---------------------------------------------------------------- eval-utility

std::string FormatRateTable(const std::map<std::string, AlignmentCounts>& counts) {
  std::string out = "utt_id\tS\tD\tI\tN\trate\n";
  for (const auto& [id, c] : counts) {
    out += id + "\t" + std::to_string(c.substitutions) + "\t" + std::to_string(c.deletions) +
           "\t" + std::to_string(c.insertions) + "\t" + std::to_string(c.ref_length) + "\t" +
           Fixed(MakeReport(RateKind::kMer, c).rate, 6) + "\n";
  }
  return out;
}

std::map<std::string, AlignmentCounts> LoadRateTable(const std::string& path) {
  const std::vector<std::string> lines = SplitList(ReadTextFile(path), '\n');
  std::map<std::string, AlignmentCounts> out;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (i == 0 && line.rfind("utt_id\t", 0) == 0) continue;
    const std::vector<std::string> f = SplitTabs(line);
    if (f.size() < 5) throw ParseError(path, static_cast<int>(i + 1), "expected utt_id, S, D, I, N");
    AlignmentCounts c;
    try {
      c.substitutions = std::stoll(f[1]);
      c.deletions = std::stoll(f[2]);
      c.insertions = std::stoll(f[3]);
      c.ref_length = std::stoll(f[4]);
    } catch (const std::exception&) {
      throw ParseError(path, static_cast<int>(i + 1), "non-integer count");
    }
    if (c.substitutions < 0 || c.deletions < 0 || c.insertions < 0 || c.ref_length <= 0 ||
        c.substitutions + c.deletions > c.ref_length) {
      throw ParseError(path, static_cast<int>(i + 1), "inconsistent counts");
    }
    if (!out.emplace(f[0], c).second) {
      throw ParseError(path, static_cast<int>(i + 1), "duplicate id '" + f[0] + "'");
    }
  }
  return out;
}

namespace {

std::map<std::string, std::string> LoadKeyed(const std::string& path) {
  std::map<std::string, std::string> out;
  for (auto& [k, v] : ReadKeyedTsv(path)) out.emplace(std::move(k), std::move(v));
  return out;
}

Json RateRows(const std::map<std::string, AlignmentCounts>& counts,
              const std::map<std::string, LangSetting>& settings, RateKind kind,
              TextTable* table, const std::string& name) {
  std::map<LangSetting, std::vector<AlignmentCounts>> grouped;
  std::vector<AlignmentCounts> all;
  for (const auto& [id, c] : counts) {
    grouped[settings.at(id)].push_back(c);
    all.push_back(c);
  }
  Json rows = Json::array();
  auto add = [&](const std::string& label, const std::vector<AlignmentCounts>& group) {
    const ErrorRateReport r = CorpusRate(group, kind);
    Json row;
    row["lang_setting"] = label;
    row["n_utterances"] = group.size();
    row["counts"] = CountsJson(r.counts);
    row["rate"] = r.rate;
    rows.push_back(row);
    table->AddRow({name + " " + label, FormatCount(static_cast<int64_t>(group.size())),
                   FormatCount(r.counts.substitutions), FormatCount(r.counts.deletions),
                   FormatCount(r.counts.insertions), FormatCount(r.counts.ref_length),
                   FormatPercent(r.rate)});
  };
  for (LangSetting s : kSettingOrder) {
    const auto it = grouped.find(s);
    if (it != grouped.end()) add(std::string(LangSettingName(s)), it->second);
  }
  if (!all.empty()) add("ALL", all);
  return rows;
}

}  // namespace

int RunEvalUtility(const CommonOptions& common, const UtilityOptions& options,
                   std::ostream& log) {
  const CorpusManifest input = LoadManifest(common.manifest);
  std::optional<Split> split;
  if (options.split != "all") {
    split = ParseSplit(options.split);
    if (!split) throw Error("unknown split '" + options.split + "'");
  }
  if (options.phones_ref.empty() != options.phones_hyp.empty()) {
    throw Error("phone evaluation needs both reference and hypothesis phone files");
  }
  const bool with_phones = !options.phones_ref.empty();
  const std::map<std::string, std::string> hyps = LoadKeyed(options.hyps);
  std::map<std::string, std::string> phones_ref, phones_hyp;
  if (with_phones) {
    phones_ref = LoadKeyed(options.phones_ref);
    phones_hyp = LoadKeyed(options.phones_hyp);
  }
  const PinyinTable table = PinyinTable::Load(options.pinyin);
  const PinyinMode mode =
      options.numbered_tones ? PinyinMode::kNumberedTone : PinyinMode::kToneless;
  const fs::path out = common.out;

  std::vector<Utterance> utts;
  for (const Utterance& u : input.utterances) {
    if (!split || u.split == *split) utts.push_back(u);
  }
  std::sort(utts.begin(), utts.end(),
            [](const Utterance& a, const Utterance& b) { return a.utt_id < b.utt_id; });

  enum class Status { kScored, kEmptyRef, kMissing };
  struct Item {
    Status mer = Status::kMissing;
    Status per = Status::kMissing;
    AlignmentCounts mer_counts, per_counts;
    size_t unmapped = 0;
  };
  std::vector<Item> items(utts.size());
  ParallelFor(utts.size(), common.jobs, [&](size_t i) {
    Item& item = items[i];
    const std::string& id = utts[i].utt_id;
    const std::vector<std::string> ref = MixedUnits(utts[i].transcript, table, mode, &item.unmapped);
    const auto hyp = hyps.find(id);
    if (ref.empty()) {
      item.mer = Status::kEmptyRef;
    } else if (hyp != hyps.end()) {
      item.mer_counts = Align(ref, MixedUnits(hyp->second, table, mode, &item.unmapped));
      item.mer = Status::kScored;
    }
    if (!with_phones) return;
    const auto pr = phones_ref.find(id);
    const auto ph = phones_hyp.find(id);
    if (pr == phones_ref.end() || ph == phones_hyp.end()) return;
    const std::vector<std::string> rp = utf8::SplitWhitespace(pr->second);
    if (rp.empty()) {
      item.per = Status::kEmptyRef;
      return;
    }
    const std::vector<std::string> hp = utf8::SplitWhitespace(ph->second);
    item.per_counts = Align(rp, hp);
    item.per = Status::kScored;
  });

  std::map<std::string, AlignmentCounts> mer, per;
  std::map<std::string, LangSetting> settings;
  std::vector<std::string> mer_missing, mer_empty, per_missing, per_empty;
  size_t unmapped = 0;
  for (size_t i = 0; i < utts.size(); ++i) {
    const std::string& id = utts[i].utt_id;
    settings[id] = utts[i].lang_setting;
    unmapped += items[i].unmapped;
    switch (items[i].mer) {
      case Status::kScored: mer[id] = items[i].mer_counts; break;
      case Status::kEmptyRef: mer_empty.push_back(id); break;
      case Status::kMissing: mer_missing.push_back(id); break;
    }
    if (!with_phones) continue;
    switch (items[i].per) {
      case Status::kScored: per[id] = items[i].per_counts; break;
      case Status::kEmptyRef: per_empty.push_back(id); break;
      case Status::kMissing: per_missing.push_back(id); break;
    }
  }
  if (!options.allow_partial) {
    if (!mer_missing.empty()) {
      throw Error("no hypothesis for " + std::to_string(mer_missing.size()) +
                  " utterances: " + JoinIds(mer_missing));
    }
    if (!per_missing.empty()) {
      throw Error("no phone sequences for " + std::to_string(per_missing.size()) +
                  " utterances: " + JoinIds(per_missing));
    }
  }
  if (mer.empty()) throw Error("no utterance could be scored");

  TextTable text({"Metric Setting", "Utts", "S", "D", "I", "N", "Rate (%)"});
  Json report;
  report["label"] = options.label;
  report["manifest"] = common.manifest;
  report["hyps"] = options.hyps;
  report["split"] = options.split;
  report["pinyin_mode"] = options.numbered_tones ? "numbered_tone" : "toneless";
  report["aggregation"] = "pooled";
  report["units"] = "latin words, one pinyin syllable per han character";
  report["unmapped_han"] = unmapped;
  report["mer"] = RateRows(mer, settings, RateKind::kMer, &text, "MER");
  report["excluded_empty_reference"] = mer_empty;
  report["missing_hyps"] = mer_missing;
  WriteTextFile(out / "mer_per_utt.tsv", FormatRateTable(mer));
  if (with_phones) {
    if (per.empty()) throw Error("no utterance could be scored for PER");
    text.AddRule();
    report["per"] = RateRows(per, settings, RateKind::kPer, &text, "PER");
    report["per_excluded_empty_reference"] = per_empty;
    report["missing_phones"] = per_missing;
    WriteTextFile(out / "per_per_utt.tsv", FormatRateTable(per));
  } else {
    report["per"] = nullptr;
  }
  WriteJson(out / "utility.json", report);
  WriteTextFile(out / "utility_table.txt",
                "Utility (" + options.label + "): error rates, lower is better\n" + text.Render());
  log << "eval-utility: " << mer.size() << " utterances scored, " << mer_empty.size()
      << " empty references, " << mer_missing.size() << " missing\n";
  return mer_missing.empty() && per_missing.empty() ? kExitOk : kExitIncomplete;
}

// ---------------------------------------------------------------- analyze-csp

int RunAnalyzeCsp(const CommonOptions& common, const CspOptions& options, std::ostream& log) {
  const std::vector<LanguageLexicon> lexicons =
      LoadLexicons(options.lexicon_en, options.lexicon_es);
  const Lang matrix = ParseMatrixLang(options.matrix_lang);
  std::optional<std::set<std::string>> keep;
  if (!common.manifest.empty()) {
    keep.emplace();
    for (const Utterance& u : LoadManifest(common.manifest).utterances) keep->insert(u.utt_id);
  }
  auto load = [&](const std::string& path) {
    std::map<std::string, Transcript> out;
    for (const auto& [id, text] : LoadKeyed(path)) {
      if (keep && keep->count(id) == 0) continue;
      out[id] = options.pretagged ? ParsePretagged(text, id)
                                  : TagTokens(TokenizeMixed(text, id), lexicons, matrix);
    }
    return out;
  };
  const std::map<std::string, Transcript> orig = load(options.orig_hyps);
  const std::map<std::string, Transcript> anon = load(options.anon_hyps);
  std::map<std::string, AlignmentCounts> mer = LoadRateTable(options.mer);
  if (keep) {
    std::erase_if(mer, [&](const auto& kv) { return keep->count(kv.first) == 0; });
  }
  const CspAggregate agg = CspCompare(orig, anon, mer);
  const fs::path out = common.out;

  std::string records = "utt_id\tcsp_orig\tcsp_anon\tS\tD\tI\tN\tmer\n";
  for (const CspRecord& r : agg.records) {
    records += r.utt_id + "\t" + std::to_string(r.csp_orig) + "\t" + std::to_string(r.csp_anon) +
               "\t" + std::to_string(r.counts.substitutions) + "\t" +
               std::to_string(r.counts.deletions) + "\t" + std::to_string(r.counts.insertions) +
               "\t" + std::to_string(r.counts.ref_length) + "\t" + Fixed(r.mer, 6) + "\n";
  }
  WriteTextFile(out / "csp_records.tsv", records);

  Json report;
  report["orig_hyps"] = options.orig_hyps;
  report["anon_hyps"] = options.anon_hyps;
  report["mer"] = options.mer;
  report["tagging"] = options.pretagged ? "pretagged" : "lexicon";
  report["n_input"] = agg.n_input;
  report["n_excluded_zero_orig"] = agg.n_excluded_zero_orig;
  report["n_total"] = agg.n_total;
  report["n_reduced"] = agg.n_reduced;
  report["n_zero"] = agg.n_zero;
  report["n_equal"] = agg.n_equal;
  report["n_increased"] = agg.n_increased;
  report["mean_csp_orig"] = agg.mean_csp_orig;
  report["mean_csp_anon"] = agg.mean_csp_anon;
  report["mer_total"] = agg.mer_total;
  report["significance_level"] = kSignificanceLevel;

  TextTable table({"Category", "Utterances", "MER (%)", "p"});
  table.AddRow({"Total", FormatCount(agg.n_total), FormatPercent(agg.mer_total), ""});
  Json categories = Json::array();
  for (const CspCategory& c : agg.categories) {
    Json j;
    j["name"] = c.name;
    j["count"] = c.count;
    j["fraction"] = c.fraction;
    j["mer"] = c.mer ? Json(*c.mer) : Json(nullptr);
    j["alternative"] = c.alternative;
    if (c.test) {
      j["u"] = c.test->u;
      j["p"] = c.test->p;
      j["exact"] = c.test->exact;
      j["significant"] = c.test->significant;
    } else {
      j["p"] = nullptr;
    }
    categories.push_back(j);
    table.AddRow({c.name, CountWithPercent(c.count, c.fraction),
                  c.mer ? FormatPercent(*c.mer) + SignificanceMark(c.test) : "-",
                  c.test ? FormatFixed(c.test->p, 4) : "-"});
  }
  report["categories"] = categories;
  WriteJson(out / "csp.json", report);

  std::string text = table.Render();
  text += "Mean CSP: " + FormatFixed(agg.mean_csp_orig, 2) + " (O) -> " +
          FormatFixed(agg.mean_csp_anon, 2) + " (A)\n";
  text += "Excluded with CSP(O) = 0: " + FormatCount(agg.n_excluded_zero_orig) + " of " +
          FormatCount(agg.n_input) + " (" +
          FormatPercent(static_cast<double>(agg.n_excluded_zero_orig) / agg.n_input, 1) +
          "%)\n";
  text += "* p < " + FormatFixed(kSignificanceLevel, 3) +
          ", one-sided Mann-Whitney U of the category's per-utterance MER against Total "
          "(greater for the reduced and zero rows, less for the equal row)\n";
  WriteTextFile(out / "csp_table.txt", text);
  log << "analyze-csp: " << agg.n_total << " utterances with code-switching, "
      << agg.n_excluded_zero_orig << " excluded\n";
  return kExitOk;
}

// ---------------------------------------------------------------- ablate

int RunAblate(const CommonOptions& common, const AblateOptions& options, std::ostream& log) {
  const CorpusManifest manifest = LoadManifest(common.manifest);
  const std::map<std::string, AlignmentCounts> mer = LoadRateTable(options.mer);
  std::vector<AblationExperiment> experiments = LoadAblationExperiments(options.experiments);
  const std::vector<std::string> only = SplitList(options.only, ',');
  if (!only.empty()) {
    for (const std::string& name : only) {
      if (std::none_of(experiments.begin(), experiments.end(),
                       [&](const AblationExperiment& e) { return e.name == name; })) {
        throw Error("unknown ablation experiment '" + name + "'");
      }
    }
    std::erase_if(experiments, [&](const AblationExperiment& e) {
      return std::find(only.begin(), only.end(), e.name) == only.end();
    });
  }
  std::set<LangSetting> settings;
  for (const Utterance& u : manifest.utterances) {
    if (mer.count(u.utt_id)) settings.insert(u.lang_setting);
  }

  Json rows = Json::array(), skipped = Json::array();
  std::string sentences;
  TextTable table({"Experiment", "Utts before", "Utts after", "Size (%)", "MER before (%)",
                   "MER after (%)", "Change (%)"});
  for (const AblationExperiment& e : experiments) {
    std::vector<std::optional<LangSetting>> scopes{std::nullopt};
    if (options.by_setting) {
      for (LangSetting s : kSettingOrder) {
        if (settings.count(s)) scopes.emplace_back(s);
      }
    }
    for (const std::optional<LangSetting>& scope : scopes) {
      const std::string scope_name = scope ? std::string(LangSettingName(*scope)) : "ALL";
      AblationReport r;
      try {
        r = SubsetAblation(manifest, mer, e, scope);
      } catch (const Error& err) {
        skipped.push_back({{"experiment", e.name}, {"lang_setting", scope_name},
                           {"reason", err.what()}});
        continue;
      }
      Json row;
      row["experiment"] = e.name;
      row["flags"] = e.flags;
      row["lang_setting"] = scope_name;
      row["n_before"] = r.n_before;
      row["n_after"] = r.n_after;
      row["size_fraction"] = r.size_fraction;
      row["mer_before"] = r.mer_before;
      row["mer_after"] = r.mer_after;
      row["relative_change"] = r.relative_change ? Json(*r.relative_change) : Json(nullptr);
      rows.push_back(row);
      table.AddRow({e.name + " " + scope_name, FormatCount(r.n_before), FormatCount(r.n_after),
                    FormatPercent(r.size_fraction, 0), FormatPercent(r.mer_before),
                    FormatPercent(r.mer_after),
                    r.relative_change ? FormatPercent(*r.relative_change, 0) : "-"});
      std::string change = "unchanged";
      if (r.relative_change && *r.relative_change < 0) {
        change = "reduced by " + FormatPercent(-*r.relative_change, 0) + "%";
      } else if (r.relative_change && *r.relative_change > 0) {
        change = "increased by " + FormatPercent(*r.relative_change, 0) + "%";
      }
      sentences += e.name + " (" + scope_name + "): " + FormatPercent(r.size_fraction, 0) +
                   "% of utterances remain; MER " + FormatPercent(r.mer_before) + "% -> " +
                   FormatPercent(r.mer_after) + "% (" + change + ")\n";
    }
  }
  Json report;
  report["manifest"] = common.manifest;
  report["mer"] = options.mer;
  report["experiments"] = rows;
  report["skipped"] = skipped;
  WriteJson(common.out + "/ablation.json", report);
  WriteTextFile(fs::path(common.out) / "ablation_table.txt", table.Render() + "\n" + sentences);
  log << "ablate: " << rows.size() << " ablation rows, " << skipped.size() << " skipped\n";
  return skipped.empty() ? kExitOk : kExitIncomplete;
}

// ---------------------------------------------------------------- report

int RunReport(const CommonOptions& common, const ReportOptions& options, std::ostream& log) {
  struct System {
    std::string name;
    std::optional<Json> privacy, utility;
  };
  std::vector<System> systems;
  for (const std::string& item : SplitList(options.systems, ',')) {
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw Error("expected NAME=DIR, got '" + item + "'");
    }
    System s;
    s.name = item.substr(0, eq);
    const fs::path dir = item.substr(eq + 1);
    if (fs::exists(dir / "privacy.json")) s.privacy = ReadJson(dir / "privacy.json");
    if (fs::exists(dir / "utility.json")) s.utility = ReadJson(dir / "utility.json");
    if (!s.privacy && !s.utility) {
      throw Error("neither privacy.json nor utility.json in " + dir.string());
    }
    systems.push_back(std::move(s));
  }
  if (systems.empty()) throw Error("no systems given");

  // setting -> metric -> system -> value
  std::map<std::string, std::map<std::string, std::map<std::string, double>>> values;
  std::set<std::string> metrics;
  for (const System& s : systems) {
    if (s.privacy) {
      for (const Json& row : s.privacy->at("results")) {
        if (row.at("split") != options.split) continue;
        values[row.at("lang_setting")]["EER"][s.name] = row.at("eer_avg").get<double>();
        metrics.insert("EER");
      }
      for (const Json& row : s.privacy->at("pooled")) {
        if (row.at("split") != options.split) continue;
        values["ALL"]["EER"][s.name] = row.at("eer_avg").get<double>();
      }
    }
    if (s.utility) {
      for (const char* metric : {"mer", "per"}) {
        const Json& rows = s.utility->at(metric);
        if (rows.is_null()) continue;
        std::string upper = metric;
        for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        for (const Json& row : rows) {
          values[row.at("lang_setting")][upper][s.name] = row.at("rate").get<double>();
          metrics.insert(upper);
        }
      }
    }
  }

  std::vector<std::string> setting_order;
  for (LangSetting s : kSettingOrder) {
    if (values.count(std::string(LangSettingName(s)))) {
      setting_order.emplace_back(LangSettingName(s));
    }
  }
  if (values.count("ALL")) setting_order.emplace_back("ALL");

  std::vector<std::string> metric_order;
  for (const char* m : {"EER", "MER", "PER"}) {
    if (metrics.count(m)) metric_order.emplace_back(m);
  }
  std::vector<std::string> header{"Dataset Setting"};
  for (const std::string& m : metric_order) {
    for (const System& s : systems) header.push_back(m + " " + s.name);
  }
  TextTable table(header);
  Json rows = Json::array();
  for (const std::string& setting : setting_order) {
    std::vector<std::string> cells{options.dataset + " " + setting};
    Json row;
    row["lang_setting"] = setting;
    for (const std::string& m : metric_order) {
      Json per_system = Json::object();
      for (const System& s : systems) {
        const auto& by_system = values[setting][m];
        const auto it = by_system.find(s.name);
        cells.push_back(it == by_system.end() ? "-" : FormatPercent(it->second));
        per_system[s.name] = it == by_system.end() ? Json(nullptr) : Json(it->second);
      }
      std::string key = m;
      for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      row[key] = per_system;
    }
    rows.push_back(row);
    table.AddRow(cells);
  }

  Json report;
  report["dataset"] = options.dataset;
  report["split"] = options.split;
  Json names = Json::array();
  for (const System& s : systems) names.push_back(s.name);
  report["systems"] = names;
  report["rows"] = rows;
  const fs::path out = common.out;
  WriteJson(out / "report.json", report);
  WriteTextFile(out / "report.txt",
                "EER (%): higher is better. MER (%), PER (%): lower is better.\n" +
                    table.Render());
  log << "report: " << rows.size() << " rows for " << systems.size() << " systems\n";
  return kExitOk;
}

}  // namespace csanon::cli
