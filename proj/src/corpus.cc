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

#include "csanon/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "csanon/error.h"
#include "csanon/random.h"
#include "csanon/text_io.h"
#include "csanon/utf8.h"

namespace csanon {

namespace {

using Json = nlohmann::ordered_json;

template <typename Enum, size_t N>
std::optional<Enum> Lookup(const std::pair<std::string_view, Enum> (&table)[N],
                           std::string_view name) {
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  return std::nullopt;
}

template <typename Enum, size_t N>
std::string_view Name(const std::pair<std::string_view, Enum> (&table)[N],
                      Enum value) {
  for (const auto& [key, v] : table) {
    if (v == value) return key;
  }
  return "?";
}

constexpr std::pair<std::string_view, Gender> kGenders[] = {
    {"F", Gender::kF}, {"M", Gender::kM}};
constexpr std::pair<std::string_view, Split> kSplits[] = {
    {"train", Split::kTrain}, {"dev", Split::kDev}, {"test", Split::kTest}};
constexpr std::pair<std::string_view, Subset> kSubsets[] = {
    {"enroll", Subset::kEnroll},
    {"trial", Subset::kTrial},
    {"unassigned", Subset::kUnassigned}};
constexpr std::pair<std::string_view, LangSetting> kSettings[] = {
    {"EN", LangSetting::kEn}, {"ZH", LangSetting::kZh},
    {"ES", LangSetting::kEs}, {"CS", LangSetting::kCs},
    {"unknown", LangSetting::kUnknown}};

std::string RequireString(const Json& obj, const char* field) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw Error(std::string("missing field '") + field + "'");
  if (!it->is_string()) throw Error(std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

std::string OptionalString(const Json& obj, const char* field,
                           const std::string& fallback) {
  const auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_string()) throw Error(std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

template <typename Enum, size_t N>
Enum ParseEnumField(const std::pair<std::string_view, Enum> (&table)[N],
                    const std::string& value, const char* field) {
  const std::optional<Enum> parsed = Lookup(table, value);
  if (!parsed) {
    throw Error(std::string("invalid ") + field + " '" + value + "'");
  }
  return *parsed;
}

Utterance ParseUtterance(const Json& obj) {
  if (!obj.is_object()) throw Error("line is not a JSON object");
  Utterance u;
  u.utt_id = RequireString(obj, "utt_id");
  if (u.utt_id.empty()) throw Error("empty utt_id");
  u.speaker_id = RequireString(obj, "speaker_id");
  u.gender = ParseEnumField(kGenders, RequireString(obj, "gender"), "gender");
  u.split = ParseEnumField(kSplits, RequireString(obj, "split"), "split");
  u.subset = ParseEnumField(kSubsets, OptionalString(obj, "subset", "unassigned"),
                            "subset");
  u.lang_setting = ParseEnumField(
      kSettings, OptionalString(obj, "lang_setting", "unknown"), "lang_setting");
  u.audio_path = OptionalString(obj, "audio_path", "");
  u.transcript = OptionalString(obj, "transcript", "");
  if (const auto it = obj.find("annotations"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw Error("field 'annotations' must be an array");
    for (const Json& flag : *it) {
      if (!flag.is_string()) throw Error("annotation flags must be strings");
      u.annotations.insert(flag.get<std::string>());
    }
  }
  if (const auto it = obj.find("duration_s"); it != obj.end() && !it->is_null()) {
    if (!it->is_number()) throw Error("field 'duration_s' must be a number");
    u.duration_s = it->get<double>();
    if (!(u.duration_s >= 0.0)) throw Error("duration_s must be >= 0");
  }
  if (u.subset != Subset::kUnassigned && u.split == Split::kTrain) {
    throw Error("enroll/trial subsets are only valid for dev/test");
  }
  return u;
}

// Lowercased with surrounding punctuation removed, so "Oh," matches "oh".
std::string ParticleKey(const std::string& token) {
  std::u32string cps = utf8::Decode(utf8::ToLower(token));
  size_t begin = 0, end = cps.size();
  while (begin < end && utf8::IsPunctuation(cps[begin])) ++begin;
  while (end > begin && utf8::IsPunctuation(cps[end - 1])) --end;
  return utf8::Encode(std::u32string_view(cps).substr(begin, end - begin));
}

std::string GroupKey(const Utterance& u) {
  return u.speaker_id + '\t' + std::string(LangSettingName(u.lang_setting));
}

}  // namespace

std::string_view GenderName(Gender g) { return Name(kGenders, g); }
std::string_view SplitName(Split s) { return Name(kSplits, s); }
std::string_view SubsetName(Subset s) { return Name(kSubsets, s); }
std::string_view LangSettingName(LangSetting s) { return Name(kSettings, s); }
std::optional<Gender> ParseGender(std::string_view n) { return Lookup(kGenders, n); }
std::optional<Split> ParseSplit(std::string_view n) { return Lookup(kSplits, n); }
std::optional<Subset> ParseSubset(std::string_view n) { return Lookup(kSubsets, n); }
std::optional<LangSetting> ParseLangSetting(std::string_view n) {
  return Lookup(kSettings, n);
}

CorpusManifest ParseManifest(std::istream& in, const std::string& source) {
  CorpusManifest manifest;
  manifest.name = source;
  std::unordered_map<std::string, int> first_line;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Utterance u;
    try {
      u = ParseUtterance(Json::parse(line));
    } catch (const Json::exception& e) {
      throw ParseError(source, line_no, e.what());
    } catch (const Error& e) {
      throw ParseError(source, line_no, e.what());
    }
    const auto [it, inserted] = first_line.emplace(u.utt_id, line_no);
    if (!inserted) {
      throw ParseError(source, line_no,
                       "duplicate utt_id '" + u.utt_id + "' (first seen on line " +
                           std::to_string(it->second) + ")");
    }
    manifest.utterances.push_back(std::move(u));
  }
  return manifest;
}

CorpusManifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  CorpusManifest manifest = ParseManifest(in, path.string());
  manifest.name = path.stem().string();
  return manifest;
}

std::string FormatManifestLine(const Utterance& u) {
  Json obj;
  obj["utt_id"] = u.utt_id;
  obj["speaker_id"] = u.speaker_id;
  obj["gender"] = GenderName(u.gender);
  obj["split"] = SplitName(u.split);
  obj["subset"] = SubsetName(u.subset);
  obj["lang_setting"] = LangSettingName(u.lang_setting);
  obj["audio_path"] = u.audio_path;
  obj["transcript"] = u.transcript;
  obj["annotations"] = Json::array();
  for (const std::string& flag : u.annotations) obj["annotations"].push_back(flag);
  obj["duration_s"] = u.duration_s;
  return obj.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string FormatManifest(const CorpusManifest& manifest) {
  std::string out;
  for (const Utterance& u : manifest.utterances) {
    out += FormatManifestLine(u);
    out += '\n';
  }
  return out;
}

void SaveManifest(const std::filesystem::path& path,
                  const CorpusManifest& manifest) {
  WriteTextFile(path, FormatManifest(manifest));
}

CleanupRules CleanupRules::Load(const std::filesystem::path& particle_file,
                                const std::filesystem::path& pattern_file) {
  CleanupRules rules;
  if (!particle_file.empty()) {
    for (const std::string& p : ReadListFile(particle_file)) {
      rules.particles.insert(utf8::ToLower(p));
    }
  }
  if (!pattern_file.empty()) {
    for (const std::string& p : ReadListFile(pattern_file)) {
      try {
        rules.patterns.emplace_back(p, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw Error("bad annotation pattern '" + p + "': " + e.what());
      }
    }
  }
  return rules;
}

std::string CleanTranscript(std::string_view raw, const CleanupRules& rules) {
  std::string text(raw);
  for (const std::regex& pattern : rules.patterns) {
    text = std::regex_replace(text, pattern, " ");
  }
  std::string out;
  for (const std::string& token : utf8::SplitWhitespace(text)) {
    if (rules.particles.count(ParticleKey(token)) > 0) continue;
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

LangSetting PartitionLanguageSetting(const Transcript& tagged,
                                     LangSetting matrix) {
  bool eng = false, cmn = false, spa = false;
  for (const Token& t : tagged.tokens) {
    eng |= t.lang == Lang::kEng;
    cmn |= t.lang == Lang::kCmn;
    spa |= t.lang == Lang::kSpa;
  }
  const int distinct = int{eng} + int{cmn} + int{spa};
  if (distinct >= 2) return LangSetting::kCs;
  if (eng) return LangSetting::kEn;
  if (cmn) return LangSetting::kZh;
  if (spa) return LangSetting::kEs;
  return matrix;
}

ConcatResult ConcatShortUtterances(std::vector<UtteranceAudio> utts,
                                   const ConcatOptions& options) {
  ConcatResult result;
  std::map<std::string, std::vector<size_t>> shorts_by_group;
  for (size_t i = 0; i < utts.size(); ++i) {
    if (utts[i].audio.DurationSeconds() >= options.min_duration_s) {
      result.utterances.push_back(std::move(utts[i]));
    } else {
      shorts_by_group[GroupKey(utts[i].utt)].push_back(i);
    }
  }

  for (auto& [key, members] : shorts_by_group) {
    std::sort(members.begin(), members.end(), [&](size_t a, size_t b) {
      const double da = utts[a].audio.DurationSeconds();
      const double db = utts[b].audio.DurationSeconds();
      if (da != db) return da < db;
      return utts[a].utt.utt_id < utts[b].utt.utt_id;
    });
    std::vector<double> level(members.size());
    for (size_t k = 0; k < members.size(); ++k) level[k] = RmsDb(utts[members[k]].audio);
    std::vector<bool> used(members.size(), false);

    for (size_t s = 0; s < members.size(); ++s) {
      if (used[s]) continue;
      used[s] = true;
      UtteranceAudio merged = std::move(utts[members[s]]);
      std::vector<std::string> ids{merged.utt.utt_id};
      const int rate = merged.audio.sample_rate_hz;
      const auto gap = static_cast<size_t>(std::lround(options.gap_s * rate));

      for (size_t k = s + 1; k < members.size() &&
                             merged.audio.DurationSeconds() < options.min_duration_s;
           ++k) {
        if (used[k]) continue;
        UtteranceAudio& other = utts[members[k]];
        if (other.audio.sample_rate_hz != rate) continue;
        if (std::fabs(level[k] - level[s]) > options.loudness_tol_db) continue;
        used[k] = true;
        auto& samples = merged.audio.samples;
        samples.insert(samples.end(), gap, 0.0f);
        samples.insert(samples.end(), other.audio.samples.begin(),
                       other.audio.samples.end());
        ids.push_back(other.utt.utt_id);
        if (!other.utt.transcript.empty()) {
          if (!merged.utt.transcript.empty()) merged.utt.transcript += ' ';
          merged.utt.transcript += other.utt.transcript;
        }
        merged.utt.annotations.insert(other.utt.annotations.begin(),
                                      other.utt.annotations.end());
      }

      if (merged.audio.DurationSeconds() < options.min_duration_s) {
        result.dropped.insert(result.dropped.end(), ids.begin(), ids.end());
        continue;
      }
      if (ids.size() > 1) {
        std::string joined;
        for (const std::string& id : ids) {
          if (!joined.empty()) joined += '+';
          joined += id;
        }
        merged.utt.utt_id = std::move(joined);
        merged.utt.audio_path.clear();
      }
      merged.utt.duration_s = merged.audio.DurationSeconds();
      result.utterances.push_back(std::move(merged));
    }
  }

  std::sort(result.utterances.begin(), result.utterances.end(),
            [](const UtteranceAudio& a, const UtteranceAudio& b) {
              return a.utt.utt_id < b.utt.utt_id;
            });
  std::sort(result.dropped.begin(), result.dropped.end());
  return result;
}

int EnrollCount(int count, int n_min, int n_max) {
  return std::clamp(count / 4, n_min, n_max);
}

CorpusManifest SplitEnrollTrial(CorpusManifest manifest,
                                const EnrollOptions& options) {
  if (options.n_enroll_min < 1 || options.n_enroll_max < options.n_enroll_min) {
    throw Error("enroll range must satisfy 1 <= min <= max");
  }
  std::map<std::string, std::vector<size_t>> groups;
  for (size_t i = 0; i < manifest.utterances.size(); ++i) {
    Utterance& u = manifest.utterances[i];
    if (u.split == Split::kTrain) {
      u.subset = Subset::kUnassigned;
    } else {
      groups[GroupKey(u)].push_back(i);
    }
  }

  for (auto& [key, members] : groups) {
    const int count = static_cast<int>(members.size());
    if (count < options.n_enroll_min + 1) {
      const Utterance& u = manifest.utterances[members.front()];
      throw Error("speaker '" + u.speaker_id + "' has only " +
                  std::to_string(count) + " utterances in setting " +
                  std::string(LangSettingName(u.lang_setting)) + "; need at least " +
                  std::to_string(options.n_enroll_min + 1));
    }
    std::sort(members.begin(), members.end(), [&](size_t a, size_t b) {
      return manifest.utterances[a].utt_id < manifest.utterances[b].utt_id;
    });
    Rng rng(MixSeed(options.seed, key));
    Shuffle(&members, &rng);
    const int n_enroll = EnrollCount(count, options.n_enroll_min, options.n_enroll_max);
    for (int k = 0; k < count; ++k) {
      manifest.utterances[members[k]].subset =
          k < n_enroll ? Subset::kEnroll : Subset::kTrial;
    }
  }
  return manifest;
}

}  // namespace csanon
