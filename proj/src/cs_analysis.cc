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

#include "csanon/cs_analysis.h"

#include <algorithm>
#include <sstream>

#include "csanon/error.h"
#include "csanon/text_io.h"
#include "csanon/utf8.h"

namespace csanon {

namespace {

bool IsLanguageTag(Lang lang) {
  return lang == Lang::kEng || lang == Lang::kCmn || lang == Lang::kSpa;
}

enum class SurfaceClass { kHan, kDigits, kMixedHan, kWord };

SurfaceClass Classify(const std::string& surface) {
  bool any_han = false, all_han = true, all_digits = true;
  for (char32_t cp : utf8::Decode(surface)) {
    const bool han = utf8::IsHan(cp);
    any_han |= han;
    all_han &= han;
    all_digits &= utf8::IsDigit(cp);
  }
  if (surface.empty()) return SurfaceClass::kWord;
  if (all_han) return SurfaceClass::kHan;
  if (any_han) return SurfaceClass::kMixedHan;
  if (all_digits) return SurfaceClass::kDigits;
  return SurfaceClass::kWord;
}

std::string ListIds(const std::vector<std::string>& ids) {
  std::string out;
  const size_t shown = std::min<size_t>(ids.size(), 20);
  for (size_t i = 0; i < shown; ++i) {
    if (i > 0) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

double Pooled(const std::vector<const CspRecord*>& records) {
  std::vector<AlignmentCounts> counts;
  counts.reserve(records.size());
  for (const CspRecord* r : records) counts.push_back(r->counts);
  return CorpusRate(counts, RateKind::kMer).rate;
}

std::vector<double> Rates(const std::vector<const CspRecord*>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const CspRecord* r : records) out.push_back(r->mer);
  return out;
}

}  // namespace

LanguageLexicon LanguageLexicon::Load(const std::filesystem::path& path,
                                      Lang language) {
  LanguageLexicon lexicon;
  lexicon.language = language;
  for (const std::string& word : ReadListFile(path)) {
    lexicon.words.insert(utf8::ToLower(word));
  }
  if (lexicon.words.empty()) throw Error("empty lexicon " + path.string());
  return lexicon;
}

Transcript TagTokens(const Transcript& transcript,
                     std::span<const LanguageLexicon> lexicons,
                     Lang matrix_lang) {
  Transcript out = transcript;
  const size_t n = out.tokens.size();
  std::vector<bool> ambiguous(n, false);
  for (size_t i = 0; i < n; ++i) {
    Token& token = out.tokens[i];
    switch (Classify(token.surface)) {
      case SurfaceClass::kHan:
        token.lang = Lang::kCmn;
        continue;
      case SurfaceClass::kDigits:
        token.lang = Lang::kNeutral;
        continue;
      case SurfaceClass::kMixedHan:
        token.lang = Lang::kOther;
        continue;
      case SurfaceClass::kWord:
        break;
    }
    const std::string key = utf8::ToLower(token.surface);
    int claims = 0;
    Lang claimed = Lang::kOther;
    for (const LanguageLexicon& lex : lexicons) {
      if (lex.words.count(key) > 0 && (claims == 0 || lex.language != claimed)) {
        ++claims;
        claimed = lex.language;
      }
    }
    token.lang = claims == 1 ? claimed : Lang::kOther;
    ambiguous[i] = claims > 1;
  }

  auto resolved = [&](size_t j) {
    const Lang l = out.tokens[j].lang;
    return !ambiguous[j] && (l == Lang::kEng || l == Lang::kSpa);
  };
  std::vector<Lang> decided(n);
  for (size_t i = 0; i < n; ++i) {
    if (!ambiguous[i]) continue;
    Lang lang = matrix_lang;
    bool found = false;
    for (size_t j = i; j-- > 0;) {
      if (resolved(j)) {
        lang = out.tokens[j].lang;
        found = true;
        break;
      }
    }
    for (size_t j = i + 1; !found && j < n; ++j) {
      if (resolved(j)) {
        lang = out.tokens[j].lang;
        found = true;
      }
    }
    decided[i] = lang;
  }
  for (size_t i = 0; i < n; ++i) {
    if (ambiguous[i]) out.tokens[i].lang = decided[i];
  }
  return out;
}

int CountCsp(const Transcript& tagged) {
  int count = 0;
  std::optional<Lang> previous;
  for (const Token& t : tagged.tokens) {
    if (!IsLanguageTag(t.lang)) continue;
    if (previous && *previous != t.lang) ++count;
    previous = t.lang;
  }
  return count;
}

CspAggregate CspCompare(const std::map<std::string, Transcript>& orig,
                        const std::map<std::string, Transcript>& anon,
                        const std::map<std::string, AlignmentCounts>& mer) {
  std::set<std::string> all;
  for (const auto& [id, t] : orig) all.insert(id);
  for (const auto& [id, t] : anon) all.insert(id);
  for (const auto& [id, c] : mer) all.insert(id);
  std::vector<std::string> missing;
  for (const std::string& id : all) {
    if (!orig.count(id) || !anon.count(id) || !mer.count(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    throw Error("utterance ids not present in all inputs: " + ListIds(missing));
  }

  CspAggregate agg;
  agg.n_input = static_cast<int64_t>(all.size());
  for (const std::string& id : all) {
    CspRecord record;
    record.utt_id = id;
    record.csp_orig = CountCsp(orig.at(id));
    record.csp_anon = CountCsp(anon.at(id));
    record.counts = mer.at(id);
    if (record.csp_orig == 0) {
      ++agg.n_excluded_zero_orig;
      continue;
    }
    record.mer = MakeReport(RateKind::kMer, record.counts).rate;
    agg.records.push_back(std::move(record));
  }
  agg.n_total = static_cast<int64_t>(agg.records.size());
  if (agg.n_total == 0) {
    throw Error("no utterance has a code-switching point before anonymization");
  }

  std::vector<const CspRecord*> total, reduced, zero, equal;
  double sum_orig = 0.0, sum_anon = 0.0;
  for (const CspRecord& r : agg.records) {
    total.push_back(&r);
    sum_orig += r.csp_orig;
    sum_anon += r.csp_anon;
    if (r.csp_anon < r.csp_orig) reduced.push_back(&r);
    if (r.csp_anon == 0) zero.push_back(&r);
    if (r.csp_anon == r.csp_orig) equal.push_back(&r);
    if (r.csp_anon > r.csp_orig) ++agg.n_increased;
  }
  agg.n_reduced = static_cast<int64_t>(reduced.size());
  agg.n_zero = static_cast<int64_t>(zero.size());
  agg.n_equal = static_cast<int64_t>(equal.size());
  agg.mean_csp_orig = sum_orig / agg.n_total;
  agg.mean_csp_anon = sum_anon / agg.n_total;
  agg.mer_total = Pooled(total);

  const std::vector<double> total_rates = Rates(total);
  auto category = [&](std::string name, const std::vector<const CspRecord*>& members,
                       bool greater) {
    CspCategory c;
    c.name = std::move(name);
    c.count = static_cast<int64_t>(members.size());
    c.fraction = static_cast<double>(c.count) / agg.n_total;
    c.alternative = greater ? "greater" : "less";
    if (!members.empty()) {
      c.mer = Pooled(members);
      const std::vector<double> rates = Rates(members);
      c.test = greater ? MannWhitneyUGreater(rates, total_rates)
                       : MannWhitneyUGreater(total_rates, rates);
    }
    return c;
  };
  agg.categories.push_back(category("CSP(A) < CSP(O)", reduced, true));
  agg.categories.push_back(category("CSP(A) = 0", zero, true));
  agg.categories.push_back(category("CSP(A) = CSP(O)", equal, false));
  return agg;
}

std::vector<AblationExperiment> LoadAblationExperiments(
    const std::filesystem::path& path) {
  std::vector<AblationExperiment> out;
  for (const std::string& line : ReadListFile(path)) {
    std::istringstream fields(line);
    AblationExperiment e;
    fields >> e.name;
    std::string flag;
    while (fields >> flag) e.flags.insert(flag);
    if (e.flags.empty()) throw Error("ablation '" + e.name + "' lists no flags");
    out.push_back(std::move(e));
  }
  return out;
}

AblationReport SubsetAblation(const CorpusManifest& manifest,
                              const std::map<std::string, AlignmentCounts>& mer,
                              const AblationExperiment& experiment,
                              std::optional<LangSetting> setting) {
  std::vector<AlignmentCounts> before, after;
  for (const Utterance& u : manifest.utterances) {
    if (setting && u.lang_setting != *setting) continue;
    const auto it = mer.find(u.utt_id);
    if (it == mer.end()) continue;
    before.push_back(it->second);
    const bool flagged = std::any_of(
        experiment.flags.begin(), experiment.flags.end(),
        [&u](const std::string& f) { return u.HasFlag(f); });
    if (!flagged) after.push_back(it->second);
  }
  if (before.empty()) throw Error("ablation '" + experiment.name + "': no scored utterances");
  if (after.empty()) {
    throw Error("ablation '" + experiment.name + "': every utterance carries a listed flag");
  }
  AblationReport report;
  report.name = experiment.name;
  report.setting = setting;
  report.n_before = static_cast<int64_t>(before.size());
  report.n_after = static_cast<int64_t>(after.size());
  report.size_fraction = static_cast<double>(report.n_after) / report.n_before;
  report.mer_before = CorpusRate(before, RateKind::kMer).rate;
  report.mer_after = CorpusRate(after, RateKind::kMer).rate;
  if (report.mer_before > 0.0) {
    report.relative_change = (report.mer_after - report.mer_before) / report.mer_before;
  }
  return report;
}

}  // namespace csanon
