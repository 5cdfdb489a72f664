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

#include <filesystem>
#include <fstream>

#include "csanon/error.h"
#include "csanon/random.h"
#include "csanon/utf8.h"
#include "doctest.h"

namespace csanon {
namespace {

namespace fs = std::filesystem;

std::vector<LanguageLexicon> SmallLexicons() {
  LanguageLexicon en{Lang::kEng, {"hello", "i", "like", "this", "no", "me", "the"}};
  LanguageLexicon es{Lang::kSpa, {"hola", "quiero", "eso", "no", "me", "gusta"}};
  return {en, es};
}

std::string Tags(const Transcript& t) {
  std::string out;
  for (const Token& tok : t.tokens) {
    if (!out.empty()) out += ' ';
    out += LangName(tok.lang);
  }
  return out;
}

std::string TagText(const std::string& text, Lang matrix = Lang::kEng) {
  return Tags(TagTokens(TokenizeMixed(text), SmallLexicons(), matrix));
}

TEST_CASE("token tagging examples") {
  CHECK(TagText("你好") == "CMN CMN");
  CHECK(TagText("hello") == "ENG");
  CHECK(TagText("quiero no eso") == "SPA SPA SPA");
  CHECK(TagText("Hola") == "SPA");
  CHECK(TagText("xyzzy") == "OTHER");
  CHECK(TagText("我 like 25 个") == "CMN ENG NEUTRAL CMN");
}

TEST_CASE("ambiguous words follow the nearest unambiguous neighbour") {
  // Left neighbour wins over right.
  CHECK(TagText("like no quiero") == "ENG ENG SPA");
  CHECK(TagText("quiero no like") == "SPA SPA ENG");
  // Ambiguous and Han neighbours are skipped.
  CHECK(TagText("quiero 我 no me") == "SPA CMN SPA SPA");
  // Right neighbour when there is nothing to the left.
  CHECK(TagText("no me gusta") == "SPA SPA SPA");
  // Matrix language when nothing is resolvable.
  CHECK(TagText("no me", Lang::kSpa) == "SPA SPA");
  CHECK(TagText("no me", Lang::kEng) == "ENG ENG");
}

TEST_CASE("pretagged input is retagged from the surface only for Han") {
  const Transcript t = ParsePretagged("我/ENG like/CMN");
  const Transcript tagged = TagTokens(t, SmallLexicons(), Lang::kEng);
  CHECK(Tags(tagged) == "CMN ENG");
}

TEST_CASE("tagging never crosses script boundaries") {
  const std::vector<LanguageLexicon> lex = SmallLexicons();
  Rng rng(4);
  const char* words[] = {"我", "你好", "like", "no", "me", "hola", "xyz", "42", "a我"};
  for (int trial = 0; trial < 2000; ++trial) {
    Transcript t;
    const size_t len = rng.Index(8);
    for (size_t k = 0; k < len; ++k) t.tokens.push_back({words[rng.Index(9)], Lang::kOther});
    const Transcript tagged = TagTokens(t, lex, trial % 2 ? Lang::kEng : Lang::kSpa);
    for (const Token& tok : tagged.tokens) {
      bool has_han = false;
      for (char32_t cp : utf8::Decode(tok.surface)) has_han |= utf8::IsHan(cp);
      if (tok.lang == Lang::kCmn) CHECK(has_han);
      if (tok.lang == Lang::kEng || tok.lang == Lang::kSpa) CHECK_FALSE(has_han);
    }
  }
}

TEST_CASE("shipped lexicons load") {
  const fs::path data = CSANON_DATA_DIR;
  const LanguageLexicon en = LanguageLexicon::Load(data / "lexicon_en.txt", Lang::kEng);
  const LanguageLexicon es = LanguageLexicon::Load(data / "lexicon_es.txt", Lang::kSpa);
  CHECK(en.words.size() >= 4000);
  CHECK(es.words.size() >= 4000);
  CHECK(en.words.count("the") == 1);
  CHECK(es.words.count("quiero") == 1);
  const std::vector<LanguageLexicon> both{en, es};
  CHECK(Tags(TagTokens(TokenizeMixed("yo quiero no the house"), both, Lang::kEng)) ==
        "SPA SPA SPA ENG ENG");
}

Transcript WithTags(const std::vector<Lang>& langs) {
  Transcript t;
  for (Lang l : langs) t.tokens.push_back({"w", l});
  return t;
}

TEST_CASE("code-switching point examples") {
  CHECK(CountCsp(WithTags({Lang::kCmn, Lang::kEng, Lang::kCmn})) == 2);
  CHECK(CountCsp(WithTags({Lang::kEng, Lang::kEng, Lang::kEng})) == 0);
  CHECK(CountCsp(WithTags({Lang::kCmn, Lang::kNeutral, Lang::kEng})) == 1);
  CHECK(CountCsp(WithTags({Lang::kCmn, Lang::kOther, Lang::kCmn})) == 0);
  CHECK(CountCsp(WithTags({})) == 0);
}

TEST_CASE("CSP count matches a brute-force pair scan") {
  const Lang alphabet[] = {Lang::kEng, Lang::kCmn, Lang::kNeutral};
  int sequences = 0;
  for (int len = 0; len <= 8; ++len) {
    int total = 1;
    for (int k = 0; k < len; ++k) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<Lang> tags;
      for (int k = 0, c = code; k < len; ++k, c /= 3) tags.push_back(alphabet[c % 3]);
      // Count pairs (i, j), i < j, both non-neutral, nothing non-neutral in
      // between, with different tags.
      int expected = 0;
      for (int i = 0; i < len; ++i) {
        if (tags[i] == Lang::kNeutral) continue;
        for (int j = i + 1; j < len; ++j) {
          if (tags[j] == Lang::kNeutral) continue;
          if (tags[j] != tags[i]) ++expected;
          break;
        }
      }
      CHECK(CountCsp(WithTags(tags)) == expected);
      ++sequences;
    }
  }
  CHECK(sequences == 9841);
}

TEST_CASE("CSP count ignores inserted neutral tokens") {
  Rng rng(21);
  const Lang alphabet[] = {Lang::kEng, Lang::kCmn, Lang::kSpa, Lang::kOther};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Lang> tags(rng.Index(12));
    for (Lang& l : tags) l = alphabet[rng.Index(4)];
    const int base = CountCsp(WithTags(tags));
    for (int k = 0; k < 4; ++k) {
      tags.insert(tags.begin() + rng.Index(tags.size() + 1), Lang::kNeutral);
    }
    CHECK(CountCsp(WithTags(tags)) == base);
  }
}

// A transcript whose CSP count is exactly n: alternating CMN and ENG.
Transcript Switching(int n) {
  std::vector<Lang> tags{Lang::kCmn};
  for (int k = 0; k < n; ++k) tags.push_back(k % 2 ? Lang::kCmn : Lang::kEng);
  return WithTags(tags);
}

TEST_CASE("CSP comparison example") {
  const std::pair<int, int> pairs[] = {{2, 1}, {3, 0}, {2, 2}, {1, 1}, {0, 2}};
  std::map<std::string, Transcript> orig, anon;
  std::map<std::string, AlignmentCounts> mer;
  for (int i = 0; i < 5; ++i) {
    const std::string id = "u" + std::to_string(i);
    orig[id] = Switching(pairs[i].first);
    anon[id] = Switching(pairs[i].second);
    mer[id] = AlignmentCounts{i, 0, 0, 10};
  }
  const CspAggregate agg = CspCompare(orig, anon, mer);
  CHECK(agg.n_input == 5);
  CHECK(agg.n_excluded_zero_orig == 1);
  CHECK(agg.n_total == 4);
  CHECK(agg.n_reduced == 2);
  CHECK(agg.n_zero == 1);
  CHECK(agg.n_equal == 2);
  CHECK(agg.n_increased == 0);
  CHECK(agg.n_equal + agg.n_reduced + agg.n_increased == agg.n_total);
  CHECK(agg.mean_csp_orig == 2.0);
  CHECK(agg.mean_csp_anon == 1.0);
  // Errors 0..3 over 40 reference units.
  CHECK(agg.mer_total == doctest::Approx(6.0 / 40.0));
  REQUIRE(agg.categories.size() == 3);
  CHECK(agg.categories[0].count == 2);
  CHECK(agg.categories[0].fraction == 0.5);
  CHECK(*agg.categories[0].mer == doctest::Approx(1.0 / 20.0));
  CHECK(*agg.categories[1].mer == doctest::Approx(1.0 / 10.0));
  CHECK(*agg.categories[2].mer == doctest::Approx(5.0 / 20.0));
  CHECK(agg.categories[0].alternative == "greater");
  CHECK(agg.categories[2].alternative == "less");
  REQUIRE(agg.categories[0].test.has_value());
  CHECK_FALSE(agg.categories[0].test->significant);
  CHECK(agg.records.size() == 4);
  CHECK(agg.records[0].utt_id == "u0");
}

TEST_CASE("CSP comparison with unchanged transcripts") {
  std::map<std::string, Transcript> orig;
  std::map<std::string, AlignmentCounts> mer;
  for (int i = 1; i <= 6; ++i) {
    orig["u" + std::to_string(i)] = Switching(i);
    mer["u" + std::to_string(i)] = AlignmentCounts{0, 0, 0, 5};
  }
  const CspAggregate agg = CspCompare(orig, orig, mer);
  CHECK(agg.n_equal == agg.n_total);
  CHECK(agg.n_reduced == 0);
  CHECK(agg.n_zero == 0);
  CHECK_FALSE(agg.categories[0].mer.has_value());
}

TEST_CASE("CSP comparison rejects mismatched keys") {
  std::map<std::string, Transcript> orig{{"a", Switching(1)}, {"b", Switching(1)}};
  std::map<std::string, Transcript> anon{{"a", Switching(1)}};
  std::map<std::string, AlignmentCounts> mer{{"a", {}}, {"b", {}}};
  try {
    CspCompare(orig, anon, mer);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("b") != std::string::npos);
  }
}

CorpusManifest AblationManifest(std::map<std::string, AlignmentCounts>* mer) {
  CorpusManifest m;
  for (int i = 0; i < 10; ++i) {
    Utterance u;
    u.utt_id = "u" + std::to_string(i);
    u.speaker_id = "s";
    u.lang_setting = i % 2 ? LangSetting::kEn : LangSetting::kCs;
    const bool flagged = i < 4;
    if (flagged) u.annotations.insert(i % 2 ? "abbreviation" : "filled_pause");
    // Flagged: 8/10 errors each; clean: 3/10 each.
    (*mer)[u.utt_id] = AlignmentCounts{flagged ? 8 : 3, 0, 0, 10};
    m.utterances.push_back(u);
  }
  return m;
}

TEST_CASE("subset ablation") {
  std::map<std::string, AlignmentCounts> mer;
  const CorpusManifest m = AblationManifest(&mer);
  SUBCASE("removing flagged utterances") {
    const AblationReport r =
        SubsetAblation(m, mer, {"seame", {"abbreviation", "filled_pause"}});
    CHECK(r.n_before == 10);
    CHECK(r.n_after == 6);
    CHECK(r.size_fraction == doctest::Approx(0.6));
    CHECK(r.mer_before == doctest::Approx(0.5));
    CHECK(r.mer_after == doctest::Approx(0.3));
    REQUIRE(r.relative_change.has_value());
    CHECK(*r.relative_change == doctest::Approx(-0.4));
  }
  SUBCASE("no flagged utterance is a no-op") {
    const AblationReport r = SubsetAblation(m, mer, {"none", {"overlap"}});
    CHECK(r.n_after == r.n_before);
    CHECK(r.mer_after == r.mer_before);
    CHECK(*r.relative_change == 0.0);
  }
  SUBCASE("restricted to one setting") {
    const AblationReport r =
        SubsetAblation(m, mer, {"seame", {"abbreviation"}}, LangSetting::kEn);
    CHECK(r.n_before == 5);
    CHECK(r.n_after == 3);
  }
  SUBCASE("empty remainder") {
    CorpusManifest all = m;
    for (Utterance& u : all.utterances) u.annotations.insert("x");
    CHECK_THROWS_AS(SubsetAblation(all, mer, {"all", {"x"}}), Error);
  }
}

TEST_CASE("shipped ablation experiments") {
  const auto experiments =
      LoadAblationExperiments(fs::path(CSANON_DATA_DIR) / "ablation_flags.txt");
  REQUIRE(experiments.size() == 2);
  CHECK(experiments[0].name == "seame");
  CHECK(experiments[0].flags ==
        std::set<std::string>{"abbreviation", "foreign_word", "filled_pause"});
  CHECK(experiments[1].flags.count("low_loudness") == 1);
}

}  // namespace
}  // namespace csanon
