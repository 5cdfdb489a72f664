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

#include "csanon/align_metrics.h"

#include <filesystem>
#include <numeric>

#include "csanon/error.h"
#include "csanon/random.h"
#include "csanon/utf8.h"
#include "doctest.h"
#include "oracles.h"

namespace csanon {
namespace {

using Strings = std::vector<std::string>;

const PinyinTable& Table() {
  static const PinyinTable table =
      PinyinTable::Load(std::filesystem::path(CSANON_DATA_DIR) / "pinyin.tsv");
  return table;
}

std::string Show(const Transcript& t) {
  std::string out;
  for (const Token& tok : t.tokens) {
    if (!out.empty()) out += ' ';
    out += tok.surface + "/" + std::string(LangName(tok.lang));
  }
  return out;
}

TEST_CASE("mixed tokenization") {
  CHECK(Show(TokenizeMixed("我like这个")) == "我/CMN like/OTHER 这/CMN 个/CMN");
  CHECK(Surfaces(TokenizeMixed("hello world")) == Strings{"hello", "world"});
  CHECK(TokenizeMixed("").tokens.empty());
  CHECK(Show(TokenizeMixed("Hello, WORLD!  I'm 25.")) ==
        "hello/OTHER world/OTHER im/OTHER 25/NEUTRAL");
  CHECK(Show(TokenizeMixed("我有３个apple。")) ==
        "我/CMN 有/CMN 3/NEUTRAL 个/CMN apple/OTHER");
  CHECK(Surfaces(TokenizeMixed("Ñandú está")) == Strings{"ñandú", "está"});
  CHECK(Surfaces(TokenizeMixed("abc123def")) == Strings{"abc", "123", "def"});
  CHECK(TokenizeMixed("...!?，。").tokens.empty());
}

TEST_CASE("pretagged transcripts round trip") {
  const Transcript t = ParsePretagged("我/CMN like/ENG 25/NEUTRAL", "u1");
  CHECK(t.utt_id == "u1");
  CHECK(Show(t) == "我/CMN like/ENG 25/NEUTRAL");
  CHECK(FormatPretagged(t) == "我/CMN like/ENG 25/NEUTRAL");
  CHECK_THROWS_AS(ParsePretagged("word/XYZ"), Error);
}

TEST_CASE("Pinyin lookup") {
  CHECK(Table().size() > 20000);
  size_t unmapped = 0;
  CHECK(HanToPinyin({"我", Lang::kCmn}, Table(), PinyinMode::kToneless, &unmapped) == "wo");
  CHECK(HanToPinyin({"好", Lang::kCmn}, Table(), PinyinMode::kToneless, &unmapped) == "hao");
  CHECK(HanToPinyin({"好", Lang::kCmn}, Table(), PinyinMode::kNumberedTone) == "hao3");
  CHECK(HanToPinyin({"这", Lang::kCmn}, Table()) == "zhe");
  CHECK(HanToPinyin({"女", Lang::kCmn}, Table()) == "nv");
  CHECK(unmapped == 0);
  // U+E000 is private use and never in the table.
  CHECK(HanToPinyin({"\xEE\x80\x80", Lang::kCmn}, Table(), PinyinMode::kToneless,
                    &unmapped) == "\xEE\x80\x80");
  CHECK(unmapped == 1);
}

TEST_CASE("alignment examples") {
  auto align = [](Strings ref, Strings hyp) { return Align(ref, hyp); };
  AlignmentCounts c = align({"a", "b", "c"}, {"a", "b", "c"});
  CHECK(c == AlignmentCounts{0, 0, 0, 3});
  c = align({"a", "b", "c"}, {"a", "x", "c", "d"});
  CHECK(c == AlignmentCounts{1, 0, 1, 3});
  CHECK(MakeReport(RateKind::kWer, c).rate == doctest::Approx(2.0 / 3.0));
  c = align({"a"}, {});
  CHECK(c == AlignmentCounts{0, 1, 0, 1});
  CHECK(MakeReport(RateKind::kWer, c).rate == 1.0);
  // Substitution is preferred to a deletion plus an insertion.
  CHECK(align({"a", "b"}, {"b", "c"}) == AlignmentCounts{2, 0, 0, 2});
  CHECK_THROWS_AS(align({}, {"a"}), EmptyReferenceError);
}

TEST_CASE("alignment matches the exhaustive oracle") {
  const std::string alphabet[] = {"a", "b", "c"};
  std::vector<Strings> all{{}};
  for (size_t k = 0; k < all.size(); ++k) {
    if (all[k].size() == 6) continue;
    for (const std::string& s : alphabet) {
      Strings next = all[k];
      next.push_back(s);
      all.push_back(next);
    }
  }
  REQUIRE(all.size() == 1093);
  size_t pairs = 0, mismatches = 0;
  for (size_t r = 1; r < all.size(); ++r) {
    for (size_t h = 0; h < all.size(); ++h) {
      const AlignmentCounts c = Align(all[r], all[h]);
      const oracle::EditCounts o = oracle::BruteForceAlign(all[r], all[h]);
      if (c.substitutions != o.subs || c.deletions != o.dels ||
          c.insertions != o.ins) {
        ++mismatches;
      }
      ++pairs;
    }
  }
  CHECK(pairs == 1092 * 1093);
  CHECK(mismatches == 0);
}

TEST_CASE("alignment properties on random sequences") {
  Rng rng(17);
  auto random_seq = [&](size_t max_len) {
    Strings s(rng.Index(max_len + 1));
    for (std::string& x : s) x = std::string(1, static_cast<char>('a' + rng.Index(4)));
    return s;
  };
  for (int trial = 0; trial < 2000; ++trial) {
    Strings ref = random_seq(12), hyp = random_seq(12);
    if (ref.empty() || hyp.empty()) continue;
    const AlignmentCounts fwd = Align(ref, hyp);
    const AlignmentCounts back = Align(hyp, ref);
    CHECK(fwd.substitutions == back.substitutions);
    CHECK(fwd.deletions == back.insertions);
    CHECK(fwd.insertions == back.deletions);
    CHECK(fwd.substitutions + fwd.deletions <= fwd.ref_length);
    CHECK((fwd.errors() == 0) == (ref == hyp));
  }
}

TEST_CASE("mixed error rate") {
  ErrorRateReport r = MixedErrorRate("我 like 这个", "我 like this", Table());
  CHECK(MixedUnits("我 like 这个", Table()) == Strings{"wo", "like", "zhe", "ge"});
  CHECK(r.kind == RateKind::kMer);
  CHECK(r.counts == AlignmentCounts{1, 1, 0, 4});
  CHECK(r.rate == doctest::Approx(0.5));
  CHECK(MixedErrorRate("我 like 这个", "我 like 这个", Table()).rate == 0.0);
  CHECK(MixedErrorRate("hola amigo", "", Table()).rate == 1.0);
  CHECK_THROWS_AS(MixedErrorRate("", "hola", Table()), EmptyReferenceError);
  CHECK_THROWS_AS(MixedErrorRate("!!", "hola", Table()), EmptyReferenceError);
  // Homophones share Pinyin, so they count as correct.
  CHECK(MixedErrorRate("他", "她", Table()).rate == 0.0);
}

TEST_CASE("mixed error rate ignores case and punctuation") {
  const char* refs[] = {"我 like 这个", "Hola amigo, ¿qué tal?", "we go 吃饭 ok"};
  const char* hyps[] = {"我 like this", "hola amiga que tal", "we went 吃 ok"};
  for (int k = 0; k < 3; ++k) {
    const double base = MixedErrorRate(refs[k], hyps[k], Table()).rate;
    std::string ref_noisy = std::string("¡") + refs[k] + "!!";
    std::string hyp_noisy = utf8::ToLower(hyps[k]);
    for (char& c : ref_noisy) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    hyp_noisy = "... " + hyp_noisy + " ,";
    CHECK(MixedErrorRate(ref_noisy, hyp_noisy, Table()).rate == base);
  }
}

TEST_CASE("phone error rate") {
  auto per = [](Strings ref, Strings hyp) { return PhoneErrorRate(ref, hyp); };
  CHECK(per({"p", "a", "t"}, {"p", "a", "t"}).rate == 0.0);
  ErrorRateReport r = per({"p", "a", "t"}, {"b", "a", "t"});
  CHECK(r.counts.substitutions == 1);
  CHECK(r.rate == doctest::Approx(1.0 / 3.0));
  r = per({"p", "a"}, {"p", "a", "t", "o"});
  CHECK(r.counts.insertions == 2);
  CHECK(r.rate == 1.0);
  CHECK(r.kind == RateKind::kPer);
}

TEST_CASE("pooled corpus rate") {
  const std::vector<AlignmentCounts> two{{1, 0, 0, 4}, {0, 0, 1, 6}};
  CHECK(CorpusRate(two, RateKind::kMer).rate == doctest::Approx(0.2));
  const std::vector<AlignmentCounts> zero{{0, 0, 0, 3}, {0, 0, 0, 5}};
  CHECK(CorpusRate(zero, RateKind::kMer).rate == 0.0);
  const std::vector<AlignmentCounts> one{{2, 1, 0, 7}};
  CHECK(CorpusRate(one, RateKind::kWer).rate == MakeReport(RateKind::kWer, one[0]).rate);
  CHECK_THROWS_AS(CorpusRate(std::vector<AlignmentCounts>{}, RateKind::kMer), Error);

  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<AlignmentCounts> counts(1 + rng.Index(20));
    double weighted = 0.0;
    int64_t total_n = 0;
    for (AlignmentCounts& c : counts) {
      c.ref_length = 1 + static_cast<int64_t>(rng.Index(30));
      c.substitutions = static_cast<int64_t>(rng.Index(c.ref_length + 1));
      c.deletions = static_cast<int64_t>(rng.Index(c.ref_length - c.substitutions + 1));
      c.insertions = static_cast<int64_t>(rng.Index(10));
      weighted += MakeReport(RateKind::kMer, c).rate * c.ref_length;
      total_n += c.ref_length;
    }
    CHECK(CorpusRate(counts, RateKind::kMer).rate ==
          doctest::Approx(weighted / total_n).epsilon(1e-12));
  }
}

}  // namespace
}  // namespace csanon
