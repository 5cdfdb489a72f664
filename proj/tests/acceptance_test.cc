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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. The end-to-end checks drive the installed binaries
// on the synthetic fixture corpus, twice, and compare the two runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "csanon/align_metrics.h"
#include "csanon/asv_eer.h"
#include "csanon/corpus.h"
#include "csanon/cs_analysis.h"
#include "csanon/lpc.h"
#include "csanon/mann_whitney.h"
#include "csanon/mcadams.h"
#include "csanon/random.h"
#include "csanon/text_io.h"
#include "json.hpp"
#include "oracles.h"
#include "spectrum.h"
#include "synth.h"

namespace {

namespace fs = std::filesystem;
using namespace csanon;
using Clock = std::chrono::steady_clock;

const std::string kData = CSANON_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

std::string Fix(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

Outcome LpcOracle() {
  const auto start = Clock::now();
  Rng rng(1001);
  double worst = 0.0;
  int solved = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int order = 1 + static_cast<int>(rng.Index(20));
    const std::vector<double> r = oracle::RandomAutocorrelation(order, &rng);
    const auto model = LevinsonDurbin(r);
    if (!model || model->order() != order) continue;
    const std::vector<double> dense = oracle::DenseToeplitzSolve(r);
    for (int k = 0; k < order; ++k) {
      worst = std::max(worst, std::fabs(model->coefficients[k] - dense[k]));
    }
    ++solved;
  }
  const double elapsed = Seconds(start);
  return {solved == 1000 && worst <= 1e-8 && elapsed < 5.0,
          std::to_string(solved) + "/1000 systems, max |diff| " + Sci(worst) + " (tol 1e-8), " +
              Fix(elapsed, 2) + " s (limit 5 s)"};
}

Outcome RootRoundTrip() {
  Rng rng(1002);
  double worst = 0.0;
  int done = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const LpcModel model{oracle::ExpandRoots(oracle::RandomStablePoles(20, &rng)), 1.0};
    try {
      const LpcModel back = PolesToLpc(LpcToPoles(model));
      if (back.order() != 20) continue;
      for (int k = 0; k < 20; ++k) {
        worst = std::max(worst, std::fabs(back.coefficients[k] - model.coefficients[k]));
      }
      ++done;
    } catch (const Error&) {
    }
  }
  return {done == 1000 && worst <= 1e-6,
          std::to_string(done) + "/1000 order-20 filters, max |diff| " + Sci(worst) +
              " (tol 1e-6)"};
}

Outcome McAdamsIdentity() {
  Rng rng(1003);
  const AudioBuffer in = SynthesizeSpeechLike(10.0, 16000, {}, &rng);
  McAdamsConfig cfg;
  cfg.alpha = 1.0;
  const auto start = Clock::now();
  const AnonymizationResult out = McAdamsAnonymize(in, cfg);
  const double elapsed = Seconds(start);
  const double err = testing::RelativeRmsError(in.samples, out.audio.samples);
  return {err < 1e-3 && elapsed < 2.0 && out.audio.samples.size() == in.samples.size(),
          "relative RMS error " + Sci(err) + " (tol 1e-3), " + Fix(elapsed, 2) +
              " s for 10 s of audio (limit 2 s)"};
}

Outcome McAdamsWarp() {
  Rng rng(1004);
  const AudioBuffer in = SingleResonance(2.0, 16000, 500.0, 0.98, 0.5, &rng);
  McAdamsConfig cfg;
  cfg.alpha = 0.8;
  const AnonymizationResult out = McAdamsAnonymize(in, cfg);
  const double before = testing::DominantFrequency(in, 200.0, 1500.0);
  const double after = testing::DominantFrequency(out.audio, 200.0, 1500.0);
  const double predicted =
      std::pow(2.0 * std::numbers::pi * 500.0 / 16000.0, 0.8) * 16000.0 / (2.0 * std::numbers::pi);
  return {std::fabs(after - 692.0) <= 15.0,
          "peak " + Fix(before, 1) + " Hz -> " + Fix(after, 1) + " Hz, target 692 +/- 15 Hz " +
              "(phase power law gives " + Fix(predicted, 1) + " Hz)"};
}

std::vector<ScoredTrial> Scores(const std::vector<double>& t, const std::vector<double>& n) {
  std::vector<ScoredTrial> out;
  for (double s : t) out.push_back({s, TrialLabel::kTarget});
  for (double s : n) out.push_back({s, TrialLabel::kNontarget});
  return out;
}

std::vector<double> Normals(Rng* rng, size_t n, double mean, bool coarse) {
  std::vector<double> out(n);
  for (double& x : out) {
    x = mean + rng->Normal();
    if (coarse) x = std::round(x * 4.0) / 4.0;
  }
  return out;
}

Outcome EerCorrectness() {
  Rng rng(1005);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const bool coarse = trial % 2 == 1;
    const auto t = Normals(&rng, 1 + rng.Index(20), 1.0, coarse);
    const auto n = Normals(&rng, 1 + rng.Index(20), 0.0, coarse);
    worst = std::max(worst, std::fabs(ComputeEer(Scores(t, n)).eer -
                                      oracle::BruteForceEer(t, n)));
  }
  const auto t = Normals(&rng, 25000, 2.0, false);
  const auto n = Normals(&rng, 25000, 0.0, false);
  const double eer = ComputeEer(Scores(t, n)).eer;
  const double expected = oracle::Phi(-1.0);
  return {worst <= 1e-9 && std::fabs(eer - expected) <= 0.02,
          "10000 sets max |diff| " + Sci(worst) + " (tol 1e-9); d = 2 over 50000 trials: " +
              Fix(100 * eer, 2) + "% vs " + Fix(100 * expected, 2) + "% +/- 2 points"};
}

Outcome AlignmentCorrectness() {
  const std::string alphabet[] = {"a", "b", "c"};
  std::vector<std::vector<std::string>> all{{}};
  for (size_t k = 0; k < all.size(); ++k) {
    if (all[k].size() == 6) continue;
    for (const std::string& s : alphabet) {
      auto next = all[k];
      next.push_back(s);
      all.push_back(next);
    }
  }
  int64_t pairs = 0, mismatches = 0;
  for (size_t r = 1; r < all.size(); ++r) {
    for (size_t h = 0; h < all.size(); ++h) {
      const AlignmentCounts c = Align(all[r], all[h]);
      const oracle::EditCounts o = oracle::BruteForceAlign(all[r], all[h]);
      if (c.substitutions != o.subs || c.deletions != o.dels || c.insertions != o.ins ||
          c.ref_length != static_cast<int64_t>(all[r].size())) {
        ++mismatches;
      }
      ++pairs;
    }
  }
  const PinyinTable table = PinyinTable::Load(kData + "/pinyin.tsv");
  const ErrorRateReport mer = MixedErrorRate("我 like 这个", "我 like this", table);
  return {mismatches == 0 && mer.rate == 0.5,
          std::to_string(pairs) + " pairs, " + std::to_string(mismatches) +
              " mismatches; example MER " + Fix(100 * mer.rate, 2) + "% (expected 50%)"};
}

Transcript WithTags(const std::vector<Lang>& langs) {
  Transcript t;
  for (Lang l : langs) t.tokens.push_back({"w", l});
  return t;
}

Outcome CspCorrectness() {
  const Lang alphabet[] = {Lang::kEng, Lang::kCmn, Lang::kNeutral};
  int sequences = 0, wrong = 0;
  for (int len = 0; len <= 8; ++len) {
    int total = 1;
    for (int k = 0; k < len; ++k) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<Lang> tags;
      for (int k = 0, c = code; k < len; ++k, c /= 3) tags.push_back(alphabet[c % 3]);
      int expected = 0;
      for (int i = 0; i < len; ++i) {
        if (tags[i] == Lang::kNeutral) continue;
        for (int j = i + 1; j < len; ++j) {
          if (tags[j] == Lang::kNeutral) continue;
          if (tags[j] != tags[i]) ++expected;
          break;
        }
      }
      if (CountCsp(WithTags(tags)) != expected) ++wrong;
      ++sequences;
    }
  }
  Rng rng(1007);
  const Lang mixed[] = {Lang::kEng, Lang::kCmn, Lang::kSpa, Lang::kOther, Lang::kNeutral};
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<Lang> tags(rng.Index(16));
    for (Lang& l : tags) l = mixed[rng.Index(5)];
    const int base = CountCsp(WithTags(tags));
    const int inserts = 1 + static_cast<int>(rng.Index(5));
    for (int k = 0; k < inserts; ++k) {
      tags.insert(tags.begin() + rng.Index(tags.size() + 1), Lang::kNeutral);
    }
    if (CountCsp(WithTags(tags)) != base) ++violations;
  }
  return {wrong == 0 && violations == 0,
          std::to_string(sequences) + " sequences, " + std::to_string(wrong) +
              " wrong; 10000 neutral insertions, " + std::to_string(violations) + " violations"};
}

Outcome MannWhitney() {
  Rng rng(1008);
  int compared = 0;
  double worst = 0.0;
  bool all_exact = true;
  for (int na = 1; na <= 4; ++na) {
    for (int nb = 1; nb <= 4; ++nb) {
      for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> pool(na + nb);
        for (size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<double>(i);
        Shuffle(&pool, &rng);
        const std::vector<double> a(pool.begin(), pool.begin() + na);
        const std::vector<double> b(pool.begin() + na, pool.end());
        const MannWhitneyResult r = MannWhitneyUGreater(a, b);
        all_exact = all_exact && r.exact;
        worst = std::max(worst, std::fabs(r.p - oracle::PermutationMannWhitneyP(a, b)));
        ++compared;
      }
    }
  }
  int rejections = 0;
  bool approximate = true;
  constexpr int kSims = 10000;
  for (int s = 0; s < kSims; ++s) {
    std::vector<double> a(30), b(30);
    for (double& x : a) x = rng.Normal();
    for (double& x : b) x = rng.Normal();
    const MannWhitneyResult r = MannWhitneyUGreater(a, b);
    approximate = approximate && !r.exact;
    if (r.significant) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / kSims;
  return {all_exact && worst <= 1e-12 && approximate &&
              std::fabs(rate - kSignificanceLevel) <= 0.01,
          std::to_string(compared) + " exact cases, max |p diff| " + Sci(worst) +
              "; null rejection rate " + Fix(rate, 4) + " (0.025 +/- 0.01)"};
}

// ---------------------------------------------------------------- smoke run

int Shell(const fs::path& dir, const std::string& command, std::string* log) {
  const std::string full = "cd '" + dir.string() + "' && " + command + " 2>>stderr.log";
  *log += command + "\n";
  const int status = std::system(full.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct SmokeRun {
  bool ok = false;
  std::string failure;
  double seconds = 0.0;
};

SmokeRun RunPipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string bin = CSANON_BIN;
  const std::string fixture = CSANON_FIXTURE_BIN;
  const std::string pinyin = kData + "/pinyin.tsv";
  const std::vector<std::string> steps = {
      fixture + " --seed 7 corpus --out fixture",
      bin + " prep --manifest fixture/manifest.jsonl --out prep --seed 7 --jobs 4"
            " --n-enroll-min 1",
      bin + " anonymize --manifest prep/manifest.jsonl --out anon --seed 7 --jobs 4"
            " --alpha 0.8",
      fixture + " --seed 7 embeddings --manifest anon/manifest.jsonl --out anon_emb.jsonl",
      bin + " eval-privacy --manifest anon/manifest.jsonl --embeddings anon_emb.jsonl"
            " --out b2 --label B2",
      fixture + " hyps --manifest prep/manifest.jsonl --out orig_hyps.tsv",
      fixture + " phones --text orig_hyps.tsv --pinyin " + pinyin + " --out orig_phones.tsv",
      bin + " eval-utility --manifest prep/manifest.jsonl --hyps orig_hyps.tsv"
            " --phones-ref orig_phones.tsv --phones-hyp orig_phones.tsv --out orig"
            " --label Orig",
      fixture + " --seed 7 hyps --manifest prep/manifest.jsonl --mode perturb"
                " --out anon_hyps.tsv",
      fixture + " phones --text anon_hyps.tsv --pinyin " + pinyin + " --out anon_phones.tsv",
      bin + " eval-utility --manifest prep/manifest.jsonl --hyps anon_hyps.tsv"
            " --phones-ref orig_phones.tsv --phones-hyp anon_phones.tsv --out b2"
            " --label B2",
      bin + " analyze-csp --manifest prep/manifest.jsonl --orig-hyps orig_hyps.tsv"
            " --anon-hyps anon_hyps.tsv --mer b2/mer_per_utt.tsv --out csp",
      bin + " ablate --manifest prep/manifest.jsonl --mer b2/mer_per_utt.tsv --out ablate",
      bin + " report --systems Orig=orig,B2=b2 --dataset fixture --out report",
  };
  SmokeRun run;
  std::string log;
  const auto start = Clock::now();
  for (const std::string& step : steps) {
    const int code = Shell(dir, step, &log);
    if (code != 0) {
      run.failure = "exit " + std::to_string(code) + " from: " + step;
      run.seconds = Seconds(start);
      return run;
    }
  }
  run.seconds = Seconds(start);
  WriteTextFile(dir / "commands.txt", log);
  run.ok = true;
  return run;
}

nlohmann::json ReadJson(const fs::path& path) {
  return nlohmann::json::parse(ReadTextFile(path));
}

Outcome EndToEnd(const SmokeRun& run, const fs::path& dir) {
  if (!run.ok) return {false, run.failure};
  const CorpusManifest raw = LoadManifest(dir / "fixture" / "manifest.jsonl");
  const CorpusManifest prepared = LoadManifest(dir / "prep" / "manifest.jsonl");
  std::set<std::string> speakers;
  std::set<LangSetting> settings;
  for (const Utterance& u : prepared.utterances) {
    speakers.insert(u.speaker_id);
    settings.insert(u.lang_setting);
  }
  double eer = -1.0;
  const auto privacy = ReadJson(dir / "b2" / "privacy.json");
  for (const auto& row : privacy["pooled"]) {
    if (row["split"] == "test") eer = row["eer_avg"].get<double>();
  }
  const auto utility = ReadJson(dir / "orig" / "utility.json");
  double worst_rate = 0.0;
  for (const char* metric : {"mer", "per"}) {
    for (const auto& row : utility[metric]) {
      worst_rate = std::max(worst_rate, row["rate"].get<double>());
    }
  }
  const bool analyzed = fs::exists(dir / "csp" / "csp.json") &&
                        fs::exists(dir / "ablate" / "ablation.json") &&
                        fs::exists(dir / "report" / "report.json");
  const bool pass = speakers.size() == 3 && settings.size() == 3 && eer >= 0.40 &&
                    eer <= 0.60 && worst_rate == 0.0 && utility["per"].is_array() && analyzed &&
                    run.seconds < 60.0;
  return {pass, std::to_string(raw.utterances.size()) + " generated utterances -> " +
                    std::to_string(prepared.utterances.size()) + " prepared, " +
                    std::to_string(speakers.size()) + " speakers, " +
                    std::to_string(settings.size()) + " settings; averaged EER " +
                    Fix(100 * eer, 2) + "% (40-60%); identity MER/PER max " +
                    Fix(100 * worst_rate, 2) + "%; " + Fix(run.seconds, 1) +
                    " s (limit 60 s)"};
}

Outcome Determinism(const SmokeRun& a, const SmokeRun& b, const fs::path& dir_a,
                    const fs::path& dir_b) {
  if (!a.ok || !b.ok) return {false, "a smoke run failed"};
  int compared = 0;
  std::vector<std::string> differing;
  std::set<std::string> seen;
  for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), dir_a).generic_string();
    if (rel == "stderr.log") continue;
    seen.insert(rel);
    if (!fs::exists(dir_b / rel) ||
        ReadTextFile(entry.path()) != ReadTextFile(dir_b / rel)) {
      differing.push_back(rel);
    }
    ++compared;
  }
  for (const auto& entry : fs::recursive_directory_iterator(dir_b)) {
    const std::string rel = fs::relative(entry.path(), dir_b).generic_string();
    if (entry.is_regular_file() && rel != "stderr.log" && !seen.count(rel)) {
      differing.push_back(rel);
    }
  }
  std::string detail = std::to_string(compared) + " files compared, " +
                       std::to_string(differing.size()) + " differ";
  if (!differing.empty()) detail += " (first: " + differing.front() + ")";
  return {differing.empty() && compared > 0, detail};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    if (!o.pass) ++failures;
  };

  report("lpc_levinson_vs_dense_solve", LpcOracle);
  report("lpc_root_coefficient_round_trip", RootRoundTrip);
  report("mcadams_identity", McAdamsIdentity);
  report("mcadams_warp_500hz", McAdamsWarp);
  report("eer_correctness", EerCorrectness);
  report("alignment_correctness", AlignmentCorrectness);
  report("csp_correctness", CspCorrectness);
  report("mann_whitney", MannWhitney);

  const fs::path root = fs::temp_directory_path() / "csanon_acceptance";
  SmokeRun first, second;
  try {
    first = RunPipeline(root / "run1");
    second = RunPipeline(root / "run2");
  } catch (const std::exception& e) {
    first.failure = e.what();
  }
  report("end_to_end_smoke", [&] { return EndToEnd(first, root / "run1"); });
  report("determinism", [&] { return Determinism(first, second, root / "run1", root / "run2"); });

  std::cout << (failures == 0 ? "all acceptance criteria passed"
                              : std::to_string(failures) + " acceptance criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
