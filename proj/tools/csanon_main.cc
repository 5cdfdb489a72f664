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

// csanon: prepare, anonymize and evaluate code-switched speech corpora.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cli/commands.h"
#include "csanon/error.h"
#include "csanon/text_io.h"

namespace {

namespace fs = std::filesystem;
using namespace csanon::cli;

const std::string kData = CSANON_DEFAULT_DATA_DIR;

// Keeps the shared options and the selected subcommand's options; the other
// subcommands' defaults would only add noise.
std::string ResolvedConfig(const CLI::App& app, const CLI::App* selected) {
  std::istringstream all(app.config_to_str(true, false));
  std::string out, line;
  while (std::getline(all, line)) {
    bool other = false;
    for (const CLI::App* sub : app.get_subcommands({})) {
      if (sub != selected && line.rfind(sub->get_name() + ".", 0) == 0) other = true;
    }
    if (!other) out += line + "\n";
  }
  return "# subcommand: " + selected->get_name() + "\n" + out;
}

void AddLexiconOptions(CLI::App* sub, std::string* en, std::string* es, std::string* matrix) {
  *en = kData + "/lexicon_en.txt";
  *es = kData + "/lexicon_es.txt";
  sub->add_option("--lexicon-en", *en, "English word list");
  sub->add_option("--lexicon-es", *es, "Spanish word list");
  sub->add_option("--matrix-lang", *matrix, "Fallback language for unknown words (eng, cmn, spa)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speaker anonymization and evaluation for code-switched speech."};
  app.option_defaults()->always_capture_default();
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file with the same option names");

  CommonOptions common;
  app.add_option("--manifest", common.manifest, "Utterance manifest (JSON lines)");
  app.add_option("--out", common.out, "Output directory");
  app.add_option("--seed", common.seed, "Seed for every random choice");
  app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);

  PrepOptions prep;
  prep.particles = kData + "/particles.txt";
  prep.patterns = kData + "/annotation_patterns.txt";
  CLI::App* prep_cmd = app.add_subcommand("prep", "Clean, partition, merge and split a corpus");
  prep_cmd->add_option("--audio-root", prep.audio_root, "Base of relative audio paths");
  prep_cmd->add_option("--particles", prep.particles, "Discourse particles to remove");
  prep_cmd->add_option("--patterns", prep.patterns, "Annotation patterns to remove");
  AddLexiconOptions(prep_cmd, &prep.lexicon_en, &prep.lexicon_es, &prep.matrix_lang);
  prep_cmd->add_option("--max-duration", prep.max_duration_s, "Drop longer utterances (s)");
  prep_cmd->add_option("--min-duration", prep.concat.min_duration_s,
                       "Merge shorter utterances (s)");
  prep_cmd->add_option("--loudness-tol-db", prep.concat.loudness_tol_db,
                       "Max loudness difference for merging (dB)");
  prep_cmd->add_option("--gap", prep.concat.gap_s, "Silence between merged utterances (s)");
  prep_cmd->add_option("--n-enroll-min", prep.n_enroll_min, "Fewest enroll utterances");
  prep_cmd->add_option("--n-enroll-max", prep.n_enroll_max, "Most enroll utterances");

  AnonymizeOptions anon;
  bool randomize = false;
  double alpha_min = 0.5, alpha_max = 0.9;
  CLI::App* anon_cmd = app.add_subcommand("anonymize", "McAdams-coefficient anonymization");
  anon_cmd->add_option("--audio-root", anon.audio_root, "Base of relative audio paths");
  anon_cmd->add_option("--alpha", anon.mcadams.alpha, "McAdams coefficient");
  anon_cmd->add_flag("--randomize-alpha", randomize,
                     "Draw alpha per utterance from [alpha-min, alpha-max]");
  anon_cmd->add_option("--alpha-min", alpha_min, "Lower end of the random alpha range");
  anon_cmd->add_option("--alpha-max", alpha_max, "Upper end of the random alpha range");
  anon_cmd->add_option("--frame-ms", anon.mcadams.frame_ms, "Frame length (ms)");
  anon_cmd->add_option("--hop-ms", anon.mcadams.hop_ms, "Hop (ms)");
  anon_cmd->add_option("--lpc-order", anon.mcadams.lpc_order, "LPC order, 0 for rate-based");
  anon_cmd->add_option("--imag-eps", anon.mcadams.imag_eps, "Real-pole threshold");

  PrivacyOptions privacy;
  CLI::App* privacy_cmd = app.add_subcommand("eval-privacy", "EER from speaker embeddings");
  privacy_cmd->add_option("--embeddings", privacy.embeddings, "utt_id and vector per line")
      ->required();
  privacy_cmd->add_option("--label", privacy.label, "System name for the tables");
  privacy_cmd->add_flag("--allow-partial", privacy.allow_partial,
                        "Score what is covered instead of failing");

  UtilityOptions utility;
  utility.pinyin = kData + "/pinyin.tsv";
  CLI::App* utility_cmd = app.add_subcommand("eval-utility", "MER and PER from ASR output");
  utility_cmd->add_option("--hyps", utility.hyps, "utt_id and hypothesis text per line")
      ->required();
  utility_cmd->add_option("--phones-ref", utility.phones_ref, "Reference phone sequences");
  utility_cmd->add_option("--phones-hyp", utility.phones_hyp, "Hypothesis phone sequences");
  utility_cmd->add_option("--pinyin", utility.pinyin, "Han to pinyin table");
  utility_cmd->add_flag("--numbered-tones", utility.numbered_tones,
                        "Keep tone numbers on pinyin units");
  utility_cmd->add_option("--split", utility.split, "train, dev, test or all");
  utility_cmd->add_option("--label", utility.label, "System name for the tables");
  utility_cmd->add_flag("--allow-partial", utility.allow_partial,
                        "Score what is covered instead of failing");

  CspOptions csp;
  CLI::App* csp_cmd = app.add_subcommand("analyze-csp", "Code-switching points before/after");
  csp_cmd->add_option("--orig-hyps", csp.orig_hyps, "Hypotheses on original audio")->required();
  csp_cmd->add_option("--anon-hyps", csp.anon_hyps, "Hypotheses on anonymized audio")
      ->required();
  csp_cmd->add_option("--mer", csp.mer, "Per-utterance MER table of the anonymized system")
      ->required();
  AddLexiconOptions(csp_cmd, &csp.lexicon_en, &csp.lexicon_es, &csp.matrix_lang);
  csp_cmd->add_flag("--pretagged", csp.pretagged, "Hypotheses are word/TAG sequences");

  AblateOptions ablate;
  ablate.experiments = kData + "/ablation_flags.txt";
  CLI::App* ablate_cmd = app.add_subcommand("ablate", "MER after removing flagged utterances");
  ablate_cmd->add_option("--mer", ablate.mer, "Per-utterance MER table")->required();
  ablate_cmd->add_option("--experiments", ablate.experiments, "Experiment definitions");
  ablate_cmd->add_option("--only", ablate.only, "Comma-separated experiment names");
  ablate_cmd->add_option("--by-setting", ablate.by_setting, "Also report each setting");

  ReportOptions report;
  CLI::App* report_cmd = app.add_subcommand("report", "Combine system results into one table");
  report_cmd->add_option("--systems", report.systems, "Comma-separated NAME=DIR pairs")
      ->required();
  report_cmd->add_option("--dataset", report.dataset, "Dataset name for the row labels");
  report_cmd->add_option("--split", report.split, "Split whose EER is reported");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  const CLI::App* selected = app.get_subcommands().front();
  std::ostream& log = std::cerr;
  try {
    if (common.manifest.empty() && selected != csp_cmd && selected != report_cmd) {
      throw csanon::Error("--manifest is required for " + selected->get_name());
    }
    if (randomize) anon.mcadams.randomize_alpha = std::make_pair(alpha_min, alpha_max);
    csanon::WriteTextFile(fs::path(common.out) / ("config." + selected->get_name() + ".toml"),
                          ResolvedConfig(app, selected));
    if (selected == prep_cmd) return RunPrep(common, prep, log);
    if (selected == anon_cmd) return RunAnonymize(common, anon, log);
    if (selected == privacy_cmd) return RunEvalPrivacy(common, privacy, log);
    if (selected == utility_cmd) return RunEvalUtility(common, utility, log);
    if (selected == csp_cmd) return RunAnalyzeCsp(common, csp, log);
    if (selected == ablate_cmd) return RunAblate(common, ablate, log);
    return RunReport(common, report, log);
  } catch (const std::exception& e) {
    std::cerr << "csanon " << selected->get_name() << ": error: " << e.what() << "\n";
    return kExitError;
  }
}
