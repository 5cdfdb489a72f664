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

// csanon-fixture: a small synthetic corpus and stand-ins for the external
// ASR and speaker-embedding outputs, for smoke runs and tests.

#include <cctype>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "csanon/align_metrics.h"
#include "csanon/audio.h"
#include "csanon/corpus.h"
#include "csanon/error.h"
#include "csanon/random.h"
#include "csanon/text_io.h"
#include "csanon/transcript.h"
#include "synth.h"

namespace {

namespace fs = std::filesystem;
using namespace csanon;

constexpr int kRate = 16000;
constexpr double kLevelDb = -22.0;

struct Line {
  const char* tag;
  const char* text;
  double duration_s;
  const char* flags;
};

// Per speaker: 4 EN, 2 short EN that merge, 1 overlapped EN, 4 ZH, 4 CS.
const Line kLines[] = {
    {"en1", "i want to go home now", 2.3, ""},
    {"en2", "we should meet after work tomorrow", 2.6, ""},
    {"en3", "the weather is really nice today", 2.4, ""},
    {"en4", "can you send me the report", 2.2, ""},
    {"en5", "thank you", 1.0, ""},
    {"en6", "see you later", 1.2, ""},
    {"en7", "yes that is right", 2.1, "overlap"},
    {"zh1", "我们今天去吃饭", 2.2, ""},
    {"zh2", "他在学校学习 [laugh]", 2.5, ""},
    {"zh3", "这个很好", 2.1, ""},
    {"zh4", "你明天有没有时间", 2.4, ""},
    {"cs1", "我 want to 吃 dinner lah", 2.3, "filled_pause"},
    {"cs2", "this one 很 好 吃", 2.2, ""},
    {"cs3", "我们 go shopping 吧", 2.5, "abbreviation"},
    {"cs4", "oh 我 觉得 the movie 很 有意思", 2.6, ""},
};

struct Speaker {
  const char* id;
  VoiceParams voice;
};

const Speaker kSpeakers[] = {
    {"spk01", {180.0, 1.00, 0.5}},
    {"spk02", {210.0, 1.08, 0.5}},
    {"spk03", {165.0, 0.95, 0.5}},
};

AudioBuffer AtLevel(AudioBuffer audio, double level_db) {
  const double gain = std::pow(10.0, (level_db - RmsDb(audio)) / 20.0);
  for (float& x : audio.samples) {
    // Stored as 16-bit PCM; quantize now so the written file is exact.
    x = static_cast<float>(std::round(std::clamp(x * gain, -1.0, 32767.0 / 32768.0) * 32768.0) /
                           32768.0);
  }
  return audio;
}

void MakeCorpus(const fs::path& out, uint64_t seed) {
  CorpusManifest manifest;
  manifest.name = "fixture";
  for (const Speaker& spk : kSpeakers) {
    for (const Line& line : kLines) {
      Utterance u;
      u.utt_id = std::string(spk.id) + "_" + line.tag;
      u.speaker_id = spk.id;
      u.gender = Gender::kF;
      u.split = Split::kTest;
      u.transcript = line.text;
      if (*line.flags) u.annotations.insert(line.flags);
      u.audio_path = "audio/" + std::string(spk.id) + "/" + u.utt_id + ".wav";
      Rng rng(MixSeed(seed, u.utt_id));
      const AudioBuffer audio =
          AtLevel(SynthesizeSpeechLike(line.duration_s, kRate, spk.voice, &rng), kLevelDb);
      u.duration_s = audio.DurationSeconds();
      WriteWav(out / u.audio_path, audio, SampleFormat::kPcm16);
      manifest.utterances.push_back(std::move(u));
    }
  }
  SaveManifest(out / "manifest.jsonl", manifest);
}

void MakeEmbeddings(const std::string& manifest_path, const fs::path& out, uint64_t seed,
                    int dim) {
  std::string text;
  for (const Utterance& u : LoadManifest(manifest_path).utterances) {
    Rng rng(MixSeed(seed, u.utt_id));
    std::vector<double> v(dim);
    for (double& x : v) x = rng.Normal();
    nlohmann::ordered_json row;
    row["utt_id"] = u.utt_id;
    row["embedding"] = v;
    text += row.dump() + "\n";
  }
  WriteTextFile(out, text);
}

bool IsLatin(const std::string& surface) {
  return !surface.empty() && std::isalpha(static_cast<unsigned char>(surface[0]));
}

// Deterministic edits standing in for recognition errors: some hypotheses
// are exact, some lose their English words, some drop the last word and
// some get one Chinese character wrong.
std::string Perturb(const std::string& text, const std::string& utt_id, uint64_t seed) {
  std::vector<Token> tokens = TokenizeMixed(text, utt_id).tokens;
  Rng rng(MixSeed(seed, utt_id));
  switch (rng.Index(4)) {
    case 0:
      break;
    case 1:
      for (Token& t : tokens) {
        if (IsLatin(t.surface)) t.surface = "这";
      }
      break;
    case 2:
      if (tokens.size() > 1) tokens.pop_back();
      break;
    default:
      for (Token& t : tokens) {
        if (!IsLatin(t.surface)) {
          t.surface = t.surface == "他" ? "她" : "他";
          break;
        }
      }
  }
  std::string out;
  for (const Token& t : tokens) out += (out.empty() ? "" : " ") + t.surface;
  return out;
}

void MakeHyps(const std::string& manifest_path, const fs::path& out, const std::string& mode,
              uint64_t seed) {
  if (mode != "identity" && mode != "perturb") throw Error("mode must be identity or perturb");
  std::string text;
  for (const Utterance& u : LoadManifest(manifest_path).utterances) {
    text += u.utt_id + "\t" +
            (mode == "identity" ? u.transcript : Perturb(u.transcript, u.utt_id, seed)) + "\n";
  }
  WriteTextFile(out, text);
}

// One pseudo-phone per letter of each scoring unit.
void MakePhones(const std::string& text_path, const std::string& pinyin, const fs::path& out) {
  const PinyinTable table = PinyinTable::Load(pinyin);
  std::string text;
  for (const auto& [id, line] : ReadKeyedTsv(text_path)) {
    std::string phones;
    for (const std::string& unit : MixedUnits(line, table)) {
      for (char c : unit) {
        if (!phones.empty()) phones += ' ';
        phones += c;
      }
    }
    text += id + "\t" + phones + "\n";
  }
  WriteTextFile(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic fixtures for csanon."};
  app.require_subcommand(1);
  uint64_t seed = 1;
  app.add_option("--seed", seed, "Seed")->capture_default_str();
  app.fallthrough();

  std::string out;
  std::string manifest;
  CLI::App* corpus = app.add_subcommand("corpus", "Write manifest.jsonl and audio/ under --out");
  corpus->add_option("--out", out, "Output directory")->required();

  int dim = 192;
  CLI::App* emb = app.add_subcommand("embeddings", "Random embeddings for every utterance");
  emb->add_option("--manifest", manifest)->required();
  emb->add_option("--out", out, "Output JSONL")->required();
  emb->add_option("--dim", dim)->capture_default_str();

  std::string mode = "identity";
  CLI::App* hyps = app.add_subcommand("hyps", "Hypotheses derived from the manifest transcripts");
  hyps->add_option("--manifest", manifest)->required();
  hyps->add_option("--out", out, "Output TSV")->required();
  hyps->add_option("--mode", mode, "identity or perturb")->capture_default_str();

  std::string text_path, pinyin;
  CLI::App* phones = app.add_subcommand("phones", "Letter pseudo-phones for a text TSV");
  phones->add_option("--text", text_path)->required();
  phones->add_option("--pinyin", pinyin)->required();
  phones->add_option("--out", out, "Output TSV")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (corpus->parsed()) MakeCorpus(out, seed);
    if (emb->parsed()) MakeEmbeddings(manifest, out, seed, dim);
    if (hyps->parsed()) MakeHyps(manifest, out, mode, seed);
    if (phones->parsed()) MakePhones(text_path, pinyin, out);
  } catch (const std::exception& e) {
    std::cerr << "csanon-fixture: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
