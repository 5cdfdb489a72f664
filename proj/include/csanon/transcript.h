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

#ifndef CSANON_TRANSCRIPT_H_
#define CSANON_TRANSCRIPT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csanon {

// Token-level language tag. NEUTRAL marks digit-only tokens; OTHER marks
// words no lexicon claims.
enum class Lang { kEng, kCmn, kSpa, kOther, kNeutral };

std::string_view LangName(Lang lang);
std::optional<Lang> ParseLang(std::string_view name);

struct Token {
  std::string surface;
  Lang lang = Lang::kOther;

  bool operator==(const Token&) const = default;
};

struct Transcript {
  std::string utt_id;
  std::vector<Token> tokens;
};

// Each Han ideograph becomes its own CMN token, maximal runs of other word
// characters become lowercased OTHER tokens, digit runs become NEUTRAL
// tokens. Apostrophes inside words are dropped; all other punctuation and
// whitespace separate tokens and are discarded.
Transcript TokenizeMixed(std::string_view text, std::string utt_id = {});

std::vector<std::string> Surfaces(const Transcript& transcript);

// Parses "surface/TAG surface/TAG ..." as produced by an external tagger.
// The tag is taken after the last '/'. Throws Error on a malformed pair.
Transcript ParsePretagged(std::string_view text, std::string utt_id = {});
std::string FormatPretagged(const Transcript& transcript);

}  // namespace csanon

#endif  // CSANON_TRANSCRIPT_H_
