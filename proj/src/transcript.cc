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

#include "csanon/transcript.h"

#include "csanon/error.h"
#include "csanon/utf8.h"

namespace csanon {

std::string_view LangName(Lang lang) {
  switch (lang) {
    case Lang::kEng: return "ENG";
    case Lang::kCmn: return "CMN";
    case Lang::kSpa: return "SPA";
    case Lang::kOther: return "OTHER";
    case Lang::kNeutral: return "NEUTRAL";
  }
  return "OTHER";
}

std::optional<Lang> ParseLang(std::string_view name) {
  if (name == "ENG") return Lang::kEng;
  if (name == "CMN") return Lang::kCmn;
  if (name == "SPA") return Lang::kSpa;
  if (name == "OTHER") return Lang::kOther;
  if (name == "NEUTRAL") return Lang::kNeutral;
  return std::nullopt;
}

Transcript TokenizeMixed(std::string_view text, std::string utt_id) {
  Transcript out;
  out.utt_id = std::move(utt_id);
  std::string word;
  bool word_is_digits = false;

  auto flush = [&]() {
    if (!word.empty()) {
      out.tokens.push_back({word, word_is_digits ? Lang::kNeutral : Lang::kOther});
      word.clear();
    }
  };

  for (char32_t cp : utf8::Decode(text)) {
    if (utf8::IsHan(cp)) {
      flush();
      out.tokens.push_back({utf8::Encode(cp), Lang::kCmn});
    } else if (utf8::IsDigit(cp)) {
      if (!word.empty() && !word_is_digits) flush();
      word_is_digits = true;
      utf8::Append(&word, cp >= 0xFF10 ? cp - 0xFF10 + U'0' : cp);
    } else if (utf8::IsApostrophe(cp)) {
      // Dropped, so "don't" stays one word.
      if (word_is_digits) flush();
    } else if (utf8::IsSpace(cp) || utf8::IsPunctuation(cp) || cp == 0xFFFD) {
      flush();
    } else {
      if (!word.empty() && word_is_digits) flush();
      word_is_digits = false;
      utf8::Append(&word, utf8::ToLower(cp));
    }
  }
  flush();
  return out;
}

std::vector<std::string> Surfaces(const Transcript& transcript) {
  std::vector<std::string> out;
  out.reserve(transcript.tokens.size());
  for (const Token& t : transcript.tokens) out.push_back(t.surface);
  return out;
}

Transcript ParsePretagged(std::string_view text, std::string utt_id) {
  Transcript out;
  out.utt_id = std::move(utt_id);
  for (const std::string& piece : utf8::SplitWhitespace(text)) {
    const size_t slash = piece.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == piece.size()) {
      throw Error("malformed tagged token '" + piece + "'");
    }
    const std::optional<Lang> lang = ParseLang(piece.substr(slash + 1));
    if (!lang) throw Error("unknown language tag in '" + piece + "'");
    out.tokens.push_back({piece.substr(0, slash), *lang});
  }
  return out;
}

std::string FormatPretagged(const Transcript& transcript) {
  std::string out;
  for (const Token& t : transcript.tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface;
    out += '/';
    out += LangName(t.lang);
  }
  return out;
}

}  // namespace csanon
