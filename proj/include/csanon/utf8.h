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

// Minimal UTF-8 handling: decoding, encoding and the character classes the
// tokenizers need (Han ideographs, Latin letters, digits, punctuation).

#ifndef CSANON_UTF8_H_
#define CSANON_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace csanon {
namespace utf8 {

// Decodes a UTF-8 string. Invalid bytes decode to U+FFFD.
std::u32string Decode(std::string_view text);

void Append(std::string* out, char32_t cp);
std::string Encode(std::u32string_view text);
std::string Encode(char32_t cp);

bool IsHan(char32_t cp);
bool IsDigit(char32_t cp);
bool IsSpace(char32_t cp);
// Apostrophes that are dropped inside words ("don't" -> "dont").
bool IsApostrophe(char32_t cp);
// Punctuation and symbols from the ASCII, Latin-1, general punctuation, CJK
// punctuation and fullwidth blocks.
bool IsPunctuation(char32_t cp);

// Lowercases ASCII, Latin-1 Supplement and Latin Extended-A letters.
char32_t ToLower(char32_t cp);
std::string ToLower(std::string_view text);

// Splits on ASCII and ideographic whitespace; drops empty pieces.
std::vector<std::string> SplitWhitespace(std::string_view text);

}  // namespace utf8
}  // namespace csanon

#endif  // CSANON_UTF8_H_
