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

#include "csanon/utf8.h"

#include "doctest.h"

namespace csanon::utf8 {
namespace {

TEST_CASE("decode and encode round trip") {
  const std::string text = "a\xC3\xA9\xE6\x88\x91\xF0\x9F\x98\x80";  // a é 我 😀
  const std::u32string cps = Decode(text);
  REQUIRE(cps.size() == 4);
  CHECK(cps[0] == U'a');
  CHECK(cps[1] == 0xE9);
  CHECK(cps[2] == 0x6211);
  CHECK(cps[3] == 0x1F600);
  CHECK(Encode(cps) == text);
}

TEST_CASE("malformed input becomes replacement characters") {
  CHECK(Decode("\xFF") == std::u32string{0xFFFD});
  CHECK(Decode("a\xE6\x88") == std::u32string{U'a', 0xFFFD});
  CHECK(Decode("\xC3(") == std::u32string{0xFFFD, U'('});
}

TEST_CASE("character classes") {
  CHECK(IsHan(0x6211));
  CHECK(IsHan(0x3400));
  CHECK(IsHan(0x20000));
  CHECK_FALSE(IsHan(U'a'));
  CHECK_FALSE(IsHan(0x3002));  // ideographic full stop
  CHECK(IsDigit(U'7'));
  CHECK(IsDigit(0xFF17));  // fullwidth 7
  CHECK_FALSE(IsDigit(U'x'));
  CHECK(IsSpace(0x3000));
  CHECK(IsApostrophe(0x2019));
  CHECK(IsPunctuation(U','));
  CHECK(IsPunctuation(0xFF0C));  // fullwidth comma
  CHECK(IsPunctuation(0x3002));
  CHECK_FALSE(IsPunctuation(U'a'));
}

TEST_CASE("lowercasing") {
  CHECK(ToLower("HeLLo") == "hello");
  CHECK(ToLower("\xC3\x89T\xC3\x89") == "\xC3\xA9t\xC3\xA9");  // ÉTÉ
  CHECK(ToLower("\xC5\x81") == "\xC5\x82");                      // Ł
  CHECK(ToLower("我") == "我");
}

TEST_CASE("whitespace splitting") {
  CHECK(SplitWhitespace("  a  b\tc\n") == std::vector<std::string>{"a", "b", "c"});
  CHECK(SplitWhitespace("我\xE3\x80\x80你") == std::vector<std::string>{"我", "你"});
  CHECK(SplitWhitespace("   ").empty());
}

}  // namespace
}  // namespace csanon::utf8
