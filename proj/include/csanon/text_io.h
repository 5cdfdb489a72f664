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

// Line-oriented text file helpers shared by the loaders.

#ifndef CSANON_TEXT_IO_H_
#define CSANON_TEXT_IO_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace csanon {

// Non-empty lines with surrounding whitespace trimmed; lines starting with
// '#' are comments.
std::vector<std::string> ReadListFile(const std::filesystem::path& path);

// "<key>\t<value>" rows in file order. A row without a tab has an empty
// value. Blank lines are skipped. Duplicate keys raise ParseError.
std::vector<std::pair<std::string, std::string>> ReadKeyedTsv(
    const std::filesystem::path& path);

// Writes text, creating parent directories.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);
std::string ReadTextFile(const std::filesystem::path& path);

std::vector<std::string> SplitTabs(const std::string& line);

}  // namespace csanon

#endif  // CSANON_TEXT_IO_H_
