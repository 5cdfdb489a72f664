#!/usr/bin/env python3
# Copyright 2026 The csanon Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/pinyin.tsv from the pinyin-data readings shipped with pypinyin.

Each output row is: <hex codepoint> TAB <comma-separated numbered readings>.
Readings keep the source order, so the first entry is the primary reading.
Neutral-tone syllables carry no digit; u-umlaut is written as 'v'.
"""
import sys
import unicodedata

from pypinyin.pinyin_dict import pinyin_dict

HAN_RANGES = [
    (0x3400, 0x4DBF), (0x4E00, 0x9FFF), (0xF900, 0xFAFF),
    (0x20000, 0x2A6DF), (0x2A700, 0x2EBEF), (0x30000, 0x3134F),
]

TONE_MARKS = {"̄": "1", "́": "2", "̌": "3", "̀": "4"}


def numbered(syllable):
    tone = ""
    out = []
    for ch in unicodedata.normalize("NFD", syllable):
        if ch in TONE_MARKS:
            tone = TONE_MARKS[ch]
        elif ch == "̈":
            out[-1] = "v"
        else:
            out.append(ch)
    return "".join(out) + tone


def is_han(cp):
    return any(lo <= cp <= hi for lo, hi in HAN_RANGES)


def main(path):
    with open(path, "w", encoding="utf-8") as f:
        f.write("# readings derived from pypinyin (MIT) and the Unicode Unihan database\n")
        f.write("# codepoint\treadings (numbered tones, primary first)\n")
        for cp in sorted(pinyin_dict):
            if not is_han(cp):
                continue
            readings = [numbered(r) for r in pinyin_dict[cp].split(",")]
            f.write("%04X\t%s\n" % (cp, ",".join(readings)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/pinyin.tsv")
