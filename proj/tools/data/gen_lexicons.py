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
"""Regenerates data/lexicon_{en,es}.txt from wordfreq frequency lists.

A word is kept for a language unless it is at least 10x more frequent in the
other one, which removes loanwords such as "the" from the Spanish list while
keeping shared words like "no" in both.
"""
import re
import sys

import wordfreq

WORD = re.compile(r"^[a-záéíóúüñ]+$")
OTHER = {"en": "es", "es": "en"}


def main(outdir, n):
    for lang in ("en", "es"):
        words = []
        for w in wordfreq.top_n_list(lang, n * 3):
            if not WORD.match(w):
                continue
            if wordfreq.word_frequency(w, OTHER[lang]) >= 10 * wordfreq.word_frequency(w, lang):
                continue
            words.append(w)
        with open("%s/lexicon_%s.txt" % (outdir, lang), "w", encoding="utf-8") as f:
            f.write("# top %s words by frequency (wordfreq)\n" % lang)
            f.write("# word list derived from wordfreq data, CC BY-SA 4.0\n")
            for w in words[:n]:
                f.write(w + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data", 5000)
