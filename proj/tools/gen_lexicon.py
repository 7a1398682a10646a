#!/usr/bin/env python3
# Copyright 2026 The CharGround Authors.
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
"""Generates data/lexicon/characters.txt from a WordNet dict/ directory.

Collects every single-word noun lemma in the hyponym closure of the first
senses of `person`, `animal` and `vehicle`. Instance hyponyms (named
individuals) are not followed.

    python3 tools/gen_lexicon.py /path/to/wordnet/dict > data/lexicon/characters.txt
"""

import os
import sys

ROOTS = ("person", "animal", "vehicle")


def first_sense(index_path, lemma):
    with open(index_path, encoding="utf-8") as f:
        for line in f:
            if line.startswith(lemma + " "):
                parts = line.split()
                synset_cnt = int(parts[2])
                return parts[-synset_cnt]
    raise KeyError(lemma)


def load_synsets(data_path):
    synsets = {}
    with open(data_path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("  "):
                continue
            parts = line.split(" | ")[0].split()
            offset = parts[0]
            w_cnt = int(parts[3], 16)
            words = [parts[4 + 2 * i] for i in range(w_cnt)]
            pos = 4 + 2 * w_cnt
            p_cnt = int(parts[pos])
            hyponyms = []
            for i in range(p_cnt):
                sym, target, ss_type = parts[pos + 1 + 4 * i: pos + 4 + 4 * i]
                if sym == "~" and ss_type == "n":
                    hyponyms.append(target)
            synsets[offset] = (words, hyponyms)
    return synsets


def main():
    dict_dir = sys.argv[1]
    synsets = load_synsets(os.path.join(dict_dir, "data.noun"))
    stack = [first_sense(os.path.join(dict_dir, "index.noun"), r) for r in ROOTS]
    seen = set()
    lemmas = set()
    while stack:
        off = stack.pop()
        if off in seen:
            continue
        seen.add(off)
        words, hyponyms = synsets[off]
        for w in words:
            w = w.split("(")[0].lower()
            if "_" not in w:
                lemmas.add(w)
        stack.extend(hyponyms)
    print("# Noun lemmas under person.n.01, animal.n.01, vehicle.n.01 (WordNet 3.1).")
    print("# Generated by tools/gen_lexicon.py; one lowercase lemma per line.")
    for w in sorted(lemmas):
        print(w)


if __name__ == "__main__":
    main()
