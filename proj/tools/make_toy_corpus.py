#!/usr/bin/env python3
# Copyright 2026 The bagorder Authors.
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
"""Writes the bundled toy corpus: 200 tokenized sentences of 1..8 words."""

import argparse
import random

DET = ["the", "a", "this"]
ADJ = ["small", "old", "red", "quiet"]
NOUN = ["cat", "dog", "man", "girl", "house", "book", "river", "tree"]
NAME = ["john", "mary", "lee"]
VERB_T = ["sees", "likes", "reads", "finds", "paints"]
VERB_I = ["sleeps", "runs", "sings", "waits"]
PREP = ["near", "under", "with"]
PRON = ["he", "she", "they"]
ADV = ["today", "again", "slowly"]
INTERJ = ["yes", "no", "hello", "thanks"]


def np(rng):
    r = rng.random()
    if r < 0.25:
        return [rng.choice(NAME)]
    if r < 0.6:
        return [rng.choice(DET), rng.choice(NOUN)]
    return [rng.choice(DET), rng.choice(ADJ), rng.choice(NOUN)]


def subject(rng):
    return [rng.choice(PRON)] if rng.random() < 0.3 else np(rng)


def sentence(rng):
    r = rng.random()
    if r < 0.04:
        return [rng.choice(INTERJ)]
    if r < 0.3:
        s = subject(rng) + [rng.choice(VERB_I)]
    elif r < 0.75:
        s = subject(rng) + [rng.choice(VERB_T)] + np(rng)
    else:
        s = subject(rng) + [rng.choice(VERB_I), rng.choice(PREP)] + np(rng)
    if rng.random() < 0.3:
        s.append(rng.choice(ADV))
    return s


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-length", type=int, default=8)
    ap.add_argument("out")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    lines = []
    while len(lines) < args.count:
        s = sentence(rng)
        if len(s) <= args.max_length:
            lines.append(" ".join(s))
    with open(args.out, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
