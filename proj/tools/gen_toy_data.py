#!/usr/bin/env python3
#
# Copyright 2026 The FGWS Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Generates the bundled toy sentiment corpus and the small detection fixture.

Output is deterministic for a given --seed.
"""

import argparse
import json
import math
import random
from collections import Counter
from pathlib import Path

# Synsets of sentiment adjectives. Tiers by position: two heads, one mid,
# two rare (count 1-10 in train), one never seen in train.
POSITIVE = [
    ["smart", "clever", "intelligent", "brainy", "canny", "impertinent"],
    ["sweet", "charming", "delightful", "endearing", "adorable", "odoriferous"],
    ["good", "great", "decent", "splendid", "salutary", "goodly"],
    ["funny", "hilarious", "amusing", "droll", "waggish", "farcical"],
    ["beautiful", "gorgeous", "lovely", "comely", "bonny", "pulchritudinous"],
    ["exciting", "thrilling", "gripping", "riveting", "electrifying", "rousing"],
    ["brilliant", "excellent", "outstanding", "stellar", "peerless", "superlative"],
    ["warm", "tender", "heartfelt", "poignant", "cordial", "affecting"],
]
NEGATIVE = [
    ["bad", "awful", "terrible", "dreadful", "lousy", "atrocious"],
    ["boring", "dull", "tedious", "monotonous", "humdrum", "soporific"],
    ["stupid", "dumb", "foolish", "inane", "asinine", "fatuous"],
    ["ugly", "hideous", "unsightly", "grotesque", "unlovely", "gruesome"],
    ["weak", "feeble", "flimsy", "insipid", "anemic", "vapid"],
    ["slow", "sluggish", "plodding", "ponderous", "leaden", "draggy"],
    ["messy", "sloppy", "chaotic", "muddled", "slapdash", "disheveled"],
    ["annoying", "irritating", "grating", "tiresome", "irksome", "galling"],
]
# Neutral nouns: two heads, one mid, one rare, one unseen.
NOUNS = [
    ["movie", "film", "picture", "flick", "photoplay"],
    ["story", "plot", "narrative", "storyline", "yarn"],
    ["cast", "actors", "performers", "ensemble", "troupe"],
    ["ending", "finale", "conclusion", "denouement", "coda"],
    ["music", "soundtrack", "score", "orchestration", "underscore"],
    ["script", "screenplay", "dialogue", "scenario", "libretto"],
    ["direction", "staging", "filmmaking", "helming", "mise"],
    ["scenes", "sequences", "segments", "vignettes", "tableaux"],
]
NAMES = ["tom", "anna", "mark", "lucy", "peter", "sarah", "james", "emma",
         "david", "olivia", "hugo", "nina"]
FILLERS = ["performance", "moment", "bits", "there", "some", "honestly",
           "overall", "also", "though", "watched", "yesterday", "weekend",
           "friends", "theater", "parts", "whole", "thing", "seemed",
           "gave", "found", "felt", "were", "what", "rather", "truly"]
STOPWORDS = ["the", "a", "an", "and", "but", "of", "is", "was", "this", "it",
             "with", "to", "in", "that", "very", "really", "quite", "so",
             "i", "its", "were", "there", "some", "also", "though", "what"]
ADVERBS = ["very", "really", "quite", "rather", "truly", "so"]


def check_unique():
    words = [w for s in POSITIVE + NEGATIVE + NOUNS for w in s]
    words += NAMES + FILLERS
    dup = [w for w, c in Counter(words).items() if c > 1 and w not in STOPWORDS]
    assert not dup, dup


class Generator:
    def __init__(self, rng):
        self.rng = rng
        self.synset_weight = {}
        for s in POSITIVE + NEGATIVE:
            self.synset_weight[s[0]] = rng.uniform(0.4, 1.6)
        self.head_toggle = Counter()
        # Rare tier: two members per polar synset share one exact train count.
        self.rare_count = {}
        for s in POSITIVE + NEGATIVE:
            c = rng.randint(2, 10)
            self.rare_count[s[3]] = c
            self.rare_count[s[4]] = c

    def pick_synset(self, polarity):
        pool = POSITIVE if polarity > 0 else NEGATIVE
        weights = [self.synset_weight[s[0]] for s in pool]
        return self.rng.choices(pool, weights)[0]

    def member(self, synset, mid_prob):
        if self.rng.random() < mid_prob:
            return synset[2]
        # Alternate the two heads so their counts stay close.
        k = synset[0]
        self.head_toggle[k] += 1
        return synset[self.head_toggle[k] % 2]

    def adjective(self, polarity):
        return self.member(self.pick_synset(polarity), 0.16)

    def noun(self):
        s = self.rng.choice(NOUNS)
        r = self.rng.random()
        if r < 0.012:
            return s[3]
        if r < 0.15:
            return s[2]
        return s[self.rng.randint(0, 1)]

    def clause(self, polarity):
        r = self.rng
        t = r.randrange(8)
        adj = self.adjective(polarity)
        if t == 0:
            return f"the {self.noun()} was {adj}"
        if t == 1:
            return f"the {self.noun()} is {r.choice(ADVERBS)} {adj}"
        if t == 2:
            return f"{r.choice(NAMES)} gave a {adj} performance"
        if t == 3:
            return f"i found the {self.noun()} {adj}"
        if t == 4:
            return f"it was a {adj} {self.noun()}"
        if t == 5:
            return f"what a {adj} {self.noun()}"
        if t == 6:
            return f"the {self.noun()} felt {adj} and {self.adjective(polarity)}"
        return f"{r.choice(NAMES)} and {r.choice(NAMES)} were {adj}"

    def rare_clause(self, word):
        r = self.rng
        if r.random() < 0.5:
            return f"there was a {word} {self.noun()} moment"
        return f"some {word} bits {r.choice(['though', 'also'])}"

    def document(self):
        r = self.rng
        target = 1 if r.random() < 0.5 else -1
        n = r.choice([2, 3, 3, 4, 4, 5])
        pols = [target if r.random() < 0.72 else -target for _ in range(n)]
        total = sum(pols)
        label = target if total == 0 else (1 if total > 0 else -1)
        if r.random() < 0.05:
            label = -label
        clauses = [self.clause(p) for p in pols]
        if r.random() < 0.25:
            clauses.insert(0, r.choice(["honestly", "overall", "yesterday i watched it"]))
        return label, clauses

    @staticmethod
    def render(clauses):
        return " , ".join(clauses) + " ."


def equalize_heads(docs):
    """Rewrites head occurrences so both heads of a polar synset have exactly
    equal train counts."""
    counts = Counter(w for _, c in docs for cl in c for w in cl.split())
    for s in POSITIVE + NEGATIVE:
        a, b, mid = s[0], s[1], s[2]
        diff = counts[a] - counts[b]
        if diff == 0:
            continue
        src, dst = (a, b) if diff > 0 else (b, a)
        moves = abs(diff) // 2
        extra = abs(diff) % 2
        for di, (label, clauses) in enumerate(docs):
            if moves == 0 and extra == 0:
                break
            for ci, cl in enumerate(clauses):
                toks = cl.split()
                changed = False
                for ti, t in enumerate(toks):
                    if t != src:
                        continue
                    if moves > 0:
                        toks[ti] = dst
                        moves -= 1
                        changed = True
                    elif extra > 0:
                        toks[ti] = mid
                        extra -= 1
                        changed = True
                if changed:
                    clauses[ci] = " ".join(toks)
        counts = Counter(w for _, c in docs for cl in c for w in cl.split())
        assert counts[a] == counts[b], (a, b, counts[a], counts[b])


def write_tsv(path, docs):
    with open(path, "w") as f:
        for label, clauses in docs:
            f.write(f"{1 if label > 0 else 0}\t{Generator.render(clauses)}\n")


def embeddings(rng, dim):
    vec = {}

    def gauss(scale):
        return [rng.gauss(0.0, scale) for _ in range(dim)]

    for sets, axis in ((POSITIVE, 1.0), (NEGATIVE, -1.0), (NOUNS, 0.0)):
        for s in sets:
            center = gauss(1.2)
            center[0] += 2.0 * axis
            for w in s:
                vec[w] = [c + rng.gauss(0.0, 0.045) for c in center]
    for w in NAMES + FILLERS + STOPWORDS + ADVERBS + ["i", "performance"]:
        if w not in vec:
            vec[w] = gauss(1.2)
    return vec


def write_embeddings(path, vec):
    with open(path, "w") as f:
        for w in sorted(vec):
            f.write(w + " " + " ".join(f"{x:.6f}" for x in vec[w]) + "\n")


def write_synonyms(path, synsets):
    with open(path, "w") as f:
        for s in synsets:
            for w in s:
                f.write(w + "\t" + ",".join(x for x in s if x != w) + "\n")


def toy(out, seed):
    rng = random.Random(seed)
    gen = Generator(rng)
    train = [gen.document() for _ in range(2000)]
    # Place each rare word exactly rare_count times in random train docs.
    for word, c in sorted(gen.rare_count.items()):
        for di in rng.sample(range(len(train)), c):
            train[di][1].append(gen.rare_clause(word))
    equalize_heads(train)
    rare_rate = sum(gen.rare_count.values()) / len(train)
    rare_words = sorted(gen.rare_count)

    def held_out(n):
        docs = [gen.document() for _ in range(n)]
        for _, clauses in docs:
            if rng.random() < rare_rate:
                clauses.append(gen.rare_clause(rng.choice(rare_words)))
        return docs

    validation = held_out(200)
    test = held_out(200)

    out.mkdir(parents=True, exist_ok=True)
    write_tsv(out / "train.tsv", train)
    write_tsv(out / "validation.tsv", validation)
    write_tsv(out / "test.tsv", test)
    write_embeddings(out / "embeddings.txt", embeddings(rng, 24))
    write_synonyms(out / "synonyms.tsv", POSITIVE + NEGATIVE + NOUNS)
    (out / "stopwords.txt").write_text("\n".join(sorted(set(STOPWORDS))) + "\n")
    config = {
        "seed": 13,
        "threads": 0,
        "output_dir": "out",
        "data": {
            "train": "train.tsv",
            "validation": "validation.tsv",
            "test": "test.tsv",
            "embeddings": "embeddings.txt",
            "synonyms": "synonyms.tsv",
            "stopwords": "stopwords.txt",
        },
        "model": {"family": "naive-bayes"},
        "attacks": {"test_subset": 0},
        "detector": {"fpr_budget": 0.10},
        "stats": {"resamples": 10000, "budgets": [0.01, 0.05, 0.10, 0.20]},
    }
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n")


FIXTURE_COUNTS = {
    "clever": 257, "cunning": 5, "brainy": 4, "blend": 45, "fiction": 81,
    "smart": 296, "sweet": 320, "odoriferous": 6,
}


def fixture(out, seed):
    """Small corpus with exact counts for a handful of words, so log
    frequencies are known in advance."""
    rng = random.Random(seed)
    pos_bag = (["smart"] * 296 + ["sweet"] * 320 + ["clever"] * 257 +
               ["playful"] * 24 + ["romantic"] * 24 + ["comedy"] * 24)
    neg_bag = (["dull"] * 300 + ["awful"] * 300 + ["tedious"] * 200 +
               ["odoriferous"] * 6 + ["cunning"] * 5 + ["brainy"] * 4 +
               ["playful"] * 20 + ["romantic"] * 20 + ["comedy"] * 20)
    neutral = ["blend"] * 45 + ["fiction"] * 81
    rng.shuffle(pos_bag)
    rng.shuffle(neg_bag)
    rng.shuffle(neutral)
    docs = []
    for label, bag in ((1, pos_bag), (0, neg_bag)):
        for i in range(0, len(bag), 2):
            pair = bag[i:i + 2]
            text = "a " + " and ".join(pair) + " story"
            if neutral and rng.random() < 0.2:
                text += " of " + neutral.pop()
            docs.append((label, text))
    while neutral:
        docs[rng.randrange(len(docs))] = (
            docs[rng.randrange(len(docs))][0],
            "a " + neutral.pop() + " of fact")
    rng.shuffle(docs)
    counts = Counter(w for _, t in docs for w in t.split())
    for w, c in FIXTURE_COUNTS.items():
        assert counts[w] == c, (w, counts[w], c)
    for w in ("impertinent", "blending", "fabrication"):
        assert counts[w] == 0

    out.mkdir(parents=True, exist_ok=True)
    with open(out / "train.tsv", "w") as f:
        for label, text in docs:
            f.write(f"{label}\t{text}\n")
    (out / "test.tsv").write_text(
        "1\ta impertinent odoriferous and playful romantic comedy\n"
        "1\ta cunning blending of fact and fabrication\n")
    synsets = [["smart", "clever", "brainy", "cunning", "impertinent"],
               ["sweet", "odoriferous"], ["blend", "blending"],
               ["fiction", "fabrication"]]
    write_synonyms(out / "synonyms.tsv", synsets)
    vec = {}
    for s in synsets:
        center = [rng.gauss(0.0, 1.2) for _ in range(8)]
        for w in s:
            vec[w] = [c + rng.gauss(0.0, 0.045) for c in center]
    write_embeddings(out / "embeddings.txt", vec)
    (out / "stopwords.txt").write_text("a\nand\nof\n")
    config = {
        "seed": 7,
        "output_dir": "out",
        "data": {
            "train": "train.tsv",
            "validation": "test.tsv",
            "test": "test.tsv",
            "embeddings": "embeddings.txt",
            "synonyms": "synonyms.tsv",
            "stopwords": "stopwords.txt",
        },
    }
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=2026)
    args = ap.parse_args()
    check_unique()
    out = Path(args.out)
    toy(out / "toy", args.seed)
    fixture(out / "fixture", args.seed + 1)


if __name__ == "__main__":
    main()
