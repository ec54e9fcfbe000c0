#!/usr/bin/env python3
"""Builds the golden similarity fixture from pairs.tsv.

Sentences in pairs.tsv are already tokenized (tokens separated by single
spaces, punctuation as separate tokens, no apostrophes), so this script
computes the expected metrics without any tokenizer: lowercase, split on
spaces, then evaluate each metric directly from its set or alignment
definition.

Outputs (next to pairs.tsv):
  train.src / train.tgt   one sentence per line
  dataset.conf            dataset config
  expected.csv            per-pair jaccard, ld, ld_norm, f1 and a mean row
"""

import csv
import string
import sys
from pathlib import Path


def tokens(sentence):
    toks = sentence.lower().split(" ")
    for t in toks:
        ok = t.isalnum() or (len(t) == 1 and t in string.punctuation and t != "'")
        if not ok:
            raise ValueError(f"token {t!r} would be re-split by a tokenizer")
    return toks


def jaccard(a, b):
    sa, sb = set(a), set(b)
    return len(sa & sb) / len(sa | sb)


def f1(a, b):
    sa, sb = set(a), set(b)
    both = len(sa & sb)
    if both == 0:
        return 0.0
    precision = both / len(sa)
    recall = both / len(sb)
    return 2 * precision * recall / (precision + recall)


def levenshtein(a, b):
    """Word-level edit distance by the memoised recursive definition."""
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1,
                   d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


def main():
    here = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "fixtures" / "golden50"
    rows = [line.rstrip("\n").split("\t") for line in (here / "pairs.tsv").read_text().splitlines()]
    assert len(rows) == 50, len(rows)
    (here / "train.src").write_text("".join(r[0] + "\n" for r in rows))
    (here / "train.tgt").write_text("".join(r[1] + "\n" for r in rows))
    (here / "dataset.conf").write_text(
        "# 50 modern/early-modern English pairs, pre-tokenized\n"
        "name = golden50\n"
        "style_task = modern to early-modern English\n"
        "source_class = modern\n"
        "target_class = early-modern\n"
        "domain = drama\n"
        "annotation = manual\n"
        "train.source = train.src\n"
        "train.target = train.tgt\n")
    out = []
    for i, (s, t) in enumerate(rows):
        a, b = tokens(s), tokens(t)
        ld = levenshtein(tuple(a), tuple(b))
        out.append([i, jaccard(a, b), ld, ld / max(len(a), len(b)), f1(a, b)])
    with open(here / "expected.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["pair", "jaccard", "ld", "ld_norm", "f1"])
        for r in out:
            w.writerow([r[0]] + [repr(float(v)) for v in r[1:]])
        n = len(out)
        w.writerow(["mean"] + [repr(sum(r[k] for r in out) / n) for k in range(1, 5)])


if __name__ == "__main__":
    main()
