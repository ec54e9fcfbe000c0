#!/usr/bin/env python3
"""Converts the pattern/TextBlob en-sentiment.xml (PDDL) into the TSV lexicon
format read by stylestat: word<TAB>polarity<TAB>subjectivity.

Multiple senses of a word are averaged, which is what TextBlob does.
"""
import sys
import xml.etree.ElementTree as ET
from collections import defaultdict


def main(src, dst):
    scores = defaultdict(list)
    for w in ET.parse(src).getroot().iter("word"):
        form = w.get("form", "").strip().lower()
        if not form or " " in form:
            continue
        scores[form].append((float(w.get("polarity")), float(w.get("subjectivity"))))
    with open(dst, "w", encoding="utf-8", newline="\n") as out:
        out.write("# word\tpolarity\tsubjectivity\n")
        out.write("# derived from pattern en-sentiment.xml (De Smedt & Daelemans), PDDL\n")
        for form in sorted(scores):
            vals = scores[form]
            pol = sum(v[0] for v in vals) / len(vals)
            sub = sum(v[1] for v in vals) / len(vals)
            out.write(f"{form}\t{pol:.4f}\t{sub:.4f}\n")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
