#!/usr/bin/env python3
"""Builds the silver-standard CoNLL-U sample used to train the shipped tagger.

Prose is taken from the Python documentation topics bundled with CPython
(pydoc_data) plus stdlib docstrings, tokenized with the same rules as
stylestat's tokenizer, and tagged with the rule-based pattern tagger shipped
in TextBlob (Penn Treebank tags). Universal tags are derived from the Penn
tags with the usual conversion table.

Usage: make_silver_treebank.py OUT.conllu [MAX_TOKENS]
"""
import importlib
import inspect
import pkgutil
import re
import sys

import pydoc_data.topics
from textblob.en import tag

CLITICS = ("n't", "'s", "'re", "'ve", "'ll", "'d", "'m")
PUNCT = set("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~")

SCONJ = {"because", "although", "though", "if", "unless", "while", "whereas",
         "since", "that", "whether", "once", "until", "till", "so", "than"}
AUX = {"be", "is", "are", "was", "were", "been", "being", "am", "'s", "'re",
       "'m", "have", "has", "had", "having", "'ve", "'d", "do", "does", "did"}
PTB_PUNCT = {".", ",", ":", "``", "''", "-LRB-", "-RRB-", "#", "$"}
PTB_TAGS = set("""CC CD DT EX FW IN JJ JJR JJS LS MD NN NNS NNP NNPS PDT POS
PRP PRP$ RB RBR RBS RP SYM TO UH VB VBD VBG VBN VBP VBZ WDT WP WP$ WRB""".split())
BRACKETS = {"(": "-LRB-", "[": "-LRB-", "{": "-LRB-",
            ")": "-RRB-", "]": "-RRB-", "}": "-RRB-"}


def is_punct(s):
    return bool(s) and all(c in PUNCT for c in s)


def split_chunk(chunk):
    lead, trail = [], []
    while chunk and chunk[-1] in PUNCT and chunk.lower() not in CLITICS:
        trail.insert(0, chunk[-1])
        chunk = chunk[:-1]
    while chunk and chunk[0] in PUNCT and chunk.lower() not in CLITICS:
        lead.append(chunk[0])
        chunk = chunk[1:]
    core = []
    if chunk:
        low = chunk.lower()
        for c in CLITICS:
            stem = chunk[: -len(c)]
            if low.endswith(c) and stem and stem[-1] not in PUNCT:
                core = [stem, chunk[-len(c):]]
                break
        if not core:
            core = [chunk]
    return lead + core + trail


def tokenize(text):
    out = []
    for chunk in text.split():
        out.extend(split_chunk(chunk))
    return out


def upos_for(word, xpos):
    low = word.lower()
    if xpos in ("CC",):
        return "CCONJ"
    if xpos == "CD":
        return "NUM"
    if xpos in ("DT", "PDT", "WDT"):
        return "DET"
    if xpos == "EX":
        return "PRON"
    if xpos in ("FW", "LS"):
        return "X"
    if xpos == "IN":
        return "SCONJ" if low in SCONJ else "ADP"
    if xpos.startswith("JJ"):
        return "ADJ"
    if xpos == "MD":
        return "AUX"
    if xpos in ("NN", "NNS"):
        return "NOUN"
    if xpos in ("NNP", "NNPS"):
        return "PROPN"
    if xpos in ("POS", "TO"):
        return "PART"
    if xpos in ("PRP", "PRP$", "WP", "WP$"):
        return "PRON"
    if xpos.startswith("RB") or xpos == "WRB":
        return "PART" if low in ("not", "n't") else "ADV"
    if xpos == "RP":
        return "ADP"
    if xpos in ("SYM", "#", "$"):
        return "SYM"
    if xpos == "UH":
        return "INTJ"
    if xpos.startswith("VB"):
        return "AUX" if low in AUX else "VERB"
    return "PUNCT"


def fix_xpos(word, xpos):
    if word in BRACKETS:
        return BRACKETS[word]
    if is_punct(word):
        if word in (".", "?", "!"):
            return "."
        if word == ",":
            return ","
        if word in (":", ";", "-", "--", "..."):
            return ":"
        if word in ('"', "``", "''"):
            return "``" if xpos == "``" else "''"
        if word in ("#", "$"):
            return word
        return xpos if xpos in PTB_PUNCT or xpos == "SYM" else "SYM"
    if xpos in PTB_TAGS:
        return xpos
    return "NN"


SENT_SPLIT = re.compile(r"(?<=[.!?])\s+(?=[A-Z])")


def prose_paragraphs():
    for key in sorted(pydoc_data.topics.topics):
        yield from pydoc_data.topics.topics[key].split("\n\n")
    for mod in sorted(m.name for m in pkgutil.iter_modules()
                      if not m.name.startswith("_")):
        if mod in ("antigravity", "this", "idlelib", "turtledemo", "tkinter"):
            continue
        try:
            m = importlib.import_module(mod)
        except Exception:
            continue
        for _, obj in sorted(vars(m).items()):
            doc = inspect.getdoc(obj) if callable(obj) else None
            if doc:
                yield from doc.split("\n\n")


def good_sentence(s):
    if any(ch in s for ch in "=<>{}|\\_*`@"):
        return False
    toks = tokenize(s)
    if not 5 <= len(toks) <= 40:
        return False
    alpha = sum(1 for t in toks if t.isalpha())
    return alpha / len(toks) >= 0.7 and s[0].isupper() and s.rstrip()[-1] in ".?!"


def main(out_path, max_tokens):
    seen = set()
    n_tokens = 0
    n_sent = 0
    with open(out_path, "w", encoding="utf-8", newline="\n") as out:
        out.write("# silver-standard sample; tags from the pattern rule-based tagger\n")
        for para in prose_paragraphs():
            if para.startswith((" ", "\t")):
                continue
            text = " ".join(para.split())
            for sent in SENT_SPLIT.split(text):
                if sent in seen or not good_sentence(sent):
                    continue
                seen.add(sent)
                toks = tokenize(sent)
                tagged = tag(" ".join(toks), tokenize=False)
                if len(tagged) != len(toks):
                    continue
                n_sent += 1
                out.write(f"# sent_id = silver-{n_sent}\n# text = {sent}\n")
                for i, (w, (_, x)) in enumerate(zip(toks, tagged), 1):
                    x = fix_xpos(w, x)
                    u = "PUNCT" if is_punct(w) and x not in ("#", "$", "SYM") else upos_for(w, x)
                    out.write(f"{i}\t{w}\t_\t{u}\t{x}\t_\t_\t_\t_\t_\n")
                out.write("\n")
                n_tokens += len(toks)
                if n_tokens >= max_tokens:
                    print(f"{n_sent} sentences, {n_tokens} tokens")
                    return
    print(f"{n_sent} sentences, {n_tokens} tokens")


if __name__ == "__main__":
    main(sys.argv[1], int(sys.argv[2]) if len(sys.argv) > 2 else 60000)
