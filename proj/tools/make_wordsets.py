#!/usr/bin/env python3
"""Derive pleasant/unpleasant term lists from an AFINN-style lexicon.

Each input line is `term<TAB>score`. Terms with score > 0 go to pleasant.txt,
score < 0 to unpleasant.txt; multi-word phrases are dropped.
"""
import argparse
import pathlib


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("lexicon")
    ap.add_argument("outdir")
    args = ap.parse_args()

    pleasant, unpleasant = [], []
    for line in pathlib.Path(args.lexicon).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        term, score = line.rsplit("\t", 1)
        term = term.strip().lower()
        if any(c.isspace() for c in term):
            continue
        score = int(score)
        if score > 0:
            pleasant.append(term)
        elif score < 0:
            unpleasant.append(term)

    src = pathlib.Path(args.lexicon).name
    out = pathlib.Path(args.outdir)
    for name, terms, rule in (("pleasant.txt", pleasant, "polarity > 0"),
                              ("unpleasant.txt", unpleasant, "polarity < 0")):
        body = "\n".join(sorted(set(terms)))
        header = (f"# Derived from {src} (ODbL); {rule}; phrases dropped.\n"
                  f"# {len(set(terms))} terms.\n")
        (out / name).write_text(header + body + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
