#!/usr/bin/env python3
"""Regenerate every corpus suite.json from the deterministic generator.

Usage: python3 scripts/gen_suites.py [--seed N] [--corpus DIR]

The committed suites were produced with the default seed; rerunning with it
is a no-op. Expected outputs come from the host language's sort, so no
corpus program ever defines its own oracle.
"""
import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from perfloc.corpus import DEFAULT_SEED, generate_tests, suite_to_json


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--corpus", default=os.path.join(
        os.path.dirname(__file__), "..", "corpus"))
    args = ap.parse_args()
    text = suite_to_json(generate_tests(args.seed))
    for entry in sorted(os.listdir(args.corpus)):
        directory = os.path.join(args.corpus, entry)
        if not os.path.isdir(directory):
            continue
        path = os.path.join(directory, "suite.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        print("wrote", path)


if __name__ == "__main__":
    main()
