#!/usr/bin/env python3
"""Generate a synthetic English-morphology corpus with reference analyses.

Writes a whitespace-tokenized corpus, a gold TSV of per-type analyses, and
the list of morphemic tags to keep during evaluation.
"""

import argparse

from morphseg.synth import generate


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tokens", type=int, default=100000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--compound-rate", type=float, default=0.04)
    parser.add_argument("--corpus", default="corpus.txt")
    parser.add_argument("--gold", default="gold.tsv")
    parser.add_argument("--tags", default="tags.txt")
    parser.add_argument("--per-line", type=int, default=12, help="tokens per output line")
    args = parser.parse_args()

    tokens, gold_lines, tags = generate(args.tokens, args.seed, args.compound_rate)
    with open(args.corpus, "w", encoding="utf-8", newline="\n") as f:
        for i in range(0, len(tokens), args.per_line):
            f.write(" ".join(tokens[i : i + args.per_line]) + "\n")
    with open(args.gold, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(gold_lines) + "\n")
    with open(args.tags, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(tags) + "\n")
    print(
        "wrote %d tokens (%d types) to %s; gold analyses to %s; tags to %s"
        % (len(tokens), len(gold_lines), args.corpus, args.gold, args.tags)
    )


if __name__ == "__main__":
    main()
