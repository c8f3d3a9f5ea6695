#!/usr/bin/env python3
"""Brute-force corpus BLEU used to freeze expected values in the C++ tests.

Tokenization: every Unicode punctuation character (category P*) becomes its
own token, then split on whitespace. Smoothing: a zero precision at order
n >= 2 is floored to 1 / (2 * hyp n-gram count) when unigram precision is
non-zero; zero unigram precision yields BLEU 0.
"""
import math
import sys
import unicodedata
from collections import Counter


def tokenize(s):
    out = []
    for ch in s:
        if unicodedata.category(ch).startswith("P"):
            out.append(" " + ch + " ")
        else:
            out.append(ch)
    return "".join(out).split()


def ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(hyps, refs):
    matches = [0] * 4
    totals = [0] * 4
    ref_totals = [0] * 4
    hyp_len = ref_len = 0
    for h, r in zip(hyps, refs):
        ht, rt = tokenize(h), tokenize(r)
        hyp_len += len(ht)
        ref_len += len(rt)
        for n in range(1, 5):
            hc, rc = ngrams(ht, n), ngrams(rt, n)
            for g, c in hc.items():
                matches[n - 1] += min(c, rc.get(g, 0))
            totals[n - 1] += sum(hc.values())
            ref_totals[n - 1] += sum(rc.values())
    precisions = []
    for n in range(4):
        if totals[n] == 0:
            precisions.append(1.0 if ref_totals[n] == 0 else 0.5)
        elif matches[n] == 0 and n > 0 and matches[0] > 0:
            precisions.append(1.0 / (2 * totals[n]))
        else:
            precisions.append(matches[n] / totals[n])
    bp = 1.0 if hyp_len >= ref_len else math.exp(1 - ref_len / hyp_len)
    if min(precisions) == 0:
        score = 0.0
    else:
        score = 100 * bp * math.exp(sum(math.log(p) for p in precisions) / 4)
    return score, precisions, bp, hyp_len, ref_len, matches, totals


def read(path):
    with open(path, encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f]


if __name__ == "__main__":
    score, p, bp, hl, rl, m, t = bleu(read(sys.argv[1]), read(sys.argv[2]))
    print("matches", m, "totals", t)
    print("precisions", ["%.12f" % x for x in p])
    print("bp %.12f hyp_len %d ref_len %d" % (bp, hl, rl))
    print("score %.12f" % score)
