#!/usr/bin/env python3
"""Brute-force BPE: recount every adjacent pair from scratch at each step.

Words carry the U+2581 marker on their first character. Ties go to the
lexicographically smallest (left, right) pair under codepoint order.
"""
import sys
from collections import Counter

MARK = "▁"


def train(corpus, num_merges, min_freq=2):
    words = Counter()
    for line in corpus:
        for w in line.split():
            words[(MARK,) + tuple(w)] += 1
    merges = []
    for _ in range(num_merges):
        pairs = Counter()
        for w, c in words.items():
            for a, b in zip(w, w[1:]):
                pairs[(a, b)] += c
        if not pairs:
            break
        best = min(pairs.items(), key=lambda kv: (-kv[1], kv[0]))
        if best[1] < min_freq:
            break
        (a, b), _ = best
        merges.append((a, b))
        nw = Counter()
        for w, c in words.items():
            out, i = [], 0
            while i < len(w):
                if i + 1 < len(w) and w[i] == a and w[i + 1] == b:
                    out.append(a + b)
                    i += 2
                else:
                    out.append(w[i])
                    i += 1
            nw[tuple(out)] += c
        words = nw
    return merges, words


if __name__ == "__main__":
    for corpus, k in ((["ababab"], 2), (["low lower lowest newer wider"], 6)):
        merges, words = train(corpus, k)
        print(corpus, k)
        print("  merges", merges)
        print("  words", dict(words))
