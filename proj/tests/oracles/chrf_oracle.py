#!/usr/bin/env python3
"""Exhaustive character n-gram enumeration for chrF (beta 2, orders 1..6)."""
import sys
from collections import Counter

BETA = 2.0
MAX_N = 6


def char_ngrams(s, n):
    s = "".join(s.split())
    return Counter(s[i:i + n] for i in range(len(s) - n + 1))


def chrf(hyps, refs):
    rows = []
    for n in range(1, MAX_N + 1):
        m = h = r = 0
        for hy, re in zip(hyps, refs):
            hc, rc = char_ngrams(hy, n), char_ngrams(re, n)
            m += sum(min(c, rc[g]) for g, c in hc.items())
            h += sum(hc.values())
            r += sum(rc.values())
        p = m / h if h else 0.0
        rec = m / r if r else 0.0
        b2 = BETA * BETA
        den = b2 * p + rec
        f = (1 + b2) * p * rec / den if den else 0.0
        rows.append((n, m, h, r, p, rec, f))
    active = [row[6] for row in rows if row[2] or row[3]]
    score = 100 * sum(active) / len(active) if active else 100.0
    return rows, score


if __name__ == "__main__":
    fixtures = {
        "ab_abc": (["ab"], ["abc"]),
        "mixed": (["the cat sat", "ሰላም"], ["the cats sat", "ሰላም ዓለም"]),
        "geez": (["ኣየር እዩ"], ["ኣየር ኣብ"]),
    }
    for name, (h, r) in fixtures.items():
        rows, score = chrf(h, r)
        print(name)
        for n, m, hh, rr, p, rec, f in rows:
            print("  n=%d m=%d h=%d r=%d P=%.12f R=%.12f F=%.12f" % (n, m, hh, rr, p, rec, f))
        print("  score %.12f" % score)
