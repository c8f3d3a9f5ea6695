#!/usr/bin/env python3
"""Reference shuffle for corpus splitting: SplitMix64 + Fisher-Yates.

Prints the train/valid/test id lists for n pairs, given ratios and seed.
Usage: split_oracle.py N SEED TRAIN VALID TEST
"""
import math
import sys

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)


def main():
    n, seed = int(sys.argv[1]), int(sys.argv[2])
    _, rv, rt = (float(x) for x in sys.argv[3:6])
    order = list(range(n))
    rng = SplitMix64(seed)
    for i in range(n - 1, 0, -1):
        j = rng.next() % (i + 1)
        order[i], order[j] = order[j], order[i]
    valid = math.floor(n * rv + 1e-9)
    test = math.floor(n * rt + 1e-9)
    train = n - valid - test
    print("train", order[:train])
    print("valid", order[train:train + valid])
    print("test", order[train + valid:])


if __name__ == "__main__":
    main()
