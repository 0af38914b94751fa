#!/usr/bin/env python3
"""Writes the generator of a small mutual exclusion CTMC in Matrix Market form.

M processes, at most Mp of them holding the resource. A free process acquires
it at rate lam when fewer than Mp hold it, a holder releases at rate mu.
"""
import argparse
import itertools


def states(M, Mp):
    out = []
    for k in range(Mp + 1):
        out.extend(frozenset(c) for c in itertools.combinations(range(M), k))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--M", type=int, default=8)
    ap.add_argument("--Mp", type=int, default=4)
    ap.add_argument("--lam", type=float, default=1.0)
    ap.add_argument("--mu", type=float, default=2.0)
    ap.add_argument("out")
    a = ap.parse_args()
    S = states(a.M, a.Mp)
    index = {s: i for i, s in enumerate(S)}
    entries = {}
    for s, i in index.items():
        out_rate = 0.0
        for p in range(a.M):
            if p in s:
                t, r = s - {p}, a.mu
            elif len(s) < a.Mp:
                t, r = s | {p}, a.lam
            else:
                continue
            entries[(i, index[t])] = r
            out_rate += r
        entries[(i, i)] = -out_rate
    with open(a.out, "w") as f:
        f.write("%%MatrixMarket matrix coordinate real general\n")
        f.write("%% mutual exclusion model M=%d M'=%d lam=%g mu=%g\n" % (a.M, a.Mp, a.lam, a.mu))
        f.write("%d %d %d\n" % (len(S), len(S), len(entries)))
        for (i, j), v in sorted(entries.items()):
            f.write("%d %d %.17g\n" % (i + 1, j + 1, v))


if __name__ == "__main__":
    main()
