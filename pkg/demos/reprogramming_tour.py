#!/usr/bin/env python3
"""A walking tour of the permutation reprogramming algebra.

Shows the single-pair edit, why goodness matters, the hit/miss values that
the simulators watch for, and the two exact distributional facts the package
certifies: uniformity of the reprogrammed table and the k^2/n bad bound.
"""

from fractions import Fraction

from permlift.perms import (
    Permutation,
    all_permutations,
    bad_fraction,
    bad_probability_bound,
    hit_miss_queries,
    is_good_pair,
    is_good_tuple,
    reprogram,
    reprogram_seq,
)


def show(label, value):
    print(f"  {label:<42} {value}")


print("== The single edit ==")
ident = Permutation.identity(4)
show("identity on {0..3}", ident.fwd)
show("force 0 -> 2 (the old preimage of 2 swaps)", reprogram(ident, 0, 2).fwd)
cyc = Permutation.from_cycle(4, [0, 1, 2, 3])
show("4-cycle", cyc.fwd)
show("force 0 -> 0 reroutes 3 to the old image 1", reprogram(cyc, 0, 0).fwd)
show("forcing an existing mapping changes nothing", reprogram(cyc, 0, cyc(0)).fwd)

print("\n== Folding several edits ==")
show("identity with (0->1) then (2->3)", reprogram_seq(ident, [(0, 1), (2, 3)]).fwd)
pairs = [(0, 1), (1, 2)]
show(f"is {pairs} good for the identity?", is_good_tuple(ident, pairs))
pairs = [(0, 1), (2, 3)]
show(f"is {pairs} good for the identity?", is_good_tuple(ident, pairs))
print("  good tuples commute: every ordering folds to the same table")

print("\n== Hit and miss values ==")
base = cyc
target = Permutation([2, 1, 0, 3])
show("base (internal) table", base.fwd)
show("target (external) table", target.fwd)
show("good pair for marked input 0?", is_good_pair(base, target, (0,)))
hm = hit_miss_queries(base, target, (0,))
show("forward hit (the marked input itself)", hm.x_hit[0])
show("forward miss (base preimage of the target y)", hm.x_miss[0])
show("backward hit / backward miss", (hm.y_hit[0], hm.y_miss[0]))
edited = reprogram(base, 0, target(0))
show("after the edit, hit input maps to", edited(hm.x_hit[0]))
show("and the miss input inherits the old image", edited(hm.x_miss[0]))

print("\n== Uniformity over good pairs (exact) ==")
counts = {}
for b in all_permutations(4):
    for t in all_permutations(4):
        if is_good_pair(b, t, (0,)):
            out = reprogram(b, 0, t(0))
            counts[out.fwd] = counts.get(out.fwd, 0) + 1
show("distinct reprogrammed tables", len(counts))
show("each one appears exactly", set(counts.values()))

print("\n== Bad probability ==")
show("bound k^2/n at k=1, n=4", bad_probability_bound(1, 4))
show("exact bad fraction, identity base, mark 0", bad_fraction(ident, (0,)))
show("bound k^2/n at k=1, n=16", bad_probability_bound(1, 16))
