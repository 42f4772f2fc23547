#!/usr/bin/env python3
"""The signed state decomposition, term by term.

A one-query circuit run against a reprogrammed oracle splits into five
components: the untouched run, and one term per (hit/miss) x (before/after)
guess, the "before" terms entering positively and the "after" terms
negatively.  The script prints every component's norm and sign and then the
residual against the directly reprogrammed run, which is zero to machine
precision.
"""


from permlift.battery import qa_basis_probe, qa_value_reporter
from permlift.circuits import run_circuit
from permlift.perms import Permutation, all_permutations, is_good_pair
from permlift.simulators import decompose_state

base = Permutation([1, 2, 3, 0])
target = Permutation([2, 1, 0, 3])
xs = (0,)
assert is_good_pair(base, target, xs)

for adv in (qa_value_reporter(4), qa_basis_probe(4)):
    slots = adv.circuit.num_slots
    print(f"== {adv.name}: {slots} slot(s), expect {4 * slots + 1} components ==")
    comps = decompose_state(adv, base, target, xs)
    total = None
    for choice, sign, state in comps:
        tag = "untouched" if choice.slots == (None,) else (
            f"slot {choice.slots[0]}, "
            f"{'miss' if choice.miss_flags[0] else 'hit '}, "
            f"{'after ' if choice.after_flags[0] else 'before'}"
        )
        print(f"  {tag:<28} sign {sign:+d}   norm^2 {state.norm_sq():.4f}")
        contrib = state.scaled(sign)
        total = contrib if total is None else total + contrib
    reference = run_circuit(adv.circuit, base.reprogram(xs[0], target(xs[0])))
    print(f"  signed sum vs reprogrammed run: residual "
          f"{total.distance(reference):.2e}\n")

print("Exhaustive residual sweep (all good pairs, one circuit):")
adv = qa_basis_probe(4)
worst = 0.0
pairs = 0
for b in all_permutations(4):
    for t in all_permutations(4):
        if not is_good_pair(b, t, xs):
            continue
        pairs += 1
        comps = decompose_state(adv, b, t, xs)
        total = None
        for _, sign, state in comps:
            contrib = state.scaled(sign)
            total = contrib if total is None else total + contrib
        ref = run_circuit(adv.circuit, b.reprogram(xs[0], t(xs[0])))
        worst = max(worst, total.distance(ref))
print(f"  {pairs} good pairs, worst residual {worst:.2e}")
