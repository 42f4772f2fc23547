"""Lifting inequalities and per-instance measure-and-reprogram checks."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from permlift.battery import (
    BlindGuess,
    FixedPointSeeker,
    ValueReporter,
    classical_battery,
    qa_superposed_seeker,
    qa_value_reporter,
    quantum_battery,
)
from permlift.games import (
    relation_double_sided_zero,
    relation_empty,
    relation_fixed_point,
    relation_output_guess,
)
from permlift.lifting import (
    classical_adversary_win_exact,
    classical_factor,
    classical_lift_exact,
    classical_mr_check,
    quantum_factor,
    quantum_lift_exact,
    quantum_lift_monte_carlo,
    quantum_mr_check,
)
from permlift.perms import Permutation, all_permutations, is_good_pair


def test_factors():
    assert classical_factor(4, 2, 1) == Fraction(3, 4) / 5
    assert quantum_factor(4, 1, 1) == Fraction(3, 4) / 81
    assert quantum_factor(16, 2, 2) == Fraction(3, 4) / 17 ** 4


def test_classical_lift_holds_for_battery():
    relations = [relation_fixed_point(4), relation_double_sided_zero(1),
                 relation_output_guess(4)]
    for rel in relations:
        for adv in classical_battery(4):
            report = classical_lift_exact(adv, rel)
            assert report.holds, (rel.name, adv.name, report.to_dict())


def test_classical_lift_empty_relation_degenerate():
    report = classical_lift_exact(BlindGuess(4), relation_empty(4))
    assert report.p_adversary == 0 and report.p_lifted == 0 and report.holds


def test_classical_lift_value_reporter_is_tight_case():
    # the reporter always wins against its true oracle; the lifted algorithm
    # wins exactly 7/12 of the time (hand-counted over the three choice
    # branches: hit always wins, bottom wins 1/4, miss wins 1/4... computed
    # exactly by the harness; the point is a large, nontrivial gap)
    report = classical_lift_exact(ValueReporter(4, x=1), relation_output_guess(4))
    assert report.p_adversary == 1.0
    assert report.p_lifted == pytest.approx(7 / 12)


def test_quantum_lift_exact_holds_for_battery():
    relations = [relation_fixed_point(4), relation_double_sided_zero(1),
                 relation_output_guess(4)]
    for rel in relations:
        for adv in quantum_battery(4):
            if adv.queries > 1:
                continue
            report = quantum_lift_exact(adv, rel)
            assert report.holds, (rel.name, adv.name, report.to_dict())


def test_quantum_lift_empty_relation_degenerate():
    report = quantum_lift_exact(qa_value_reporter(4), relation_empty(4))
    assert report.p_adversary == 0 and report.p_lifted == pytest.approx(0.0)
    assert report.holds


def test_quantum_monte_carlo_small_smoke():
    rel = relation_double_sided_zero(1)
    adv = qa_superposed_seeker(1)
    report = quantum_lift_monte_carlo(adv, rel, trials=4000, seed=13)
    assert report.holds
    assert report.trials == 4000 and report.sigma is not None


def test_classical_mr_inequality_per_instance():
    rel = relation_output_guess(4)
    adv = ValueReporter(4, x=1)
    perms = list(all_permutations(4))
    checked = 0
    for base in perms[::4]:
        for target in perms[::4]:
            if not is_good_pair(base, target, (1,)):
                continue
            checked += 1
            lhs, rhs = classical_mr_check(adv, rel, base, target, (1,))
            assert lhs >= rhs / (2 * adv.budget + 1)
    assert checked > 10


def test_quantum_mr_inequality_per_instance():
    rel = relation_output_guess(4)
    adv = qa_value_reporter(4, x=1)
    perms = list(all_permutations(4))
    checked = 0
    for base in perms[::5]:
        for target in perms[::5]:
            if not is_good_pair(base, target, (1,)):
                continue
            checked += 1
            lhs, rhs = quantum_mr_check(adv, rel, base, target, (1,))
            assert lhs >= rhs / (8 * adv.queries + 1) ** 2 - 1e-12
    assert checked > 5


def test_quantum_mr_reprogrammed_run_wins_reporter():
    # sanity anchor for the RHS: the reporter against the reprogrammed table
    # answers with the reprogrammed value, which is the target's by design
    rel = relation_output_guess(4)
    adv = qa_value_reporter(4, x=1)
    base = Permutation.identity(4)
    target = Permutation([3, 0, 1, 2])
    lhs, rhs = quantum_mr_check(adv, rel, base, target, (1,))
    assert rhs == pytest.approx(1.0)
    assert lhs >= 1 / 81
