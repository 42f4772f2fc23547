"""Reprogramming algebra: operation contracts and exhaustive law checks."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permlift.errors import CapabilityError, DomainError, PreconditionError
from permlift.perms import (
    HitMiss,
    Permutation,
    all_permutations,
    bad_fraction,
    bad_probability_bound,
    hit_miss_queries,
    is_disjoint,
    is_good_pair,
    is_good_tuple,
    load_permutation,
    reprogram,
    reprogram_seq,
    save_permutation,
)

perm_strategy = st.integers(2, 8).flatmap(
    lambda n: st.permutations(list(range(n)))
).map(Permutation)


def test_reprogram_identity_to_swap():
    pi = Permutation.identity(4)
    assert reprogram(pi, 0, 2).fwd == (2, 1, 0, 3)


def test_reprogram_noop_when_already_mapped():
    pi = Permutation([3, 1, 0, 2])
    for x in range(4):
        assert reprogram(pi, x, pi(x)) == pi


def test_reprogram_cycle_to_self_loop():
    cyc = Permutation.from_cycle(4, [0, 1, 2, 3])
    out = reprogram(cyc, 0, 0)
    assert out.fwd == (0, 2, 3, 1)


def test_reprogram_domain_error():
    pi = Permutation.identity(4)
    with pytest.raises(DomainError):
        reprogram(pi, 4, 0)
    with pytest.raises(DomainError):
        reprogram(pi, 0, -1)


def test_reprogram_seq_double_swap():
    pi = Permutation.identity(4)
    assert reprogram_seq(pi, [(0, 1), (2, 3)]).fwd == (1, 0, 3, 2)


def test_reprogram_seq_stationary():
    pi = Permutation([2, 0, 3, 1])
    pairs = [(1, pi(1))] * 3
    assert reprogram_seq(pi, pairs) == pi


def test_reprogram_seq_nondisjoint_order_by_brute_fold():
    # x entries {0,1} distinct and y entries {1,0} distinct: disjoint after all
    pi = Permutation.identity(4)
    a = reprogram_seq(pi, [(0, 1), (1, 0)])
    b = reprogram_seq(pi, [(1, 0), (0, 1)])
    assert a == b == Permutation([1, 0, 2, 3])


@given(perm_strategy, st.data())
def test_reprogram_always_bijective(pi, data):
    x = data.draw(st.integers(0, pi.n - 1))
    y = data.draw(st.integers(0, pi.n - 1))
    out = reprogram(pi, x, y)
    assert sorted(out.fwd) == list(range(pi.n))
    assert out(x) == y
    assert all(out.inv[out.fwd[v]] == v for v in range(pi.n))


@given(perm_strategy, st.data())
def test_single_pair_inverse_law(pi, data):
    x = data.draw(st.integers(0, pi.n - 1))
    y = data.draw(st.integers(0, pi.n - 1))
    assert reprogram(pi, x, y).inverse() == reprogram(pi.inverse(), y, x)


def test_is_disjoint_examples():
    assert is_disjoint([(0, 1), (2, 3)])
    assert not is_disjoint([(0, 1), (0, 3)])
    assert not is_disjoint([(0, 1), (2, 1)])


def test_is_good_examples():
    pi = Permutation.identity(4)
    assert is_good_tuple(pi, [(0, 1), (2, 3)])
    assert not is_good_tuple(pi, [(0, 1), (1, 2)])
    for x in range(4):
        assert not is_good_tuple(pi, [(x, pi(x))])


def test_good_pair_examples():
    ident = Permutation.identity(4)
    swap = Permutation([1, 0, 2, 3])
    assert not is_good_pair(ident, ident, (0,))
    assert is_good_pair(ident, swap, (0,))
    with pytest.raises(PreconditionError):
        is_good_pair(ident, swap, (1, 1))


def test_hit_miss_examples():
    ident = Permutation.identity(4)
    swap = Permutation([1, 0, 2, 3])
    hm = hit_miss_queries(ident, swap, (0,))
    assert hm == HitMiss((0,), (1,), (1,), (0,))
    cyc = Permutation.from_cycle(4, [0, 1, 2, 3])
    swap02 = Permutation([2, 1, 0, 3])
    hm = hit_miss_queries(cyc, swap02, (0,))
    assert (hm.x_hit, hm.x_miss, hm.y_hit, hm.y_miss) == ((0,), (1,), (2,), (1,))


def test_hit_miss_requires_goodness():
    ident = Permutation.identity(4)
    with pytest.raises(PreconditionError):
        hit_miss_queries(ident, ident, (0,))


def test_hit_never_equals_miss():
    perms = list(all_permutations(4))
    for base in perms[:8]:
        for target in perms:
            if not is_good_pair(base, target, (2,)):
                continue
            hm = hit_miss_queries(base, target, (2,))
            assert hm.x_hit[0] != hm.x_miss[0]
            assert hm.y_hit[0] != hm.y_miss[0]


def test_bad_probability_bound_values():
    assert bad_probability_bound(1, 16) == Fraction(1, 16)
    assert bad_probability_bound(2, 4) == Fraction(1)
    with pytest.raises(DomainError):
        bad_probability_bound(0, 4)


def test_bad_fraction_identity_base():
    # only targets sending 0 to 0 break goodness here
    assert bad_fraction(Permutation.identity(4), (0,)) == Fraction(1, 4)


def test_enumeration_is_lexicographic_and_guarded():
    first = list(itertools.islice(all_permutations(3), 3))
    assert [p.fwd for p in first] == [(0, 1, 2), (0, 2, 1), (1, 0, 2)]
    with pytest.raises(CapabilityError):
        next(all_permutations(9))


def test_json_round_trip(tmp_path):
    pi = Permutation([2, 0, 3, 1])
    path = tmp_path / "perm.json"
    save_permutation(pi, path)
    loaded = load_permutation(path)
    assert loaded == pi and loaded.inv == pi.inv


def test_json_rejects_non_bijections(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 3, "fwd": [0, 0, 2]}')
    with pytest.raises(DomainError):
        load_permutation(path)
