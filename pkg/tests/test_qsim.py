"""Statevector engine: oracles, gates, measurement, projections."""

import math

import numpy as np
import pytest

from permlift.errors import DomainError
from permlift.perms import Permutation, all_permutations
from permlift.qsim import (
    Registers,
    StateVector,
    apply_cipher_oracle,
    apply_combined_oracle,
    apply_oracle,
    basis_state,
    dense_matrix,
    hadamard_gate,
    is_unitary_matrix,
    measure_distribution,
    measurement_branches,
    oracle_matrix,
    project,
    sample_measurement,
    superposition_gate,
    Unitary,
    zero_state,
)
from permlift.ciphers import Cipher


def regs(n, extra=()):
    return Registers((("q", n), ("r", n)) + tuple(extra))


def test_identity_oracle_copies_query():
    r = regs(4)
    ident = Permutation.identity(4)
    for x in range(4):
        out = apply_oracle(basis_state(r, {"q": x, "r": 0}), ident)
        expect = basis_state(r, {"q": x, "r": x})
        assert out.distance(expect) < 1e-12


def test_backward_oracle_recovers_preimage():
    r = regs(4)
    pi = Permutation([2, 3, 1, 0])
    for x in range(4):
        out = apply_oracle(basis_state(r, {"q": pi(x), "r": 0}), pi, "backward")
        assert out.distance(basis_state(r, {"q": pi(x), "r": x})) < 1e-12


def test_oracle_is_self_inverse():
    r = regs(4)
    rng = np.random.default_rng(0)
    pi = Permutation.random(4, rng)
    amps = rng.normal(size=r.dims) + 1j * rng.normal(size=r.dims)
    amps /= np.linalg.norm(amps)
    state = StateVector(r, amps)
    for direction in ("forward", "backward"):
        twice = apply_oracle(apply_oracle(state, pi, direction), pi, direction)
        assert twice.distance(state) < 1e-12


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_oracle_unitarity_and_xor_table(n):
    rng = np.random.default_rng(n)
    pi = Permutation.random(n, rng)
    for direction, table in (("forward", pi.fwd), ("backward", pi.inv)):
        mat = oracle_matrix(pi, direction)
        assert is_unitary_matrix(mat)
        r = regs(n)
        for x in range(n):
            for y in range(n):
                out = apply_oracle(basis_state(r, {"q": x, "r": y}), pi, direction)
                assert out.distance(basis_state(r, {"q": x, "r": y ^ table[x]})) < 1e-12


def test_non_power_of_two_rejected():
    r = regs(3)
    pi = Permutation.identity(3)
    with pytest.raises(DomainError):
        apply_oracle(basis_state(r, {"q": 0, "r": 0}), pi)


def test_combined_oracle_branches():
    r = Registers((("b", 2), ("q", 4), ("r", 4)))
    pi = Permutation([1, 2, 3, 0])
    for b in (0, 1):
        state = basis_state(r, {"b": b, "q": 2, "r": 0})
        out = apply_combined_oracle(state, pi)
        want = pi(2) if b == 0 else pi.backward(2)
        assert out.distance(basis_state(r, {"b": b, "q": 2, "r": want})) < 1e-12


def test_combined_oracle_linear_in_superposed_direction():
    r = Registers((("b", 2), ("q", 4), ("r", 4)))
    pi = Permutation([1, 2, 3, 0])
    rng = np.random.default_rng(5)
    amps = rng.normal(size=r.dims) + 1j * rng.normal(size=r.dims)
    amps /= np.linalg.norm(amps)
    state = StateVector(r, amps)
    out = apply_combined_oracle(state, pi)
    manual = apply_oracle(project(state, "b", (0,)), pi, "forward") + \
        apply_oracle(project(state, "b", (1,)), pi, "backward")
    assert out.distance(manual) < 1e-12


def test_cipher_oracle_matches_per_key_tables():
    r = Registers((("K", 2), ("q", 4), ("r", 4)))
    rng = np.random.default_rng(11)
    E = Cipher.random(2, 4, rng)
    for key in range(2):
        for x in range(4):
            out = apply_cipher_oracle(basis_state(r, {"K": key, "q": x, "r": 0}), E)
            assert out.distance(
                basis_state(r, {"K": key, "q": x, "r": E.forward(key, x)})) < 1e-12
            back = apply_cipher_oracle(
                basis_state(r, {"K": key, "q": x, "r": 0}), E, "backward")
            assert back.distance(
                basis_state(r, {"K": key, "q": x, "r": E.backward(key, x)})) < 1e-12


def test_measure_distribution_point_mass_and_uniform():
    r = regs(4)
    assert measure_distribution(zero_state(r), ("q",))[0] == 1.0
    state = hadamard_gate("q", 4).apply(zero_state(r))
    np.testing.assert_allclose(measure_distribution(state, ("q",)), 0.25)


def test_measure_distribution_follows_name_order():
    r = Registers((("q", 4), ("r", 2)))
    amps = np.zeros(r.dims, dtype=complex)
    amps[3, 1] = 1.0
    state = StateVector(r, amps)
    qr = measure_distribution(state, ("q", "r"))
    rq = measure_distribution(state, ("r", "q"))
    assert qr.shape == (4, 2) and qr[3, 1] == 1.0
    assert rq.shape == (2, 4) and rq[1, 3] == 1.0


def test_subnormalized_distribution_sums_to_norm():
    r = regs(4)
    state = hadamard_gate("q", 4).apply(zero_state(r))
    cut = project(state, "q", (0, 1))
    dist = measure_distribution(cut, ("q", "r"))
    assert abs(dist.sum() - cut.norm_sq()) < 1e-12
    assert abs(cut.norm_sq() - 0.5) < 1e-12


def test_measurement_branches_partition_norm():
    r = regs(4)
    state = hadamard_gate("q", 4).apply(zero_state(r))
    branches = list(measurement_branches(state, ("q",)))
    assert len(branches) == 4
    assert abs(sum(s.norm_sq() for _, s in branches) - 1.0) < 1e-12


def test_sample_measurement_collapses(seed=3):
    r = regs(4)
    state = hadamard_gate("q", 4).apply(zero_state(r))
    value, collapsed = sample_measurement(state, ("q",), np.random.default_rng(seed))
    assert collapsed.is_unit()
    assert measure_distribution(collapsed, ("q",))[value] == pytest.approx(1.0)


def test_gate_unitarity():
    r = Registers((("q", 4), ("r", 2)))
    for gate in (hadamard_gate("q", 4), superposition_gate("q", 4, (0, 2))):
        mat = dense_matrix(Unitary((gate,)), r)
        assert is_unitary_matrix(mat)


def test_superposition_gate_column():
    g = superposition_gate("q", 4, (0, 2))
    r = Registers((("q", 4),))
    out = g.apply(zero_state(r))
    expect = np.zeros(4, dtype=complex)
    expect[0] = expect[2] = 1 / math.sqrt(2)
    assert np.allclose(out.flat(), expect)
