"""Fixed batteries of classical and quantum test adversaries.

None of these try to be optimal; they exist to exercise every simulator code
path (forward and backward queries, superposed queries, phases, auxiliary
outputs) while winning their games often enough that the lifting
inequalities are non-vacuous.
"""

from __future__ import annotations

from .circuits import BACKWARD, FORWARD, CircuitBuilder
from .qsim import controlled_xor_gate, superposition_gate
from .simulators import ClassicalAdversary, QuantumAdversary


# ---------------------------------------------------------------------------
# Classical adversaries


class BlindGuess(ClassicalAdversary):
    """No queries; outputs a fixed guess."""

    def __init__(self, n: int, x: int = 0, z: tuple = ()):  # noqa: D107
        self.domain = n
        self.budget = 0
        self.x = x
        self.z = z
        self.name = "blind-guess"

    def run(self, oracle, rng=None):
        return (self.x,), self.z


class FixedPointSeeker(ClassicalAdversary):
    """Adaptively probes up to two forward values looking for a fixed point."""

    budget = 2

    def __init__(self, n: int):
        self.domain = n
        self.name = "fixed-point-seeker"

    def run(self, oracle, rng=None):
        first = oracle.forward(0)
        if first == 0:
            return (0,), ()
        second = oracle.forward(first)
        if second == first:
            return (first,), ()
        return (self.domain - 1,), ()


class ZeroSuffixSeeker(ClassicalAdversary):
    """Tries the two smallest zero-suffix inputs for the double-sided game."""

    budget = 2

    def __init__(self, n_half: int):
        self.n_half = n_half
        self.domain = 1 << (2 * n_half)
        self.name = "zero-suffix-seeker"

    def run(self, oracle, rng=None):
        mask = (1 << self.n_half) - 1
        step = 1 << self.n_half
        if oracle.forward(0) & mask == 0:
            return (0,), ()
        if oracle.forward(step) & mask == 0:
            return (step,), ()
        return (2 * step if 2 * step < self.domain else 0,), ()


class BackwardProbe(ClassicalAdversary):
    """One backward query; outputs the preimage of 0."""

    budget = 1

    def __init__(self, n: int):
        self.domain = n
        self.name = "backward-probe"

    def run(self, oracle, rng=None):
        return (oracle.backward(0),), ()


class ValueReporter(ClassicalAdversary):
    """Queries one forward value and reports the answer as its z output."""

    budget = 1

    def __init__(self, n: int, x: int = 1):
        self.domain = n
        self.x = x
        self.name = "value-reporter"

    def run(self, oracle, rng=None):
        return (self.x,), (oracle.forward(self.x),)


def classical_battery(n: int) -> list[ClassicalAdversary]:
    out = [BlindGuess(n), FixedPointSeeker(n), BackwardProbe(n), ValueReporter(n)]
    bits = n.bit_length() - 1
    if 1 << bits == n and bits % 2 == 0 and bits >= 2:
        out.append(ZeroSuffixSeeker(bits // 2))
    return out


# ---------------------------------------------------------------------------
# Quantum adversaries


def qa_basis_probe(n: int) -> QuantumAdversary:
    """Classical-style probe run coherently: learn pi(0), hand it back as x.

    Slot 1 computes r = pi(0); the registers are then swapped so the backward
    slot uncomputes the response, leaving pi(0) in the query register.
    """
    b = CircuitBuilder((("q", n), ("r", n)))
    b.oracle(FORWARD)
    b.swap("q", "r")
    b.oracle(BACKWARD)
    return QuantumAdversary(b.build(), x_regs=("q",), declared_queries=1,
                            name="basis-probe")


def qa_superposed_seeker(n_half: int) -> QuantumAdversary:
    """Zero-suffix search: query a superposition of candidates, then hop to a
    fresh candidate whenever the response fails the suffix test."""
    n = 1 << (2 * n_half)
    mask = (1 << n_half) - 1
    step = 1 << n_half
    b = CircuitBuilder((("q", n), ("r", n)))
    candidates = [x for x in range(n) if x & mask == 0]
    b.gate(superposition_gate("q", n, candidates))
    b.oracle(FORWARD)
    b.gate(controlled_xor_gate("r", "q", (n, n),
                               lambda y: step if y & mask else 0))
    return QuantumAdversary(b.build(), x_regs=("q",), declared_queries=1,
                            name="superposed-seeker")


def qa_phase_sampler(n: int) -> QuantumAdversary:
    """Uniform query, a phase marking low-bit-zero pairs, then interference.

    Exercises superposed forward queries, a backward slot, and a nontrivial
    final unitary; its win rate is whatever it is.
    """
    b = CircuitBuilder((("q", n), ("r", n)))
    b.hadamard("q")
    b.oracle(FORWARD)
    b.controlled_phase(("q", "r"), lambda idx: (idx[0] & 1) == 0 and (idx[1] & 1) == 0)
    b.swap("q", "r")
    b.oracle(BACKWARD)
    b.hadamard("q")
    return QuantumAdversary(b.build(), x_regs=("q",), declared_queries=1,
                            name="phase-sampler")


def qa_value_reporter(n: int, x: int = 0) -> QuantumAdversary:
    """Basis circuit reporting the oracle's value at x as the z output."""
    b = CircuitBuilder((("q", n), ("r", n)))
    if x:
        b.basis_perm("q", [v ^ x for v in range(n)])
    b.oracle(FORWARD)
    return QuantumAdversary(b.build(), x_regs=("q",), z_regs=("r",),
                            declared_queries=1, name="q-value-reporter")


def qa_backward_probe(n: int) -> QuantumAdversary:
    """Single backward slot; outputs the preimage of 0."""
    b = CircuitBuilder((("q", n), ("r", n)))
    b.oracle(BACKWARD)
    b.swap("q", "r")
    return QuantumAdversary(b.build(), x_regs=("q",), declared_queries=1,
                            name="q-backward-probe")


def qa_two_query_prober(n: int) -> QuantumAdversary:
    """Two declared queries (four slots) chasing pi(pi(0)) as a guess."""
    b = CircuitBuilder((("q", n), ("r", n)))
    b.oracle(FORWARD)
    b.swap("q", "r")
    b.oracle(BACKWARD)
    b.oracle(FORWARD)
    b.swap("q", "r")
    b.oracle(BACKWARD)
    return QuantumAdversary(b.build(), x_regs=("q",), declared_queries=2,
                            name="two-query-prober")


def quantum_battery(n: int) -> list[QuantumAdversary]:
    out = [qa_basis_probe(n), qa_backward_probe(n), qa_value_reporter(n),
           qa_phase_sampler(n)]
    bits = n.bit_length() - 1
    if 1 << bits == n and bits % 2 == 0 and bits >= 2:
        out.append(qa_superposed_seeker(bits // 2))
    return out
