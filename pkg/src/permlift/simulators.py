"""Measure-and-reprogram simulators, state decomposition, and lifted adversaries.

The simulators run a target algorithm against a stateful oracle that starts
at an internal permutation (or cipher) and gets reprogrammed at guessed query
slots with values pulled from an external oracle.  The classical simulator
reprograms before answering; the quantum one measures the guessed slots and
additionally guesses whether to reprogram before or after answering.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .ciphers import Cipher
from .circuits import BACKWARD, FORWARD, NormalFormCircuit, Projector, run_circuit, run_with_insertions
from .errors import DomainError, PreconditionError, ProtocolError
from .perms import Permutation, hit_miss_queries, is_good_pair
from .qsim import StateVector, measure_distribution, measurement_branches, sample_measurement, zero_state

HIT = 0
MISS = 1


@dataclass(frozen=True)
class SimChoice:
    """The simulator's per-index guesses.

    ``slots[j]`` is the 1-based query slot guessed to first touch pair j, or
    None for "never touched".  ``miss_flags[j]`` says whether that touch is a
    hit (0) or a miss (1).  ``after_flags`` (quantum only) says whether the
    oracle is reprogrammed after (1) rather than before (0) answering.
    Non-None slots must be pairwise distinct, and the three sequences are
    None on exactly the same indices.
    """

    slots: tuple[Optional[int], ...]
    miss_flags: tuple[Optional[int], ...]
    after_flags: Optional[tuple[Optional[int], ...]] = None

    def __post_init__(self):
        live = [s for s in self.slots if s is not None]
        if len(set(live)) != len(live):
            raise DomainError("guessed slots must be distinct")
        if len(self.miss_flags) != len(self.slots):
            raise DomainError("flag length mismatch")
        for j, s in enumerate(self.slots):
            if (s is None) != (self.miss_flags[j] is None):
                raise DomainError("miss flag must be None exactly when the slot is")
            if self.after_flags is not None and (s is None) != (self.after_flags[j] is None):
                raise DomainError("after flag must be None exactly when the slot is")

    @property
    def arity(self) -> int:
        return len(self.slots)

    def slot_map(self) -> dict[int, int]:
        return {s: j for j, s in enumerate(self.slots) if s is not None}

    def sign(self) -> int:
        """(-1)^(number of reprogram-after indices); used by the decomposition."""
        if self.after_flags is None:
            return 1
        return -1 if sum(f or 0 for f in self.after_flags) % 2 else 1


def options_per_index(num_slots: int, with_timing: bool) -> int:
    """Size of the per-index guess menu, ignoring the distinctness constraint."""
    return (4 * num_slots + 1) if with_timing else (2 * num_slots + 1)


def sim_choice_space(num_slots: int, k: int, with_timing: bool = True) -> list[SimChoice]:
    """Every valid choice; the uniform distribution over this set is what the
    simulators sample from."""
    per_index: list[tuple] = [(None, None, None)]
    for s in range(1, num_slots + 1):
        for m in (HIT, MISS):
            if with_timing:
                for a in (0, 1):
                    per_index.append((s, m, a))
            else:
                per_index.append((s, m, None))
    out = []
    for combo in itertools.product(per_index, repeat=k):
        live = [c[0] for c in combo if c[0] is not None]
        if len(set(live)) != len(live):
            continue
        slots = tuple(c[0] for c in combo)
        miss = tuple(c[1] for c in combo)
        after = tuple(c[2] for c in combo) if with_timing else None
        out.append(SimChoice(slots, miss, after))
    return out


def sample_sim_choice(num_slots: int, k: int, with_timing: bool, rng) -> SimChoice:
    """Uniform over the constrained set, by rejection from the product menu."""
    m = options_per_index(num_slots, with_timing)
    while True:
        picks = [int(v) for v in rng.integers(0, m, size=k)]
        decoded = []
        for p in picks:
            if p == 0:
                decoded.append((None, None, None))
            elif with_timing:
                s, rem = divmod(p - 1, 4)
                decoded.append((s + 1, rem >> 1, rem & 1))
            else:
                s, rem = divmod(p - 1, 2)
                decoded.append((s + 1, rem, None))
        live = [d[0] for d in decoded if d[0] is not None]
        if len(set(live)) != len(live):
            continue
        return SimChoice(
            tuple(d[0] for d in decoded),
            tuple(d[1] for d in decoded),
            tuple(d[2] for d in decoded) if with_timing else None,
        )


class StatefulOracle:
    """A permutation oracle whose table is edited as the simulation proceeds.

    The log replays from the starting table to the current one; trigger tests
    and the trace output read it.
    """

    def __init__(self, base: Permutation):
        self.base = base
        self.current = base
        self.log: list[tuple[int, int]] = []

    def reprogram(self, x: int, y: int) -> None:
        self.current = self.current.reprogram(x, y)
        self.log.append((x, y))

    def replay(self) -> Permutation:
        return self.base.reprogram_seq(self.log)


class ClassicalAdversary:
    """Interactive classical query procedure.

    Subclasses set ``budget`` (max oracle calls) and ``domain`` and implement
    run(oracle, rng) returning (xs, z) with xs a tuple of domain elements and
    z an arbitrary tuple.
    """

    budget: int = 0
    domain: int = 0
    name: str = ""

    def run(self, oracle, rng=None) -> tuple[tuple[int, ...], tuple]:
        raise NotImplementedError


def _reprogram_pair(tag: str, miss: int, value: int, base: Permutation, target):
    """The pair (x, y) written into the oracle for one guessed query.

    hit/forward and hit/miss read the external target directly at the query
    value; the miss cases route the query value through the internal base
    table first, then through the target's opposite direction.
    """
    if tag == FORWARD:
        if miss == HIT:
            return value, target.forward(value)
        out = base.forward(value)
        return target.backward(out), out
    if miss == HIT:
        return target.backward(value), value
    pre = base.backward(value)
    return pre, target.forward(pre)


class _InterceptingOracle:
    """Oracle view handed to a classical adversary by the simulator."""

    def __init__(self, sim_state):
        self._s = sim_state

    def forward(self, x: int) -> int:
        return self._s.answer(FORWARD, x)

    def backward(self, y: int) -> int:
        return self._s.answer(BACKWARD, y)


class _ClassicalSimState:
    def __init__(self, base, target, choice, budget, trace):
        self.base = base
        self.target = target
        self.oracle = StatefulOracle(base)
        self.slot_map = choice.slot_map()
        self.miss_flags = choice.miss_flags
        self.budget = budget
        self.trace = trace
        self.count = 0

    def answer(self, tag: str, value: int) -> int:
        self.count += 1
        if self.count > self.budget:
            raise ProtocolError(f"adversary exceeded its budget of {self.budget} queries")
        entry = {"slot": self.count, "direction": tag, "measured": None,
                 "reprogram": None, "when": None}
        j = self.slot_map.get(self.count)
        if j is not None:
            pair = _reprogram_pair(tag, self.miss_flags[j], value, self.base, self.target)
            self.oracle.reprogram(*pair)
            entry["measured"] = value
            entry["reprogram"] = list(pair)
            entry["when"] = "before"
        perm = self.oracle.current
        out = perm.forward(value) if tag == FORWARD else perm.backward(value)
        if self.trace is not None:
            self.trace.append(entry)
        return out


def run_classical_sim(adv: ClassicalAdversary, base: Permutation, target,
                      choice: Optional[SimChoice] = None, rng=None,
                      trace: Optional[list] = None):
    """Run the classical measure-and-reprogram experiment; returns (xs, z)."""
    if choice is None:
        if rng is None:
            raise DomainError("need either an explicit choice or an rng")
        choice = sample_sim_choice(adv.budget, 1, with_timing=False, rng=rng)
    if any(s is not None and s > adv.budget for s in choice.slots):
        raise PreconditionError("choice references slots beyond the adversary budget")
    if choice.after_flags is not None:
        raise PreconditionError("the classical simulator carries no timing flags")
    state = _ClassicalSimState(base, target, choice, adv.budget, trace)
    return adv.run(_InterceptingOracle(state), rng)


# ---------------------------------------------------------------------------
# Quantum simulator


@dataclass(frozen=True)
class QuantumAdversary:
    """A normal-form circuit plus the register layout of its output.

    ``x_regs`` name the registers read as the k marked outputs, ``z_regs``
    the auxiliary output.  ``declared_queries`` is the circuit's query count
    before the forward/backward split; bound constants are stated in it.
    """

    circuit: NormalFormCircuit
    x_regs: tuple[str, ...]
    z_regs: tuple[str, ...] = ()
    declared_queries: Optional[int] = None
    name: str = ""

    @property
    def queries(self) -> int:
        if self.declared_queries is not None:
            return self.declared_queries
        return (self.circuit.num_slots + 1) // 2

    def output_distribution(self, state: StateVector) -> dict:
        names = self.x_regs + self.z_regs
        marg = measure_distribution(state, names)
        out = {}
        kx = len(self.x_regs)
        for idx in np.ndindex(*marg.shape):
            p = float(marg[idx])
            if p <= 1e-15:
                continue
            xs = tuple(int(v) for v in idx[:kx])
            z = tuple(int(v) for v in idx[kx:])
            out[(xs, z)] = out.get((xs, z), 0.0) + p
        return out


def _oracle_reprogram(current, pair):
    return current.reprogram(*pair)


def _pair_for_slot(circuit: NormalFormCircuit, tag: str, miss: int, value,
                   base, target):
    if circuit.key is None:
        return _reprogram_pair(tag, miss, value, base, target)
    return _cipher_reprogram_triple(tag, miss, value, base, target)


def _cipher_reprogram_triple(tag: str, miss: int, value, base: Cipher, target):
    key, w = value
    if tag == FORWARD:
        if miss == HIT:
            return key, w, target.forward(key, w)
        out = base.forward(key, w)
        return key, target.backward(key, out), out
    if miss == HIT:
        return key, target.backward(key, w), w
    pre = base.backward(key, w)
    return key, pre, target.forward(key, pre)


def run_quantum_sim(adv: QuantumAdversary, base, target, choice: SimChoice,
                    mode: str = "exact", rng=None, trace: Optional[list] = None):
    """Quantum measure-and-reprogram experiment.

    exact mode branches over every measurement outcome and returns the full
    distribution over ((xs), (z)); sample mode draws one trajectory, filling
    `trace` if given, and returns one (xs, z).
    """
    circuit = adv.circuit
    if any(s is not None and s > circuit.num_slots for s in choice.slots):
        raise PreconditionError("choice references slots beyond the circuit")
    if choice.after_flags is None:
        raise PreconditionError("the quantum simulator needs timing flags")
    measured_regs = circuit.query_registers()
    slot_map = choice.slot_map()

    if mode == "exact":
        dist: dict = {}

        def walk(state, current, i):
            if i > circuit.num_slots:
                for key, p in adv.output_distribution(state).items():
                    dist[key] = dist.get(key, 0.0) + p
                return
            tag = circuit.slot_tags[i - 1]
            j = slot_map.get(i)
            if j is None:
                nxt = _apply(state, circuit, current, tag)
                walk(circuit.unitaries[i].apply(nxt), current, i + 1)
                return
            for value, sub in measurement_branches(state, measured_regs):
                pair = _pair_for_slot(circuit, tag, choice.miss_flags[j], value, base, target)
                updated = _oracle_reprogram(current, pair)
                answerer = current if choice.after_flags[j] else updated
                nxt = _apply(sub, circuit, answerer, tag)
                walk(circuit.unitaries[i].apply(nxt), updated, i + 1)

        walk(circuit.unitaries[0].apply(zero_state(circuit.regs)), base, 1)
        return dist

    if mode != "sample":
        raise DomainError(f"unknown mode {mode!r}")
    if rng is None:
        raise DomainError("sample mode needs an rng")
    state = circuit.unitaries[0].apply(zero_state(circuit.regs))
    current = base
    for i in range(1, circuit.num_slots + 1):
        tag = circuit.slot_tags[i - 1]
        j = slot_map.get(i)
        entry = {"slot": i, "direction": tag, "measured": None,
                 "reprogram": None, "when": None}
        if j is None:
            state = _apply(state, circuit, current, tag)
        else:
            value, state = sample_measurement(state, measured_regs, rng)
            pair = _pair_for_slot(circuit, tag, choice.miss_flags[j], value, base, target)
            updated = _oracle_reprogram(current, pair)
            answerer = current if choice.after_flags[j] else updated
            state = _apply(state, circuit, answerer, tag)
            current = updated
            entry["measured"] = list(value) if isinstance(value, tuple) else value
            entry["reprogram"] = list(pair)
            entry["when"] = "after" if choice.after_flags[j] else "before"
        if trace is not None:
            trace.append(entry)
        state = circuit.unitaries[i].apply(state)
    names = adv.x_regs + adv.z_regs
    outcome, _ = sample_measurement(state, names, rng)
    if not isinstance(outcome, tuple):
        outcome = (outcome,)
    kx = len(adv.x_regs)
    return tuple(outcome[:kx]), tuple(outcome[kx:])


def _apply(state, circuit, oracle, tag):
    from .circuits import _apply_slot
    return _apply_slot(state, circuit, oracle, tag)


# ---------------------------------------------------------------------------
# State decomposition


def decompose_state(adv: QuantumAdversary, base: Permutation, target: Permutation,
                    xs: Sequence[int]):
    """All signed components of the reprogrammed-oracle final state.

    One component per valid choice: guessed slots get a query-register
    projection onto the hit or miss value appropriate to the slot direction;
    slot i runs under the partial reprogramming of all indices already fired
    (including index j at its own slot exactly when the reprogramming happens
    before the answer).  The signed sum over all components reproduces the
    run under the fully reprogrammed table.
    """
    if not is_good_pair(base, target, xs):
        raise PreconditionError("(base, target) is not a good pair for these inputs")
    hm = hit_miss_queries(base, target, xs)
    pairs = list(zip(hm.x_hit, hm.y_hit))
    circuit = adv.circuit
    partial_cache: dict[frozenset, Permutation] = {}

    def partial(js: frozenset) -> Permutation:
        if js not in partial_cache:
            partial_cache[js] = base.reprogram_seq([pairs[j] for j in sorted(js)])
        return partial_cache[js]

    components = []
    for choice in sim_choice_space(circuit.num_slots, len(xs), with_timing=True):
        slot_map = choice.slot_map()
        oracles = []
        projections: list[Optional[Projector]] = []
        for i in range(1, circuit.num_slots + 1):
            tag = circuit.slot_tags[i - 1]
            fired = frozenset(
                j for j, s in enumerate(choice.slots)
                if s is not None and (s < i or (s == i and not choice.after_flags[j]))
            )
            oracles.append(partial(fired))
            j = slot_map.get(i)
            if j is None:
                projections.append(None)
            else:
                if tag == FORWARD:
                    value = hm.x_hit[j] if choice.miss_flags[j] == HIT else hm.x_miss[j]
                else:
                    value = hm.y_hit[j] if choice.miss_flags[j] == HIT else hm.y_miss[j]
                projections.append(Projector(circuit.query, frozenset((value,))))
        state = run_with_insertions(circuit, oracles, projections)
        components.append((choice, choice.sign(), state))
    return components


def decomposition_residual(adv: QuantumAdversary, base: Permutation,
                           target: Permutation, xs: Sequence[int]) -> float:
    """Norm of (signed component sum) minus the reprogrammed-oracle state."""
    comps = decompose_state(adv, base, target, xs)
    total = None
    for _, sign, state in comps:
        contrib = state.scaled(sign)
        total = contrib if total is None else total + contrib
    ys = [target.forward(x) for x in xs]
    reference = run_circuit(adv.circuit, base.reprogram_seq(list(zip(xs, ys))))
    return total.distance(reference)


# ---------------------------------------------------------------------------
# Lifted adversary


class _CountingOracle:
    """Wraps the external oracle and counts how often it is consulted."""

    def __init__(self, inner):
        self.inner = inner
        self.calls = 0

    def forward(self, x):
        self.calls += 1
        return self.inner.forward(x)

    def backward(self, y):
        self.calls += 1
        return self.inner.backward(y)


class LiftedAdversary(ClassicalAdversary):
    """The k-classical-query algorithm built from a many-query adversary.

    On each run it draws a fresh internal permutation and a simulator choice,
    then runs the appropriate measure-and-reprogram experiment with the
    external oracle standing in for the target.  At most one external query
    is spent per non-None guessed index, so the budget k always holds.
    """

    def __init__(self, inner, k: int, domain: int):
        self.inner = inner
        self.k = k
        self.budget = k
        self.domain = domain
        self.name = f"lifted({getattr(inner, 'name', '')})"
        self.last_external_calls = 0

    def run(self, oracle, rng=None):
        if rng is None:
            raise DomainError("the lifted adversary needs an rng")
        counter = _CountingOracle(oracle)
        base = Permutation.random(self.domain, rng)
        if isinstance(self.inner, QuantumAdversary):
            choice = sample_sim_choice(self.inner.circuit.num_slots, self.k, True, rng)
            out = run_quantum_sim(self.inner, base, counter, choice, mode="sample", rng=rng)
        else:
            choice = sample_sim_choice(self.inner.budget, self.k, False, rng)
            out = run_classical_sim(self.inner, base, counter, choice, rng=rng)
        self.last_external_calls = counter.calls
        if counter.calls > self.k:
            raise ProtocolError("lifted adversary exceeded its external budget")
        return out


def build_lifted_adversary(adv, k: int) -> LiftedAdversary:
    if isinstance(adv, QuantumAdversary):
        domain = adv.circuit.regs.dim(adv.circuit.query)
    else:
        domain = adv.domain
    return LiftedAdversary(adv, k, domain)


# ---------------------------------------------------------------------------
# Cipher simulators


class ClassicalCipherAdversary(ClassicalAdversary):
    """Classical adversary whose oracle takes (key, value) queries."""

    key_count: int = 1


class _CipherSimState:
    def __init__(self, base, target, choice, budget, trace):
        self.base = base
        self.target = target
        self.current = base
        self.log: list[tuple[int, int, int]] = []
        self.slot_map = choice.slot_map()
        self.miss_flags = choice.miss_flags
        self.budget = budget
        self.trace = trace
        self.count = 0

    def answer(self, tag: str, key: int, value: int) -> int:
        self.count += 1
        if self.count > self.budget:
            raise ProtocolError(f"adversary exceeded its budget of {self.budget} queries")
        entry = {"slot": self.count, "direction": tag, "measured": None,
                 "reprogram": None, "when": None}
        j = self.slot_map.get(self.count)
        if j is not None:
            triple = _cipher_reprogram_triple(tag, self.miss_flags[j], (key, value),
                                              self.base, self.target)
            self.current = self.current.reprogram(*triple)
            self.log.append(triple)
            entry["measured"] = [key, value]
            entry["reprogram"] = list(triple)
            entry["when"] = "before"
        out = (self.current.forward(key, value) if tag == FORWARD
               else self.current.backward(key, value))
        if self.trace is not None:
            self.trace.append(entry)
        return out


class _InterceptingCipherOracle:
    def __init__(self, state):
        self._s = state

    def forward(self, key, x):
        return self._s.answer(FORWARD, key, x)

    def backward(self, key, y):
        return self._s.answer(BACKWARD, key, y)


def run_classical_cipher_sim(adv: ClassicalCipherAdversary, base: Cipher, target,
                             choice: Optional[SimChoice] = None, rng=None,
                             trace: Optional[list] = None):
    if choice is None:
        if rng is None:
            raise DomainError("need either an explicit choice or an rng")
        choice = sample_sim_choice(adv.budget, 1, with_timing=False, rng=rng)
    if choice.after_flags is not None:
        raise PreconditionError("the classical simulator carries no timing flags")
    state = _CipherSimState(base, target, choice, adv.budget, trace)
    return adv.run(_InterceptingCipherOracle(state), rng)


def run_quantum_cipher_sim(adv: QuantumAdversary, base: Cipher, target,
                           choice: SimChoice, mode: str = "exact", rng=None,
                           trace: Optional[list] = None):
    """Cipher variant; the full (key, query) register pair is measured jointly."""
    if adv.circuit.key is None:
        raise PreconditionError("circuit has no key register")
    return run_quantum_sim(adv, base, target, choice, mode=mode, rng=rng, trace=trace)
