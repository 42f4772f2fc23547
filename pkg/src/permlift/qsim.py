"""Dense statevector engine for oracle-query circuits on small named registers.

States live on an ordered list of registers, each a finite-dimensional basis
{0..d-1}; amplitudes are a dense complex array shaped by the register dims.
Oracles are XOR oracles |x>|y> -> |x>|y ^ f(x)>, so query and response
registers must have power-of-two dimension.  Subnormalized states are
first-class: projections do not renormalize, which is what the state
decomposition machinery needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .ciphers import Cipher
from .errors import DomainError
from .perms import Permutation

STATE_TOL = 1e-10


class Registers:
    """An ordered, named collection of register dimensions."""

    __slots__ = ("names", "dims", "_axis")

    def __init__(self, specs: Sequence[tuple[str, int]]):
        names = tuple(n for n, _ in specs)
        dims = tuple(int(d) for _, d in specs)
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate register names in {names}")
        if any(d < 1 for d in dims):
            raise DomainError(f"register dims must be >= 1, got {dims}")
        self.names = names
        self.dims = dims
        self._axis = {n: i for i, n in enumerate(names)}

    def axis(self, name: str) -> int:
        if name not in self._axis:
            raise DomainError(f"no register named {name!r} (have {self.names})")
        return self._axis[name]

    def dim(self, name: str) -> int:
        return self.dims[self.axis(name)]

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def specs(self) -> tuple[tuple[str, int], ...]:
        return tuple(zip(self.names, self.dims))

    def extended(self, extra: Sequence[tuple[str, int]]) -> "Registers":
        return Registers(self.specs() + tuple(extra))

    def __eq__(self, other):
        return isinstance(other, Registers) and self.specs() == other.specs()

    def __hash__(self):
        return hash(self.specs())

    def __repr__(self):
        return f"Registers({list(self.specs())})"


class StateVector:
    """Complex amplitudes over the joint basis of a register set.

    ``amps`` is shaped by the register dims.  Norms in [0, 1] are legal;
    physical states have norm 1 up to STATE_TOL.
    """

    __slots__ = ("regs", "amps")

    def __init__(self, regs: Registers, amps: np.ndarray):
        amps = np.asarray(amps, dtype=np.complex128)
        if amps.shape != regs.dims:
            amps = amps.reshape(regs.dims)
        self.regs = regs
        self.amps = amps

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def is_unit(self, tol: float = STATE_TOL) -> bool:
        return abs(self.norm_sq() - 1.0) <= tol

    def flat(self) -> np.ndarray:
        return self.amps.reshape(-1)

    def __add__(self, other: "StateVector") -> "StateVector":
        return StateVector(self.regs, self.amps + other.amps)

    def __sub__(self, other: "StateVector") -> "StateVector":
        return StateVector(self.regs, self.amps - other.amps)

    def scaled(self, c) -> "StateVector":
        return StateVector(self.regs, c * self.amps)

    def distance(self, other: "StateVector") -> float:
        return float(np.linalg.norm(self.amps - other.amps))


def zero_state(regs: Registers) -> StateVector:
    amps = np.zeros(regs.dims, dtype=np.complex128)
    amps[(0,) * len(regs.dims)] = 1.0
    return StateVector(regs, amps)


def basis_state(regs: Registers, values: dict[str, int]) -> StateVector:
    idx = [0] * len(regs.dims)
    for name, v in values.items():
        ax = regs.axis(name)
        if not 0 <= v < regs.dims[ax]:
            raise DomainError(f"value {v} outside register {name!r}")
        idx[ax] = v
    amps = np.zeros(regs.dims, dtype=np.complex128)
    amps[tuple(idx)] = 1.0
    return StateVector(regs, amps)


def _require_xor_compatible(nq: int, nr: int, n: int) -> None:
    if nq != n or nr != n:
        raise DomainError(f"oracle on domain {n} needs query/response dims {n}")
    if n & (n - 1):
        raise DomainError(
            f"XOR response combination needs a power-of-two domain, got {n}"
        )


def apply_oracle(state: StateVector, perm: Permutation, direction: str = "forward",
                 query: str = "q", response: str = "r") -> StateVector:
    """|x>|y> -> |x>|y ^ perm(x)> (forward) or with the inverse table (backward)."""
    if direction not in ("forward", "backward"):
        raise DomainError(f"unknown oracle direction {direction!r}")
    regs = state.regs
    aq, ar = regs.axis(query), regs.axis(response)
    _require_xor_compatible(regs.dims[aq], regs.dims[ar], perm.n)
    table = perm.fwd if direction == "forward" else perm.inv
    n = perm.n
    moved = np.moveaxis(state.amps, (aq, ar), (0, 1))
    xs = np.arange(n)[:, None]
    ys = np.arange(n)[None, :] ^ np.asarray(table)[:, None]
    out = moved[xs, ys]
    return StateVector(regs, np.moveaxis(out, (0, 1), (aq, ar)))


def apply_cipher_oracle(state: StateVector, cipher: Cipher, direction: str = "forward",
                        key: str = "K", query: str = "q", response: str = "r") -> StateVector:
    """|K>|x>|y> -> |K>|x>|y ^ E_K(x)> and the backward analogue."""
    if direction not in ("forward", "backward"):
        raise DomainError(f"unknown oracle direction {direction!r}")
    regs = state.regs
    ak, aq, ar = regs.axis(key), regs.axis(query), regs.axis(response)
    if regs.dims[ak] != cipher.key_count:
        raise DomainError("key register dimension must match the cipher key count")
    _require_xor_compatible(regs.dims[aq], regs.dims[ar], cipher.n)
    n = cipher.n
    tables = np.array(
        [p.fwd if direction == "forward" else p.inv for p in cipher.perms]
    )
    moved = np.moveaxis(state.amps, (ak, aq, ar), (0, 1, 2))
    ks = np.arange(cipher.key_count)[:, None, None]
    xs = np.arange(n)[None, :, None]
    ys = np.arange(n)[None, None, :] ^ tables[:, :, None]
    out = moved[ks, xs, ys]
    return StateVector(regs, np.moveaxis(out, (0, 1, 2), (ak, aq, ar)))


def apply_combined_oracle(state: StateVector, perm: Permutation, direction: str = "b",
                          query: str = "q", response: str = "r") -> StateVector:
    """Direction-controlled dispatch: b=0 queries forward, b=1 backward."""
    regs = state.regs
    ab = regs.axis(direction)
    if regs.dims[ab] != 2:
        raise DomainError("direction register must have dimension 2")
    aq, ar = regs.axis(query), regs.axis(response)
    _require_xor_compatible(regs.dims[aq], regs.dims[ar], perm.n)
    n = perm.n
    moved = np.moveaxis(state.amps, (ab, aq, ar), (0, 1, 2))
    out = np.empty_like(moved)
    xs = np.arange(n)[:, None]
    for b, table in ((0, perm.fwd), (1, perm.inv)):
        ys = np.arange(n)[None, :] ^ np.asarray(table)[:, None]
        out[b] = moved[b][xs, ys]
    return StateVector(regs, np.moveaxis(out, (0, 1, 2), (ab, aq, ar)))


def measure_distribution(state: StateVector, names: Sequence[str]) -> np.ndarray:
    """Born-rule marginal over the named registers; sums to the squared norm.

    The result axes follow the order of `names`, not register order.
    """
    regs = state.regs
    axes = [regs.axis(n) for n in names]
    probs = np.abs(state.amps) ** 2
    drop = tuple(i for i in range(len(regs.dims)) if i not in axes)
    marg = probs.sum(axis=drop) if drop else probs
    kept_sorted = sorted(axes)
    return np.transpose(marg, [kept_sorted.index(a) for a in axes])


def project(state: StateVector, name: str, kept: Iterable[int]) -> StateVector:
    """Zero out components whose register value is not in `kept`; no renorm."""
    ax = state.regs.axis(name)
    keep = np.zeros(state.regs.dims[ax], dtype=bool)
    for v in kept:
        keep[v] = True
    shape = [1] * len(state.regs.dims)
    shape[ax] = -1
    return StateVector(state.regs, state.amps * keep.reshape(shape))


def measurement_branches(state: StateVector, names: Sequence[str],
                         tol: float = 1e-14):
    """All outcomes of a computational-basis measurement of the named registers.

    Yields (values, subnormalized collapsed state); branch weights are the
    squared norms of the collapsed states, so they sum to the input norm.
    """
    regs = state.regs
    axes = tuple(regs.axis(n) for n in names)
    marg = measure_distribution(state, names)
    for values in np.ndindex(*marg.shape):
        if marg[values] <= tol:
            continue
        sub = state
        for name, v in zip(names, values):
            sub = project(sub, name, (int(v),))
        out = values[0] if len(names) == 1 else tuple(int(v) for v in values)
        yield out, sub


def sample_measurement(state: StateVector, names: Sequence[str], rng):
    """Sample one outcome and return it with the renormalized collapsed state."""
    marg = measure_distribution(state, names)
    flat = marg.reshape(-1)
    total = flat.sum()
    pick = rng.choice(flat.size, p=flat / total)
    values = np.unravel_index(pick, marg.shape)
    sub = state
    for name, v in zip(names, values):
        sub = project(sub, name, (int(v),))
    sub = sub.scaled(1.0 / math.sqrt(sub.norm_sq()))
    out = int(values[0]) if len(names) == 1 else tuple(int(v) for v in values)
    return out, sub


# ---------------------------------------------------------------------------
# Gates and unitaries


class Gate:
    """One primitive operation on named registers."""

    def apply(self, state: StateVector) -> StateVector:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class LocalUnitary(Gate):
    """A dense unitary on one or more registers (identity elsewhere)."""

    targets: tuple[str, ...]
    matrix: np.ndarray

    def apply(self, state: StateVector) -> StateVector:
        regs = state.regs
        axes = [regs.axis(t) for t in self.targets]
        dims = [regs.dims[a] for a in axes]
        d = int(np.prod(dims))
        if self.matrix.shape != (d, d):
            raise DomainError(
                f"gate on {self.targets} needs a {d}x{d} matrix, got {self.matrix.shape}"
            )
        moved = np.moveaxis(state.amps, axes, range(len(axes)))
        block = moved.reshape(d, -1)
        out = (self.matrix @ block).reshape(moved.shape)
        return StateVector(regs, np.moveaxis(out, range(len(axes)), axes))


@dataclass(frozen=True)
class BasisMap(Gate):
    """A bijection of the joint basis of the target registers.

    ``table[i] = j`` sends joint basis value i (row-major over the targets)
    to joint value j.
    """

    targets: tuple[str, ...]
    table: tuple[int, ...]

    def apply(self, state: StateVector) -> StateVector:
        regs = state.regs
        axes = [regs.axis(t) for t in self.targets]
        dims = [regs.dims[a] for a in axes]
        d = int(np.prod(dims))
        if sorted(self.table) != list(range(d)):
            raise DomainError("basis map table is not a bijection")
        inv = np.empty(d, dtype=np.int64)
        inv[np.asarray(self.table)] = np.arange(d)
        moved = np.moveaxis(state.amps, axes, range(len(axes)))
        block = moved.reshape(d, -1)
        out = block[inv].reshape(moved.shape)
        return StateVector(regs, np.moveaxis(out, range(len(axes)), axes))


@dataclass(frozen=True)
class RegisterSwap(Gate):
    """Exchange the contents of two same-dimension registers."""

    a: str
    b: str

    def apply(self, state: StateVector) -> StateVector:
        regs = state.regs
        ax, bx = regs.axis(self.a), regs.axis(self.b)
        if regs.dims[ax] != regs.dims[bx]:
            raise DomainError("swapped registers must have equal dimension")
        return StateVector(regs, np.swapaxes(state.amps, ax, bx))


@dataclass(frozen=True)
class ControlledRegisterSwap(Gate):
    """Swap register pairs only on the control register's given basis value."""

    control: str
    value: int
    pairs: tuple[tuple[str, str], ...]

    def apply(self, state: StateVector) -> StateVector:
        regs = state.regs
        ac = regs.axis(self.control)
        out = state.amps.copy()
        sel = [slice(None)] * len(regs.dims)
        sel[ac] = self.value
        block = out[tuple(sel)]
        for a, b in self.pairs:
            ax, bx = regs.axis(a), regs.axis(b)
            if regs.dims[ax] != regs.dims[bx]:
                raise DomainError("swapped registers must have equal dimension")
            # axes after slicing out the control axis
            ax2 = ax - (ax > ac)
            bx2 = bx - (bx > ac)
            block = np.swapaxes(block, ax2, bx2)
        out[tuple(sel)] = block
        return StateVector(regs, out)


@dataclass(frozen=True, eq=False)
class DiagonalPhase(Gate):
    """Multiply each joint basis vector of the targets by a unit phase."""

    targets: tuple[str, ...]
    phases: np.ndarray  # shaped by the target dims

    def apply(self, state: StateVector) -> StateVector:
        regs = state.regs
        axes = [regs.axis(t) for t in self.targets]
        moved = np.moveaxis(state.amps, axes, range(len(axes)))
        out = moved * self.phases.reshape(self.phases.shape + (1,) * (moved.ndim - self.phases.ndim))
        return StateVector(regs, np.moveaxis(out, range(len(axes)), axes))


@dataclass(frozen=True)
class Unitary:
    """A product of gates, applied left to right."""

    gates: tuple[Gate, ...] = ()

    def apply(self, state: StateVector) -> StateVector:
        for g in self.gates:
            state = g.apply(state)
        return state

    def then(self, *gates: Gate) -> "Unitary":
        return Unitary(self.gates + tuple(gates))

    @staticmethod
    def identity() -> "Unitary":
        return Unitary(())


def hadamard_gate(target: str, dim: int) -> LocalUnitary:
    """The real Hadamard transform H^{tensor m} on a 2^m-dimensional register."""
    if dim & (dim - 1):
        raise DomainError(f"Hadamard needs a power-of-two register, got dim {dim}")
    h1 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    m = np.array([[1.0]])
    while m.shape[0] < dim:
        m = np.kron(m, h1)
    return LocalUnitary((target,), m.astype(np.complex128))


def basis_perm_gate(target: str, table: Sequence[int]) -> BasisMap:
    """Relabel a single register's basis by a permutation table."""
    return BasisMap((target,), tuple(table))


def controlled_phase_gate(targets: Sequence[str], dims: Sequence[int],
                          marked: Callable[[tuple[int, ...]], bool],
                          angle: float = math.pi) -> DiagonalPhase:
    """exp(i*angle) on joint basis values selected by `marked`."""
    phases = np.ones(tuple(dims), dtype=np.complex128)
    for idx in np.ndindex(*dims):
        if marked(idx):
            phases[idx] = np.exp(1j * angle)
    return DiagonalPhase(tuple(targets), phases)


def superposition_gate(target: str, dim: int, values: Sequence[int]) -> LocalUnitary:
    """A real unitary sending |0> to the uniform superposition of `values`.

    Built as the Householder reflection exchanging |0> and the target vector;
    the rest of the basis goes wherever the reflection sends it.
    """
    values = sorted(set(values))
    col = np.zeros(dim)
    for v in values:
        col[v] = 1.0 / math.sqrt(len(values))
    e0 = np.zeros(dim)
    e0[0] = 1.0
    w = e0 - col
    norm = np.linalg.norm(w)
    if norm < 1e-12:
        mat = np.eye(dim)
    else:
        w = w / norm
        mat = np.eye(dim) - 2.0 * np.outer(w, w)
    return LocalUnitary((target,), mat.astype(np.complex128))


def xor_gate(target: str, constant: int, dim: int) -> BasisMap:
    """|v> -> |v ^ constant>."""
    return BasisMap((target,), tuple(v ^ constant for v in range(dim)))


def controlled_xor_gate(source: str, target: str, dims: tuple[int, int],
                        offset: Callable[[int], int]) -> BasisMap:
    """|s>|t> -> |s>|t ^ offset(s)>; always a bijection of the joint basis."""
    ds, dt = dims
    table = []
    for s in range(ds):
        off = offset(s)
        for t in range(dt):
            table.append(s * dt + (t ^ off))
    return BasisMap((source, target), tuple(table))


def dense_matrix(unitary: Unitary, regs: Registers) -> np.ndarray:
    """Materialize a gate list as one dense matrix over the full space."""
    d = regs.total_dim
    cols = np.zeros((d, d), dtype=np.complex128)
    for i in range(d):
        amps = np.zeros(d, dtype=np.complex128)
        amps[i] = 1.0
        cols[:, i] = unitary.apply(StateVector(regs, amps.reshape(regs.dims))).flat()
    return cols


def is_unitary_matrix(m: np.ndarray, tol: float = STATE_TOL) -> bool:
    d = m.shape[0]
    return m.shape == (d, d) and np.allclose(m.conj().T @ m, np.eye(d), atol=tol)


def oracle_matrix(perm: Permutation, direction: str = "forward") -> np.ndarray:
    """Dense matrix of the XOR oracle on a bare (query, response) pair."""
    regs = Registers((("q", perm.n), ("r", perm.n)))
    d = regs.total_dim
    cols = np.zeros((d, d), dtype=np.complex128)
    for i in range(d):
        amps = np.zeros(d, dtype=np.complex128)
        amps[i] = 1.0
        out = apply_oracle(StateVector(regs, amps.reshape(regs.dims)), perm, direction)
        cols[:, i] = out.flat()
    return cols
