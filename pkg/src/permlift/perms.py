"""Permutations on {0..n-1} with explicit tables and a reprogramming algebra.

The reprogramming edit ``pi[x -> y]`` forces ``pi(x) = y`` while keeping the
table a bijection: the old preimage of ``y`` is rerouted to the displaced
value ``pi(x)``.  Sequential edits fold left to right.  Everything here is
exact and immutable; domains are small enough to enumerate outright.

Bitstring convention used package-wide: a string ``s_1 s_2 ... s_m`` is the
integer ``sum(s_i * 2**(i-1))``, i.e. the first (leftmost) bit is the least
significant integer bit.  "m leading zero bits" therefore means
``value % 2**m == 0``.
"""

from __future__ import annotations

import itertools
import json
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import CapabilityError, DomainError, PreconditionError

Pair = tuple[int, int]

#: Largest n for which full n! enumeration is permitted by default.
ENUMERATION_CEILING = 8


class Permutation:
    """A bijection on {0..n-1} with O(1) forward and inverse lookup.

    Instances are immutable and hashable; equality is table equality.
    """

    __slots__ = ("fwd", "inv")

    def __init__(self, fwd: Sequence[int]):
        try:
            fwd = tuple(operator.index(v) for v in fwd)
        except TypeError:
            raise DomainError(f"{fwd!r} contains non-integer entries") from None
        n = len(fwd)
        inv = [-1] * n
        for x, y in enumerate(fwd):
            if not 0 <= y < n or inv[y] != -1:
                raise DomainError(f"{fwd!r} is not a bijection on 0..{n - 1}")
            inv[y] = x
        self.fwd = fwd
        self.inv = tuple(inv)

    @property
    def n(self) -> int:
        return len(self.fwd)

    def __call__(self, x: int) -> int:
        return self.forward(x)

    def forward(self, x: int) -> int:
        if not 0 <= x < len(self.fwd):
            raise DomainError(f"element {x} outside 0..{len(self.fwd) - 1}")
        return self.fwd[x]

    def backward(self, y: int) -> int:
        if not 0 <= y < len(self.inv):
            raise DomainError(f"element {y} outside 0..{len(self.inv) - 1}")
        return self.inv[y]

    def inverse(self) -> "Permutation":
        return Permutation(self.inv)

    def reprogram(self, x: int, y: int) -> "Permutation":
        return reprogram(self, x, y)

    def reprogram_seq(self, pairs: Iterable[Pair]) -> "Permutation":
        return reprogram_seq(self, pairs)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.fwd == other.fwd

    def __hash__(self):
        return hash(self.fwd)

    def __repr__(self):
        return f"Permutation({list(self.fwd)})"

    def to_json(self) -> dict:
        return {"n": self.n, "fwd": list(self.fwd)}

    @classmethod
    def from_json(cls, obj: dict) -> "Permutation":
        if set(obj) != {"n", "fwd"} or obj["n"] != len(obj["fwd"]):
            raise DomainError(f"bad permutation record: {obj!r}")
        return cls(obj["fwd"])

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycle(cls, n: int, cycle: Sequence[int]) -> "Permutation":
        """The permutation that cyclically maps cycle[i] to cycle[i+1]."""
        table = list(range(n))
        for i, a in enumerate(cycle):
            table[a] = cycle[(i + 1) % len(cycle)]
        return cls(table)

    @classmethod
    def random(cls, n: int, rng) -> "Permutation":
        return cls(int(v) for v in rng.permutation(n))


def reprogram(pi: Permutation, x: int, y: int) -> Permutation:
    """The minimal bijective edit of pi mapping x to y.

    Three cases: x goes to y, the old preimage of y goes to pi(x), and every
    other point is fixed.  When y == pi(x) all cases collapse and pi is
    returned unchanged in value.
    """
    n = pi.n
    if not (0 <= x < n and 0 <= y < n):
        raise DomainError(f"pair ({x}, {y}) outside domain 0..{n - 1}")
    table = list(pi.fwd)
    table[pi.inv[y]] = pi.fwd[x]
    table[x] = y
    return Permutation(table)


def reprogram_seq(pi: Permutation, pairs: Iterable[Pair]) -> Permutation:
    """Left-to-right fold of single reprogramming edits."""
    out = pi
    for x, y in pairs:
        out = reprogram(out, x, y)
    return out


def is_disjoint(pairs: Sequence[Pair]) -> bool:
    """True iff no x entry repeats and no y entry repeats across the pairs."""
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    return len(set(xs)) == len(xs) and len(set(ys)) == len(ys)


def is_good_tuple(pi: Permutation, pairs: Sequence[Pair]) -> bool:
    """Disjoint pairs whose targets never collide with pi on the sources.

    Requires, beyond disjointness, that pi(x_i) != y_j for every i, j.  Good
    tuples reprogram order-independently and collision-free.
    """
    for x, y in pairs:
        if not (0 <= x < pi.n and 0 <= y < pi.n):
            raise DomainError(f"pair ({x}, {y}) outside domain 0..{pi.n - 1}")
    if not is_disjoint(pairs):
        return False
    targets = {y for _, y in pairs}
    return all(pi.fwd[x] not in targets for x, _ in pairs)


def is_good_pair(base: Permutation, target: Permutation, xs: Sequence[int]) -> bool:
    """Whether (base, target) is a good pair for the marked inputs xs.

    The induced pairs are (x_j, target(x_j)); membership reduces to
    :func:`is_good_tuple` against ``base``.  xs must be duplicate-free.
    """
    if len(set(xs)) != len(xs):
        raise PreconditionError(f"marked inputs must be distinct, got {list(xs)}")
    return is_good_tuple(base, [(x, target.forward(x)) for x in xs])


@dataclass(frozen=True)
class HitMiss:
    """Per-index hit and miss query values for forward and backward queries.

    For index j: ``x_hit = x_j`` and ``y_hit = target(x_j)`` name the pair
    directly, while ``x_miss = base^-1(y_hit)`` and ``y_miss = base(x_j)``
    are the points whose image under the reprogrammed table changes.
    """

    x_hit: tuple[int, ...]
    x_miss: tuple[int, ...]
    y_hit: tuple[int, ...]
    y_miss: tuple[int, ...]

    def __len__(self):
        return len(self.x_hit)


def hit_miss_queries(base: Permutation, target: Permutation, xs: Sequence[int]) -> HitMiss:
    """Hit/miss values for each marked input; requires a good pair."""
    if not is_good_pair(base, target, xs):
        raise PreconditionError("(base, target) is not a good pair for these inputs")
    y_hit = tuple(target.forward(x) for x in xs)
    return HitMiss(
        x_hit=tuple(xs),
        x_miss=tuple(base.backward(y) for y in y_hit),
        y_hit=y_hit,
        y_miss=tuple(base.forward(x) for x in xs),
    )


def bad_probability_bound(k: int, n: int) -> Fraction:
    """Upper bound k^2/n on the chance a uniform target breaks goodness."""
    if k < 1 or n < 1:
        raise DomainError(f"need k >= 1 and n >= 1, got k={k}, n={n}")
    return Fraction(k * k, n)


def all_permutations(n: int, ceiling: int = ENUMERATION_CEILING) -> Iterator[Permutation]:
    """All n! permutations in lexicographic table order."""
    if n > ceiling:
        raise CapabilityError(f"{n}! enumeration exceeds ceiling n <= {ceiling}")
    for tab in itertools.permutations(range(n)):
        yield Permutation(tab)


def permutation_count(n: int) -> int:
    return math.factorial(n)


def bad_fraction(base: Permutation, xs: Sequence[int],
                 ceiling: int = ENUMERATION_CEILING) -> Fraction:
    """Exact fraction of targets that fail goodness, by full enumeration."""
    n = base.n
    bad = sum(1 for t in all_permutations(n, ceiling) if not is_good_pair(base, t, xs))
    return Fraction(bad, permutation_count(n))


def bad_fraction_sampled(base: Permutation, xs: Sequence[int], trials: int, rng):
    """Monte Carlo estimate of the bad fraction and its standard error."""
    bad = 0
    for _ in range(trials):
        if not is_good_pair(base, Permutation.random(base.n, rng), xs):
            bad += 1
    phat = bad / trials
    sigma = math.sqrt(max(phat * (1.0 - phat), 1.0 / trials) / trials)
    return phat, sigma


def save_permutation(pi: Permutation, path) -> None:
    with open(path, "w") as fh:
        json.dump(pi.to_json(), fh)


def load_permutation(path) -> Permutation:
    with open(path) as fh:
        return Permutation.from_json(json.load(fh))
