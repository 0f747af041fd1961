"""Eventually periodic sets and functions with decidable almost-relations.

Two value types live here:

``UPSet``
    a subset of omega given by a finite head of bits followed by a repeating
    period block.  Closed under the Boolean operations.

``EPDFun``
    a function omega -> omega whose first differences are eventually
    periodic.  Closed under pointwise max, and rich enough to hold
    increasing enumerations and gap-cover functions of ``UPSet`` values.

Both types are kept in canonical form (primitive period, shortest head), so
``==`` on representations is equality of the underlying objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate
from typing import Iterator, Sequence, Union


class SpaceMismatch(TypeError):
    """Operands do not live in the space a relation expects."""


def _primitive(block: tuple) -> tuple:
    p = len(block)
    for d in range(1, p):
        if p % d == 0 and block[:d] * (p // d) == block:
            return block[:d]
    return block


# ---------------------------------------------------------------------------
# UPSet


@dataclass(frozen=True)
class UPSet:
    head: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        head = tuple(1 if b else 0 for b in self.head)
        period = tuple(1 if b else 0 for b in self.period)
        if not period:
            raise ValueError("period block must be nonempty")
        period = _primitive(period)
        while head and head[-1] == period[-1]:
            period = period[-1:] + period[:-1]
            head = head[:-1]
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "_hash", hash((head, period)))

    def __hash__(self) -> int:
        return self._hash

    # constructors -------------------------------------------------------

    @classmethod
    def omega(cls) -> "UPSet":
        return cls((), (1,))

    @classmethod
    def empty(cls) -> "UPSet":
        return cls((), (0,))

    @classmethod
    def residues(cls, modulus: int, residues: Sequence[int]) -> "UPSet":
        """The set of n with n mod `modulus` in `residues`."""
        rs = {r % modulus for r in residues}
        return cls((), tuple(int(r in rs) for r in range(modulus)))

    @classmethod
    def finite(cls, members) -> "UPSet":
        members = sorted(set(members))
        if not members:
            return cls.empty()
        head = [0] * (members[-1] + 1)
        for m in members:
            head[m] = 1
        return cls(tuple(head), (0,))

    @classmethod
    def from_prefix(cls, bits: Sequence[int], period_start: int, period_len: int) -> "UPSet":
        """Read head = bits[:period_start], period = the next `period_len` bits."""
        return cls(tuple(bits[:period_start]), tuple(bits[period_start:period_start + period_len]))

    # basic queries ------------------------------------------------------

    @property
    def h(self) -> int:
        return len(self.head)

    @property
    def p(self) -> int:
        return len(self.period)

    def bit(self, n: int) -> int:
        if n < len(self.head):
            return self.head[n]
        return self.period[(n - len(self.head)) % len(self.period)]

    def __contains__(self, n: int) -> bool:
        return bool(self.bit(n))

    def prefix(self, length: int) -> tuple[int, ...]:
        return tuple(self.bit(n) for n in range(length))

    def is_infinite(self) -> bool:
        return 1 in self.period

    def members(self, below: int) -> list[int]:
        return [n for n in range(below) if self.bit(n)]

    def __iter__(self) -> Iterator[int]:
        """Members in increasing order (possibly forever)."""
        yield from (n for n, b in enumerate(self.head) if b)
        if not self.is_infinite():
            return
        offsets = [r for r, b in enumerate(self.period) if b]
        start = len(self.head)
        while True:
            for r in offsets:
                yield start + r
            start += len(self.period)

    def next_member(self, n: int) -> int | None:
        """Least element >= n, or None if there is none."""
        for m in range(n, len(self.head)):
            if self.head[m]:
                return m
        if not self.is_infinite():
            return None
        n = max(n, len(self.head))
        for k in range(len(self.period)):
            if self.bit(n + k):
                return n + k
        raise AssertionError("unreachable: infinite period without a member")

    def least_not_in(self, excluded) -> int:
        """Least member not in the finite collection `excluded`."""
        excluded = set(excluded)
        n = 0
        while True:
            m = self.next_member(n)
            if m is None:
                raise ValueError("set exhausted by the exclusions")
            if m not in excluded:
                return m
            n = m + 1

    # Boolean algebra ----------------------------------------------------

    def complement(self) -> "UPSet":
        return _complement(self)

    def __and__(self, other: "UPSet") -> "UPSet":
        return _binary("intersect", self, other)

    def __or__(self, other: "UPSet") -> "UPSet":
        return _binary("union", self, other)

    def __sub__(self, other: "UPSet") -> "UPSet":
        return _binary("difference", self, other)

    def __invert__(self) -> "UPSet":
        return self.complement()

    def to_json(self) -> dict:
        return {"head": list(self.head), "period": list(self.period)}

    @classmethod
    def from_json(cls, obj: dict) -> "UPSet":
        return cls(tuple(obj["head"]), tuple(obj["period"]))


_BINARY = {
    "intersect": lambda a, b: a & b,
    "union": lambda a, b: a | b,
    "difference": lambda a, b: a & (1 - b),
}


@lru_cache(maxsize=1 << 16)
def _complement(A: UPSet) -> UPSet:
    return UPSet(tuple(1 - b for b in A.head), tuple(1 - b for b in A.period))


@lru_cache(maxsize=1 << 16)
def _binary(op: str, A: UPSet, B: UPSet) -> UPSet:
    fn = _BINARY[op]
    H = max(A.h, B.h)
    L = math.lcm(A.p, B.p)
    head = tuple(fn(A.bit(n), B.bit(n)) for n in range(H))
    period = tuple(fn(A.bit(n), B.bit(n)) for n in range(H, H + L))
    return UPSet(head, period)


def up_boolean(op: str, A: UPSet, B: UPSet | None = None) -> UPSet:
    """Boolean operation on UP sets; `op` is complement/intersect/union/difference."""
    if op == "complement":
        if B is not None:
            raise ValueError("complement takes one operand")
        return A.complement()
    if op not in _BINARY:
        raise ValueError(f"unknown Boolean operation {op!r}")
    if B is None:
        raise ValueError(f"{op} takes two operands")
    return _binary(op, A, B)


def up_is_infinite(A: UPSet) -> bool:
    return A.is_infinite()


# ---------------------------------------------------------------------------
# EPDFun


@dataclass(frozen=True)
class EPDFun:
    """f(n) = head[n] for n < h, f(h + k) = base + sum of the first k deltas (cyclically)."""

    head: tuple[int, ...]
    base: int
    deltas: tuple[int, ...]

    def __post_init__(self):
        head = tuple(int(v) for v in self.head)
        base = int(self.base)
        deltas = tuple(int(d) for d in self.deltas)
        if not deltas:
            raise ValueError("delta block must be nonempty")
        if sum(deltas) < 0:
            raise ValueError("per-period rise must be nonnegative")
        if any(v < 0 for v in head) or base + min(0, *accumulate(deltas)) < 0:
            # with a nonnegative rise the first period holds the global minimum of the tail
            raise ValueError("function takes a negative value")
        deltas = _primitive(deltas)
        while head and base - head[-1] == deltas[-1]:
            base = head[-1]
            deltas = deltas[-1:] + deltas[:-1]
            head = head[:-1]
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "_partial", (0,) + tuple(accumulate(deltas)))

    @classmethod
    def const(cls, c: int) -> "EPDFun":
        return cls((), c, (0,))

    @classmethod
    def identity(cls) -> "EPDFun":
        return cls((), 0, (1,))

    @classmethod
    def affine(cls, slope: int, intercept: int) -> "EPDFun":
        return cls((), intercept, (slope,))

    @classmethod
    def from_tail(cls, values: Sequence[int], tail: "EPDFun") -> "EPDFun":
        """The function equal to `values` on [0, len(values)) and to `tail` afterwards."""
        s = len(values)
        if s <= tail.h:
            return cls(tuple(values) + tail.head[s:], tail.base, tail.deltas)
        shift = (s - tail.h) % tail.p
        return cls(tuple(values), tail(s), tail.deltas[shift:] + tail.deltas[:shift])

    @property
    def h(self) -> int:
        return len(self.head)

    @property
    def p(self) -> int:
        return len(self.deltas)

    @property
    def rise(self) -> int:
        """Increase of f over one delta period."""
        return self._partial[-1]

    def __call__(self, n: int) -> int:
        if n < len(self.head):
            return self.head[n]
        q, r = divmod(n - len(self.head), len(self.deltas))
        return self.base + q * self._partial[-1] + self._partial[r]

    def prefix(self, length: int) -> tuple[int, ...]:
        return tuple(self(n) for n in range(length))

    def shift_up(self, c: int) -> "EPDFun":
        return EPDFun(tuple(v + c for v in self.head), self.base + c, self.deltas)

    def exceeds_identity(self) -> bool:
        """True iff f(n) > n for every n."""
        if any(v <= n for n, v in enumerate(self.head)):
            return False
        if self.rise < self.p:
            return False
        return all(self(self.h + k) > self.h + k for k in range(self.p))

    def to_json(self) -> dict:
        return {"head": list(self.head), "base": self.base, "deltas": list(self.deltas)}

    @classmethod
    def from_json(cls, obj: dict) -> "EPDFun":
        return cls(tuple(obj["head"]), obj["base"], tuple(obj["deltas"]))


Element = Union[UPSet, EPDFun]


def from_json(obj: dict) -> Element:
    """Decode either interchange encoding (EPDFun objects carry a "base" key)."""
    if "base" in obj:
        return EPDFun.from_json(obj)
    return UPSet.from_json(obj)


# ---------------------------------------------------------------------------
# almost relations


@dataclass(frozen=True)
class AlmostVerdict:
    """Outcome of an almost-relation test.

    From index `start` on, the relevant difference pattern is governed by
    windows of length `window`; checking [0, start + 2*window) pointwise
    reproduces the verdict.
    """

    value: bool
    start: int
    window: int

    def __bool__(self) -> bool:
        return self.value


def _fun_window(f: EPDFun, g: EPDFun) -> tuple[int, int, int]:
    """(H, L, rise of g-f per L-window) past both heads."""
    H = max(f.h, g.h)
    L = math.lcm(f.p, g.p)
    gap = g.rise * (L // g.p) - f.rise * (L // f.p)
    return H, L, gap


def _stable_window(f: EPDFun, g: EPDFun, H: int, L: int, gap: int) -> int:
    """First window start N >= H after which sign(g - f) is fixed (gap != 0)."""
    diffs = [g(H + r) - f(H + r) for r in range(L)]
    if gap > 0:
        # need min(diffs) + q*gap >= 0
        q = max(0, (gap - 1 - min(diffs)) // gap)
    else:
        # need max(diffs) + q*gap <= -1
        q = max(0, (max(diffs) - gap) // -gap)
    return H + q * L


_SET_KINDS = ("subseteq_star", "set_eq_star", "splits")
_FUN_KINDS = ("leq_star", "fun_eq_star")


def almost_compare(kind: str, lhs: Element, rhs: Element) -> AlmostVerdict:
    """Decide an almost-relation between two UP sets or two EPD functions.

    ``splits(A, B)`` holds when A meets B and B minus A both infinitely.
    """
    if kind in _SET_KINDS:
        if not (isinstance(lhs, UPSet) and isinstance(rhs, UPSet)):
            raise SpaceMismatch(f"{kind} compares sets")
        start, window = max(lhs.h, rhs.h), math.lcm(lhs.p, rhs.p)
        if kind == "subseteq_star":
            value = not (lhs - rhs).is_infinite()
        elif kind == "set_eq_star":
            value = not (lhs - rhs).is_infinite() and not (rhs - lhs).is_infinite()
        else:
            value = (lhs & rhs).is_infinite() and (rhs - lhs).is_infinite()
        return AlmostVerdict(value, start, window)
    if kind in _FUN_KINDS:
        if not (isinstance(lhs, EPDFun) and isinstance(rhs, EPDFun)):
            raise SpaceMismatch(f"{kind} compares functions")
        H, L, gap = _fun_window(lhs, rhs)
        if gap == 0:
            diffs = [rhs(H + r) - lhs(H + r) for r in range(L)]
            value = min(diffs) >= 0 if kind == "leq_star" else not any(diffs)
            return AlmostVerdict(value, H, L)
        start = _stable_window(lhs, rhs, H, L, gap)
        value = gap > 0 and kind == "leq_star"
        return AlmostVerdict(value, start, L)
    raise ValueError(f"unknown relation kind {kind!r}")


def _require_sets(kind: str, A, B) -> None:
    if not (isinstance(A, UPSet) and isinstance(B, UPSet)):
        raise SpaceMismatch(f"{kind} compares sets")


# The set wrappers skip the certificate; they are on the hot path of every family check.


def subseteq_star(A: UPSet, B: UPSet) -> bool:
    _require_sets("subseteq_star", A, B)
    return not (A - B).is_infinite()


def set_eq_star(A: UPSet, B: UPSet) -> bool:
    _require_sets("set_eq_star", A, B)
    return not (A - B).is_infinite() and not (B - A).is_infinite()


def splits(A: UPSet, B: UPSet) -> bool:
    _require_sets("splits", A, B)
    return (A & B).is_infinite() and (B - A).is_infinite()


def leq_star(f: EPDFun, g: EPDFun) -> bool:
    return almost_compare("leq_star", f, g).value


def fun_eq_star(f: EPDFun, g: EPDFun) -> bool:
    return almost_compare("fun_eq_star", f, g).value


def eq_star(x: Element, y: Element) -> bool:
    if isinstance(x, UPSet):
        return set_eq_star(x, y)
    return fun_eq_star(x, y)


def agree_from(f: EPDFun, g: EPDFun, start: int) -> bool:
    """True iff f(n) == g(n) for every n >= start."""
    H, L, gap = _fun_window(f, g)
    if gap:
        return False
    return all(f(n) == g(n) for n in range(start, max(start, H) + L))


# ---------------------------------------------------------------------------
# constructions


def increasing_enumeration(A: UPSet) -> EPDFun:
    """k -> k-th element of A."""
    if not A.is_infinite():
        raise ValueError("increasing enumeration needs an infinite set")
    head = [n for n, b in enumerate(A.head) if b]
    offsets = [r for r, b in enumerate(A.period) if b]
    gaps = [b - a for a, b in zip(offsets, offsets[1:])] + [A.p + offsets[0] - offsets[-1]]
    return EPDFun(tuple(head), A.h + offsets[0], tuple(gaps))


def gap_cover_function(A: UPSet) -> EPDFun:
    """f(n) = (least element of A that is >= n) + 1, so [n, f(n)) always meets A."""
    if not A.is_infinite():
        raise ValueError("gap cover needs an infinite set")
    head = [A.next_member(n) + 1 for n in range(A.h)]
    window = [A.next_member(A.h + r) + 1 for r in range(A.p + 1)]
    deltas = [b - a for a, b in zip(window, window[1:])]
    return EPDFun(tuple(head), window[0], tuple(deltas))


def epd_pointwise_max(f: EPDFun, g: EPDFun) -> EPDFun:
    H, L, gap = _fun_window(f, g)
    if gap == 0:
        vals = [max(f(n), g(n)) for n in range(H + L + 1)]
        deltas = tuple(b - a for a, b in zip(vals[H:], vals[H + 1:]))
        return EPDFun(tuple(vals[:H]), vals[H], deltas)
    start = _stable_window(f, g, H, L, gap)
    winner = g if gap > 0 else f
    return EPDFun.from_tail([max(f(n), g(n)) for n in range(start)], winner)


# ---------------------------------------------------------------------------
# pairing


def pair_encode(n0: int, n1: int) -> int:
    """Cantor pairing."""
    s = n0 + n1
    return s * (s + 1) // 2 + n1


def pair_decode(n: int) -> tuple[int, int]:
    w = (math.isqrt(8 * n + 1) - 1) // 2
    n1 = n - w * (w + 1) // 2
    return w - n1, n1


def agreement_index(f: EPDFun, g: EPDFun) -> int | None:
    """Least n with f and g equal from n on; None unless f =* g."""
    H, L, gap = _fun_window(f, g)
    if gap:
        return None
    for n in range(H + L - 1, -1, -1):
        if f(n) != g(n):
            return None if n >= H else n + 1
    return 0
