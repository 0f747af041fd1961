"""Diagonalization witnesses over finite enumerated families and finite carriers.

A ``Carrier`` is a finite set [0, N) with a list of permutations
gamma_0 = id, gamma_1, ... whose translate sets {gamma_i x} partition the
carrier; that partition is the orbit equivalence relation E.  Families on a
point are finite tuples, read as the omega-sequence that cycles through them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from gtlab.relations import is_centered
from gtlab.sequences import (
    EPDFun,
    UPSet,
    epd_pointwise_max,
    eq_star,
    from_json,
    leq_star,
    pair_decode,
    pair_encode,
    subseteq_star,
)
from gtlab.unions import FinEqRel


class CarrierError(ValueError):
    pass


@dataclass(frozen=True)
class Carrier:
    size: int
    action: tuple[tuple[int, ...], ...]
    transversal: tuple[int, ...] | None = None
    chain: tuple[FinEqRel, ...] | None = None
    orbit_of: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        N = self.size
        action = tuple(tuple(g) for g in self.action)
        if not action or action[0] != tuple(range(N)):
            raise CarrierError("gamma_0 must be the identity")
        for g in action:
            if sorted(g) != list(range(N)):
                raise CarrierError("action entries must be permutations of the carrier")
        object.__setattr__(self, "action", action)
        translates = [frozenset(g[x] for g in action) for x in range(N)]
        for x in range(N):
            if any(translates[y] != translates[x] for y in translates[x]):
                raise CarrierError("translate sets do not form a partition")
        orbit_rel = FinEqRel.from_labels([min(t) for t in translates])
        object.__setattr__(self, "orbit_of", orbit_rel.labels)
        if self.transversal is not None:
            reps = sorted(self.transversal)
            if sorted({orbit_rel.labels[r] for r in reps}) != sorted(set(orbit_rel.labels)) or len(
                {orbit_rel.labels[r] for r in reps}
            ) != len(reps):
                raise CarrierError("transversal must meet every orbit exactly once")
            object.__setattr__(self, "transversal", tuple(reps))
        if self.chain is not None:
            chain = tuple(self.chain)
            for F, G in zip(chain, chain[1:]):
                if not F.refines(G):
                    raise CarrierError("chain must be increasing")
            if not chain or chain[-1] != orbit_rel:
                raise CarrierError("chain must exhaust the orbit relation")
            object.__setattr__(self, "chain", chain)

    # constructors -------------------------------------------------------

    @classmethod
    def trivial(cls, size: int = 1, with_transversal: bool = True) -> "Carrier":
        return cls(size, (tuple(range(size)),), tuple(range(size)) if with_transversal else None)

    @classmethod
    def rotations(cls, blocks: Sequence[Sequence[int]], *, transversal: bool = True, chain=None) -> "Carrier":
        """Action by cyclic rotation inside each block, in the listed cyclic order."""
        N = sum(len(b) for b in blocks)
        G = max(len(b) for b in blocks)
        action = []
        for i in range(G):
            g = [0] * N
            for b in blocks:
                for pos, x in enumerate(b):
                    g[x] = b[(pos + i) % len(b)]
            action.append(tuple(g))
        reps = tuple(b[0] for b in blocks) if transversal else None
        return cls(N, tuple(action), reps, chain)

    # queries ------------------------------------------------------------

    @property
    def G(self) -> int:
        return len(self.action)

    def gamma(self, i: int, x: int) -> int:
        return self.action[i][x]

    def orbit(self, x: int) -> list[int]:
        return sorted({g[x] for g in self.action})

    def orbit_relation(self) -> FinEqRel:
        return FinEqRel(self.orbit_of)

    def related(self, x: int, y: int) -> bool:
        return self.orbit_of[x] == self.orbit_of[y]

    def sigma(self, x: int) -> int:
        """The transversal point in x's orbit."""
        if self.transversal is None:
            raise CarrierError("carrier has no transversal")
        for r in self.transversal:
            if self.orbit_of[r] == self.orbit_of[x]:
                return r
        raise AssertionError("transversal misses an orbit")

    def chain_level(self, n: int) -> FinEqRel:
        if self.chain is None:
            raise CarrierError("carrier has no chain")
        return self.chain[min(n, len(self.chain) - 1)]

    def merge_level(self, x: int, y: int) -> int | None:
        """Least chain index at which x and y are related."""
        if self.chain is None:
            raise CarrierError("carrier has no chain")
        for n, F in enumerate(self.chain):
            if F.related(x, y):
                return n
        return None

    def to_json(self) -> dict:
        obj = {"size": self.size, "action": [list(g) for g in self.action]}
        if self.transversal is not None:
            obj["transversal"] = list(self.transversal)
        if self.chain is not None:
            obj["chain"] = [list(F.labels) for F in self.chain]
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "Carrier":
        chain = obj.get("chain")
        return cls(
            obj["size"],
            tuple(tuple(g) for g in obj["action"]),
            tuple(obj["transversal"]) if "transversal" in obj else None,
            tuple(FinEqRel(tuple(c)) for c in chain) if chain is not None else None,
        )


HOM_CLASSES = ("exact", "eqstar", "none")


@dataclass(frozen=True)
class PointMap:
    """Assignment of a value (set, function, or tuple of them) to each carrier point."""

    values: tuple
    kind: str = "none"

    def __post_init__(self):
        if self.kind not in HOM_CLASSES:
            raise ValueError(f"unknown homomorphism class {self.kind!r}")
        object.__setattr__(self, "values", tuple(self.values))

    def __getitem__(self, x: int):
        return self.values[x]

    def __len__(self) -> int:
        return len(self.values)

    def verify(self, carrier: Carrier) -> bool:
        """Check the declared homomorphism class against the carrier's orbits."""
        if self.kind == "none":
            return True
        for x in range(carrier.size):
            for y in carrier.orbit(x):
                a, b = self.values[x], self.values[y]
                if self.kind == "exact" and a != b:
                    return False
                if self.kind == "eqstar":
                    pairs = zip(a, b) if isinstance(a, tuple) else [(a, b)]
                    if isinstance(a, tuple) and len(a) != len(b):
                        return False
                    if not all(eq_star(u, v) for u, v in pairs):
                        return False
        return True

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, int):
                return v
            return [enc(e) for e in v] if isinstance(v, tuple) else v.to_json()

        return {"points": [{"id": i, "value": enc(v)} for i, v in enumerate(self.values)], "class": self.kind}

    @classmethod
    def from_json(cls, obj: dict) -> "PointMap":
        pts = sorted(obj["points"], key=lambda p: p["id"])
        if [p["id"] for p in pts] != list(range(len(pts))):
            raise ValueError("point ids must be 0..N-1")

        def dec(v):
            if isinstance(v, int):
                return v
            return tuple(dec(e) for e in v) if isinstance(v, list) else from_json(v)

        return cls(tuple(dec(p["value"]) for p in pts), obj.get("class", "none"))


def _cyc(family: Sequence, i: int):
    return family[i % len(family)]


# ---------------------------------------------------------------------------
# bounding


def bound_family(family: Sequence[EPDFun]) -> EPDFun:
    """beta(n) = max over k <= n of family[k](n)."""
    if not family:
        raise ValueError("cannot bound an empty family")
    top = family[0]
    for f in family[1:]:
        top = epd_pointwise_max(top, f)
    K = len(family)
    prefix = [max(f(n) for f in family[: n + 1]) for n in range(K - 1)]
    return EPDFun.from_tail(prefix, top)


def invariant_bound(carrier: Carrier, phi: PointMap) -> PointMap:
    """psi(x)(n) = max over i <= n of phi(gamma_i sigma(x))(n); constant on orbits."""
    out = []
    for x in range(carrier.size):
        s = carrier.sigma(x)
        out.append(bound_family([phi[carrier.gamma(i, s)] for i in range(carrier.G)]))
    return PointMap(tuple(out), "exact")


# ---------------------------------------------------------------------------
# non-splitting


class Side(enum.Enum):
    KEEP = "keep"
    COMPLEMENT = "complement"


@dataclass(frozen=True)
class FilterEscape:
    family: tuple[UPSet, ...]
    chain: tuple[UPSet, ...]
    sides: tuple[Side, ...]
    escape: tuple[int, ...]

    def verify(self) -> bool:
        """Chain nesting, side certificates, and escape placement."""
        prev = UPSet.omega()
        for A, B, side in zip(self.family, self.chain, self.sides):
            target = A if side is Side.KEEP else A.complement()
            if B != prev & target or not B.is_infinite():
                return False
            prev = B
        if len(set(self.escape)) != len(self.escape):
            return False
        for m, b in enumerate(self.escape):
            if self.chain and b not in self.chain[min(m, len(self.chain) - 1)]:
                return False
        return True

    def minority_count(self, n: int) -> int:
        """Escape elements on the side of A_n the chain did not choose."""
        A = self.family[n]
        keep = self.sides[n] is Side.KEEP
        return sum((b in A) != keep for b in self.escape)


def filter_escape(family: Sequence[UPSet], steps: int = 64) -> FilterEscape:
    """Nested choice of sides, then pick escape elements by minima.

    B_n is B_{n-1} & A_n when that is infinite and B_{n-1} minus A_n otherwise;
    escape element m is the least unused element of B_min(m, last).
    """
    B = UPSet.omega()
    chain, sides = [], []
    for k, A in enumerate(family):
        if not A.is_infinite():
            raise ValueError(f"member {k} is finite")
        kept = B & A
        if kept.is_infinite():
            B, side = kept, Side.KEEP
        else:
            B, side = B - A, Side.COMPLEMENT
            assert B.is_infinite(), "an infinite set has an infinite side"
        chain.append(B)
        sides.append(side)
    escape: list[int] = []
    for m in range(steps):
        source = chain[min(m, len(chain) - 1)] if chain else UPSet.omega()
        escape.append(source.least_not_in(escape))
    return FilterEscape(tuple(family), tuple(chain), tuple(sides), tuple(escape))


@dataclass(frozen=True)
class SyncResult:
    psi: PointMap  # the first `steps` elements a_0, a_1, ... per point
    sequences: tuple[tuple[int, ...], ...]

    def agree_from(self, x: int, y: int) -> int:
        """Least n with a_m(x) == a_m(y) for every computed m >= n."""
        a, b = self.sequences[x], self.sequences[y]
        n = len(a)
        while n > 0 and a[n - 1] == b[n - 1]:
            n -= 1
        return n


def pseudo_intersection_sync(carrier: Carrier, phi: PointMap, steps: int) -> SyncResult:
    """a_{n+1}(x) = min of (phi(x)(0) & ... & phi(x)(n)) minus {a_i(y) : i <= n, y F_n x}."""
    N = carrier.size
    for x in range(N):
        fam = phi[x]
        if not fam:
            raise ValueError(f"point {x} has an empty family")
        if not is_centered(fam):
            raise ValueError(f"family at point {x} is not centered")
    seqs = [[phi[x][0].next_member(0)] for x in range(N)]
    inter = [phi[x][0] for x in range(N)]
    for n in range(steps - 1):
        F = carrier.chain_level(n)
        classes = F.classes()
        taken = {}
        for cls in classes:
            used = {seqs[y][i] for y in cls for i in range(n + 1)}
            for y in cls:
                taken[y] = used
        nxt = []
        for x in range(N):
            if n > 0:
                inter[x] = inter[x] & _cyc(phi[x], n)
            nxt.append(inter[x].least_not_in(taken[x]))
        for x in range(N):
            seqs[x].append(nxt[x])
    seqs_t = tuple(tuple(s) for s in seqs)
    return SyncResult(PointMap(seqs_t, "none"), seqs_t)



@dataclass(frozen=True)
class SmoothSplit:
    psi: PointMap  # tuple of alpha_n per point
    sides: tuple[tuple[Side, ...], ...]
    stages: tuple[tuple[UPSet, ...], ...]

    def verify(self, carrier: Carrier, phi: PointMap) -> bool:
        """psi(x) minus stage n is among the first n alphas, so psi(x) picks a side of every member."""
        for x in range(carrier.size):
            s = carrier.sigma(x)
            alphas = self.psi[x]
            for n, stage in enumerate(self.stages[x]):
                A = _cyc(phi[s], n)
                side_set = A if self.sides[x][n] is Side.KEEP else A.complement()
                if not all(a in stage for a in alphas[n:]):
                    return False
                if not subseteq_star(stage, side_set):
                    return False
        return True


def smooth_split_witness(carrier: Carrier, phi: PointMap, steps: int) -> SmoothSplit:
    """Diagonalize at the transversal point; every orbit member reads the same answer."""
    if carrier.transversal is None:
        raise CarrierError("smooth splitting needs a transversal")
    cache = {}
    for s in carrier.transversal:
        fam = phi[s]
        for k, A in enumerate(fam):
            if not A.is_infinite():
                raise ValueError(f"member {k} of the family at {s} is finite")
        stage = fam[0]
        stages, sides = [stage], [Side.KEEP]
        for n in range(1, steps):
            A = _cyc(fam, n)
            kept = A & stage
            if kept.is_infinite():
                stage, side = kept, Side.KEEP
            else:
                stage, side = stage - A, Side.COMPLEMENT
            stages.append(stage)
            sides.append(side)
        alphas: list[int] = []
        for n in range(steps):
            alphas.append(stages[n].least_not_in(alphas))
        cache[s] = (tuple(alphas), tuple(sides), tuple(stages))
    rows = [cache[carrier.sigma(x)] for x in range(carrier.size)]
    return SmoothSplit(
        PointMap(tuple(r[0] for r in rows), "exact"),
        tuple(r[1] for r in rows),
        tuple(r[2] for r in rows),
    )


class SplitSide(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class WitnessConditionError(ValueError):
    pass


def split_side(v: UPSet, x: UPSet) -> SplitSide:
    """LEFT iff v is almost contained in x, RIGHT iff in the complement of x."""
    if not v.is_infinite():
        raise ValueError("v must be infinite")
    left = subseteq_star(v, x)
    right = subseteq_star(v, x.complement())
    if left == right:
        # both would force v finite, so this is the 'x splits v' case
        raise WitnessConditionError("v is split by x: neither side almost contains it")
    return SplitSide.LEFT if left else SplitSide.RIGHT


# ---------------------------------------------------------------------------
# conversions and transport


def spread(carrier: Carrier, phi: PointMap) -> PointMap:
    """phi'(x)(n) = phi(gamma_n x), enumerating the orbit's functions at every point."""
    return PointMap(
        tuple(tuple(phi[carrier.gamma(i, x)] for i in range(carrier.G)) for x in range(carrier.size)),
        "none",
    )


def collapse(carrier: Carrier, phi_families: PointMap) -> PointMap:
    """phi(x)(n) = max over k <= n of phi'(x)(k)(n)."""
    return PointMap(tuple(bound_family(phi_families[x]) for x in range(carrier.size)), "none")


def phi_conversions(direction: str, carrier: Carrier, data: PointMap) -> PointMap:
    if direction == "spread":
        if any(not isinstance(v, EPDFun) for v in data.values):
            raise ValueError("spread takes one function per point")
        return spread(carrier, data)
    if direction == "collapse":
        if any(not isinstance(v, tuple) or not all(isinstance(f, EPDFun) for f in v) for v in data.values):
            raise ValueError("collapse takes a family of functions per point")
        return collapse(carrier, data)
    raise ValueError(f"unknown direction {direction!r}")


def bounds_all(psi: EPDFun, family: Sequence[EPDFun]) -> bool:
    return all(leq_star(f, psi) for f in family)


class Selector:
    """Choice of base point for transport: identity, transversal, or least translate into a set."""

    def __init__(self, kind: str, target: Sequence[int] | None = None):
        if kind not in ("identity", "transversal", "least_index_into"):
            raise ValueError(f"unknown selector {kind!r}")
        if kind == "least_index_into" and target is None:
            raise ValueError("least_index_into needs a target set")
        self.kind = kind
        self.target = frozenset(target or ())

    def __call__(self, carrier: Carrier, x: int) -> int:
        if self.kind == "identity":
            return x
        if self.kind == "transversal":
            return carrier.sigma(x)
        for i in range(carrier.G):
            y = carrier.gamma(i, x)
            if y in self.target:
                return y
        raise CarrierError(f"no translate of {x} lands in the target set")


@dataclass(frozen=True)
class Spread:
    """phi~(x)(n) = phi(gamma_{n0} sel(x))(n1) with n = <n0, n1>."""

    carrier: Carrier
    phi: PointMap
    base: tuple[int, ...]

    def __call__(self, x: int, n: int):
        n0, n1 = pair_decode(n)
        y = self.carrier.gamma(n0 % self.carrier.G, self.base[x])
        return _cyc(self.phi[y], n1)

    def horizon(self) -> int:
        """An index past which every (n0, n1) combination has been visited."""
        K = max(len(f) for f in self.phi.values)
        return pair_encode(self.carrier.G - 1, K - 1) + self.carrier.G + K

    def value_set(self, x: int) -> set:
        return {self(x, n) for n in range(self.horizon())}

    def prefix(self, x: int, length: int) -> tuple:
        return tuple(self(x, n) for n in range(length))


def spread_homomorphism(carrier: Carrier, phi: PointMap, selector: Selector) -> Spread:
    base = tuple(selector(carrier, x) for x in range(carrier.size))
    return Spread(carrier, phi, base)
