"""Finite equivalence relations and doubly indexed grids of them.

A ``Grid`` holds E[n][m] for rows n < R and columns m < M, increasing along
each row; the row limit E_n is the last column and E is the bottom-right
entry E[R-1][M-1].  Every "for all k >= n" ranges over k < R only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class FinEqRel:
    """A partition of [0, N), stored as one block label per point.

    Labels are canonical: each block is labelled by its least element.
    """

    labels: tuple[int, ...]

    def __post_init__(self):
        first: dict[int, int] = {}
        canon = []
        for x, lab in enumerate(self.labels):
            canon.append(first.setdefault(lab, x))
        object.__setattr__(self, "labels", tuple(canon))

    @classmethod
    def from_labels(cls, labels: Sequence) -> "FinEqRel":
        return cls(tuple(labels))

    @classmethod
    def from_blocks(cls, size: int, blocks: Sequence[Sequence[int]]) -> "FinEqRel":
        labels: list = list(range(size))
        seen = set()
        for b in blocks:
            for x in b:
                if x in seen:
                    raise ValueError(f"point {x} lies in two blocks")
                seen.add(x)
                labels[x] = ("block", min(b))
        return cls(tuple(labels))

    @classmethod
    def identity(cls, size: int) -> "FinEqRel":
        return cls(tuple(range(size)))

    @classmethod
    def full(cls, size: int) -> "FinEqRel":
        return cls((0,) * size)

    @property
    def size(self) -> int:
        return len(self.labels)

    def related(self, x: int, y: int) -> bool:
        return self.labels[x] == self.labels[y]

    def classes(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x, lab in enumerate(self.labels):
            out.setdefault(lab, []).append(x)
        return list(out.values())

    def class_of(self, x: int) -> list[int]:
        lab = self.labels[x]
        return [y for y, l in enumerate(self.labels) if l == lab]

    def pairs(self):
        """Ordered pairs (x, y), x != y, in the relation."""
        for cls in self.classes():
            for x in cls:
                for y in cls:
                    if x != y:
                        yield x, y

    def _same_carrier(self, other: "FinEqRel"):
        if self.size != other.size:
            raise ValueError("relations live on different carriers")

    def refines(self, other: "FinEqRel") -> bool:
        """Every block of self sits inside a block of other (self is a subset of other)."""
        self._same_carrier(other)
        image: dict[int, int] = {}
        return all(image.setdefault(a, b) == b for a, b in zip(self.labels, other.labels))

    def meet(self, other: "FinEqRel") -> "FinEqRel":
        self._same_carrier(other)
        return FinEqRel(tuple(zip(self.labels, other.labels)))

    def witness_outside(self, other: "FinEqRel") -> tuple[int, int] | None:
        """A pair related by self but not by other, if any."""
        self._same_carrier(other)
        image: dict[int, tuple[int, int]] = {}
        for x, (a, b) in enumerate(zip(self.labels, other.labels)):
            y, b0 = image.setdefault(a, (x, b))
            if b0 != b:
                return y, x
        return None


def partition_ops(kind: str, P: FinEqRel, Q: FinEqRel):
    if kind == "refines":
        return P.refines(Q)
    if kind == "meet":
        return P.meet(Q)
    raise ValueError(f"unknown partition operation {kind!r}")


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    E: tuple[tuple[FinEqRel, ...], ...]

    def __post_init__(self):
        E = tuple(tuple(row) for row in self.E)
        if not E or not E[0]:
            raise GridError("grid needs at least one row and one column")
        N, M = E[0][0].size, len(E[0])
        for n, row in enumerate(E):
            if len(row) != M:
                raise GridError(f"row {n} has {len(row)} columns, expected {M}")
            for m, rel in enumerate(row):
                if rel.size != N:
                    raise GridError(f"E[{n}][{m}] lives on a different carrier")
            for m in range(M - 1):
                if not row[m].refines(row[m + 1]):
                    raise GridError(f"row {n} is not increasing at column {m}")
        for n in range(len(E) - 1):
            if not E[n][-1].refines(E[n + 1][-1]):
                raise GridError(f"row limits are not increasing at row {n}")
        object.__setattr__(self, "E", E)

    @property
    def N(self) -> int:
        return self.E[0][0].size

    @property
    def R(self) -> int:
        return len(self.E)

    @property
    def M(self) -> int:
        return len(self.E[0])

    def row_limit(self, n: int) -> FinEqRel:
        return self.E[n][-1]

    @property
    def top(self) -> FinEqRel:
        return self.E[-1][-1]

    def to_json(self) -> dict:
        return {
            "carrier": self.N,
            "rows": self.R,
            "cols": self.M,
            "blocks": [[rel.classes() for rel in row] for row in self.E],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Grid":
        N = obj["carrier"]
        grid = cls(tuple(tuple(FinEqRel.from_blocks(N, b) for b in row) for row in obj["blocks"]))
        if (grid.R, grid.M) != (obj["rows"], obj["cols"]):
            raise GridError("declared shape disagrees with the blocks")
        return grid


def chi(grid: Grid, x: int, y: int) -> tuple[int, ...]:
    """Per row, the first column relating x and y (0 if the row never does)."""
    out = []
    for row in grid.E:
        if not row[-1].related(x, y):
            out.append(0)
            continue
        out.append(next(m for m, rel in enumerate(row) if rel.related(x, y)))
    return tuple(out)


def phi0(grid: Grid, action: Sequence[Sequence[int]], x: int) -> tuple[int, ...]:
    """Per row n, the largest chi-value among translates gamma_i x, i <= n, related to x in E_n."""
    out = []
    for n, row in enumerate(grid.E):
        best = 0
        for i in range(min(n + 1, len(action))):
            y = action[i][x]
            if row[-1].related(x, y):
                best = max(best, next(m for m, rel in enumerate(row) if rel.related(x, y)))
        out.append(best)
    return tuple(out)


def orbit_bound(grid: Grid, action: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """psi(x) = pointwise max of phi0 over x's class in the top relation; constant on classes."""
    p0 = [phi0(grid, action, x) for x in range(grid.N)]
    out: list = [None] * grid.N
    for cls in grid.top.classes():
        vec = tuple(max(p0[y][n] for y in cls) for n in range(grid.R))
        for y in cls:
            out[y] = vec
    return tuple(out)


def build_F(grid: Grid, psi: Sequence[Sequence[int]], n: int) -> FinEqRel:
    """x F_n y iff psi(x)(k) == psi(y)(k) and x E[k][psi(x)(k)] y for every k in [n, R)."""
    if len(psi) != grid.N or any(len(v) != grid.R for v in psi):
        raise GridError("psi must give one length-R vector per point")
    if any(not 0 <= c < grid.M for v in psi for c in v):
        raise GridError("psi entries must be column indices")
    keys = []
    for x in range(grid.N):
        keys.append(tuple((psi[x][k], grid.E[k][psi[x][k]].labels[x]) for k in range(n, grid.R)))
    return FinEqRel(tuple(keys))


def naive_F(grid: Grid, psi: Sequence[int], k: int) -> FinEqRel:
    """Meet of E[n][psi(n)] over n in [k, R)."""
    if len(psi) != grid.R or any(not 0 <= c < grid.M for c in psi):
        raise GridError("psi must be a length-R vector of column indices")
    rel = FinEqRel.full(grid.N)
    for n in range(k, grid.R):
        rel = rel.meet(grid.E[n][psi[n]])
    return rel


@dataclass(frozen=True)
class ExhaustionReport:
    holds_from: int | None  # least row index from which chi <= psi for every related pair
    violations: tuple[tuple[int, int, int, int, int], ...]  # (x, y, row, chi, psi)

    @property
    def passed(self) -> bool:
        return self.holds_from is not None

    @property
    def pointwise(self) -> bool:
        return not self.violations


def exhaustion_check(grid: Grid, psi: Sequence[int]) -> ExhaustionReport:
    """Does chi(x, y) <= psi eventually (before the horizon R) for every pair related by E?"""
    if len(psi) != grid.R:
        raise GridError("psi must be a length-R vector")
    bad_rows = set()
    violations = []
    for x, y in grid.top.pairs():
        if x > y:
            continue
        c = chi(grid, x, y)
        for n in range(grid.R):
            if c[n] > psi[n]:
                bad_rows.add(n)
                violations.append((x, y, n, c[n], psi[n]))
    start = max(bad_rows) + 1 if bad_rows else 0
    return ExhaustionReport(start if start < grid.R else None, tuple(violations))


def hyperfinite_chain(grid: Grid, psi: Sequence[Sequence[int]]) -> list[FinEqRel]:
    return [build_F(grid, psi, n) for n in range(grid.R)]


@dataclass(frozen=True)
class ChainReport:
    increasing: bool
    inside_rows: bool
    exhausts: bool
    chain: tuple[FinEqRel, ...]

    @property
    def passed(self) -> bool:
        return self.increasing and self.inside_rows and self.exhausts


def check_chain(grid: Grid, psi: Sequence[Sequence[int]]) -> ChainReport:
    chain = hyperfinite_chain(grid, psi)
    increasing = all(F.refines(G) for F, G in zip(chain, chain[1:]))
    inside = all(F.refines(grid.row_limit(n)) for n, F in enumerate(chain))
    union = chain[-1]  # the chain is increasing, so its union is its last member
    exhausts = increasing and grid.top.refines(union) and union.refines(grid.top)
    return ChainReport(increasing, inside, exhausts, tuple(chain))


# ---------------------------------------------------------------------------
# the footnote grid


def footnote_point(K: int, i: int, j: int) -> int:
    return i * K + j


def footnote_relation(K: int, n: int, m: int) -> FinEqRel:
    """(i,j) ~ (i',j') iff equal, or i = i' = n, or i, i' < n and j, j' < m."""
    labels: list = []
    for i in range(K):
        for j in range(K):
            if i == n:
                labels.append("row")
            elif i < n and j < m:
                labels.append("corner")
            else:
                labels.append((i, j))
    return FinEqRel(tuple(labels))


def footnote_grid(K: int, R: int, M: int) -> Grid:
    """Rows n < R, columns m < M of the footnote's relations on [0,K)^2, plus a closing column.

    On the finite carrier every row is saturated at column m = K; that stage
    is appended as the last column so each row ends at its union.
    """
    if not (1 <= R <= K and 1 <= M <= K):
        raise GridError("need 1 <= R, M <= K")
    return Grid(tuple(tuple(footnote_relation(K, n, m) for m in [*range(M), K]) for n in range(R)))


@dataclass(frozen=True)
class NonInclusion:
    row: int
    other_row: int
    col: int
    pair: tuple[tuple[int, int], tuple[int, int]] | None


def non_inclusion_report(K: int, R: int, M: int) -> list[NonInclusion]:
    """For n != k and m < M, a pair in E_n^0 but not in E_k^m."""
    out = []
    for n in range(R):
        first = footnote_relation(K, n, 0)
        for k in range(R):
            if k == n:
                continue
            for m in range(M):
                w = first.witness_outside(footnote_relation(K, k, m))
                pair = None if w is None else (divmod(w[0], K), divmod(w[1], K))
                out.append(NonInclusion(n, k, m, pair))
    return out


# ---------------------------------------------------------------------------
# random grids


def _coarsening_chain(rng: random.Random, N: int, length: int) -> list[FinEqRel]:
    """Increasing chain of `length` partitions, starting at the identity and ending full."""
    labels = list(range(N))
    out = []
    for _ in range(length - 1):
        out.append(FinEqRel(tuple(labels)))
        for _ in range(rng.randint(0, N)):
            a, b = labels[rng.randrange(N)], labels[rng.randrange(N)]
            labels = [a if l == b else l for l in labels]
    out.append(FinEqRel.full(N))
    return out


def random_grid(rng: random.Random, N: int, R: int, M: int, classes: int | None = None) -> Grid:
    """A row- and column-monotone grid whose top relation has `classes` random blocks."""
    k = classes or rng.randint(1, max(1, N // 4))
    top = FinEqRel(tuple(rng.randrange(k) for _ in range(N)))
    limits = [top.meet(P) for P in _coarsening_chain(rng, N, R)]
    rows = []
    for limit in limits:
        rows.append(tuple(limit.meet(P) for P in _coarsening_chain(rng, N, M)))
    return Grid(tuple(rows))


def rotation_action(rng: random.Random, rel: FinEqRel) -> tuple[tuple[int, ...], ...]:
    """gamma_i rotates every class by i steps along a random cyclic order; gamma_0 = id."""
    blocks = [list(c) for c in rel.classes()]
    for b in blocks:
        rng.shuffle(b)
    N = rel.size
    G = max(len(b) for b in blocks)
    action = []
    for i in range(G):
        g = [0] * N
        for b in blocks:
            for pos, x in enumerate(b):
                g[x] = b[(pos + i) % len(b)]
        action.append(tuple(g))
    return tuple(action)
