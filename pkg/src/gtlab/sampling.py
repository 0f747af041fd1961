"""Seeded random generators for UP sets, EPD functions, and finite mutations."""

from __future__ import annotations

import random

from gtlab.diagonal import Carrier
from gtlab.sequences import EPDFun, UPSet
from gtlab.unions import FinEqRel


def random_upset(rng: random.Random, max_head: int = 8, max_period: int = 8, infinite: bool | None = None) -> UPSet:
    while True:
        head = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, max_head)))
        period = tuple(rng.randint(0, 1) for _ in range(rng.randint(1, max_period)))
        A = UPSet(head, period)
        if infinite is None or A.is_infinite() == infinite:
            return A


def random_coinfinite(rng: random.Random, max_head: int = 8, max_period: int = 8) -> UPSet:
    """An infinite set with infinite complement."""
    while True:
        A = random_upset(rng, max_head, max_period, infinite=True)
        if A.complement().is_infinite():
            return A


def random_epdfun(
    rng: random.Random, max_head: int = 8, max_period: int = 8, max_value: int = 20, max_step: int = 4
) -> EPDFun:
    head = tuple(rng.randint(0, max_value) for _ in range(rng.randint(0, max_head)))
    deltas = [rng.randint(-max_step, max_step) for _ in range(rng.randint(1, max_period))]
    shortfall = sum(deltas)
    while shortfall < 0:
        k = rng.randrange(len(deltas))
        deltas[k] += 1
        shortfall += 1
    low = 0
    run = 0
    for d in deltas:
        run += d
        low = min(low, run)
    base = rng.randint(-low, -low + max_value)
    return EPDFun(head, base, tuple(deltas))


def random_element(rng: random.Random, space: str, **kw):
    if space == "set":
        return random_upset(rng, infinite=True, **kw)
    return random_epdfun(rng, **kw)


def mutate_set(rng: random.Random, A: UPSet, flips: int | None = None, reach: int = 16) -> UPSet:
    """Flip finitely many membership bits of A (at least one)."""
    flips = flips if flips is not None else rng.randint(1, 4)
    L = A.h + reach
    bits = list(A.prefix(L))
    for _ in range(flips):
        bits[rng.randrange(L)] ^= 1
    # the tail from L on is A's period, rotated into phase
    shift = (L - A.h) % A.p
    return UPSet(tuple(bits), A.period[shift:] + A.period[:shift])


def mutate_fun(rng: random.Random, f: EPDFun, changes: int | None = None, reach: int = 16) -> EPDFun:
    """Change finitely many values of f (at least one, kept nonnegative)."""
    changes = changes if changes is not None else rng.randint(1, 4)
    L = f.h + reach
    vals = list(f.prefix(L))
    for _ in range(changes):
        k = rng.randrange(L)
        vals[k] = max(0, vals[k] + rng.choice((-3, -2, -1, 1, 2, 3, 7)))
    return EPDFun.from_tail(vals, f)


def mutate(rng: random.Random, x, **kw):
    if isinstance(x, UPSet):
        return mutate_set(rng, x, **kw)
    return mutate_fun(rng, x, **kw)


def random_carrier(rng: random.Random, size: int, levels: int = 3, transversal: bool = True) -> Carrier:
    """Rotation action on random blocks, with a random chain climbing from equality to the orbit relation."""
    points = list(range(size))
    rng.shuffle(points)
    blocks, i = [], 0
    while i < size:
        k = rng.randint(1, min(4, size - i))
        blocks.append(points[i:i + k])
        i += k
    orbit_of = {x: b[0] for b in blocks for x in b}
    labels = list(range(size))
    chain = []
    for _ in range(levels - 1):
        chain.append(FinEqRel(tuple(labels)))
        for _ in range(rng.randint(0, size)):
            x = rng.randrange(size)
            y = rng.choice(next(b for b in blocks if x in b))
            a, b = labels[x], labels[y]
            labels = [a if l == b else l for l in labels]
    chain.append(FinEqRel.from_labels([orbit_of[x] for x in range(size)]))
    return Carrier.rotations(blocks, transversal=transversal, chain=tuple(chain))
