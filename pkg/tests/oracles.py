"""Brute-force reference implementations, written against the raw head/period fields only."""

from __future__ import annotations

from math import lcm


def bits(A, length: int) -> list[int]:
    head, period = list(A.head), list(A.period)
    out = head[:length]
    while len(out) < length:
        out.append(period[(len(out) - len(head)) % len(period)])
    return out


def values(f, length: int) -> list[int]:
    out = list(f.head[:length])
    v = f.base
    k = 0
    while len(out) < length:
        out.append(v)
        v += f.deltas[k % len(f.deltas)]
        k += 1
    return out


def set_window(*sets) -> tuple[int, int]:
    return max(len(A.head) for A in sets), lcm(*(len(A.period) for A in sets))


def fun_window(*funs) -> tuple[int, int]:
    return max(len(f.head) for f in funs), lcm(*(len(f.deltas) for f in funs))


def infinitely_often(flags: list[int], start: int, L: int) -> bool:
    """A pattern periodic from `start` with period L is 1 infinitely often iff once in [start, start+L)."""
    return any(flags[start:start + L])


def oracle_compare(kind: str, x, y) -> bool:
    if kind in ("subseteq_star", "set_eq_star", "splits"):
        N0, L = set_window(x, y)
        a, b = bits(x, N0 + 2 * L), bits(y, N0 + 2 * L)
        diff = [u & (1 - v) for u, v in zip(a, b)]
        if kind == "subseteq_star":
            return not infinitely_often(diff, N0, L)
        if kind == "set_eq_star":
            sym = [u ^ v for u, v in zip(a, b)]
            return not infinitely_often(sym, N0, L)
        inside = [u & v for u, v in zip(a, b)]
        outside = [(1 - u) & v for u, v in zip(a, b)]
        return infinitely_often(inside, N0, L) and infinitely_often(outside, N0, L)
    N0, L = fun_window(x, y)
    fx, gy = values(x, N0 + 2 * L), values(y, N0 + 2 * L)
    d = [b - a for a, b in zip(fx, gy)]
    drift = d[N0 + L] - d[N0]
    window = d[N0:N0 + L]
    if kind == "fun_eq_star":
        return drift == 0 and all(v == 0 for v in window)
    if drift != 0:
        return drift > 0
    return all(v >= 0 for v in window)
