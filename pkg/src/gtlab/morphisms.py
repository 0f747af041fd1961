"""Galois-Tukey morphisms between relations, their checkers, and the constructions behind the diagram.

A morphism from relation A to relation B is a pair
``xi_minus: B_- -> A_-`` and ``xi_plus: A_+ -> B_+`` with

    xi_minus(b) A a  implies  b B xi_plus(a).

Builtin arrows are named after the property implication they give
(``p_to_a`` gives p -> a), so their source relation is the *target* property.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Sequence

from gtlab.diagonal import bound_family
from gtlab.relations import (
    FamilyPropertyError,
    family_property,
    is_almost_disjoint,
    is_dominating_for,
    relation,
    relation_eval,
    witness_valid,
)
from gtlab.sampling import mutate, random_element
from gtlab.sequences import (
    EPDFun,
    UPSet,
    agreement_index,
    eq_star,
    gap_cover_function,
    splits,
)


@dataclass(frozen=True)
class Morphism:
    name: str
    source: str
    target: str
    xi_minus: Callable = field(compare=False)
    xi_plus: Callable = field(compare=False)
    note: str = ""
    stub: bool = False


@dataclass
class CheckReport:
    samples_run: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        def enc(pair):
            return [x.to_json() for x in pair]

        return {"samples_run": self.samples_run, "passed": self.passed, "violations": [enc(v) for v in self.violations]}


def _identity(x):
    return x


def _complement(a: UPSet) -> UPSet:
    return a.complement()


def _successor(g: EPDFun) -> EPDFun:
    return g.shift_up(1)


def _deferred(_):
    raise NotImplementedError("the p -> b morphism is an external construction; only its contract is recorded")


ARROWS = ("p_to_a", "b_to_d", "r_to_u", "p_to_t", "p_to_b_stub")


def builtin_morphism(arrow: str) -> Morphism:
    if arrow == "p_to_a":
        return Morphism(
            "p_to_a", "a", "p", _identity, _complement,
            "complements of an extendable almost disjoint family are centered",
        )
    if arrow == "b_to_d":
        return Morphism("b_to_d", "d", "b", _successor, _identity, "a bound plus one escapes domination")
    if arrow == "r_to_u":
        return Morphism("r_to_u", "u", "r", _identity, _identity, "centered families need no transport")
    if arrow == "p_to_t":
        return Morphism("p_to_t", "t", "p", _identity, _identity, "every tower is centered")
    if arrow == "p_to_b_stub":
        return Morphism(
            "p_to_b_stub", "b", "p", _deferred, _deferred,
            "contract: A almost inside xi_plus(f) implies f <=* xi_minus(A)", stub=True,
        )
    raise ValueError(f"unknown arrow {arrow!r}")


def identity_morphism(label: str) -> Morphism:
    return Morphism(f"id_{label}", label, label, _identity, _identity, "identity")


def _zero_flip(b: UPSet) -> UPSet:
    return b if 0 in b else b.complement()


BROKEN = {
    "b_to_d_no_shift": lambda: Morphism("b_to_d_no_shift", "d", "b", _identity, _identity, "missing +1"),
    "p_to_a_zero_flip": lambda: Morphism("p_to_a_zero_flip", "a", "p", _zero_flip, _complement, "reads bit 0"),
}


def broken_morphism(name: str) -> Morphism:
    """Deliberately wrong fixtures that the checkers must catch."""
    return BROKEN[name]()


def challenge_space(m: Morphism) -> str:
    return relation(m.target).challenge_space


def response_space(m: Morphism) -> str:
    return relation(m.source).response_space


def law_holds(m: Morphism, b, a) -> bool:
    if not relation_eval(m.source, m.xi_minus(b), a):
        return True
    return relation_eval(m.target, b, m.xi_plus(a))


def morphism_law_check(m: Morphism, challenges: Sequence, responses: Sequence) -> CheckReport:
    """Test the morphism law on every (challenge, response) pair."""
    report = CheckReport()
    for b in challenges:
        for a in responses:
            report.samples_run += 1
            if not law_holds(m, b, a):
                report.violations.append((b, a))
    return report


def invariance_check(m: Morphism, seeds: Sequence, mutations: int, rng: random.Random | None = None) -> CheckReport:
    """xi_minus must send almost-equal challenges to almost-equal challenges."""
    rng = rng or random.Random(0)
    report = CheckReport()
    images = [m.xi_minus(b) for b in seeds]
    for k in range(mutations):
        idx = k % len(seeds)
        b2 = mutate(rng, seeds[idx])
        report.samples_run += 1
        if not eq_star(images[idx], m.xi_minus(b2)):
            report.violations.append((seeds[idx], b2))
    return report


def compose(m1: Morphism, m2: Morphism) -> Morphism:
    """m1: A -> B followed by m2: B -> C."""
    if m1.target != m2.source:
        raise ValueError(f"cannot compose {m1.name} (into {m1.target}) with {m2.name} (from {m2.source})")
    return Morphism(
        f"{m2.name}*{m1.name}",
        m1.source,
        m2.target,
        lambda c: m1.xi_minus(m2.xi_minus(c)),
        lambda a: m2.xi_plus(m1.xi_plus(a)),
        f"composite of {m1.name} and {m2.name}",
        m1.stub or m2.stub,
    )


def norm_transport(m: Morphism, family: Sequence, challenges: Sequence) -> bool:
    """If F answers every pulled-back challenge, the pushed-forward family answers the originals."""
    if not is_dominating_for(m.source, family, [m.xi_minus(c) for c in challenges]):
        return True
    return is_dominating_for(m.target, [m.xi_plus(a) for a in family], challenges)


def is_extendable_almost_disjoint(family: Sequence[UPSet]) -> bool:
    """Almost disjoint with a union of infinite complement, i.e. a prefix of an infinite such family."""
    if not is_almost_disjoint(family):
        return False
    union = UPSet.empty()
    for A in family:
        union = union | A
    return union.complement().is_infinite()


def phi_transport(m: Morphism, family: Sequence) -> bool:
    """Whenever the family has the source's property, its image has the target's."""
    src, dst = relation(m.source).phi, relation(m.target).phi
    if src == "almost_disjoint":
        holds = is_extendable_almost_disjoint(family)
    else:
        holds = family_property(src, family)
    if not holds:
        return True
    return family_property(dst, [m.xi_plus(a) for a in family])


def sample_pairs(m: Morphism, n: int, rng: random.Random) -> tuple[list, list]:
    """Independent random pairs, with every other response a mutation of its challenge.

    The coupled half probes the boundary (almost equal arguments) where
    off-by-one transports break.
    """
    challenges = [random_element(rng, challenge_space(m)) for _ in range(n)]
    coupled = challenge_space(m) == response_space(m)
    responses = [
        mutate(rng, b) if coupled and k % 2 else random_element(rng, response_space(m))
        for k, b in enumerate(challenges)
    ]
    return challenges, responses


def run_arrow_check(arrow: str, samples: int, seed: int) -> dict:
    """Law on `samples` random pairs plus invariance on `samples` mutations."""
    m = builtin_morphism(arrow) if arrow in ARROWS else broken_morphism(arrow)
    rng = random.Random(seed)
    challenges, responses = sample_pairs(m, samples, rng)
    law = CheckReport()
    for b, a in zip(challenges, responses):
        law.samples_run += 1
        if not law_holds(m, b, a):
            law.violations.append((b, a))
    inv = invariance_check(m, challenges, samples, rng)
    return {
        "arrow": arrow,
        "passed": law.passed and inv.passed,
        "law": law.to_json(),
        "invariance": inv.to_json(),
        "violations": law.to_json()["violations"] + inv.to_json()["violations"],
    }


# ---------------------------------------------------------------------------
# b -> r: interval coalescing and the splitting witness


@dataclass(frozen=True)
class CertifiedPrefix:
    """Initial values of a sequence that left the eventually periodic fragment, up to `horizon`."""

    values: tuple[int, ...]
    horizon: int

    def __call__(self, i: int) -> int:
        if i >= self.horizon:
            raise IndexError(f"index {i} beyond certified horizon {self.horizon}")
        return self.values[i]


def _agreement_table(carrier: Sequence[EPDFun]) -> list[list[int | None]]:
    K = len(carrier)
    return [[agreement_index(carrier[t], carrier[u]) for u in range(K)] for t in range(K)]


def lambda_coalesce(f: EPDFun, carrier: Sequence[EPDFun], horizon: int = 64) -> EPDFun | CertifiedPrefix:
    """Interval endpoints j_0 = 0 < j_1 < ... with every [j_i, j_{i+1}) containing some [n, f(n)).

    j_{i+1}(g) is the largest g'(j_i(g')) over g' in g's class of the finite
    relation F_i: members equal as objects, or both among the first i carrier
    members and agreeing from index i on.
    """
    carrier = list(carrier)
    if f not in carrier:
        raise ValueError("f must be a member of the carrier")
    for g in carrier:
        if not g.exceeds_identity():
            raise ValueError("every carrier function must satisfy g(n) > n")
    K = len(carrier)
    agree = _agreement_table(carrier)
    me = carrier.index(f)
    mates = [agree[me][u] for u in range(K) if agree[me][u] is not None]
    settled = max([K, *mates]) + 1  # from here on f's class is fixed and j_{i+1} = f(j_i)

    def related(t: int, u: int, i: int) -> bool:
        if carrier[t] == carrier[u]:
            return True
        a = agree[t][u]
        return t < i and u < i and a is not None and a <= i

    j = [0] * K
    out = [0]
    for i in range(settled):
        k = [carrier[t](j[t]) for t in range(K)]
        j = [max(k[u] for u in range(K) if related(t, u, i)) for t in range(K)]
        out.append(j[me])
    if f.rise != f.p:
        while len(out) < horizon:
            out.append(f(out[-1]))
        return CertifiedPrefix(tuple(out[:horizon]), horizon)
    # rate one: f(n) - n depends only on the phase of n, so the residues cycle
    while out[-1] < f.h:
        out.append(f(out[-1]))
    seen: dict[int, int] = {}
    while True:
        phase = (out[-1] - f.h) % f.p
        if phase in seen:
            start = seen[phase]
            break
        seen[phase] = len(out) - 1
        out.append(f(out[-1]))
    deltas = tuple(b - a for a, b in zip(out[start:], out[start + 1:]))
    return EPDFun(tuple(out[:start]), out[start], deltas)


def interval_contains_cover(f: EPDFun, lo: int, hi: int) -> bool:
    """Some [n, f(n)) lies inside [lo, hi)."""
    return any(f(n) <= hi for n in range(lo, hi))


@dataclass(frozen=True)
class SplitWitness:
    witness: UPSet | None
    bound: EPDFun
    endpoints: EPDFun | CertifiedPrefix
    first_good: tuple[int | None, ...]  # per member, interval index from which every interval meets it
    checked: int

    def splits_all(self, family: Sequence[UPSet]) -> bool:
        if self.witness is not None:
            return all(splits(self.witness, A) for A in family)
        return all(k is not None for k in self.first_good)


def _odd_interval_set(lam: EPDFun) -> UPSet:
    i0 = lam.h
    period_end = lam(i0 + 2 * lam.p)
    bits = []
    i = 0
    for n in range(period_end):
        while lam(i + 1) <= n:
            i += 1
        bits.append(i % 2)
    return UPSet.from_prefix(bits, lam(i0), period_end - lam(i0))


def interval_split_witness(family: Sequence[UPSet], horizon: int = 64) -> SplitWitness:
    """Union of the odd-indexed intervals of the coalesced bound of the gap covers."""
    if not family:
        raise ValueError("family must be nonempty")
    for k, A in enumerate(family):
        if not A.is_infinite():
            raise ValueError(f"member {k} is finite")
    covers = [gap_cover_function(A) for A in family]
    beta = bound_family(covers)
    lam = lambda_coalesce(beta, [beta], horizon)
    count = horizon - 1
    first_good = []
    for A in family:
        good = None
        for i in range(count - 1, -1, -1):
            nxt = A.next_member(lam(i))
            if nxt is None or nxt >= lam(i + 1):
                break
            good = i
        first_good.append(good)
    witness = _odd_interval_set(lam) if isinstance(lam, EPDFun) else None
    return SplitWitness(witness, beta, lam, tuple(first_good), count)


# ---------------------------------------------------------------------------
# r -> i


@dataclass(frozen=True)
class Combination:
    positive: tuple[int, ...]
    negative: tuple[int, ...]
    set: UPSet

    @property
    def infinite(self) -> bool:
        return self.set.is_infinite()


def boolean_combinations(family: Sequence[UPSet]) -> list[Combination]:
    """Every (members in P) & (complements of members in N) with P, N disjoint and not both empty.

    Ordered by support size, then support lexicographically, then sign
    pattern with positive before negative.
    """
    return list(_combinations(tuple(family)))


@lru_cache(maxsize=1 << 12)
def _combinations(family: tuple[UPSet, ...]) -> tuple[Combination, ...]:
    out = []
    for size in range(1, len(family) + 1):
        for support in combinations(range(len(family)), size):
            for signs in product((True, False), repeat=size):
                acc = UPSet.omega()
                for idx, keep in zip(support, signs):
                    acc = acc & (family[idx] if keep else family[idx].complement())
                pos = tuple(i for i, s in zip(support, signs) if s)
                neg = tuple(i for i, s in zip(support, signs) if not s)
                out.append(Combination(pos, neg, acc))
    return tuple(out)


@dataclass(frozen=True)
class ExtensionVerdict:
    direct: bool
    via_splits: bool

    @property
    def valid(self) -> bool:
        return self.direct

    @property
    def consistent(self) -> bool:
        return self.direct == self.via_splits

    def __bool__(self) -> bool:
        return self.direct


@lru_cache(maxsize=1 << 12)
def _split_targets(family: tuple[UPSet, ...]) -> tuple[UPSet, ...]:
    return (UPSet.omega(),) + tuple(c.set for c in _combinations(family) if c.infinite)


def independence_extension(family: Sequence[UPSet], candidate: UPSet) -> ExtensionVerdict:
    """Does `candidate` show the independent `family` is not maximal?

    Decided twice: straight from the definition, and as "candidate splits
    omega and every infinite Boolean combination of the family".
    """
    family = list(family)
    if family and not family_property("independent", family):
        raise FamilyPropertyError("input family is not independent")
    if family:
        direct = witness_valid("i", candidate, family).valid
    else:
        direct = candidate.is_infinite() and candidate.complement().is_infinite()
    via = all(splits(candidate, C) for C in _split_targets(tuple(family))) and candidate not in family
    return ExtensionVerdict(direct, via)
