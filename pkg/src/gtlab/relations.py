"""Challenge/response relations for the nine properties b, d, s, r, p, t, a, i, u.

Every relation is oriented so that a witness psi for a family F is exactly
one with ``not A(psi, member)`` for every member (label ``i`` excepted; it is
not a binary predicate and has its own witness clause).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

from gtlab.sequences import (
    Element,
    EPDFun,
    SpaceMismatch,
    UPSet,
    leq_star,
    splits,
    subseteq_star,
)

LABELS = ("b", "d", "s", "r", "p", "t", "a", "i", "u")
FAMILY_TAGS = ("centered", "tower", "almost_disjoint", "independent", "none")


class FamilyPropertyError(ValueError):
    """A family fails the property its label demands, or has a finite member where one is forbidden."""


@dataclass(frozen=True)
class GTRelation:
    label: str
    challenge_space: str  # "fun" or "set"
    response_space: str
    predicate: Callable[[Element, Element], bool] | None
    phi: str = "none"

    def __call__(self, challenge: Element, response: Element) -> bool:
        return relation_eval(self.label, challenge, response)


def _not_split_by(psi: UPSet, a: UPSet) -> bool:
    return not splits(psi, a)


RELATIONS: dict[str, GTRelation] = {
    "b": GTRelation("b", "fun", "fun", lambda psi, f: not leq_star(f, psi)),
    "d": GTRelation("d", "fun", "fun", lambda psi, f: leq_star(psi, f)),
    "s": GTRelation("s", "set", "set", lambda psi, a: splits(a, psi)),
    "r": GTRelation("r", "set", "set", _not_split_by),
    "p": GTRelation("p", "set", "set", lambda psi, a: not subseteq_star(psi, a), "centered"),
    "t": GTRelation("t", "set", "set", lambda psi, a: not subseteq_star(psi, a), "tower"),
    "a": GTRelation("a", "set", "set", lambda psi, a: (psi & a).is_infinite(), "almost_disjoint"),
    "i": GTRelation("i", "set", "set", None, "independent"),
    "u": GTRelation("u", "set", "set", _not_split_by, "centered"),
}

_SPACE_TYPES = {"fun": EPDFun, "set": UPSet}


def relation(label: str) -> GTRelation:
    try:
        return RELATIONS[label]
    except KeyError:
        raise ValueError(f"unknown relation label {label!r}") from None


def _check_space(value, space: str, role: str, label: str):
    if not isinstance(value, _SPACE_TYPES[space]):
        raise SpaceMismatch(f"relation {label}: {role} must be a {space}, got {type(value).__name__}")


def relation_eval(label: str, challenge: Element, response: Element) -> bool:
    rel = relation(label)
    if rel.predicate is None:
        raise ValueError("label i has no binary predicate; use witness_valid")
    _check_space(challenge, rel.challenge_space, "challenge", label)
    _check_space(response, rel.response_space, "response", label)
    return rel.predicate(challenge, response)


# ---------------------------------------------------------------------------
# family properties


def sign_patterns(family: Sequence[UPSet]):
    """Yield (signs, set) for every full Boolean combination of the family."""
    yield from _sign_patterns(tuple(family))


@lru_cache(maxsize=1 << 14)
def _sign_patterns(family: tuple[UPSet, ...]) -> tuple:
    if not family:
        return (((), UPSet.omega()),)
    *rest, last = family
    out = []
    for signs, acc in _sign_patterns(tuple(rest)):
        out.append((signs + (True,), acc & last))
        out.append((signs + (False,), acc - last))
    return tuple(out)


def _require_infinite(tag: str, family: Sequence[UPSet]):
    for k, A in enumerate(family):
        if not A.is_infinite():
            raise FamilyPropertyError(f"{tag}: member {k} is finite")


def is_centered(family: Sequence[UPSet]) -> bool:
    _require_infinite("centered", family)
    acc = UPSet.omega()
    for A in family:
        acc = acc & A
    return acc.is_infinite()


def tower_order(family: Sequence[UPSet]) -> list[int] | None:
    """Indices sorted into a strictly almost-increasing chain, or None."""
    _require_infinite("tower", family)
    for x, y in combinations(family, 2):
        xy, yx = subseteq_star(x, y), subseteq_star(y, x)
        if xy == yx:  # incomparable, or almost equal
            return None
    # in a strict chain, the number of members below you is your rank
    ranks = [sum(subseteq_star(B, A) for B in family) for A in family]
    return sorted(range(len(family)), key=ranks.__getitem__)


def tower_orientation(family: Sequence[UPSet]) -> str | None:
    """How the given enumeration runs along the chain: increasing, decreasing, or unordered."""
    order = tower_order(family)
    if order is None:
        return None
    if order == sorted(order):
        return "increasing"
    if order == sorted(order, reverse=True):
        return "decreasing"
    return "unordered"


def is_almost_disjoint(family: Sequence[UPSet]) -> bool:
    return all(not (x & y).is_infinite() for x, y in combinations(family, 2))


def failed_combination(family: Sequence[UPSet]) -> tuple[bool, ...] | None:
    """First full sign pattern whose combination is finite, or None if independent."""
    for signs, comb in sign_patterns(family):
        if not comb.is_infinite():
            return signs
    return None


def is_independent(family: Sequence[UPSet]) -> bool:
    _require_infinite("independent", family)
    return failed_combination(family) is None


def family_property(tag: str, family: Sequence[UPSet]) -> bool:
    if tag == "none":
        return True
    if not family:
        raise ValueError("family must be nonempty")
    for A in family:
        if not isinstance(A, UPSet):
            raise SpaceMismatch("family properties are defined on families of sets")
    if tag == "centered":
        return is_centered(family)
    if tag == "tower":
        return tower_order(family) is not None
    if tag == "almost_disjoint":
        return is_almost_disjoint(family)
    if tag == "independent":
        return is_independent(family)
    raise ValueError(f"unknown family property {tag!r}")


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class WitnessVerdict:
    valid: bool
    index: int | None = None
    combination: tuple[bool, ...] | None = None

    def __bool__(self) -> bool:
        return self.valid


def witness_valid(label: str, psi: Element, family: Sequence[Element]) -> WitnessVerdict:
    """Does psi witness that `family` is not an instance of the label's notion?

    On failure `index` names the first member psi fails against; for label
    ``i`` either the member psi coincides with, or the sign pattern (members
    first, psi last) of a finite combination.
    """
    rel = relation(label)
    if rel.phi != "none" and family and not family_property(rel.phi, family):
        raise FamilyPropertyError(f"family is not {rel.phi}, as label {label} requires")
    _check_space(psi, rel.challenge_space, "witness", label)
    if label == "i":
        for k, A in enumerate(family):
            if A == psi:
                return WitnessVerdict(False, index=k)
        if not psi.is_infinite():
            return WitnessVerdict(False, combination=())
        bad = failed_combination(list(family) + [psi])
        if bad is not None:
            return WitnessVerdict(False, combination=bad)
        return WitnessVerdict(True)
    for k, a in enumerate(family):
        if relation_eval(label, psi, a):
            return WitnessVerdict(False, index=k)
    return WitnessVerdict(True)


def is_dominating_for(label: str, family: Sequence[Element], challenges: Sequence[Element]) -> bool:
    """Every listed challenge is answered by some family member."""
    return all(any(relation_eval(label, c, y) for y in family) for c in challenges)
