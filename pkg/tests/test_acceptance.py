"""The eleven acceptance criteria, each at its stated scale and tolerance."""

import itertools
import random
import time

import pytest

from gtlab.diagonal import (
    PointMap,
    SplitSide,
    WitnessConditionError,
    bound_family,
    filter_escape,
    invariant_bound,
    phi_conversions,
    pseudo_intersection_sync,
    smooth_split_witness,
    split_side,
)
from gtlab.morphisms import (
    BROKEN,
    builtin_morphism,
    interval_contains_cover,
    interval_split_witness,
    independence_extension,
    lambda_coalesce,
    norm_transport,
    run_arrow_check,
)
from gtlab.relations import is_dominating_for, is_independent, relation, witness_valid
from gtlab.sampling import (
    mutate,
    random_carrier,
    random_coinfinite,
    random_element,
    random_epdfun,
    random_upset,
)
from gtlab.sequences import EPDFun, UPSet, almost_compare, fun_eq_star, gap_cover_function, subseteq_star
from gtlab.unions import (
    check_chain,
    footnote_grid,
    non_inclusion_report,
    orbit_bound,
    phi0,
    random_grid,
    rotation_action,
)

from oracles import oracle_compare

CHECKED_ARROWS = ("p_to_a", "b_to_d", "r_to_u", "p_to_t")


@pytest.mark.criterion(1, "almost_compare matches brute force on 10^4 instances in under 10 s")
def test_criterion_01_oracle_equivalence():
    rng = random.Random(101)
    kinds = ("subseteq_star", "set_eq_star", "splits", "leq_star", "fun_eq_star")
    start = time.perf_counter()
    total = mismatches = 0
    for k in range(10_000):
        kind = kinds[k % len(kinds)]
        if kind in ("leq_star", "fun_eq_star"):
            x = random_epdfun(rng, 8, 8)
            y = mutate(rng, x) if rng.random() < 0.4 else random_epdfun(rng, 8, 8)
        else:
            x = random_upset(rng, 8, 8)
            y = mutate(rng, x) if rng.random() < 0.3 else random_upset(rng, 8, 8)
        total += 1
        mismatches += almost_compare(kind, x, y).value != oracle_compare(kind, x, y)
    elapsed = time.perf_counter() - start
    print(f"criterion 1: {total} instances, {mismatches} mismatches, {elapsed:.2f} s")
    assert total >= 10_000
    assert mismatches == 0
    assert elapsed < 10.0


@pytest.mark.criterion(2, "bound_family dominates every member on 10^3 families")
def test_criterion_02_bound():
    rng = random.Random(202)
    for _ in range(1000):
        fam = [random_epdfun(rng) for _ in range(rng.randint(1, 8))]
        beta = bound_family(fam)
        assert all(almost_compare("leq_star", f, beta).value for f in fam)


@pytest.mark.criterion(3, "builtin morphisms pass law and invariance; broken fixtures are caught")
def test_criterion_03_morphism_laws():
    for arrow in CHECKED_ARROWS:
        rep = run_arrow_check(arrow, 1000, 303)
        assert rep["law"]["samples_run"] >= 1000 and rep["invariance"]["samples_run"] >= 1000
        assert rep["passed"], arrow
    for name in BROKEN:
        rep = run_arrow_check(name, 1000, 303)
        assert not rep["passed"] and len(rep["violations"]) >= 1, name


def _answer(rng, label, challenge):
    """A response standing in relation `label` to the challenge (where one is easy to build)."""
    if label == "d":
        return challenge.shift_up(rng.randint(0, 3))
    if label == "a":
        return mutate(rng, challenge)
    if label == "u":
        inner = challenge & random_upset(rng, infinite=True)
        return inner if inner.is_infinite() else challenge
    if label == "t":
        outer = challenge.complement()
        return outer if outer.is_infinite() else random_coinfinite(rng)
    raise ValueError(label)


@pytest.mark.criterion(4, "dominating-for-sample is transported by every builtin morphism")
def test_criterion_04_norm_transport():
    rng = random.Random(404)
    for arrow in CHECKED_ARROWS:
        m = builtin_morphism(arrow)
        src, dst = relation(m.source), relation(m.target)
        nonvacuous = 0
        for _ in range(100):
            challenges = [random_element(rng, dst.challenge_space) for _ in range(rng.randint(1, 4))]
            family = [random_element(rng, src.response_space) for _ in range(rng.randint(0, 2))]
            if rng.random() < 0.7:
                family += [_answer(rng, m.source, m.xi_minus(c)) for c in challenges]
            if not family:
                family = [random_element(rng, src.response_space)]
            nonvacuous += is_dominating_for(m.source, family, [m.xi_minus(c) for c in challenges])
            assert norm_transport(m, family, challenges), arrow
        print(f"criterion 4: {arrow} non-vacuous instances {nonvacuous}/100")
        assert nonvacuous >= 50


@pytest.mark.criterion(5, "interval splitting witnesses are certified; coalescing keeps intervals and =* pairs")
def test_criterion_05_split_pipeline():
    rng = random.Random(505)
    for _ in range(100):
        fam = [random_upset(rng, infinite=True) for _ in range(rng.randint(1, 4))]
        res = interval_split_witness(fam)
        assert res.witness is not None and res.splits_all(fam)
        lam = res.endpoints
        for A, first in zip(fam, res.first_good):
            assert first is not None
            for i in range(first, res.checked):
                assert A.next_member(lam(i)) < lam(i + 1)
        for i in range(res.checked):
            assert interval_contains_cover(res.bound, lam(i), lam(i + 1))
        beta = res.bound
        twin = EPDFun.from_tail([v + rng.randint(0, 4) for v in beta.prefix(rng.randint(1, 8))], beta)
        other = gap_cover_function(random_upset(rng, infinite=True))
        carrier = [other, beta, twin]
        lb, lt = lambda_coalesce(beta, carrier), lambda_coalesce(twin, carrier)
        assert fun_eq_star(lb, lt)
        for f, lf in ((beta, lb), (twin, lt), (other, lambda_coalesce(other, carrier))):
            assert all(interval_contains_cover(f, lf(i), lf(i + 1)) for i in range(64))


def _small_universe():
    out = set()
    for h in range(3):
        for head in itertools.product((0, 1), repeat=h):
            for p in range(1, 5):
                for period in itertools.product((0, 1), repeat=p):
                    out.add(UPSet(head, period))
    return sorted(out, key=lambda A: (A.head, A.period))


@pytest.mark.criterion(6, "both independence-extension criteria agree on all small independent families")
def test_criterion_06_independence_exhaustive():
    universe = _small_universe()
    members = [A for A in universe if A.is_infinite() and A.complement().is_infinite()]
    families = [[]] + [[A] for A in members]
    pairs = [[A, B] for A, B in itertools.combinations(members, 2) if is_independent([A, B])]
    families += pairs
    pos = {A: i for i, A in enumerate(members)}
    for A, B in pairs:
        families += [[A, B, C] for C in members[pos[B] + 1:] if is_independent([A, B, C])]
    checked = disagreements = valid = 0
    for fam in families:
        for cand in universe:
            v = independence_extension(fam, cand)
            checked += 1
            valid += v.direct
            disagreements += not v.consistent
    print(f"criterion 6: {len(universe)} sets, {len(families)} families, {checked} pairs, {valid} valid, {disagreements} disagreements")
    assert disagreements == 0


@pytest.mark.criterion(7, "filter escape certificates verify on 10^2 families")
def test_criterion_07_filter_escape():
    rng = random.Random(707)
    for _ in range(100):
        fam = [random_upset(rng, infinite=True) for _ in range(rng.randint(1, 6))]
        res = filter_escape(fam, 64)
        assert len(res.escape) == 64
        assert res.verify()
        for n, (A, B) in enumerate(zip(fam, res.chain)):
            assert subseteq_star(B, A) or subseteq_star(B, A.complement())
            assert all(b in B for b in res.escape[n:])
            assert res.minority_count(n) <= n + 1


@pytest.mark.criterion(8, "split_side: exactly one side, flipped by complement, on 10^3 valid pairs")
def test_criterion_08_split_side():
    rng = random.Random(808)
    pairs = 0
    while pairs < 1000:
        x = random_upset(rng)
        base = x if rng.random() < 0.5 else x.complement()
        v = mutate(rng, base & random_upset(rng)) if rng.random() < 0.8 else random_upset(rng, infinite=True)
        if not v.is_infinite():
            continue
        try:
            side = split_side(v, x)
        except WitnessConditionError:
            continue
        pairs += 1
        left, right = subseteq_star(v, x), subseteq_star(v, x.complement())
        assert left != right
        assert side is (SplitSide.LEFT if left else SplitSide.RIGHT)
        assert split_side(v, x.complement()) is not side


@pytest.mark.criterion(9, "hyperfinite chain exhausts E on the footnote and random grids, under 5 s")
def test_criterion_09_unions_pipeline():
    start = time.perf_counter()
    rng = random.Random(909)
    grids = [footnote_grid(16, 4, 4)]
    grids += [random_grid(rng, rng.randint(8, 64), rng.randint(2, 5), rng.randint(2, 5)) for _ in range(10)]
    for g in grids:
        action = rotation_action(rng, g.top)
        psi = orbit_bound(g, action)
        for x in range(g.N):
            assert all(a >= b for a, b in zip(psi[x], phi0(g, action, x)))
        rep = check_chain(g, psi)
        assert rep.increasing and rep.inside_rows and rep.exhausts
    witnesses = non_inclusion_report(16, 4, 4)
    assert {(w.row, w.other_row) for w in witnesses} == {(n, k) for n in range(4) for k in range(4) if n != k}
    assert all(w.pair is not None for w in witnesses)
    elapsed = time.perf_counter() - start
    print(f"criterion 9: {len(grids)} grids in {elapsed:.2f} s")
    assert elapsed < 5.0


@pytest.mark.criterion(10, "witnesses for b survive the round trip between single and family forms")
def test_criterion_10_conversions():
    rng = random.Random(1010)
    for _ in range(100):
        c = random_carrier(rng, rng.randint(1, 8))
        phi = PointMap(tuple(random_epdfun(rng) for _ in range(c.size)))
        fams = phi_conversions("spread", c, phi)
        coll = phi_conversions("collapse", c, fams)
        back = phi_conversions("collapse", c, PointMap(tuple((f,) for f in phi.values)))
        for x in range(c.size):
            for psi in (random_epdfun(rng), coll[x], coll[x].shift_up(1), mutate(rng, coll[x])):
                family_ok = witness_valid("b", psi, list(fams[x])).valid
                single_ok = almost_compare("leq_star", coll[x], psi).value
                assert family_ok == single_ok
                assert witness_valid("b", psi, [phi[x]]).valid == almost_compare("leq_star", back[x], psi).value


@pytest.mark.criterion(11, "smooth witnesses are constant on orbits; synchronized sequences agree past merging")
def test_criterion_11_diagonal_invariance():
    rng = random.Random(1111)
    for _ in range(100):
        c = random_carrier(rng, rng.randint(1, 10), levels=rng.randint(1, 4))
        sets = PointMap(tuple(tuple(random_upset(rng, infinite=True) for _ in range(3)) for _ in range(c.size)))
        smooth = smooth_split_witness(c, sets, 12)
        assert smooth.verify(c, sets)
        funs = PointMap(tuple(random_epdfun(rng) for _ in range(c.size)))
        bound = invariant_bound(c, funs)
        for x in range(c.size):
            for y in c.orbit(x):
                assert smooth.psi[x] == smooth.psi[y]
                assert bound[x] == bound[y]
                assert all(almost_compare("leq_star", funs[y], bound[x]).value for y in c.orbit(x))
        # one centered family per orbit; every point reads the same enumeration
        orbit_fam = {}
        for x in range(c.size):
            key = c.sigma(x)
            if key not in orbit_fam:
                core = random_upset(rng, infinite=True)
                orbit_fam[key] = tuple(core | random_upset(rng) for _ in range(rng.randint(1, 3)))
        phi = PointMap(tuple(orbit_fam[c.sigma(x)] for x in range(c.size)))
        sync = pseudo_intersection_sync(c, phi, 24)
        for x in range(c.size):
            assert len(set(sync.sequences[x])) == 24
            for y in c.orbit(x):
                assert sync.agree_from(x, y) <= c.merge_level(x, y) + 1
        # same family per orbit, enumerated in a different cyclic order at each point
        shifted = []
        for x in range(c.size):
            fam = orbit_fam[c.sigma(x)]
            r = rng.randrange(len(fam))
            shifted.append(fam[r:] + fam[:r])
        sync = pseudo_intersection_sync(c, PointMap(tuple(shifted)), 24)
        for x in range(c.size):
            for y in c.orbit(x):
                settled = max(c.merge_level(x, y), len(shifted[x]) - 1)
                assert sync.agree_from(x, y) <= settled + 1
