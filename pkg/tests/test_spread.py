import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_spread_violators, perm_families, random_intersecting_perms
from permdiv.errors import BudgetExceeded, InputError
from permdiv.family import Cell, PermFamily, Permutation, enumerate_symmetric_group, make_star, make_triangle_family
from permdiv.spread import (
    SpreadParams,
    StopReason,
    decomposition_report,
    decomposition_violations,
    is_r_spread,
    maximal_non_spread,
    non_spread_sets,
    spread_decompose,
)

S4 = enumerate_symmetric_group(4)
STAR4 = make_star(4, (1, 1))


def cellsets(F):
    return {frozenset(s.cells) for s in F}


def test_singleton_not_spread():
    p = Permutation((2, 3, 1, 4))
    ok, w = is_r_spread(PermFamily(4, (p,)), 2)
    assert not ok and w.set.mask == p.mask


def test_s4_is_2_spread():
    assert is_r_spread(S4, 2) == (True, None)


def test_s4_not_3_spread_and_witness_maximises_ratio():
    ok, w = is_r_spread(S4, 3)
    assert not ok
    # every violating pattern has |F(S)| * 3^|S| > 24; the witness has the largest ratio
    best = max(
        (Fraction(c * 3**k, 24), -k)
        for k in range(1, 5)
        for c in [{1: 6, 2: 2, 3: 1, 4: 1}[k]]
        if c * 3**k > 24
    )
    assert w.ratio == best[0] and len(w.set) == -best[1]
    assert w.lhs * w.rhs_den > w.rhs_num


def test_non_spread_examples():
    assert len(non_spread_sets(S4, 2)) == 0
    assert frozenset({Cell(1, 1)}) in cellsets(non_spread_sets(STAR4, 2))
    p = Permutation((1, 2, 3, 4))
    assert len(non_spread_sets(PermFamily(4, (p,)), 2)) == 2**4 - 1


def test_maximal_examples():
    assert cellsets(maximal_non_spread(STAR4, 2)) == {frozenset(p.cells) for p in STAR4}
    assert len(maximal_non_spread(S4, 2)) == 0


def test_empty_family_is_an_input_error():
    with pytest.raises(InputError):
        is_r_spread(PermFamily(3), 2)
    with pytest.raises(InputError):
        is_r_spread(S4, 0)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        is_r_spread(S4, 2, budget=10)


@settings(max_examples=200, deadline=None)
@given(perm_families(min_size=1, max_n=5), st.fractions(min_value=Fraction(1, 2), max_value=30, max_denominator=7))
def test_spread_matches_naive(F, r):
    if r <= 0:
        return
    naive = naive_spread_violators([p.cells for p in F], r)
    assert cellsets(non_spread_sets(F, r)) == naive
    ok, w = is_r_spread(F, r)
    assert ok == (not naive)
    if w is not None:
        assert frozenset(w.set.cells) in naive
    maximal = {S for S in naive if not any(S < T for T in naive)}
    assert cellsets(maximal_non_spread(F, r)) == maximal


def test_decompose_empty():
    dec = spread_decompose(PermFamily(4), SpreadParams.default(4))
    assert dec.branches == () and len(dec.remainder) == 0


def test_decompose_star_cap_4():
    dec = spread_decompose(STAR4, SpreadParams.exact(4, 2, 4))
    assert len(dec.remainder) == 0
    assert sum(len(b.family) for b in dec.branches) == 6
    assert decomposition_violations(STAR4, dec) == []


def test_decompose_star_cap_3_stops():
    dec = spread_decompose(STAR4, SpreadParams.exact(4, 2, 3))
    assert dec.stop_reason is StopReason.OVERSIZE_WITNESS
    assert dec.remainder == STAR4 and dec.branches == ()
    assert len(dec.stop_witness) == 4


def test_default_params():
    p = SpreadParams.default(16)
    assert p.r == Fraction(16, 3) and p.q_floor == 16 and p.q_cap.is_point


def _check_decomposition(F, params):
    dec = spread_decompose(F, params)
    assert decomposition_violations(F, dec) == []
    if dec.stop_reason is StopReason.EXHAUSTED and len(dec.remainder):
        assert is_r_spread(dec.remainder, params.r)[0]
    rep = decomposition_report(F, dec)
    assert all(b["restriction_spread"] for b in rep["branches"])
    return dec


@settings(max_examples=100, deadline=None)
@given(perm_families(min_size=1, max_n=5), st.integers(1, 6), st.integers(1, 8))
def test_decompose_invariants_random(F, r, q):
    _check_decomposition(F, SpreadParams.exact(F.degree, r, q))


def test_decompose_constructed_suites():
    for n in range(3, 7):
        _check_decomposition(make_triangle_family(n), SpreadParams.default(n))
        _check_decomposition(make_star(n, (1, 2)), SpreadParams.default(n))
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(3, 5)
        F = random_intersecting_perms(rng, n, rng.randint(1, 40))
        _check_decomposition(F, SpreadParams.default(n))


def test_decomposition_violations_detects_tampering():
    dec = spread_decompose(STAR4, SpreadParams.exact(4, 2, 4))
    smaller = PermFamily(4, STAR4.members[:-1])
    assert decomposition_violations(smaller, dec)


def test_degree_one_is_never_non_1_spread():
    F = enumerate_symmetric_group(1)
    assert len(non_spread_sets(F, 1)) == 0
    assert len(non_spread_sets(F, 2)) == 1


def test_intersecting_families_not_n2_spread_small():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(2, 5)
        F = random_intersecting_perms(rng, n, rng.randint(1, 25))
        assert len(non_spread_sets(F, n * n)) > 0
