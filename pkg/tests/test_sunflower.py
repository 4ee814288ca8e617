import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_has_sunflower, naive_intersecting, partial_families, random_intersecting_partial
from permdiv.errors import BudgetExceeded, InputError
from permdiv.family import Cell, PartialFamily, PartialPerm
from permdiv.sunflower import (
    PseudoSunflower,
    Shape,
    basis_cascade,
    classify_two_uniform,
    compress,
    find_pseudo_sunflower,
    furedi_check,
    minimal_members,
)

a, b, c, d, e = Cell(1, 1), Cell(2, 2), Cell(3, 3), Cell(4, 4), Cell(5, 5)


def fam(n, *sets):
    return PartialFamily.of(n, [list(s) for s in sets])


def test_classic_sunflower():
    H = PartialFamily.of(4, [[a, Cell(2, 2)], [a, Cell(2, 3)], [a, Cell(2, 4)]])
    sf = find_pseudo_sunflower(H, 2)
    assert sf is not None and sf.is_valid()
    assert set(sf.center.cells) == {a}
    assert sf.size == 3


def test_too_few_sets():
    assert find_pseudo_sunflower(fam(2, [a, b]), 2) is None


def test_three_disjoint_pairs():
    H = fam(6, [a, b], [c, d], [e, Cell(6, 6)])
    sf = find_pseudo_sunflower(H, 2)
    assert sf is not None and sf.is_valid()
    assert brute_has_sunflower(H, 2)
    # a singleton center inside one member is valid as well
    P0 = PartialPerm.of(6, [a, b])
    alt = PseudoSunflower(PartialPerm.of(6, [a]), P0, tuple(p for p in H if p != P0))
    assert alt.is_valid()


def test_size_checks():
    with pytest.raises(InputError):
        find_pseudo_sunflower(fam(3, [a, b, c]), 2)
    with pytest.raises(InputError):
        compress(fam(3, [a]), 0)


def test_compress_examples():
    H = PartialFamily.of(4, [[a, Cell(2, 2)], [a, Cell(2, 3)], [a, Cell(2, 4)]])
    assert compress(H, 2) == PartialFamily.of(4, [[a]])
    tri = fam(3, [a, b], [a, c], [b, c])
    assert compress(tri, 2) == tri
    assert compress(PartialFamily(3), 2) == PartialFamily(3)


def test_minimal_members_examples():
    assert minimal_members(fam(2, [a], [a, b])) == fam(2, [a])
    anti = fam(3, [a, b], [b, c], [a, c])
    assert minimal_members(anti) == anti
    H = fam(5, [a, b], [b], [c, d], [d, e])
    assert minimal_members(H) == fam(5, [b], [c, d], [d, e])


def test_cascade_examples():
    tri = fam(5, [a, b], [a, c], [b, c])
    res = basis_cascade(tri, 5)
    assert all(len(res.layers[i]) == 0 for i in range(3, 6))
    assert res.residue == tri
    assert res.classification.shape is Shape.TRIANGLE
    res = basis_cascade(fam(5, [a]), 5)
    assert res.residue == fam(5, [a])
    assert res.classification.shape is Shape.STAR and res.classification.cells == (a,)


def test_classify_examples():
    assert classify_two_uniform(fam(3, [a, b], [a, c])).shape is Shape.STAR
    assert classify_two_uniform(fam(3, [a, b], [a, c], [b, c])).shape is Shape.TRIANGLE
    assert classify_two_uniform(fam(4, [a, b], [c, d])).shape is Shape.OTHER


def test_furedi_examples():
    chk = furedi_check(fam(4, [a, b], [c, d]), 1, 2)
    assert chk.sunflower_found and chk.holds
    chk = furedi_check(fam(4, [a, b, c]), 1, 3)
    assert not chk.sunflower_found and chk.holds and chk.bound == 1


def test_budget_guard():
    H = PartialFamily.of(6, [[Cell(1, i), Cell(2, j)] for i in range(1, 7) for j in range(1, 7) if i != j])
    with pytest.raises(BudgetExceeded):
        compress(H, 2, budget=3)


@settings(max_examples=200, deadline=None)
@given(partial_families(max_n=5, max_size=10, max_set=3), st.integers(1, 3))
def test_detection_matches_brute_force(H, s):
    H = PartialFamily(H.degree, tuple(x for x in H if len(x) <= s))
    sf = find_pseudo_sunflower(H, s)
    assert (sf is not None) == brute_has_sunflower(H, s)
    if sf is not None:
        assert sf.is_valid()
        assert {sf.petal0, *sf.petals} <= set(H)


@settings(max_examples=150, deadline=None)
@given(partial_families(max_n=5, max_size=10, max_set=3), st.integers(1, 3))
def test_compress_fixed_point_and_furedi(H, s):
    H = PartialFamily(H.degree, tuple(x for x in H if len(x) <= s))
    out = compress(H, s)
    assert not brute_has_sunflower(out, s)
    assert len(out.of_size(s)) <= s**s
    assert furedi_check(out, s, s).holds
    # every input member contains some output member
    assert all(any(o.mask & x.mask == o.mask for o in out) for x in H)


def _claim_instance(rng):
    n = rng.randint(2, 6)
    H = random_intersecting_partial(rng, n, rng.randint(1, 14), 4)
    return H


def test_claim_intersecting_preserved_random():
    rng = random.Random(11)
    for _ in range(300):
        H = _claim_instance(rng)
        s = max(len(x) for x in H)
        out = compress(H, s)
        assert naive_intersecting([x.cells for x in out])
        res = basis_cascade(H, 4)
        for i, layer in res.layers.items():
            assert len(layer) <= i**i
        if len(res.residue):
            assert res.classification.shape in (Shape.STAR, Shape.TRIANGLE)
