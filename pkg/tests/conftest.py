import itertools
from collections import Counter
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from permdiv.family import Cell, PartialFamily, PartialPerm, PermFamily, Permutation


def brute_cells(images):
    return {(i, v) for i, v in enumerate(images, start=1)}


def naive_intersecting(sets):
    sets = [set(s) for s in sets]
    return all(a & b for a in sets for b in sets)


def naive_spread_violators(members, r):
    """All nonempty patterns S (subsets of some member) with |F(S)| > r^-|S| |F|."""
    members = [frozenset(m) for m in members]
    out = set()
    for m in members:
        for k in range(1, len(m) + 1):
            for S in itertools.combinations(sorted(m), k):
                S = frozenset(S)
                c = sum(1 for x in members if S <= x)
                if c > Fraction(1) / Fraction(r) ** k * len(members):
                    out.add(S)
    return out


def brute_has_sunflower(H, s: int) -> bool:
    """Every (F0, proper C of F0, s other s-sets) triple, straight from the definition."""
    sets = [frozenset(x.cells) for x in H if len(x) == s]
    for i, F0 in enumerate(sets):
        others = sets[:i] + sets[i + 1 :]
        for k in range(len(F0)):
            for C in itertools.combinations(sorted(F0), k):
                C = frozenset(C)
                for petals in itertools.combinations(others, s):
                    reduced = [F0 - C] + [P - C for P in petals]
                    if all(not (x & y) for x, y in itertools.combinations(reduced, 2)):
                        return True
    return False


def counter_violators(members, r):
    """Pattern co-degrees tallied with tuples and Counter; returns violating patterns."""
    r = Fraction(r)
    counts = Counter()
    for m in members:
        m = tuple(sorted(m))
        for k in range(1, len(m) + 1):
            counts.update(itertools.combinations(m, k))
    total = len(members)
    return {frozenset(S) for S, c in counts.items() if c * r ** len(S) > total}


@st.composite
def perm_families(draw, min_n=1, max_n=5, max_size=30, min_size=0):
    n = draw(st.integers(min_n, max_n))
    perms = draw(
        st.lists(st.permutations(list(range(1, n + 1))), min_size=min_size, max_size=max_size)
    )
    return PermFamily(n, tuple(Permutation(tuple(p)) for p in perms))


@st.composite
def partial_perms(draw, n, max_size=None):
    k = draw(st.integers(0, n if max_size is None else min(n, max_size)))
    rows = draw(st.permutations(list(range(1, n + 1))))[:k]
    cols = draw(st.permutations(list(range(1, n + 1))))[:k]
    return PartialPerm.of(n, [Cell(r, c) for r, c in zip(rows, cols)])


@st.composite
def partial_families(draw, min_n=1, max_n=5, max_size=12, max_set=4, nonempty_sets=True):
    n = draw(st.integers(min_n, max_n))
    sets = draw(st.lists(partial_perms(n, max_set), max_size=max_size))
    if nonempty_sets:
        sets = [s for s in sets if len(s)]
    return PartialFamily(n, tuple(sets))


def random_intersecting_partial(rng: random.Random, n: int, size: int, max_set: int) -> PartialFamily:
    """Greedy random intersecting family of nonempty partial permutations."""
    chosen = []
    tries = 0
    while len(chosen) < size and tries < 50 * size:
        tries += 1
        k = rng.randint(1, min(n, max_set))
        rows = rng.sample(range(1, n + 1), k)
        cols = rng.sample(range(1, n + 1), k)
        s = PartialPerm.of(n, [Cell(r, c) for r, c in zip(rows, cols)])
        if all(s.mask & t.mask for t in chosen) and s not in chosen:
            chosen.append(s)
    return PartialFamily(n, tuple(chosen))


def random_intersecting_perms(rng: random.Random, n: int, size: int) -> PermFamily:
    from permdiv.family import enumerate_symmetric_group

    pool = list(enumerate_symmetric_group(n).members)
    rng.shuffle(pool)
    chosen = []
    for p in pool:
        if len(chosen) >= size:
            break
        if all(p.mask & q.mask for q in chosen):
            chosen.append(p)
    return PermFamily(n, tuple(chosen))


@pytest.fixture
def cells_abcd():
    return {"a": Cell(1, 1), "b": Cell(2, 2), "c": Cell(2, 3), "d": Cell(2, 4)}
