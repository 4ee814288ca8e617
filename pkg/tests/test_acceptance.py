"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python tests/test_acceptance.py``.
"""

import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import brute_has_sunflower, counter_violators, naive_intersecting, random_intersecting_partial, random_intersecting_perms
from permdiv.bounds import Verdict, derangement_floor
from permdiv.certificates import check_fact22, check_final_chain
from permdiv.family import (
    PermFamily,
    derangement_count,
    diversity,
    enumerate_symmetric_group,
    is_intersecting,
    make_star,
    make_triangle_family,
)
from permdiv.search import _Graph, exact_max_diversity, local_search_max_diversity, verify_triangle_extremal
from permdiv.spread import SpreadParams, is_r_spread, non_spread_sets, spread_decompose
from permdiv.stochastic import TrialConfig, disjoint_split_experiment, estimate_cover_probability, exact_cover_probability
from permdiv.sunflower import Shape, basis_cascade, compress

HALF = Fraction(1, 2)


def report(capsys, number: int, title: str, ok: bool, detail: str, elapsed: float, limit: float):
    ok = ok and elapsed < limit
    line = f"CRITERION {number} {'PASS' if ok else 'FAIL'}: {title} ({elapsed:.2f}s, limit {limit:g}s) {detail}"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def within_4_sigma(est: Fraction, p: Fraction, trials: int) -> bool:
    return abs(float(est) - float(p)) <= 4 * math.sqrt(float(p) * (1 - float(p)) / trials)


# 1 -------------------------------------------------------------------------


def test_criterion_1_triangle_extremality(capsys):
    t0 = time.perf_counter()
    expected = {4: 1, 5: 4, 6: 18, 7: 96, 8: 600}
    got, ok = {}, True
    for n in expected:
        # enumeration oracle: scan S_n directly, independent of the constructor
        T = [p for p in enumerate_symmetric_group(n) if sum(p(i) == i for i in (1, 2, 3)) >= 2]
        F = PermFamily(n, tuple(T))
        gamma = min(sum(1 for p in T if p(r) != c) for r in range(1, n + 1) for c in range(1, n + 1))
        audit = verify_triangle_extremal(n)
        got[n] = gamma
        ok &= F == make_triangle_family(n) and is_intersecting(F) and naive_intersecting([p.cells for p in T[:200]])
        ok &= gamma == audit.gamma == expected[n] == (n - 3) * math.factorial(n - 3) and audit.ok
    report(capsys, 1, "triangle extremality", ok, f"gamma={got}", time.perf_counter() - t0, 60)


# 2 -------------------------------------------------------------------------


def test_criterion_2_star_baseline(capsys):
    t0 = time.perf_counter()
    ok, checked = True, 0
    for n in range(1, 9):
        cells = [(r, c) for r in range(1, n + 1) for c in range(1, n + 1)]
        if n > 6:
            cells = [(1, 1), (n, 1), (2, n), (n, n)]
        for x in cells:
            S = make_star(n, x)
            ok &= len(S) == math.factorial(n - 1) and diversity(S).gamma == 0
            ok &= all(p(x[0]) == x[1] for p in S)
            checked += 1
    report(capsys, 2, "star baseline", ok, f"{checked} stars", time.perf_counter() - t0, 30)


# 3 -------------------------------------------------------------------------


def test_criterion_3_certified_inequalities(capsys):
    t0 = time.perf_counter()
    ns = list(range(500, 521)) + [1000, 10**4]
    failures = []
    b_mismatch = []
    for n in ns:
        f22 = check_fact22(n)
        fin = check_final_chain(n)
        if f22.verdict is not Verdict.PROVED:
            failures.append((n, "fact22", [c.claim_id for c in f22.claims if c.verdict is not Verdict.PROVED]))
        if fin.verdict is not Verdict.PROVED:
            failures.append((n, "final", [c.claim_id for c in fin.claims if c.verdict is not Verdict.PROVED]))
        if fin.claim("final.b.ratio").verdict is not fin.claim("final.b.direct").verdict:
            b_mismatch.append(n)
    ok = not failures and not b_mismatch
    detail = "all proved" if ok else f"not proved: {failures}; b-route mismatch: {b_mismatch}"
    report(capsys, 3, "certified inequality suite", ok, detail, time.perf_counter() - t0, 120)


# 4 -------------------------------------------------------------------------


def test_criterion_4_derangement_identity(capsys):
    t0 = time.perf_counter()
    ok = all(derangement_floor(m) == derangement_count(m) for m in range(1, 21))
    # independent recurrence D_m = m D_{m-1} + (-1)^m
    D = 1
    for m in range(1, 21):
        D = m * D + (-1) ** m
        ok &= D == derangement_count(m)
    report(capsys, 4, "derangement identity", ok, "m = 1..20", time.perf_counter() - t0, 1)


# 5 -------------------------------------------------------------------------


def _independent_decomposition_check(F: PermFamily, dec, q_floor: int, r) -> bool:
    members = {frozenset(p.cells) for p in F}
    seen = set()
    for br in dec.branches:
        fam = {frozenset(p.cells) for p in br.family}
        B = frozenset(br.basis.cells)
        if not fam or fam & seen or not all(B <= m for m in fam) or len(B) > q_floor:
            return False
        seen |= fam
        restricted = [m - B for m in fam]
        if counter_violators(restricted, r):
            return False
    rest = {frozenset(p.cells) for p in dec.remainder}
    return not (rest & seen) and (rest | seen) == members and len(rest) + len(seen) == len(F)


def test_criterion_5_spread_engine_soundness(capsys):
    t0 = time.perf_counter()
    rng = random.Random(20240505)
    mismatches = bad_decomp = 0
    families = []
    for _ in range(500):
        n = rng.randint(2, 6)
        group = enumerate_symmetric_group(n).members
        size = rng.randint(1, min(100, len(group)))
        families.append(PermFamily(n, tuple(rng.sample(group, size))))
    for n in range(2, 7):
        families += [make_star(n, (1, 1)), enumerate_symmetric_group(n)]
        if n >= 3:
            families.append(make_triangle_family(n))
    for F in families:
        n = F.degree
        cells = [p.cells for p in F]
        for r in (Fraction(1, 2), Fraction(2), Fraction(n, 3), Fraction(n * n), Fraction(rng.randint(1, 9), rng.randint(1, 4))):
            ok, w = is_r_spread(F, r)
            naive = counter_violators(cells, r)
            if ok != (not naive) or (w is not None and frozenset(w.set.cells) not in naive):
                mismatches += 1
        for params in (SpreadParams.default(n), SpreadParams.exact(n, rng.randint(1, 6), rng.randint(1, n))):
            dec = spread_decompose(F, params)
            if not _independent_decomposition_check(F, dec, params.q_floor, params.r):
                bad_decomp += 1
    ok = mismatches == 0 and bad_decomp == 0
    detail = f"{len(families)} families; verdict mismatches {mismatches}; bad decompositions {bad_decomp}"
    report(capsys, 5, "spread-engine soundness", ok, detail, time.perf_counter() - t0, 300)


# 6 -------------------------------------------------------------------------


def test_criterion_6_sunflower_suite(capsys):
    t0 = time.perf_counter()
    rng = random.Random(777)
    fixed_fail = claim_fail = furedi_fail = shape_fail = 0
    count = 0
    while count < 1000:
        n = rng.randint(2, 6)
        H = random_intersecting_partial(rng, n, rng.randint(1, 16), 4)
        if not len(H):
            continue
        count += 1
        s = max(len(x) for x in H)
        out = compress(H, s)
        if brute_has_sunflower(out, s):
            fixed_fail += 1
        if not naive_intersecting([x.cells for x in out]):
            claim_fail += 1
        res = basis_cascade(H, 4)
        if any(len(layer) > i**i for i, layer in res.layers.items()):
            furedi_fail += 1
        A2 = res.residue
        if len(A2) and naive_intersecting([x.cells for x in A2]) and res.classification.shape is Shape.OTHER:
            shape_fail += 1
    ok = not (fixed_fail or claim_fail or furedi_fail or shape_fail)
    detail = (
        f"{count} intersecting families; fixed-point {fixed_fail}, claim {claim_fail}, "
        f"furedi {furedi_fail}, classification {shape_fail} failures"
    )
    report(capsys, 6, "sunflower suite", ok, detail, time.perf_counter() - t0, 300)


# 7 -------------------------------------------------------------------------


def test_criterion_7_monte_carlo_calibration(capsys):
    t0 = time.perf_counter()
    S2 = enumerate_symmetric_group(2)
    exact = exact_cover_probability(S2, HALF)
    rep = estimate_cover_probability(S2, TrialConfig(HALF, 10**5, 12345))
    ok = exact == Fraction(7, 16) and within_4_sigma(rep.estimate, exact, 10**5)
    for F in (S2, make_triangle_family(4), enumerate_symmetric_group(3)):
        ok &= estimate_cover_probability(F, TrialConfig(0, 1000, 1)).estimate == 0
        ok &= estimate_cover_probability(F, TrialConfig(1, 1000, 1)).estimate == 1
    rng = random.Random(3)
    inter = [make_triangle_family(n) for n in (4, 5, 6)] + [make_star(5, (2, 4))]
    inter += [random_intersecting_perms(rng, rng.randint(2, 5), rng.randint(1, 30)) for _ in range(20)]
    zero_ok = all(disjoint_split_experiment(F, TrialConfig(HALF, 5000, 8)).successes == 0 for F in inter)
    split = disjoint_split_experiment(S2, TrialConfig(HALF, 10**5, 99))
    ok &= zero_ok and within_4_sigma(split.estimate, Fraction(1, 8), 10**5)
    docs = {
        repr(estimate_cover_probability(make_triangle_family(5), TrialConfig(Fraction(3, 5), 20000, 42, w)).to_dict())
        for w in (1, 2, 4, 4)
    }
    ok &= len(docs) == 1
    detail = f"cover {rep.estimate} vs 7/16, split {split.estimate} vs 1/8, deterministic={len(docs) == 1}"
    report(capsys, 7, "Monte Carlo calibration", ok, detail, time.perf_counter() - t0, 120)


# 8 -------------------------------------------------------------------------


def _subset_oracle_s3() -> int:
    members = enumerate_symmetric_group(3).members
    best = -1
    for bits in range(1, 1 << 6):
        F = PermFamily(3, tuple(p for i, p in enumerate(members) if bits >> i & 1))
        if naive_intersecting([p.cells for p in F]):
            best = max(best, diversity(F).gamma)
    return best


def _networkx_oracle(n: int) -> int:
    g = _Graph(n)
    G = nx.Graph()
    G.add_nodes_from(range(len(g.perms)))
    for i, p in enumerate(g.perms):
        for j in range(i + 1, len(g.perms)):
            if set(p.cells) & set(g.perms[j].cells):
                G.add_edge(i, j)
    return max(diversity(PermFamily(n, tuple(g.perms[v] for v in c))).gamma for c in nx.find_cliques(G))


def test_criterion_8_search_oracles(capsys):
    t0 = time.perf_counter()
    e3, e4 = exact_max_diversity(3), exact_max_diversity(4)
    ok = e3.best_gamma == _subset_oracle_s3() == _networkx_oracle(3)
    ok &= e4.best_gamma == _networkx_oracle(4)
    results = [e3, e4]
    for n in (4, 5, 6):
        h = local_search_max_diversity(n, 500, seed=n)
        ok &= h.best_gamma >= (n - 3) * math.factorial(n - 3)
        results.append(h)
    ok &= all(is_intersecting(r.best_family) for r in results)
    detail = f"exact: n=3 -> {e3.best_gamma}, n=4 -> {e4.best_gamma}; heuristic: {[r.best_gamma for r in results[2:]]}"
    report(capsys, 8, "search oracle agreement", ok, detail, time.perf_counter() - t0, 600)


# 9 -------------------------------------------------------------------------


def test_criterion_9_intersecting_not_n2_spread(capsys):
    t0 = time.perf_counter()
    rng = random.Random(91)
    suite = []
    # n = 1 is excluded: r = n^2 = 1 and no pattern of any family can exceed r^-|S| |F| = |F|
    for _ in range(400):
        n = rng.randint(2, 5)
        F = random_intersecting_perms(rng, n, rng.randint(1, 30))
        if len(F):
            suite.append(F)
    for n in range(3, 6):
        suite += [make_triangle_family(n), make_star(n, (n, 1))]
    failures = [F for F in suite if not is_intersecting(F) or len(non_spread_sets(F, F.degree**2)) == 0]
    ok = not failures
    report(capsys, 9, "intersecting families are not n^2-spread", ok, f"{len(suite)} families", time.perf_counter() - t0, 120)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
