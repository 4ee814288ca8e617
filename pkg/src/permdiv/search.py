"""Maximum diversity over intersecting families at small degree.

Vertices are the permutations of S_n in lexicographic order; two are
adjacent when they share a cell. Intersecting families are cliques, and since
adding a member never lowers the diversity, the maximum is attained on a
maximal clique.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, InvariantError
from .family import Cell, PermFamily, diversity, enumerate_symmetric_group, is_intersecting, make_triangle_family

# heuristic defaults
RESTART_LENGTH = 100
TRIANGLE_RESTART_SHARE = 0.1
SIDEWAYS_CAP = 50
STAR_PERTURBATION = 0.25


class Mode(str, enum.Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class SearchResult:
    best_family: PermFamily
    best_gamma: int
    mode: Mode
    iterations: int
    seed: int | None = None
    raw_gamma: int | None = None
    families_examined: int = 0
    history: tuple[int, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "n": self.best_family.degree,
            "mode": self.mode.value,
            "best_gamma": self.best_gamma,
            "raw_gamma": self.raw_gamma,
            "family_size": len(self.best_family),
            "iterations": self.iterations,
            "seed": self.seed,
            "families_examined": self.families_examined,
            "history": list(self.history),
        }


class _Graph:
    """Intersection graph of S_n with adjacency bitsets."""

    def __init__(self, n: int):
        self.n = n
        self.group = enumerate_symmetric_group(n)
        self.perms = self.group.members
        masks = self.group.masks
        N = len(masks)
        self.adj = []
        for i, a in enumerate(masks):
            row = 0
            for j, b in enumerate(masks):
                if j != i and a & b:
                    row |= 1 << j
            self.adj.append(row)
        self.all = (1 << N) - 1
        self.images = np.array([p.images for p in self.perms], dtype=np.int64) - 1
        self.index = {p: i for i, p in enumerate(self.perms)}

    def family(self, vs) -> PermFamily:
        return PermFamily(self.n, tuple(self.perms[v] for v in _bits(vs)))

    def gamma(self, vs) -> int:
        idx = list(_bits(vs))
        counts = np.zeros((self.n, self.n), dtype=np.int64)
        rows = np.arange(self.n)
        for v in idx:
            counts[rows, self.images[v]] += 1
        return len(idx) - int(counts.max())

    def common(self, vs) -> int:
        acc = self.all
        for v in _bits(vs):
            acc &= self.adj[v]
        return acc

    def close(self, vs) -> int:
        """Greedy maximal extension, adding compatible vertices in index order."""
        cand = self.common(vs) & ~vs
        while cand:
            low = cand & -cand
            vs |= low
            cand &= self.adj[low.bit_length() - 1]
        return vs


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _maximal_cliques(adj: list[int], budget: int | None = None):
    """Bron-Kerbosch with Tomita pivoting over int bitsets."""
    stack = [(0, (1 << len(adj)) - 1, 0)]
    while stack:
        R, P, X = stack.pop()
        if not P:
            if not X:
                yield R
            continue
        PX = P | X
        pivot = max(_bits(PX), key=lambda u: (P & adj[u]).bit_count())
        for v in _bits(P & ~adj[pivot]):
            bit = 1 << v
            stack.append((R | bit, P & adj[v], X & adj[v]))
            P &= ~bit
            X |= bit


def exact_max_diversity(n: int) -> SearchResult:
    if not 2 <= n <= 4:
        raise InputError(f"exact search supports 2 <= n <= 4, got {n}")
    g = _Graph(n)
    best, best_gamma, count = 0, -1, 0
    for clique in _maximal_cliques(g.adj):
        count += 1
        gam = g.gamma(clique)
        # ties keep the lexicographically first clique in index order
        if gam > best_gamma or (gam == best_gamma and _lex_key(clique) < _lex_key(best)):
            best, best_gamma = clique, gam
    fam = g.family(best)
    if not is_intersecting(fam) or diversity(fam).gamma != best_gamma:
        raise InvariantError("exact search produced an inconsistent family")
    return SearchResult(fam, best_gamma, Mode.EXACT, count, None, best_gamma, count)


def _lex_key(vs: int) -> tuple[int, ...]:
    return tuple(_bits(vs))


def _triangle_state(g: _Graph) -> int:
    vs = 0
    for p in make_triangle_family(g.n):
        vs |= 1 << g.index[p]
    return vs


def _random_star_state(g: _Graph, rng: np.random.Generator) -> int:
    n = g.n
    r, c = (int(v) for v in rng.integers(0, n, size=2))
    star = [i for i in range(len(g.perms)) if g.images[i, r] == c]
    keep = [v for v in star if rng.random() >= STAR_PERTURBATION]
    vs = 0
    for v in keep or star[:1]:
        vs |= 1 << v
    cand = g.common(vs) & ~vs
    order = list(_bits(cand))
    rng.shuffle(order)
    for v in order:
        if cand >> v & 1:
            vs |= 1 << v
            cand &= g.adj[v]
    return vs


def _score(g: _Graph, vs: int) -> tuple[int, int, int]:
    closed = g.close(vs)
    raw = g.gamma(vs)
    cg = g.gamma(closed)
    return (cg, raw, closed) if cg >= raw else (raw, raw, vs)


def _move(g: _Graph, vs: int, rng: np.random.Generator) -> int:
    members = list(_bits(vs))
    cand = g.common(vs) & ~vs
    if cand and rng.random() < 0.5:
        opts = list(_bits(cand))
        return vs | 1 << opts[int(rng.integers(len(opts)))]
    if len(members) < 2:
        return vs
    out = members[int(rng.integers(len(members)))]
    rest = vs & ~(1 << out)
    opts = [v for v in _bits(g.common(rest) & ~rest) if v != out]
    if not opts:
        return rest
    return rest | 1 << opts[int(rng.integers(len(opts)))]


def local_search_max_diversity(n: int, iterations: int, seed: int) -> SearchResult:
    """Hill climbing over intersecting families, seeded with T(n).

    Iterations are single moves; every RESTART_LENGTH moves a new run starts
    from T(n) or from a perturbed random star. Restart k draws from its own
    stream keyed by (seed, k).
    """
    if not 4 <= n <= 6:
        raise InputError(f"heuristic search supports 4 <= n <= 6, got {n}")
    if iterations < 0:
        raise InputError("iterations must be non-negative")
    g = _Graph(n)
    best_gamma, raw_gamma, best = _score(g, _triangle_state(g))
    history = [best_gamma]
    examined = 1
    done, restart = 0, 0
    while done < iterations:
        rng = np.random.default_rng([seed, restart])
        if rng.random() < TRIANGLE_RESTART_SHARE:
            state = _triangle_state(g)
        else:
            state = _random_star_state(g, rng)
        cur, _, _ = _score(g, state)
        sideways = 0
        steps = min(RESTART_LENGTH, iterations - done)
        for _ in range(steps):
            nxt = _move(g, state, rng)
            examined += 1
            if nxt == state or not nxt:
                continue
            sc, raw, closed = _score(g, nxt)
            if sc > cur:
                state, cur, sideways = nxt, sc, 0
            elif sc == cur and sideways < SIDEWAYS_CAP:
                state, sideways = nxt, sideways + 1
            if sc > best_gamma:
                best_gamma, raw_gamma, best = sc, raw, closed
        done += steps
        restart += 1
        history.append(best_gamma)
    fam = g.family(best)
    if not is_intersecting(fam) or diversity(fam).gamma != best_gamma:
        raise InvariantError("local search produced an inconsistent family")
    return SearchResult(fam, best_gamma, Mode.HEURISTIC, iterations, seed, raw_gamma, examined, tuple(history))


@dataclass(frozen=True)
class TriangleAudit:
    n: int
    size: int
    intersecting: bool
    gamma: int
    expected_gamma: int
    minimizing_cells: tuple[Cell, ...]

    @property
    def diagonal_attains(self) -> bool:
        return all(Cell(i, i) in self.minimizing_cells for i in (1, 2, 3))

    @property
    def ok(self) -> bool:
        return self.intersecting and self.gamma == self.expected_gamma and self.diagonal_attains

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "size": self.size,
            "intersecting": self.intersecting,
            "gamma": self.gamma,
            "expected_gamma": self.expected_gamma,
            "minimizing_cells": [str(c) for c in self.minimizing_cells],
            "diagonal_attains": self.diagonal_attains,
            "ok": self.ok,
        }


def verify_triangle_extremal(n: int) -> TriangleAudit:
    if not 4 <= n <= 8:
        raise InputError(f"triangle audit supports 4 <= n <= 8, got {n}")
    T = make_triangle_family(n)
    rep = diversity(T)
    fact = 1
    for k in range(2, n - 2):
        fact *= k
    return TriangleAudit(n, len(T), is_intersecting(T), rep.gamma, (n - 3) * fact, tuple(rep.minimizing_cells))
