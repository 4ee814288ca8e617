"""Seeded Monte Carlo over p-random subsets of the n x n grid.

Randomness contract: one Philox4x64 stream keyed by the seed. Trial t reads
the raw 64-bit words at positions [t*K, (t+1)*K), where K is the ground size
rounded up to a multiple of 4 (one Philox block). A ground element is
included when the top 53 bits of its word fall below ceil(p * 2^53), an
exact comparison for rational p. Any chunking of the trials, serial or
threaded, therefore sees the same words, and for a fixed seed raising p
can only add elements to each sample.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bounds import RationalEnclosure, SpreadLemmaBound, frac_str, spread_lemma_bound, sqrt_enclosure
from .errors import HypothesisNotMet, InputError
from .family import PermFamily
from .spread import is_r_spread

GENERATOR = "numpy-philox4x64/block-per-trial/53bit-threshold"
_CHUNK_WORDS = 1 << 21


def _threshold(p: Fraction) -> int:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise InputError(f"probability {p} outside [0, 1]")
    return -((-p.numerator << 53) // p.denominator)


@dataclass(frozen=True)
class TrialConfig:
    p: Fraction
    trials: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        _threshold(self.p)
        if self.trials < 1:
            raise InputError("trials must be positive")
        if self.workers < 1:
            raise InputError("workers must be positive")
        if not 0 <= self.seed < 1 << 64:
            raise InputError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return {"p": frac_str(self.p), "trials": self.trials, "seed": self.seed, "generator": GENERATOR}


def trial_block(seed: int, ground_size: int, p, start: int, stop: int) -> np.ndarray:
    """Boolean (stop-start, ground_size) array: row j is trial start+j."""
    K = -(-ground_size // 4) * 4
    bg = np.random.Philox(key=seed)
    bg.advance(start * K // 4)
    raw = bg.random_raw((stop - start) * K).reshape(stop - start, K)[:, :ground_size]
    return (raw >> np.uint64(11)) < np.uint64(_threshold(p))


def sample_random_subset(ground_size: int, p, stream: np.random.Generator) -> np.ndarray:
    """Sorted indices of a p-random subset of range(ground_size)."""
    raw = stream.bit_generator.random_raw(ground_size)
    return np.flatnonzero((raw >> np.uint64(11)) < np.uint64(_threshold(p)))


def _member_index(F: PermFamily) -> np.ndarray:
    n = F.degree
    rows = np.arange(n)
    return np.array([rows * n + (np.array(p.images) - 1) for p in F.members], dtype=np.int64).reshape(len(F), n)


def covers_member(F: PermFamily, W) -> bool:
    """True iff some member's cell set lies inside W (an iterable of cells)."""
    cells = {tuple(c) for c in W}
    return any(all(c in cells for c in p.cells) for p in F.members)


def _covered(W: np.ndarray, idx: np.ndarray) -> np.ndarray:
    if idx.shape[0] == 0:
        return np.zeros(W.shape[0], dtype=bool)
    return W[:, idx].all(axis=2).any(axis=1)


def _run(F: PermFamily, cfg: TrialConfig, event) -> int:
    ground = F.degree**2
    idx = _member_index(F)
    K = -(-ground // 4) * 4
    per = max(1, _CHUNK_WORDS // (K * max(1, len(F))))
    chunks = [(s, min(s + per, cfg.trials)) for s in range(0, cfg.trials, per)]

    def work(bounds):
        W = trial_block(cfg.seed, ground, cfg.p, *bounds)
        return int(event(W, idx).sum())

    if cfg.workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            return sum(pool.map(work, chunks))
    return sum(map(work, chunks))


@dataclass(frozen=True)
class EstimateReport:
    successes: int
    trials: int
    config: TrialConfig
    experiment: str
    bound: SpreadLemmaBound | None = None
    p_clamped: bool = False
    consistent: bool | None = None

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.successes, self.trials)

    @property
    def stderr(self) -> RationalEnclosure:
        e = self.estimate
        return sqrt_enclosure(e * (1 - e) / self.trials, 64)

    @property
    def bound_vacuous(self) -> bool:
        return self.bound is None or self.bound.vacuous

    def to_dict(self) -> dict:
        d = {
            "experiment": self.experiment,
            "config": self.config.to_dict(),
            "successes": self.successes,
            "trials": self.trials,
            "estimate": frac_str(self.estimate),
            "stderr": self.stderr.to_dict(),
            "p_clamped": self.p_clamped,
        }
        if self.bound is not None:
            d["bound"] = self.bound.to_dict()
            d["bound_vacuous"] = self.bound_vacuous
            d["consistent"] = self.consistent
        return d


def estimate_cover_probability(F: PermFamily, cfg: TrialConfig) -> EstimateReport:
    """Fraction of p-random grid subsets W containing some member of F."""
    if len(F) == 0:
        raise InputError("cover probability of an empty family")
    hits = _run(F, cfg, _covered)
    return EstimateReport(hits, cfg.trials, cfg, "cover")


def disjoint_split_experiment(F: PermFamily, cfg: TrialConfig) -> EstimateReport:
    """Fraction of splits (U, complement), U being cfg.p-random, where both
    sides contain a member. Intersecting families never succeed."""
    if len(F) == 0:
        return EstimateReport(0, cfg.trials, cfg, "disjoint_split")
    hits = _run(F, cfg, lambda W, idx: _covered(W, idx) & _covered(~W, idx))
    return EstimateReport(hits, cfg.trials, cfg, "disjoint_split")


def verify_spread_lemma(F: PermFamily, r, delta, m, cfg: TrialConfig) -> EstimateReport:
    """Compare the empirical cover probability at p = m*delta with the lemma's bound.

    ``cfg.p`` is ignored; the sampling probability is m*delta, clamped to 1.
    Raises HypothesisNotMet unless F is r-spread.
    """
    r, delta, m = Fraction(r), Fraction(delta), Fraction(m)
    if len(F) == 0:
        raise InputError("spread lemma check on an empty family")
    ok, witness = is_r_spread(F, r)
    if not ok:
        raise HypothesisNotMet(f"family is not {frac_str(r)}-spread (witness {witness.set})")
    p = m * delta
    clamped = p > 1
    p = min(p, Fraction(1))
    run_cfg = TrialConfig(p, cfg.trials, cfg.seed, cfg.workers)
    hits = _run(F, run_cfg, _covered)
    bound = spread_lemma_bound(r, delta, m, F.degree)
    report = EstimateReport(hits, cfg.trials, run_cfg, "spread_lemma", bound, clamped)
    if bound.vacuous or bound.enclosure is None:
        consistent = True
    else:
        consistent = report.estimate + 3 * report.stderr.hi >= bound.enclosure.lo
    return EstimateReport(hits, cfg.trials, run_cfg, "spread_lemma", bound, clamped, consistent)


def exact_cover_probability(F: PermFamily, p) -> Fraction:
    """Enumerate all 2^(n^2) subsets; only for n^2 <= 20."""
    ground = F.degree**2
    if ground > 20:
        raise InputError("exact enumeration limited to ground sets of at most 20 cells")
    p = Fraction(p)
    masks = F.masks
    total = Fraction(0)
    for W in range(1 << ground):
        if any(m & W == m for m in masks):
            k = W.bit_count()
            total += p**k * (1 - p) ** (ground - k)
    return total
