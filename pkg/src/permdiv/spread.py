"""r-spreadness, non-spread patterns and the spread-approximation peel.

All decisions use the cross-multiplied integer form: with r = a/b, a pattern
S violates spreadness in F exactly when a^|S| * |F(S)| > b^|S| * |F|.
Only subsets of members can have |F(S)| > 0, so the enumeration walks the
2^n submasks of each member mask.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import config
from .bounds import RationalEnclosure, q_enclosure, q_floor
from .errors import BudgetExceeded, InputError
from .family import PartialFamily, PartialPerm, PermFamily, cells_of_mask, is_intersecting, restriction

SELECTION_RULE = "max co-degree, then min size, then lexicographic cells"


def _as_rational(r) -> Fraction:
    r = Fraction(r)
    if r <= 0:
        raise InputError(f"spread parameter must be positive, got {r}")
    return r


def subset_codegrees(masks: Sequence[int], n: int, budget: int | None = None) -> dict[int, int]:
    """Map every nonempty submask of a member to its co-degree |F(S)|."""
    budget = config.WORK_BUDGET if budget is None else budget
    work = sum(1 << m.bit_count() for m in masks)
    if work > budget:
        raise BudgetExceeded("subset enumeration", budget)
    counts: dict[int, int] = {}
    get = counts.get
    for m in masks:
        sub = m
        while sub:
            counts[sub] = get(sub, 0) + 1
            sub = (sub - 1) & m
    return counts


def _violators(counts: dict[int, int], total: int, r: Fraction) -> list[int]:
    a, b = r.numerator, r.denominator
    apow: dict[int, int] = {}
    bpow: dict[int, int] = {}
    out = []
    for s, c in counts.items():
        k = s.bit_count()
        if k not in apow:
            apow[k] = a**k
            bpow[k] = b**k
        if apow[k] * c > bpow[k] * total:
            out.append(s)
    return out


def _cell_key(mask: int, n: int):
    return tuple(sorted(cells_of_mask(mask, n)))


@dataclass(frozen=True)
class SpreadWitness:
    """A pattern S with |F(S)| > r^-|S| |F|; the threshold is rhs_num/rhs_den."""

    set: PartialPerm
    lhs: int
    rhs_num: int
    rhs_den: int

    @property
    def threshold(self) -> Fraction:
        return Fraction(self.rhs_num, self.rhs_den)

    @property
    def ratio(self) -> Fraction:
        return self.lhs / self.threshold


def _masks_and_degree(F) -> tuple[tuple[int, ...], int]:
    if not isinstance(F, (PermFamily, PartialFamily)):
        raise InputError("expected a permutation or partial family")
    return F.masks, F.degree


def is_r_spread(F, r, budget: int | None = None) -> tuple[bool, SpreadWitness | None]:
    """Return (True, None) if F is r-spread, else (False, worst witness).

    The witness maximises |F(S)| / (r^-|S| |F|); ties go to the smaller
    pattern, then to the lexicographically smaller cell list.
    """
    r = _as_rational(r)
    masks, n = _masks_and_degree(F)
    total = len(masks)
    if total == 0:
        raise InputError("spreadness of an empty family is undefined")
    counts = subset_codegrees(masks, n, budget)
    bad = _violators(counts, total, r)
    if not bad:
        return True, None
    a, b = r.numerator, r.denominator

    def score(s):
        k = s.bit_count()
        # ratio = c * a^k / (b^k * total); larger first
        return (-Fraction(counts[s] * a**k, b**k), k, _cell_key(s, n))

    best = min(bad, key=score)
    k = best.bit_count()
    return False, SpreadWitness(PartialPerm.from_mask(best, n), counts[best], b**k * total, a**k)


def non_spread_sets(F, r, budget: int | None = None) -> PartialFamily:
    r = _as_rational(r)
    masks, n = _masks_and_degree(F)
    if not masks:
        raise InputError("non-spread sets of an empty family are undefined")
    counts = subset_codegrees(masks, n, budget)
    return PartialFamily.from_masks(_violators(counts, len(masks), r), n)


def _maximal(counts: dict[int, int], bad: Iterable[int]) -> list[int]:
    """Inclusion-maximal members of ``bad``.

    ``below[S]`` records that some one-cell extension of S (within the
    submask universe ``counts``) is itself bad or lies below a bad set.
    """
    bad = set(bad)
    if not bad:
        return []
    below: set[int] = set()
    for t in sorted(counts, key=int.bit_count, reverse=True):
        if t in bad or t in below:
            rest = t
            while rest:
                low = rest & -rest
                s = t ^ low
                if s:
                    below.add(s)
                rest ^= low
    return [s for s in bad if s not in below]


def maximal_non_spread(F, r, budget: int | None = None) -> PartialFamily:
    r = _as_rational(r)
    masks, n = _masks_and_degree(F)
    if not masks:
        raise InputError("non-spread sets of an empty family are undefined")
    counts = subset_codegrees(masks, n, budget)
    return PartialFamily.from_masks(_maximal(counts, _violators(counts, len(masks), r)), n)


# --- decomposition ------------------------------------------------------------


@dataclass(frozen=True)
class SpreadParams:
    """Spread parameter r and the cap q on basis-set sizes.

    ``q_cap`` is an enclosure of the (possibly irrational) cap, and
    ``q_floor`` its certified integer part: |B| <= q iff |B| <= q_floor.
    """

    n: int
    r: Fraction
    q_cap: RationalEnclosure
    q_floor: int

    @classmethod
    def default(cls, n: int) -> "SpreadParams":
        """r = n/3 and q = 4 log2 n."""
        return cls(n, Fraction(n, 3), q_enclosure(n, 64), q_floor(n))

    @classmethod
    def exact(cls, n: int, r, q_cap) -> "SpreadParams":
        q = Fraction(q_cap)
        return cls(n, _as_rational(r), RationalEnclosure.point(q), q.numerator // q.denominator)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": f"{self.r.numerator}/{self.r.denominator}",
            "q_cap": self.q_cap.to_dict(),
            "q_floor": self.q_floor,
        }


class StopReason(str, enum.Enum):
    EXHAUSTED = "exhausted"
    OVERSIZE_WITNESS = "oversize_witness"


@dataclass(frozen=True)
class Branch:
    basis: PartialPerm
    family: PermFamily


@dataclass(frozen=True)
class SpreadDecomposition:
    branches: tuple[Branch, ...]
    remainder: PermFamily
    params: SpreadParams
    stop_reason: StopReason
    stop_witness: PartialPerm | None = None
    input_intersecting: bool = True
    selection_rule: str = SELECTION_RULE

    @property
    def basis(self) -> PartialFamily:
        return PartialFamily(self.params.n, tuple(b.basis for b in self.branches))

    @property
    def basis_intersecting(self) -> bool:
        """Reported only; guaranteed by theory solely in the large-n regime."""
        return is_intersecting(self.basis)


def _select(counts: dict[int, int], candidates: list[int], n: int) -> int:
    return min(candidates, key=lambda s: (-counts[s], s.bit_count(), _cell_key(s, n)))


def spread_decompose(F: PermFamily, params: SpreadParams, budget: int | None = None) -> SpreadDecomposition:
    """Peel branches rooted at maximal non-spread patterns until none is left
    or one of them is larger than the cap."""
    n = F.degree
    if params.n != n:
        raise InputError(f"params degree {params.n} does not match family degree {n}")
    r = params.r
    members = list(zip(F.members, F.masks))
    branches: list[Branch] = []
    reason, witness = StopReason.EXHAUSTED, None
    while members:
        masks = [m for _, m in members]
        counts = subset_codegrees(masks, n, budget)
        maximal = _maximal(counts, _violators(counts, len(masks), r))
        if not maximal:
            break
        oversize = [s for s in maximal if s.bit_count() > params.q_floor]
        if oversize:
            reason = StopReason.OVERSIZE_WITNESS
            witness = PartialPerm.from_mask(_select(counts, oversize, n), n)
            break
        B = _select(counts, maximal, n)
        taken = [p for p, m in members if m & B == B]
        members = [(p, m) for p, m in members if m & B != B]
        branches.append(Branch(PartialPerm.from_mask(B, n), PermFamily(n, tuple(taken))))
    return SpreadDecomposition(
        tuple(branches),
        PermFamily(n, tuple(p for p, _ in members)),
        params,
        reason,
        witness,
        input_intersecting=is_intersecting(F),
    )


def decomposition_violations(F: PermFamily, dec: SpreadDecomposition, budget: int | None = None) -> list[str]:
    """Definitional re-check of every decomposition invariant; empty when sound."""
    problems = []
    seen: set = set()
    total = len(dec.remainder)
    for i, br in enumerate(dec.branches):
        fam = br.family
        total += len(fam)
        overlap = seen & set(fam.members)
        if overlap:
            problems.append(f"branch {i} overlaps earlier branches")
        seen |= set(fam.members)
        b = br.basis.mask
        if not all(m & b == b for m in fam.masks):
            problems.append(f"branch {i}: a member does not contain its basis set")
        if len(br.basis) > dec.params.q_floor:
            problems.append(f"branch {i}: basis size {len(br.basis)} exceeds the cap")
        if len(fam) == 0:
            problems.append(f"branch {i} is empty")
        else:
            ok, _ = is_r_spread(restriction(fam, br.basis), dec.params.r, budget)
            if not ok:
                problems.append(f"branch {i}: restriction to its basis set is not r-spread")
    if seen & set(dec.remainder.members):
        problems.append("remainder overlaps a branch")
    if total != len(F) or (seen | set(dec.remainder.members)) != set(F.members):
        problems.append("branches and remainder do not partition the input")
    return problems


def decomposition_report(F: PermFamily, dec: SpreadDecomposition, budget: int | None = None) -> dict:
    branches = []
    for br in dec.branches:
        ok, _ = is_r_spread(restriction(br.family, br.basis), dec.params.r, budget)
        branches.append(
            {
                "basis": [f"{c.row}:{c.col}" for c in br.basis.key],
                "size": len(br.family),
                "restriction_spread": ok,
            }
        )
    return {
        "params": dec.params.to_dict(),
        "input_size": len(F),
        "input_intersecting": dec.input_intersecting,
        "selection_rule": dec.selection_rule,
        "branches": branches,
        "remainder_size": len(dec.remainder),
        "stop_reason": dec.stop_reason.value,
        "stop_witness": None if dec.stop_witness is None else [f"{c.row}:{c.col}" for c in dec.stop_witness.key],
        "basis_intersecting": dec.basis_intersecting,
    }
