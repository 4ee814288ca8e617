"""Pseudo sunflowers, the compression A(H, s), and the layered basis cascade.

Sets F_0, ..., F_s form a pseudo sunflower of size s+1 with center C when
C is a proper subset of F_0 and the reduced sets F_i \\ C are pairwise
disjoint. Only F_0 has to contain C. Detection is restricted to members of
one uniform size, and the empty center is allowed (it is the only option
for 1-uniform families).

Detection rule (recorded in reports as ``DETECTION_RULE``): F_0 runs over
the uniform members in canonical order; for each cell x of F_0 in order the
center is first taken as F_0 - {x}, and petals are packed by backtracking
over the remaining members in canonical order. The first packing found is
returned with its inclusion-minimal center, which is the union of all
pairwise intersections of the s+1 sets.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import config
from .errors import BudgetExceeded, InputError, InvariantError
from .family import Cell, PartialFamily, PartialPerm, cells_of_mask, is_intersecting

DETECTION_RULE = "canonical F0, center F0-{x} by cell order, first petal packing, minimal center"


@dataclass(frozen=True)
class PseudoSunflower:
    center: PartialPerm
    petal0: PartialPerm
    petals: tuple[PartialPerm, ...]

    @property
    def size(self) -> int:
        return 1 + len(self.petals)

    def is_valid(self) -> bool:
        c = self.center.mask
        f0 = self.petal0.mask
        if c & f0 != c or c == f0:
            return False
        reduced = [f0 & ~c] + [p.mask & ~c for p in self.petals]
        acc = 0
        for r in reduced:
            if acc & r:
                return False
            acc |= r
        return True


class _Search:
    def __init__(self, budget: int | None):
        self.budget = config.WORK_BUDGET if budget is None else budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded("pseudo-sunflower search", self.budget)

    def pack(self, cands: list[tuple[int, int]], need: int) -> list[int] | None:
        if need == 0:
            return []
        for j, (idx, red) in enumerate(cands):
            if len(cands) - j < need:
                break
            self.tick()
            rest = [(i2, r2) for i2, r2 in cands[j + 1 :] if not r2 & red]
            found = self.pack(rest, need - 1)
            if found is not None:
                return [idx] + found
        return None


def _canonical(masks, n: int) -> list[int]:
    return sorted(masks, key=lambda m: tuple(sorted(cells_of_mask(m, n))))


def _find_masks(masks: list[int], total: int, search: _Search) -> tuple[int, int, list[int]] | None:
    """First pseudo sunflower of ``total`` sets among uniform, canonically
    ordered ``masks``. Returns (center, F0, petals)."""
    if total < 1 or len(masks) < total:
        return None
    for i0, f0 in enumerate(masks):
        rest = f0
        while rest:
            xbit = rest & -rest
            rest ^= xbit
            c = f0 ^ xbit
            cands = [(i, m & ~c) for i, m in enumerate(masks) if i != i0 and not m & xbit]
            if len(cands) < total - 1:
                continue
            search.tick()
            picked = search.pack(cands, total - 1)
            if picked is None:
                continue
            sets = [f0] + [masks[i] for i in picked]
            center = 0
            for a in range(len(sets)):
                for b in range(a + 1, len(sets)):
                    center |= sets[a] & sets[b]
            return center, f0, [masks[i] for i in picked]
    return None


def _check_sizes(H: PartialFamily, s: int) -> None:
    if s < 1:
        raise InputError(f"uniformity must be positive, got {s}")
    for S in H:
        if len(S) > s:
            raise InputError(f"member {S} has size {len(S)} > {s}")


def find_pseudo_sunflower(H: PartialFamily, s: int, budget: int | None = None) -> PseudoSunflower | None:
    """An s-uniform pseudo sunflower of size s+1 in H, or None."""
    _check_sizes(H, s)
    n = H.degree
    uniform = _canonical([m for m in H.masks if m.bit_count() == s], n)
    found = _find_masks(uniform, s + 1, _Search(budget))
    if found is None:
        return None
    c, f0, petals = found
    return PseudoSunflower(
        PartialPerm.from_mask(c, n), PartialPerm.from_mask(f0, n), tuple(PartialPerm.from_mask(p, n) for p in petals)
    )


def compress(H: PartialFamily, s: int, budget: int | None = None) -> PartialFamily:
    """Replace pseudo sunflowers by their centers until none is left.

    One step removes every member containing the center C and adds C. The
    total size sum |S| drops strictly each step, so the loop terminates.
    """
    _check_sizes(H, s)
    n = H.degree
    search = _Search(budget)
    current = set(H.masks)
    while True:
        uniform = _canonical([m for m in current if m.bit_count() == s], n)
        found = _find_masks(uniform, s + 1, search)
        if found is None:
            break
        c = found[0]
        current = {m for m in current if m & c != c}
        current.add(c)
    return PartialFamily.from_masks(current, n)


def minimal_members(B: PartialFamily) -> PartialFamily:
    masks = B.masks
    keep = [m for m in masks if not any(o != m and o & m == o for o in masks)]
    return PartialFamily.from_masks(keep, B.degree)


# --- classification -----------------------------------------------------------


class Shape(str, enum.Enum):
    STAR = "star"
    TRIANGLE = "triangle"
    OTHER = "other"


@dataclass(frozen=True)
class Classification:
    shape: Shape
    cells: tuple[Cell, ...] = ()
    note: str = ""

    def to_dict(self) -> dict:
        d = {"shape": self.shape.value, "cells": [str(c) for c in self.cells]}
        if self.note:
            d["note"] = self.note
        return d


def classify_two_uniform(A: PartialFamily) -> Classification:
    """Star (a cell common to every member), triangle, or other."""
    for S in A:
        if len(S) > 2:
            raise InputError(f"member {S} has size {len(S)} > 2")
    n = A.degree
    masks = A.masks
    if not masks:
        return Classification(Shape.OTHER, note="empty residue")
    common = masks[0]
    for m in masks[1:]:
        common &= m
    if common:
        return Classification(Shape.STAR, (min(cells_of_mask(common, n)),))
    union = 0
    for m in masks:
        union |= m
    if (
        len(masks) == 3
        and all(m.bit_count() == 2 for m in masks)
        and union.bit_count() == 3
        and is_intersecting(A)
    ):
        return Classification(Shape.TRIANGLE, tuple(sorted(cells_of_mask(union, n))))
    note = "" if is_intersecting(A) else "residue is not intersecting"
    return Classification(Shape.OTHER, note=note)


# --- cascade ------------------------------------------------------------------


@dataclass(frozen=True)
class CascadeResult:
    layers: dict[int, PartialFamily]
    residue: PartialFamily
    classification: Classification
    q_int: int
    detection_rule: str = DETECTION_RULE

    def to_dict(self) -> dict:
        return {
            "q_int": self.q_int,
            "detection_rule": self.detection_rule,
            "layers": [
                {"i": i, "size": len(self.layers[i]), "furedi_bound": i**i}
                for i in sorted(self.layers, reverse=True)
            ],
            "residue_size": len(self.residue),
            "classification": self.classification.to_dict(),
        }


def basis_cascade(B: PartialFamily, q_int: int, budget: int | None = None) -> CascadeResult:
    """Compress the minimal members of B level by level from q_int down to 3.

    Layer i collects the i-sets surviving compression at uniformity i; what
    remains below size 3 after the last level is the residue A_2.
    """
    if q_int < 1:
        raise InputError(f"q_int must be positive, got {q_int}")
    for S in B:
        if not 1 <= len(S) <= q_int:
            raise InputError(f"member {S} has size {len(S)} outside [1, {q_int}]")
    n = B.degree
    P = minimal_members(B)
    layers: dict[int, PartialFamily] = {}
    if q_int >= 3:
        P = compress(P, q_int, budget)
        for i in range(q_int, 2, -1):
            A_i = P.of_size(i)
            layers[i] = A_i
            if len(A_i) > i**i:
                raise InvariantError(f"layer {i} has {len(A_i)} sets, above the bound {i**i}")
            rest = PartialFamily(n, tuple(S for S in P if len(S) != i))
            P = compress(rest, i - 1, budget) if i > 3 else rest
    residue = P
    return CascadeResult(layers, residue, classify_two_uniform(residue), q_int)


# --- Furedi bound -------------------------------------------------------------


@dataclass(frozen=True)
class FurediCheck:
    holds: bool
    size: int
    bound: int
    sunflower_found: bool

    def to_dict(self) -> dict:
        return {"holds": self.holds, "size": self.size, "bound": self.bound, "sunflower_found": self.sunflower_found}


def furedi_check(H: PartialFamily, s: int, k: int, budget: int | None = None) -> FurediCheck:
    """k-uniform part of H either has a pseudo sunflower of size s+1 or at most s^k sets."""
    uniform = _canonical([m for m in H.masks if m.bit_count() == k], H.degree)
    found = _find_masks(uniform, s + 1, _Search(budget)) is not None
    size = len(uniform)
    return FurediCheck(found or size <= s**k, size, s**k, found)
