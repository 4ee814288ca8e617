"""Permutations, partial permutations and families over the n x n grid.

A permutation sigma of [n] is identified with its cell set
{(i, sigma(i))}, an n-subset of the n^2 grid with one cell per row and
column. A partial permutation is any set of cells with distinct rows and
distinct columns. Cells are 1-based and map to bit ``(row-1)*n + (col-1)``
of an integer mask, so containment and intersection are single AND
operations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple

from . import config
from .errors import InputError


class Cell(NamedTuple):
    row: int
    col: int

    def __str__(self) -> str:
        return f"{self.row}:{self.col}"


def cell_bit(cell: Cell, n: int) -> int:
    return 1 << ((cell[0] - 1) * n + (cell[1] - 1))


def cells_of_mask(mask: int, n: int) -> list[Cell]:
    out = []
    while mask:
        low = mask & -mask
        idx = low.bit_length() - 1
        out.append(Cell(idx // n + 1, idx % n + 1))
        mask ^= low
    return out


def _check_degree(n: int, max_degree: int | None = None, min_degree: int = 1) -> None:
    cap = config.MAX_DEGREE if max_degree is None else max_degree
    if not isinstance(n, int) or n < min_degree or n > cap:
        raise InputError(f"degree {n} outside supported range [{min_degree}, {cap}]")


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of [n] in one-line notation: ``images[i-1] = sigma(i)``."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise InputError(f"not a bijection of [1..{len(images)}]: {images}")

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> "Permutation":
        obj = object.__new__(cls)
        object.__setattr__(obj, "images", images)
        return obj

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(tuple(range(1, n + 1)))

    @property
    def degree(self) -> int:
        return len(self.images)

    @property
    def cells(self) -> tuple[Cell, ...]:
        return tuple(Cell(i + 1, v) for i, v in enumerate(self.images))

    @cached_property
    def mask(self) -> int:
        n = len(self.images)
        m = 0
        for i, v in enumerate(self.images):
            m |= 1 << (i * n + v - 1)
        return m

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __str__(self) -> str:
        return " ".join(map(str, self.images))


@dataclass(frozen=True)
class PartialPerm:
    """A set of cells using each row and each column at most once."""

    degree: int
    cells: frozenset[Cell]

    def __post_init__(self):
        cells = frozenset(Cell(*c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        n = self.degree
        rows, cols = set(), set()
        for r, c in cells:
            if not (1 <= r <= n and 1 <= c <= n):
                raise InputError(f"cell {r}:{c} outside the {n}x{n} grid")
            if r in rows:
                raise InputError(f"repeated row {r}")
            if c in cols:
                raise InputError(f"repeated column {c}")
            rows.add(r)
            cols.add(c)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "PartialPerm":
        obj = object.__new__(cls)
        object.__setattr__(obj, "degree", n)
        object.__setattr__(obj, "cells", frozenset(cells_of_mask(mask, n)))
        obj.__dict__["mask"] = mask
        return obj

    @classmethod
    def of(cls, n: int, cells: Iterable) -> "PartialPerm":
        return cls(n, frozenset(Cell(*c) for c in cells))

    @cached_property
    def mask(self) -> int:
        m = 0
        for c in self.cells:
            m |= cell_bit(c, self.degree)
        return m

    @cached_property
    def key(self) -> tuple[Cell, ...]:
        return tuple(sorted(self.cells))

    def __len__(self) -> int:
        return len(self.cells)

    def __lt__(self, other: "PartialPerm") -> bool:
        return self.key < other.key

    def issubset(self, other: "PartialPerm") -> bool:
        return self.mask & other.mask == self.mask

    def __str__(self) -> str:
        return " ".join(str(c) for c in self.key)


@dataclass(frozen=True)
class PermFamily:
    """A set of permutations of common degree, stored sorted and deduplicated."""

    degree: int
    members: tuple[Permutation, ...] = ()

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        for p in members:
            if p.degree != self.degree:
                raise InputError(f"member {p} has degree {p.degree}, family degree is {self.degree}")
        object.__setattr__(self, "members", members)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(p.mask for p in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.members)

    @cached_property
    def _member_set(self) -> frozenset:
        return frozenset(self.members)

    def __contains__(self, p) -> bool:
        return p in self._member_set

    def subfamily(self, keep) -> "PermFamily":
        return PermFamily(self.degree, tuple(p for p in self.members if keep(p)))


@dataclass(frozen=True)
class PartialFamily:
    """A set of partial permutations of common degree, canonically ordered."""

    degree: int
    members: tuple[PartialPerm, ...] = ()

    def __post_init__(self):
        members = tuple(sorted(set(self.members), key=lambda s: s.key))
        for s in members:
            if s.degree != self.degree:
                raise InputError(f"member {s} has degree {s.degree}, family degree is {self.degree}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, n: int, sets: Iterable[Iterable]) -> "PartialFamily":
        return cls(n, tuple(PartialPerm.of(n, s) for s in sets))

    @classmethod
    def from_masks(cls, masks: Iterable[int], n: int) -> "PartialFamily":
        return cls(n, tuple(PartialPerm.from_mask(m, n) for m in set(masks)))

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(s.mask for s in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[PartialPerm]:
        return iter(self.members)

    @cached_property
    def _member_set(self) -> frozenset:
        return frozenset(self.members)

    def __contains__(self, s) -> bool:
        return s in self._member_set

    def of_size(self, k: int) -> "PartialFamily":
        return PartialFamily(self.degree, tuple(s for s in self.members if len(s) == k))


@dataclass(frozen=True)
class DiversityReport:
    gamma: int
    argmin_cell: Cell
    codegree_table: dict[Cell, int] = field(compare=False)

    @property
    def minimizing_cells(self) -> list[Cell]:
        top = max(self.codegree_table.values())
        return sorted(c for c, d in self.codegree_table.items() if d == top)


# --- constructions -----------------------------------------------------------


def enumerate_symmetric_group(n: int, max_degree: int | None = None) -> PermFamily:
    _check_degree(n, max_degree)
    return PermFamily(n, tuple(Permutation._trusted(t) for t in itertools.permutations(range(1, n + 1))))


def make_star(n: int, x, max_degree: int | None = None) -> PermFamily:
    """All permutations sending ``x.row`` to ``x.col``; (n-1)! members."""
    _check_degree(n, max_degree)
    row, col = x
    if not (1 <= row <= n and 1 <= col <= n):
        raise InputError(f"cell {row}:{col} outside the {n}x{n} grid")
    rest = [v for v in range(1, n + 1) if v != col]
    members = []
    for tail in itertools.permutations(rest):
        images = tail[: row - 1] + (col,) + tail[row - 1 :]
        members.append(Permutation._trusted(images))
    return PermFamily(n, tuple(members))


def make_triangle_family(n: int, max_degree: int | None = None) -> PermFamily:
    """Permutations fixing at least two of the points 1, 2, 3."""
    _check_degree(n, max_degree, min_degree=3)
    members = []
    for t in itertools.permutations(range(1, n + 1)):
        if (t[0] == 1) + (t[1] == 2) + (t[2] == 3) >= 2:
            members.append(Permutation._trusted(t))
    return PermFamily(n, tuple(members))


def span(B: PartialFamily, n: int, max_degree: int | None = None) -> PermFamily:
    """Permutations of [n] containing at least one member of ``B``."""
    _check_degree(n, max_degree)
    if B.degree != n:
        raise InputError(f"basis degree {B.degree} does not match n={n}")
    masks = B.masks
    if not masks:
        return PermFamily(n)
    members = []
    for t in itertools.permutations(range(1, n + 1)):
        p = Permutation._trusted(t)
        pm = p.mask
        if any(b & pm == b for b in masks):
            members.append(p)
    return PermFamily(n, tuple(members))


def derangement_count(m: int) -> int:
    """D_m via D_m = (m-1)(D_{m-1} + D_{m-2}), D_0 = 1, D_1 = 0."""
    if m < 0:
        raise InputError("m must be non-negative")
    if m == 0:
        return 1
    prev, cur = 1, 0
    for k in range(2, m + 1):
        prev, cur = cur, (k - 1) * (cur + prev)
    return cur


# --- queries -----------------------------------------------------------------


def is_intersecting(F) -> bool:
    """Every pair of members (a member with itself included) shares a cell.

    Works for both permutation and partial families. Large families use one
    bitset per cell listing its holders: a member meets everyone iff the
    union of its cells' holder sets is the whole family.
    """
    masks = F.masks
    if any(m == 0 for m in masks):
        return False
    if len(masks) <= 64:
        return all(a & b for i, a in enumerate(masks) for b in masks[i + 1 :])
    holders: dict[int, int] = {}
    bits_of = []
    for j, m in enumerate(masks):
        bits = []
        while m:
            low = m & -m
            bits.append(low)
            holders[low] = holders.get(low, 0) | (1 << j)
            m ^= low
        bits_of.append(bits)
    full = (1 << len(masks)) - 1
    for bits in bits_of:
        acc = 0
        for b in bits:
            acc |= holders[b]
        if acc != full:
            return False
    return True


def _check_same_degree(F, S: PartialPerm) -> None:
    if S.degree != F.degree:
        raise InputError(f"pattern degree {S.degree} does not match family degree {F.degree}")


def co_degree(F: PermFamily, S: PartialPerm) -> int:
    _check_same_degree(F, S)
    s = S.mask
    return sum(1 for m in F.masks if m & s == s)


def restriction(F: PermFamily, S: PartialPerm) -> PartialFamily:
    """The family F(S) = {P \\ S : S is contained in P}."""
    _check_same_degree(F, S)
    s = S.mask
    return PartialFamily.from_masks((m ^ s for m in F.masks if m & s == s), F.degree)


def avoidance(F: PermFamily, x) -> PermFamily:
    bit = cell_bit(Cell(*x), F.degree)
    return PermFamily(F.degree, tuple(p for p, m in zip(F.members, F.masks) if not m & bit))


def codegree_table(F: PermFamily) -> dict[Cell, int]:
    n = F.degree
    counts = [[0] * (n + 1) for _ in range(n + 1)]
    for p in F.members:
        for i, v in enumerate(p.images, start=1):
            counts[i][v] += 1
    return {Cell(r, c): counts[r][c] for r in range(1, n + 1) for c in range(1, n + 1)}


def diversity(F: PermFamily) -> DiversityReport:
    """Minimum over all n^2 cells of the number of members avoiding the cell.

    Ties on the minimising cell are broken lexicographically by (row, col).
    """
    if len(F) == 0:
        raise InputError("diversity of an empty family is undefined")
    table = codegree_table(F)
    best = max(table.values())
    argmin = min(c for c, d in table.items() if d == best)
    return DiversityReport(len(F) - best, argmin, table)
