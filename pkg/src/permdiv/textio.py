"""Line-oriented text format for permutation and partial families.

Permutation family::

    n=3
    1 2 3
    2 1 3

Partial family (one partial permutation per line, ``-`` is the empty set)::

    n=4
    1:1 2:2
    1:1 3:3

Lines starting with ``#`` and blank lines are ignored.
"""

from __future__ import annotations

from .errors import InputError, ParseError
from .family import Cell, PartialFamily, PartialPerm, PermFamily, Permutation

EMPTY_SET = "-"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _parse_header(line: str, lineno: int) -> int:
    value = line[2:].strip()
    if not value.isdigit() or int(value) < 1:
        raise ParseError(f"bad degree header {line!r}", lineno)
    return int(value)


def _parse_cell(tok: str, lineno: int) -> Cell:
    parts = tok.split(":")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError(f"expected row:col, got {tok!r}", lineno)
    return Cell(int(parts[0]), int(parts[1]))


def parse_family(text: str | bytes, kind: str | None = None) -> PermFamily | PartialFamily:
    """Parse either format. ``kind`` ("perm" or "partial") forces the type;
    otherwise it is inferred from the first content line after the header."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = list(_content_lines(text))
    n = None
    if lines and lines[0][1].startswith("n="):
        n = _parse_header(lines[0][1], lines[0][0])
        lines = lines[1:]
    if kind is None:
        kind = "partial" if lines and (":" in lines[0][1] or lines[0][1] == EMPTY_SET) else "perm"
    if kind == "perm":
        return _parse_perm_lines(lines, n)
    if kind == "partial":
        return _parse_partial_lines(lines, n)
    raise InputError(f"unknown family kind {kind!r}")


def _parse_perm_lines(lines, n: int | None) -> PermFamily:
    if n is None:
        raise ParseError("permutation family needs an 'n=<degree>' header", 1)
    seen: dict[Permutation, int] = {}
    for lineno, line in lines:
        toks = line.split()
        if not all(t.isdigit() for t in toks):
            raise ParseError(f"non-integer image in {line!r}", lineno)
        images = tuple(int(t) for t in toks)
        if len(images) != n:
            raise ParseError(f"expected {n} images, got {len(images)}", lineno)
        try:
            p = Permutation(images)
        except InputError as exc:
            raise ParseError(str(exc), lineno) from None
        if p in seen:
            raise ParseError(f"duplicate of line {seen[p]}", lineno)
        seen[p] = lineno
    return PermFamily(n, tuple(seen))


def _parse_partial_lines(lines, n: int | None) -> PartialFamily:
    parsed = []
    for lineno, line in lines:
        cells = [] if line == EMPTY_SET else [_parse_cell(t, lineno) for t in line.split()]
        parsed.append((lineno, cells))
    if n is None:
        n = max((max(c) for _, cells in parsed for c in cells), default=1)
    seen: dict[PartialPerm, int] = {}
    for lineno, cells in parsed:
        if len(set(cells)) != len(cells):
            raise ParseError("repeated cell", lineno)
        try:
            s = PartialPerm.of(n, cells)
        except InputError as exc:
            raise ParseError(str(exc), lineno) from None
        if s in seen:
            raise ParseError(f"duplicate of line {seen[s]}", lineno)
        seen[s] = lineno
    return PartialFamily(n, tuple(seen))


def format_partial(s: PartialPerm) -> str:
    return str(s) if len(s) else EMPTY_SET


def serialize_family(F: PermFamily | PartialFamily) -> str:
    lines = [f"n={F.degree}"]
    if isinstance(F, PermFamily):
        lines.extend(str(p) for p in F.members)
    else:
        lines.extend(format_partial(s) for s in F.members)
    return "\n".join(lines) + "\n"
