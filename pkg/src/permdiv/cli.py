"""Command-line front end.

Exit codes:
    0  success
    2  input error (bad flags, unreadable or malformed family)
    3  hypothesis not met
    4  work budget exceeded
    5  internal invariant failure
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__, config
from .certificates import check_fact22, check_final_chain
from .errors import BudgetExceeded, HypothesisNotMet, InputError, InvariantError
from .family import (
    Cell,
    PermFamily,
    diversity,
    enumerate_symmetric_group,
    is_intersecting,
    make_star,
    make_triangle_family,
)
from .search import exact_max_diversity, local_search_max_diversity, verify_triangle_extremal
from .spread import SpreadParams, decomposition_report, decomposition_violations, spread_decompose
from .stochastic import TrialConfig, disjoint_split_experiment, estimate_cover_probability, verify_spread_lemma
from .sunflower import basis_cascade, compress
from .textio import parse_family, serialize_family

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_HYPOTHESIS = 3
EXIT_BUDGET = 4
EXIT_INVARIANT = 5


def rational(text: str) -> Fraction:
    """Parse "a/b" or an integer; decimal reals are rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        a = int(num)
        b = int(den) if sep else 1
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a rational a/b, got {text!r}") from None
    if b == 0:
        raise argparse.ArgumentTypeError("zero denominator")
    return Fraction(a, b)


def cell(text: str) -> Cell:
    try:
        r, c = text.split(":")
        return Cell(int(r), int(c))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a cell row:col, got {text!r}") from None


def _read_family(path: str, kind: str | None = None):
    if path == "-":
        data = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                data = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_family(data, kind)


def _require_perm(F) -> PermFamily:
    if not isinstance(F, PermFamily):
        raise InputError("this command needs a permutation family (n=<degree> header, one-line notation)")
    return F


# --- commands -----------------------------------------------------------------


def cmd_diversity(args) -> dict:
    F = _require_perm(_read_family(args.input, "perm"))
    rep = diversity(F)
    return {
        "n": F.degree,
        "size": len(F),
        "gamma": rep.gamma,
        "argmin_cell": str(rep.argmin_cell),
        "minimizing_cells": [str(c) for c in rep.minimizing_cells],
        "intersecting": is_intersecting(F),
    }


def cmd_decompose(args) -> dict:
    F = _require_perm(_read_family(args.input, "perm"))
    n = F.degree
    if args.r is None and args.q is None:
        params = SpreadParams.default(n)
    else:
        d = SpreadParams.default(n)
        r = d.r if args.r is None else args.r
        params = SpreadParams.exact(n, r, args.q) if args.q is not None else SpreadParams(n, Fraction(r), d.q_cap, d.q_floor)
    dec = spread_decompose(F, params, args.budget)
    problems = decomposition_violations(F, dec, args.budget)
    if problems:
        raise InvariantError("; ".join(problems))
    return decomposition_report(F, dec, args.budget)


def cmd_compress(args) -> dict:
    H = _read_family(args.input, "partial")
    out = compress(H, args.s, args.budget)
    return {
        "n": H.degree,
        "s": args.s,
        "input_size": len(H),
        "output_size": len(out),
        "input_intersecting": is_intersecting(H),
        "output_intersecting": is_intersecting(out),
        "family": serialize_family(out),
    }


def cmd_cascade(args) -> dict:
    B = _read_family(args.input, "partial")
    res = basis_cascade(B, args.q, args.budget)
    doc = res.to_dict()
    doc["n"] = B.degree
    doc["residue"] = serialize_family(res.residue)
    return doc


def cmd_verify_bounds(args) -> dict:
    reports = []
    for n in args.n:
        if args.claims in ("fact22", "all"):
            reports.append(check_fact22(n))
        if args.claims in ("final", "all"):
            reports.append(check_final_chain(n))
    unmet = [r.n for r in reports if not r.hypothesis_met]
    doc = {
        "verdict": _combined([r.verdict.value for r in reports]),
        "reports": [r.to_dict() for r in reports],
    }
    if unmet:
        raise _WithResult(HypothesisNotMet(f"n must be at least 500, got {sorted(set(unmet))}"), doc)
    return doc


def _combined(verdicts: list[str]) -> str:
    for v in ("refuted", "undecided"):
        if v in verdicts:
            return v
    return "proved"


def cmd_montecarlo(args) -> dict:
    F = _require_perm(_read_family(args.input, "perm"))
    lemma = (args.r, args.delta, args.m)
    if any(v is not None for v in lemma) and args.experiment != "lemma":
        raise InputError("--r, --delta and --m apply only to --experiment lemma")
    cfg = TrialConfig(args.p, args.trials, args.seed, args.workers)
    if args.experiment == "cover":
        rep = estimate_cover_probability(F, cfg)
    elif args.experiment == "split":
        rep = disjoint_split_experiment(F, cfg)
    else:
        if any(v is None for v in lemma):
            raise InputError("--experiment lemma needs --r, --delta and --m")
        rep = verify_spread_lemma(F, args.r, args.delta, args.m, cfg)
    doc = rep.to_dict()
    doc["n"] = F.degree
    doc["family_size"] = len(F)
    return doc


def cmd_search(args) -> dict:
    if args.mode == "exact":
        res = exact_max_diversity(args.n)
    elif args.mode == "heuristic":
        res = local_search_max_diversity(args.n, args.iterations, args.seed)
    else:
        audit = verify_triangle_extremal(args.n)
        if not audit.ok:
            raise InvariantError(f"triangle audit failed at n={args.n}")
        return audit.to_dict()
    doc = res.to_dict()
    doc["family"] = serialize_family(res.best_family)
    return doc


def cmd_gen(args) -> dict:
    n = args.n
    if args.triangle:
        F, what = make_triangle_family(n), "triangle"
    elif args.star is not None:
        F, what = make_star(n, args.star), f"star {args.star.row}:{args.star.col}"
    else:
        F, what = enumerate_symmetric_group(n), "symmetric"
    return {"construction": what, "n": n, "size": len(F), "family": serialize_family(F)}


class _WithResult(Exception):
    """Carries a partial result document alongside the failure."""

    def __init__(self, error: Exception, result: dict):
        super().__init__(str(error))
        self.error = error
        self.result = result


# --- rendering ----------------------------------------------------------------


def _flatten(doc, prefix: str = ""):
    if isinstance(doc, dict):
        for k, v in doc.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(doc, list):
        if not doc:
            yield prefix, "[]"
        for i, v in enumerate(doc):
            yield from _flatten(v, f"{prefix}.{i}")
    else:
        yield prefix, "null" if doc is None else str(doc).lower() if isinstance(doc, bool) else str(doc)


_FAMILY_KEYS = ("result.family", "result.residue")


def render(record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, indent=2, sort_keys=True) + "\n"
    rows = list(_flatten(record))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    # text: metadata as comment lines, so a trailing family stays parseable
    lines = [f"# {k}: {v}" for k, v in rows if k not in _FAMILY_KEYS]
    text = "\n".join(lines) + "\n"
    for k, v in rows:
        if k in _FAMILY_KEYS:
            text += v
    return text


# --- parser -------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--budget", type=_positive, default=None, help="node budget for exponential searches")
    common.add_argument("--workers", type=_positive, default=os.cpu_count() or 1)
    common.add_argument("--output", default="-", help="output path, '-' for stdout")

    parser = argparse.ArgumentParser(prog="permdiv", description="Diversity of intersecting permutation families.")
    parser.add_argument("--version", action="version", version=f"permdiv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diversity", parents=[common], help="diversity of a permutation family")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser("decompose", parents=[common], help="spread decomposition")
    p.add_argument("--input", required=True)
    p.add_argument("--r", type=rational, help="spread parameter a/b (default n/3)")
    p.add_argument("--q", type=rational, help="basis size cap a/b (default 4 log2 n)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("compress", parents=[common], help="pseudo-sunflower compression of a partial family")
    p.add_argument("--input", required=True)
    p.add_argument("--s", type=_positive, required=True, help="uniformity")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("cascade", parents=[common], help="layered basis cascade")
    p.add_argument("--input", required=True)
    p.add_argument("--q", type=_positive, required=True, help="top level q_int")
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("verify-bounds", parents=[common], help="certified numeric inequalities")
    p.add_argument("--n", type=_positive, action="append", required=True)
    p.add_argument("--claims", choices=("fact22", "final", "all"), default="all")
    p.set_defaults(func=cmd_verify_bounds)

    p = sub.add_parser("montecarlo", parents=[common], help="seeded Monte Carlo experiments")
    p.add_argument("--input", required=True)
    p.add_argument("--experiment", choices=("cover", "split", "lemma"), default="cover")
    p.add_argument("--p", type=rational, default=Fraction(1, 2), help="sampling probability a/b (ignored by lemma)")
    p.add_argument("--trials", type=_positive, default=10000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--r", type=rational)
    p.add_argument("--delta", type=rational)
    p.add_argument("--m", type=rational)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("search", parents=[common], help="maximum diversity search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "heuristic", "triangle"), default="exact")
    p.add_argument("--iterations", type=_nonneg, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gen", parents=[common], help="emit a construction in family format")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--triangle", action="store_true")
    g.add_argument("--star", type=cell, metavar="ROW:COL")
    g.add_argument("--symmetric", action="store_true")
    p.set_defaults(func=cmd_gen)
    return parser


def _echo(args) -> dict:
    skip = {"func", "command"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        if isinstance(v, Fraction):
            v = f"{v.numerator}/{v.denominator}"
        elif isinstance(v, Cell):
            v = str(v)
        out[k] = v
    return out


def run(argv: list[str] | None = None) -> tuple[int, dict | None, str | None]:
    """Parse and execute; returns (exit code, run record, error message)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_INPUT), None, None
    if args.budget is None:
        args.budget = config.WORK_BUDGET
    record = {
        "tool": "permdiv",
        "version": __version__,
        "command": args.command,
        "config": _echo(args),
        "seeds": [args.seed] if "seed" in vars(args) else [],
    }
    t0 = time.perf_counter()
    code, error, result = EXIT_OK, None, None
    try:
        result = args.func(args)
    except _WithResult as exc:
        result, error = exc.result, str(exc.error)
        code = _code_for(exc.error)
    except (InputError, HypothesisNotMet, BudgetExceeded, InvariantError) as exc:
        error, code = str(exc), _code_for(exc)
    record["wall_time_s"] = round(time.perf_counter() - t0, 6)
    record["exit_code"] = code
    record["result"] = result
    if error:
        record["error"] = error
    return code, record, error


def _code_for(exc: Exception) -> int:
    if isinstance(exc, InputError):
        return EXIT_INPUT
    if isinstance(exc, HypothesisNotMet):
        return EXIT_HYPOTHESIS
    if isinstance(exc, BudgetExceeded):
        return EXIT_BUDGET
    return EXIT_INVARIANT


def main(argv: list[str] | None = None) -> int:
    code, record, error = run(argv)
    if record is not None:
        fmt, out = record["config"]["format"], record["config"]["output"]
        text = render(record, fmt)
        if out == "-":
            sys.stdout.write(text)
        else:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
    if error:
        print(f"permdiv: error: {error}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
