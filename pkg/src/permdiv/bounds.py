"""Exact-rational enclosures and certified verdicts for real inequalities.

Every transcendental quantity is carried as a ``RationalEnclosure`` whose
endpoints are ``Fraction`` objects. Comparisons are only reported as proved
or refuted when the enclosures of the two sides are separated; otherwise
the precision is doubled up to ``config.PRECISION_CAP`` and the verdict is
left undecided.

Algorithms (fixed so verdicts are reproducible):

* log2: reduce to y in [1, 2) by an exact power of two, then extract bits
  by repeated squaring on two fixed-point chains, one rounded down (lower
  bound) and one rounded up (upper bound).
* e: partial sums of 1/k! with tail bound 2/(N+1)!.
* 2**t: split off floor(t), evaluate exp(f * ln 2) by Taylor series with
  outward-rounded fixed-point terms; ln 2 = sum 1/(k 2^k).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

from . import config
from .errors import InputError

Number = Union[int, Fraction]


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class RationalEnclosure:
    """Closed interval [lo, hi] with rational endpoints containing a real."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: Number) -> "RationalEnclosure":
        return cls(Fraction(x), Fraction(x))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def intersect(self, other: "RationalEnclosure") -> "RationalEnclosure":
        return RationalEnclosure(max(self.lo, other.lo), min(self.hi, other.hi))

    def rounded(self, bits: int) -> "RationalEnclosure":
        """Outward rounding of both endpoints to multiples of 2**-bits."""
        s = 1 << bits
        lo = Fraction(_floor_div(self.lo.numerator * s, self.lo.denominator), s)
        hi = Fraction(_ceil_div(self.hi.numerator * s, self.hi.denominator), s)
        return RationalEnclosure(lo, hi)

    @staticmethod
    def _lift(x) -> "RationalEnclosure":
        return x if isinstance(x, RationalEnclosure) else RationalEnclosure.point(x)

    def __add__(self, other):
        o = self._lift(other)
        return RationalEnclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalEnclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RationalEnclosure(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalEnclosure":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("enclosure contains zero")
        return RationalEnclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __str__(self) -> str:
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"

    def to_dict(self) -> dict:
        return {"lo": frac_str(self.lo), "hi": frac_str(self.hi)}


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _as_enclosure(x) -> RationalEnclosure:
    return x if isinstance(x, RationalEnclosure) else RationalEnclosure.point(Fraction(x))


# --- factorials -------------------------------------------------------------


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    # lru_cache is safe under threads; at worst a value is computed twice.
    return math.factorial(n)


# --- elementary functions ---------------------------------------------------


def _split_pow2(x: Fraction) -> tuple[int, Fraction]:
    """Return k, y with x = 2**k * y and 1 <= y < 2."""
    k = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / (Fraction(2) ** k)
    if y < 1:
        k -= 1
        y *= 2
    elif y >= 2:
        k += 1
        y /= 2
    return k, y


def _log2_rational(x: Fraction, precision: int) -> RationalEnclosure:
    k, y = _split_pow2(x)
    if y == 1:
        return RationalEnclosure.point(k)
    nbits = precision + 2
    W = precision + 12
    one = 1 << W
    two = one << 1
    zl = _floor_div(y.numerator << W, y.denominator)
    zh = _ceil_div(y.numerator << W, y.denominator)
    bl = bh = 0
    for _ in range(nbits):
        zl = (zl * zl) >> W
        zh = _ceil_div(zh * zh, one)
        bl <<= 1
        bh <<= 1
        if zl >= two:
            bl |= 1
            zl >>= 1
        if zh >= two:
            bh |= 1
            zh = _ceil_div(zh, 2)
    scale = 1 << nbits
    lo = k + Fraction(bl, scale)
    hi = k + Fraction(bh + (1 if zh > one else 0), scale)
    return RationalEnclosure(lo, hi)


def log2_enclosure(x, precision: int = 64) -> RationalEnclosure:
    """Enclose log2(x) with width at most 2**-precision.

    ``x`` may be a positive rational or a positive enclosure (log2 is
    increasing, so the endpoints are treated separately)."""
    if isinstance(x, RationalEnclosure):
        if x.lo <= 0:
            raise InputError("log2 of a non-positive quantity")
        if x.is_point:
            return _log2_rational(x.lo, precision)
        return RationalEnclosure(_log2_rational(x.lo, precision).lo, _log2_rational(x.hi, precision).hi)
    x = Fraction(x)
    if x <= 0:
        raise InputError(f"log2 undefined for {x}")
    return _log2_rational(x, precision)


def _entropy_rational(d: Fraction, precision: int) -> RationalEnclosure:
    a = log2_enclosure(1 / d, precision + 1)
    b = log2_enclosure(1 / (1 - d), precision + 1)
    return a * d + b * (1 - d)


def entropy_enclosure(delta, precision: int = 64) -> RationalEnclosure:
    """Binary entropy H(delta) = -delta log2 delta - (1-delta) log2(1-delta).

    An enclosure argument must lie within (0, 1/2], where H is increasing."""
    if isinstance(delta, RationalEnclosure):
        if delta.is_point:
            return entropy_enclosure(delta.lo, precision)
        if not (0 < delta.lo and delta.hi <= Fraction(1, 2)):
            raise InputError("entropy of an enclosure requires it to lie in (0, 1/2]")
        return RationalEnclosure(
            _entropy_rational(delta.lo, precision).lo, _entropy_rational(delta.hi, precision).hi
        )
    d = Fraction(delta)
    if not 0 < d < 1:
        raise InputError(f"entropy argument {d} outside (0, 1)")
    return _entropy_rational(d, precision)


@lru_cache(maxsize=64)
def euler_enclosure(precision: int = 64) -> RationalEnclosure:
    """e from sum_{k<=N} 1/k! plus the tail bound 2/(N+1)!."""
    target = Fraction(1, 1 << precision)
    N = 1
    while Fraction(2, factorial(N + 1)) > target:
        N += 1
    s = Fraction(0)
    for k in range(N + 1):
        s += Fraction(1, factorial(k))
    return RationalEnclosure(s, s + Fraction(2, factorial(N + 1)))


def inv_euler_enclosure(precision: int = 64) -> RationalEnclosure:
    return euler_enclosure(precision).reciprocal()


@lru_cache(maxsize=64)
def ln2_enclosure(precision: int = 64) -> RationalEnclosure:
    """ln 2 = sum_{k>=1} 1/(k 2^k); tail after N terms is below 1/((N+1) 2^N)."""
    N = precision + 1
    s = Fraction(0)
    for k in range(1, N + 1):
        s += Fraction(1, k << k)
    return RationalEnclosure(s, s + Fraction(1, (N + 1) << N))


def _exp_fixed(u: Fraction, W: int, upper: bool) -> Fraction:
    """Lower or upper bound on exp(u) for 0 <= u < 1 with W-bit fixed point."""
    one = 1 << W
    if upper:
        uf = _ceil_div(u.numerator << W, u.denominator)
    else:
        uf = _floor_div(u.numerator << W, u.denominator)
    total = term = one
    k = 0
    while term:
        k += 1
        if upper:
            term = _ceil_div(term * uf, one * k)
        else:
            term = (term * uf) // (one * k)
        total += term
        if upper and term <= 1:
            # remaining tail is at most 2 * term_k * u/(k+1) < 2 units
            total += 2
            break
    return Fraction(total, one)


def _exp2_rational(t: Fraction, precision: int) -> RationalEnclosure:
    k = math.floor(t)
    f = t - k
    scale = Fraction(2) ** k
    if f == 0:
        return RationalEnclosure.point(scale)
    W = precision + 16
    ln2 = ln2_enclosure(W)
    lo = _exp_fixed(f * ln2.lo, W, upper=False)
    hi = _exp_fixed(f * ln2.hi, W, upper=True)
    return RationalEnclosure(lo * scale, hi * scale)


def exp2_enclosure(x, precision: int = 64) -> RationalEnclosure:
    """Enclose 2**x for a rational or an enclosure (2**x is increasing)."""
    if isinstance(x, RationalEnclosure):
        if x.is_point:
            return _exp2_rational(x.lo, precision)
        x = x.rounded(precision + 16)
        return RationalEnclosure(_exp2_rational(x.lo, precision).lo, _exp2_rational(x.hi, precision).hi)
    return _exp2_rational(Fraction(x), precision)


def power_enclosure(base: RationalEnclosure, exponent: Fraction, precision: int = 64) -> RationalEnclosure:
    """base**exponent for a positive base enclosure and rational exponent."""
    exponent = Fraction(exponent)
    if exponent.denominator == 1 and exponent >= 0:
        e = int(exponent)
        return RationalEnclosure(base.lo**e, base.hi**e) if base.lo >= 0 else _int_pow(base, e)
    if base.lo <= 0:
        raise InputError("non-integer power of a non-positive base")
    lg = log2_enclosure(base.rounded(precision + 16), precision + 8) * exponent
    return exp2_enclosure(lg, precision)


def _int_pow(base: RationalEnclosure, e: int) -> RationalEnclosure:
    out = RationalEnclosure.point(1)
    for _ in range(e):
        out = out * base
    return out


def sqrt_enclosure(x: Fraction, precision: int = 64) -> RationalEnclosure:
    x = Fraction(x)
    if x < 0:
        raise InputError("sqrt of a negative number")
    W = precision + 2
    scaled = _floor_div(x.numerator << (2 * W), x.denominator)
    r = math.isqrt(scaled)
    lo = Fraction(r, 1 << W)
    if lo * lo == x:
        return RationalEnclosure.point(lo)
    return RationalEnclosure(lo, Fraction(r + 1, 1 << W))


# --- certified decisions ----------------------------------------------------


class Verdict(str, enum.Enum):
    PROVED = "proved"
    REFUTED = "refuted"
    UNDECIDED = "undecided"


def _separate(lhs: RationalEnclosure, rhs: RationalEnclosure, relation: str) -> Verdict:
    if relation == "<":
        if lhs.hi < rhs.lo:
            return Verdict.PROVED
        if lhs.lo >= rhs.hi:
            return Verdict.REFUTED
    elif relation == "<=":
        if lhs.hi <= rhs.lo:
            return Verdict.PROVED
        if lhs.lo > rhs.hi:
            return Verdict.REFUTED
    elif relation == "==":
        if lhs.is_point and rhs.is_point:
            return Verdict.PROVED if lhs.lo == rhs.lo else Verdict.REFUTED
        if lhs.hi < rhs.lo or rhs.hi < lhs.lo:
            return Verdict.REFUTED
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return Verdict.UNDECIDED


@dataclass
class ClaimResult:
    claim_id: str
    statement: str
    verdict: Verdict
    precision: int
    lhs: RationalEnclosure | None = None
    rhs: RationalEnclosure | None = None
    method: str = "enclosure"
    note: str = ""

    @property
    def width(self) -> Fraction | None:
        if self.lhs is None or self.rhs is None:
            return None
        return max(self.lhs.width, self.rhs.width)

    def to_dict(self) -> dict:
        d = {
            "claim": self.claim_id,
            "statement": self.statement,
            "verdict": self.verdict.value,
            "precision": self.precision,
            "method": self.method,
        }
        if self.lhs is not None:
            d["lhs"] = self.lhs.to_dict()
        if self.rhs is not None:
            d["rhs"] = self.rhs.to_dict()
        if self.verdict is Verdict.UNDECIDED and self.width is not None:
            d["width"] = frac_str(self.width)
        if self.note:
            d["note"] = self.note
        return d


Sides = Callable[[int], "tuple[RationalEnclosure | Number, RationalEnclosure | Number]"]


def certify(
    claim_id: str,
    statement: str,
    sides: Sides,
    relation: str,
    start: int | None = None,
    cap: int | None = None,
) -> ClaimResult:
    """Decide ``lhs <relation> rhs`` where ``sides(precision)`` returns both sides.

    Precision doubles from ``start`` until the sides separate or ``cap`` is hit."""
    prec = config.START_PRECISION if start is None else start
    cap = config.PRECISION_CAP if cap is None else cap
    while True:
        lhs, rhs = (_as_enclosure(v) for v in sides(prec))
        verdict = _separate(lhs, rhs, relation)
        exact = lhs.is_point and rhs.is_point
        if verdict is not Verdict.UNDECIDED or exact or prec >= cap:
            method = "exact" if exact else "enclosure"
            return ClaimResult(claim_id, statement, verdict, prec, lhs, rhs, method)
        prec = min(2 * prec, cap)


def exact_claim(claim_id: str, statement: str, lhs: Number, rhs: Number, relation: str) -> ClaimResult:
    return certify(claim_id, statement, lambda _p: (lhs, rhs), relation)


class Undecided(Exception):
    pass


def certified_floor(quantity: Callable[[int], RationalEnclosure], start: int | None = None, cap: int | None = None) -> int:
    """floor() of a real given by enclosures, refining until both endpoints agree."""
    prec = config.START_PRECISION if start is None else start
    cap = config.PRECISION_CAP if cap is None else cap
    while True:
        enc = quantity(prec)
        lo, hi = math.floor(enc.lo), math.floor(enc.hi)
        if lo == hi:
            return lo
        if prec >= cap:
            raise Undecided(f"floor undecided at {prec} bits: {enc}")
        prec = min(2 * prec, cap)


def q_enclosure(n: int, precision: int = 64) -> RationalEnclosure:
    """q = 4 log2 n."""
    return log2_enclosure(n, precision + 2) * 4


def q_floor(n: int) -> int:
    return certified_floor(lambda p: q_enclosure(n, p))


def derangement_floor(m: int, start: int | None = None, cap: int | None = None) -> int:
    """floor((m! + 1)/e), decided by an enclosure of 1/e."""
    fm = factorial(m) + 1
    return certified_floor(lambda p: inv_euler_enclosure(p + fm.bit_length()) * fm, start, cap)


# --- spread lemma -------------------------------------------------------------


@dataclass(frozen=True)
class SpreadLemmaBound:
    """Enclosure of 1 - ((1 + H(delta)) / log2(r delta))^m * k.

    ``enclosure`` is None when r*delta <= 1 (the logarithm is not positive
    and the bound has no meaning)."""

    enclosure: RationalEnclosure | None
    vacuous: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "enclosure": None if self.enclosure is None else self.enclosure.to_dict(),
            "vacuous": self.vacuous,
            "note": self.note,
        }


def spread_lemma_bound(r, delta, m, k: int, precision: int = 64) -> SpreadLemmaBound:
    r, delta, m = Fraction(r), Fraction(delta), Fraction(m)
    if not 0 < delta < 1:
        raise InputError(f"delta {delta} outside (0, 1)")
    if r <= 0 or m <= 0:
        raise InputError("r and m must be positive")
    if k == 0:
        return SpreadLemmaBound(RationalEnclosure.point(1), False, "k = 0")
    rd = r * delta
    if rd <= 1:
        return SpreadLemmaBound(None, True, "r*delta <= 1: log2(r*delta) is not positive")
    W = precision + 16
    H = entropy_enclosure(delta, W)
    L = log2_enclosure(rd, W)
    base = ((H + 1) / L).rounded(W)
    value = 1 - power_enclosure(base, m, W) * k
    vacuous = rd <= 2 or value.hi <= 0
    note = "r*delta <= 2" if rd <= 2 else ("bound is not positive" if value.hi <= 0 else "")
    return SpreadLemmaBound(value, vacuous, note)
