"""Certified checks of the numeric inequalities consumed by the diversity bound.

Two claim sets are provided, each parameterised by the degree n >= 500:

``check_fact22``
    entropy and spreadness constants for r = n/3, delta = 1/(2 log2(2n)),
    q = 4 log2 n, and the bound f(x) = r^x (n-x)! <= (n-4)! at the two
    ends of the range q <= x <= n.

``check_final_chain``
    the closing inequality chain: geometric decay of i^i (n-i)!, the
    54 (n-3)! budget, and the (1 - 1/e)(n-2)! term with its derangement
    justification.

Each sub-claim is a ``ClaimResult``; the report verdict is proved only if
every sub-claim is proved, refuted if any is refuted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bounds import (
    ClaimResult,
    RationalEnclosure,
    Verdict,
    certify,
    entropy_enclosure,
    exact_claim,
    exp2_enclosure,
    factorial,
    frac_str,
    inv_euler_enclosure,
    log2_enclosure,
    q_enclosure,
    q_floor,
)
from .family import derangement_count

MIN_N = 500
H_CAP = Fraction(288, 1000)


@dataclass
class CertificateReport:
    claim_set: str
    n: int
    verdict: Verdict
    claims: list[ClaimResult] = field(default_factory=list)
    note: str = ""
    extras: dict = field(default_factory=dict)

    def claim(self, claim_id: str) -> ClaimResult:
        for c in self.claims:
            if c.claim_id == claim_id:
                return c
        raise KeyError(claim_id)

    @property
    def hypothesis_met(self) -> bool:
        return self.n >= MIN_N

    @property
    def max_precision(self) -> int:
        return max((c.precision for c in self.claims), default=0)

    def to_dict(self) -> dict:
        d = {
            "claim_set": self.claim_set,
            "n": self.n,
            "verdict": self.verdict.value,
            "hypothesis_met": self.hypothesis_met,
            "precision": self.max_precision,
            "claims": [c.to_dict() for c in self.claims],
        }
        if self.note:
            d["note"] = self.note
        if self.extras:
            d["extras"] = self.extras
        return d


def _overall(claims: list[ClaimResult]) -> Verdict:
    verdicts = {c.verdict for c in claims}
    if Verdict.REFUTED in verdicts:
        return Verdict.REFUTED
    if Verdict.UNDECIDED in verdicts:
        return Verdict.UNDECIDED
    return Verdict.PROVED


def _guard(claim_set: str, n: int) -> CertificateReport | None:
    if n < MIN_N:
        return CertificateReport(
            claim_set, n, Verdict.UNDECIDED, note=f"hypothesis not met: requires n >= {MIN_N}, got n = {n}"
        )
    return None


def delta_enclosure(n: int, precision: int) -> RationalEnclosure:
    """delta = 1 / (2 log2(2n)), rounded outward to keep denominators small."""
    L = log2_enclosure(2 * n, precision + 8)
    return (1 / (L * 2)).rounded(precision + 16)


def _entropy_at(n: int, precision: int) -> RationalEnclosure:
    return entropy_enclosure(delta_enclosure(n, precision), precision + 4)


def _ceil_q(n: int) -> int:
    """Smallest integer x with x >= q = 4 log2 n."""
    fl = q_floor(n)
    q = q_enclosure(n, 64)
    return fl if q.is_point else fl + 1


# --- parameter constants -----------------------------------------------------


def check_fact22(n: int) -> CertificateReport:
    guarded = _guard("fact22", n)
    if guarded is not None:
        return guarded
    r = Fraction(n, 3)
    claims: list[ClaimResult] = []

    claims.append(
        certify("fact22.a", "H(delta) <= 0.288", lambda p: (_entropy_at(n, p), H_CAP), "<=")
    )

    def rhs_b(p):
        H = _entropy_at(n, p)
        delta = delta_enclosure(n, p)
        return exp2_enclosure((H + 1) * 2, p + 8) / delta

    claims.append(certify("fact22.b", "r >= 2^(2(1+H(delta)))/delta", lambda p: (rhs_b(p), r), "<="))

    claims.append(_ratio_identity(n))

    x = _ceil_q(n)
    fx_num = n**x * factorial(n - x)  # f(x) = fx_num / 3^x
    claims.append(
        certify("fact22.d.link1", "2n/3 <= n - q", lambda p: (Fraction(2 * n, 3), n - q_enclosure(n, p)), "<=")
    )
    claims.append(
        exact_claim(
            "fact22.d.link2",
            f"f({x}) <= 2^-{x} n!",
            fx_num * 2**x,
            3**x * factorial(n),
            "<=",
        )
    )
    claims.append(exact_claim("fact22.d.link3", f"2^-{x} <= n^-4 (x = {x} >= q)", n**4, 2**x, "<="))
    claims.append(exact_claim("fact22.d.link4", "n^-4 n! <= (n-4)!", factorial(n), n**4 * factorial(n - 4), "<="))
    claims.append(
        exact_claim("fact22.d", f"f({x}) <= (n-4)!", fx_num, 3**x * factorial(n - 4), "<=")
    )
    claims.append(
        exact_claim("fact22.e.link1", "f(n) = (n/3)^n <= n^-4 n!", n**n * n**4, 3**n * factorial(n), "<=")
    )
    claims.append(exact_claim("fact22.e", "f(n) <= (n-4)!", n**n, 3**n * factorial(n - 4), "<="))

    return CertificateReport(
        "fact22",
        n,
        _overall(claims),
        claims,
        note="f(x) at real q is certified at the least integer x >= q; |B| is always an integer",
        extras={"x_ceil_q": x, "r": frac_str(r)},
    )


def _ratio_identity(n: int) -> ClaimResult:
    """f(i+1)/f(i) = n/(3(n-i)) with f(i) = (n/3)^i (n-i)!.

    Checked with full big-integer values of f at both ends of the range, at the
    turning point 2n/3 and around ceil(q); the resulting sign pattern of
    ratio - 1 (decreasing below 2n/3, increasing from 2n/3) is checked for
    every integer i from the closed form.
    """
    x = _ceil_q(n)
    turn = (2 * n) // 3
    sample = sorted({0, 1, x - 1, x, x + 1, turn - 1, turn, turn + 1, n - 2, n - 1} & set(range(n)))
    ok = True
    for i in sample:
        # with g(i) = 3^i f(i) = n^i (n-i)!, the identity reads g(i+1)(n-i) = n g(i)
        g_next = n ** (i + 1) * factorial(n - i - 1)
        g_here = n**i * factorial(n - i)
        if g_next * (n - i) != n * g_here:
            ok = False
    for i in range(n):
        ratio = Fraction(n, 3 * (n - i))
        if (ratio < 1) != (3 * i < 2 * n):
            ok = False
    return ClaimResult(
        "fact22.c",
        "f(i+1)/f(i) = n/(3(n-i)); f decreases for i < 2n/3, increases after",
        Verdict.PROVED if ok else Verdict.REFUTED,
        0,
        method="exact",
        note=f"identity evaluated at i in {sample}; monotonicity pattern at all 0 <= i < n",
    )


# --- closing chain ------------------------------------------------------------


def _one_minus_inv_e(p: int) -> RationalEnclosure:
    return 1 - inv_euler_enclosure(p)


def sum_ipow_direct(n: int) -> int:
    """Exact sum_{3 <= i <= floor(q)} i^i (n-i)!."""
    return sum(i**i * factorial(n - i) for i in range(3, q_floor(n) + 1))


def check_final_chain(n: int) -> CertificateReport:
    guarded = _guard("final_chain", n)
    if guarded is not None:
        return guarded
    claims: list[ClaimResult] = []
    qf = q_floor(n)
    f3 = factorial(n - 3)
    f4 = factorial(n - 4)
    f2 = factorial(n - 2)

    def sides_a(p):
        q = q_enclosure(n, p)
        e = inv_euler_enclosure(p).reciprocal()
        return e * (q + 1) / (n - q), Fraction(1, 2)

    a = certify("final.a", "e(q+1)/(n-q) <= 1/2", sides_a, "<=")
    claims.append(a)

    # (b) by the ratio argument: every consecutive ratio (i+1)^(i+1)/(i^i (n-i))
    # is at most 1/2, so the sum is below twice its first term 27 (n-3)!.
    ratios_ok = all(2 * (i + 1) ** (i + 1) <= i**i * (n - i) for i in range(3, qf))
    ratio_verdict = Verdict.PROVED if (ratios_ok and a.verdict is Verdict.PROVED) else (
        Verdict.REFUTED if not ratios_ok else a.verdict
    )
    claims.append(
        ClaimResult(
            "final.b.ratio",
            "sum_{3<=i<=q} i^i (n-i)! <= 54 (n-3)! by ratio <= 1/2",
            ratio_verdict,
            a.precision,
            method="exact",
            note=f"consecutive ratios checked exactly for 3 <= i < {qf}; bound e(q+1)/(n-q) <= 1/2 from final.a",
        )
    )
    direct = sum_ipow_direct(n)
    b_direct = exact_claim("final.b.direct", "sum_{3<=i<=q} i^i (n-i)! <= 54 (n-3)! by summation", direct, 54 * f3, "<=")
    claims.append(b_direct)

    claims.append(exact_claim("final.c", "54 (n-3)! + (n-4)! < (n-3)(n-3)!", 54 * f3 + f4, (n - 3) * f3, "<"))

    claims.append(
        certify(
            "final.d",
            "(1-1/e)(n-2)! + 54 (n-3)! + (n-4)! < (n-3)(n-3)!",
            lambda p: (_one_minus_inv_e(p) * f2 + (54 * f3 + f4), (n - 3) * f3),
            "<",
        )
    )
    claims.append(
        certify(
            "final.e",
            "(1-1/e)(n-2) + 55 < n-3",
            lambda p: (_one_minus_inv_e(p) * (n - 2) + 55, n - 3),
            "<",
        )
    )
    m = n - 2
    claims.append(derangement_complement_claim(m))
    # What the bound actually consumes: |D_m - m!/e| < 1/2 leaves an additive
    # slack of 1/2 on (f), which the margin of (d) absorbs.
    claims.append(derangement_complement_claim(m, slack=Fraction(1, 2)))
    claims.append(
        certify(
            "final.d_slack",
            "(1-1/e)(n-2)! + 1/2 + 54 (n-3)! + (n-4)! < (n-3)(n-3)!",
            lambda p: (_one_minus_inv_e(p) * f2 + (54 * f3 + f4) + Fraction(1, 2), (n - 3) * f3),
            "<",
        )
    )

    b_agree = ratio_verdict == b_direct.verdict
    literal = [c for c in claims if c.claim_id not in ("final.f_slack", "final.d_slack")]
    needed = [c for c in claims if c.claim_id not in ("final.f", "final.d")]
    return CertificateReport(
        "final_chain",
        n,
        _overall(literal),
        claims,
        extras={
            "q_floor": qf,
            "b_routes_agree": b_agree,
            "chain_closes": _overall(needed).value,
        },
    )


def derangement_complement_claim(m: int, slack: Fraction = Fraction(0)) -> ClaimResult:
    """m! - D_m <= (1 - 1/e) m! + slack.

    Equivalent to D_m >= m!/e - slack. For m <= 20 the enclosure of 1/e
    decides it directly. Beyond that the certified width needed grows like
    log2(m!), so the decision uses the alternating-series identity
    m!/e - D_m = m! sum_{k>m} (-1)^k / k!, whose sign is (-1)^(m+1) and whose
    magnitude lies strictly between 1/(m+2) and 1/(m+1).
    """
    cid = "final.f" if slack == 0 else "final.f_slack"
    stmt = "(n-2)! - D_(n-2) <= (1-1/e)(n-2)!" + ("" if slack == 0 else f" + {frac_str(slack)}")
    D = derangement_count(m)
    fm = factorial(m)
    if m <= 20:
        return certify(
            cid,
            stmt,
            lambda p: (fm - D, _one_minus_inv_e(p + fm.bit_length()) * fm + slack),
            "<=",
        )
    # gap = m!/e - D_m; claim holds iff gap <= slack
    if m % 2 == 1:
        gap = RationalEnclosure(Fraction(1, m + 2), Fraction(1, m + 1))
    else:
        gap = RationalEnclosure(-Fraction(1, m + 1), -Fraction(1, m + 2))
    res = ClaimResult(cid, stmt, Verdict.UNDECIDED, 0, gap, RationalEnclosure.point(slack), method="alternating-tail")
    if gap.hi <= slack:
        res.verdict = Verdict.PROVED
    elif gap.lo > slack:
        res.verdict = Verdict.REFUTED
    res.note = f"m = {m}; m!/e - D_m has sign (-1)^(m+1)"
    return res
