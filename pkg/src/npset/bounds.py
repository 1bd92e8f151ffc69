"""Exact evaluation of the counting bounds and sufficient conditions.

Every comparison of the shape A <= C*sqrt(q) is settled with integers:
signs first, then squaring.  No verdict ever touches a float.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .gfq import FieldSpec, count_system_solutions
from .members import is_trivial_member
from .numth import mult_order

FORMS = ("thm-sequence", "eq-lower", "thm-n-large-strong", "thm-n-large-weak",
         "cor-n-large", "cor-k-large", "lemma-system", "eq-weak")


def le_sqrt(a: int, c: int, q: int) -> bool:
    """a <= c * sqrt(q), exactly."""
    if c >= 0:
        return a <= 0 or a * a <= c * c * q
    return a < 0 and a * a >= c * c * q


def gt_sqrt(a: int, c: int, q: int) -> bool:
    return not le_sqrt(a, c, q)


def sign_sqrt_sum(a: int, b: int, q: int) -> int:
    """Sign of a + b*sqrt(q)."""
    if b == 0 or q == 0:
        return (a > 0) - (a < 0)
    if a >= 0 and b >= 0:
        return 1 if a or b else 0
    if a <= 0 and b <= 0:
        return -1
    lhs, rhs = a * a, b * b * q
    if lhs == rhs:
        return 0
    big_a = lhs > rhs
    return (1 if a > 0 else -1) if big_a else (1 if b > 0 else -1)


@dataclass
class BoundReport:
    """lhs_int <= rhs_coeff*sqrt(q) (or > for the sufficiency forms)."""

    form: str
    context: dict
    lhs_int: int
    rhs_coeff: int
    verdict: bool
    equality: bool
    applicable: bool = True
    extra: dict = field(default_factory=dict)

    @property
    def q(self) -> int:
        return self.context["q"]

    def approx(self) -> tuple[float, float]:
        return float(self.lhs_int), self.rhs_coeff * math.sqrt(self.q)

    def to_dict(self) -> dict:
        out = asdict(self)
        lhs, rhs = self.approx()
        out["lhs_approx"] = lhs
        out["rhs_approx"] = rhs
        return out


def _is_power_of(p: int, q: int) -> bool:
    while q > 1 and q % p == 0:
        q //= p
    return q == 1


def _exact_log(p: int, q: int) -> int:
    k = 0
    while q > 1:
        q //= p
        k += 1
    return k


def _check_d(q: int, d: int) -> None:
    if d < 1 or (q - 1) % d:
        raise ValueError(f"d = {d} does not divide q - 1 = {q - 1}")


def _check_n(p: int, q: int, n: int) -> None:
    if not _is_power_of(p, q) or q < p:
        raise ValueError(f"q = {q} is not a power of p = {p}")
    if n < 1 or (q - 1) % n:
        raise ValueError(f"n = {n} does not divide q - 1 = {q - 1}")


def _upper(form, ctx, a, c, q) -> BoundReport:
    a = abs(a)
    return BoundReport(form, ctx, a, c, le_sqrt(a, c, q), a * a == c * c * q)


def sequence_bound_holds(q: int, d: int, r: int, m: int, m0: int) -> BoundReport:
    """|M + (M0+1)/d - (q+1)/d^r| <= (r - 1 - (r+1)/d + 2/d^r) sqrt(q), times d^r."""
    _check_d(q, d)
    if r < 1:
        raise ValueError("r must be >= 1")
    a = d**r * m + d ** (r - 1) * (m0 + 1) - (q + 1)
    c = (r - 1) * d**r - (r + 1) * d ** (r - 1) + 2
    return _upper("thm-sequence", {"q": q, "d": d, "r": r, "M": m, "M0": m0}, a, c, q)


@dataclass
class LowerBound:
    """value = rational + sqrt_coeff * sqrt(q)."""

    p: int
    q: int
    d: int
    m0: int
    rational: Fraction
    sqrt_coeff: Fraction
    approx: float
    sign: int

    @property
    def positive(self) -> bool:
        return self.sign > 0


def eq_lower_value(p: int, q: int, d: int, m0: int) -> LowerBound:
    """(q+1)/d^p - (M0+1)/d - (p - 1 - (p+1)/d + 2/d^p) sqrt(q)."""
    _check_d(q, d)
    rat = Fraction(q + 1, d**p) - Fraction(m0 + 1, d)
    coeff = -(p - 1 - Fraction(p + 1, d) + Fraction(2, d**p))
    den = rat.denominator * coeff.denominator
    sign = sign_sqrt_sum(int(rat * den), int(coeff * den), q)
    approx = float(rat) + float(coeff) * math.sqrt(q)
    return LowerBound(p, q, d, m0, rat, coeff, approx, sign)


def thm_n_large_holds(p: int, q: int, n: int) -> tuple[BoundReport, BoundReport]:
    """Strong and weak sufficient conditions for n in N_p.

    strong: q + 1 - (p+1) d^(p-1) > ((pd - p - d - 1) d^(p-1) + 2) sqrt(q)
    weak:   q + 1 - d^(p-1)       > (same) sqrt(q), valid only if (p-1) does not divide n
    """
    _check_n(p, q, n)
    d = (q - 1) // n
    c = (p * d - p - d - 1) * d ** (p - 1) + 2
    # pd - p - d - 1 = (p-1)(d-1) - 2 is negative only when (p-1)(d-1) <= 1,
    # and then c = 2 - 2 d^(p-1) = 0 (d = 1) or c = 2 - 2 = 0 (p = d = 2)
    assert c >= 0
    ctx = {"p": p, "q": q, "n": n, "d": d}
    reports = []
    for form, a in (("thm-n-large-strong", q + 1 - (p + 1) * d ** (p - 1)),
                    ("thm-n-large-weak", q + 1 - d ** (p - 1))):
        reports.append(BoundReport(form, dict(ctx), a, c, gt_sqrt(a, c, q),
                                   a * a == c * c * q and a >= 0))
    reports[1].applicable = n % (p - 1) != 0
    return reports[0], reports[1]


def cor_n_large_holds(p: int, q: int, n: int) -> bool:
    """n >= (p-1)^(1/p) (q-1)^(1 - 1/(2p)), as n^(2p) >= (p-1)^2 (q-1)^(2p-1)."""
    _check_n(p, q, n)
    if q == 2:
        # n = d = 1: the inequality holds but 1 is not a member; the
        # p - 1 = d = 1 escape only covers q >= 4 where n = q - 1 is trivial
        return False
    return n ** (2 * p) >= (p - 1) ** 2 * (q - 1) ** (2 * p - 1)


def cor_k_large_holds(p: int, d: int, k: int) -> bool:
    """k >= 2 + 2p log d / log p, as p^(k-2) >= d^(2p)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if d < 1 or math.gcd(d, p) != 1:
        raise ValueError(f"d = {d} must be positive and prime to p")
    if k < 2:
        return False
    return p ** (k - 2) >= d ** (2 * p)


def k_admissible(p: int, d: int, k: int) -> bool:
    """Whether k is a multiple of the order of p mod d (so d | p^k - 1)."""
    return k % mult_order(p, d) == 0


def genus_complete_intersection(d: int, r: int) -> int:
    """Genus from 2g - 2 = (rd - r - d - 1) d^(r-1)."""
    if d < 1 or r < 2:
        raise ValueError("need d >= 1 and r >= 2")
    two_g = (r * d - r - d - 1) * d ** (r - 1) + 2
    if two_g < 0 or two_g % 2:
        raise ValueError(f"(d, r) = ({d}, {r}) gives no curve genus")
    return two_g // 2


def lemma_system_check(spec: FieldSpec, d: int, r: int, n_count: int | None = None) -> BoundReport:
    """|N + d^(r-1) - q - 1| <= ((rd - r - d - 1) d^(r-1) + 2) sqrt(q)."""
    q = spec.q
    if n_count is None:
        n_count = count_system_solutions(spec, d, r)
    c = (r * d - r - d - 1) * d ** (r - 1) + 2
    rep = _upper("lemma-system", {"q": q, "d": d, "r": r, "N": n_count},
                 n_count + d ** (r - 1) - q - 1, c, q)
    if r >= 2:
        rep.extra["genus"] = genus_complete_intersection(d, r)
        rep.extra["genus_match"] = 2 * rep.extra["genus"] == c
    return rep


def eq_weak_check(spec: FieldSpec, d: int, r: int, n_count: int | None = None) -> BoundReport:
    """|N - q| <= ((dr - r - d) d^(r-1) + 1) sqrt(q)."""
    q = spec.q
    if n_count is None:
        n_count = count_system_solutions(spec, d, r)
    c = (d * r - r - d) * d ** (r - 1) + 1
    return _upper("eq-weak", {"q": q, "d": d, "r": r, "N": n_count}, n_count - q, c, q)


@dataclass
class Prediction:
    p: int
    n: int
    k: int
    q: int
    d: int
    trivial: bool
    cor_n_large: bool
    thm_strong: bool
    thm_weak: bool
    thm_weak_applicable: bool
    any_sufficient: bool

    def to_dict(self) -> dict:
        return asdict(self)


def predict(p: int, n: int, q: int | None = None) -> Prediction:
    """All sufficient conditions at q (default p^k, k the order of p mod n)."""
    if math.gcd(n, p) != 1:
        raise ValueError(f"gcd({n}, {p}) != 1")
    if q is None:
        q = p ** mult_order(p, n)
    _check_n(p, q, n)
    k = _exact_log(p, q)
    d = (q - 1) // n
    trivial = is_trivial_member(p, n)
    cor = cor_n_large_holds(p, q, n)
    strong, weak = thm_n_large_holds(p, q, n)
    any_suff = trivial or cor or strong.verdict or (weak.applicable and weak.verdict)
    return Prediction(p, n, k, q, d, trivial, cor, strong.verdict, weak.verdict,
                      weak.applicable, any_suff)
