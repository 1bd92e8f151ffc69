"""Explicit finite fields GF(p^k) and brute-force counting oracles.

Elements are identified with integers idx = c_0 + c_1 p + ... + c_{k-1} p^(k-1)
where c_i is the coefficient of x^i in the modulus basis.  The canonical
ordering used for deterministic choices is lexicographic on (c_0, ..., c_{k-1}),
which is not the integer order of idx.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .gfpoly import GFpPoly, poly_gcd, poly_powmod
from .numth import is_probable_prime, prime_divisors

DEFAULT_ENUM_BOUND = 2**26
DEFAULT_CHARSUM_BOUND = 2**20
# tuple sums are materialised (d^r entries) only up to this many tuples
DEFAULT_TUPLE_BUDGET = 2**22
TUPLE_CHUNK = 2**20
WEIL_TOL = 1e-6


class OracleBoundError(RuntimeError):
    """Raised when a brute-force oracle would exceed its configured size."""


def enum_bound() -> int:
    env = os.environ.get("NPSET_ORACLE_BOUND")
    if env:
        return int(env)
    return DEFAULT_ENUM_BOUND


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: GFpPoly

    @property
    def q(self) -> int:
        return self.p**self.k

    def elem(self, coeffs) -> FqElem:
        c = tuple(int(v) % self.p for v in coeffs)
        if len(c) > self.k:
            raise ValueError("too many coordinates")
        return FqElem(c + (0,) * (self.k - len(c)))

    def index(self, a: FqElem) -> int:
        return sum(c * self.p**i for i, c in enumerate(a.coeffs))

    def from_index(self, idx: int) -> FqElem:
        c = []
        for _ in range(self.k):
            idx, r = divmod(idx, self.p)
            c.append(r)
        return FqElem(tuple(c))

    def mul(self, a: FqElem, b: FqElem) -> FqElem:
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        m = self.modulus.coeffs
        for t in range(2 * k - 2, k - 1, -1):
            c = prod[t] % p
            if c:
                for i in range(k):
                    prod[t - k + i] -= c * m[i]
        return FqElem(tuple(v % p for v in prod[:k]))

    def pow(self, a: FqElem, e: int) -> FqElem:
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def add_const(self, a: FqElem, lam: int) -> FqElem:
        return FqElem(((a.coeffs[0] + lam) % self.p,) + a.coeffs[1:])

    @property
    def one(self) -> FqElem:
        return FqElem((1,) + (0,) * (self.k - 1))

    @property
    def zero(self) -> FqElem:
        return FqElem((0,) * self.k)

    def canonical_elements(self):
        """All elements in canonical (lexicographic, low degree first) order."""
        for c in itertools.product(range(self.p), repeat=self.k):
            yield FqElem(c)


@dataclass(frozen=True)
class FqElem:
    coeffs: tuple

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True, eq=False)
class CharacterSpec:
    """Multiplicative character of exact order d, chi(g^a) = exp(2 pi i a / d), chi(0) = 0."""

    field: FieldSpec
    generator: FqElem
    dlog: np.ndarray = field(repr=False)
    d: int

    def __call__(self, a: FqElem) -> complex:
        idx = self.field.index(a)
        if idx == 0:
            return 0j
        return complex(np.exp(2j * np.pi * (int(self.dlog[idx]) % self.d) / self.d))


def is_irreducible(f: GFpPoly) -> bool:
    """Rabin's test."""
    k = f.degree
    if k < 1:
        return False
    if k == 1:
        return True
    p = f.p
    x = GFpPoly.x(p)

    def frob(times):
        h = x
        for _ in range(times):
            h = poly_powmod(h, p, f)
        return h

    if frob(k) != x % f:
        return False
    for ell in prime_divisors(k):
        if poly_gcd(frob(k // ell) - x, f).degree != 0:
            return False
    return True


@lru_cache(maxsize=None)
def make_field(p: int, k: int) -> FieldSpec:
    """GF(p^k) with the lexicographically smallest monic irreducible modulus."""
    if p < 2 or not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("degree must be >= 1")
    for low in itertools.product(range(p), repeat=k):
        f = GFpPoly(p, low + (1,))
        if is_irreducible(f):
            return FieldSpec(p, k, f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def _check_enum(spec: FieldSpec, bound: int | None = None) -> None:
    limit = enum_bound() if bound is None else bound
    if spec.q > limit:
        raise OracleBoundError(f"q = {spec.q} exceeds the enumeration bound {limit}")


@lru_cache(maxsize=None)
def find_generator(spec: FieldSpec) -> FqElem:
    """Smallest primitive element in the canonical ordering."""
    q = spec.q
    if q == 2:
        return spec.one
    ells = prime_divisors(q - 1)
    for g in spec.canonical_elements():
        if g.is_zero():
            continue
        if all(spec.pow(g, (q - 1) // ell) != spec.one for ell in ells):
            return g
    raise AssertionError("multiplicative group not cyclic?")  # pragma: no cover


# -- vectorised tables --------------------------------------------------------


def _digits(spec: FieldSpec, idx: np.ndarray) -> np.ndarray:
    out = np.empty((len(idx), spec.k), dtype=np.int64)
    rest = idx.astype(np.int64)
    for i in range(spec.k):
        rest, out[:, i] = np.divmod(rest, spec.p)
    return out


def _undigits(spec: FieldSpec, digs: np.ndarray) -> np.ndarray:
    weights = spec.p ** np.arange(spec.k, dtype=np.int64)
    return digs @ weights


def vec_mul(spec: FieldSpec, idx: np.ndarray, h: FqElem, chunk: int = 1 << 18) -> np.ndarray:
    """Multiply every element of idx by the fixed element h."""
    p, k = spec.p, spec.k
    m = np.array(spec.modulus.coeffs[:k], dtype=np.int64)
    out = np.empty(len(idx), dtype=np.int64)
    for start in range(0, len(idx), chunk):
        digs = _digits(spec, idx[start : start + chunk])
        prod = np.zeros((len(digs), 2 * k - 1), dtype=np.int64)
        for i, hi in enumerate(h.coeffs):
            if hi:
                prod[:, i : i + k] += hi * digs
        for t in range(2 * k - 2, k - 1, -1):
            c = prod[:, t] % p
            prod[:, t - k : t] -= c[:, None] * m
        out[start : start + chunk] = _undigits(spec, prod[:, :k] % p)
    return out


def vec_add_const(spec: FieldSpec, idx: np.ndarray, lam: int) -> np.ndarray:
    c0 = idx % spec.p
    return idx - c0 + (c0 + lam) % spec.p


@dataclass(frozen=True, eq=False)
class FieldTables:
    spec: FieldSpec
    generator: FqElem
    exp: np.ndarray  # exp[a] = idx(g^a), 0 <= a < q-1
    log: np.ndarray  # log[idx], log[0] = -1


@lru_cache(maxsize=8)
def field_tables(spec: FieldSpec) -> FieldTables:
    _check_enum(spec)
    q = spec.q
    g = find_generator(spec)
    dt = np.int32 if q < 2**31 else np.int64
    exp = np.empty(q - 1, dtype=np.int64)
    exp[0] = 1
    m = 1
    while m < q - 1:
        cnt = min(m, q - 1 - m)
        exp[m : m + cnt] = vec_mul(spec, exp[:cnt], spec.pow(g, m))
        m += cnt
    log = np.full(q, -1, dtype=dt)
    log[exp] = np.arange(q - 1, dtype=dt)
    exp = exp.astype(dt)
    exp.flags.writeable = False
    log.flags.writeable = False
    return FieldTables(spec, g, exp, log)


def make_character(spec: FieldSpec, d: int, bound: int = DEFAULT_CHARSUM_BOUND) -> CharacterSpec:
    q = spec.q
    if q > bound:
        raise OracleBoundError(f"q = {q} exceeds the character-sum bound {bound}")
    _check_divisor(spec, d)
    t = field_tables(spec)
    return CharacterSpec(spec, t.generator, t.log, d)


def _check_divisor(spec: FieldSpec, d: int) -> None:
    if d < 1 or (spec.q - 1) % d:
        raise ValueError(f"d = {d} does not divide q - 1 = {spec.q - 1}")


def _check_run(spec: FieldSpec, r: int) -> None:
    if not 1 <= r <= spec.p:
        raise ValueError(f"run length r = {r} must satisfy 1 <= r <= p = {spec.p}")


# -- counting oracles ---------------------------------------------------------


def is_nonzero_dth_power(spec: FieldSpec, a: FqElem, d: int) -> bool:
    _check_divisor(spec, d)
    if a.is_zero():
        return False
    return spec.pow(a, (spec.q - 1) // d) == spec.one


def _dth_power_mask(spec: FieldSpec, d: int) -> np.ndarray:
    log = field_tables(spec).log
    return (log >= 0) & (log % d == 0)


def count_consecutive_dpowers(spec: FieldSpec, d: int, r: int) -> tuple[int, int]:
    """(M, M0) for runs xi, xi+1, ..., xi+r-1 of d-th powers.

    M counts xi in GF(q) with every run member a nonzero d-th power.
    M0 counts xi in GF(p) whose run contains 0 and otherwise consists of
    d-th powers (0 counts as a d-th power here).
    """
    _check_divisor(spec, d)
    _check_run(spec, r)
    _check_enum(spec)
    power = _dth_power_mask(spec, d)
    xi = np.arange(spec.q, dtype=np.int64)
    ok = np.ones(spec.q, dtype=bool)
    for j in range(r):
        ok &= power[vec_add_const(spec, xi, j)]
    m0 = 0
    p = spec.p
    for x in range(p):
        run = [(x + j) % p for j in range(r)]
        if 0 in run and all(v == 0 or power[v] for v in run):
            m0 += 1
    return int(ok.sum()), m0


def m0_predicted(p: int, n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return p if n % (p - 1) == 0 else 0


def count_system_solutions(spec: FieldSpec, d: int, r: int) -> int:
    """Number of (x, y_1..y_r) in GF(q)^(r+1) with y_j^d = x + j - 1."""
    _check_divisor(spec, d)
    _check_run(spec, r)
    _check_enum(spec)
    q = spec.q
    t = field_tables(spec)
    # image of y -> y^d over every y, then solutions per right-hand side
    ys = np.arange(1, q, dtype=np.int64)
    ypow = t.exp[(t.log[ys].astype(np.int64) * d) % (q - 1)]
    roots = np.bincount(ypow, minlength=q).astype(object)
    roots[0] += 1  # y = 0
    xi = np.arange(q, dtype=np.int64)
    prod = np.ones(q, dtype=object)
    for j in range(r):
        prod = prod * roots[vec_add_const(spec, xi, j)]
    return int(prod.sum())


# -- character sums -----------------------------------------------------------


@dataclass
class WeilTermReport:
    tuple: tuple
    sum_abs: float
    w: int
    bound: float
    ok: bool


def _shift_logs(char: CharacterSpec, r: int):
    spec = char.field
    xi = np.arange(spec.q, dtype=np.int64)
    shifted = [vec_add_const(spec, xi, j) for j in range(r)]
    logs = [char.dlog[s].astype(np.int64) for s in shifted]
    return shifted, logs


def weil_term_report(char: CharacterSpec, r: int, exps) -> WeilTermReport:
    """|sum_xi chi(xi^i1 (xi+1)^i2 ... )| against (w - 1) sqrt(q)."""
    _check_run(char.field, r)
    exps = tuple(int(e) for e in exps)
    d = char.d
    if len(exps) != r or any(not 0 <= e < d for e in exps):
        raise ValueError(f"exponent tuple must have {r} entries in [0, {d})")
    if not any(exps):
        raise ValueError("the zero tuple is excluded")
    shifted, logs = _shift_logs(char, r)
    q = char.field.q
    expo = np.zeros(q, dtype=np.int64)
    alive = np.ones(q, dtype=bool)
    for e, s, lg in zip(exps, shifted, logs):
        if e == 0:
            continue  # 0^0 read as 1
        alive &= s != 0
        expo += e * np.where(s != 0, lg, 0)
    phases = np.exp(2j * np.pi * (expo[alive] % d) / d)
    total = complex(phases.sum())
    w = sum(1 for e in exps if e)
    bound = (w - 1) * math.sqrt(q)
    return WeilTermReport(exps, abs(total), w, bound, abs(total) <= bound + WEIL_TOL)


def iter_tuple_sums(char: CharacterSpec, r: int, chunk: int = TUPLE_CHUNK):
    """Yield (prefix, S) with S[i_{t+1}, ..., i_r] = sum_xi chi(xi^i1 (xi+1)^i2 ...).

    The leading t exponents are fixed by prefix, t being the least value
    with d^(r-t) <= chunk.  The regular xi (no zero in the run) are binned
    by their log pattern mod d and every tuple sum is read off a
    multidimensional FFT of that histogram; the at most r xi that hit zero
    are added as rank-one corrections.
    """
    spec = char.field
    _check_run(spec, r)
    d = char.d
    shifted, logs = _shift_logs(char, r)
    regular = np.ones(spec.q, dtype=bool)
    for s in shifted:
        regular &= s != 0
    ell = [lg[regular] % d for lg in logs]
    specials = []  # log-residues along the run, -1 marking the zero
    for xi in np.flatnonzero(~regular):
        specials.append([int(logs[j][xi]) % d if shifted[j][xi] != 0 else -1
                         for j in range(r)])
    ar = np.arange(d)
    roots = np.exp(2j * np.pi * ar / d)

    def u(j_res):
        # chi^i(a) for i in [0, d); a = 0 maps to the indicator of i = 0
        if j_res < 0:
            v = np.zeros(d, dtype=complex)
            v[0] = 1
            return v
        return roots[(ar * j_res) % d]

    t = 0
    while d ** (r - t) > chunk and t < r - 1:
        t += 1
    rest = r - t
    shape = (d,) * rest
    size = d**rest
    flat = np.zeros(len(ell[0]), dtype=np.int64)
    for lj in ell[t:]:
        flat = flat * d + lj
    special_parts = []
    for res in specials:
        tail = u(res[t])
        for j in range(t + 1, r):
            tail = np.multiply.outer(tail, u(res[j]))
        special_parts.append(([u(res[j]) for j in range(t)], tail.reshape(shape)))
    for prefix in itertools.product(range(d), repeat=t):
        expo = np.zeros(len(flat), dtype=np.int64)
        for i, lj in zip(prefix, ell):
            expo += i * lj
        w = roots[expo % d]
        h = np.bincount(flat, weights=w.real, minlength=size) + 1j * np.bincount(
            flat, weights=w.imag, minlength=size
        )
        s = np.fft.ifftn(h.reshape(shape)) * size
        for heads, tail in special_parts:
            coef = 1 + 0j
            for i, head in zip(prefix, heads):
                coef *= head[i]
            if coef != 0:
                s += coef * tail
        yield prefix, s


def character_sum_count(char: CharacterSpec, r: int, strategy: str = "auto",
                        tuple_budget: int = DEFAULT_TUPLE_BUDGET) -> complex:
    """N as the sum over all exponent tuples of the character sums.

    strategy "tuples" adds up every tuple sum; "factored" uses
    sum_xi prod_j sum_i chi^i(xi + j - 1), the same sum regrouped, which
    stays cheap when d^r is large. "auto" picks by tuple_budget.
    """
    _check_run(char.field, r)
    d = char.d
    if strategy == "auto":
        strategy = "tuples" if d**r <= tuple_budget else "factored"
    if strategy == "tuples":
        total = 0j
        for _, s in iter_tuple_sums(char, r):
            total += complex(np.sum(s))
        return total
    if strategy != "factored":
        raise ValueError(f"unknown strategy {strategy!r}")
    shifted, logs = _shift_logs(char, r)
    # geo[l] = sum_i exp(2 pi i i l / d), evaluated numerically
    geo = np.fft.fft(np.ones(d)).conj()
    prod = np.ones(char.field.q, dtype=complex)
    for s, lg in zip(shifted, logs):
        prod *= np.where(s == 0, 1.0, geo[lg % d])
    return complex(prod.sum())


@dataclass
class WeilSweep:
    q: int
    d: int
    r: int
    tuples_checked: int
    total_tuples: int
    violations: int
    worst_excess: float
    exhaustive: bool


def weil_sweep(char: CharacterSpec, r: int, tuple_budget: int = DEFAULT_TUPLE_BUDGET,
               sample: int = 2000, seed: int = 0) -> WeilSweep:
    """Check the per-tuple Weil bound over every nonzero tuple.

    When d^r exceeds tuple_budget only a seeded sample of tuples is checked
    (through weil_term_report) and the result is flagged non-exhaustive.
    """
    d, q = char.d, char.field.q
    total = d**r - 1
    sq = math.sqrt(q)
    if d**r > tuple_budget:
        rng = np.random.default_rng(seed)
        bad, worst, seen = 0, -math.inf, 0
        for _ in range(sample):
            t = rng.integers(0, d, size=r)
            if not t.any():
                continue
            rep = weil_term_report(char, r, t)
            seen += 1
            bad += not rep.ok
            worst = max(worst, rep.sum_abs - rep.bound)
        return WeilSweep(q, d, r, seen, total, bad, worst, False)
    nz_rest = None
    bad, worst = 0, -math.inf
    for prefix, s in iter_tuple_sums(char, r):
        if nz_rest is None:
            # number of nonzero exponents along the free axes
            nz_rest = np.zeros(s.shape, dtype=np.int64)
            for axis in range(s.ndim):
                shape = [1] * s.ndim
                shape[axis] = d
                nz_rest = nz_rest + (np.arange(d) != 0).reshape(shape)
        w = sum(1 for i in prefix if i) + nz_rest
        excess = np.abs(s) - (w - 1) * sq
        if not any(prefix):
            excess.flat[0] = -math.inf  # zero tuple
        worst = max(worst, float(np.max(excess)))
        bad += int(np.count_nonzero(excess > WEIL_TOL))
    return WeilSweep(q, d, r, total, total, bad, worst, True)
