"""Dense polynomials over GF(p) and the common-root locus of (x+l)^n - 1.

Polynomials over GF(2) are packed into Python integers (bit i is the
coefficient of x^i), so shifts and xors run word-at-a-time.  For odd p the
coefficients live in a numpy array; long division subtracts multiples of
the divisor without reducing mod p after every step and only reduces when
the tracked magnitude bound gets close to int64 overflow.
"""

from __future__ import annotations

import math
from math import comb, gcd

import numpy as np

__all__ = [
    "GFpPoly",
    "shifted_power_minus_one",
    "poly_gcd",
    "poly_powmod",
    "common_root_locus",
]

_LAZY_LIMIT = 1 << 61


class GFpPoly:
    """Immutable polynomial over the integers mod p, coefficients low degree first."""

    __slots__ = ("p", "_bits", "_arr", "_deg")

    def __init__(self, p: int, coeffs=()):
        if p < 2:
            raise ValueError("modulus must be a prime >= 2")
        self.p = p
        if p == 2:
            if isinstance(coeffs, int):
                bits = coeffs
            else:
                bits = 0
                for i, c in enumerate(coeffs):
                    if int(c) & 1:
                        bits |= 1 << i
            self._bits = bits
            self._arr = None
            self._deg = bits.bit_length() - 1
        else:
            arr = np.asarray(coeffs, dtype=np.int64) % p
            nz = np.flatnonzero(arr)
            arr = arr[: nz[-1] + 1] if len(nz) else arr[:0]
            arr = arr.astype(np.uint8 if p < 256 else np.int64)
            arr.flags.writeable = False
            self._bits = None
            self._arr = arr
            self._deg = len(arr) - 1

    @classmethod
    def _from_work(cls, p: int, work: np.ndarray, deg: int) -> GFpPoly:
        return cls(p, work[: deg + 1] % p)

    @classmethod
    def x(cls, p: int) -> GFpPoly:
        return cls(p, (0, 1))

    @classmethod
    def constant(cls, p: int, c: int) -> GFpPoly:
        return cls(p, (c,))

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return self._deg

    def is_zero(self) -> bool:
        return self._deg < 0

    @property
    def coeffs(self) -> tuple[int, ...]:
        if self.p == 2:
            b = self._bits
            return tuple((b >> i) & 1 for i in range(self._deg + 1))
        return tuple(int(c) for c in self._arr)

    def __getitem__(self, i: int) -> int:
        if i < 0 or i > self._deg:
            return 0
        if self.p == 2:
            return (self._bits >> i) & 1
        return int(self._arr[i])

    @property
    def leading(self) -> int:
        return self[self._deg] if self._deg >= 0 else 0

    def _work(self) -> np.ndarray:
        # int64 scratch copy for the lazy kernels
        return self._arr.astype(np.int64)

    def __eq__(self, other):
        if not isinstance(other, GFpPoly):
            return NotImplemented
        if self.p != other.p or self._deg != other._deg:
            return False
        if self.p == 2:
            return self._bits == other._bits
        return bool(np.array_equal(self._arr, other._arr))

    def __hash__(self):
        if self.p == 2:
            return hash((2, self._bits))
        return hash((self.p, self._arr.tobytes()))

    def _same_field(self, other: GFpPoly) -> None:
        if not isinstance(other, GFpPoly):
            raise TypeError(f"expected GFpPoly, got {type(other).__name__}")
        if other.p != self.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other: GFpPoly) -> GFpPoly:
        self._same_field(other)
        if self.p == 2:
            return GFpPoly(2, self._bits ^ other._bits)
        m = max(len(self._arr), len(other._arr))
        out = np.zeros(m, dtype=np.int64)
        out[: len(self._arr)] += self._arr
        out[: len(other._arr)] += other._arr
        return GFpPoly(self.p, out)

    def __neg__(self) -> GFpPoly:
        if self.p == 2:
            return self
        return GFpPoly(self.p, -self._work())

    def __sub__(self, other: GFpPoly) -> GFpPoly:
        self._same_field(other)
        return self + (-other)

    def __mul__(self, other: GFpPoly) -> GFpPoly:
        self._same_field(other)
        if self.is_zero() or other.is_zero():
            return GFpPoly(self.p)
        if self.p == 2:
            return GFpPoly(2, _clmul(self._bits, other._bits))
        return GFpPoly(self.p, np.convolve(self._work(), other._work()))

    def scale(self, c: int) -> GFpPoly:
        c %= self.p
        if self.p == 2:
            return self if c else GFpPoly(2)
        return GFpPoly(self.p, self._work() * c)

    def monic(self) -> GFpPoly:
        if self.is_zero():
            raise ValueError("zero polynomial has no monic associate")
        return self.scale(pow(self.leading, -1, self.p))

    def __divmod__(self, other: GFpPoly):
        self._same_field(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        if p == 2:
            q, r = _divmod2(self._bits, other._bits)
            return GFpPoly(2, q), GFpPoly(2, r)
        a = self._work()
        b = other._work()
        db = other._deg
        quot = np.zeros(max(self._deg - db + 1, 1), dtype=np.int64)
        inv = pow(int(b[db]), -1, p)
        da = self._deg
        # eager variant: needs the quotient, used off the hot path only
        while da >= db:
            c = int(a[da]) * inv % p
            if c:
                quot[da - db] = c
                a[da - db : da + 1] -= c * b
                a[da - db : da + 1] %= p
            da -= 1
            while da >= 0 and a[da] == 0:
                da -= 1
        return GFpPoly(p, quot), GFpPoly(p, a[: max(da + 1, 0)])

    def __mod__(self, other: GFpPoly) -> GFpPoly:
        self._same_field(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.p == 2:
            return GFpPoly(2, _mod2(self._bits, other._bits))
        a = self._work()
        da = _reduce(a, self._deg, other._work(), other._deg, self.p, self.p - 1, self.p - 1)[0]
        return GFpPoly._from_work(self.p, a, da)

    def __call__(self, v: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * v + c) % self.p
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self._deg, -1, -1):
            c = self[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
                continue
            mono = "x" if i == 1 else f"x^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms)

    def __repr__(self) -> str:
        return f"GFpPoly({self.p}, {self})"


# -- GF(2) packed kernels -----------------------------------------------------


def _clmul(a: int, b: int) -> int:
    if a.bit_count() < b.bit_count():
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


def _mod2(a: int, b: int) -> int:
    db = b.bit_length()
    da = a.bit_length()
    while da >= db:
        a ^= b << (da - db)
        da = a.bit_length()
    return a


def _divmod2(a: int, b: int):
    db = b.bit_length()
    da = a.bit_length()
    q = 0
    while da >= db:
        q |= 1 << (da - db)
        a ^= b << (da - db)
        da = a.bit_length()
    return q, a


def _gcd2(a: int, b: int) -> int:
    while b:
        a, b = b, _mod2(a, b)
    return a


# -- odd-p lazy kernels -------------------------------------------------------


def _reduce(a, da, b, db, p, bound_a, bound_b):
    """Reduce a (degree da) modulo b (degree db) in place.

    Entries of a and b are congruent mod p to the true coefficients with
    absolute value at most bound_a, bound_b. Returns (new degree, new bound).
    """
    if bound_a + (max(da - db, 0) + 1) * (p - 1) * bound_b > _LAZY_LIMIT:
        a[: da + 1] %= p
        bound_a = p - 1
        if bound_b > p - 1:
            b[: db + 1] %= p
            bound_b = p - 1
    inv = pow(int(b[db]) % p, -1, p)
    bseg = b[: db + 1]
    tmp = np.empty(db + 1, dtype=np.int64)
    steps = 0
    while da >= db:
        c = int(a[da]) * inv % p
        if c:
            seg = a[da - db : da + 1]
            np.multiply(bseg, c, out=tmp)
            np.subtract(seg, tmp, out=seg)
            steps += 1
        da -= 1
        while da >= 0 and a[da] % p == 0:
            da -= 1
    return da, bound_a + steps * (p - 1) * bound_b


def _gcd_work(a, da, b, db, p):
    """Euclid on int64 work arrays; returns (array, degree) of an unnormalised gcd."""
    ba = bb = p - 1
    while db >= 0:
        da, ba = _reduce(a, da, b, db, p, ba, bb)
        a, da, ba, b, db, bb = b, db, bb, a, da, ba
    return a, da


# -- public operations --------------------------------------------------------


def shifted_power_minus_one(p: int, lam: int, n: int) -> GFpPoly:
    """(x + lam)^n - 1 over GF(p).

    Uses (x + lam)^n = prod_i (x^(p^i) + lam)^(n_i) over the base-p digits
    n_i of n, so only the nonzero binomial terms are ever touched.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= lam < p:
        raise ValueError(f"shift {lam} not a residue mod {p}")
    if p == 2:
        v = 1
        if lam:
            bit = 0
            m = n
            while m:
                if m & 1:
                    v ^= v << (1 << bit)
                m >>= 1
                bit += 1
        else:
            v = 1 << n
        return GFpPoly(2, v ^ 1)
    if lam == 0:
        c = np.zeros(n + 1, dtype=np.int64)
        c[n] = 1
        c[0] = p - 1
        return GFpPoly(p, c)
    cur = np.zeros(n + 1, dtype=np.int64)
    cur[0] = 1
    deg = 0
    m, step = n, 1
    while m:
        digit = m % p
        if digit:
            nxt = np.zeros(n + 1, dtype=np.int64)
            for j in range(digit + 1):
                coef = comb(digit, j) * pow(lam, digit - j, p) % p
                if coef:
                    nxt[step * j : step * j + deg + 1] += coef * cur[: deg + 1]
            cur = nxt % p
            deg += step * digit
        m //= p
        step *= p
    cur[0] -= 1
    return GFpPoly(p, cur)


def poly_gcd(a: GFpPoly, b: GFpPoly) -> GFpPoly:
    """Monic gcd."""
    a._same_field(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    p = a.p
    if p == 2:
        return GFpPoly(2, _gcd2(a._bits, b._bits))
    g, dg = _gcd_work(a._work(), a.degree, b._work(), b.degree, p)
    return GFpPoly._from_work(p, g, dg).monic()


def _mulmod(x, y, m, dm, p):
    if len(x) == 0 or len(y) == 0:
        # zero divisors appear when the modulus is reducible
        return np.zeros(0, dtype=np.int64)
    prod = np.convolve(x, y) % p
    dp = len(prod) - 1
    while dp >= 0 and prod[dp] == 0:
        dp -= 1
    if dp >= dm:
        dp, _ = _reduce(prod, dp, m, dm, p, p - 1, p - 1)
    return prod[: dp + 1] % p


def poly_powmod(base: GFpPoly, e: int, modulus: GFpPoly) -> GFpPoly:
    """base**e reduced mod modulus (square and multiply)."""
    base._same_field(modulus)
    if modulus.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    if e < 0:
        raise ValueError("negative exponent")
    p = base.p
    if p == 2:
        m = modulus._bits
        acc, sq = 1, _mod2(base._bits, m)
        while e:
            if e & 1:
                acc = _mod2(_clmul(acc, sq), m)
            e >>= 1
            if e:
                sq = _mod2(_clmul(sq, sq), m)
        return GFpPoly(2, acc)
    m = modulus._work()
    dm = modulus.degree
    acc = np.ones(1, dtype=np.int64)
    sq = (base % modulus)._work()
    if len(sq) == 0:
        return GFpPoly(p, () if e else (1,))
    while e:
        if e & 1:
            acc = _mulmod(acc, sq, m, dm, p)
        e >>= 1
        if e:
            sq = _mulmod(sq, sq, m, dm, p)
    return GFpPoly(p, acc)


def _fold_residue(p: int, lam: int, n: int, g: GFpPoly) -> GFpPoly:
    # (x+lam)^n - 1 mod g; explicit expansion when it beats square-and-multiply
    d = g.degree
    if n <= 4 * max(1, math.ceil(math.log2(n + 1))) * d:
        return shifted_power_minus_one(p, lam, n) % g
    return poly_powmod(GFpPoly(p, (lam, 1)), n, g) - GFpPoly.constant(p, 1)


def common_root_locus(p: int, n: int) -> GFpPoly:
    """Monic gcd over lam in GF(p) of (x + lam)^n - 1.

    Its roots are exactly the xi in the algebraic closure with
    (xi + lam)^n = 1 for every lam, so deg >= 1 iff such xi exists.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if gcd(n, p) != 1:
        raise ValueError(f"gcd({n}, {p}) != 1")
    g = poly_gcd(shifted_power_minus_one(p, 0, n), shifted_power_minus_one(p, 1, n))
    for lam in range(2, p):
        if g.degree < 1:
            break
        g = poly_gcd(g, _fold_residue(p, lam, n, g))
    return g
