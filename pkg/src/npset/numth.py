"""Elementary integer number theory: orders, factoring, divisors, relative size."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from math import gcd

TRIAL_LIMIT = 10**6
DEFAULT_SEED = 20240601
# factoring effort: integers above this bit size are refused
MAX_FACTOR_BITS = 160


class FactorizationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class FactoredInt:
    value: int
    factors: dict = field(default_factory=dict)

    def __post_init__(self):
        prod = 1
        for prime, e in self.factors.items():
            if e < 1 or not is_probable_prime(prime):
                raise ValueError(f"bad factor {prime}^{e}")
            prod *= prime**e
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")

    @property
    def primes(self) -> list[int]:
        return sorted(self.factors)

    def __str__(self) -> str:
        return "*".join(
            f"{q}^{e}" if e > 1 else str(q) for q, e in sorted(self.factors.items())
        )


@dataclass(frozen=True)
class RelativeSize:
    n: int
    p: int
    k: int
    value: float


def _check_prime(p: int) -> None:
    if p < 2 or not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")


def mult_order(p: int, n: int) -> int:
    """Least k >= 1 with p**k == 1 (mod n); mult_order(p, 1) == 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if gcd(p, n) != 1:
        raise ValueError(f"gcd({p}, {n}) != 1")
    if n == 1:
        return 1
    r = p % n
    k = 1
    while r != 1:
        r = r * p % n
        k += 1
    return k


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(m: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24."""
    if m < 2:
        return False
    for b in _MR_BASES:
        if m % b == 0:
            return m == b
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def _brent(m: int, rng: random.Random) -> int:
    # Brent's variant of Pollard rho, batched gcds
    if m % 2 == 0:
        return 2
    while True:
        y, c, batch = rng.randrange(1, m), rng.randrange(1, m), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % m
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(batch, r - k)):
                    y = (y * y + c) % m
                    q = q * abs(x - y) % m
                g = gcd(q, m)
                k += batch
            r *= 2
        if g == m:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % m
                g = gcd(abs(x - ys), m)
        if g != m:
            return g


def factorize(m: int, seed: int | None = None) -> FactoredInt:
    """Prime factorization; rho randomness uses seed (module DEFAULT_SEED if None)."""
    if m < 2:
        raise ValueError("factorize needs m >= 2")
    if m.bit_length() > MAX_FACTOR_BITS:
        raise FactorizationError(f"{m} exceeds the {MAX_FACTOR_BITS}-bit factoring limit")
    factors: dict[int, int] = {}
    rest = m
    for q in (2, 3, 5):
        while rest % q == 0:
            factors[q] = factors.get(q, 0) + 1
            rest //= q
    # wheel mod 30 trial division
    q, steps, i = 7, (4, 2, 4, 2, 4, 6, 2, 6), 0
    while q <= TRIAL_LIMIT and q * q <= rest:
        while rest % q == 0:
            factors[q] = factors.get(q, 0) + 1
            rest //= q
        q += steps[i]
        i = (i + 1) % 8
    if rest > 1:
        rng = random.Random(DEFAULT_SEED if seed is None else seed)
        stack = [rest]
        while stack:
            x = stack.pop()
            if x == 1:
                continue
            if is_probable_prime(x):
                factors[x] = factors.get(x, 0) + 1
                continue
            root = math.isqrt(x)
            if root * root == x:
                stack += [root, root]
                continue
            f = _brent(x, rng)
            stack += [f, x // f]
    return FactoredInt(m, dict(sorted(factors.items())))


def divisors(m: int) -> list[int]:
    if m < 1:
        raise ValueError("divisors needs m >= 1")
    if m == 1:
        return [1]
    divs = [1]
    for q, e in factorize(m).factors.items():
        divs = [d * q**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def prime_divisors(m: int) -> list[int]:
    return [] if m == 1 else factorize(m).primes


def log_p_power_minus_one(p: int, k: int) -> float:
    """log(p**k - 1) without forming p**k for large k."""
    if k * math.log2(p) < 900:
        return math.log(p**k - 1)
    # log(p^k - 1) = k log p + log1p(-p^-k); the correction underflows to 0 here
    return k * math.log(p)


def relative_size(p: int, n: int) -> RelativeSize:
    """log(n) / log(p**k - 1) with k the order of p modulo n."""
    _check_prime(p)
    if n < 2:
        raise ValueError("relative size needs n >= 2")
    k = mult_order(p, n)
    if n == p**k - 1:
        return RelativeSize(n, p, k, 1.0)
    return RelativeSize(n, p, k, math.log(n) / log_p_power_minus_one(p, k))
