"""Exact densities of sets of multiples, with rigorous interval tails.

Every quantity is a pair of Fractions [lo, hi] known to enclose the target.
Decimal strings appear only in ``to_json``, rounded outward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .numth import is_probable_prime

PROVENANCES = ("explicit", "trivial-set", "S-set", "minimal-table")
DEFAULT_CAP = 10**18
DEFAULT_PRUNE_CAP = 10**18
DECIMALS = 12

# minimal elements of N_2 up to 200000 (reproduced by members.minimal_elements)
N2_MINIMAL_TABLE = (3, 7, 31, 73, 85, 127, 2047, 3133, 4369, 8191, 11275, 49981,
                    60787, 76627, 121369, 131071, 140911, 178481)


def _floor_dec(x: Fraction, places: int) -> str:
    scaled = math.floor(x * 10**places)
    return _render(scaled, places)


def _ceil_dec(x: Fraction, places: int) -> str:
    scaled = math.ceil(x * 10**places)
    return _render(scaled, places)


def _render(scaled: int, places: int) -> str:
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction
    generators_used: int = 0
    pruned_branches: int = 0

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def distance(self, x) -> Fraction:
        """Distance from x to the interval (0 inside)."""
        x = Fraction(x)
        if x < self.lo:
            return self.lo - x
        return max(Fraction(0), x - self.hi)

    def to_json(self, places: int = DECIMALS) -> dict:
        return {
            "lo": _floor_dec(self.lo, places),
            "hi": _ceil_dec(self.hi, places),
            "exact_lo": f"{self.lo.numerator}/{self.lo.denominator}",
            "generators_used": self.generators_used,
            "pruned_branches": self.pruned_branches,
        }


@dataclass(frozen=True)
class GeneratorSet:
    generators: tuple[int, ...]
    provenance: str = "explicit"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        gens = self.generators
        if any(g < 2 for g in gens):
            raise ValueError("generators must be >= 2")
        if list(gens) != sorted(set(gens)):
            raise ValueError("generators must be strictly ascending")
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                if b % a == 0:
                    raise ValueError(f"{a} divides {b}")

    @classmethod
    def build(cls, values, provenance: str = "explicit") -> "GeneratorSet":
        """Sort, deduplicate and drop every value with a divisor in the set."""
        vals = sorted(set(int(v) for v in values))
        if vals and vals[0] < 2:
            raise ValueError("generators must be >= 2")
        kept: list[int] = []
        for v in vals:
            if not any(v % g == 0 for g in kept):
                kept.append(v)
        return cls(tuple(kept), provenance)

    def union(self, other: "GeneratorSet", provenance: str = "explicit") -> "GeneratorSet":
        return GeneratorSet.build(self.generators + other.generators, provenance)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


# -- trivial set ---------------------------------------------------------------


def delta_trivial(p: int, K: int) -> RationalInterval:
    """Density of the multiples of p^k - 1, k >= 2.

    (1/(p-1)) (1 - prod_{k prime} (1 - (p-1)/(p^k-1))), truncated at k <= K.
    The omitted factors multiply to a value in [1 - t, 1] with
    t = sum_{j > K} 2(p-1)/p^j = 2/p^K, since p^j - 1 >= p^j / 2.
    """
    if K < 2:
        raise ValueError("K must be >= 2")
    primes = [k for k in range(2, K + 1) if is_probable_prime(k)]
    prod = Fraction(1)
    for k in primes:
        prod *= 1 - Fraction(p - 1, p**k - 1)
    tail = Fraction(2, p**K)
    lo = (1 - prod) / (p - 1)
    hi = (1 - prod * (1 - tail)) / (p - 1)
    return RationalInterval(lo, hi, len(primes), 0)


# -- inclusion-exclusion -------------------------------------------------------


def _components(gens: list[int]) -> list[list[int]]:
    """Split into groups with no common factor across groups."""
    parent = list(range(len(gens)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if math.gcd(gens[i], gens[j]) > 1:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i, g in enumerate(gens):
        groups.setdefault(find(i), []).append(g)
    return sorted(groups.values())


def _component_density(gens: list[int], prune_cap: int) -> tuple[Fraction, Fraction, int]:
    """Inclusion-exclusion over subsets of one component, DFS with cuts.

    Terms are integer numerators over D = lcm(gens).  When extending the
    running subset by g pushes its lcm L past prune_cap, the whole subtree
    below is dropped.  That subtree sums to sign * (density of multiples of
    L avoiding every later generator), a value in sign * [0, 1/L].
    """
    big_d = 1
    for g in gens:
        big_d = math.lcm(big_d, g)
    exact = lo_cut = hi_cut = 0
    pruned = 0
    m = len(gens)
    stack = [(0, 1, 1)]  # (next index, running lcm, sign of the next term)
    while stack:
        start, lcm_cur, sign = stack.pop()
        for j in range(start, m):
            new = math.lcm(lcm_cur, gens[j])
            if new > prune_cap:
                pruned += 1
                if sign > 0:
                    hi_cut += big_d // new
                else:
                    lo_cut -= big_d // new
                continue
            exact += sign * (big_d // new)
            if j + 1 < m:
                stack.append((j + 1, new, -sign))
    return Fraction(exact + lo_cut, big_d), Fraction(exact + hi_cut, big_d), pruned


def multiples_density(gens: GeneratorSet, prune_cap: int = DEFAULT_PRUNE_CAP) -> RationalInterval:
    """Natural density of the integers divisible by some generator.

    Generators sharing no factor with one another have independent
    divisibility events, so the density factors as 1 - prod(1 - delta_c)
    over gcd-connected components; each component is summed exactly by
    inclusion-exclusion.
    """
    if not isinstance(gens, GeneratorSet):
        gens = GeneratorSet.build(gens)
    if prune_cap < 1:
        raise ValueError("prune_cap must be >= 1")
    miss_lo = miss_hi = Fraction(1)
    pruned = 0
    for comp in _components(list(gens.generators)):
        lo, hi, cut = _component_density(comp, prune_cap)
        # the true component density is in [0, 1]; clamp before composing
        lo, hi = max(lo, Fraction(0)), min(hi, Fraction(1))
        miss_lo *= 1 - hi
        miss_hi *= 1 - lo
        pruned += cut
    return RationalInterval(1 - miss_hi, 1 - miss_lo, len(gens), pruned)


# -- the S set for p = 2 -------------------------------------------------------


def s2_generators(cap: int = DEFAULT_CAP) -> GeneratorSet:
    """Members up to cap of {3} u {(2^(2^(a+2))-1)/(2^(2^a)-1)} u {(2^(r^(b+1))-1)/(2^(r^b)-1)}."""
    if cap < 3:
        raise ValueError("cap must be >= 3")
    vals = [3]
    a = 1
    while 3 * 2**a < cap.bit_length() + 1:
        g = (2 ** (2 ** (a + 2)) - 1) // (2 ** (2**a) - 1)
        if g <= cap:
            vals.append(g)
        a += 1
    # (2^(r^(b+1)) - 1)/(2^(r^b) - 1) > 2^(r^b (r-1)) >= 2^(r-1)
    r = 3
    while r - 1 <= cap.bit_length():
        if is_probable_prime(r):
            b = 0
            while r**b * (r - 1) <= cap.bit_length():
                g = (2 ** (r ** (b + 1)) - 1) // (2 ** (r**b) - 1)
                if g <= cap:
                    vals.append(g)
                b += 1
        r += 2
    return GeneratorSet.build(vals, "S-set")


def s2_tail_bound(cap: int) -> Fraction:
    """Upper bound on sum of 1/g over S-set members g > cap.

    Each member is (2^m - 1)/(2^m' - 1) with m' <= m/3 (3 itself aside),
    and distinct members have distinct m, so g > 2^(2m/3); g > cap forces
    2^m > cap, i.e. m >= A = cap.bit_length().  Summing the geometric
    series: sum <= 2^(-2A/3) / (1 - 2^(-2/3)) <= 3 * 2^(-floor(2A/3)).
    """
    return Fraction(3, 2 ** (2 * cap.bit_length() // 3))


def delta_S(cap: int = DEFAULT_CAP, prune_cap: int = DEFAULT_PRUNE_CAP) -> RationalInterval:
    gens = s2_generators(cap)
    iv = multiples_density(gens, prune_cap)
    hi = min(Fraction(1), iv.hi + s2_tail_bound(cap))
    return RationalInterval(iv.lo, hi, iv.generators_used, iv.pruned_branches)


def delta_N2_lower(cap: int = DEFAULT_CAP, prune_cap: int = DEFAULT_PRUNE_CAP,
                   extra: GeneratorSet | None = None) -> RationalInterval:
    """Density of multiples of the S-set members up to cap together with extra.

    The lower endpoint is a lower bound for the density of N_2.
    """
    if extra is None:
        extra = GeneratorSet.build(N2_MINIMAL_TABLE, "minimal-table")
    elif not isinstance(extra, GeneratorSet):
        extra = GeneratorSet.build(extra)
    gens = s2_generators(cap).union(extra)
    return multiples_density(gens, prune_cap)
