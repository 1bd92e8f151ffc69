import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF, Poly, symbols

from npset.gfpoly import GFpPoly, common_root_locus, poly_gcd, poly_powmod, shifted_power_minus_one

X = symbols("x")
PRIMES = st.sampled_from([2, 3, 5, 7, 13])


def coeff_lists(max_len=40):
    return st.lists(st.integers(0, 12), max_size=max_len)


def to_sympy(f: GFpPoly) -> Poly:
    return Poly(list(reversed(f.coeffs)) or [0], X, domain=GF(f.p))


def from_sympy(p: int, g: Poly) -> GFpPoly:
    return GFpPoly(p, [int(c) % p for c in reversed(g.all_coeffs())])


def test_shifted_examples():
    assert str(shifted_power_minus_one(2, 1, 3)) == "x^3+x^2+x"
    assert str(shifted_power_minus_one(3, 1, 2)) == "x^2+2x"
    assert shifted_power_minus_one(2, 0, 1) == GFpPoly(2, [1, 1])
    with pytest.raises(ValueError):
        shifted_power_minus_one(2, 0, 0)


@given(PRIMES, st.integers(0, 12), st.integers(1, 300))
@settings(max_examples=150)
def test_shifted_matches_expansion(p, lam, n):
    lam %= p
    expect = Poly((X + lam) ** n - 1, X, domain=GF(p))
    assert shifted_power_minus_one(p, lam, n) == from_sympy(p, expect)


def test_locus_examples():
    assert str(common_root_locus(2, 3)) == "x^2+x+1"
    assert common_root_locus(2, 3).degree == 2
    assert common_root_locus(2, 5) == GFpPoly(2, [1])
    assert common_root_locus(3, 13).degree == 3


def test_gcd_rejects():
    with pytest.raises(ValueError):
        poly_gcd(GFpPoly(3), GFpPoly(3))
    with pytest.raises(ValueError):
        poly_gcd(GFpPoly(3, [1]), GFpPoly(5, [1]))


@given(PRIMES, coeff_lists(), coeff_lists())
@settings(max_examples=200)
def test_gcd_matches_sympy(p, a, b):
    fa, fb = GFpPoly(p, a), GFpPoly(p, b)
    if fa.is_zero() and fb.is_zero():
        return
    g = poly_gcd(fa, fb)
    expect = to_sympy(fa).gcd(to_sympy(fb)).monic()
    assert g == from_sympy(p, expect)
    assert g.leading == 1


@given(PRIMES, coeff_lists(), coeff_lists(), coeff_lists())
@settings(max_examples=100)
def test_gcd_of_common_factor(p, a, b, c):
    fc = GFpPoly(p, c)
    if fc.is_zero():
        return
    fa, fb = GFpPoly(p, a) * fc, GFpPoly(p, b) * fc
    if fa.is_zero() and fb.is_zero():
        return
    g = poly_gcd(fa, fb)
    assert (fa % g).is_zero() and (fb % g).is_zero()
    assert (g % fc.monic()).is_zero()


@given(PRIMES, coeff_lists(), coeff_lists(20))
@settings(max_examples=150)
def test_divmod_identity(p, a, b):
    fa, fb = GFpPoly(p, a), GFpPoly(p, b)
    if fb.is_zero():
        with pytest.raises(ZeroDivisionError):
            divmod(fa, fb)
        return
    quo, rem = divmod(fa, fb)
    assert quo * fb + rem == fa
    assert rem.degree < fb.degree
    assert fa % fb == rem


@given(PRIMES, coeff_lists(15), coeff_lists(15), coeff_lists(15))
@settings(max_examples=100)
def test_ring_laws(p, a, b, c):
    fa, fb, fc = GFpPoly(p, a), GFpPoly(p, b), GFpPoly(p, c)
    assert fa * (fb + fc) == fa * fb + fa * fc
    assert fa + fb == fb + fa
    assert fa - fa == GFpPoly(p)
    assert (fa * fb).degree == (-1 if fa.is_zero() or fb.is_zero() else fa.degree + fb.degree)


@given(PRIMES, coeff_lists(10), st.integers(0, 500), coeff_lists(8))
@settings(max_examples=150)
def test_powmod_matches_repeated(p, a, e, m):
    fm = GFpPoly(p, m)
    if fm.degree < 1:
        return
    fa = GFpPoly(p, a)
    expect = GFpPoly(p, [1]) % fm
    base = fa % fm
    for _ in range(e % 60):
        expect = (expect * base) % fm
    assert poly_powmod(fa, e % 60, fm) == expect


def test_powmod_example():
    m = GFpPoly(2, [1, 1, 1])
    assert poly_powmod(GFpPoly(2, [1, 1]), 5, m) == GFpPoly(2, [0, 1])


def test_powmod_reducible_modulus_zero_divisor():
    # x * x == 0 mod x^2 over GF(3)
    m = GFpPoly(3, [0, 0, 1])
    assert poly_powmod(GFpPoly(3, [0, 1]), 3, m).is_zero()


@given(PRIMES, coeff_lists(12), st.integers(0, 12))
def test_evaluation(p, a, v):
    fa = GFpPoly(p, a)
    assert fa(v) == sum(c * v**i for i, c in enumerate(fa.coeffs)) % p


def test_str_rendering():
    assert str(GFpPoly(2)) == "0"
    assert str(GFpPoly(5, [3])) == "3"
    assert str(GFpPoly(3, [0, 2, 1])) == "x^2+2x"


@given(st.sampled_from([2, 3, 5]), st.integers(2, 400))
@settings(max_examples=80, deadline=None)
def test_locus_roots_are_common(p, n):
    """Every root of G in its splitting field makes every (x+l)^n - 1 vanish:
    G divides each (x+l)^n - 1."""
    if n % p == 0:
        return
    g = common_root_locus(p, n)
    assert g.leading == 1
    for lam in range(p):
        assert (shifted_power_minus_one(p, lam, n) % g).is_zero()
