"""Exact arithmetic: quadratic extensions, polynomials, partial fractions."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmgeo.algebra import (
    IrregularInfinityError,
    NonFuchsianError,
    Poly,
    QuadExt,
    RatFunc,
    descartes_bound,
    field_inv,
    field_sign,
    partial_fractions,
    rational_sqrt,
    sqrt_decompose,
)

fractions = st.fractions(
    min_value=-10, max_value=10, max_denominator=12
)
quads = st.builds(QuadExt, fractions, fractions, st.just(5))


# -- square roots ------------------------------------------------------------


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_sqrt(Fraction(0)) == 0


def test_sqrt_decompose():
    # sqrt(18/25) = (3/5) sqrt(2)
    assert sqrt_decompose(Fraction(18, 25)) == (Fraction(3, 5), 2)
    b, d = sqrt_decompose(Fraction(49, 9))
    assert (b, d) == (Fraction(7, 3), 1)


# -- quadratic field elements -------------------------------------------------


def test_quadext_perfect_square_collapses():
    x = QuadExt(1, 2, 4)  # 1 + 2*sqrt(4) = 5
    assert x.is_rational and x.to_fraction() == 5


@given(quads, quads)
@settings(max_examples=200, deadline=None)
def test_quadext_ring_axioms(x, y):
    assert x + y == y + x
    assert x * y == y * x
    assert x - y == -(y - x)
    assert (x + y) * (x - y) == x * x - y * y


@given(quads)
@settings(max_examples=200, deadline=None)
def test_quadext_inverse_and_float(x):
    if x:
        assert x * x.inverse() == QuadExt(1, 0, x.D)
        assert field_inv(x) * x == 1
    approx = float(x.a) + (float(x.b) * math.sqrt(x.D) if x.D else 0.0)
    assert math.isclose(float(x), approx, rel_tol=1e-12, abs_tol=1e-12)


@given(quads)
@settings(max_examples=200, deadline=None)
def test_quadext_sign_matches_float(x):
    f = float(x)
    if abs(f) > 1e-9:  # avoid float-noise on near-zero values
        assert x.sign() == (1 if f > 0 else -1)
    assert field_sign(x) == x.sign()


def test_quadext_conjugate_norm():
    x = QuadExt(3, 2, 5)
    assert x * x.conjugate() == QuadExt(x.norm(), 0, 5)
    assert x.norm() == 9 - 4 * 5


def test_quadext_mixed_field_arithmetic():
    # a rational-valued element joins any extension
    r = QuadExt(Fraction(1, 2), 0, None)
    x = QuadExt(0, 1, 3)
    assert r + x == QuadExt(Fraction(1, 2), 1, 3)
    assert Fraction(2) * x == QuadExt(0, 2, 3)
    with pytest.raises(ValueError):
        _ = QuadExt(0, 1, 2) + QuadExt(0, 1, 3)


# -- polynomials ---------------------------------------------------------------


def test_poly_basic_ops():
    p = Poly([1, 2, 3])  # 1 + 2x + 3x^2
    q = Poly([0, 1])  # x
    assert (p * q)[3] == 3
    assert p(2) == 17
    assert p.derivative() == Poly([2, 6])
    assert Poly.monomial(3, 5) == Poly([0, 0, 0, 5])


def test_poly_divmod_and_gcd():
    a = Poly.from_roots([1, 2, 3])
    b = Poly.from_roots([2, 3, 4])
    g = a.gcd(b)
    assert g.monic() == Poly.from_roots([2, 3])
    q, r = divmod(a, Poly.from_roots([1]))
    assert r.is_zero() and q == Poly.from_roots([2, 3])
    with pytest.raises(ValueError):
        a.exact_div(Poly.from_roots([5]))


@given(
    st.lists(fractions, max_size=5),
    st.lists(fractions, min_size=1, max_size=4),
)
@settings(max_examples=150, deadline=None)
def test_poly_divmod_identity(ac, bc):
    a, b = Poly(ac), Poly(bc)
    if b.is_zero():
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


def test_poly_quadext_coefficients():
    s5 = QuadExt(0, 1, 5)
    p = Poly.from_roots([s5, -s5])  # x^2 - 5
    assert p == Poly([QuadExt(-5, 0, 5), QuadExt(0, 0, 5), QuadExt(1, 0, 5)])
    assert p(3) == 4


def test_descartes_bound():
    assert descartes_bound(Poly([-6, 11, -6, 1])) == 3  # (x-1)(x-2)(x-3)
    assert descartes_bound(Poly([1, 1, 1])) == 0
    with pytest.raises(ValueError):
        descartes_bound(Poly.zero())


# -- rational functions ---------------------------------------------------------


def test_ratfunc_reduction():
    f = RatFunc(Poly([0, 2, 2]), Poly([0, 0, 4]))  # (2x + 2x^2)/(4x^2)
    assert f == RatFunc(Poly([1, 1]), Poly([0, 2]))
    assert f.den.leading() == 1  # monic denominator normal form


def test_ratfunc_derivative():
    f = RatFunc(Poly([1]), Poly([0, 1]))  # 1/x
    assert f.derivative() == RatFunc(Poly([-1]), Poly([0, 0, 1]))
    g = RatFunc(Poly([0, 0, 1]))  # x^2
    assert (f * g).derivative() == RatFunc(Poly([1]))


@given(st.lists(fractions, min_size=1, max_size=4), st.lists(fractions, min_size=1, max_size=4))
@settings(max_examples=100, deadline=None)
def test_ratfunc_field_ops(nc, dc):
    num, den = Poly(nc), Poly(dc)
    if num.is_zero() or den.is_zero():
        return
    f = RatFunc(num, den)
    assert f / f == RatFunc(Poly([1]))
    assert f - f == RatFunc.zero()
    assert (f + 1) * (f - 1) == f * f - 1


# -- partial fractions ------------------------------------------------------------


def test_partial_fractions_round_trip():
    # f = 2/(z-1)^2 + 3/(z-1) - 3/(z+2)
    a, b = Fraction(1), Fraction(-2)
    f = (
        RatFunc(Poly([2]), Poly.from_roots([a, a]))
        + RatFunc(Poly([3]), Poly.from_roots([a]))
        - RatFunc(Poly([3]), Poly.from_roots([b]))
    )
    pf = partial_fractions(f, [a, b])
    assert pf.betas == (2, 0)
    assert pf.deltas == (3, -3)
    assert pf.beta_inf == 2 + 3 * a - 3 * b  # coefficient of 1/z^2 at infinity


def test_partial_fractions_quadext_poles():
    s2 = QuadExt(0, 1, 2)
    f = RatFunc(Poly([QuadExt(1, 0, 2)]), Poly.from_roots([s2, -s2]))
    pf = partial_fractions(f, [s2, -s2])
    # 1/(z^2-2) = (1/(2 sqrt 2))/(z - sqrt 2) - (1/(2 sqrt 2))/(z + sqrt 2)
    assert pf.deltas[0] == QuadExt(0, Fraction(1, 4), 2)
    assert pf.deltas[1] == -pf.deltas[0]
    assert pf.beta_inf == 1


def test_partial_fractions_rejects_high_order_pole():
    f = RatFunc(Poly([1]), Poly.from_roots([0, 0, 0]))
    with pytest.raises(NonFuchsianError):
        partial_fractions(f, [Fraction(0)])


def test_partial_fractions_rejects_undeclared_pole():
    f = RatFunc(Poly([1]), Poly.from_roots([0, 1]))
    with pytest.raises(NonFuchsianError):
        partial_fractions(f, [Fraction(0)])


def test_partial_fractions_rejects_improper():
    f = RatFunc(Poly([0, 0, 1]), Poly.from_roots([0]))
    with pytest.raises(NonFuchsianError):
        partial_fractions(f, [Fraction(0)])


def test_partial_fractions_rejects_nonzero_residue_sum():
    f = RatFunc(Poly([1]), Poly.from_roots([0]))  # 1/z alone
    with pytest.raises(IrregularInfinityError):
        partial_fractions(f, [Fraction(0)])
