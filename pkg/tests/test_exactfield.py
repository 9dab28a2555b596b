from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from hopforders.descent import load_example_element
from hopforders.exactfield import (
    CycElem, DivisionByZero, FieldTower, QuadElem, UnsupportedTower, cyc_inverse, cyc_reduce,
    euler_phi, format_literal, galois_conjugate, is_integral, parse_literal, sqrt_p,
)

X = sympy.Symbol("x")


def sympy_reduce(poly, m):
    # independent oracle: remainder modulo the cyclotomic polynomial
    f = sum(sympy.Rational(c) * X**k for k, c in enumerate(poly))
    r = sympy.Poly(sympy.rem(f, sympy.cyclotomic_poly(m, X), X), X)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(r.all_coeffs())]
    return coeffs + [Fraction(0)] * (euler_phi(m) - len(coeffs))


def numeric(x: CycElem):
    z = np.exp(2j * np.pi / x.m)
    return sum(float(c) * z**k for k, c in enumerate(x.coords))


def test_cyc_reduce_examples():
    assert cyc_reduce([0, 0, 1], 4) == CycElem.from_rational(4, -1)
    assert cyc_reduce([1, 1, 1], 3).is_zero()
    assert cyc_reduce({28: 1}, 28) == CycElem.from_rational(28, 1)


@pytest.mark.parametrize("m", [3, 4, 12, 20, 28])
def test_cyc_reduce_matches_sympy(m):
    rng = np.random.default_rng(m)
    for _ in range(5):
        poly = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, 2 * m), rng.integers(1, 5, 2 * m))]
        assert list(cyc_reduce(poly, m).coords) == sympy_reduce(poly, m)


def test_inverse_examples():
    one = CycElem.from_rational(28, 1)
    assert cyc_inverse(one) == one
    for m, p in ((12, 3), (20, 5), (28, 7)):
        x = 1 - CycElem.zeta(m, m // p)
        assert cyc_inverse(x) * x == CycElem.from_rational(m, 1)
    with pytest.raises(DivisionByZero):
        cyc_inverse(CycElem.from_rational(12, 0))


def test_inverse_of_bundled_element():
    E, doc = load_example_element()
    w = cyc_inverse(E)
    assert w * E == CycElem.from_rational(28, 1)
    assert w.is_integral()


@pytest.mark.parametrize("m,p", [(12, 3), (20, 5), (28, 7), (60, 5), (60, 3)])
def test_sqrt_p_squares_to_p(m, p):
    s = sqrt_p(FieldTower(m, p))
    assert s * s == CycElem.from_rational(m, p)
    assert abs(abs(numeric(s)) - p ** 0.5) < 1e-9


def test_sqrt_p_needs_four():
    with pytest.raises(UnsupportedTower):
        sqrt_p(FieldTower(15, 5))


def test_is_integral_examples():
    assert not is_integral(CycElem.zeta(12) * Fraction(1, 2))
    T = FieldTower(12, 3, CycElem.from_rational(12, 1))
    assert is_integral((1 + T.t()) * Fraction(1, 2))
    E, _ = load_example_element()
    w = cyc_inverse(E)
    r = w * (1 - CycElem.zeta(28, 4))
    T = FieldTower(28, 7, r)
    assert is_integral((1 + T.t()) * Fraction(1, 2))


def test_galois_conjugate_examples():
    T = FieldTower(12, 3, CycElem.zeta(12, 4) - 1)
    t = T.t()
    assert galois_conjugate(t) == -t
    a = T.scalar(CycElem.zeta(12))
    assert galois_conjugate(a) == a


def test_literal_round_trip():
    T = FieldTower(12, 3, CycElem.zeta(12, 4) - 1)
    for s in ("0", "1", "-1/2+3*z^2", "z*t", "2-z^3*t+1/3*t"):
        x = parse_literal(s, T)
        assert parse_literal(format_literal(x), T) == T.scalar(x)


# -- properties -------------------------------------------------------------

MS = st.sampled_from([(12, 3), (20, 5), (28, 7)])
small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def cyc(draw, m=None, integral=False):
    m = m or draw(MS)[0]
    coef = st.integers(-4, 4) if integral else small
    return CycElem.from_coords(m, draw(st.lists(coef, min_size=euler_phi(m), max_size=euler_phi(m))))


@st.composite
def triples(draw):
    m, _ = draw(MS)
    return draw(cyc(m)), draw(cyc(m)), draw(cyc(m))


@st.composite
def quad_triples(draw, integral=False):
    m, p = draw(MS)
    T = FieldTower(m, p, CycElem.zeta(m, m // p) - 1)
    q = lambda: QuadElem(T, draw(cyc(m, integral)), draw(cyc(m, integral)))
    return q(), q(), q()


@given(triples())
def test_field_axioms_cyc(xyz):
    x, y, z = xyz
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if not x.is_zero():
        assert x * cyc_inverse(x) == CycElem.from_rational(x.m, 1)


@given(quad_triples())
def test_field_axioms_quad(xyz):
    x, y, z = xyz
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if not x.is_zero():
        assert x * x.inverse() == x.tower.one()


@given(MS.flatmap(lambda mp: st.lists(small, min_size=0, max_size=3 * mp[0]).map(lambda c: (mp[0], c))))
def test_cyc_reduce_idempotent(mc):
    m, poly = mc
    x = cyc_reduce(poly, m)
    assert cyc_reduce(list(x.coords), m) == x
    # canonical: equality is coordinate equality
    assert (x == cyc_reduce(poly + [0] * m, m)) and x.coords == cyc_reduce(poly + [0] * m, m).coords


@given(quad_triples(integral=True))
def test_integral_elements_form_a_ring(xyz):
    x, y, _ = xyz
    assert is_integral(x) and is_integral(y)
    assert is_integral(x + y) and is_integral(x * y)


@given(quad_triples())
def test_galois_is_ring_hom(xyz):
    x, y, _ = xyz
    assert galois_conjugate(x * y) == galois_conjugate(x) * galois_conjugate(y)
    assert galois_conjugate(x + y) == galois_conjugate(x) + galois_conjugate(y)
    assert galois_conjugate(galois_conjugate(x)) == x
