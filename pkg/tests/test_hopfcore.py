from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hopforders import nikshych as nk
from hopforders.hopfcore import (
    Character, UnverifiedAlgebra, comultiply, convolve, dual_hopf, export_text, import_text, multiply,
    require_verified, tables_equal, tensor_multiply, verify_hopf_axioms,
)
from hopforders.nikshych import DualLabel, NikshychLabel as L
from hopforders.orders import group_algebra_cp, sigma_label


@pytest.fixture(scope="module")
def A3():
    return nk.build_A(3)


def test_multiply_examples(A3, H3):
    x = H3.b(L("gA1", 2, 1)) + H3.b(L("A0", 1, 2)) * 3
    assert multiply(H3, H3.one(), x) == x
    va, vb = A3.b(L("A1", 1, 0)), A3.b(L("A1", 0, 1))
    assert va * vb - (vb * va) * A3.tower.zeta(1) == A3.zero()
    assert (A3.b(L("A0", 0, 0)) * A3.b(L("A1", 0, 0))).is_zero()


def test_comultiply_examples(A3):
    T = A3.tower
    ua, va = A3.b(L("A0", 1, 0)), A3.b(L("A1", 1, 0))
    ub, vb, ub_inv = A3.b(L("A0", 0, 1)), A3.b(L("A1", 0, 1)), A3.b(L("A0", 0, 2))
    one = A3.one()
    assert comultiply(A3, one) == A3.tensor_of(one, one)
    assert comultiply(A3, ua) == A3.tensor_of(ua, ua) + A3.tensor_of(va, va)
    assert comultiply(A3, vb) == A3.tensor_of(ub, vb) + A3.tensor_of(vb, ub_inv)
    assert A3.antipode_of(vb) == vb
    assert A3.counit_of(va) == T.zero()


def test_tensor_multiply_examples(H3):
    ne = nk.named_elements(H3)
    one = H3.one()
    s = H3.tensor_of(ne["ua"], ne["g"]) + H3.tensor_of(ne["vb"], ne["e1"])
    assert tensor_multiply(H3, H3.tensor_of(one, one), s) == s
    x, y = ne["ua"], ne["va"]
    assert tensor_multiply(H3, H3.tensor_of(x, one), H3.tensor_of(one, y)) == H3.tensor_of(x, y)
    a, b = ne["g"], ne["ua"]
    got = tensor_multiply(H3, H3.tensor_of(one, a), H3.tensor_of(one, b), second_factor_opposite=True)
    assert got == H3.tensor_of(one, b * a)
    assert got != H3.tensor_of(one, a * b)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_group_algebra_passes(p):
    assert verify_hopf_axioms(group_algebra_cp(p)).ok


def test_H3_passes_and_mutation_fails():
    rep = verify_hopf_axioms(nk.build_H(3))
    assert rep.ok
    bad = verify_hopf_axioms(nk.build_H(3, mutate="a1a1"))
    assert not bad.ok
    assert all(c.witness for c in bad.failed())


def test_dual_of_group_algebra():
    KC = group_algebra_cp(3)
    D = dual_hopf(KC)
    d = lambda i: D.b(("*", sigma_label(i)))
    for i in range(3):
        for j in range(3):
            assert d(i) * d(j) == (d(i) if i == j else D.zero())
    assert tables_equal(dual_hopf(D), KC)


def test_double_dual_H3(H3):
    assert tables_equal(dual_hopf(dual_hopf(H3)), H3)


def test_dual_multiplication_rule(H3):
    Hs = dual_hopf(H3)
    phi = nk.dual_identification(3, Hs)
    T = H3.tower
    for i, j, k, l in [(1, 0, 0, 1), (1, 2, 2, 2), (2, 1, 1, 0), (0, 0, 1, 1)]:
        lhs = phi[DualLabel("gam", i, j)] * phi[DualLabel("gam", k, l)]
        rhs = phi[DualLabel("gam", (i + k) % 3, (j + l) % 3)] * T.zeta(i * l - j * k)
        assert lhs == rhs


def test_convolve_examples(H3, D3):
    x = H3.b(L("gA1", 1, 2)) + H3.b(L("A0", 2, 0))
    eps = Character(H3, dict(H3.counit))
    assert convolve(H3, eps, x) == x
    assert convolve(H3, eps, x, side="right") == x
    T = H3.tower
    gam1 = H3.elem({L("gA0", i, j): Fraction(1, 3) for i in range(3) for j in range(3)})
    gam2 = D3.elem({DualLabel("gamB", k, k): 1 for k in range(3)}) * T.sqrt_p().inverse()
    gamma2 = nk.dual_elem_to_character(3, H3, gam2)
    assert convolve(H3, gamma2, gam1) == H3.b(L("gA1", 0, 0))
    KC = group_algebra_cp(3)
    chi = Character(KC, {sigma_label(i): KC.tower.zeta(i) for i in range(3)})
    s = KC.b(sigma_label(1))
    assert convolve(KC, chi, s) == s * KC.tower.zeta(1)


def test_unverified_refused():
    H = nk.build_H(3)
    with pytest.raises(UnverifiedAlgebra):
        require_verified(H)
    verify_hopf_axioms(H)
    require_verified(H)


def test_export_import_round_trip(A3):
    assert tables_equal(import_text(export_text(A3)), A3)


# -- properties -------------------------------------------------------------

def test_antipode_identities_per_instance(H3, A3):
    for H in (H3, A3, group_algebra_cp(5)):
        assert H.antipode_of(H.one()) == H.one()
        for lab in H.basis:
            x = H.b(lab)
            assert H.counit_of(H.antipode_of(x)) == H.counit_of(x)
            assert H.antipode_of(H.antipode_of(x)) == x


def elements(H, n=3):
    lab = st.sampled_from(H.basis)
    coef = st.integers(-3, 3)
    return st.lists(st.tuples(lab, coef), min_size=1, max_size=n).map(
        lambda ts: sum((H.b(l) * c for l, c in ts), H.zero()))


H3_static = nk.build_H(3)


@given(elements(H3_static), elements(H3_static))
def test_comultiplication_is_multiplicative(x, y):
    H = H3_static
    assert comultiply(H, x * y) == tensor_multiply(H, comultiply(H, x), comultiply(H, y))


@given(elements(H3_static), elements(H3_static))
def test_counit_is_multiplicative(x, y):
    H = H3_static
    assert H.counit_of(x * y) == H.counit_of(x) * H.counit_of(y)


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_character_multiplicative_on_grouplikes(k, i, j):
    KC = group_algebra_cp(5)
    chi = Character(KC, {sigma_label(a): KC.tower.zeta(a * k) for a in range(5)})
    a, b = KC.b(sigma_label(i)), KC.b(sigma_label(j))
    assert chi(a * b) == chi(a) * chi(b)
