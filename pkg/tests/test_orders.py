from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hopforders import nikshych as nk
from hopforders import orders as od
from hopforders.hopfcore import Character, UnverifiedAlgebra, comultiply, verify_hopf_axioms
from hopforders.orders import sigma_label


def test_group_algebra_examples():
    K = od.group_algebra_cp(5)
    s = K.b(sigma_label(1))
    assert comultiply(K, s) == K.tensor_of(s, s)
    assert K.antipode_of(s) == K.b(sigma_label(4))
    assert all(K.counit_of(K.b(sigma_label(i))) == K.tower.one() for i in range(5))
    assert K.verified


def test_larson_bases():
    p = 3
    X = od.larson_order(p, "zeta-1")
    K = X.ambient
    x = K.b(sigma_label(1)) - K.one()
    assert X.free_basis == [K.one(), x, x * x]
    Xmax = od.larson_order(p, "1", K.tower, K)
    z1 = K.tower.zeta(1) - 1
    assert Xmax.free_basis == [K.one(), x / z1, (x * x) / (z1 * z1)]
    Xpi = od.larson_order(p, "pi")
    Kp = Xpi.ambient
    assert Xpi.contains((Kp.b(sigma_label(1)) - Kp.one()) * Kp.tower.t().inverse())
    with pytest.raises(od.ContainmentViolation):
        od.larson_order(p, "2")


def test_verify_hopf_order_examples():
    p = 3
    K = od.group_algebra_cp(p)
    group_ring = od.OrderLattice(K, [K.b(sigma_label(i)) for i in range(p)], "ZC")
    assert od.verify_hopf_order(group_ring).ok
    assert od.verify_hopf_order(od.larson_order(p, "pi")).ok
    # Z[zeta]-span of the group elements and (1/p) sum sigma^i
    N = K.elem({sigma_label(i): Fraction(1, p) for i in range(p)})
    bad = od.OrderLattice(K, [K.b(sigma_label(i)) for i in range(p - 1)] + [N], "bad")
    rep = od.verify_hopf_order(bad)
    assert not rep.ok
    assert {c.check_id for c in rep.failed()} & {"multiplication", "coproduct"}


def test_unverified_ambient_refused():
    H = nk.build_H(3, od.pi_tower(3))
    Y = od.nikshych_order(3, H)
    with pytest.raises(UnverifiedAlgebra):
        od.verify_hopf_order(Y)
    with pytest.raises(UnverifiedAlgebra):
        od.integrals(Y)


@pytest.mark.parametrize("p", [3, 5])
def test_integral_examples(p):
    X = od.larson_order(p, "zeta-1")
    K = X.ambient
    T = K.tower
    z1 = T.zeta(1) - 1
    lam = od.integrals(X)
    N = K.elem({sigma_label(i): 1 for i in range(p)})
    c = od.ratio_if_multiple(lam.generator, N * (z1 ** (p - 1) / T.scalar(p)))
    assert c is not None and od.is_unit(c)
    assert od.same_ideal(lam.ideal, T.scalar(p))
    Xpi = od.larson_order(p, "pi")
    Kp = Xpi.ambient
    Np = Kp.elem({sigma_label(i): 1 for i in range(p)}) * Kp.tower.sqrt_p().inverse()
    c = od.ratio_if_multiple(od.integrals(Xpi).generator, Np)
    assert c is not None and od.is_unit(c)


def test_dual_order_examples():
    p = 3
    K = od.group_algebra_cp(p)
    ZC = od.OrderLattice(K, [K.b(sigma_label(i)) for i in range(p)], "ZC")
    D = od.dual_order(ZC)
    # dual of the group ring is spanned by the dual (idempotent) basis
    assert all(D.contains(D.ambient.b(("*", sigma_label(i)))) for i in range(p))
    assert od.verify_hopf_order(D).ok
    Xpi = od.larson_order(p, "pi")
    assert od.orders_equal(od.dual_order(od.dual_order(Xpi)), Xpi)
    for alpha in ("zeta-1", "1", "pi"):
        X = od.larson_order(p, alpha)
        Kx = X.ambient
        for k in range(p):
            chi = Character(Kx, {sigma_label(i): Kx.tower.zeta(i * k) for i in range(p)})
            assert X.dual_contains(chi)


def test_larson_product_examples():
    assert od.larson_product_check(od.larson_order(3, "zeta-1"))
    a, b, ok = od.larson_product(od.larson_order(5, "pi"))
    sp = od.pi_tower(5).sqrt_p()
    assert ok and od.same_ideal(a, sp) and od.same_ideal(b, sp)


def test_ideal_condition_examples():
    for p in (3, 5, 7):
        assert od.check_ideal_condition(p, "pi")
        assert not od.check_ideal_condition(p, "zeta-1")
        assert not od.check_ideal_condition(p, "1")


def test_geometric_series_examples():
    Xpi = od.larson_order(3, "pi")
    K = Xpi.ambient
    s = od.geometric_series_member(Xpi, K.b(sigma_label(1)), K.one())
    assert s == K.elem({sigma_label(i): 1 for i in range(3)}) * K.tower.sqrt_p().inverse()
    e = K.one()
    assert od.geometric_series_member(Xpi, e, e) == e * K.tower.sqrt_p()
    with pytest.raises(od.PreconditionViolated):
        od.geometric_series_member(od.larson_order(3, "zeta-1", od.pi_tower(3)), K.b(sigma_label(1)), K.one())


@pytest.fixture(scope="module")
def Y3():
    return od.nikshych_order(3)


def test_nikshych_order_examples(Y3):
    H = Y3.ambient
    T = H.tower
    ne = nk.named_elements(H)
    assert Y3.rank == 36
    assert Y3.contains((ne["ua"] - ne["e0"]) * T.t().inverse())
    h = ne["ua"] + ne["va"]
    s, cur = H.zero(), H.one()
    for _ in range(3):
        s, cur = s + cur, cur * h
    assert Y3.contains(s * T.sqrt_p().inverse())
    for x in nk.cocharacters_H(3, H).values():
        assert Y3.contains(x)
    for chi in nk.characters_H(3, H):
        assert Y3.dual_contains(chi)


def test_nikshych_order_needs_pi():
    with pytest.raises(od.PreconditionViolated):
        od.nikshych_order(3, nk.build_H(3))


def test_nikshych_integrals(Y3):
    H = Y3.ambient
    lam = od.integrals(Y3)
    c = od.ratio_if_multiple(lam.generator, od.expected_integral_Y(3, H))
    assert c is not None and od.is_unit(c)
    assert od.same_ideal(lam.ideal, H.tower.scalar(6))


def test_verify_nikshych_order_p3(Y3):
    rep = od.verify_nikshych_order(3, Y3)
    assert rep.ok, [(c.check_id, c.witness) for c in rep.failed()]
    assert "O_K[pi]" in rep.parameters["note"]


def test_broken_basis_detected(Y3):
    H = Y3.ambient
    B = od.nikshych_basis(3, H)
    B[5] = B[5] * H.tower.t().inverse()
    assert not od.verify_hopf_order(od.OrderLattice(H, B, "bad")).ok


# -- properties -------------------------------------------------------------

LARSON = {a: od.larson_order(3, a, od.pi_tower(3)) for a in ("zeta-1", "pi", "1")}


@st.composite
def members(draw, X):
    coef = st.integers(-3, 3)
    out = X.ambient.zero()
    for b in X.free_basis:
        out = out + b * draw(coef)
    return out


@given(st.sampled_from(sorted(LARSON)), st.data())
def test_larson_closed_under_product(alpha, data):
    X = LARSON[alpha]
    x, y = data.draw(members(X)), data.draw(members(X))
    assert X.contains(x * y)
    assert X.tensor_contains(comultiply(X.ambient, x))


def test_larson_monotone():
    chain = [LARSON["zeta-1"], LARSON["pi"], LARSON["1"]]
    for small, big in zip(chain, chain[1:]):
        assert od.order_contained(small, big)
        assert not od.order_contained(big, small)


@pytest.mark.parametrize("alpha", ["zeta-1", "pi", "1"])
def test_larson_invariants(alpha):
    X = LARSON[alpha]
    T = X.ambient.tower
    a = od.named_ideal(3, alpha, T)[0].value(T)
    assert od.verify_hopf_order(X).ok
    assert od.same_ideal(od.integrals(X).ideal, a ** 2)
    assert od.larson_product_check(X)
    assert od.orders_equal(od.dual_order(od.dual_order(X)), X)
