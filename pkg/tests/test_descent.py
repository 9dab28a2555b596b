import json
import time

import pytest
from hypothesis import given, strategies as st

from hopforders import descent as ds
from hopforders import nikshych as nk
from hopforders.exactfield import CycElem, FieldTower, QuadElem, cyc_inverse, parse_literal
from hopforders.hopfcore import comultiply


def test_bundled_element_and_condition():
    t0 = time.perf_counter()
    E, doc = ds.load_example_element()
    params = ds.example_params()
    assert params.w * E == CycElem.from_rational(28, 1)
    assert ds.check_descent_condition(params)
    assert time.perf_counter() - t0 < 10
    details = ds.condition_details(params)
    assert details == {"paper-theorem": False, "paper-example": True}
    assert ds.satisfied_convention(params) == "paper-example"


def test_theorem_convention_alone_fails():
    params = ds.example_params("paper-theorem")
    assert not ds.check_descent_condition(params)
    with pytest.raises(ds.ConditionFailed):
        ds.invariant_order(params)


def test_condition_counterexamples():
    T = FieldTower(28, 7)
    one = T.cyc(1)
    assert not ds.check_descent_condition(ds.DescentParams(28, 7, one, one))
    for p, n in ((3, 12), (5, 20), (7, 28)):
        Tn = FieldTower(n, p)
        w = Tn.cyc(CycElem.zeta(n, 1))
        assert not ds.check_descent_condition(ds.DescentParams(n, p, w, Tn.cyc(0)))


def test_not_a_unit():
    T = FieldTower(28, 7)
    with pytest.raises(ds.NotAUnit):
        ds.check_descent_condition(ds.DescentParams(28, 7, T.cyc(2), T.cyc(1)))


def test_bad_params():
    T = FieldTower(28, 7)
    with pytest.raises(ValueError):
        ds.DescentParams(28, 5, T.cyc(1), T.cyc(1))
    with pytest.raises(ValueError):
        ds.DescentParams(28, 7, T.cyc(1), T.cyc(1), "other")


def test_checksum_guard(tmp_path):
    from importlib import resources
    doc = json.loads(resources.files("hopforders.data").joinpath(ds.DATA_FILE).read_text())
    doc["coefficients"]["0"] = str(int(doc["coefficients"]["0"]) + 1)
    path = tmp_path / "tampered.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ds.ChecksumMismatch):
        ds.load_example_element(path)


T3 = FieldTower(12, 3, CycElem.zeta(12, 4) - 1)
H3pi = nk.build_H(3, T3)
SP = ds.sigma_prime(3, T3, H3pi)


def test_sigma_prime_examples():
    ne = nk.named_elements(H3pi)
    assert SP(ne["g"]) == ne["g"]
    t1 = H3pi.one() * T3.t()
    assert SP(t1) == -t1
    assert all(SP(SP(H3pi.b(l))) == H3pi.b(l) for l in H3pi.basis)
    assert ds.verify_sigma_prime(3, T3, H3pi).ok


def test_sigma_prime_needs_radicand():
    with pytest.raises(ValueError):
        ds.sigma_prime(3, FieldTower(12, 3))


def test_witness_identities_small():
    # the identities do not need the condition; membership of theta-multiples does
    T = FieldTower(12, 3)
    params = ds.DescentParams(12, 3, T.cyc(1), T.cyc(1), "paper-theorem")
    rep, _ = ds.witness_suite(params, "paper-theorem")
    for c in rep.checks:
        if "theta" not in c.check_id and not c.check_id.endswith(("z_in_Y",)):
            assert c.ok, c.check_id


def test_flattened_route_small():
    # over Z[zeta][t] alone the invariants do not span Y: theta is needed
    T = FieldTower(12, 3)
    params = ds.DescentParams(12, 3, T.cyc(1), T.cyc(1), "paper-theorem")
    r = ds.full_lattice_check(params, "paper-theorem", ring="t")
    assert (r["rank"], r["fixed_rank"]) == (288, 144)
    assert not r["equal"]


# -- properties -------------------------------------------------------------

labs = st.sampled_from(H3pi.basis)
scal = st.tuples(st.integers(-2, 2), st.integers(0, 11), st.integers(-2, 2)).map(
    lambda s: QuadElem(T3, CycElem.zeta(12, s[1]) * s[0], CycElem.from_rational(12, s[2])))
elems = st.lists(st.tuples(labs, scal), min_size=1, max_size=3).map(
    lambda ts: sum((H3pi.b(l) * c for l, c in ts), H3pi.zero()))


@given(elems, elems)
def test_sigma_prime_is_semilinear_hopf_map(x, y):
    H = H3pi
    assert SP(x * y) == SP(x) * SP(y)
    assert SP(x + y) == SP(x) + SP(y)
    lhs = H.tensor()
    for (a, b), c in comultiply(H, x):
        lhs = lhs + H.tensor_of(SP(H.b(a)), SP(H.b(b))) * c.conjugate()
    assert comultiply(H, SP(x)) == lhs
    assert H.antipode_of(SP(x)) == SP(H.antipode_of(x))
    assert H.counit_of(SP(x)) == H.counit_of(x).conjugate()
    assert SP(SP(x)) == x


UNITS = [CycElem.zeta(28, 1), 1 + CycElem.zeta(28, 1), 1 - CycElem.zeta(28, 3)]


@given(st.lists(st.sampled_from(range(3)), max_size=3), st.sampled_from(["0", "1", "z", "1+z^2"]))
def test_condition_invariant_under_unit_rescaling(us, d_text):
    # (d u + t u)/2 = u (d + t)/2, so scaling w by u^2 and d by u changes nothing
    base = ds.example_params()
    T = FieldTower(28, 7)
    u = T.cyc(1)
    for k in us:
        u = u * UNITS[k]
    assert u.is_unit()
    d = T.cyc(parse_literal(d_text, T))
    a = ds.condition_details(ds.DescentParams(28, 7, base.w, d))
    b = ds.condition_details(ds.DescentParams(28, 7, base.w * u * u, d * u))
    assert a == b
