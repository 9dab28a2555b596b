"""Acceptance gate: criteria 1-10, exact arithmetic, zero tolerance.

Each criterion is one test; the terminal summary prints one PASS/FAIL line
per criterion.  The p = 5 runs take several minutes.  Set
HOPFORDERS_HNF_BUDGET (seconds) to give the flattened-lattice route of
criterion 10 more time than the default.
"""

import os
import time

import pytest

from hopforders import descent as ds
from hopforders import nikshych as nk
from hopforders import orders as od
from hopforders.exactfield import CycElem
from hopforders.hopfcore import verify_hopf_axioms
from hopforders.nikshych import DualLabel, NikshychLabel as L

HNF_BUDGET = float(os.environ.get("HOPFORDERS_HNF_BUDGET", "60"))


def failures(rep):
    return [(c.check_id, c.witness) for c in rep.failed()][:5]


@pytest.fixture(scope="module")
def algebras():
    """p -> (H, axiom report, seconds); H_5 is verified once and reused."""
    out = {}
    for p in (3, 5):
        t0 = time.perf_counter()
        H = nk.build_H(p)
        rep = verify_hopf_axioms(H)
        out[p] = (H, rep, time.perf_counter() - t0)
        if rep.ok:
            nk.verified_H(p, H=H)
    return out


@pytest.fixture(scope="module")
def duals(algebras):
    return {p: nk.build_H_dual_tables(p, algebras[p][0].tower) for p in (3, 5)}


def test_criterion_01_hopf_axioms(algebras):
    for p, limit in ((3, 60), (5, 15 * 60)):
        H, rep, secs = algebras[p]
        assert rep.ok, failures(rep)
        assert H.dim == 4 * p * p
        assert secs < limit, f"p={p} took {secs:.0f} s"
    for part in nk.OMEGA_PARTS:
        bad = verify_hopf_axioms(nk.build_H(3, mutate=part))
        assert not bad.ok, part
        assert all(c.witness for c in bad.failed())


def test_criterion_02_dual_coincidence(algebras, duals):
    for p in (3, 5):
        rep = nk.verify_dual_coincidence(p, algebras[p][0], duals[p])
        assert rep.ok, failures(rep)


def test_criterion_03_representations(algebras, duals):
    for p in (3, 5):
        H, D = algebras[p][0], duals[p]
        reps = nk.irreps_H(p, H)
        assert len(reps) == 2 * p + p * (p - 1) // 2 + 2
        assert sum(r.dim ** 2 for r in reps) == 4 * p * p
        rep = nk.verify_characters(p, H, D)
        assert rep.ok, failures(rep)


def test_criterion_04_self_duality(algebras, duals):
    for p in (3, 5):
        H, D = algebras[p][0], duals[p]
        im = nk.self_duality_map(p, H, D)
        gbar = im[L("gA0", 0, 0)] + im[L("gA1", 0, 0)]
        assert gbar * gbar == D.one()
        assert im[L("A1", 0, 0)] == D.b(DualLabel("gam", 0, 0))
        rep = nk.verify_self_duality(p, H, D)
        assert rep.ok, failures(rep)


def test_criterion_05_automorphisms(algebras):
    H = algebras[3][0]
    group = nk.hopf_automorphisms(3, H)
    assert len(group) == 12
    rep = nk.verify_automorphisms(3, H, group)
    assert rep.ok, failures(rep)


def test_criterion_06_larson_orders():
    for p in (3, 5, 7):
        for alpha in ("zeta-1", "1", "pi"):
            rep = od.verify_larson(p, alpha)
            assert rep.ok, (p, alpha, failures(rep))
            if alpha == "pi":
                assert rep.get("pisigmae/geometric_series").ok
                assert rep.get("pisigmae/(sigma-1)/pi").ok


def test_criterion_07_nikshych_order(algebras):
    for p, limit in ((3, None), (5, 30 * 60)):
        assert algebras[p][1].ok
        t0 = time.perf_counter()
        Y = od.nikshych_order(p)
        rep = od.verify_nikshych_order(p, Y)
        secs = time.perf_counter() - t0 + algebras[p][2]
        assert rep.ok, (p, failures(rep))
        for name in od.forced_elements(p, Y.ambient):
            assert rep.get(f"forced/{name}").ok
        for cid in ("integrals/generator", "integrals/eps_is_2p", "larson_product",
                    "coproduct/Delta(g)/A0xA0", "antipode"):
            assert rep.get(cid).ok
        if limit:
            assert secs < limit


def test_criterion_08_ideal_condition():
    for p in (3, 5, 7):
        assert od.check_ideal_condition(p, "pi") is True
        assert od.check_ideal_condition(p, "zeta-1") is False


def test_criterion_09_descent_example():
    t0 = time.perf_counter()
    E, _ = ds.load_example_element()
    params = ds.example_params("either")
    assert params.w * E == CycElem.from_rational(28, 1)
    assert ds.check_descent_condition(params)
    assert time.perf_counter() - t0 < 10
    # the printed unit satisfies the example's sign convention
    assert ds.satisfied_convention(params) == "paper-example"


def test_criterion_10_invariant_order():
    params = ds.example_params("either")
    inv = ds.invariant_order(params, full_lattice=HNF_BUDGET > 0, budget=HNF_BUDGET)
    rep = inv.report
    witnesses = [c for c in rep.checks if not c.check_id.startswith("full_lattice/")]
    assert witnesses and all(c.ok for c in witnesses), failures(rep)
    for name in ("x_a", "x_b", "y_a", "y_b"):
        assert rep.get(f"{name}/sigma'(x~)=x~+tq").ok
        assert rep.get(f"{name}/q_invariant").ok and rep.get(f"{name}/z_invariant").ok
    assert rep.get("full_lattice/certificate").ok
    if HNF_BUDGET > 0:
        assert rep.get("full_lattice/hnf").status in ("pass", "skipped")
