import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from hopforders.exactfield import CycElem, FieldTower
from hopforders.exactlinalg import (
    FieldMatrix, IntLattice, NotStable, RowEchelon, SingularMatrix, dual_lattice, fixed_sublattice,
    hnf, lattice_contains, solve_in_basis,
)


def span_in_box(gens, box=4, coef=6):
    # brute-force oracle: all small Z-combinations that land in a box
    out = set()
    for cs in itertools.product(range(-coef, coef + 1), repeat=len(gens)):
        v = tuple(sum(c * g[k] for c, g in zip(cs, gens)) for k in range(len(gens[0])))
        if all(abs(a) <= box for a in v):
            out.add(v)
    return out


def test_hnf_examples():
    L = hnf([(2, 0), (0, 2), (1, 1)])
    assert L.basis == ((1, 1), (0, 2))
    assert span_in_box([(2, 0), (0, 2), (1, 1)], coef=4) == span_in_box(list(L.basis), coef=8)
    assert hnf([], 3).rank == 0
    assert hnf([(1, 0), (0, 1)]).basis == ((1, 0), (0, 1))


def test_lattice_contains_examples():
    L = hnf([(1, 2, 0), (0, 1, 5), (0, 0, 1)])
    assert lattice_contains(L, (0, 0, 0))
    assert lattice_contains(L, (1, 2, 0))
    assert not lattice_contains(L, (Fraction(1, 2), 1, 0))
    with pytest.raises(ValueError):
        lattice_contains(L, (1, 2))


T12 = FieldTower(12, 3)


def test_solve_in_basis_examples():
    I = FieldMatrix([[int(i == j) for j in range(3)] for i in range(3)], T12)
    v = [T12.zeta_m(k) for k in range(3)]
    assert solve_in_basis(I, v) == v
    P = FieldMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]], T12)
    assert solve_in_basis(P, v) == [v[2], v[0], v[1]]
    rng = np.random.default_rng(5)
    rows = [[CycElem.from_coords(12, rng.integers(-3, 4, 4)) for _ in range(5)] for _ in range(5)]
    B = FieldMatrix(rows, T12)
    w = [CycElem.from_coords(12, rng.integers(-3, 4, 4)) for _ in range(5)]
    c = solve_in_basis(B, w)
    assert B.mul_vec(c) == w
    with pytest.raises(SingularMatrix):
        solve_in_basis(FieldMatrix([[1, 1], [1, 1]], T12), [1, 0])


def test_dual_lattice_examples():
    I3 = [[int(i == j) for j in range(3)] for i in range(3)]
    Z3 = hnf(I3)
    assert dual_lattice(Z3, I3) == Z3
    assert dual_lattice(hnf([(2,)]), [[1]]) == hnf([(Fraction(1, 2),)])


def test_fixed_sublattice_examples():
    Z2 = hnf([(1, 0), (0, 1)])
    assert fixed_sublattice(Z2, [[1, 0], [0, 1]]) == Z2
    assert fixed_sublattice(Z2, [[-1, 0], [0, -1]]).rank == 0
    assert fixed_sublattice(Z2, [[0, 1], [1, 0]]) == hnf([(1, 1)])
    with pytest.raises(NotStable):
        fixed_sublattice(hnf([(2, 0), (0, 1)]), [[0, 1], [1, 0]])


def test_row_echelon_kernel():
    R = RowEchelon(4, T12)
    assert R.add({0: 1, 1: T12.zeta_m()})
    assert R.add({1: 1, 2: 1})
    assert not R.add({0: 1, 1: T12.zeta_m() + 1, 2: 1})
    assert R.rank == 2
    for x in R.kernel():
        assert x[0] + T12.zeta_m() * x[1] == 0 and x[1] + x[2] == 0


# -- properties -------------------------------------------------------------

vec = lambda n: st.lists(st.integers(-6, 6), min_size=n, max_size=n)
gens = st.integers(1, 4).flatmap(lambda n: st.lists(vec(n), min_size=1, max_size=5))


@given(gens)
def test_hnf_idempotent_and_span_preserved(G):
    L = hnf(G)
    assert hnf(L.rational_basis(), L.ambient_rank) == L
    assert all(lattice_contains(L, g) for g in G)
    back = hnf(G)
    assert all(lattice_contains(back, r) for r in L.rational_basis())


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.lists(vec(n), min_size=n, max_size=n),
                                                    st.lists(vec(n), min_size=n, max_size=n))))
def test_dual_lattice_involution(data):
    B, G = data
    L = hnf(B)
    assume(L.rank == len(B))
    assume(np.linalg.matrix_rank(np.array(G, dtype=float)) == len(G))
    assert dual_lattice(dual_lattice(L, G), [list(r) for r in zip(*G)]) == L
