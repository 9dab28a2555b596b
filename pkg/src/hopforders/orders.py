"""Hopf orders: Larson orders of KC_p, the order Y of H_p, dual orders and integrals.

Every order here is free over the coefficient ring of its tower, so it is
stored by a free basis.  Membership of x means: the coordinates of x in that
basis are integral.  Two integrality notions are available:

* ``"ring"``: coordinates lie in Z[zeta_m][t] (the default, and the ring the
  reports name);
* ``"closure"``: coordinates are algebraic integers (characteristic
  polynomial test).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactfield import CycElem, FieldTower, QuadElem
from .exactlinalg import FieldMatrix, RowEchelon, SingularMatrix
from .hopfcore import (Character, HopfData, HopfElem, Report, TensorElem, dual_hopf, require_verified,
                       tables_equal, verify_hopf_axioms)
from .hopfcore._sparse import Terms
from .hopfcore.verify import _basis_terms
from . import nikshych as nk

_I64 = np.int64
_CHUNK = 2_000_000


class ContainmentViolation(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class NotPrincipal(ArithmeticError):
    pass


class NotAMember(ValueError):
    pass


def in_ring(x) -> bool:
    """x lies in Z[zeta_m] (or Z[zeta_m][t])."""
    if isinstance(x, QuadElem):
        return x.a.den == 1 and x.b.den == 1
    if isinstance(x, CycElem):
        return x.den == 1
    return Fraction(x).denominator == 1


def is_integral(x, mode="ring") -> bool:
    if mode == "ring":
        return in_ring(x)
    if mode == "closure":
        return x.is_integral() if hasattr(x, "is_integral") else Fraction(x).denominator == 1
    raise ValueError("integrality mode must be 'ring' or 'closure'")


def is_unit(x, mode="ring") -> bool:
    if x.is_zero():
        return False
    return is_integral(x, mode) and is_integral(x.inverse(), mode)


def same_ideal(x, y, mode="ring") -> bool:
    """(x) = (y) as principal ideals, i.e. x/y is a unit."""
    if x.is_zero() or y.is_zero():
        return x.is_zero() and y.is_zero()
    return is_unit(x / y, mode)


def ring_name(tower: FieldTower) -> str:
    base = f"Z[zeta_{tower.m}]"
    return base + "[t]" if tower.has_t else base


# -- ideals -------------------------------------------------------------------


@dataclass(frozen=True)
class IdealSpec:
    """Principal (fractional) ideal (generator) or its inverse."""

    generator: object
    inverse: bool = False
    name: str = ""

    def value(self, tower: FieldTower):
        g = tower.scalar(self.generator)
        return g.inverse() if self.inverse else g

    def __str__(self):
        s = self.name or str(self.generator)
        return f"({s})^-1" if self.inverse else f"({s})"


def pi_tower(p: int) -> FieldTower:
    return nk.nikshych_tower(p, with_pi=True)


def named_ideal(p: int, name: str, tower: FieldTower | None = None) -> tuple[IdealSpec, FieldTower]:
    """'zeta-1', '1', 'pi' or 'sqrt-p'; returns the ideal and a tower carrying it."""
    if name == "pi":
        T = tower if tower is not None and tower.has_t else pi_tower(p)
        return IdealSpec(T.t(), name="pi"), T
    T = tower or nk.nikshych_tower(p)
    if name in ("zeta-1", "z-1"):
        return IdealSpec(T.zeta(1) - 1, name="zeta-1"), T
    if name == "1":
        return IdealSpec(T.one(), name="1"), T
    if name == "sqrt-p":
        return IdealSpec(T.sqrt_p(), name="sqrt-p"), T
    return IdealSpec(T.parse(name), name=name), T


def check_ideal_condition(p: int, alpha, tower: FieldTower | None = None) -> bool:
    """alpha^(2(p-1)) generates (p)."""
    if isinstance(alpha, str):
        spec, tower = named_ideal(p, alpha, tower)
        alpha = spec.value(tower)
    elif isinstance(alpha, IdealSpec):
        alpha = alpha.value(tower or nk.nikshych_tower(p))
    if alpha.is_zero():
        return False
    return same_ideal(alpha ** (2 * (p - 1)), alpha * 0 + p)


# -- KC_p ----------------------------------------------------------------------


def sigma_label(i: int) -> str:
    return f"sigma^{i}"


def group_algebra_cp(p: int, tower: FieldTower | None = None) -> HopfData:
    """KC_p on the group-like basis sigma^i."""
    T = tower or nk.nikshych_tower(p)
    B = [sigma_label(i) for i in range(p)]
    mult = {(B[i], B[j]): {B[(i + j) % p]: 1} for i in range(p) for j in range(p)}
    comult = {b: {(b, b): 1} for b in B}
    counit = {b: 1 for b in B}
    antipode = {B[i]: {B[-i % p]: 1} for i in range(p)}
    H = HopfData(T, B, {B[0]: 1}, mult, comult, counit, antipode, name=f"KC_{p}")
    verify_hopf_axioms(H)
    return H


# -- orders --------------------------------------------------------------------


class OrderLattice:
    """Free order of ``ambient`` given by a basis of ambient.dim elements."""

    def __init__(self, ambient: HopfData, free_basis, name="", inverse: FieldMatrix | None = None, tag="free"):
        self.ambient = ambient
        self.free_basis = [b if isinstance(b, HopfElem) else ambient.elem(b) for b in free_basis]
        self.name = name
        self.tag = tag
        n = ambient.dim
        if len(self.free_basis) != n:
            raise ValueError(f"a free basis needs {n} elements, got {len(self.free_basis)}")
        idx = ambient.index
        cols = [dict() for _ in range(n)]
        for k, b in enumerate(self.free_basis):
            for lab, c in b:
                cols[idx[lab]][k] = c
        self.matrix = FieldMatrix.from_sparse(cols, n, ambient.tower)  # columns are basis vectors
        self._inverse = inverse
        self._tables = None

    def __repr__(self):
        return f"OrderLattice({self.name or '?'}, rank={len(self.free_basis)}, over {ring_name(self.ambient.tower)})"

    @property
    def inverse(self) -> FieldMatrix:
        if self._inverse is None:
            try:
                self._inverse = self.matrix.inverse()
            except SingularMatrix:
                raise ValueError("basis does not span the ambient algebra") from None
        return self._inverse

    @property
    def rank(self) -> int:
        return len(self.free_basis)

    def tables(self):
        """(F: order index -> ambient terms, C: ambient index -> order coordinates)."""
        if self._tables is None:
            H = self.ambient
            R = H.ring
            idx = H.index
            F = R.table([[((idx[lab],), c) for lab, c in b] for b in self.free_basis], self.rank, 1)
            Q = self.inverse
            cols = [[] for _ in range(H.dim)]
            for k, row in enumerate(Q.rows):
                for j, v in row.items():
                    cols[j].append(((k,), v))
            C = R.table(cols, H.dim, 1)
            self._tables = (F, C)
        return self._tables

    def coords(self, x: HopfElem) -> list:
        idx = self.ambient.index
        v = [self.ambient.tower.zero()] * self.rank
        for lab, c in x:
            v[idx[lab]] = c
        return self.inverse.mul_vec(v)

    def contains(self, x: HopfElem, mode="ring") -> bool:
        return all(is_integral(c, mode) for c in self.coords(x))

    __contains__ = contains

    def tensor_contains(self, t: TensorElem, mode="ring") -> bool:
        T = self.ambient.to_terms(t, 2)
        return not self._bad_keys(self._to_coords(T, (0, 1)), mode)

    def dual_contains(self, f: Character, mode="ring") -> bool:
        """f lies in the dual order: f(b) is integral on every basis element."""
        return all(is_integral(f(b), mode) for b in self.free_basis)

    def _to_coords(self, T: Terms, cols) -> Terms:
        R = self.ambient.ring
        _, C = self.tables()
        for c in cols:
            T = R.compact(R.apply_unary(T, c, C))
        return T

    def _bad_keys(self, T: Terms, mode="ring") -> list:
        R = self.ambient.ring
        bad, T = R.integral_mask_keys(T)
        if not bad:
            return []
        if mode == "ring":
            return sorted(bad)
        items = R.to_items(T)
        return sorted(k for k in bad if not is_integral(items[k], "closure"))


def orders_equal(X: OrderLattice, Y: OrderLattice, mode="ring") -> bool:
    if X.ambient is not Y.ambient and not tables_equal(X.ambient, Y.ambient):
        return False
    Yb = [Y.ambient.elem(dict(b.terms)) for b in Y.free_basis]
    Xb = [X.ambient.elem(dict(b.terms)) for b in X.free_basis]
    return all(X.contains(X.ambient.elem(dict(b.terms)), mode) for b in Yb) and \
        all(Y.contains(Y.ambient.elem(dict(b.terms)), mode) for b in Xb)


def order_contained(X: OrderLattice, Y: OrderLattice, mode="ring") -> bool:
    """X is a subset of Y."""
    return all(Y.contains(Y.ambient.elem(dict(b.terms)), mode) for b in X.free_basis)


def verify_hopf_order(X: OrderLattice, mode="ring", sectors=None) -> Report:
    """1 in X, XX in X, Delta(X) in X (x) X, eps(X) integral, S(X) in X, checked on the free basis.

    ``sectors`` is an optional map name -> predicate on ambient label pairs;
    failures of the coproduct check are then also counted per sector.
    """
    H = X.ambient
    require_verified(H)
    R = H.ring
    n = X.rank
    F, C = X.tables()
    c = H.compiled()
    rep = Report("verify_hopf_order", {"order": X.name, "ambient": H.name, "rank": n,
                                       "ring": ring_name(H.tower), "integrality": mode})
    # unit
    U = X._to_coords(R.compact(c["unit"]), (0,))
    bad = X._bad_keys(U, mode)
    rep.add("unit", not bad, bad and f"1 has non-integral coordinate at b{bad[0][0]}", failures=len(bad))
    # multiplication, chunked over the first factor
    fails, wit = 0, None
    for i in range(n):
        js = np.arange(n, dtype=_I64)
        T = Terms(np.stack([np.full(n, i), js, js], axis=1).astype(_I64), np.zeros(n, _I64),
                  np.zeros(n, np.int8), np.ones(n, _I64), 1)
        T = R.apply_unary(R.apply_unary(T, 0, F), 1, F)
        T = R.compact(R.apply_binary(T, 0, 1, c["mult"]))
        bad = X._bad_keys(X._to_coords(T, (0,)), mode)
        if bad:
            pairs = sorted({k[1] for k in bad})
            fails += len(pairs)
            if wit is None:
                wit = f"b{i}*b{pairs[0]} not in {X.name or 'X'}: {X.free_basis[i]} * {X.free_basis[pairs[0]]}"
    rep.add("multiplication", fails == 0, wit, failures=fails)
    # coproduct, in groups of basis elements
    fails, wit = 0, None
    sector_fail = {s: 0 for s in (sectors or {})}
    width = int(np.diff(c["comult"].start).max()) if n else 1
    group, load = [], 0
    groups = []
    for i in range(n):
        size = len(X.free_basis[i]) * width * 32
        if group and load + size > _CHUNK:
            groups.append(group)
            group, load = [], 0
        group.append(i)
        load += size
    if group:
        groups.append(group)
    for group in groups:
        T = R.apply_unary(_basis_terms(group, group), 0, F)
        T = R.compact(R.apply_unary(T, 0, c["comult"]))  # h1 h2 b
        if sectors:
            D = R.canonical(T)
            for s, pred in sectors.items():
                mask = np.array([pred(H.basis[a], H.basis[b]) for a, b in D.keys[:, :2].tolist()], dtype=bool)
                if mask.any():
                    part = X._to_coords(D.take(np.nonzero(mask)[0]), (0, 1))
                    sector_fail[s] += len({k[2] for k in X._bad_keys(part, mode)})
        bad = X._bad_keys(X._to_coords(T, (0, 1)), mode)
        if bad:
            which = sorted({k[2] for k in bad})
            fails += len(which)
            if wit is None:
                k0 = next(k for k in bad if k[2] == which[0])
                wit = (f"Delta(b{which[0]}) has non-integral coefficient at b{k0[0]}(x)b{k0[1]}; "
                       f"b{which[0]} = {X.free_basis[which[0]]}")
    rep.add("coproduct", fails == 0, wit, failures=fails)
    for s, f in sector_fail.items():
        rep.add(f"coproduct/{s}", f == 0, f and f"{f} basis elements fail in sector {s}", failures=f)
    # counit
    E = R.apply_unary(R.apply_unary(_basis_terms(range(n), range(n)), 0, F), 0, c["counit"])
    bad = X._bad_keys(E, mode)
    rep.add("counit", not bad, bad and f"eps(b{bad[0][0]}) is not integral", failures=len(bad))
    # antipode
    S = R.apply_unary(R.apply_unary(_basis_terms(range(n), range(n)), 0, F), 0, c["antipode"])
    bad = X._bad_keys(X._to_coords(R.compact(S), (0,)), mode)
    which = sorted({k[1] for k in bad})
    rep.add("antipode", not bad, bad and f"S(b{which[0]}) not in {X.name or 'X'}", failures=len(which))
    return rep


# -- integrals -------------------------------------------------------------------


@dataclass
class IntegralModule:
    """Lambda = R * generator; ideal is eps(generator)."""

    generator: HopfElem
    ideal: object

    def __repr__(self):
        return f"IntegralModule({self.generator}; eps = {self.ideal})"


_LINE_CACHE: dict = {}


def left_integral_line(H: HopfData) -> HopfElem:
    """A nonzero left integral of H (the space is one-dimensional for the algebras here)."""
    key = id(H)
    hit = _LINE_CACHE.get(key)
    if hit is not None and hit[0] is H:
        return hit[1]
    n = H.dim
    idx = H.index
    ech = RowEchelon(n, H.tower)
    by_left = {}
    for (a, b), out in H.mult.items():
        by_left.setdefault(a, []).append((b, out))
    for x in H.basis:
        rows: dict = {}
        for b, out in by_left.get(x, ()):
            cb = idx[b]
            for h, v in out.items():
                r = rows.setdefault(idx[h], {})
                r[cb] = r[cb] + v if cb in r else v
        e = H.counit.get(x)
        if e is not None:
            for cb in range(n):
                r = rows.setdefault(cb, {})
                r[cb] = r[cb] - e if cb in r else -e
        for r in rows.values():
            ech.add(r)
        if ech.rank == n - 1:
            break
    ker = ech.kernel()
    if len(ker) != 1:
        raise ArithmeticError(f"space of left integrals has dimension {len(ker)}")
    lam = H.elem({H.basis[k]: v for k, v in enumerate(ker[0]) if not v.is_zero()})
    # every basis element, not only the rows used to find the line
    for x in H.basis:
        bx = H.b(x)
        if bx * lam != lam * H.counit_of(bx):
            raise ArithmeticError(f"{x} does not fix the candidate integral")
    _LINE_CACHE[key] = (H, lam)
    return lam


def principal_generator(coords, mode="ring"):
    """c with (c) = the ideal generated by ``coords``, if one of them divides all others."""
    nz = [c for c in coords if not c.is_zero()]
    nz.sort(key=lambda c: len(str(c)))
    for c in nz:
        inv = c.inverse()
        if all(is_integral(d * inv, mode) for d in nz):
            return c
    raise NotPrincipal("no coordinate divides all the others")


def integrals(X: OrderLattice, mode="ring") -> IntegralModule:
    """Left integrals lying in X: R * lambda/c where c generates the coordinate ideal of lambda."""
    H = X.ambient
    require_verified(H)
    lam = left_integral_line(H)
    c = principal_generator(X.coords(lam), mode)
    gen = lam * c.inverse()
    return IntegralModule(gen, H.counit_of(gen))


def dual_order(X: OrderLattice, Hstar: HopfData | None = None) -> OrderLattice:
    """X* = {f : f(X) integral} on the dual basis, as an order of dual_hopf(ambient)."""
    H = X.ambient
    Hstar = Hstar or dual_hopf(H)
    Q = X.inverse
    basis = []
    for row in Q.rows:
        basis.append(Hstar.elem({Hstar.basis[j]: v for j, v in row.items()}))
    # the inverse of the new basis matrix is the transpose of the old one
    P = X.matrix
    Pt = FieldMatrix.from_sparse([dict(r) for r in P.transpose().rows], P.nrows, H.tower)
    name = X.name[:-1] if X.name.endswith("*") else X.name + "*"
    return OrderLattice(Hstar, basis, name=name, inverse=Pt)


def larson_product(X: OrderLattice, mode="ring"):
    """(eps(Lambda_X), eps(Lambda_X*), ok) with ok iff their product generates (dim H)."""
    a = integrals(X, mode).ideal
    b = integrals(dual_order(X), mode).ideal
    dim = X.ambient.tower.scalar(X.ambient.dim)
    return a, b, same_ideal(a * b, dim, mode)


def larson_product_check(X: OrderLattice, mode="ring") -> bool:
    return larson_product(X, mode)[2]


# -- Larson orders -----------------------------------------------------------------


def larson_order(p: int, alpha, tower: FieldTower | None = None, H: HopfData | None = None) -> OrderLattice:
    """H(I) = sum_i (alpha/(zeta-1))^i (sigma-1)^i R for I = (alpha)."""
    nk.check_p(p)
    if isinstance(alpha, str):
        spec, tower = named_ideal(p, alpha, tower)
    elif isinstance(alpha, IdealSpec):
        spec = alpha
        tower = tower or (H.tower if H else nk.nikshych_tower(p))
    else:
        tower = tower or (H.tower if H else nk.nikshych_tower(p))
        spec = IdealSpec(alpha)
    H = H or group_algebra_cp(p, tower)
    a = spec.value(H.tower)
    z1 = H.tower.zeta(1) - 1
    if a.is_zero() or not is_integral(z1 / a, "closure"):
        raise ContainmentViolation(f"zeta-1 is not in the ideal {spec}")
    x = H.b(sigma_label(1)) - H.one()
    s = a / z1
    basis, cur = [], H.one()
    for i in range(p):
        basis.append(cur * (s ** i))
        cur = cur * x
    return OrderLattice(H, basis, name=f"H({spec})")


def geometric_series_member(X: OrderLattice, z: HopfElem, e: HopfElem, mode="ring") -> HopfElem:
    """(1/sqrt p) sum_{i<p} z^i with z^0 = e, after checking ze = ez = z and (1/pi)(z - e) in X."""
    H = X.ambient
    T = H.tower
    if not T.has_t:
        raise PreconditionViolated("the tower carries no pi")
    if z * e != z or e * z != z:
        raise PreconditionViolated("z is not in the corner algebra of e")
    if not X.contains((z - e) * T.t().inverse(), mode):
        raise PreconditionViolated("(1/pi)(z - e) is not in the order")
    p = T.p
    acc, cur = H.zero(), e
    for _ in range(p):
        acc = acc + cur
        cur = cur * z
    s = acc * T.sqrt_p().inverse()
    if not X.contains(s, mode):
        raise NotAMember("geometric series is not in the order")
    return s


# -- the order Y of H_p --------------------------------------------------------------


def nikshych_basis(p: int, H: HopfData) -> list:
    """e0, e1, g e0, g e1 and pi^-(i+j) times x_b^i x_a^j, g x_b^i x_a^j, y_b^i y_a^j, g y_b^i y_a^j."""
    T = H.tower
    L = nk.NikshychLabel
    e0, e1 = H.b(L("A0", 0, 0)), H.b(L("A1", 0, 0))
    g = H.b(L("gA0", 0, 0)) + H.b(L("gA1", 0, 0))
    xa, xb = H.b(L("A0", 1, 0)) - e0, H.b(L("A0", 0, 1)) - e0
    ya, yb = H.b(L("A1", 1, 0)) - e1, H.b(L("A1", 0, 1)) - e1
    pinv = T.t().inverse()
    xs, ys = {}, {}
    pxb, pyb = e0, e1
    for i in range(p):
        cx, cy = pxb, pyb
        for j in range(p):
            xs[(i, j)], ys[(i, j)] = cx, cy
            cx, cy = cx * xa, cy * ya
        pxb, pyb = pxb * xb, pyb * yb
    out = [e0, e1, g * e0, g * e1]
    for i in range(p):
        for j in range(p):
            if (i, j) == (0, 0):
                continue
            s = pinv ** (i + j)
            out += [xs[(i, j)] * s, g * xs[(i, j)] * s, ys[(i, j)] * s, g * ys[(i, j)] * s]
    return out


def nikshych_order(p: int, H: HopfData | None = None) -> OrderLattice:
    """The order Y of H_p over Z[zeta_m][pi], pi^2 = zeta_p - 1."""
    H = H or nk.verified_H(p, with_pi=True)
    if not H.tower.has_t:
        raise PreconditionViolated("Y needs a tower with pi")
    return OrderLattice(H, nikshych_basis(p, H), name=f"Y_{p}")


def _sector_pred(a, b):
    return lambda x, y: x.sector.endswith(a) and y.sector.endswith(b) and x.sector.startswith("g") \
        and y.sector.startswith("g")


# predicates naming the four pieces of Delta(g) in the proof of integrality
G_SECTORS = {
    "Delta(g)/A0xA0": _sector_pred("A0", "A0"),
    "Delta(g)/A0xA1": _sector_pred("A0", "A1"),
    "Delta(g)/A1xA0": _sector_pred("A1", "A0"),
    "Delta(g)/A1xA1": _sector_pred("A1", "A1"),
}


def forced_elements(p: int, H: HopfData) -> dict:
    """Elements that every Hopf order of H_p must contain."""
    T = H.tower
    L = nk.NikshychLabel
    ne = nk.named_elements(H)
    sp_inv = T.sqrt_p().inverse()
    sum_ua = H.elem({L("A0", i, 0): 1 for i in range(p)})
    sum_va = H.elem({L("A1", i, 0): 1 for i in range(p)})
    return {
        "e0": ne["e0"], "e1": ne["e1"], "g*e1": ne["ge1"], "g*e0": ne["ge0"],
        "ua": ne["ua"], "va": ne["va"],
        "sum_ua/sqrt_p": sum_ua * sp_inv, "sum_va/sqrt_p": sum_va * sp_inv,
        "T(e1)": nk.map_T(p, ne["e1"], H),
    }


def expected_integral_Y(p: int, H: HopfData) -> HopfElem:
    """(1/p)(1 + g) sum_{i,j} u_a^i u_b^j."""
    L = nk.NikshychLabel
    g = H.b(L("gA0", 0, 0)) + H.b(L("gA1", 0, 0))
    s = H.elem({L("A0", i, j): 1 for i in range(p) for j in range(p)})
    return (H.one() + g) * s * Fraction(1, p)


def ratio_if_multiple(x: HopfElem, y: HopfElem):
    """c with x = c*y, or None."""
    if y.is_zero():
        return None
    lab, v = next(iter(y))
    c = x[lab] / v
    return c if x == y * c else None


def intersection_integral(X: OrderLattice, h: HopfElem, mode="ring") -> HopfElem:
    """Generator of X intersected with the integrals of K<h>, h group-like of order p."""
    H = X.ambient
    p = H.tower.p
    s, cur = H.zero(), H.one()
    for _ in range(p):
        s = s + cur
        cur = cur * h
    c = principal_generator(X.coords(s), mode)
    return s * c.inverse()


def verify_nikshych_order(p: int, Y: OrderLattice | None = None, mode="ring") -> Report:
    """The full order suite for Y: Hopf order axioms (with the four Delta(g) sectors),
    integrals and Larson's product, characters and cocharacters, forced elements and Z = Y cap K<h>."""
    Y = Y or nikshych_order(p)
    H = Y.ambient
    T = H.tower
    rep = verify_hopf_order(Y, mode, sectors=G_SECTORS)
    rep.command = "verify_nikshych_order"
    rep.parameters = dict(rep.parameters, p=p, note=f"order over {ring_name(T)} = O_K[pi]")
    lam = integrals(Y, mode)
    exp = expected_integral_Y(p, H)
    c = ratio_if_multiple(lam.generator, exp)
    rep.add("integrals/generator", c is not None and is_unit(c, mode),
            f"Lambda_Y is generated by {lam.generator}, not a unit multiple of (1/p)(1+g)sum u_a^i u_b^j")
    two_p = T.scalar(2 * p)
    rep.parameters["eps_Lambda"] = str(lam.ideal)
    rep.add("integrals/eps_is_2p", same_ideal(lam.ideal, two_p, mode), f"eps(Lambda_Y) = ({lam.ideal})")
    Ystar = dual_order(Y)
    lam2 = integrals(Ystar, mode)
    prod = lam.ideal * lam2.ideal
    rep.add("larson_product", same_ideal(prod, T.scalar(4 * p * p), mode),
            f"eps(Lambda_Y) eps(Lambda_Y*) = ({prod}), expected (4p^2)")
    for chi in nk.characters_H(p, H):
        rep.add(f"character_in_dual/{chi.name}", Y.dual_contains(chi, mode), f"{chi.name} not in Y*")
    for name, x in nk.cocharacters_H(p, H).items():
        rep.add(f"cocharacter_in_order/{name}", Y.contains(x, mode), f"{name} = {x} not in Y")
    for name, x in forced_elements(p, H).items():
        rep.add(f"forced/{name}", Y.contains(x, mode), f"{name} = {x} not in Y")
    ne = nk.named_elements(H)
    pinv = T.t().inverse()
    rep.add("generator/(ua-e0)/pi", Y.contains((ne["ua"] - ne["e0"]) * pinv, mode), "J(u_a - e_0) not in Y")
    h = ne["ua"] + ne["va"]
    z = intersection_integral(Y, h, mode)
    s = H.zero()
    cur = H.one()
    for _ in range(p):
        s = s + cur
        cur = cur * h
    c = ratio_if_multiple(z, s * T.sqrt_p().inverse())
    rep.add("intZ/integral_of_Z", c is not None and is_unit(c, mode),
            f"integrals of Y cap K<h> generated by {z}")
    for nm, zz, ee in (("ua", ne["ua"], ne["e0"]), ("va", ne["va"], ne["e1"])):
        try:
            geometric_series_member(Y, zz, ee, mode)
            ok = True
        except (PreconditionViolated, NotAMember):
            ok = False
        rep.add(f"geometric_series/{nm}", ok, f"(1/sqrt p) sum {nm}^i not in Y")
    return rep


def verify_larson(p: int, alpha: str, mode="ring") -> Report:
    """Order axioms, integrals, Larson's product and dual involution for H((alpha))."""
    spec, tower = named_ideal(p, alpha)
    X = larson_order(p, spec, tower)
    H = X.ambient
    T = H.tower
    rep = verify_hopf_order(X, mode)
    rep.command = "verify_larson"
    rep.parameters = dict(rep.parameters, p=p, alpha=alpha)
    a = spec.value(T)
    lam = integrals(X, mode)
    rep.parameters["eps_Lambda"] = str(lam.ideal)
    rep.add("integrals/eps", same_ideal(lam.ideal, a ** (p - 1), mode),
            f"eps(Lambda) = ({lam.ideal}), expected ({alpha})^{p - 1}")
    Xs = dual_order(X)
    rep.extend(verify_hopf_order(Xs, mode), prefix="dual/")
    lam2 = integrals(Xs, mode)
    rep.add("larson_product", same_ideal(lam.ideal * lam2.ideal, T.scalar(p), mode),
            f"product of eps ideals is ({lam.ideal * lam2.ideal}), expected (p)")
    Xss = dual_order(Xs)
    rep.add("dual_involutive", orders_equal(X, Xss, mode), "X** != X")
    for k in range(p):
        chi = Character(H, {sigma_label(i): T.zeta(i * k) for i in range(p)}, f"chi_{k}")
        rep.add(f"character_in_dual/chi_{k}", X.dual_contains(chi, mode), f"chi_{k} not in X*")
    if alpha == "pi":
        sig = H.b(sigma_label(1))
        try:
            geometric_series_member(X, sig, H.one(), mode)
            ok = True
        except (PreconditionViolated, NotAMember):
            ok = False
        rep.add("pisigmae/geometric_series", ok, "(1/sqrt p) sum sigma^i not in H((pi))")
        rep.add("pisigmae/(sigma-1)/pi", X.contains((sig - H.one()) * T.t().inverse(), mode),
                "(1/pi)(sigma - 1) not in H((pi))")
    return rep
