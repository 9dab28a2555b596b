"""Galois descent for H_p: the semilinear involution sigma', the integrality
condition on (w, d), the bundled p = 7, n = 28 unit, and the invariant order."""

from __future__ import annotations

import hashlib
import json
import multiprocessing as mp
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .exactfield import CycElem, FieldTower, QuadElem, cyc_inverse, parse_literal
from .exactlinalg import IntLattice, fixed_sublattice, hnf
from .hopfcore import HopfData, HopfElem, Report, verify_hopf_map
from . import nikshych as nk
from . import orders

CONVENTIONS = ("paper-theorem", "paper-example", "either")
DATA_FILE = "descent_p7_n28.json"


class NotAUnit(ValueError):
    pass


class ConditionFailed(ValueError):
    pass


class ChecksumMismatch(ValueError):
    pass


@dataclass
class DescentParams:
    """t^2 = w(zeta_p - 1) ('paper-theorem') or w(1 - zeta_p) ('paper-example')."""

    n: int
    p: int
    w: CycElem
    d: CycElem
    sign_convention: str = "either"

    def __post_init__(self):
        if self.sign_convention not in CONVENTIONS:
            raise ValueError(f"sign convention must be one of {CONVENTIONS}")
        if self.n % self.p:
            raise ValueError("p must divide n")
        nk.check_p(self.p)

    def zeta_p(self) -> CycElem:
        return CycElem.zeta(self.n, self.n // self.p)

    def radicand(self, convention: str) -> CycElem:
        z = self.zeta_p()
        if convention == "paper-theorem":
            return self.w * (z - 1)
        if convention == "paper-example":
            return self.w * (1 - z)
        raise ValueError("radicand needs a concrete convention")

    def conventions(self):
        return ("paper-theorem", "paper-example") if self.sign_convention == "either" else (self.sign_convention,)

    def tower(self, convention: str) -> FieldTower:
        return FieldTower(self.n, self.p).with_radicand(self.radicand(convention))


def _canonical_coeffs(coeffs: dict) -> str:
    return "\n".join(f"{k}:{coeffs[k]}" for k in sorted(coeffs))


def load_example_element(path=None) -> tuple[CycElem, dict]:
    """The bundled element E of Z[zeta_28] (w = E^-1), after checking its checksum."""
    if path is None:
        text = resources.files("hopforders.data").joinpath(DATA_FILE).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    doc = json.loads(text)
    coeffs = {int(k): int(v) for k, v in doc["coefficients"].items()}
    digest = hashlib.sha256(_canonical_coeffs(coeffs).encode()).hexdigest()
    if digest != doc["sha256"]:
        raise ChecksumMismatch(f"checksum {digest} does not match {doc['sha256']}")
    n = int(doc["n"])
    E = CycElem.from_coords(n, [coeffs.get(k, 0) for k in range(max(coeffs) + 1)])
    return E, doc


def example_params(sign_convention="either", path=None) -> DescentParams:
    E, doc = load_example_element(path)
    n, p = int(doc["n"]), int(doc["p"])
    d = FieldTower(n, p).cyc(parse_literal(str(doc["d"]), FieldTower(n, p)))
    return DescentParams(n, p, cyc_inverse(E), d, sign_convention)


def _is_unit(w: CycElem) -> bool:
    return not w.is_zero() and w.is_integral() and cyc_inverse(w).is_integral()


def condition_details(params: DescentParams) -> dict:
    """convention -> whether (d + t)/2 is integral (trace d and norm (d^2 - t^2)/4 integral)."""
    if not _is_unit(params.w):
        raise NotAUnit("w is not a unit of Z[zeta_n]")
    out = {}
    for conv in params.conventions():
        r = params.radicand(conv)
        out[conv] = params.d.is_integral() and ((params.d * params.d - r) * Fraction(1, 4)).is_integral()
    return out


def check_descent_condition(params: DescentParams) -> bool:
    return any(condition_details(params).values())


def satisfied_convention(params: DescentParams) -> str:
    for conv, ok in condition_details(params).items():
        if ok:
            return conv
    raise ConditionFailed("(d + t)/2 is not integral under the requested convention")


# -- sigma' --------------------------------------------------------------------


def sigma_images(p: int, H: HopfData) -> dict:
    """sigma: u -> u^-1, v -> v^-1 (theta = a, b), g -> g, on the basis of H."""
    L = nk.NikshychLabel
    return {lab: H.b(L(lab.sector, -lab.i % p, -lab.j % p)) for lab in H.basis}


def sigma_prime(p: int, tower: FieldTower, H: HopfData | None = None):
    """The gamma-semilinear map h (x) alpha -> sigma(h) (x) gamma(alpha) as a callable on HopfElem."""
    if not tower.has_t:
        raise ValueError("sigma' needs a tower with a radicand")
    H = H or nk.build_H(p, tower)
    images = sigma_images(p, H)

    def apply(x: HopfElem) -> HopfElem:
        out = H.zero()
        for lab, c in x:
            out = out + images[lab] * c.conjugate()
        return out

    apply.images = images
    apply.H = H
    return apply


def verify_sigma_prime(p: int, tower: FieldTower, H: HopfData | None = None) -> Report:
    """Axioms (1)-(4) of a Hopf gamma-automorphism on every basis element, and sigma'^2 = id."""
    sp = sigma_prime(p, tower, H)
    H = sp.H
    rep = verify_hopf_map(H, H, sp.images, semilinear=True, prefix="gamma_automorphism/")
    rep.command = "verify_sigma_prime"
    rep.parameters = {"p": p, "m": tower.m}
    ok = all(sp(sp(H.b(lab))) == H.b(lab) for lab in H.basis)
    rep.add("involutive", ok, "sigma'^2 != id")
    t1 = H.one() * tower.t()
    rep.add("semilinear/t", sp(t1) == -t1, "sigma'(t 1) != -t 1")
    g = nk.named_elements(H)["g"]
    rep.add("fixes_g", sp(g) == g, "sigma'(g) != g")
    return rep


# -- the invariant order ---------------------------------------------------------


@dataclass
class InvariantOrder:
    """Generators of Y^Gamma over Z[zeta_n] and the decomposition certificate of Y."""

    params: DescentParams
    convention: str
    Y: orders.OrderLattice
    generators: list = field(default_factory=list)
    report: Report | None = None


def _theta(params, tower):
    return (tower.scalar(params.d) + tower.t()) * Fraction(1, 2)


def witness_suite(params: DescentParams, convention: str | None = None, Y=None) -> tuple[Report, dict]:
    """q = -x~^2 u^-1 and z = x~ + theta q are invariant members of Y, sigma'(x~) = x~ + t q,
    and x~ = z - theta q, for the four generators x~_a, x~_b, y~_a, y~_b."""
    conv = convention or satisfied_convention(params)
    T = params.tower(conv)
    p = params.p
    Y = Y or orders.nikshych_order(p, nk.build_H(p, T))
    H = Y.ambient
    sp = sigma_prime(p, T, H)
    ne = nk.named_elements(H)
    L = nk.NikshychLabel
    t = T.t()
    tinv = t.inverse()
    theta = _theta(params, T)
    rep = Report("descent_witnesses", {"n": params.n, "p": p, "convention": conv})
    for name in ("e0", "e1", "g"):
        rep.add(f"invariant/{name}", sp(ne[name]) == ne[name], f"sigma'({name}) != {name}")
    pieces = {}
    for name, lab, e in (("x_a", L("A0", 1, 0), ne["e0"]), ("x_b", L("A0", 0, 1), ne["e0"]),
                         ("y_a", L("A1", 1, 0), ne["e1"]), ("y_b", L("A1", 0, 1), ne["e1"])):
        u = H.b(lab)
        uinv = H.b(L(lab.sector, -lab.i % p, -lab.j % p))
        xt = (u - e) * tinv
        q = (e * 2 - u - uinv) * (tinv * tinv)
        z = xt + q * theta
        rep.add(f"{name}/q=-x~^2u^-1", q == -(xt * xt * uinv), "q != -x~^2 u^-1")
        rep.add(f"{name}/sigma'(x~)=x~+tq", sp(xt) == xt + q * t, "sigma'(x~) != x~ + t q")
        rep.add(f"{name}/q_invariant", sp(q) == q, "q not invariant")
        rep.add(f"{name}/z_invariant", sp(z) == z, "z not invariant")
        rep.add(f"{name}/x~=z-theta*q", xt == z - q * theta, "x~ != z - theta q")
        for nm, x in (("q", q), ("z", z), ("theta*q", q * theta), ("x~", xt)):
            rep.add(f"{name}/{nm}_in_Y", Y.contains(x, "closure"), f"{nm} not in Y")
        pieces[name] = (z, -q, e)
    return rep, pieces


def _mul_pair(a, b, c, d_):
    """(I1 + theta J1)(I2 + theta J2) with theta^2 = d theta - c."""
    I1, J1 = a
    I2, J2 = b
    JJ = J1 * J2
    return I1 * I2 - JJ * c, I1 * J2 + J1 * I2 + JJ * d_


def invariant_order(params: DescentParams, convention: str | None = None, full_lattice=False,
                    budget: float = 4 * 3600) -> InvariantOrder:
    """Y^Gamma and the surjectivity of Y^Gamma (x) O_L -> Y.

    Certificate: every basis element of Y is written as I + theta J with I, J
    invariant members of Y, where theta = (d + t)/2.  With ``full_lattice`` the
    flattened Z-lattice route (fixed sublattice plus HNF) also runs, in a
    child process bounded by ``budget`` seconds; on timeout it is reported as
    skipped.
    """
    if not check_descent_condition(params):
        raise ConditionFailed("the descent condition fails for these parameters")
    conv = convention or satisfied_convention(params)
    T = params.tower(conv)
    p = params.p
    H = nk.build_H(p, T)
    Y = orders.nikshych_order(p, H)
    rep, pieces = witness_suite(params, conv, Y)
    rep.command = "invariant_order"
    sp = sigma_prime(p, T, H)
    ne = nk.named_elements(H)
    d_ = T.scalar(params.d)
    c = (d_ * d_ - T.t() * T.t()) * Fraction(1, 4)
    theta = _theta(params, T)
    g = ne["g"]
    zero = H.zero()
    gens = []
    fails, wit = 0, None
    basis = orders.nikshych_basis(p, H)
    k = 4
    for i in range(p):
        for j in range(p):
            if (i, j) == (0, 0):
                continue
            for sect in ("x", "y"):
                zb, qb, e = pieces[f"{sect}_b"]
                za, qa, _ = pieces[f"{sect}_a"]
                acc = (e, zero)
                for _ in range(i):
                    acc = _mul_pair(acc, (zb, qb), c, d_)
                for _ in range(j):
                    acc = _mul_pair(acc, (za, qa), c, d_)
                for gmul in (False, True):
                    I, J = (g * acc[0], g * acc[1]) if gmul else acc
                    b = basis[k]
                    k += 1
                    ok = (b == I + J * theta and sp(I) == I and sp(J) == J
                          and Y.contains(I, "closure") and Y.contains(J, "closure"))
                    if not ok:
                        fails += 1
                        wit = wit or f"no invariant decomposition for {b}"
                    gens += [I, J]
    # basis order in nikshych_basis is x, g x, y, g y for each (i, j)
    gens = [ne["e0"], ne["e1"], g * ne["e0"], g * ne["e1"]] + gens
    rep.add("full_lattice/certificate", fails == 0, wit, failures=fails)
    if full_lattice:
        status = _run_full_lattice(params, conv, budget)
        if status is None:
            rep.add("full_lattice/hnf", True, None)
            rep.checks[-1].status = "skipped"
            rep.checks[-1].witness = f"exceeded the {budget:.0f} s budget"
        else:
            rep.add("full_lattice/hnf", status, "O-span of the fixed lattice differs from Y")
    return InvariantOrder(params, conv, Y, gens, rep)


# -- the flattened Z-lattice route ------------------------------------------------------


def _flat(x: HopfElem, tower: FieldTower) -> list[Fraction]:
    """Coordinates of x over Q: per label, the power basis of a then of b (x = a + b t)."""
    H = x.H
    phi = tower.phi
    out = [Fraction(0)] * (H.dim * 2 * phi)
    for lab, c in x:
        base = H.index[lab] * 2 * phi
        c = tower.scalar(c)
        for off, part in enumerate((c.a, c.b)):
            for e, v in enumerate(part.num):
                if v:
                    out[base + off * phi + e] = Fraction(v, part.den)
    return out


def _unflat(v, H: HopfData) -> HopfElem:
    T = H.tower
    phi = T.phi
    terms = {}
    for k, lab in enumerate(H.basis):
        blk = v[k * 2 * phi:(k + 1) * 2 * phi]
        if any(blk):
            a = CycElem.from_coords(T.m, blk[:phi]) if any(blk[:phi]) else CycElem.from_rational(T.m, 0)
            b = CycElem.from_coords(T.m, blk[phi:]) if any(blk[phi:]) else CycElem.from_rational(T.m, 0)
            terms[lab] = QuadElem(T, a, b)
    return H.elem(terms)


def _sigma_flat(p: int, H: HopfData) -> list[list[int]]:
    """sigma' on flattened coordinates: a signed permutation (t -> -t on the b-part)."""
    phi = H.tower.phi
    D = H.dim * 2 * phi
    S = [[0] * D for _ in range(D)]
    images = sigma_images(p, H)
    for k, lab in enumerate(H.basis):
        (tgt, _), = images[lab].terms.items()
        kk = H.index[tgt]
        for off, sign in ((0, 1), (1, -1)):
            for e in range(phi):
                S[k * 2 * phi + off * phi + e][kk * 2 * phi + off * phi + e] = sign
    return S


def full_lattice_check(params: DescentParams, convention: str, ring="theta") -> dict:
    """Flatten Y over Z[zeta_n][theta] to a Z-lattice, take the sigma'-fixed sublattice F,
    and compare the Z[zeta_n][theta]-span of F with Y in HNF.

    ``ring="t"`` uses Z[zeta_n][t] instead, which is sigma'-stable even when
    the descent condition fails (useful for small experiments).
    """
    T = params.tower(convention)
    p = params.p
    H = nk.build_H(p, T)
    Y = orders.nikshych_order(p, H)
    theta = _theta(params, T) if ring == "theta" else T.t()
    scal = [T.zeta_m(a) * th for th in (T.one(), theta) for a in range(T.phi)]
    D = H.dim * 2 * T.phi
    L = hnf([_flat(b * s, T) for b in Y.free_basis for s in scal], D)
    F = fixed_sublattice(L, _sigma_flat(p, H))
    span = hnf([_flat(_unflat(v, H) * s, T) for v in F.rational_basis() for s in scal], D)
    return {"rank": L.rank, "fixed_rank": F.rank, "equal": span == L, "lattice": L, "fixed": F}


def _full_lattice_worker(params, conv, q):
    q.put(full_lattice_check(params, conv)["equal"])


def _run_full_lattice(params, conv, budget):
    ctx = mp.get_context("fork")
    q = ctx.Queue()
    proc = ctx.Process(target=_full_lattice_worker, args=(params, conv, q))
    proc.start()
    proc.join(budget)
    if proc.is_alive():
        proc.terminate()
        proc.join()
        return None
    return None if q.empty() else q.get()
