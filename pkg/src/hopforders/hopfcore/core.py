"""Finite-dimensional Hopf algebras given by sparse structure constants."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from fractions import Fraction

from ..exactfield import CycElem, FieldTower, QuadElem, cyc_reduce, format_literal, parse_literal
from ._sparse import Terms, ring_for

_I64 = np.int64


class UnverifiedAlgebra(ValueError):
    pass


def _clean(d: dict, tower: FieldTower) -> dict:
    out = {}
    for k, v in d.items():
        v = tower.scalar(v)
        if not v.is_zero():
            out[k] = v
    return out


def label_str(label) -> str:
    return str(label)


# -- elements ---------------------------------------------------------------


class HopfElem:
    """Sparse linear combination of basis labels of a HopfData."""

    __slots__ = ("H", "terms")

    def __init__(self, H: HopfData, terms=None):
        self.H = H
        terms = dict(terms or {})
        for lab in terms:
            if lab not in H.index:
                raise KeyError(f"unknown basis label {lab!r}")
        self.terms = _clean(terms, H.tower)

    def __getitem__(self, label):
        return self.terms.get(label, self.H.tower.zero())

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, HopfElem):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, HopfElem):
            return NotImplemented
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return HopfElem(self.H, t)

    def __neg__(self):
        return HopfElem(self.H, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, HopfElem):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HopfElem):
            return self.H.multiply(self, other)
        s = self.H.tower.scalar(other)
        return HopfElem(self.H, {k: v * s for k, v in self.terms.items()})

    def __rmul__(self, other):
        s = self.H.tower.scalar(other)
        return HopfElem(self.H, {k: s * v for k, v in self.terms.items()})

    def __truediv__(self, other):
        s = self.H.tower.scalar(other)
        return self * s.inverse()

    def __pow__(self, k: int):
        out = self.H.one()
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        return f"HopfElem({self})"

    def __str__(self):
        return format_elem(self.terms)


class TensorElem:
    """Sparse linear combination of pairs of basis labels."""

    __slots__ = ("H", "terms")

    def __init__(self, H: HopfData, terms=None):
        self.H = H
        self.terms = _clean(dict(terms or {}), H.tower)

    def __getitem__(self, pair):
        return self.terms.get(pair, self.H.tower.zero())

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, TensorElem):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return TensorElem(self.H, t)

    def __neg__(self):
        return TensorElem(self.H, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TensorElem):
            return self.H.tensor_multiply(self, other)
        s = self.H.tower.scalar(other)
        return TensorElem(self.H, {k: v * s for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self):
        return f"TensorElem({self})"

    def __str__(self):
        return format_elem({f"{a}(x){b}": v for (a, b), v in self.terms.items()})


def format_elem(terms: dict) -> str:
    if not terms:
        return "0"
    parts = []
    for k in sorted(terms, key=str):
        parts.append(f"({format_literal(terms[k])})*{k}")
    return " + ".join(parts)


# -- reports ----------------------------------------------------------------


@dataclass
class CheckResult:
    check_id: str
    status: str
    witness: str | None = None
    elapsed: float = 0.0
    failures: int = 0

    @property
    def ok(self):
        # "skipped" (e.g. a run that exceeded its budget) is not a failure
        return self.status != "fail"

    def as_dict(self, timings=False):
        d = {"check_id": self.check_id, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.failures:
            d["failures"] = self.failures
        if timings:
            d["elapsed"] = round(self.elapsed, 3)
        return d


@dataclass
class Report:
    command: str
    parameters: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, check_id, ok, witness=None, elapsed=0.0, failures=0):
        self.checks.append(CheckResult(check_id, "pass" if ok else "fail",
                                       None if ok else witness, elapsed, 0 if ok else max(failures, 1)))
        return ok

    def extend(self, other: Report, prefix=""):
        for c in other.checks:
            self.checks.append(CheckResult(prefix + c.check_id, c.status, c.witness, c.elapsed, c.failures))

    def failed(self):
        return [c for c in self.checks if not c.ok]

    def get(self, check_id):
        for c in self.checks:
            if c.check_id == check_id:
                return c
        raise KeyError(check_id)

    def sorted_checks(self):
        return sorted(self.checks, key=lambda c: c.check_id)

    def as_dict(self, timings=False):
        return {
            "schema": "hopforders-report/1",
            "command": self.command,
            "parameters": self.parameters,
            "status": "pass" if self.ok else "fail",
            "checks": [c.as_dict(timings) for c in self.sorted_checks()],
        }

    def to_json(self, timings=False) -> str:
        return json.dumps(self.as_dict(timings), indent=2, sort_keys=True, ensure_ascii=False)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


# -- the algebra ------------------------------------------------------------


class HopfData:
    """Basis labels plus unit, mult, comult, counit and antipode tables.

    Missing entries in ``mult`` and ``counit`` are zero.  Scalars are
    promoted into ``tower``.
    """

    def __init__(self, tower: FieldTower, basis, unit, mult, comult, counit, antipode, name=""):
        self.tower = tower
        self.basis = list(basis)
        self.index = {lab: i for i, lab in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise ValueError("duplicate basis labels")
        self.name = name
        self.unit = _clean(unit, tower)
        self.mult = {}
        for pair, out in mult.items():
            out = _clean(out, tower)
            if out:
                self.mult[tuple(pair)] = out
        self.comult = {lab: _clean(comult.get(lab, {}), tower) for lab in self.basis}
        self.counit = _clean(counit, tower)
        self.antipode = {lab: _clean(antipode.get(lab, {}), tower) for lab in self.basis}
        self.verified = False
        self._compiled = None
        self._check_labels()

    def _check_labels(self):
        idx = self.index
        for lab in self.unit:
            assert lab in idx, lab
        for (a, b), out in self.mult.items():
            assert a in idx and b in idx, (a, b)
            assert all(k in idx for k in out)
        for lab, out in self.comult.items():
            assert all(a in idx and b in idx for a, b in out)
        for lab, out in self.antipode.items():
            assert all(k in idx for k in out)

    def __getstate__(self):
        d = dict(self.__dict__)
        d["_compiled"] = None
        return d

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self):
        return f"HopfData({self.name or 'anonymous'}, dim={self.dim}, m={self.tower.m})"

    # -- element helpers ------------------------------------------------

    def elem(self, terms=None) -> HopfElem:
        if terms is None:
            return HopfElem(self)
        if not isinstance(terms, dict):
            terms = {terms: 1}
        return HopfElem(self, terms)

    def b(self, label) -> HopfElem:
        return HopfElem(self, {label: 1})

    def one(self) -> HopfElem:
        return HopfElem(self, self.unit)

    def zero(self) -> HopfElem:
        return HopfElem(self)

    def tensor(self, terms=None) -> TensorElem:
        return TensorElem(self, terms or {})

    def tensor_of(self, x: HopfElem, y: HopfElem) -> TensorElem:
        return TensorElem(self, {(a, b): u * v for a, u in x for b, v in y})

    # -- compiled tables ------------------------------------------------

    @property
    def ring(self):
        return ring_for(self.tower)

    def compiled(self):
        if self._compiled is None:
            R = self.ring
            idx = self.index
            n = self.dim
            mult_rows = [[] for _ in range(n * n)]
            for (a, b), out in self.mult.items():
                mult_rows[idx[a] * n + idx[b]] = [((idx[k],), v) for k, v in out.items()]
            self._compiled = {
                "mult": R.table(mult_rows, n, 1),
                "comult": R.table([[((idx[a], idx[b]), v) for (a, b), v in self.comult[lab].items()]
                                   for lab in self.basis], n, 2),
                "counit": R.table([[((), self.counit[lab])] if lab in self.counit else []
                                   for lab in self.basis], n, 0),
                "antipode": R.table([[((idx[k],), v) for k, v in self.antipode[lab].items()]
                                     for lab in self.basis], n, 1),
                "unit": R.from_items([((idx[k],), v) for k, v in self.unit.items()], 1),
            }
        return self._compiled

    def table(self, name):
        return self.compiled()[name]

    def to_terms(self, x, arity=1) -> Terms:
        idx = self.index
        if arity == 1:
            return self.ring.from_items([((idx[k],), v) for k, v in x.terms.items()], 1)
        return self.ring.from_items([((idx[a], idx[b]), v) for (a, b), v in x.terms.items()], 2)

    def from_terms(self, T: Terms):
        items = self.ring.to_items(T)
        B = self.basis
        if T.arity == 1:
            return HopfElem(self, {B[k[0]]: v for k, v in items.items()})
        if T.arity == 2:
            return TensorElem(self, {(B[k[0]], B[k[1]]): v for k, v in items.items()})
        if T.arity == 0:
            return items.get((), self.tower.zero())
        raise ValueError("unsupported arity")

    def extend_scalars(self, tower: FieldTower) -> HopfData:
        """The same tables over a larger tower; verification carries over."""
        if tower.m % self.tower.m or (self.tower.has_t and tower != self.tower):
            raise ValueError("target tower does not contain the source tower")
        step = tower.m // self.tower.m

        def up(x):
            if hasattr(x, "a"):
                return x
            c = self.tower.cyc(x)
            return cyc_reduce({i * step: Fraction(v, c.den) for i, v in enumerate(c.num) if v}, tower.m)

        def tab(d):
            return {k: up(v) for k, v in d.items()}

        out = HopfData(tower, self.basis, tab(self.unit),
                       {k: tab(v) for k, v in self.mult.items()},
                       {k: tab(v) for k, v in self.comult.items()},
                       tab(self.counit), {k: tab(v) for k, v in self.antipode.items()}, name=self.name)
        out.verified = self.verified
        return out

    # -- operations -----------------------------------------------------

    def multiply(self, x: HopfElem, y: HopfElem) -> HopfElem:
        R = self.ring
        T = R.cross(self.to_terms(x), self.to_terms(y))
        return self.from_terms(R.apply_binary(T, 0, 1, self.table("mult")))

    def comultiply(self, x: HopfElem) -> TensorElem:
        return self.from_terms(self.ring.apply_unary(self.to_terms(x), 0, self.table("comult")))

    def counit_of(self, x: HopfElem):
        return self.from_terms(self.ring.apply_unary(self.to_terms(x), 0, self.table("counit")))

    def antipode_of(self, x: HopfElem) -> HopfElem:
        return self.from_terms(self.ring.apply_unary(self.to_terms(x), 0, self.table("antipode")))

    def tensor_multiply(self, s: TensorElem, u: TensorElem, second_factor_opposite=False) -> TensorElem:
        R = self.ring
        T = R.cross(self.to_terms(s, 2), self.to_terms(u, 2))  # s1 s2 u1 u2
        M = self.table("mult")
        T = R.apply_binary(T, 0, 2, M)  # (s1u1, s2, u2)
        if second_factor_opposite:
            T = R.apply_binary(T, 2, 1, M)
        else:
            T = R.apply_binary(T, 1, 2, M)
        return self.from_terms(T)

    def tensor_map(self, t: TensorElem, f, g) -> TensorElem:
        """(f (x) g)(t) for python callables on HopfElem."""
        out = self.tensor()
        for (a, b), c in t:
            out = out + self.tensor_of(f(self.b(a)), g(self.b(b))) * c
        return out


def multiply(H: HopfData, x, y):
    return H.multiply(x, y)


def comultiply(H: HopfData, x):
    return H.comultiply(x)


def tensor_multiply(H: HopfData, s, u, second_factor_opposite=False):
    return H.tensor_multiply(s, u, second_factor_opposite)


# -- characters -------------------------------------------------------------


class Character:
    """Linear functional on H, stored by its values on the basis."""

    def __init__(self, H: HopfData, values: dict, name=""):
        self.H = H
        self.values = _clean(values, H.tower)
        self.name = name

    @classmethod
    def from_dual_elem(cls, H: HopfData, phi: HopfElem, name=""):
        vals = {}
        for lab, c in phi:
            vals[undual_label(lab)] = c
        return cls(H, vals, name)

    def __call__(self, x: HopfElem):
        z = self.H.tower.zero()
        for lab, c in x:
            if lab in self.values:
                z = z + c * self.values[lab]
        return z

    def as_dual_elem(self, D: HopfData) -> HopfElem:
        return D.elem({dual_label(k): v for k, v in self.values.items()})

    def __repr__(self):
        return f"Character({self.name or '?'})"


def convolve(H: HopfData, f: Character, x: HopfElem, side="left") -> HopfElem:
    """(f (x) id)Delta(x) for side='left', (id (x) f)Delta(x) for side='right'."""
    out = {}
    for (a, b), c in H.comultiply(x):
        if side == "left":
            v, keep = f.values.get(a), b
        elif side == "right":
            v, keep = f.values.get(b), a
        else:
            raise ValueError("side must be 'left' or 'right'")
        if v is not None:
            out[keep] = out[keep] + c * v if keep in out else c * v
    return H.elem(out)


# -- duality ----------------------------------------------------------------


def dual_label(label):
    if isinstance(label, tuple) and len(label) == 2 and label[0] == "*":
        return label[1]
    return ("*", label)


def undual_label(label):
    return dual_label(label)


def dual_hopf(H: HopfData) -> HopfData:
    """H* on the dual basis.  Labels are ("*", label); dualizing twice unwraps them."""
    D = dual_label
    basis = [D(l) for l in H.basis]
    mult: dict = {}
    for k, out in H.comult.items():
        for (a, b), c in out.items():
            mult.setdefault((D(a), D(b)), {})[D(k)] = c
    comult: dict = {}
    for (a, b), out in H.mult.items():
        for k, c in out.items():
            comult.setdefault(D(k), {})[(D(a), D(b))] = c
    unit = {D(k): v for k, v in H.counit.items()}
    counit = {D(k): v for k, v in H.unit.items()}
    antipode: dict = {}
    for i, out in H.antipode.items():
        for k, c in out.items():
            antipode.setdefault(D(k), {})[D(i)] = c
    name = H.name[:-1] if H.name.endswith("*") else (H.name + "*" if H.name else "")
    out = HopfData(H.tower, basis, unit, mult, comult, counit, antipode, name=name)
    # the axioms are self-dual, so a verified H has a verified dual
    out.verified = H.verified
    return out


def tables_equal(H1: HopfData, H2: HopfData) -> bool:
    return (H1.basis == H2.basis and H1.unit == H2.unit and H1.mult == H2.mult
            and H1.comult == H2.comult and H1.counit == H2.counit and H1.antipode == H2.antipode)


# -- text export / import ---------------------------------------------------


def _label_json(label) -> str:
    return json.dumps(label, separators=(",", ":"), ensure_ascii=False)


def _label_from_json(obj):
    if isinstance(obj, list):
        return tuple(_label_from_json(x) for x in obj)
    return obj


def export_text(H: HopfData) -> str:
    T = H.tower
    idx = H.index
    lines = ["# hopf-data v1", f"name {H.name or '-'}"]
    head = f"tower m={T.m} p={T.p}"
    if T.radicand is not None:
        head += f" radicand={format_literal(T.radicand)}"
    lines.append(head)
    for lab in H.basis:
        lines.append("basis " + _label_json(lab))
    for k in sorted(H.unit, key=idx.get):
        lines.append(f"unit {idx[k]} {format_literal(H.unit[k])}")
    for a, b in sorted(H.mult, key=lambda ab: (idx[ab[0]], idx[ab[1]])):
        out = H.mult[(a, b)]
        for k in sorted(out, key=idx.get):
            lines.append(f"mult {idx[a]} {idx[b]} {idx[k]} {format_literal(out[k])}")
    for lab in H.basis:
        out = H.comult[lab]
        for a, b in sorted(out, key=lambda ab: (idx[ab[0]], idx[ab[1]])):
            lines.append(f"comult {idx[lab]} {idx[a]} {idx[b]} {format_literal(out[(a, b)])}")
    for k in sorted(H.counit, key=idx.get):
        lines.append(f"counit {idx[k]} {format_literal(H.counit[k])}")
    for lab in H.basis:
        out = H.antipode[lab]
        for k in sorted(out, key=idx.get):
            lines.append(f"antipode {idx[lab]} {idx[k]} {format_literal(out[k])}")
    return "\n".join(lines) + "\n"


def import_text(text: str) -> HopfData:
    tower = None
    name = ""
    basis = []
    unit, mult, comult, counit, antipode = {}, {}, {}, {}, {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        kw, _, rest = line.partition(" ")
        if kw == "name":
            name = "" if rest == "-" else rest
        elif kw == "tower":
            fields = dict(f.split("=", 1) for f in rest.split())
            base = FieldTower(int(fields["m"]), int(fields["p"]))
            tower = base
            if "radicand" in fields:
                tower = base.with_radicand(parse_literal(fields["radicand"], base))
        elif kw == "basis":
            basis.append(_label_from_json(json.loads(rest)))
        else:
            f = rest.split()
            val = parse_literal(f[-1], tower)
            ints = [int(x) for x in f[:-1]]
            if kw == "unit":
                unit[basis[ints[0]]] = val
            elif kw == "mult":
                mult.setdefault((basis[ints[0]], basis[ints[1]]), {})[basis[ints[2]]] = val
            elif kw == "comult":
                comult.setdefault(basis[ints[0]], {})[(basis[ints[1]], basis[ints[2]])] = val
            elif kw == "counit":
                counit[basis[ints[0]]] = val
            elif kw == "antipode":
                antipode.setdefault(basis[ints[0]], {})[basis[ints[1]]] = val
            else:
                raise ValueError(f"unknown record {kw!r}")
    if tower is None:
        raise ValueError("missing tower line")
    return HopfData(tower, basis, unit, mult, comult, counit, antipode, name=name)
