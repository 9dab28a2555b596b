"""Exact verification of Hopf axioms and of Hopf morphisms.

Every identity is checked on all basis elements (or pairs, or triples).
Identities are grouped into shards by the first basis index so a run can
be split across workers or restarted; results are merged by check id.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..exactfield import format_literal
from ._sparse import Terms
from .core import HopfData, Report, Timer, UnverifiedAlgebra

_I64 = np.int64
_CHUNK = 3_000_000

AXIOM_FAMILIES = (
    "associativity",
    "unit",
    "coassociativity",
    "counit",
    "comult_multiplicative",
    "counit_multiplicative",
    "antipode",
    "antipode_unit",
    "counit_antipode",
    "antipode_involutive",
)


def _basis_terms(indices, batch=None) -> Terms:
    """Sum of e_i, with an optional batch column."""
    idx = np.asarray(indices, dtype=_I64)
    cols = [idx] if batch is None else [idx, np.asarray(batch, dtype=_I64)]
    n = len(idx)
    return Terms(np.stack(cols, axis=1) if n else np.zeros((0, len(cols)), dtype=_I64),
                 np.zeros(n, dtype=_I64), np.zeros(n, dtype=np.int8), np.ones(n, dtype=_I64), 1)


def _with_batch(T: Terms, b: int) -> Terms:
    col = np.full((len(T), 1), b, dtype=_I64)
    return T.with_keys(np.concatenate([T.keys, col], axis=1))


class _Ctx:
    def __init__(self, H: HopfData):
        self.H = H
        self.R = H.ring
        self.n = H.dim
        c = H.compiled()
        self.M, self.D, self.E, self.S, self.U = c["mult"], c["comult"], c["counit"], c["antipode"], c["unit"]
        self._delta = None

    def delta(self, i) -> Terms:
        if self._delta is None:
            R = self.R
            self._delta = [R.compact(R.apply_unary(_basis_terms([k]), 0, self.D)) for k in range(self.n)]
        return self._delta[i]

    def diff(self, lhs: Terms, rhs: Terms, bcol: int):
        """Return {batch code: canonical difference items} for failing batches."""
        R = self.R
        d = R.canonical(R.sub(lhs, rhs))
        if len(d) == 0:
            return {}
        bad = np.unique(d.keys[:, bcol]).tolist()
        return bad, d

    def describe(self, d: Terms, b, bcol: int, limit=4) -> str:
        R = self.R
        sel = d.keys[:, bcol] == b
        sub = d.take(np.nonzero(sel)[0])
        keep = [c for c in range(sub.arity) if c != bcol]
        sub = sub.with_keys(sub.keys[:, keep])
        items = R.to_items(sub)
        B = self.H.basis
        parts = []
        for k in sorted(items)[:limit]:
            lab = "(x)".join(str(B[i]) for i in k) if k else "1"
            parts.append(f"({format_literal(items[k])})*{lab}")
        more = "" if len(items) <= limit else f" + ...[{len(items) - limit} more]"
        return " + ".join(parts) + more


# -- individual families ----------------------------------------------------
# Each returns (failure_count, first witness or None).


def _check_assoc(ctx: _Ctx, shard):
    R, M, n = ctx.R, ctx.M, ctx.n
    fails, wit = 0, None
    for i in shard:
        j = np.repeat(np.arange(n), n)
        k = np.tile(np.arange(n), n)
        code = j * n + k
        T = Terms(np.stack([np.full(n * n, i), j, k, code], axis=1).astype(_I64), np.zeros(n * n, _I64),
                  np.zeros(n * n, np.int8), np.ones(n * n, _I64), 1)
        left = R.apply_binary(R.apply_binary(T, 0, 1, M), 0, 1, M)
        right = R.apply_binary(R.apply_binary(T, 1, 2, M), 0, 1, M)
        res = ctx.diff(left, right, 1)
        if res:
            bad, d = res
            fails += len(bad)
            if wit is None:
                b = bad[0]
                B = ctx.H.basis
                wit = (f"(x*y)*z - x*(y*z) for x={B[i]}, y={B[b // n]}, z={B[b % n]}: "
                       + ctx.describe(d, b, 1))
    return fails, wit


def _check_unit(ctx: _Ctx, shard):
    R, M = ctx.R, ctx.M
    E = _basis_terms(shard, shard)
    fails, wit = 0, None
    for side in ("left", "right"):
        T = R.cross(ctx.U, E) if side == "left" else R.permute(R.cross(E, ctx.U), (0, 2, 1))
        res = ctx.diff(R.apply_binary(T, 0, 1, M), E, 1)
        if res:
            bad, d = res
            fails += len(bad)
            if wit is None:
                wit = f"{side} unit law fails at {ctx.H.basis[bad[0]]}: " + ctx.describe(d, bad[0], 1)
    return fails, wit


def _delta_batch(ctx: _Ctx, shard) -> Terms:
    return ctx.R.concat([_with_batch(ctx.delta(i), i) for i in shard])


def _groups(ctx: _Ctx, shard, width):
    """Split a shard so each group expands to at most about _CHUNK terms."""
    group, acc = [], 0
    for i in shard:
        size = len(ctx.delta(i)) * width
        if group and acc + size > _CHUNK:
            yield group
            group, acc = [], 0
        group.append(i)
        acc += size
    if group:
        yield group


def _check_coassoc(ctx: _Ctx, shard):
    R = ctx.R
    width = int(np.diff(ctx.D.start).max()) if ctx.n else 1
    fails, wit = 0, None
    for group in _groups(ctx, shard, width):
        T = _delta_batch(ctx, group)
        left = R.apply_unary(T, 0, ctx.D)
        right = R.apply_unary(T, 1, ctx.D)
        res = ctx.diff(left, right, 3)
        if res:
            bad, d = res
            fails += len(bad)
            if wit is None:
                wit = (f"(D(x)id)D(x) - (id(x)D)D(x) for x={ctx.H.basis[bad[0]]}: "
                       + ctx.describe(d, bad[0], 3))
    return fails, wit


def _check_counit(ctx: _Ctx, shard):
    R = ctx.R
    T = _delta_batch(ctx, shard)
    E = _basis_terms(shard, shard)
    fails, wit = 0, None
    for col, side in ((0, "(eps(x)id)D"), (1, "(id(x)eps)D")):
        res = ctx.diff(R.apply_unary(T, col, ctx.E), E, 1)
        if res:
            bad, d = res
            fails += len(bad)
            if wit is None:
                wit = f"{side}(x) - x for x={ctx.H.basis[bad[0]]}: " + ctx.describe(d, bad[0], 1)
    return fails, wit


def _check_comult_mult(ctx: _Ctx, shard):
    R, M, n = ctx.R, ctx.M, ctx.n
    fails, wit = 0, None
    # Delta(1) = 1 (x) 1, reported with shard 0
    if 0 in shard:
        lhs = _with_batch(R.apply_unary(ctx.U, 0, ctx.D), 0)
        rhs = _with_batch(R.cross(ctx.U, ctx.U), 0)
        res = ctx.diff(lhs, rhs, 2)
        if res:
            fails += 1
            wit = "Delta(1) - 1(x)1: " + ctx.describe(res[1], 0, 2)
    for i in shard:
        Di = ctx.delta(i)
        js, acc = [], 0
        chunks = []
        for j in range(n):
            js.append(j)
            acc += len(ctx.delta(j))
            if len(Di) * acc > _CHUNK:
                chunks.append(js)
                js, acc = [], 0
        if js:
            chunks.append(js)
        for js in chunks:
            Y = R.concat([_with_batch(ctx.delta(j), j) for j in js])
            P = R.cross(Di, Y)  # x1 x2 y1 y2 b
            P = R.apply_binary(P, 0, 2, M)  # m1 x2 y2 b
            P = R.apply_binary(P, 1, 2, M)  # m1 m2 b
            T = _basis_terms(np.full(len(js), i), js)
            T = T.with_keys(np.concatenate([T.keys[:, :1], T.keys[:, 1:], T.keys[:, 1:]], axis=1))
            rhs = R.apply_unary(R.apply_binary(T, 0, 1, M), 0, ctx.D)  # k1 k2 b
            res = ctx.diff(P, rhs, 2)
            if res:
                bad, d = res
                fails += len(bad)
                if wit is None:
                    wit = (f"Delta(xy) - Delta(x)Delta(y) for x={ctx.H.basis[i]}, y={ctx.H.basis[bad[0]]}: "
                           + ctx.describe(d, bad[0], 2))
    return fails, wit


def _check_counit_mult(ctx: _Ctx, shard):
    R, M, n = ctx.R, ctx.M, ctx.n
    fails, wit = 0, None
    if 0 in shard:
        e1 = R.apply_unary(ctx.U, 0, ctx.E)
        if not R.is_zero(R.sub(e1, R.scalar(1))):
            fails += 1
            wit = "eps(1) != 1"
    for i in shard:
        js = np.arange(n, dtype=_I64)
        T = Terms(np.stack([np.full(n, i), js, js], axis=1).astype(_I64), np.zeros(n, _I64),
                  np.zeros(n, np.int8), np.ones(n, _I64), 1)
        lhs = R.apply_unary(R.apply_binary(T, 0, 1, M), 0, ctx.E)
        rhs = R.apply_unary(R.apply_unary(T, 0, ctx.E), 0, ctx.E)
        res = ctx.diff(lhs, rhs, 0)
        if res:
            bad, d = res
            fails += len(bad)
            if wit is None:
                wit = f"eps(xy) - eps(x)eps(y) for x={ctx.H.basis[i]}, y={ctx.H.basis[bad[0]]}: " + ctx.describe(d, bad[0], 0)
    return fails, wit


def _check_antipode(ctx: _Ctx, shard):
    R, M = ctx.R, ctx.M
    T = _delta_batch(ctx, shard)
    eps = R.apply_unary(_basis_terms(shard, shard), 0, ctx.E)  # (b)
    rhs = R.cross(ctx.U, eps)
    fails, wit = 0, None
    for col, side in ((0, "m(S(x)id)D"), (1, "m(id(x)S)D")):
        lhs = R.apply_binary(R.apply_unary(T, col, ctx.S), 0, 1, M)
        res = ctx.diff(lhs, rhs, 1)
        if res:
            bad, d = res
            fails += len(bad)
            if wit is None:
                wit = f"{side}(x) - eps(x)1 for x={ctx.H.basis[bad[0]]}: " + ctx.describe(d, bad[0], 1)
    return fails, wit


def _check_antipode_unit(ctx: _Ctx, shard):
    if 0 not in shard:
        return 0, None
    R = ctx.R
    lhs = _with_batch(R.apply_unary(ctx.U, 0, ctx.S), 0)
    res = ctx.diff(lhs, _with_batch(ctx.U, 0), 1)
    if res:
        return 1, "S(1) - 1: " + ctx.describe(res[1], 0, 1)
    return 0, None


def _check_counit_antipode(ctx: _Ctx, shard):
    R = ctx.R
    E = _basis_terms(shard, shard)
    lhs = R.apply_unary(R.apply_unary(E, 0, ctx.S), 0, ctx.E)
    rhs = R.apply_unary(E, 0, ctx.E)
    res = ctx.diff(lhs, rhs, 0)
    if res:
        bad, d = res
        return len(bad), f"eps(S(x)) - eps(x) for x={ctx.H.basis[bad[0]]}: " + ctx.describe(d, bad[0], 0)
    return 0, None


def _check_s2(ctx: _Ctx, shard):
    R = ctx.R
    E = _basis_terms(shard, shard)
    lhs = R.apply_unary(R.apply_unary(E, 0, ctx.S), 0, ctx.S)
    res = ctx.diff(lhs, E, 1)
    if res:
        bad, d = res
        return len(bad), f"S(S(x)) - x for x={ctx.H.basis[bad[0]]}: " + ctx.describe(d, bad[0], 1)
    return 0, None


_FAMILY_FUNCS = {
    "associativity": _check_assoc,
    "unit": _check_unit,
    "coassociativity": _check_coassoc,
    "counit": _check_counit,
    "comult_multiplicative": _check_comult_mult,
    "counit_multiplicative": _check_counit_mult,
    "antipode": _check_antipode,
    "antipode_unit": _check_antipode_unit,
    "counit_antipode": _check_counit_antipode,
    "antipode_involutive": _check_s2,
}


def _shards(n, size):
    return [list(range(a, min(a + size, n))) for a in range(0, n, size)]


def _run_family(H, fam, shard):
    ctx = _Ctx(H)
    with Timer() as tm:
        fails, wit = _FAMILY_FUNCS[fam](ctx, shard)
    return fam, shard[0] if shard else 0, fails, wit, tm.elapsed


def verify_hopf_axioms(H: HopfData, families=None, indices=None, jobs=1, shard_size=None) -> Report:
    """Check every Hopf axiom exactly on all basis elements, pairs and triples.

    ``indices`` restricts the shards to those first indices (for restarts);
    ``H.verified`` is set only by a complete passing run.
    """
    fams = list(families or AXIOM_FAMILIES)
    unknown = set(fams) - set(_FAMILY_FUNCS)
    if unknown:
        raise ValueError(f"unknown check families {sorted(unknown)}")
    n = H.dim
    idx = list(range(n)) if indices is None else sorted(set(indices))
    if jobs > 1:
        size = shard_size or max(1, math.ceil(len(idx) / (4 * jobs)))
    else:
        size = shard_size or max(1, len(idx))
    tasks = [(fam, idx[a:a + size]) for fam in fams for a in range(0, len(idx), size)]
    results = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = [ex.submit(_run_family, H, fam, sh) for fam, sh in tasks]
            results = [f.result() for f in futs]
    else:
        ctx = _Ctx(H)
        for fam, sh in tasks:
            with Timer() as tm:
                fails, wit = _FAMILY_FUNCS[fam](ctx, sh)
            results.append((fam, sh[0] if sh else 0, fails, wit, tm.elapsed))
    report = Report("verify_hopf_axioms", {"algebra": H.name, "dim": n})
    for fam in fams:
        rs = sorted((r for r in results if r[0] == fam), key=lambda r: r[1])
        fails = sum(r[2] for r in rs)
        wit = next((r[3] for r in rs if r[3]), None)
        report.add(fam, fails == 0, wit, sum(r[4] for r in rs), fails)
    if indices is None and families is None:
        H.verified = report.ok
    return report


def require_verified(H: HopfData):
    if not H.verified:
        raise UnverifiedAlgebra(f"{H!r} has not passed verify_hopf_axioms")


# -- morphisms ---------------------------------------------------------------


def verify_hopf_map(H1: HopfData, H2: HopfData, images: dict, semilinear=False, check_bijective=True,
                    prefix="") -> Report:
    """Check that the linear map b -> images[b] is a morphism of Hopf algebras.

    With ``semilinear`` the map is taken to be semilinear for the Galois
    conjugation t -> -t of the tower, so f(c x) = gamma(c) f(x); the
    structure constants of H1 are conjugated before being pushed through f.
    """
    from ..exactlinalg import FieldMatrix

    R = H2.ring
    n1, n2 = H1.dim, H2.dim
    idx2 = H2.index
    rows = []
    for lab in H1.basis:
        im = images[lab]
        terms = im.terms if hasattr(im, "terms") else im
        rows.append([((idx2[k],), v) for k, v in terms.items()])
    F = R.table(rows, n1, 1)
    c1, c2 = H1.compiled(), H2.compiled()
    rep = Report("verify_hopf_map", {"source": H1.name, "target": H2.name})
    B = H1.basis

    def conj(T: Terms) -> Terms:
        return galois_conjugate_terms(T) if semilinear else T

    def first_bad(lhs, rhs, bcol):
        d = R.canonical(R.sub(lhs, rhs))
        if len(d) == 0:
            return None
        return np.unique(d.keys[:, bcol]).tolist(), d

    # unit
    lhs = R.apply_unary(conj(c1["unit"]), 0, F)
    bad = first_bad(_with_batch(lhs, 0), _with_batch(c2["unit"], 0), 1)
    rep.add(prefix + "unit", bad is None, "f(1) != 1")
    # multiplicativity
    fails, wit = 0, None
    for i in range(n1):
        js = np.arange(n1, dtype=_I64)
        T = Terms(np.stack([np.full(n1, i), js, js], axis=1).astype(_I64), np.zeros(n1, _I64),
                  np.zeros(n1, np.int8), np.ones(n1, _I64), 1)
        lhs = R.apply_unary(conj(R.apply_binary(T, 0, 1, c1["mult"])), 0, F)
        rhs = R.apply_unary(R.apply_unary(T, 0, F), 1, F)
        rhs = R.apply_binary(rhs, 0, 1, c2["mult"])
        res = first_bad(lhs, rhs, 1)
        if res:
            fails += len(res[0])
            if wit is None:
                wit = f"f(xy) != f(x)f(y) for x={B[i]}, y={B[res[0][0]]}"
    rep.add(prefix + "multiplicative", fails == 0, wit, failures=fails)
    # comultiplicativity, counit, antipode
    E = _basis_terms(range(n1), range(n1))
    D1 = conj(R.apply_unary(E, 0, c1["comult"]))
    lhs = R.apply_unary(R.apply_unary(D1, 0, F), 1, F)
    rhs = R.apply_unary(R.apply_unary(E, 0, F), 0, c2["comult"])
    res = first_bad(lhs, rhs, 2)
    rep.add(prefix + "comultiplicative", res is None,
            res and f"(f(x)f)Delta(x) != Delta(f(x)) for x={B[res[0][0]]}", failures=len(res[0]) if res else 0)
    lhs = R.apply_unary(R.apply_unary(E, 0, F), 0, c2["counit"])
    rhs = conj(R.apply_unary(E, 0, c1["counit"]))
    res = first_bad(lhs, rhs, 0)
    rep.add(prefix + "counit", res is None, res and f"eps(f(x)) != eps(x) for x={B[res[0][0]]}",
            failures=len(res[0]) if res else 0)
    lhs = R.apply_unary(R.apply_unary(E, 0, F), 0, c2["antipode"])
    rhs = R.apply_unary(conj(R.apply_unary(E, 0, c1["antipode"])), 0, F)
    res = first_bad(lhs, rhs, 1)
    rep.add(prefix + "antipode", res is None, res and f"S(f(x)) != f(S(x)) for x={B[res[0][0]]}",
            failures=len(res[0]) if res else 0)
    if check_bijective:
        mat = [[H2.tower.zero()] * n1 for _ in range(n2)]
        for j, lab in enumerate(H1.basis):
            im = images[lab]
            terms = im.terms if hasattr(im, "terms") else im
            for k, v in terms.items():
                mat[idx2[k]][j] = H2.tower.scalar(v)
        ok = n1 == n2 and FieldMatrix(mat, H2.tower).rank() == n1
        rep.add(prefix + "bijective", ok, "matrix of the map is singular")
    return rep


def galois_conjugate_terms(T: Terms) -> Terms:
    """Apply t -> -t to every coefficient."""
    sign = np.where(T.tdeg == 1, -1, 1)
    num = T.num * sign if T.num.dtype != object else np.array(
        [-x if d == 1 else x for x, d in zip(T.num, T.tdeg)], dtype=object)
    return Terms(T.keys, T.exp, T.tdeg, num, T.den)
