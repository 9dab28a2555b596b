"""Vectorized sparse multilinear objects over a FieldTower.

A ``Terms`` object is a formal sum of entries

    num/den * zeta_m^exp * t^tdeg * [k_1, ..., k_r]

where ``[k_1, ..., k_r]`` is a tuple of basis indices (one per tensor leg or
batch column).  Exponents live in the group ring Z[C_m], so products of
monomial coefficients stay monomial; reduction modulo Phi_m only happens in
``canonical``.  Numerators are int64 while they provably fit, object arrays
of Python ints otherwise.
"""

from __future__ import annotations

import math
from functools import lru_cache, reduce

import numpy as np

from ..exactfield import CycElem, FieldTower, QuadElem, euler_phi, power_reduction

_LIMIT = 1 << 62
_I64 = np.int64


def _absmax(a) -> int:
    if len(a) == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a)
    return int(np.abs(a).max())


def _as_object(a):
    return a if a.dtype == object else a.astype(object)


def _mul(a, b):
    if a.dtype != object and b.dtype != object:
        if _absmax(a) * _absmax(b) < _LIMIT:
            return a * b
    return _as_object(a) * _as_object(b)


def _scale(a, k: int):
    if k == 1:
        return a
    if a.dtype != object and _absmax(a) * abs(k) < _LIMIT:
        return a * k
    return _as_object(a) * k


def _concat_nums(parts):
    if any(p.dtype == object for p in parts):
        parts = [_as_object(p) for p in parts]
    if not parts:
        return np.zeros(0, dtype=_I64)
    return np.concatenate(parts)


def _maybe_shrink(a):
    if a.dtype == object and (len(a) == 0 or _absmax(a) < _LIMIT):
        return a.astype(_I64)
    return a


class Terms:
    __slots__ = ("keys", "exp", "tdeg", "num", "den")

    def __init__(self, keys, exp, tdeg, num, den=1):
        self.keys = keys
        self.exp = exp
        self.tdeg = tdeg
        self.num = num
        self.den = den

    @property
    def arity(self) -> int:
        return self.keys.shape[1]

    def __len__(self):
        return len(self.exp)

    @classmethod
    def empty(cls, arity: int):
        return cls(np.zeros((0, arity), dtype=_I64), np.zeros(0, dtype=_I64),
                   np.zeros(0, dtype=np.int8), np.zeros(0, dtype=_I64), 1)

    def take(self, idx) -> Terms:
        return Terms(self.keys[idx], self.exp[idx], self.tdeg[idx], self.num[idx], self.den)

    def with_keys(self, keys) -> Terms:
        return Terms(keys, self.exp, self.tdeg, self.num, self.den)

    def __neg__(self):
        return Terms(self.keys, self.exp, self.tdeg, -self.num, self.den)


class Table:
    """CSR table: input index (or pair index) -> Terms of fixed output arity."""

    __slots__ = ("start", "terms", "n_in")

    def __init__(self, start, terms: Terms, n_in: int):
        self.start = start
        self.terms = terms
        self.n_in = n_in


class Ring:
    """Scalar context of a tower: reduction data for Phi_m and t^2 = r."""

    def __init__(self, tower: FieldTower):
        self.tower = tower
        self.m = tower.m
        self.phi = euler_phi(tower.m)
        rows = power_reduction(tower.m)[: self.m]
        start, coord, coef = [0], [], []
        for row in rows:
            for i, c in enumerate(row):
                if c:
                    coord.append(i)
                    coef.append(c)
            start.append(len(coord))
        self.red_start = np.array(start, dtype=_I64)
        self.red_coord = np.array(coord, dtype=_I64)
        self.red_coef = np.array(coef, dtype=_I64)
        if tower.radicand is not None:
            r = tower.radicand
            nz = [i for i, c in enumerate(r.num) if c]
            self.r_exp = np.array(nz, dtype=_I64)
            self.r_num = np.array([r.num[i] for i in nz], dtype=object)
            self.r_num = _maybe_shrink(self.r_num)
            self.r_den = r.den
        else:
            self.r_exp = None

    # -- scalars --------------------------------------------------------

    def scalar_parts(self, x):
        """(exp list, tdeg list, num list, den) for a field scalar."""
        if isinstance(x, QuadElem):
            parts = [(x.a, 0), (x.b, 1)]
        else:
            parts = [(self.tower.cyc(x), 0)]
        den = math.lcm(*(c.den for c, _ in parts))
        exps, tdegs, nums = [], [], []
        for c, td in parts:
            f = den // c.den
            for i, v in enumerate(c.num):
                if v:
                    exps.append(i)
                    tdegs.append(td)
                    nums.append(v * f)
        return exps, tdegs, nums, den

    def scalar(self, x) -> Terms:
        exps, tdegs, nums, den = self.scalar_parts(x)
        return Terms(np.zeros((len(exps), 0), dtype=_I64), np.array(exps, dtype=_I64),
                     np.array(tdegs, dtype=np.int8), _maybe_shrink(np.array(nums, dtype=object)), den)

    def from_items(self, items, arity: int) -> Terms:
        """items: iterable of (key tuple, field scalar)."""
        keys, exps, tdegs, nums, dens = [], [], [], [], []
        for key, x in items:
            e, td, nm, d = self.scalar_parts(x)
            keys.extend([tuple(key)] * len(e))
            exps.extend(e)
            tdegs.extend(td)
            nums.extend((n, d) for n in nm)
        den = math.lcm(*(d for _, d in nums)) if nums else 1
        numv = [n * (den // d) for n, d in nums]
        karr = np.array(keys, dtype=_I64).reshape(len(keys), arity)
        return Terms(karr, np.array(exps, dtype=_I64), np.array(tdegs, dtype=np.int8),
                     _maybe_shrink(np.array(numv, dtype=object)), den)

    def table(self, rows, n_in: int, arity: int) -> Table:
        """rows: sequence of length n_in, each an iterable of (key tuple, scalar)."""
        start = [0]
        allitems = []
        for r in rows:
            items = list(r)
            allitems.extend(items)
            start.append(start[-1] + sum(len(self.scalar_parts(x)[0]) for _, x in items))
        terms = self.from_items(allitems, arity)
        return Table(np.array(start, dtype=_I64), terms, n_in)

    # -- structural operations -----------------------------------------

    def fold(self, T: Terms) -> Terms:
        """Rewrite t^2 as the radicand."""
        mask = T.tdeg >= 2
        if not mask.any():
            return T
        if self.r_exp is None:
            raise ValueError("t^2 encountered in a tower without radicand")
        keep = T.take(~mask)
        sel = np.nonzero(mask)[0]
        R = len(self.r_exp)
        rep = np.repeat(sel, R)
        ri = np.tile(np.arange(R), len(sel))
        new = Terms(T.keys[rep], (T.exp[rep] + self.r_exp[ri]) % self.m,
                    (T.tdeg[rep] - 2).astype(np.int8), _mul(T.num[rep], self.r_num[ri]), 1)
        out = Terms(np.concatenate([keep.keys, new.keys]), np.concatenate([keep.exp, new.exp]),
                    np.concatenate([keep.tdeg, new.tdeg]),
                    _concat_nums([_scale(keep.num, self.r_den), new.num]), T.den * self.r_den)
        return self.fold(out)

    def cross(self, A: Terms, B: Terms) -> Terms:
        na, nb = len(A), len(B)
        ia = np.repeat(np.arange(na), nb)
        ib = np.tile(np.arange(nb), na)
        T = Terms(np.concatenate([A.keys[ia], B.keys[ib]], axis=1),
                  (A.exp[ia] + B.exp[ib]) % self.m, A.tdeg[ia] + B.tdeg[ib],
                  _mul(A.num[ia], B.num[ib]), A.den * B.den)
        return self.fold(T)

    def scale(self, T: Terms, x) -> Terms:
        S = self.scalar(x)
        return self.cross(T, S)

    def _expand(self, T: Terms, idx, table: Table, pos: int, drop) -> Terms:
        st = table.start
        lens = st[idx + 1] - st[idx]
        total = int(lens.sum())
        rep = np.repeat(np.arange(len(T)), lens)
        offs = np.arange(total, dtype=_I64) - np.repeat(np.cumsum(lens) - lens, lens) + st[idx][rep]
        tt = table.terms
        keep_cols = [c for c in range(T.arity) if c not in drop]
        base = T.keys[rep][:, keep_cols]
        keys = np.concatenate([base[:, :pos], tt.keys[offs], base[:, pos:]], axis=1)
        out = Terms(keys, (T.exp[rep] + tt.exp[offs]) % self.m, T.tdeg[rep] + tt.tdeg[offs],
                    _mul(T.num[rep], tt.num[offs]), T.den * tt.den)
        return self.fold(out)

    def apply_unary(self, T: Terms, col: int, table: Table) -> Terms:
        """Replace column ``col`` by the table's output columns."""
        return self._expand(T, T.keys[:, col], table, col, (col,))

    def apply_binary(self, T: Terms, c1: int, c2: int, table: Table) -> Terms:
        """Combine columns c1, c2 (in this order) through a pair table; result sits at min(c1, c2)."""
        idx = T.keys[:, c1] * table.n_in + T.keys[:, c2]
        pos = min(c1, c2)
        return self._expand(T, idx, table, pos, (c1, c2))

    def permute(self, T: Terms, order) -> Terms:
        return T.with_keys(T.keys[:, list(order)])

    def add(self, A: Terms, B: Terms) -> Terms:
        den = math.lcm(A.den, B.den)
        return Terms(np.concatenate([A.keys, B.keys]), np.concatenate([A.exp, B.exp]),
                     np.concatenate([A.tdeg, B.tdeg]),
                     _concat_nums([_scale(A.num, den // A.den), _scale(B.num, den // B.den)]), den)

    def sub(self, A: Terms, B: Terms) -> Terms:
        return self.add(A, -B)

    def concat(self, parts) -> Terms:
        parts = list(parts)
        if not parts:
            raise ValueError("nothing to concatenate")
        den = math.lcm(*(p.den for p in parts))
        return Terms(np.concatenate([p.keys for p in parts]), np.concatenate([p.exp for p in parts]),
                     np.concatenate([p.tdeg for p in parts]),
                     _concat_nums([_scale(p.num, den // p.den) for p in parts]), den)

    # -- normal forms ---------------------------------------------------

    def compact(self, T: Terms) -> Terms:
        """Merge entries with equal (keys, exp, tdeg); drop zeros; reduce the denominator."""
        n = len(T)
        if n == 0:
            return Terms(T.keys, T.exp, T.tdeg, T.num.astype(_I64) if T.num.dtype == object else T.num, 1)
        cols = [T.keys[:, c] for c in range(T.arity)] + [T.exp, T.tdeg.astype(_I64)]
        dims = [int(c.max()) + 1 if len(c) else 1 for c in cols]
        if math.prod(dims) < _LIMIT:
            code = np.ravel_multi_index(tuple(cols), dims)
            order = np.argsort(code, kind="stable")
            sc = code[order]
            brk = np.concatenate([[True], sc[1:] != sc[:-1]])
        else:
            order = np.lexsort(tuple(reversed(cols)))
            brk = np.ones(n, dtype=bool)
            brk[1:] = False
            for c in cols:
                s = c[order]
                brk[1:] |= s[1:] != s[:-1]
        starts = np.nonzero(brk)[0]
        num = T.num
        if num.dtype != object and _absmax(num) * n >= _LIMIT:
            num = _as_object(num)
        sums = np.add.reduceat(num[order], starts)
        first = order[starts]
        nz = sums != 0
        if num.dtype == object:
            nz = np.array([bool(x) for x in sums], dtype=bool) if len(sums) else np.zeros(0, bool)
        first = first[nz]
        sums = sums[nz]
        den = T.den
        if len(sums):
            if sums.dtype == object:
                g = reduce(math.gcd, (int(x) for x in sums), den)
            else:
                g = math.gcd(int(np.gcd.reduce(sums)), den)
            if g > 1:
                sums = sums // g
                den //= g
            sums = _maybe_shrink(sums) if sums.dtype == object else sums
        else:
            den = 1
            sums = np.zeros(0, dtype=_I64)
        return Terms(T.keys[first], T.exp[first], T.tdeg[first], sums, den)

    def canonical(self, T: Terms) -> Terms:
        """Power-basis normal form: exponents reduced below phi(m)."""
        T = self.compact(T)
        if len(T) == 0 or int(T.exp.max()) < self.phi:
            return T
        st = self.red_start
        lens = st[T.exp + 1] - st[T.exp]
        rep = np.repeat(np.arange(len(T)), lens)
        offs = np.arange(int(lens.sum()), dtype=_I64) - np.repeat(np.cumsum(lens) - lens, lens) + st[T.exp][rep]
        out = Terms(T.keys[rep], self.red_coord[offs], T.tdeg[rep],
                    _mul(T.num[rep], self.red_coef[offs]), T.den)
        return self.compact(out)

    def is_zero(self, T: Terms) -> bool:
        return len(self.canonical(T)) == 0

    def to_items(self, T: Terms) -> dict:
        """Canonical dict: key tuple -> field scalar of the tower."""
        T = self.canonical(T)
        acc: dict = {}
        phi = self.phi
        for k, e, td, nm in zip(map(tuple, T.keys.tolist()), T.exp.tolist(), T.tdeg.tolist(), T.num.tolist()):
            slot = acc.get(k)
            if slot is None:
                slot = acc[k] = ([0] * phi, [0] * phi)
            slot[td][e] += int(nm)
        out = {}
        m, den = self.m, T.den
        for k, (a, b) in acc.items():
            ca = CycElem(m, a, den)
            if self.tower.radicand is None:
                out[k] = ca
            else:
                out[k] = QuadElem(self.tower, ca, CycElem(m, b, den))
        return out

    def integral_mask_keys(self, T: Terms):
        """Keys (as tuples) whose coefficient fails the coordinate integrality fast path."""
        T = self.canonical(T)
        if T.den == 1 or len(T) == 0:
            return set(), T
        if T.num.dtype == object:
            bad = np.array([int(x) % T.den != 0 for x in T.num], dtype=bool)
        else:
            bad = (T.num % T.den) != 0
        return {tuple(k) for k in T.keys[bad].tolist()}, T


@lru_cache(maxsize=None)
def ring_for(tower: FieldTower) -> Ring:
    return Ring(tower)
