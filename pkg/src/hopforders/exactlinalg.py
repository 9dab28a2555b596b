"""Exact linear algebra: integer lattices in Hermite normal form and sparse
elimination over the scalar field of a FieldTower."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactfield import FieldTower


class SingularMatrix(ArithmeticError):
    pass


class NotStable(ValueError):
    pass


# -- integer lattices ---------------------------------------------------------


def _hnf_rows(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Row-style HNF: echelon form, positive pivots, entries above pivots reduced into [0, pivot)."""
    rows = [list(r) for r in rows if any(r)]
    out: list[list[int]] = []
    col = 0
    while rows and col < ncols:
        live = [r for r in rows if r[col] != 0]
        if not live:
            col += 1
            continue
        rest = [r for r in rows if r[col] == 0]
        # Euclid on column ``col`` across the live rows
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r2 = [a - q * b for a, b in zip(r, piv)]
                if r2[col] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            live = nxt
        piv = live[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        for r in out:
            q = r[col] // piv[col]
            if q:
                for k in range(col, ncols):
                    r[k] -= q * piv[k]
        out.append(piv)
        rows = rest
        col += 1
    return out


@dataclass(frozen=True)
class IntLattice:
    """(1/denominator) times the Z-span of ``basis`` (rows in HNF)."""

    ambient_rank: int
    basis: tuple
    denominator: int = 1

    @property
    def rank(self) -> int:
        return len(self.basis)

    def rational_basis(self) -> list[list[Fraction]]:
        return [[Fraction(a, self.denominator) for a in r] for r in self.basis]

    def __contains__(self, v):
        return lattice_contains(self, v)


def _canonical(rows, n, den) -> IntLattice:
    H = _hnf_rows(rows, n)
    g = math.gcd(den, *(a for r in H for a in r)) if H else den
    if g > 1:
        H = [[a // g for a in r] for r in H]
        den //= g
    if not H:
        den = 1
    return IntLattice(n, tuple(tuple(r) for r in H), den)


def hnf(generators, ambient_rank: int | None = None) -> IntLattice:
    """Canonical HNF lattice of the Z-span of rational vectors."""
    gens = [list(g) for g in generators]
    if ambient_rank is None:
        if not gens:
            raise ValueError("ambient rank needed for an empty generating set")
        ambient_rank = len(gens[0])
    if any(len(g) != ambient_rank for g in gens):
        raise ValueError("generators have different lengths")
    den = 1
    for g in gens:
        for a in g:
            den = math.lcm(den, Fraction(a).denominator)
    rows = [[int(Fraction(a) * den) for a in g] for g in gens]
    return _canonical(rows, ambient_rank, den)


def lattice_contains(L: IntLattice, v) -> bool:
    if len(v) != L.ambient_rank:
        raise ValueError("dimension mismatch")
    w = [Fraction(a) * L.denominator for a in v]
    if any(x.denominator != 1 for x in w):
        return False
    w = [int(x) for x in w]
    for r in L.basis:
        col = next(k for k, a in enumerate(r) if a)
        if w[col] % r[col]:
            return False
        q = w[col] // r[col]
        if q:
            w = [a - q * b for a, b in zip(w, r)]
    return not any(w)


def lattice_equal(A: IntLattice, B: IntLattice) -> bool:
    return A == B


def _rational_inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def dual_lattice(L: IntLattice, pairing) -> IntLattice:
    """{y : <x, y> integral for all x in L} with <x, y> = x^T G y, L of full rank."""
    n = L.ambient_rank
    G = pairing.to_rational() if isinstance(pairing, FieldMatrix) else [[Fraction(a) for a in r] for r in pairing]
    if L.rank != n:
        raise SingularMatrix("dual lattice needs a full-rank lattice")
    B = L.rational_basis()
    BG = [[sum(B[i][k] * G[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    inv = _rational_inverse(BG)  # columns span the dual
    cols = [[inv[i][j] for i in range(n)] for j in range(n)]
    return hnf(cols, n)


def integer_left_kernel(M: list[list[int]]) -> list[list[int]]:
    """Basis of {c in Z^r : c M = 0} (saturated)."""
    r = len(M)
    if r == 0:
        return []
    ncol = len(M[0])
    aug = [list(M[i]) + [int(i == j) for j in range(r)] for i in range(r)]
    H = _hnf_rows(aug, ncol + r)
    return [row[ncol:] for row in H if not any(row[:ncol])]


def fixed_sublattice(L: IntLattice, T) -> IntLattice:
    """Vectors v of L (row vectors) with v T = v.  T must map L into L."""
    n = L.ambient_rank
    B = [list(r) for r in L.basis]
    BT = [[sum(r[k] * T[k][j] for k in range(n)) for j in range(n)] for r in B]
    for v in BT:
        if not lattice_contains(L, [Fraction(a, L.denominator) for a in v]):
            raise NotStable("T does not preserve the lattice")
    M = [[BT[i][j] - B[i][j] for j in range(n)] for i in range(len(B))]
    K = integer_left_kernel(M)
    gens = [[sum(c[i] * B[i][j] for i in range(len(B))) for j in range(n)] for c in K]
    return _canonical(gens, n, L.denominator)


# -- matrices over the tower -----------------------------------------------------


class FieldMatrix:
    """Dense-indexed, sparsely stored matrix over a tower's top field."""

    def __init__(self, entries, tower: FieldTower):
        self.tower = tower
        self.nrows = len(entries)
        self.ncols = len(entries[0]) if entries else 0
        self.rows = []
        for r in entries:
            d = {}
            for j, x in enumerate(r):
                x = tower.scalar(x)
                if not x.is_zero():
                    d[j] = x
            self.rows.append(d)

    @classmethod
    def from_sparse(cls, rows: list[dict], ncols: int, tower: FieldTower):
        M = cls.__new__(cls)
        M.tower = tower
        M.nrows = len(rows)
        M.ncols = ncols
        M.rows = [{j: tower.scalar(x) for j, x in r.items() if not tower.scalar(x).is_zero()} for r in rows]
        return M

    def to_rational(self):
        out = []
        for r in self.rows:
            row = [Fraction(0)] * self.ncols
            for j, x in r.items():
                c = self.tower.cyc(x)
                if any(c.num[1:]):
                    raise ValueError("entry is not rational")
                row[j] = Fraction(c.num[0], c.den)
            out.append(row)
        return out

    def entry(self, i, j):
        return self.rows[i].get(j, self.tower.zero())

    def mul_vec(self, v):
        z = self.tower.zero()
        out = []
        for r in self.rows:
            acc = z
            for j, x in r.items():
                acc = acc + x * v[j]
            out.append(acc)
        return out

    def transpose(self) -> FieldMatrix:
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, x in r.items():
                cols[j][i] = x
        return FieldMatrix.from_sparse(cols, self.nrows, self.tower)

    def _reduce(self, extra=None):
        """Gauss-Jordan on the rows (with augmented columns); returns (pivot rows, pivot cols)."""
        rows = [dict(r) for r in self.rows]
        if extra is not None:
            for i, e in enumerate(extra):
                rows[i].update({self.ncols + j: x for j, x in e.items()})
        done: list[dict] = []
        pcols: list[int] = []
        pending = list(range(len(rows)))
        for c in range(self.ncols):
            cand = [i for i in pending if c in rows[i]]
            if not cand:
                continue
            pi = min(cand, key=lambda i: len(rows[i]))
            pending.remove(pi)
            prow = rows[pi]
            inv = prow[c].inverse()
            prow = {k: v * inv for k, v in prow.items()}
            rows[pi] = prow
            for i in pending + [d for d in range(len(rows)) if d not in pending and d != pi]:
                r = rows[i]
                f = r.get(c)
                if f is None:
                    continue
                for k, v in prow.items():
                    nv = r.get(k)
                    nv = -f * v if nv is None else nv - f * v
                    if nv.is_zero():
                        r.pop(k, None)
                    else:
                        r[k] = nv
            done.append(pi)
            pcols.append(c)
        return rows, done, pcols

    def rank(self) -> int:
        _, done, _ = self._reduce()
        return len(done)

    def inverse(self) -> FieldMatrix:
        n = self.nrows
        if n != self.ncols:
            raise SingularMatrix("matrix is not square")
        ident = [{i: self.tower.one()} for i in range(n)]
        rows, done, pcols = self._reduce(ident)
        if len(done) != n:
            raise SingularMatrix("matrix is singular")
        inv = [None] * n
        for pi, c in zip(done, pcols):
            inv[c] = {k - n: v for k, v in rows[pi].items() if k >= n}
        return FieldMatrix.from_sparse(inv, n, self.tower)

    def solve(self, v):
        inv = self.inverse()
        return inv.mul_vec([self.tower.scalar(x) for x in v])

    def kernel(self) -> list[list]:
        """Basis of the right kernel {x : M x = 0}."""
        rows, done, pcols = self._reduce()
        free = [c for c in range(self.ncols) if c not in pcols]
        out = []
        for fc in free:
            x = [self.tower.zero()] * self.ncols
            x[fc] = self.tower.one()
            for pi, c in zip(done, pcols):
                v = rows[pi].get(fc)
                if v is not None:
                    x[c] = -v
            out.append(x)
        return out


def solve_in_basis(B: FieldMatrix, v):
    """Coordinates c with B c = v (columns of B are the basis vectors)."""
    c = B.solve(v)
    if B.mul_vec(c) != [B.tower.scalar(x) for x in v]:
        raise SingularMatrix("residual check failed")
    return c


class RowEchelon:
    """Incrementally reduced row space over a tower's field (rows as sparse dicts)."""

    def __init__(self, ncols: int, tower: FieldTower):
        self.ncols = ncols
        self.tower = tower
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: dict) -> bool:
        """Add a row; returns True if the rank grew."""
        r = {k: self.tower.scalar(v) for k, v in row.items()}
        r = {k: v for k, v in r.items() if not v.is_zero()}
        for c, prow in self.pivots.items():
            f = r.get(c)
            if f is None:
                continue
            for k, v in prow.items():
                nv = r[k] - f * v if k in r else -f * v
                if nv.is_zero():
                    r.pop(k, None)
                else:
                    r[k] = nv
        if not r:
            return False
        c = min(r)
        inv = r[c].inverse()
        r = {k: v * inv for k, v in r.items()}
        for prow in self.pivots.values():
            f = prow.get(c)
            if f is None:
                continue
            for k, v in r.items():
                nv = prow[k] - f * v if k in prow else -f * v
                if nv.is_zero():
                    prow.pop(k, None)
                else:
                    prow[k] = nv
        self.pivots[c] = r
        return True

    def kernel(self) -> list[list]:
        """Basis of {x : row . x = 0 for every added row}."""
        free = [c for c in range(self.ncols) if c not in self.pivots]
        out = []
        for fc in free:
            x = [self.tower.zero()] * self.ncols
            x[fc] = self.tower.one()
            for c, prow in self.pivots.items():
                v = prow.get(fc)
                if v is not None:
                    x[c] = -v
            out.append(x)
        return out
