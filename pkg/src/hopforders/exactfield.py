"""Exact arithmetic in Q(zeta_m) and in a quadratic extension Q(zeta_m)(t), t^2 = r.

Elements of the cyclotomic field are stored in the power basis
``1, z, ..., z^(phi(m)-1)`` modulo the cyclotomic polynomial, as integer
numerators over one positive common denominator.  Since Z[zeta_m] is the
full ring of integers, integrality is a coordinate check.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational


class DivisionByZero(ZeroDivisionError):
    pass


class UnsupportedTower(ValueError):
    pass


class LiteralError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _poly_divmod(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    # b monic; coefficient lists in ascending order
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1]
        q[k] = c
        if c:
            for i, bi in enumerate(b):
                a[k + i] -= c * bi
    rem = a[: len(b) - 1]
    return q, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("m must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(num)


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


@lru_cache(maxsize=None)
def power_reduction(m: int) -> tuple[tuple[int, ...], ...]:
    """Row k is the power-basis coordinate vector of zeta_m^k, 0 <= k < max(m, 2 phi - 1)."""
    phi = euler_phi(m)
    cyc = cyclotomic_polynomial(m)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(max(m, 2 * phi - 1)):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * cyc[i]
    return tuple(rows)


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        num = [-x for x in num]
        den = -den
    g = math.gcd(den, *num)
    if g > 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


class CycElem:
    """An element of Q(zeta_m), kept reduced modulo Phi_m."""

    __slots__ = ("m", "num", "den", "_hash")

    def __init__(self, m: int, num, den: int = 1):
        phi = euler_phi(m)
        num = list(num)
        if len(num) != phi:
            raise ValueError(f"expected {phi} coordinates, got {len(num)}")
        if den == 0:
            raise DivisionByZero("zero denominator")
        self.m = m
        self.num, self.den = _normalize(num, den)
        self._hash = None

    @classmethod
    def _raw(cls, m, num, den):
        obj = cls.__new__(cls)
        obj.m = m
        obj.num, obj.den = _normalize(num, den)
        obj._hash = None
        return obj

    @classmethod
    def from_rational(cls, m: int, q) -> CycElem:
        q = Fraction(q)
        num = [0] * euler_phi(m)
        num[0] = q.numerator
        return cls._raw(m, num, q.denominator)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> CycElem:
        return cls._raw(m, list(power_reduction(m)[k % m]), 1)

    @classmethod
    def from_coords(cls, m: int, coords) -> CycElem:
        fr = [Fraction(c) for c in coords]
        den = math.lcm(*(f.denominator for f in fr)) if fr else 1
        return cls._raw(m, [int(f * den) for f in fr], den)

    # -- basic protocol -------------------------------------------------

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, CycElem):
            return self.m == other.m and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational)):
            return self == CycElem.from_rational(self.m, other)
        if isinstance(other, QuadElem):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.den == 1 and not any(self.num[1:]):
                self._hash = hash(self.num[0])
            else:
                self._hash = hash((self.m, self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"CycElem({self.m}, {format_literal(self)!r})"

    def __str__(self):
        return format_literal(self)

    def _coerce(self, other):
        if isinstance(other, CycElem):
            if other.m != self.m:
                raise ValueError("mixing cyclotomic fields of different conductor")
            return other
        if isinstance(other, (int, Rational)):
            return CycElem.from_rational(self.m, other)
        return None

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return CycElem._raw(self.m, [a + b for a, b in zip(self.num, o.num)], self.den)
        d = self.den * o.den
        return CycElem._raw(self.m, [a * o.den + b * self.den for a, b in zip(self.num, o.num)], d)

    __radd__ = __add__

    def __neg__(self):
        return CycElem._raw(self.m, [-a for a in self.num], self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, int):
            return CycElem._raw(self.m, [a * other for a in self.num], self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _cyc_mul(self, o)

    __rmul__ = __mul__

    def inverse(self) -> CycElem:
        return cyc_inverse(self)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * cyc_inverse(o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * cyc_inverse(self)

    def __pow__(self, k: int):
        if k < 0:
            return cyc_inverse(self) ** (-k)
        result = CycElem.from_rational(self.m, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_integral(self) -> bool:
        return self.den == 1

    def is_unit(self) -> bool:
        return not self.is_zero() and self.is_integral() and cyc_inverse(self).is_integral()


def _cyc_mul(x: CycElem, y: CycElem) -> CycElem:
    m = x.m
    phi = len(x.num)
    prod = [0] * (2 * phi - 1)
    for i, a in enumerate(x.num):
        if a:
            for j, b in enumerate(y.num):
                if b:
                    prod[i + j] += a * b
    cyc = cyclotomic_polynomial(m)
    for k in range(2 * phi - 2, phi - 1, -1):
        c = prod[k]
        if c:
            base = k - phi
            for i in range(phi):
                if cyc[i]:
                    prod[base + i] -= c * cyc[i]
    return CycElem._raw(m, prod[:phi], x.den * y.den)


def cyc_reduce(poly, m: int) -> CycElem:
    """Reduce ``sum poly[k] z^k`` (list, or dict over any integer exponents) modulo Phi_m."""
    items = poly.items() if isinstance(poly, dict) else enumerate(poly)
    red = power_reduction(m)
    terms = [(k % m, Fraction(c)) for k, c in items if c]
    den = math.lcm(*(c.denominator for _, c in terms)) if terms else 1
    acc = [0] * euler_phi(m)
    for k, c in terms:
        s = int(c * den)
        for i, r in enumerate(red[k]):
            if r:
                acc[i] += s * r
    return CycElem._raw(m, acc, den)


@lru_cache(maxsize=4096)
def cyc_inverse(x: CycElem) -> CycElem:
    """Exact inverse by solving the multiplication-by-x system over Q."""
    if x.is_zero():
        raise DivisionByZero("inverse of zero")
    m, phi = x.m, len(x.num)
    # column j = coordinates of x * z^j
    cols = []
    for j in range(phi):
        cols.append(_cyc_mul(x, CycElem.zeta(m, j)).num)
    # augmented system, integer entries (the common denominator cancels)
    rows = [[Fraction(cols[j][i]) for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
    for c in range(phi):
        piv = next(r for r in range(c, phi) if rows[r][c] != 0)
        rows[c], rows[piv] = rows[piv], rows[c]
        pv = rows[c][c]
        rows[c] = [v / pv for v in rows[c]]
        for r in range(phi):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
    sol = [rows[i][phi] * x.den for i in range(phi)]
    return CycElem.from_coords(m, sol)


class QuadElem:
    """``a + b t`` with a, b in Q(zeta_m) and t^2 = tower.radicand."""

    __slots__ = ("tower", "a", "b")

    def __init__(self, tower: FieldTower, a, b=0):
        if tower.radicand is None:
            raise UnsupportedTower("tower has no quadratic generator")
        self.tower = tower
        self.a = a if isinstance(a, CycElem) else CycElem.from_rational(tower.m, a)
        self.b = b if isinstance(b, CycElem) else CycElem.from_rational(tower.m, b)

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            return other
        if isinstance(other, (CycElem, int, Rational)):
            return QuadElem(self.tower, other)
        return None

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b.is_zero():
            return hash(self.a)
        return hash((self.a, self.b))

    def __repr__(self):
        return f"QuadElem({format_literal(self)!r})"

    def __str__(self):
        return format_literal(self)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.tower, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.tower, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.tower, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational, CycElem)):
            return QuadElem(self.tower, self.a * other, self.b * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.a, self.b, o.a, o.b
        if b.is_zero():
            return QuadElem(self.tower, a * c, a * d)
        if d.is_zero():
            return QuadElem(self.tower, a * c, b * c)
        return QuadElem(self.tower, a * c + b * d * self.tower.radicand, a * d + b * c)

    __rmul__ = __mul__

    def norm(self) -> CycElem:
        return self.a * self.a - self.b * self.b * self.tower.radicand

    def inverse(self) -> QuadElem:
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        n = cyc_inverse(self.norm())
        return QuadElem(self.tower, self.a * n, -self.b * n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadElem(self.tower, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> QuadElem:
        return QuadElem(self.tower, self.a, -self.b)

    def is_integral(self) -> bool:
        # monic characteristic polynomial x^2 - 2a x + (a^2 - b^2 r)
        if self.b.is_zero():
            return self.a.is_integral()
        return (self.a * 2).is_integral() and self.norm().is_integral()

    def is_unit(self) -> bool:
        return not self.is_zero() and self.is_integral() and self.inverse().is_integral()


def is_integral(x) -> bool:
    if isinstance(x, (CycElem, QuadElem)):
        return x.is_integral()
    return Fraction(x).denominator == 1


def is_unit(x) -> bool:
    return x.is_unit()


def galois_conjugate(x: QuadElem) -> QuadElem:
    """The nontrivial automorphism of Q(zeta_m)(t) over Q(zeta_m): t -> -t."""
    if not isinstance(x, QuadElem):
        return x
    return x.conjugate()


@dataclass(frozen=True)
class FieldTower:
    """Q inside Q(zeta_m) inside Q(zeta_m)(t), t^2 = radicand.

    ``p`` is the distinguished odd prime; zeta_p = zeta_m^(m/p) and, when
    4 | m, omega = zeta_m^(m/4).
    """

    m: int
    p: int
    radicand: CycElem | None = None

    def __post_init__(self):
        if not is_prime(self.p) or self.m % self.p:
            raise UnsupportedTower(f"need a prime p dividing m (m={self.m}, p={self.p})")
        if self.radicand is not None:
            if self.radicand.m != self.m:
                raise UnsupportedTower("radicand lives in a different cyclotomic field")
            if self.radicand.is_zero():
                raise UnsupportedTower("radicand must be nonzero")

    @property
    def phi(self) -> int:
        return euler_phi(self.m)

    @property
    def has_omega(self) -> bool:
        return self.m % 4 == 0

    @property
    def has_t(self) -> bool:
        return self.radicand is not None

    def with_radicand(self, r) -> FieldTower:
        return FieldTower(self.m, self.p, None if r is None else self.cyc(r))

    def base(self) -> FieldTower:
        return FieldTower(self.m, self.p)

    # -- element constructors -------------------------------------------

    def cyc(self, x) -> CycElem:
        if isinstance(x, CycElem):
            return x
        if isinstance(x, QuadElem):
            if not x.b.is_zero():
                raise ValueError("element is not in the base field")
            return x.a
        return CycElem.from_rational(self.m, x)

    def scalar(self, x):
        """Promote to the tower's top field."""
        if self.radicand is None:
            return self.cyc(x)
        if isinstance(x, QuadElem):
            return x
        return QuadElem(self, self.cyc(x))

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def zeta_m(self, k: int = 1):
        return self.scalar(CycElem.zeta(self.m, k))

    def zeta(self, k: int = 1):
        """zeta_p^k."""
        return self.scalar(CycElem.zeta(self.m, (k % self.p) * (self.m // self.p)))

    def omega(self):
        if not self.has_omega:
            raise UnsupportedTower("4 does not divide m")
        return self.scalar(CycElem.zeta(self.m, self.m // 4))

    def sqrt_p(self):
        return self.scalar(sqrt_p(self))

    def t(self) -> QuadElem:
        if self.radicand is None:
            raise UnsupportedTower("tower has no quadratic generator")
        return QuadElem(self, 0, 1)

    def parse(self, text: str):
        return parse_literal(text, self)


def sqrt_p(tower: FieldTower) -> CycElem:
    """A square root of p in Q(zeta_m), from the quadratic Gauss sum.

    g = sum_k zeta_p^(k^2) squares to p when p = 1 (mod 4) and to -p
    otherwise; in the latter case omega * g is used.
    """
    if not tower.has_omega:
        raise UnsupportedTower("sqrt(p) is realized only when 4 | m")
    m, p = tower.m, tower.p
    g = cyc_reduce(_gauss_terms(m, p), m)
    if p % 4 == 3:
        g = g * CycElem.zeta(m, m // 4)
    return g


def _gauss_terms(m, p):
    terms: dict[int, int] = {}
    for k in range(p):
        e = (k * k % p) * (m // p)
        terms[e] = terms.get(e, 0) + 1
    return terms


# -- literal grammar ----------------------------------------------------

_TERM_SPLIT = re.compile(r"(?=[+-])")
_RATIONAL = re.compile(r"^\d+(/\d+)?$")


def parse_literal(text: str, tower: FieldTower):
    """Parse sums of ``c``, ``c*z^k``, ``c*t``, ``c*z^k*t`` into a tower scalar."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise LiteralError("empty literal")
    m = tower.m
    parts: list[dict[int, Fraction]] = [{}, {}]
    for raw in _TERM_SPLIT.split(s):
        if not raw:
            continue
        sign = 1
        body = raw
        while body and body[0] in "+-":
            if body[0] == "-":
                sign = -sign
            body = body[1:]
        if not body:
            raise LiteralError(f"dangling sign in {text!r}")
        coeff = Fraction(sign)
        exp = 0
        tdeg = 0
        for factor in body.split("*"):
            if factor == "":
                raise LiteralError(f"empty factor in {text!r}")
            if _RATIONAL.match(factor):
                coeff *= Fraction(factor)
            elif factor == "z":
                exp += 1
            elif factor.startswith("z^"):
                try:
                    exp += int(factor[2:])
                except ValueError:
                    raise LiteralError(f"bad exponent in {factor!r}") from None
            elif factor == "t":
                tdeg += 1
            else:
                raise LiteralError(f"unknown factor {factor!r}")
        if tdeg > 1:
            raise LiteralError("t may appear at most once per term")
        d = parts[tdeg]
        d[exp % m] = d.get(exp % m, Fraction(0)) + coeff
    a = cyc_reduce(parts[0], m)
    b = cyc_reduce(parts[1], m)
    if tower.radicand is None:
        if not b.is_zero():
            raise LiteralError("literal uses t but the tower has no quadratic generator")
        return a
    return QuadElem(tower, a, b)


def _fmt_coeff_term(c: Fraction, mono: str) -> str:
    if not mono:
        return str(c)
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}*{mono}"


def format_literal(x) -> str:
    """Canonical literal: ascending powers of z, t-free part first."""
    if isinstance(x, QuadElem):
        pieces = [(x.a, ""), (x.b, "t")]
    elif isinstance(x, CycElem):
        pieces = [(x, "")]
    else:
        return str(Fraction(x))
    terms = []
    for elem, tpart in pieces:
        for k, c in enumerate(elem.coords):
            if c == 0:
                continue
            z = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            mono = "*".join(f for f in (z, tpart) if f)
            terms.append(_fmt_coeff_term(c, mono))
    if not terms:
        return "0"
    out = terms[0]
    for tm in terms[1:]:
        out += tm if tm.startswith("-") else "+" + tm
    return out
