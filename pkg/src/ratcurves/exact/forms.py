"""Binary forms (sections of O(d) on P^1) and points of P^1.

A form of degree d is stored by its d+1 coefficients on the monomials
``s^d, s^(d-1) t, ..., t^d``.  Points of P^1 are pairs ``(s, t)`` normalized so
the first nonzero coordinate is 1, i.e. ``(1, u)`` or ``(0, 1)``.

Local expansions at a point use a fixed local parameter ``x``: near ``(1, u)``
the point ``(1, u + x)``, near ``(0, 1)`` the point ``(x, 1)``.  Every jet and
Taylor-coefficient condition in the package is expressed in this parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

from ..errors import AllZeroInput, MalformedPoint
from .field import Field

INFINITE = math.inf


def normalize_point(field: Field, point) -> tuple:
    """Canonical representative of a point of P^1."""
    if len(point) != 2:
        raise MalformedPoint(f"a point of P^1 needs 2 coordinates, got {len(point)}")
    a, b = (field.coerce(x) for x in point)
    if a != 0:
        return (field.one, field.div(b, a))
    if b != 0:
        return (field.zero, field.one)
    raise MalformedPoint("(0, 0) is not a point of P^1")


def point_at_infinity(field: Field) -> tuple:
    return (field.zero, field.one)


def taylor_rows(field: Field, degree: int, point, order: int) -> list[list]:
    """Matrix sending form coefficients to the first ``order`` local Taylor coefficients.

    Row r, column i is the coefficient of x^r in the expansion of s^(d-i) t^i.
    """
    s0, u = point
    rows = [[field.zero] * (degree + 1) for _ in range(order)]
    if s0 != 0:
        for i in range(degree + 1):
            for r in range(min(i, order - 1) + 1):
                rows[r][i] = field.reduce(comb(i, r) * u ** (i - r))
    else:
        for r in range(min(order, degree + 1)):
            rows[r][degree - r] = field.one
    return rows


@dataclass(frozen=True)
class HomPoly:
    field: Field
    coeffs: tuple

    @classmethod
    def make(cls, field: Field, coeffs) -> "HomPoly":
        coeffs = tuple(field.coerce(c) for c in coeffs)
        if not coeffs:
            raise ValueError("a form of degree d needs d+1 coefficients")
        return cls(field, coeffs)

    @classmethod
    def zero(cls, field: Field, degree: int) -> "HomPoly":
        return cls(field, (field.zero,) * (degree + 1))

    @classmethod
    def monomial(cls, field: Field, degree: int, t_power: int) -> "HomPoly":
        c = [field.zero] * (degree + 1)
        c[t_power] = field.one
        return cls(field, tuple(c))

    @classmethod
    def linear(cls, field: Field, a, b) -> "HomPoly":
        """The form a*s + b*t."""
        return cls.make(field, (a, b))

    @classmethod
    def vanishing_at(cls, field: Field, point) -> "HomPoly":
        """Linear form with a simple zero at ``point``."""
        a, b = normalize_point(field, point)
        return cls(field, (b, field.neg(a)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "HomPoly") -> "HomPoly":
        self._check_degree(other)
        F = self.field
        return HomPoly(F, tuple(F.reduce(a + b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        self._check_degree(other)
        F = self.field
        return HomPoly(F, tuple(F.reduce(a - b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "HomPoly":
        return self.scale(-1)

    def scale(self, c) -> "HomPoly":
        F = self.field
        return HomPoly(F, tuple(F.reduce(c * a) for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, HomPoly):
            return self.scale(other)
        F = self.field
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] += a * b
        return HomPoly(F, tuple(F.reduce(x) for x in out))

    __rmul__ = scale

    def _check_degree(self, other):
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def evaluate(self, point):
        s, t = point
        F = self.field
        d = self.degree
        return F.reduce(sum(c * s ** (d - i) * t**i for i, c in enumerate(self.coeffs) if c != 0))

    def local_expansion(self, point, order: int) -> list:
        """First ``order`` Taylor coefficients at ``point`` in the local parameter."""
        F = self.field
        rows = taylor_rows(F, self.degree, point, order)
        return [F.reduce(sum(r * c for r, c in zip(row, self.coeffs))) for row in rows]

    def valuation_at(self, point):
        return valuation_at(self, point)

    def compose_linear(self, a, b, c, d) -> "HomPoly":
        """The form p(a s + b t, c s + d t)."""
        F = self.field
        first = HomPoly(F, (F.coerce(a), F.coerce(b)))
        second = HomPoly(F, (F.coerce(c), F.coerce(d)))
        deg = self.degree
        acc = HomPoly.zero(F, deg)
        for i, coef in enumerate(self.coeffs):
            if coef == 0:
                continue
            term = HomPoly(F, (F.one,))
            for _ in range(deg - i):
                term = term * first
            for _ in range(i):
                term = term * second
            acc = acc + term.scale(coef)
        return acc

    def monic(self) -> "HomPoly":
        """Scale so the first nonzero coefficient is 1."""
        for c in self.coeffs:
            if c != 0:
                return self.scale(self.field.inv(c))
        return self

    def to_strings(self) -> list[str]:
        return [self.field.to_str(c) for c in self.coeffs]

    def __repr__(self):
        return f"HomPoly({self.to_strings()})"


def valuation_at(p: HomPoly, point):
    """Order of vanishing of ``p`` at ``point``; INFINITE for the zero form."""
    point = normalize_point(p.field, point)
    if p.is_zero():
        return INFINITE
    for r, c in enumerate(p.local_expansion(point, p.degree + 1)):
        if c != 0:
            return r
    raise AssertionError("nonzero form with all Taylor coefficients zero")


# --- univariate helpers, coefficient lists from low to high degree ---


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(field: Field, a: list, b: list) -> list:
    a = list(a)
    inv_lead = field.inv(b[-1])
    while len(a) >= len(b):
        f = field.reduce(a[-1] * inv_lead)
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = field.reduce(a[shift + i] - f * bc)
        a.pop()
        _trim(a)
    return a


def _poly_gcd(field: Field, a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(field, a, b)
    if not a:
        return a
    inv = field.inv(a[-1])
    return [field.reduce(c * inv) for c in a]


def _split_form(p: HomPoly) -> tuple[int, list]:
    """Write p = s^k * g(s, t) with g(0, 1) != 0; return k and g(1, t) low-first."""
    d = p.degree
    k = 0
    while p.coeffs[d - k] == 0:
        k += 1
    return k, list(p.coeffs[: d - k + 1])


def gcd_forms(forms) -> HomPoly:
    """Monic greatest common divisor of binary forms (zero forms are ignored)."""
    forms = list(forms)
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        raise AllZeroInput("gcd of all-zero forms is undefined")
    F = nonzero[0].field
    s_power = None
    g = None
    for f in nonzero:
        k, uni = _split_form(f)
        s_power = k if s_power is None else min(s_power, k)
        g = uni if g is None else _poly_gcd(F, g, uni)
    g = _poly_gcd(F, g, g)  # normalize a single input
    # g(1, t) has degree deg g; homogenize to degree deg g and multiply by s^k.
    deg = len(g) - 1 + s_power
    coeffs = [F.zero] * (deg + 1)
    for i, c in enumerate(g):
        coeffs[i] = c
    return HomPoly(F, tuple(coeffs)).monic()
