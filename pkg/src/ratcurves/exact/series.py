"""Truncated power series: exact arithmetic modulo t^order."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DivisionByNonUnit
from .field import Field
from .forms import INFINITE


@dataclass(frozen=True)
class TruncatedSeries:
    field: Field
    coeffs: tuple  # coefficients of 1, t, ..., t^(order-1)

    @classmethod
    def make(cls, field: Field, coeffs, order: int | None = None) -> "TruncatedSeries":
        coeffs = [field.coerce(c) for c in coeffs]
        if order is None:
            order = len(coeffs)
        if order < 1:
            raise ValueError("order must be positive")
        coeffs = (coeffs + [field.zero] * order)[:order]
        return cls(field, tuple(coeffs))

    @classmethod
    def zero(cls, field: Field, order: int) -> "TruncatedSeries":
        return cls(field, (field.zero,) * order)

    @classmethod
    def one(cls, field: Field, order: int) -> "TruncatedSeries":
        return cls(field, (field.one,) + (field.zero,) * (order - 1))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot raise precision of a truncated series")
        return TruncatedSeries(self.field, self.coeffs[:order])

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return INFINITE

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def _aligned(self, other):
        n = min(self.order, other.order)
        return self.coeffs[:n], other.coeffs[:n]

    def __add__(self, other):
        F = self.field
        a, b = self._aligned(other)
        return TruncatedSeries(F, tuple(F.reduce(x + y) for x, y in zip(a, b)))

    def __sub__(self, other):
        F = self.field
        a, b = self._aligned(other)
        return TruncatedSeries(F, tuple(F.reduce(x - y) for x, y in zip(a, b)))

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "TruncatedSeries":
        F = self.field
        return TruncatedSeries(F, tuple(F.reduce(c * x) for x in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        F = self.field
        a, b = self._aligned(other)
        n = len(a)
        out = [0] * n
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j in range(n - i):
                if b[j] != 0:
                    out[i + j] += x * b[j]
        return TruncatedSeries(F, tuple(F.reduce(c) for c in out))

    __rmul__ = scale

    def inverse(self) -> "TruncatedSeries":
        if not self.is_unit():
            raise DivisionByNonUnit("series with zero constant term has no inverse")
        F = self.field
        n = self.order
        inv0 = F.inv(self.coeffs[0])
        w = [F.zero] * n
        w[0] = inv0
        for k in range(1, n):
            acc = sum(self.coeffs[j] * w[k - j] for j in range(1, k + 1) if self.coeffs[j] != 0)
            w[k] = F.reduce(-acc * inv0)
        return TruncatedSeries(F, tuple(w))

    def __truediv__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_invert_multiply(self, other)

    def shift_down(self, k: int) -> "TruncatedSeries":
        """Divide by t^k; the low k coefficients must vanish. Loses k orders of precision."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise DivisionByNonUnit(f"series is not divisible by t^{k}")
        return TruncatedSeries(self.field, self.coeffs[k:])

    def to_strings(self) -> list[str]:
        return [self.field.to_str(c) for c in self.coeffs]

    def __repr__(self):
        return f"TruncatedSeries({self.to_strings()})"


def series_invert_multiply(u: TruncatedSeries, v: TruncatedSeries) -> TruncatedSeries:
    """u / v modulo t^order for a unit ``v``."""
    if not v.is_unit():
        raise DivisionByNonUnit("divisor has zero constant term")
    return u * v.inverse()
