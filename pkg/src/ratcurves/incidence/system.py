"""Linear constraint systems on the coefficient space of morphisms.

Coordinates on the coefficient space follow the layout of
:meth:`MorphismP1.to_vector`: factor by factor, component by component, the
d_k + 1 coefficients of each form.  Every constraint row is a Taylor
coefficient, at a domain point, of a combination of the components of one
factor whose weights are polynomials in the local parameter x.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from ..exact import ExactMatrix, Field, combine
from ..exact.forms import taylor_rows
from ..geometry import AmbientSpace


@dataclass(frozen=True)
class Row:
    factor: int
    coeffs: tuple  # restricted to the factor's block
    tag: str


def taylor_condition_rows(
    field: Field, n: int, degree: int, point, combo: dict, orders, tag: str, factor: int
) -> list[Row]:
    """Rows asking that the x^r coefficient of sum_j combo[j](x) f_j vanish at ``point``.

    ``combo`` maps a component index to the coefficient list (low first) of a
    polynomial weight in the local parameter.
    """
    orders = list(orders)
    if not orders:
        return []
    T = taylor_rows(field, degree, point, max(orders) + 1)
    width = degree + 1
    out = []
    for r in orders:
        row = [0] * ((n + 1) * width)
        for j, weight in combo.items():
            for a, c in enumerate(weight[: r + 1]):
                if c == 0:
                    continue
                for i, t in enumerate(T[r - a]):
                    if t != 0:
                        row[j * width + i] += c * t
        out.append(Row(factor, tuple(field.reduce(x) for x in row), f"{tag}:x^{r}"))
    return out


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Rows supported on single factor blocks, plus where each row came from."""

    field: Field
    ambient: AmbientSpace
    degrees: tuple
    rows: tuple = ()

    @property
    def ncols(self) -> int:
        return self.ambient.coefficient_dim(self.degrees)

    @property
    def provenance(self) -> tuple:
        return tuple(r.tag for r in self.rows)

    def extend(self, rows) -> "ConstraintSystem":
        return ConstraintSystem(self.field, self.ambient, self.degrees, self.rows + tuple(rows))

    def block(self, k: int) -> tuple[int, int]:
        start = self.ambient.block_offsets(self.degrees)[k]
        return start, start + (self.degrees[k] + 1) * (self.ambient.factor_dims[k] + 1)

    @cached_property
    def matrix(self) -> ExactMatrix:
        F = self.field
        full = []
        for row in self.rows:
            start, stop = self.block(row.factor)
            full.append((F.zero,) * start + row.coeffs + (F.zero,) * (self.ncols - stop))
        return ExactMatrix(F, tuple(full), self.ncols)

    def factor_matrix(self, k: int) -> ExactMatrix:
        start, stop = self.block(k)
        return ExactMatrix(self.field, tuple(r.coeffs for r in self.rows if r.factor == k), stop - start)

    def rank(self) -> int:
        return sum(self.factor_matrix(k).rank() for k in range(self.ambient.n_factors))

    def kernel_basis(self) -> list[tuple]:
        """Block-diagonal kernel: each factor's kernel padded by zeros."""
        F = self.field
        out = []
        for k in range(self.ambient.n_factors):
            start, stop = self.block(k)
            for v in self.factor_matrix(k).kernel_basis():
                out.append((F.zero,) * start + v + (F.zero,) * (self.ncols - stop))
        return out

    def factor_kernel_dim(self, k: int) -> int:
        M = self.factor_matrix(k)
        return M.ncols - M.rank()

    def kernel_dim(self) -> int:
        return self.ncols - self.rank()

    def contains(self, vec) -> bool:
        return self.matrix.annihilates(vec)

    def combine(self, vectors, coeffs) -> tuple:
        return combine(self.field, vectors, coeffs)
