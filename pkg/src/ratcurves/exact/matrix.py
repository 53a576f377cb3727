"""Dense exact matrices with Gauss-Jordan elimination."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .field import Field


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    field: Field
    rows: tuple
    ncols: int

    @classmethod
    def from_rows(cls, field: Field, rows, ncols: int | None = None) -> "ExactMatrix":
        rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(field, rows, ncols)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "ExactMatrix":
        return cls(field, tuple((field.zero,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "ExactMatrix":
        return cls(
            field,
            tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)),
            n,
        )

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @cached_property
    def _echelon(self):
        """Reduced row echelon form as (pivot rows, pivot columns)."""
        F = self.field
        work = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            if r == len(work):
                break
            for i in range(r, len(work)):
                if work[i][c] != 0:
                    break
            else:
                continue
            work[r], work[i] = work[i], work[r]
            inv = F.inv(work[r][c])
            prow = [F.reduce(x * inv) for x in work[r]]
            work[r] = prow
            for i in range(len(work)):
                if i != r:
                    f = work[i][c]
                    if f != 0:
                        row = work[i]
                        for k in range(c, self.ncols):
                            if prow[k] != 0:
                                row[k] = F.reduce(row[k] - f * prow[k])
            pivots.append(c)
            r += 1
        return tuple(tuple(row) for row in work[:r]), tuple(pivots)

    def rref(self) -> "ExactMatrix":
        rows, _ = self._echelon
        return ExactMatrix(self.field, rows, self.ncols)

    def rank(self) -> int:
        return len(self._echelon[1])

    def kernel_basis(self) -> list[tuple]:
        F = self.field
        rows, pivots = self._echelon
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = [F.zero] * self.ncols
            v[free] = F.one
            for row, pc in zip(rows, pivots):
                if row[free] != 0:
                    v[pc] = F.neg(row[free])
            basis.append(tuple(v))
        return basis

    def apply(self, vec) -> tuple:
        F = self.field
        return tuple(F.reduce(sum(a * b for a, b in zip(row, vec) if a != 0)) for row in self.rows)

    def annihilates(self, vec) -> bool:
        return all(x == 0 for x in self.apply(vec))

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.ncols != self.ncols:
            raise ValueError("column mismatch")
        return ExactMatrix(self.field, self.rows + other.rows, self.ncols)

    def select_columns(self, cols) -> "ExactMatrix":
        cols = list(cols)
        return ExactMatrix(self.field, tuple(tuple(r[c] for c in cols) for r in self.rows), len(cols))

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols} over {self.field!r})"


def rank(M: ExactMatrix) -> int:
    return M.rank()


def kernel_basis(M: ExactMatrix) -> list[tuple]:
    return M.kernel_basis()


def row_space_rref(field: Field, vectors, ncols: int) -> tuple:
    """Canonical form of span(vectors): the nonzero rows of its RREF."""
    return ExactMatrix(field, tuple(tuple(v) for v in vectors), ncols)._echelon[0]


def same_span(field: Field, a, b, ncols: int) -> bool:
    return row_space_rref(field, a, ncols) == row_space_rref(field, b, ncols)


def combine(field: Field, vectors, coeffs) -> tuple:
    """Linear combination sum(c * v)."""
    if not vectors:
        return ()
    n = len(vectors[0])
    out = [0] * n
    for c, v in zip(coeffs, vectors):
        if c == 0:
            continue
        for i, x in enumerate(v):
            if x != 0:
                out[i] += c * x
    return tuple(field.reduce(x) for x in out)
