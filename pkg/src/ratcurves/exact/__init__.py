from .field import (
    DEFAULT_PRIME,
    DEFAULT_SEED,
    QQ,
    Field,
    FieldConfig,
    PrimeField,
    RationalField,
    stream,
)
from .forms import INFINITE, HomPoly, gcd_forms, normalize_point, point_at_infinity, valuation_at
from .matrix import ExactMatrix, combine, kernel_basis, rank, row_space_rref, same_span
from .series import TruncatedSeries, series_invert_multiply

__all__ = [
    "DEFAULT_PRIME",
    "DEFAULT_SEED",
    "QQ",
    "Field",
    "FieldConfig",
    "PrimeField",
    "RationalField",
    "stream",
    "INFINITE",
    "HomPoly",
    "gcd_forms",
    "normalize_point",
    "point_at_infinity",
    "valuation_at",
    "ExactMatrix",
    "combine",
    "kernel_basis",
    "rank",
    "row_space_rref",
    "same_span",
    "TruncatedSeries",
    "series_invert_multiply",
]
