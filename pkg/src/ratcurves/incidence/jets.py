"""Jets of curves, their lifts through blowup charts, and tau-fibers.

A k-jet at a point is stored by its affine chart coordinates as truncated
series with k + 1 coefficients.  A blowup chart divides the normal
coordinates by the divisor coordinate: (t, x, y) -> (t, x / t, y), where the
divisor coordinate t must vanish to order exactly one.  Each lift therefore
costs one order of precision.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..errors import InvalidDatum, NotTransversal, ProfileInconsistent
from ..exact import Field, TruncatedSeries, normalize_point
from ..geometry import AmbientSpace, normalize_projective, pivot_index
from .sigma import FiberDescription, _check_distinct, describe_fiber, kernel_splitting
from .system import ConstraintSystem, taylor_condition_rows


@dataclass(frozen=True)
class LocalJet:
    values: tuple  # TruncatedSeries per affine coordinate, all of one order

    def __post_init__(self):
        if len({s.order for s in self.values}) > 1:
            raise ValueError("jet coordinates must share one order")

    @classmethod
    def make(cls, field: Field, values, order: int | None = None) -> "LocalJet":
        return cls(tuple(TruncatedSeries.make(field, v, order) for v in values))

    @property
    def k(self) -> int:
        return self.values[0].order - 1

    @property
    def dim(self) -> int:
        return len(self.values)

    def base(self) -> tuple:
        return tuple(s.coeffs[0] for s in self.values)

    def truncate(self, order: int) -> "LocalJet":
        return LocalJet(tuple(s.truncate(order) for s in self.values))

    def to_strings(self) -> list:
        return [s.to_strings() for s in self.values]


@dataclass(frozen=True)
class BlowupChart:
    """A chart of a blowup along {y_c = 0, y_j = 0 for j in normal}."""

    dim: int
    divisor: int
    normal: tuple

    def __post_init__(self):
        if not 0 <= self.divisor < self.dim:
            raise ValueError("divisor coordinate out of range")
        if self.divisor in self.normal or any(not 0 <= j < self.dim for j in self.normal):
            raise ValueError("normal coordinates must be distinct from the divisor coordinate")

    @classmethod
    def point(cls, dim: int, divisor: int) -> "BlowupChart":
        """Chart of a point blowup: every other coordinate is normal."""
        return cls(dim, divisor, tuple(j for j in range(dim) if j != divisor))


def lift_jet(jet: LocalJet, chart: BlowupChart) -> LocalJet:
    """j^k_q: the lifted (k-1)-jet in the chart, (s_c, s_j / s_c, y) mod t^k."""
    if jet.dim != chart.dim:
        raise ValueError(f"jet has {jet.dim} coordinates, chart expects {chart.dim}")
    sc = jet.values[chart.divisor]
    if sc.valuation() != 1:
        raise NotTransversal(f"divisor coordinate has valuation {sc.valuation()}, expected 1")
    if any(jet.values[j].coeffs[0] != 0 for j in chart.normal):
        raise NotTransversal("jet is not based on the center")
    k = jet.k
    unit = sc.shift_down(1)
    out = []
    for j, s in enumerate(jet.values):
        out.append(s.shift_down(1) / unit if j in chart.normal else s.truncate(k))
    return LocalJet(tuple(out))


def blowdown(jet: LocalJet, chart: BlowupChart) -> LocalJet:
    """Push a jet in the chart back down: y_j = y_c * (y_j / y_c)."""
    sc = jet.values[chart.divisor]
    return LocalJet(tuple(sc * s if j in chart.normal else s for j, s in enumerate(jet.values)))


def recenter(jet: LocalJet, offsets) -> LocalJet:
    """Subtract constants so the jet is based at the origin of the next chart."""
    F = jet.values[0].field
    out = []
    for s, c in zip(jet.values, offsets):
        coeffs = list(s.coeffs)
        coeffs[0] = F.reduce(coeffs[0] - c)
        out.append(TruncatedSeries(F, tuple(coeffs)))
    return LocalJet(tuple(out))


def lift_path(jet: LocalJet, charts) -> tuple[LocalJet, list]:
    """Lift through successive point charts; returns the jet and the points passed."""
    points = []
    for chart in charts:
        jet = lift_jet(jet, chart)
        offsets = [jet.values[j].coeffs[0] if j in chart.normal else 0 for j in range(jet.dim)]
        points.append(tuple(offsets))
        jet = recenter(jet, offsets)
    return jet, points


def blowdown_path(jet: LocalJet, charts, points) -> LocalJet:
    F = jet.values[0].field
    for chart, offsets in zip(reversed(list(charts)), reversed(list(points))):
        jet = recenter(jet, [F.neg(c) for c in offsets])
        jet = blowdown(jet, chart)
    return jet


def random_transversal_jet(field: Field, dim: int, k: int, chart: BlowupChart, rng: random.Random) -> LocalJet:
    """Random k-jet based at the origin with divisor coordinate of valuation one."""
    values = []
    for j in range(dim):
        coeffs = [field.random(rng) for _ in range(k + 1)]
        if j == chart.divisor or j in chart.normal:
            coeffs[0] = field.zero
        if j == chart.divisor:
            coeffs[1] = field.random_nonzero(rng)
        values.append(coeffs)
    return LocalJet.make(field, values)


# --- tau fibers ---


@dataclass(frozen=True)
class JetPrescription:
    p: tuple
    q: tuple  # per factor homogeneous coordinates of the base point
    jet: LocalJet  # affine coordinates at q, constant terms zero

    @property
    def k(self) -> int:
        return self.jet.k

    def to_dict(self, field: Field) -> dict:
        return {
            "p": [field.to_str(x) for x in self.p],
            "q": [[field.to_str(x) for x in qk] for qk in self.q],
            "jet": self.jet.to_strings(),
        }


def make_prescription(field: Field, ambient: AmbientSpace, p, q, values) -> JetPrescription:
    if len(q) != ambient.n_factors:
        raise InvalidDatum(f"base point needs {ambient.n_factors} factors")
    qn = tuple(normalize_projective(field, qk) for qk in q)
    if any(len(qk) != n + 1 for qk, n in zip(qn, ambient.factor_dims)):
        raise InvalidDatum("base point has the wrong shape")
    jet = LocalJet.make(field, values, max(len(v) for v in values))
    if jet.dim != ambient.dim:
        raise InvalidDatum(f"jet needs {ambient.dim} coordinates, got {jet.dim}")
    if any(c != 0 for c in jet.base()):
        raise InvalidDatum("jet must be based at q (zero constant terms)")
    return JetPrescription(normalize_point(field, p), qn, jet)


def _jet_rows(field: Field, ambient: AmbientSpace, degrees, s: JetPrescription, tag: str) -> list:
    """q_piv f_j - q_j f_piv - sigma_g(x) q_piv f_piv = O(x^(k+1)) per affine coordinate g."""
    rows = []
    for g, (k, j) in enumerate(ambient.affine_coordinates(s.q)):
        qk = s.q[k]
        piv = pivot_index(qk)
        sigma = s.jet.values[g].coeffs
        weight = [field.reduce(-qk[piv] * c) for c in sigma]
        weight[0] = field.reduce(weight[0] - qk[j])
        combo = {j: [qk[piv]], piv: weight}
        rows += taylor_condition_rows(
            field, ambient.factor_dims[k], degrees[k], s.p, combo, range(s.k + 1), f"{tag}:z{g}", k
        )
    return rows


def compile_jets(field: Field, ambient: AmbientSpace, degrees, prescriptions) -> ConstraintSystem:
    prescriptions = list(prescriptions)
    _check_distinct([s.p for s in prescriptions], "jet prescriptions")
    rows = []
    for a, s in enumerate(prescriptions):
        rows += _jet_rows(field, ambient, tuple(degrees), s, f"jet{a}")
    return ConstraintSystem(field, ambient, tuple(degrees)).extend(rows)


def tau_fiber(field: Field, ambient: AmbientSpace, degrees, prescriptions) -> FiberDescription:
    """Morphisms with the prescribed jets: a linear subspace of the coefficient space."""
    degrees = tuple(degrees)
    prescriptions = list(prescriptions)
    system = compile_jets(field, ambient, degrees, prescriptions)
    drop = sum(s.k + 1 for s in prescriptions)
    expected = ambient.coefficient_dim(degrees) - 1 - ambient.dim * drop
    splitting, bounds_ok, notes = [], True, []
    for k, n in enumerate(ambient.factor_dims):
        d = degrees[k]
        try:
            ks = kernel_splitting(
                lambda degs: compile_jets(field, ambient, degs, prescriptions), degrees, k, n + 1, n * drop, drop
            )
        except ProfileInconsistent as exc:
            notes.append(f"factor {k}: {exc}")
            bounds_ok, ks = False, ()
        bounds_ok &= all(d >= x >= d - drop for x in ks)
        splitting.append(ks)
    return describe_fiber(system, expected, splitting, bounds_ok, degenerate=False, notes=notes)
