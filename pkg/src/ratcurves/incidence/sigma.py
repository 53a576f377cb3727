"""Incidence data, the linear systems they impose, and fibers of sigma.

A datum (p, i, q, e) asks the curve to meet the center Z_i at the domain
point p, at the point q of Z_i, with multiplicity e.  In affine coordinates
z_j = (q_piv f_j - q_j f_piv) / (q_piv f_piv) at q this reads
z_j = O(x^e) for every affine coordinate j of every factor, where x is the
local parameter at p.  Clearing the (unit) denominator makes each condition
linear in the coefficients of f.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from ..errors import (
    ClassMismatch,
    DiagonalViolation,
    GenericSampleNotFound,
    ImageInsideCenter,
    InvalidDatum,
    InvalidMorphism,
    NonLinearCondition,
    ProfileInconsistent,
    TowerError,
)
from ..exact import Field, normalize_point
from ..geometry import (
    BlowupTower,
    CurveClass,
    _check_class,
    expected_fiber_dim,
    main_twist,
    normalize_projective,
    pivot_index,
    strict_from_total,
)
from ..morphism import (
    MorphismP1,
    contact_order,
    h1_twist_vanishes,
    pushforward_and_multiplicities,
    splitting_from_twist_profile,
    splitting_tangent_pullback,
    validate,
)
from .system import ConstraintSystem, taylor_condition_rows

DEFAULT_RETRIES = 8


@dataclass(frozen=True)
class IncidenceDatum:
    p: tuple
    center: int
    q: tuple = ()  # per factor homogeneous coordinates; empty for infinitesimal centers
    mult: int = 1

    def to_dict(self, field: Field) -> dict:
        d = {"p": [field.to_str(x) for x in self.p], "center": self.center, "mult": self.mult}
        if self.q:
            d["q"] = [[field.to_str(x) for x in qk] for qk in self.q]
        return d


def make_datum(field: Field, p, center: int, q=None, mult: int = 1) -> IncidenceDatum:
    point = normalize_point(field, p)
    qn = () if q is None else tuple(normalize_projective(field, qk) for qk in q)
    return IncidenceDatum(point, center, qn, int(mult))


def _check_distinct(points, what="data"):
    seen = set()
    for p in points:
        if p in seen:
            raise DiagonalViolation(f"two {what} share the domain point {p}")
        seen.add(p)


def _minor_combo(field: Field, qk, j: int) -> dict:
    """q_piv x_j - q_j x_piv as a component combination with constant weights."""
    piv = pivot_index(qk)
    return {j: [qk[piv]], piv: [field.neg(qk[j])]}


def _coordinate_index(tower: BlowupTower, q) -> list[tuple[int, int]]:
    return tower.ambient.affine_coordinates(q)


def point_rows(tower: BlowupTower, degrees, q, p, mult: int, tag: str) -> list:
    """z_j = O(x^mult) at p for every affine coordinate at q."""
    F = tower.field
    rows = []
    for k, j in _coordinate_index(tower, q):
        n = tower.ambient.factor_dims[k]
        rows += taylor_condition_rows(
            F, n, degrees[k], p, _minor_combo(F, q[k], j), range(mult), f"{tag}:z{k}.{j}", k
        )
    return rows


def _resolve_target(tower: BlowupTower, datum: IncidenceDatum) -> tuple:
    F = tower.field
    c = tower.centers[datum.center]
    if not c.is_linear:
        return tower.root_point(datum.center)
    if tower.is_point_like(datum.center):
        q = tower.root_point(datum.center)
        if datum.q and datum.q != q:
            raise InvalidDatum(f"target {datum.q} is not the point center {datum.center}")
        return q
    if not datum.q:
        raise InvalidDatum(f"datum on positive-dimensional center {datum.center} needs a target q")
    if len(datum.q) != tower.ambient.n_factors or any(
        len(qk) != n + 1 for qk, n in zip(datum.q, tower.ambient.factor_dims)
    ):
        raise InvalidDatum("target point has the wrong shape")
    if not tower.contains_point(datum.center, datum.q):
        raise InvalidDatum(f"target {[[F.to_str(x) for x in qk] for qk in datum.q]} is not on center {datum.center}")
    return datum.q


def _check_data(tower: BlowupTower, data) -> None:
    positive_dim = any(c.is_linear and not tower.is_point_like(i) for i, c in enumerate(tower.centers))
    for a, d in enumerate(data):
        if not 0 <= d.center < tower.r:
            raise InvalidDatum(f"datum {a}: center {d.center} out of range")
        if d.mult < 1:
            raise InvalidDatum(f"datum {a}: multiplicity must be >= 1")
        if d.mult > 1 and (positive_dim or not tower.centers[d.center].is_linear):
            raise InvalidDatum(
                f"datum {a}: multiplicity > 1 needs a point center in a tower without positive-dimensional centers"
            )
    _check_distinct([d.p for d in data])


def infinitesimal_rows(tower: BlowupTower, degrees, q, path, p, tag: str) -> list:
    """Conditions for passing through the infinitely near point reached by ``path``.

    ``path`` lists (chart, direction) steps.  With c the first chart, the
    conditions are z_j(p) = 0 for all j, then z_j - w_j z_c = O(x^(m+1)) for
    j != c.  They are linear when every nonzero w_j sits in the factor of
    coordinate c, and every deeper step reuses chart c with zero direction;
    anything else raises NonLinearCondition.
    """
    F = tower.field
    coords = _coordinate_index(tower, q)
    rows = []
    for g, (k, j) in enumerate(coords):
        n = tower.ambient.factor_dims[k]
        rows += taylor_condition_rows(F, n, degrees[k], p, _minor_combo(F, q[k], j), [0], f"{tag}:z{g}", k)
    if not path:
        return rows
    c, w = path[0]
    for depth, (chart, direction) in enumerate(path[1:], start=2):
        if chart != c or any(x != 0 for x in direction):
            raise NonLinearCondition(f"{tag}: level {depth} must reuse chart {c} with zero direction")
    m = len(path)
    kc, jc = coords[c]
    others = [g for g in range(len(coords)) if g != c]
    for g, wg in zip(others, w):
        k, j = coords[g]
        n = tower.ambient.factor_dims[k]
        combo = _minor_combo(F, q[k], j)
        if wg != 0:
            if k != kc:
                raise NonLinearCondition(f"{tag}: direction couples factors {k} and {kc}")
            for comp, weight in _minor_combo(F, q[k], jc).items():
                prev = combo.get(comp, [F.zero])[0]
                combo[comp] = [F.reduce(prev - wg * weight[0])]
        rows += taylor_condition_rows(F, n, degrees[k], p, combo, range(1, m + 1), f"{tag}:w{g}", k)
    return rows


def _path_of(tower: BlowupTower, center: int) -> list:
    if not tower.is_point_like(tower.root(center)):
        raise TowerError(f"center {center} does not lie over a point")
    return tower.directions(center)


def compile_infinitesimal(tower: BlowupTower, degrees, datum: IncidenceDatum, path=None, tag=None) -> list:
    """Rows for a datum on an infinitesimal (or level-0 point) center.

    An explicit ``path`` must agree with the tower's chain above the center.
    """
    own = _path_of(tower, datum.center)
    if path is not None:
        path = [(int(c), tuple(tower.field.coerce(x) for x in w)) for c, w in path]
        if len(path) > len(own):
            raise TowerError(f"path of depth {len(path)} is deeper than center {datum.center}")
        if path != own:
            raise TowerError(f"path does not match the tower chain above center {datum.center}")
    if datum.mult != 1:
        raise InvalidDatum("infinitesimal data are simple")
    q = tower.root_point(datum.center)
    return infinitesimal_rows(tower, degrees, q, own, datum.p, tag or f"center{datum.center}")


def compile_incidence(tower: BlowupTower, degrees, data) -> ConstraintSystem:
    """Exact linear system whose kernel is H^0 of the incidence kernel sheaf."""
    degrees = tuple(degrees)
    if len(degrees) != tower.ambient.n_factors:
        raise ClassMismatch(f"{len(degrees)} degrees for {tower.ambient.n_factors} factors")
    data = list(data)
    _check_data(tower, data)
    system = ConstraintSystem(tower.field, tower.ambient, degrees)
    rows = []
    for a, d in enumerate(data):
        if tower.centers[d.center].is_linear:
            q = _resolve_target(tower, d)
            rows += point_rows(tower, degrees, q, d.p, d.mult, f"datum{a}")
        else:
            rows += compile_infinitesimal(tower, degrees, d, tag=f"datum{a}")
    return system.extend(rows)


def data_multiplicities(tower: BlowupTower, data) -> tuple:
    """Total multiplicity each center receives: a datum counts for its whole chain."""
    e = [0] * tower.r
    for d in data:
        for j in tower.chain(d.center):
            e[j] += d.mult
    return tuple(e)


def local_colength(tower: BlowupTower, data, k: int) -> int:
    """Number of independent local conditions the data put on factor k."""
    n = tower.ambient.factor_dims[k]
    total = 0
    for d in data:
        if tower.centers[d.center].is_linear:
            total += d.mult * n
            continue
        path = tower.directions(d.center)
        q = tower.root_point(d.center)
        coords = _coordinate_index(tower, q)
        c = path[0][0]
        in_k = sum(1 for g, (kk, _) in enumerate(coords) if kk == k and g != c)
        total += n + len(path) * in_k
    return total


@dataclass(frozen=True)
class FiberDescription:
    kernel_basis: tuple
    affine_dim: int
    projective_dim: int
    expected_dim: int | None
    splitting: tuple  # per factor, sorted decreasing
    splitting_bounds_ok: bool
    empty: bool
    expected_empty: bool
    matches_expected: bool | None
    degenerate: bool
    rank: int = 0
    nrows: int = 0
    notes: tuple = dc_field(default=())

    def to_dict(self, include_basis: bool = False, field: Field | None = None) -> dict:
        d = {
            "rows": self.nrows,
            "rank": self.rank,
            "affine_dim": self.affine_dim,
            "projective_dim": self.projective_dim,
            "expected_dim": self.expected_dim,
            "matches_expected": self.matches_expected,
            "empty": self.empty,
            "expected_empty": self.expected_empty,
            "degenerate": self.degenerate,
            "splitting": [list(s) for s in self.splitting],
            "splitting_bounds_ok": self.splitting_bounds_ok,
        }
        if self.notes:
            d["notes"] = list(self.notes)
        if include_basis and field is not None:
            d["kernel_basis"] = [[field.to_str(x) for x in v] for v in self.kernel_basis]
        return d


def kernel_splitting(build, degrees, k: int, rank: int, colength: int, drop: int) -> tuple:
    """Splitting type of the kernel sheaf on factor k from its twist profile.

    ``build(degrees)`` compiles the same local conditions for other degrees;
    twisting by O(-t) is the same as lowering the degree of factor k by t,
    so h(t) is the factor-k kernel dimension at degree d_k - t.
    """
    d = degrees[k]
    profile = {}
    for t in range(d - drop - 1, d + 2):
        shifted = list(degrees)
        shifted[k] = d - t
        profile[t] = 0 if d - t < 0 else build(tuple(shifted)).factor_kernel_dim(k)
    return splitting_from_twist_profile(profile, rank, rank * d - colength)


def _constant_in_factor(system: ConstraintSystem, basis, k: int, qk) -> bool:
    """Whether every member has q_piv f_j - q_j f_piv = 0 identically in factor k."""
    F = system.field
    start, _ = system.block(k)
    width = system.degrees[k] + 1
    piv = pivot_index(qk)
    return all(
        F.reduce(qk[piv] * v[start + j * width + i] - qk[j] * v[start + piv * width + i]) == 0
        for v in basis
        for j in range(len(qk))
        if j != piv
        for i in range(width)
    )


def _is_degenerate(tower: BlowupTower, system: ConstraintSystem, basis, data) -> bool:
    """Whether every member maps some factor constantly to a datum's target."""
    if not basis:
        return False
    for d in data:
        if tower.centers[d.center].is_linear:
            q = _resolve_target(tower, d)
            if any(_constant_in_factor(system, basis, k, qk) for k, qk in enumerate(q)):
                return True
    return False


def describe_fiber(system: ConstraintSystem, expected: int | None, splitting, bounds_ok, degenerate, notes=()):
    basis = tuple(system.kernel_basis())
    affine = len(basis)
    return FiberDescription(
        kernel_basis=basis,
        affine_dim=affine,
        projective_dim=affine - 1,
        expected_dim=expected,
        splitting=tuple(splitting),
        splitting_bounds_ok=bounds_ok,
        empty=affine == 0,
        expected_empty=expected is not None and expected < 0,
        matches_expected=None if expected is None else max(expected, -1) == affine - 1,
        degenerate=degenerate,
        rank=system.ncols - affine,
        nrows=len(system.rows),
        notes=tuple(notes),
    )


def sigma_fiber(tower: BlowupTower, beta: CurveClass, data) -> FiberDescription:
    """The fiber of sigma over the point of the Hilbert-scheme product given by ``data``."""
    _check_class(tower, beta)
    data = list(data)
    got = data_multiplicities(tower, data)
    if got != tuple(beta.e_total):
        raise ClassMismatch(f"data give multiplicities {list(got)}, beta has {list(beta.e_total)}")
    system = compile_incidence(tower, beta.degrees, data)
    total_e = sum(beta.e_total)
    splitting, bounds_ok, notes = [], True, []
    for k, n in enumerate(tower.ambient.factor_dims):
        d = beta.degrees[k]
        try:
            ks = kernel_splitting(
                lambda degs: compile_incidence(tower, degs, data),
                beta.degrees,
                k,
                n + 1,
                local_colength(tower, data, k),
                total_e,
            )
        except ProfileInconsistent as exc:
            notes.append(f"factor {k}: {exc}")
            bounds_ok = False
            ks = ()
        bounds_ok &= all(d >= x >= d - total_e for x in ks)
        splitting.append(ks)
    basis = system.kernel_basis()
    degenerate = _is_degenerate(tower, system, basis, data)
    return describe_fiber(system, expected_fiber_dim(tower, beta), splitting, bounds_ok, degenerate, notes)


# --- random data and sampling ---


def random_point_on_center(tower: BlowupTower, i: int, rng: random.Random) -> tuple:
    F = tower.field
    q = []
    for M in tower.equation_matrices(i):
        basis = M.kernel_basis()
        while True:
            coeffs = [F.random(rng) for _ in basis]
            v = [F.reduce(sum(c * b[t] for c, b in zip(coeffs, basis))) for t in range(M.ncols)]
            if any(x != 0 for x in v):
                q.append(normalize_projective(F, v))
                break
    return tuple(q)


def random_incidence_data(tower: BlowupTower, beta: CurveClass, rng: random.Random) -> list[IncidenceDatum]:
    """Simple data at distinct random domain points realizing beta."""
    F = tower.field
    e_s = strict_from_total(tower, beta)
    if any(e < 0 for e in e_s):
        raise ClassMismatch(f"strict multiplicities {list(e_s)} are negative")
    used, data = set(), []
    for i, count in enumerate(e_s):
        for _ in range(count):
            while True:
                p = F.random_p1_point(rng)
                if p not in used:
                    used.add(p)
                    break
            q = random_point_on_center(tower, i, rng) if tower.centers[i].is_linear else ()
            data.append(IncidenceDatum(p, i, q, 1))
    return data


@dataclass(frozen=True)
class SampleResult:
    morphism: MorphismP1
    attempts: int
    contacts: tuple
    recovered: CurveClass
    splitting: tuple
    twist: int
    twist_vanishing: tuple
    free: bool

    def to_dict(self) -> dict:
        F = self.morphism.field
        return {
            "attempts": self.attempts,
            "morphism": self.morphism.to_json(),
            "contacts": [c.to_dict(F) for c in self.contacts],
            "recovered": self.recovered.to_dict(),
            "tangent_splitting": [list(s) for s in self.splitting],
            "twist": self.twist,
            "twist_vanishing": list(self.twist_vanishing),
            "free": self.free,
        }


def sample_fiber_member(
    fiber: FiberDescription,
    tower: BlowupTower,
    beta: CurveClass,
    data,
    rng: random.Random,
    retries: int = DEFAULT_RETRIES,
) -> SampleResult:
    """Random member of the fiber with exactly the prescribed contacts.

    Members with base points, extra contact, or image inside a center are
    redrawn, up to ``retries`` attempts.
    """
    F = tower.field
    if fiber.empty:
        raise GenericSampleNotFound("the fiber is empty")
    reasons = []
    for attempt in range(1, retries + 1):
        coeffs = [F.random(rng) for _ in fiber.kernel_basis]
        vec = [0] * len(fiber.kernel_basis[0])
        for c, v in zip(coeffs, fiber.kernel_basis):
            for t, x in enumerate(v):
                if x != 0:
                    vec[t] += c * x
        try:
            f = MorphismP1.from_vector(F, tower.ambient, beta.degrees, [F.reduce(x) for x in vec])
            if not validate(f).valid:
                reasons.append("base point")
                continue
            recovered = pushforward_and_multiplicities(f, tower)
        except (InvalidMorphism, ImageInsideCenter) as exc:
            reasons.append(str(exc))
            continue
        if recovered.e_total != tuple(beta.e_total):
            reasons.append(f"contacts {list(recovered.e_total)}")
            continue
        contacts = tuple(contact_order(f, d.p, d.center, tower) for d in data)
        splitting = tuple(splitting_tangent_pullback(f))
        twist = main_twist(tower, beta)
        per, _ = h1_twist_vanishes(splitting, twist)
        free = all(min(a) >= 0 for a in splitting if a)
        return SampleResult(f, attempt, contacts, recovered, splitting, twist, tuple(per), free)
    raise GenericSampleNotFound(f"no generic member in {retries} attempts ({'; '.join(reasons[-3:])})")


__all__ = [
    "DEFAULT_RETRIES",
    "FiberDescription",
    "IncidenceDatum",
    "SampleResult",
    "compile_incidence",
    "compile_infinitesimal",
    "data_multiplicities",
    "describe_fiber",
    "infinitesimal_rows",
    "kernel_splitting",
    "make_datum",
    "point_rows",
    "random_incidence_data",
    "random_point_on_center",
    "sample_fiber_member",
    "sigma_fiber",
]
