"""Blowup towers over products of projective spaces, curve classes and the
numerical arithmetic around them (hypothesis margins, expected dimensions).

Centers come in two kinds:

* ``linear``: a product of linear subspaces, one per factor, cut out by lists
  of linear forms (an empty list means the whole factor).  These are blown up
  first ("level 0") and must be pairwise disjoint.
* ``infinitesimal``: a point on the exceptional divisor of a point-like parent
  center.  It is given in an explicit chart: ``chart`` is the index of the
  affine coordinate (at the root point) used as the divisor coordinate, and
  ``direction`` lists the values of the remaining affine coordinates divided
  by it.  Deeper infinitesimal points reuse the same divisor coordinate.

Affine coordinates at a point ``q`` of the product are numbered globally:
factor by factor, the coordinates ``x_j / x_pivot`` for every ``j`` other than
the pivot (first nonzero coordinate of ``q`` in that factor).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .errors import TowerError, WrongArity
from .exact import ExactMatrix, Field

LINEAR = "linear"
INFINITESIMAL = "infinitesimal"


def normalize_projective(field: Field, coords) -> tuple:
    coords = tuple(field.coerce(c) for c in coords)
    for c in coords:
        if c != 0:
            inv = field.inv(c)
            return tuple(field.reduce(x * inv) for x in coords)
    raise TowerError("all-zero homogeneous coordinates")


def pivot_index(point) -> int:
    for j, c in enumerate(point):
        if c != 0:
            return j
    raise TowerError("all-zero homogeneous coordinates")


def point_equations(field: Field, point) -> tuple:
    """Linear forms q_piv x_j - q_j x_piv cutting out a single point."""
    piv = pivot_index(point)
    eqs = []
    for j in range(len(point)):
        if j == piv:
            continue
        v = [field.zero] * len(point)
        v[j] = point[piv]
        v[piv] = field.neg(point[j])
        eqs.append(tuple(v))
    return tuple(eqs)


@dataclass(frozen=True)
class AmbientSpace:
    factor_dims: tuple

    def __post_init__(self):
        if not self.factor_dims:
            raise TowerError("ambient space needs at least one factor")
        if any(int(n) < 1 for n in self.factor_dims):
            raise TowerError("factor dimensions must be positive")

    @property
    def dim(self) -> int:
        return sum(self.factor_dims)

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)

    def coefficient_dim(self, degrees) -> int:
        return sum((d + 1) * (n + 1) for d, n in zip(degrees, self.factor_dims))

    def block_offsets(self, degrees) -> list[int]:
        """Start index of each factor's block in the morphism coefficient vector."""
        out, pos = [], 0
        for d, n in zip(degrees, self.factor_dims):
            out.append(pos)
            pos += (d + 1) * (n + 1)
        return out

    def affine_coordinates(self, q) -> list[tuple[int, int]]:
        """Global affine coordinate list at the point ``q``: (factor, homogeneous index)."""
        out = []
        for k, qk in enumerate(q):
            piv = pivot_index(qk)
            out.extend((k, j) for j in range(len(qk)) if j != piv)
        return out


@dataclass(frozen=True)
class Center:
    index: int
    kind: str
    equations: tuple = ()  # per factor: tuple of coefficient vectors (linear only)
    parent: int | None = None
    chart: int | None = None
    direction: tuple = ()

    @property
    def is_linear(self) -> bool:
        return self.kind == LINEAR


@dataclass(frozen=True)
class CurveClass:
    """beta, recorded by d_k = beta.pi^*H_k and e_i^t = beta.E_i^t."""

    degrees: tuple
    e_total: tuple = ()

    def __post_init__(self):
        if any(d < 0 for d in self.degrees) or not any(d > 0 for d in self.degrees):
            raise ValueError("degrees must be >= 0 with at least one positive (pi_* beta != 0)")

    def to_dict(self) -> dict:
        return {"degrees": list(self.degrees), "e_total": list(self.e_total)}


@dataclass(frozen=True, eq=False)
class BlowupTower:
    ambient: AmbientSpace
    centers: tuple
    field: Field
    levels: tuple = dc_field(default=())
    parents: tuple = dc_field(default=())

    @property
    def r(self) -> int:
        return len(self.centers)

    @cached_property
    def children(self) -> tuple:
        kids = [[] for _ in self.centers]
        for i, p in enumerate(self.parents):
            if p is not None:
                kids[p].append(i)
        return tuple(tuple(k) for k in kids)

    @property
    def m(self) -> tuple:
        """m_i: number of earlier centers whose total transform contains E_i^t."""
        return self.levels

    def chain(self, i: int) -> list[int]:
        """Centers from the root (level 0) down to ``i``."""
        out = [i]
        while self.parents[out[-1]] is not None:
            out.append(self.parents[out[-1]])
        return out[::-1]

    def root(self, i: int) -> int:
        return self.chain(i)[0]

    def subtree(self, i: int) -> list[int]:
        out, todo = [], [i]
        while todo:
            j = todo.pop()
            out.append(j)
            todo.extend(self.children[j])
        return sorted(out)

    @cached_property
    def _linear_data(self) -> tuple:
        """Per level-0 center: (per-factor equation matrices, per-factor subspace dims)."""
        out = []
        for c in self.centers:
            if not c.is_linear:
                out.append(None)
                continue
            mats, dims = [], []
            for n, eqs in zip(self.ambient.factor_dims, c.equations):
                M = ExactMatrix(self.field, tuple(eqs), n + 1)
                mats.append(M)
                dims.append(n - M.rank())
            out.append((tuple(mats), tuple(dims)))
        return tuple(out)

    def center_dim(self, i: int) -> int:
        data = self._linear_data[i]
        return 0 if data is None else sum(data[1])

    def codim(self, i: int) -> int:
        return self.ambient.dim - self.center_dim(i)

    def is_point_like(self, i: int) -> bool:
        return self.center_dim(i) == 0

    def factor_dims_of(self, i: int) -> tuple:
        return self._linear_data[i][1]

    def equation_matrices(self, i: int) -> tuple:
        return self._linear_data[i][0]

    def root_point(self, i: int) -> tuple:
        """Homogeneous coordinates (per factor) of the point under a point-like center."""
        j = self.root(i)
        if not self.is_point_like(j):
            raise TowerError(f"center {j} is not a point")
        pts = []
        for M in self.equation_matrices(j):
            (v,) = M.kernel_basis()
            pts.append(normalize_projective(self.field, v))
        return tuple(pts)

    def directions(self, i: int) -> list[tuple[int, tuple]]:
        """(chart, direction) of each infinitesimal step from the root down to ``i``."""
        return [(self.centers[j].chart, self.centers[j].direction) for j in self.chain(i)[1:]]

    def contains_point(self, i: int, q) -> bool:
        """Whether the point ``q`` (per factor) lies on the level-0 center ``i``."""
        F = self.field
        for M, qk in zip(self.equation_matrices(i), q):
            for row in M.rows:
                if F.reduce(sum(a * b for a, b in zip(row, qk))) != 0:
                    return False
        return True


def _parse_center(raw: dict, index: int, ambient: AmbientSpace, field: Field) -> Center:
    kind = raw.get("kind")
    if kind == LINEAR:
        if "point" in raw:
            pts = raw["point"]
            if len(pts) != ambient.n_factors:
                raise TowerError(f"center {index}: point needs {ambient.n_factors} factors")
            eqs = []
            for n, pt in zip(ambient.factor_dims, pts):
                if len(pt) != n + 1:
                    raise TowerError(f"center {index}: point coordinates must have length {n + 1}")
                eqs.append(point_equations(field, normalize_projective(field, pt)))
            return Center(index, LINEAR, equations=tuple(eqs))
        raw_eqs = list(raw.get("equations", []))
        if len(raw_eqs) > ambient.n_factors:
            raise TowerError(
                f"center {index}: out-of-range factor index {len(raw_eqs) - 1} "
                f"(ambient has {ambient.n_factors} factors)"
            )
        raw_eqs += [[]] * (ambient.n_factors - len(raw_eqs))
        eqs = []
        for k, (n, fe) in enumerate(zip(ambient.factor_dims, raw_eqs)):
            vecs = []
            for v in fe:
                if len(v) != n + 1:
                    raise TowerError(f"center {index}: equation in factor {k} must have {n + 1} entries")
                vecs.append(tuple(field.coerce(x) for x in v))
            eqs.append(tuple(vecs))
        return Center(index, LINEAR, equations=tuple(eqs))
    if kind == INFINITESIMAL:
        parent = raw.get("parent")
        chart = raw.get("chart", 0)
        direction = tuple(field.coerce(x) for x in raw.get("direction", ()))
        if not isinstance(parent, int):
            raise TowerError(f"center {index}: infinitesimal center needs an integer parent")
        if not 0 <= chart < ambient.dim:
            raise TowerError(f"center {index}: chart index {chart} out of range")
        if len(direction) != ambient.dim - 1:
            raise TowerError(f"center {index}: direction needs {ambient.dim - 1} values")
        return Center(index, INFINITESIMAL, parent=parent, chart=chart, direction=direction)
    raise TowerError(f"center {index}: unknown kind {kind!r}")


def build_tower(spec: dict, field: Field) -> BlowupTower:
    """Validate a tower description and derive levels m_i and adjacency.

    ``spec`` has keys ``ambient`` (factor dimensions) and ``centers``
    (list of dicts as in the JSON config).
    """
    ambient = AmbientSpace(tuple(int(n) for n in spec["ambient"]))
    centers = tuple(_parse_center(c, i, ambient, field) for i, c in enumerate(spec.get("centers", [])))
    r = len(centers)
    parents = tuple(c.parent for c in centers)

    for i, p in enumerate(parents):
        if p is not None and not 0 <= p < r:
            raise TowerError(f"center {i}: parent {p} out of range")
    for i, p in enumerate(parents):
        if p is None:
            continue
        seen, j = {i}, p
        while j is not None:
            if j in seen:
                raise TowerError(f"center {i}: cyclic parent reference")
            seen.add(j)
            j = parents[j]
        if p >= i:
            raise TowerError(f"center {i}: parent {p} must be blown up before its child")

    levels = [0] * r
    for i, p in enumerate(parents):
        if p is not None:
            levels[i] = levels[p] + 1

    tower = BlowupTower(ambient, centers, field, tuple(levels), parents)

    for i, c in enumerate(centers):
        if c.is_linear:
            for k, M in enumerate(tower.equation_matrices(i)):
                if M.rank() > ambient.factor_dims[k]:
                    raise TowerError(f"center {i}: empty in factor {k}")
    for i, c in enumerate(centers):
        if not c.is_linear and not tower.is_point_like(c.parent):
            raise TowerError(
                f"center {i}: infinitesimal parent {c.parent} is not a point "
                f"(dimension {tower.center_dim(c.parent)})"
            )
    seen_dirs = set()
    for i, c in enumerate(centers):
        if not c.is_linear:
            key = (c.parent, _direction_point(field, c.chart, c.direction))
            if key in seen_dirs:
                raise TowerError(f"center {i}: duplicates an earlier infinitesimal point")
            seen_dirs.add(key)
    level0 = [i for i, c in enumerate(centers) if c.is_linear]
    for a in range(len(level0)):
        for b in range(a + 1, len(level0)):
            if _linear_centers_meet(tower, level0[a], level0[b]):
                raise TowerError(f"centers {level0[a]} and {level0[b]} meet; level-0 centers must be disjoint")
    return tower


def _direction_point(field: Field, chart: int, direction) -> tuple:
    coords = list(direction)
    coords.insert(chart, field.one)
    return normalize_projective(field, coords)


def _linear_centers_meet(tower: BlowupTower, i: int, j: int) -> bool:
    for n, A, B in zip(tower.ambient.factor_dims, tower.equation_matrices(i), tower.equation_matrices(j)):
        if A.vstack(B).rank() > n:
            return False
    return True


def m_by_containment(tower: BlowupTower) -> tuple:
    """m_i recomputed from the containment definition by walking every pair.

    E_i^t lies in the total transform of Z_j (j < i) exactly when Z_i sits
    over Z_j, i.e. the infinitesimal address of j is a prefix of that of i.
    """

    def address(i):
        steps = []
        c = tower.centers[i]
        while not c.is_linear:
            steps.append((c.chart, c.direction))
            c = tower.centers[c.parent]
        return (c.index, tuple(reversed(steps)))

    addrs = [address(i) for i in range(tower.r)]
    out = []
    for i in range(tower.r):
        root_i, steps_i = addrs[i]
        count = 0
        for j in range(i):
            root_j, steps_j = addrs[j]
            if root_i == root_j and len(steps_j) < len(steps_i) and steps_i[: len(steps_j)] == steps_j:
                count += 1
        out.append(count)
    return tuple(out)


def _check_class(tower: BlowupTower, beta: CurveClass):
    if len(beta.degrees) != tower.ambient.n_factors:
        raise WrongArity(f"beta has {len(beta.degrees)} degrees, ambient has {tower.ambient.n_factors} factors")
    if len(beta.e_total) != tower.r:
        raise WrongArity(f"beta has {len(beta.e_total)} multiplicities, tower has {tower.r} centers")


@dataclass(frozen=True)
class HypothesisReport:
    factor_margins: tuple
    center_margins: tuple
    verdict: bool
    clauses: tuple  # applicable clauses of the smoothness/density statement

    def to_dict(self) -> dict:
        return {
            "factor_margins": list(self.factor_margins),
            "center_margins": list(self.center_margins),
            "verdict": "pass" if self.verdict else "fail",
            "clauses": list(self.clauses),
        }


ALL_POINT_CENTERS = "all-point-centers"
DISJOINT_CONVEX_CENTERS = "disjoint-convex-centers"


def main_twist(tower: BlowupTower, beta: CurveClass) -> int:
    """sum_i (m_i + 1) e_i^t."""
    return sum((m + 1) * e for m, e in zip(tower.m, beta.e_total))


def check_main_hypotheses(tower: BlowupTower, beta: CurveClass) -> HypothesisReport:
    _check_class(tower, beta)
    twist = main_twist(tower, beta)
    factor_margins = tuple(d - twist for d in beta.degrees)
    center_margins = tuple(beta.e_total)
    verdict = all(x >= 0 for x in factor_margins) and all(x >= 0 for x in center_margins)
    clauses = []
    if all(tower.is_point_like(tower.root(i)) for i in range(tower.r)):
        clauses.append(ALL_POINT_CENTERS)
    # Level-0 linear centers are products of projective spaces, hence convex;
    # build_tower has already rejected meeting centers.
    if all(c.is_linear for c in tower.centers):
        clauses.append(DISJOINT_CONVEX_CENTERS)
    return HypothesisReport(factor_margins, center_margins, verdict, tuple(clauses))


def strict_from_total(tower: BlowupTower, beta: CurveClass) -> tuple:
    _check_class(tower, beta)
    e = beta.e_total
    return tuple(e[i] - sum(e[j] for j in tower.children[i]) for i in range(tower.r))


def total_from_strict(tower: BlowupTower, e_strict) -> tuple:
    return tuple(sum(e_strict[j] for j in tower.subtree(i)) for i in range(tower.r))


def expected_dim_mor(tower: BlowupTower, beta: CurveClass) -> int:
    """-K.beta + dim X with K = pi^*K_X + sum_i (codim Z_i - 1) E_i^t."""
    _check_class(tower, beta)
    amb = tower.ambient
    anti_k = sum((n + 1) * d for n, d in zip(amb.factor_dims, beta.degrees))
    anti_k -= sum((tower.codim(i) - 1) * e for i, e in enumerate(beta.e_total))
    return anti_k + amb.dim


def expected_fiber_dim(tower: BlowupTower, beta: CurveClass) -> int:
    """Projective dimension of the incidence fiber inside P(coefficient space).

    Each incidence point on center i costs (codim - 1) per unit of e_i^t plus
    (1 + dim Z_i) per unit of e_i^s; for a level-0 center this is dim X per
    unit.  A negative value means the fiber is expected to be empty.
    """
    _check_class(tower, beta)
    if any(e < 0 for e in beta.e_total):
        raise ValueError("expected fiber dimension needs all e_i^t >= 0")
    e_s = strict_from_total(tower, beta)
    total = tower.ambient.coefficient_dim(beta.degrees) - 1
    for i in range(tower.r):
        total -= (tower.codim(i) - 1) * beta.e_total[i] + (1 + tower.center_dim(i)) * e_s[i]
    return total


def hilbert_dim(tower: BlowupTower, beta: CurveClass) -> int:
    """dim prod_i Hilb^{e_i^s}(P^1 x Z_i)."""
    e_s = strict_from_total(tower, beta)
    return sum(e * (1 + tower.center_dim(i)) for i, e in enumerate(e_s))


def c_H(tower: BlowupTower, beta: CurveClass) -> int:
    """min_k beta.(pi^*H_k - E) for a single blowup."""
    if tower.r != 1:
        raise WrongArity(f"c_H is defined for a single blowup, tower has {tower.r} centers")
    _check_class(tower, beta)
    return min(d - beta.e_total[0] for d in beta.degrees)
