"""Morphisms P^1 -> prod P^{n_k}: validity, contact orders with centers,
recovered curve classes, and splitting types of pulled-back bundles.

Splitting types are read off from twist profiles: for a bundle
V = sum_j O(k_j) on P^1, h(t) = h^0(V(-t)) = sum_j max(0, k_j - t + 1), and
h(t) - h(t+1) counts the summands with k_j >= t.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AllZeroFactor, ImageInsideCenter, InvalidMorphism, ProfileInconsistent
from .exact import INFINITE, ExactMatrix, Field, HomPoly, gcd_forms, normalize_point, valuation_at
from .geometry import AmbientSpace, BlowupTower, CurveClass, pivot_index


@dataclass(frozen=True)
class MorphismP1:
    field: Field
    factors: tuple  # per factor: tuple of n_k + 1 HomPoly of common degree

    def __post_init__(self):
        for comps in self.factors:
            if len({c.degree for c in comps}) != 1:
                raise InvalidMorphism("components of a factor must share one degree")

    @classmethod
    def from_coefficients(cls, field: Field, factors) -> "MorphismP1":
        return cls(field, tuple(tuple(HomPoly.make(field, c) for c in comps) for comps in factors))

    @classmethod
    def from_vector(cls, field: Field, ambient: AmbientSpace, degrees, vec) -> "MorphismP1":
        factors, pos = [], 0
        for n, d in zip(ambient.factor_dims, degrees):
            comps = []
            for _ in range(n + 1):
                comps.append(HomPoly(field, tuple(vec[pos : pos + d + 1])))
                pos += d + 1
            factors.append(tuple(comps))
        if pos != len(vec):
            raise InvalidMorphism("coefficient vector length does not match layout")
        return cls(field, tuple(factors))

    @property
    def degrees(self) -> tuple:
        return tuple(comps[0].degree for comps in self.factors)

    @property
    def factor_dims(self) -> tuple:
        return tuple(len(comps) - 1 for comps in self.factors)

    def to_vector(self) -> tuple:
        return tuple(c for comps in self.factors for form in comps for c in form.coeffs)

    def to_json(self) -> list:
        return [[form.to_strings() for form in comps] for comps in self.factors]

    def scale(self, c) -> "MorphismP1":
        return MorphismP1(self.field, tuple(tuple(f.scale(c) for f in comps) for comps in self.factors))

    def reparametrize(self, a, b, c, d) -> "MorphismP1":
        """f composed with (s, t) -> (a s + b t, c s + d t)."""
        return MorphismP1(
            self.field, tuple(tuple(f.compose_linear(a, b, c, d) for f in comps) for comps in self.factors)
        )


@dataclass(frozen=True)
class MorphismDiagnostics:
    gcds: tuple
    valid: bool

    def to_dict(self) -> dict:
        return {"gcds": [g.to_strings() for g in self.gcds], "valid": self.valid}


def validate(f: MorphismP1) -> MorphismDiagnostics:
    """Per-factor GCD of the components; valid iff every GCD is constant."""
    gcds = []
    for k, comps in enumerate(f.factors):
        if all(c.is_zero() for c in comps):
            raise AllZeroFactor(f"factor {k} has only zero components")
        gcds.append(gcd_forms(comps))
    return MorphismDiagnostics(tuple(gcds), all(g.degree == 0 for g in gcds))


@dataclass(frozen=True)
class ContactRecord:
    point: tuple
    center: int
    order: int | float  # INFINITE when the image lies in the center

    def to_dict(self, field: Field) -> dict:
        order = "inf" if self.order == INFINITE else self.order
        return {"point": [field.to_str(x) for x in self.point], "center": self.center, "order": order}


def _compositions(f: MorphismP1, tower: BlowupTower, i: int) -> list[HomPoly]:
    """L o f for every defining linear form L of the level-0 center ``i``."""
    out = []
    for comps, M in zip(f.factors, tower.equation_matrices(i)):
        for row in M.rows:
            acc = HomPoly.zero(f.field, comps[0].degree)
            for coef, form in zip(row, comps):
                if coef != 0:
                    acc = acc + form.scale(coef)
            out.append(acc)
    return out


def local_coordinates(f: MorphismP1, tower: BlowupTower, i: int):
    """Pullbacks along f of the local coordinates centered at the point Z_i.

    Each coordinate is a ratio (numerator, denominator) of binary forms of
    equal degree.  Level 0 uses the affine chart at the root point; each
    infinitesimal step replaces y_j by y_j / y_c - w_j (j != c) in the chart
    with divisor coordinate c.  Returns None when the curve never enters the
    chart (a denominator vanishes identically), which means zero contact.
    """
    q = tower.root_point(i)
    coords = []
    for comps, qk in zip(f.factors, q):
        piv = pivot_index(qk)
        den = comps[piv].scale(qk[piv])
        for j in range(len(qk)):
            if j != piv:
                coords.append((comps[j].scale(qk[piv]) - comps[piv].scale(qk[j]), den))
    for chart, direction in tower.directions(i):
        if any(den.is_zero() for _, den in coords) or coords[chart][0].is_zero():
            return None
        num_c, den_c = coords[chart]
        new, w = [], iter(direction)
        for j, (num, den) in enumerate(coords):
            if j == chart:
                new.append((num, den))
                continue
            wj = next(w)
            # (num/den) / (num_c/den_c) - w = (num*den_c - w*den*num_c) / (den*num_c)
            new.append((num * den_c - (den * num_c).scale(wj), den * num_c))
        coords = new
    if any(den.is_zero() for _, den in coords):
        return None
    return coords


def contact_order(f: MorphismP1, p, center: int, tower: BlowupTower) -> ContactRecord:
    """Order of contact of f at the domain point p with center Z_i."""
    point = normalize_point(f.field, p)
    c = tower.centers[center]
    if c.is_linear:
        vals = [valuation_at(g, point) for g in _compositions(f, tower, center)]
        return ContactRecord(point, center, min(vals) if vals else INFINITE)
    coords = local_coordinates(f, tower, center)
    if coords is None:
        return ContactRecord(point, center, 0)
    if all(num.is_zero() for num, _ in coords):
        return ContactRecord(point, center, INFINITE)
    order = min(valuation_at(num, point) - valuation_at(den, point) for num, den in coords)
    return ContactRecord(point, center, max(0, order))


def total_contact(f: MorphismP1, tower: BlowupTower, i: int):
    """Sum over all domain points of the contact order with Z_i, without root finding.

    For ratios y_j = A_j / B over a common denominator, the sum of
    max(0, min_j val_p y_j) over p equals deg G - deg gcd(G, B), G = gcd_j A_j.
    """
    if tower.centers[i].is_linear:
        forms = [g for g in _compositions(f, tower, i) if not g.is_zero()]
        return gcd_forms(forms).degree if forms else INFINITE
    coords = local_coordinates(f, tower, i)
    if coords is None:
        return 0
    dens = []
    for _, den in coords:
        if den not in dens:
            dens.append(den)
    B = dens[0]
    for den in dens[1:]:
        B = B * den
    numerators = []
    for num, den in coords:
        if num.is_zero():
            continue
        A = num
        for other in dens:
            if other != den:
                A = A * other
        numerators.append(A)
    if not numerators:
        return INFINITE
    G = gcd_forms(numerators)
    return G.degree - gcd_forms([G, B]).degree


def pushforward_and_multiplicities(f: MorphismP1, tower: BlowupTower) -> CurveClass:
    """Recover (d_k, e_i^t) from a morphism; raises if f lies inside a center."""
    e = []
    for i in range(tower.r):
        total = total_contact(f, tower, i)
        if total == INFINITE:
            raise ImageInsideCenter(f"image of f lies inside center {i}")
        e.append(total)
    return CurveClass(f.degrees, tuple(e))


# --- splitting types ---


def splitting_from_twist_profile(h: dict, rank: int, degree: int) -> tuple:
    """Decode {k_j} from h(t) = sum_j max(0, k_j - t + 1).

    ``h`` maps a contiguous range of integers to dimensions; values above the
    largest key are taken to be zero.  The lowest key must be low enough that
    every summand is visible there.  Returned sorted in decreasing order.
    """
    if not h:
        raise ProfileInconsistent("empty profile")
    lo, hi = min(h), max(h)
    if sorted(h) != list(range(lo, hi + 1)):
        raise ProfileInconsistent("profile must be given on a contiguous range")
    vals = dict(h)
    vals[hi + 1] = 0
    vals[hi + 2] = 0
    at_least = {t: vals[t] - vals[t + 1] for t in range(lo, hi + 2)}
    if at_least[lo] != rank:
        raise ProfileInconsistent(f"profile shows {at_least[lo]} summands at t={lo}, expected rank {rank}")
    ks = []
    for t in range(lo, hi + 1):
        mult = at_least[t] - at_least[t + 1]
        if mult < 0:
            raise ProfileInconsistent(f"profile is not convex at t={t}")
        ks.extend([t] * mult)
    if len(ks) != rank or sum(ks) != degree:
        raise ProfileInconsistent(f"decoded {sorted(ks)} has rank {len(ks)} and degree {sum(ks)}")
    for t, v in h.items():
        if sum(max(0, k - t + 1) for k in ks) != v:
            raise ProfileInconsistent(f"decoded type does not reproduce h({t})")
    return tuple(sorted(ks, reverse=True))


def twist_profile_values(ks, ts) -> dict:
    """Forward formula h(t) = sum_j max(0, k_j - t + 1)."""
    return {t: sum(max(0, k - t + 1) for k in ks) for t in ts}


def syzygy_dim(field: Field, forms, m: int) -> int:
    """dim {(g_i) : deg g_i = m - d, sum f_i g_i = 0} for forms f_i of degree d."""
    d = forms[0].degree
    D = m - d
    if D < 0:
        return 0
    ncols = len(forms) * (D + 1)
    rows = [[field.zero] * ncols for _ in range(m + 1)]
    for i, form in enumerate(forms):
        for a in range(D + 1):
            col = i * (D + 1) + a
            for b, c in enumerate(form.coeffs):
                if c != 0:
                    rows[a + b][col] = c
    M = ExactMatrix(field, tuple(tuple(r) for r in rows), ncols)
    return ncols - M.rank()


def splitting_tangent_pullback(f: MorphismP1) -> list[tuple]:
    """Splitting type of f^*T_{P^{n_k}} for each factor.

    The Euler sequence dualizes to 0 -> f^*Omega -> O(-d)^{n+1} -> O -> 0, so
    h^0(f^*Omega(m)) is the dimension of degree-(m-d) syzygies of (f_0..f_n).
    f^*Omega = sum O(-a_i) with a_i in [d, 2d]; decode and negate.
    """
    diag = validate(f)
    if not diag.valid:
        raise InvalidMorphism("f has base points; splitting of f^*T needs a morphism")
    out = []
    for comps in f.factors:
        n, d = len(comps) - 1, comps[0].degree
        profile = {t: syzygy_dim(f.field, comps, -t) for t in range(-2 * d, -d + 1)}
        ks = splitting_from_twist_profile(profile, n, -(n + 1) * d)
        out.append(tuple(sorted((-k for k in ks), reverse=True)))
    return out


def h1_twist_vanishes(splittings, c: int) -> tuple[list[bool], bool]:
    """H^1(P^1, V(-c)) = 0 per factor, i.e. every a_i - c >= -1."""
    per = [min(a) - c >= -1 if a else True for a in splittings]
    return per, all(per)
