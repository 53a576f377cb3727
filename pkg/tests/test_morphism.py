import pytest
from hypothesis import given, settings, strategies as st

from conftest import FP
from ratcurves.errors import AllZeroFactor, ImageInsideCenter, InvalidMorphism, ProfileInconsistent
from ratcurves.exact import INFINITE, QQ, HomPoly, stream
from ratcurves.geometry import AmbientSpace, CurveClass, build_tower
from ratcurves.morphism import (
    MorphismP1,
    contact_order,
    h1_twist_vanishes,
    pushforward_and_multiplicities,
    splitting_from_twist_profile,
    splitting_tangent_pullback,
    total_contact,
    twist_profile_values,
    validate,
)
from ratcurves.verify.experiments import random_morphism


def morphism(*factors, field=QQ):
    return MorphismP1.from_coefficients(field, factors)


def point_tower(q, field=QQ):
    return build_tower({"ambient": [len(q) - 1], "centers": [{"kind": "linear", "point": [list(q)]}]}, field)


CONIC = morphism([[1, 0, 0], [0, 1, 0], [0, 0, 1]])  # (s^2, st, t^2)
CUSP = morphism([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])  # (s^3, s t^2, t^3)


# --- validity ---


def test_conic_is_valid():
    diag = validate(CONIC)
    assert diag.valid
    assert all(g.degree == 0 for g in diag.gcds)


def test_common_factor_is_reported():
    f = morphism([[1, 0, 0], [0, 1, 0]])  # (s^2, st) = s (s, t)
    diag = validate(f)
    assert not diag.valid
    assert diag.gcds[0].degree == 1


def test_all_zero_factor():
    with pytest.raises(AllZeroFactor):
        validate(morphism([[1, 0], [0, 1]], [[0, 0], [0, 0]]))


def test_components_must_share_degree():
    with pytest.raises(InvalidMorphism):
        morphism([[1, 0], [0, 0, 1]])


def test_vector_round_trip():
    rng = stream(42, "vector")
    f = random_morphism(FP, (1, 2), (2, 3), rng)
    g = MorphismP1.from_vector(FP, AmbientSpace((1, 2)), f.degrees, f.to_vector())
    assert g == f
    assert len(f.to_vector()) == 2 * 3 + 3 * 4


# --- contact orders ---


def test_conic_meets_coordinate_point_simply():
    t = point_tower((1, 0, 0))
    assert contact_order(CONIC, (1, 0), 0, t).order == 1
    assert contact_order(CONIC, (0, 1), 0, t).order == 0


def test_cusp_has_contact_two():
    t = point_tower((1, 0, 0))
    assert contact_order(CUSP, (1, 0), 0, t).order == 2
    assert pushforward_and_multiplicities(CUSP, t) == CurveClass((3,), (2,))


def test_contact_with_image_inside_center():
    line = {"kind": "linear", "equations": [[[0, 0, 1]]]}
    t = build_tower({"ambient": [2], "centers": [line]}, QQ)
    f = morphism([[1, 0], [0, 1], [0, 0]])
    assert contact_order(f, (1, 3), 0, t).order == INFINITE
    assert total_contact(f, t, 0) == INFINITE
    with pytest.raises(ImageInsideCenter):
        pushforward_and_multiplicities(f, t)


def test_contact_record_serializes_infinity():
    line = {"kind": "linear", "equations": [[[0, 0, 1]]]}
    t = build_tower({"ambient": [2], "centers": [line]}, QQ)
    rec = contact_order(morphism([[1, 0], [0, 1], [0, 0]]), (1, 3), 0, t)
    assert rec.to_dict(QQ)["order"] == "inf"


def test_infinitesimal_contact_on_tangent_branch():
    # (s^2, st, t^2 + s t) near [1:0:0]: y1 = t, y2 = t + t^2, tangent direction y2/y1 -> 1
    spec = {
        "ambient": [2],
        "centers": [
            {"kind": "linear", "point": [[1, 0, 0]]},
            {"kind": "infinitesimal", "parent": 0, "chart": 0, "direction": [1]},
        ],
    }
    t = build_tower(spec, QQ)
    f = morphism([[1, 0, 0], [0, 1, 0], [0, 1, 1]])
    assert contact_order(f, (1, 0), 0, t).order == 1
    assert contact_order(f, (1, 0), 1, t).order == 1
    assert pushforward_and_multiplicities(f, t).e_total == (1, 1)


def _with_known_contacts(field, rng, mults, degree):
    """Morphism to P^2 whose x1, x2 share exactly the zeros prescribed by ``mults``."""
    points = []
    G = HomPoly(field, (field.one,))
    for u, m in mults:
        points.append((1, u))
        for _ in range(m):
            G = G * HomPoly.vanishing_at(field, (1, u))
    rest = degree - G.degree
    comps = [random_morphism(field, (0,), (degree,), rng).factors[0][0]]
    for _ in range(2):
        comps.append(G * HomPoly(field, tuple(field.random(rng) for _ in range(rest + 1))))
    return MorphismP1(field, (tuple(comps),)), points


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(0, 10**6))
def test_total_contact_sums_local_orders(mults, seed):
    rng = stream(seed, "contacts")
    pairs = [(u + 1, m) for u, m in enumerate(mults)]
    f, points = _with_known_contacts(FP, rng, pairs, sum(mults) + 2)
    t = point_tower((1, 0, 0), FP)
    if not validate(f).valid:
        return
    local = [contact_order(f, p, 0, t).order for p in points]
    assert local == mults
    # random cofactors share no further zero outside a set of density ~1/p
    assert total_contact(f, t, 0) == sum(mults)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_contact_invariant_under_scaling_and_reparametrization(seed):
    rng = stream(seed, "invariance")
    f, points = _with_known_contacts(FP, rng, [(3, 2)], 4)
    t = point_tower((1, 0, 0), FP)
    c = FP.random_nonzero(rng)
    assert contact_order(f.scale(c), points[0], 0, t).order == 2
    # phi(s, t) = (s + b t, d t) sends (1, u) to (1, 3) when u = 3 / (d - 3 b)
    b, d = FP.random(rng), FP.random_nonzero(rng)
    if d - 3 * b == 0:
        return
    u = FP.div(FP.coerce(3), d - 3 * b)
    g = f.reparametrize(1, b, 0, d)
    assert contact_order(g, (1, u), 0, t).order == 2


# --- splitting types ---


@pytest.mark.parametrize(
    "f, expected",
    [
        (morphism([[1, 0], [0, 1]]), [(2,)]),
        (morphism([[1, 0], [0, 1], [0, 0]]), [(2, 1)]),
        (CONIC, [(3, 3)]),
        (morphism([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]), [(4, 4, 4)]),
        (morphism([[1, 0], [0, 1], [0, 0], [0, 0]]), [(2, 1, 1)]),
        (morphism([[1, 0], [0, 1]], [[1, 0, 0], [0, 0, 1]]), [(2,), (4,)]),
    ],
)
def test_known_splittings(f, expected):
    assert splitting_tangent_pullback(f) == expected


def test_splitting_needs_a_morphism():
    with pytest.raises(InvalidMorphism):
        splitting_tangent_pullback(morphism([[1, 0, 0], [0, 1, 0]]))


def test_random_splittings_obey_degree_laws():
    rng = stream(42, "census")
    balanced = 0
    for i in range(500):
        d = 1 + i % 4
        f = random_morphism(FP, (2,), (d,), rng)
        if not validate(f).valid:
            continue
        (a,) = splitting_tangent_pullback(f)
        assert sum(a) == 3 * d
        assert min(a) >= d
        balanced += max(a) - min(a) <= 1
    assert balanced >= 0.99 * 500


def test_decoder_example():
    assert splitting_from_twist_profile({0: 4, 1: 1, 2: 0}, 3, 1) == (1, 0, 0)


def test_decoder_rejects_inconsistent_profile():
    # h(1) = 2 cannot come from a rank-3 degree-1 bundle starting at h(0) = 4
    with pytest.raises(ProfileInconsistent):
        splitting_from_twist_profile({0: 4, 1: 2, 2: 1, 3: 0}, 3, 1)


def test_decoder_rejects_short_range():
    with pytest.raises(ProfileInconsistent):
        splitting_from_twist_profile({1: 1, 2: 0}, 3, 1)
    with pytest.raises(ProfileInconsistent):
        splitting_from_twist_profile({}, 1, 0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-4, 6), min_size=1, max_size=5))
def test_decoder_inverts_forward_profile(ks):
    ts = range(min(ks) - 1, max(ks) + 2)
    h = twist_profile_values(ks, ts)
    assert splitting_from_twist_profile(h, len(ks), sum(ks)) == tuple(sorted(ks, reverse=True))


def test_h1_vanishing():
    per, all_ok = h1_twist_vanishes([(3, 3), (2,)], 3)
    assert per == [True, True]
    assert all_ok
    per, all_ok = h1_twist_vanishes([(3, 3), (2,)], 4)
    assert per == [True, False]
    assert not all_ok


@settings(max_examples=100)
@given(st.lists(st.lists(st.integers(0, 8), min_size=1, max_size=3), min_size=1, max_size=3), st.integers(-2, 10))
def test_h1_vanishing_is_monotone_in_twist(splittings, c):
    if h1_twist_vanishes(splittings, c)[1]:
        assert h1_twist_vanishes(splittings, c - 1)[1]
