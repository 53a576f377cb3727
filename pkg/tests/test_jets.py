import pytest
from hypothesis import given, settings, strategies as st

from conftest import FP
from ratcurves.errors import DiagonalViolation, InvalidDatum, NotTransversal
from ratcurves.exact import QQ, stream
from ratcurves.geometry import AmbientSpace
from ratcurves.incidence import (
    BlowupChart,
    LocalJet,
    blowdown,
    blowdown_path,
    compile_jets,
    lift_jet,
    lift_path,
    make_prescription,
    random_transversal_jet,
    tau_fiber,
)
from ratcurves.morphism import MorphismP1


def jet(*values, field=QQ):
    return LocalJet.make(field, values)


def test_lift_of_a_plane_jet():
    lifted = lift_jet(jet([0, 1, 0], [0, 2, 3]), BlowupChart.point(2, 0))
    assert lifted == jet([0, 1], [2, 3])


def test_lift_with_partial_normal_chart():
    # blowing up the line {t = x = 0} in 3-space leaves y untouched
    chart = BlowupChart(3, 0, (1,))
    lifted = lift_jet(jet([0, 1, 0], [0, 0, 5], [7, 1, 0]), chart)
    assert lifted == jet([0, 1], [0, 5], [7, 1])


def test_lift_divides_by_a_unit_multiple():
    lifted = lift_jet(jet([0, 2, 2], [0, 4, 0]), BlowupChart.point(2, 0))
    # x / t = 4t / (2t + 2t^2) = 2 / (1 + t) = 2 - 2t mod t^2
    assert lifted == jet([0, 2], [2, -2])


@pytest.mark.parametrize(
    "values, chart",
    [
        (([0, 0, 1], [0, 1, 0]), BlowupChart.point(2, 0)),  # divisor vanishes to order 2
        (([1, 1, 0], [0, 1, 0]), BlowupChart.point(2, 0)),  # divisor coordinate nonzero at 0
        (([0, 1, 0], [3, 1, 0]), BlowupChart.point(2, 0)),  # not based on the center
    ],
)
def test_non_transversal_jets(values, chart):
    with pytest.raises(NotTransversal):
        lift_jet(jet(*values), chart)


def test_chart_validation():
    with pytest.raises(ValueError):
        BlowupChart(2, 2, ())
    with pytest.raises(ValueError):
        BlowupChart(3, 0, (0, 1))


def test_blowdown_inverts_lift():
    chart = BlowupChart.point(3, 1)
    j = jet([0, 4, 1, 1], [0, 1, 2, 3], [0, 0, 6, 1])
    assert blowdown(lift_jet(j, chart), chart) == j.truncate(3)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 3), st.integers(1, 2), st.integers(2, 5), st.integers(0, 10**6))
def test_round_trip_through_a_tower_of_charts(dim, depth, k, seed):
    rng = stream(seed, "jets")
    # one divisor coordinate throughout keeps every later lift transversal
    charts = [BlowupChart.point(dim, rng.randrange(dim))] * depth
    j = random_transversal_jet(FP, dim, k + depth, charts[0], rng)
    lifted, points = lift_path(j, charts)
    assert lifted.k == k
    back = blowdown_path(lifted, charts, points)
    assert back == j.truncate(k + 1)


# --- tau fibers ---

P1 = AmbientSpace((1,))


def test_identity_one_jet(field):
    s = make_prescription(field, P1, (1, 0), [[1, 0]], [[0, 1]])
    fib = tau_fiber(field, P1, (1,), [s])
    assert fib.affine_dim == 2
    identity = MorphismP1.from_coefficients(field, [[[1, 0], [0, 1]]])
    assert compile_jets(field, P1, (1,), [s]).contains(identity.to_vector())
    assert fib.expected_dim == 1
    assert fib.matches_expected


def test_no_prescriptions_give_whole_space(field):
    A = AmbientSpace((1, 2))
    fib = tau_fiber(field, A, (2, 1), [])
    assert fib.affine_dim == 3 * 2 + 2 * 3
    assert fib.splitting == ((2, 2), (1, 1, 1))


def test_conic_two_jet_in_plane():
    A = AmbientSpace((2,))
    # (s^2, st, t^2) at (1, 0): y1 = x, y2 = x^2
    s = make_prescription(QQ, A, (1, 0), [[1, 0, 0]], [[0, 1, 0], [0, 0, 1]])
    conic = MorphismP1.from_coefficients(QQ, [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]])
    fib = tau_fiber(QQ, A, (2,), [s])
    assert compile_jets(QQ, A, (2,), [s]).contains(conic.to_vector())
    assert fib.projective_dim == 9 - 1 - 2 * 3
    assert fib.splitting_bounds_ok


def test_prescriptions_need_distinct_points():
    s1 = make_prescription(QQ, P1, (1, 2), [[1, 0]], [[0, 1]])
    s2 = make_prescription(QQ, P1, (2, 4), [[0, 1]], [[0, 3]])
    with pytest.raises(DiagonalViolation):
        compile_jets(QQ, P1, (3,), [s1, s2])


@pytest.mark.parametrize(
    "q, values",
    [
        ([[1, 0]], [[1, 1]]),  # nonzero constant term
        ([[1, 0]], [[0, 1], [0, 1]]),  # too many coordinates
        ([[1, 0, 0]], [[0, 1]]),  # wrong base point shape
        ([[1, 0], [1, 0]], [[0, 1]]),  # wrong number of factors
    ],
)
def test_invalid_prescriptions(q, values):
    with pytest.raises(InvalidDatum):
        make_prescription(QQ, P1, (1, 0), q, values)
