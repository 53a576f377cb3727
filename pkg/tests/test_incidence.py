import pytest
from hypothesis import given, settings, strategies as st

from conftest import FP
from ratcurves.errors import ClassMismatch, DiagonalViolation, GenericSampleNotFound, InvalidDatum, NonLinearCondition, TowerError
from ratcurves.exact import QQ, ExactMatrix, row_space_rref, stream
from ratcurves.geometry import CurveClass, build_tower, check_main_hypotheses, expected_fiber_dim
from ratcurves.incidence import (
    compile_incidence,
    compile_infinitesimal,
    data_multiplicities,
    make_datum,
    point_rows,
    random_incidence_data,
    sample_fiber_member,
    sigma_fiber,
)
from ratcurves.morphism import MorphismP1, contact_order


def point(*coords):
    return {"kind": "linear", "point": [list(coords)]}


def tower(ambient, centers, field=QQ):
    return build_tower({"ambient": ambient, "centers": centers}, field)


P2_POINT = [point(1, 0, 0)]
P2_NEAR = P2_POINT + [{"kind": "infinitesimal", "parent": 0, "chart": 0, "direction": [2]}]


def row_space(system):
    return row_space_rref(system.field, [r.coeffs for r in system.rows], system.ncols)


# --- compilation ---


def test_simple_point_datum(field):
    t = tower([2], P2_POINT, field)
    s = compile_incidence(t, (1,), [make_datum(field, (1, 0), 0)])
    assert len(s.rows) == 2
    assert s.kernel_dim() == 4


def test_double_point_datum(field):
    t = tower([2], P2_POINT, field)
    s = compile_incidence(t, (2,), [make_datum(field, (0, 1), 0, mult=2)])
    assert len(s.rows) == 4
    assert s.kernel_dim() == 5


def test_no_data_gives_everything(field):
    s = compile_incidence(tower([1, 2], [], field), (2, 1), [])
    assert s.rows == ()
    assert s.kernel_dim() == 3 * 2 + 2 * 3


def test_rows_vanish_on_a_curve_through_the_point():
    # the conic (s^2, st, t^2) passes through [1:0:0] at (1, 0)
    t = tower([2], P2_POINT)
    s = compile_incidence(t, (2,), [make_datum(QQ, (1, 0), 0)])
    f = MorphismP1.from_coefficients(QQ, [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]])
    assert s.contains(f.to_vector())


def test_infinitely_near_point(field):
    t = tower([2], P2_NEAR, field)
    s = compile_incidence(t, (2,), [make_datum(field, (1, 0), 1)])
    assert len(s.rows) == 3
    assert s.kernel_dim() == 6
    # (s^2, st, 2st + t^2) has tangent direction y2/y1 = 2 at [1:0:0]
    f = MorphismP1.from_coefficients(field, [[[1, 0, 0], [0, 1, 0], [0, 2, 1]]])
    assert s.contains(f.to_vector())
    g = MorphismP1.from_coefficients(field, [[[1, 0, 0], [0, 1, 0], [0, 3, 1]]])
    assert not s.contains(g.to_vector())


def test_depth_zero_infinitesimal_rows_equal_point_rows():
    t = tower([2], P2_NEAR)
    d = make_datum(QQ, (1, 5), 0)
    inf = compile_incidence(t, (3,), []).extend(compile_infinitesimal(t, (3,), d))
    pts = compile_incidence(t, (3,), []).extend(point_rows(t, (3,), t.root_point(0), d.p, 1, "x"))
    assert row_space(inf) == row_space(pts)


def test_explicit_path_must_match_tower():
    t = tower([2], P2_NEAR)
    d = make_datum(QQ, (1, 0), 1)
    assert compile_infinitesimal(t, (2,), d, path=[(0, (2,))])
    with pytest.raises(TowerError):
        compile_infinitesimal(t, (2,), d, path=[(0, (3,))])
    with pytest.raises(TowerError):
        compile_infinitesimal(t, (2,), d, path=[(0, (2,)), (0, (0,))])


def test_cross_factor_direction_is_not_linear():
    centers = [
        {"kind": "linear", "point": [[1, 0], [1, 0]]},
        {"kind": "infinitesimal", "parent": 0, "chart": 0, "direction": [1]},
    ]
    t = tower([1, 1], centers)
    with pytest.raises(NonLinearCondition):
        compile_incidence(t, (1, 1), [make_datum(QQ, (1, 0), 1)])


def test_deeper_step_with_direction_is_not_linear():
    centers = P2_NEAR + [{"kind": "infinitesimal", "parent": 1, "chart": 0, "direction": [1]}]
    t = tower([2], centers)
    with pytest.raises(NonLinearCondition):
        compile_incidence(t, (3,), [make_datum(QQ, (1, 0), 2)])


def test_multiple_infinitesimal_datum_is_rejected():
    t = tower([2], P2_NEAR)
    with pytest.raises(InvalidDatum):
        compile_incidence(t, (2,), [make_datum(QQ, (1, 0), 1, mult=2)])


def test_target_must_lie_on_center():
    line = {"kind": "linear", "equations": [[[0, 0, 1]]]}
    t = tower([2], [line])
    with pytest.raises(InvalidDatum):
        compile_incidence(t, (1,), [make_datum(QQ, (1, 0), 0)])
    with pytest.raises(InvalidDatum):
        compile_incidence(t, (1,), [make_datum(QQ, (1, 0), 0, q=[[0, 0, 1]])])
    s = compile_incidence(t, (1,), [make_datum(QQ, (1, 0), 0, q=[[1, 1, 0]])])
    assert s.kernel_dim() == 4


def test_data_multiplicities_count_chains():
    t = tower([2], P2_NEAR)
    data = [make_datum(QQ, (1, 0), 1), make_datum(QQ, (1, 1), 0)]
    assert data_multiplicities(t, data) == (2, 1)


# --- sigma fibers ---


def test_cubic_through_two_points(field):
    t = tower([2], P2_POINT, field)
    data = [make_datum(field, (1, 0), 0), make_datum(field, (1, 1), 0)]
    fib = sigma_fiber(t, CurveClass((3,), (2,)), data)
    assert fib.projective_dim == 7
    assert fib.matches_expected
    assert fib.splitting == ((3, 1, 1),)
    assert fib.splitting_bounds_ok
    assert not fib.degenerate


def test_lines_through_a_point(field):
    t = tower([2], P2_POINT, field)
    fib = sigma_fiber(t, CurveClass((1,), (1,)), [make_datum(field, (0, 1), 0)])
    assert fib.splitting == ((1, 0, 0),)
    assert fib.projective_dim == 3


def test_line_hitting_one_point_twice_is_degenerate(field):
    t = tower([2], P2_POINT, field)
    data = [make_datum(field, (1, 0), 0), make_datum(field, (0, 1), 0)]
    fib = sigma_fiber(t, CurveClass((1,), (2,)), data)
    assert fib.degenerate
    assert fib.projective_dim == 1
    assert fib.expected_dim == 1


def test_class_mismatch():
    t = tower([2], P2_POINT)
    with pytest.raises(ClassMismatch):
        sigma_fiber(t, CurveClass((3,), (2,)), [make_datum(QQ, (1, 0), 0)])


def test_repeated_domain_point():
    t = tower([2], [point(1, 0, 0), point(0, 1, 0)])
    data = [make_datum(QQ, (1, 0), 0), make_datum(QQ, (2, 0), 1)]
    with pytest.raises(DiagonalViolation):
        sigma_fiber(t, CurveClass((3,), (1, 1)), data)


def test_empty_fiber_is_reported():
    t = tower([2], P2_POINT)
    data = [make_datum(QQ, (1, u), 0) for u in range(4)]
    fib = sigma_fiber(t, CurveClass((1,), (4,)), data)
    assert fib.expected_empty
    assert fib.projective_dim == 1  # the constant maps to the point survive
    assert fib.degenerate


# --- sampling ---


def test_random_data_realize_the_class():
    t = tower([2], P2_NEAR, FP)
    beta = CurveClass((4,), (3, 1))
    data = random_incidence_data(t, beta, stream(42, "data"))
    assert data_multiplicities(t, data) == beta.e_total
    assert sorted(d.center for d in data) == [0, 0, 1]


def test_sampling_cubics_through_two_points():
    t = tower([2], P2_POINT, FP)
    beta = CurveClass((3,), (2,))
    found = 0
    for i in range(100):
        rng = stream(42, "cubic-sample", i)
        data = random_incidence_data(t, beta, rng)
        try:
            s = sample_fiber_member(sigma_fiber(t, beta, data), t, beta, data, rng)
        except GenericSampleNotFound:
            continue
        found += 1
        assert s.recovered == beta
        assert [c.order for c in s.contacts] == [1, 1]
    assert found >= 99


def test_sampling_degenerate_fiber_fails():
    t = tower([2], P2_POINT, FP)
    data = [make_datum(FP, (1, 0), 0), make_datum(FP, (0, 1), 0)]
    beta = CurveClass((1,), (2,))
    with pytest.raises(GenericSampleNotFound):
        sample_fiber_member(sigma_fiber(t, beta, data), t, beta, data, stream(42, "degenerate"))


def test_sampling_without_centers():
    t = tower([1], [], FP)
    beta = CurveClass((1,), ())
    ok = 0
    for i in range(100):
        try:
            s = sample_fiber_member(sigma_fiber(t, beta, []), t, beta, [], stream(42, "empty", i))
        except GenericSampleNotFound:
            continue
        ok += s.splitting == ((2,),)
    assert ok >= 99


def test_pencil_of_members_stays_in_fiber():
    t = tower([2], P2_NEAR, FP)
    beta = CurveClass((4,), (2, 1))
    rng = stream(42, "pencil")
    data = random_incidence_data(t, beta, rng)
    system = compile_incidence(t, beta.degrees, data)
    basis = system.kernel_basis()
    for _ in range(20):
        a = system.combine(basis, [FP.random(rng) for _ in basis])
        b = system.combine(basis, [FP.random(rng) for _ in basis])
        lam, mu = FP.random(rng), FP.random(rng)
        assert system.contains([FP.reduce(lam * x + mu * y) for x, y in zip(a, b)])


def test_sampled_contacts_match_data():
    t = tower([2], P2_NEAR, FP)
    beta = CurveClass((4,), (2, 1))
    rng = stream(42, "contacts")
    data = random_incidence_data(t, beta, rng)
    s = sample_fiber_member(sigma_fiber(t, beta, data), t, beta, data, rng)
    for d in data:
        for i in t.chain(d.center):
            assert contact_order(s.morphism, d.p, i, t).order == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(0, 3), st.integers(0, 10**6))
def test_fiber_dimension_law(d, e, seed):
    """Under the hypotheses, random data cut the expected dimension."""
    t = tower([2], P2_POINT, FP)
    beta = CurveClass((d,), (e,))
    if not check_main_hypotheses(t, beta).verdict:
        return
    data = random_incidence_data(t, beta, stream(seed, "law"))
    fib = sigma_fiber(t, beta, data)
    assert fib.projective_dim == expected_fiber_dim(t, beta)
    assert fib.splitting_bounds_ok


def test_rank_over_q_and_fp_agree_on_small_example():
    t_q, t_p = tower([2], P2_POINT, QQ), tower([2], P2_POINT, FP)
    pts = [(1, 2), (1, 7)]
    sq = compile_incidence(t_q, (3,), [make_datum(QQ, p, 0) for p in pts])
    sp = compile_incidence(t_p, (3,), [make_datum(FP, p, 0) for p in pts])
    assert sq.rank() == sp.rank() == ExactMatrix.from_rows(QQ, [r.coeffs for r in sq.rows], sq.ncols).rank()
