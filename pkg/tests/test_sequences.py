import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from adamslab.radial_core import adams_beta, make_log_grid, radial_laplacian
from adamslab.sequences import (
    Piece,
    PiecewiseRadial,
    cc_sharpness_family,
    collar_polynomial,
    moser_adams_xi,
    smoothing_polynomial,
    theta_bound,
    truncated_log_profile,
    xi_closed_form,
)

BETA = adams_beta(4)
OMEGA = 2 * math.pi**2


def _sympy_quintic(conditions):
    x = sp.symbols("x")
    c = sp.symbols("c0:6")
    q = sum(ci * x**i for i, ci in enumerate(c))
    eqs = [sp.diff(q, x, order).subs(x, at) - value for at, order, value in conditions]
    sol = sp.solve(eqs, c)
    return [float(sol[ci]) for ci in c]


def test_collar_polynomial_conditions():
    expected = _sympy_quintic([(0, 0, 0), (0, 1, -1), (0, 2, 1), (1, 0, 0), (1, 1, 0), (1, 2, 0)])
    assert np.allclose(collar_polynomial().coef, expected, rtol=1e-13, atol=1e-13)


def test_smoothing_polynomial_conditions():
    expected = _sympy_quintic([(0, 0, 0), (0, 1, 0), (0, 2, 0), (1, 0, 1), (1, 1, 1), (1, 2, 0)])
    assert np.allclose(smoothing_polynomial().coef, expected, rtol=1e-13, atol=1e-13)


# ---------------------------------------------------------------------------
# concentrating sequence


@pytest.mark.parametrize("n", [4, 5, 6])
@pytest.mark.parametrize("big_l", [2.0, math.log(1e3), 60.0, 1e4])
def test_sequence_junction_and_center(n, big_l):
    beta = adams_beta(n)
    xi = moser_adams_xi(n=n, log_k=big_l)
    head = (big_l / beta) ** (1 - 2 / n)
    inner, middle = xi.pieces[0], xi.pieces[1]
    at = np.array([-big_l / n])
    assert inner.value(at)[0] == pytest.approx(head, rel=1e-13)
    assert middle.value(at)[0] == pytest.approx(head, rel=1e-13)
    center = head + n * beta ** (2 / n - 1) / (2 * big_l ** (2 / n))
    deep = np.array([-big_l / n - 40.0])  # the disc radius e^{-L/n} can underflow
    assert inner.value(deep)[0] == pytest.approx(center, rel=1e-13)
    if big_l < 100:
        assert xi(np.array([1e-300]))[0] == pytest.approx(center, rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(big_l=st.floats(1.01, 1e6), n=st.integers(4, 7))
def test_sequence_is_continuous(big_l, n):
    xi = moser_adams_xi(n=n, log_k=big_l)
    size = max(1.0, (big_l / adams_beta(n)) ** (1 - 2 / n))
    assert xi.junction_mismatch() <= 1e-12 * size


@settings(max_examples=60, deadline=None)
@given(big_l=st.floats(1.01, 2000.0), n=st.integers(4, 7))
def test_sequence_is_continuously_differentiable(big_l, n):
    # the slope at the inner junction is of order e^{L/n}, so compare relatively
    xi = moser_adams_xi(n=n, log_k=big_l)
    slope_scale = abs(float(xi.pieces[1].deriv(np.array([-big_l / n]))[0]))
    assert xi.derivative_mismatch() <= 1e-12 * max(1.0, slope_scale)


def test_collar_joins_twice_differentiably():
    xi = moser_adams_xi(1e6, 4)
    middle, collar = xi.pieces[1], xi.pieces[2]
    at = np.array([0.0])
    for attr in ("value", "deriv", "lap"):
        assert getattr(middle, attr)(at)[0] == pytest.approx(getattr(collar, attr)(at)[0], rel=1e-13, abs=1e-15)
    edge = np.array([math.log(2.0)])
    for attr in ("value", "deriv", "lap"):
        assert abs(getattr(collar, attr)(edge)[0]) <= 1e-14


def test_piece_laplacians_match_finite_differences():
    xi = moser_adams_xi(1e4, 4)
    for lo, hi in [(1e-3, 0.09), (0.11, 0.95), (1.02, 1.98)]:
        grid = make_log_grid(4, lo, hi, 400)
        fd = radial_laplacian(grid.function(xi(grid.nodes))).values
        exact = xi.lap_at(grid.nodes)
        assert np.allclose(fd[2:-2], exact[2:-2], rtol=1e-7, atol=1e-9 * np.max(np.abs(exact)))


@settings(max_examples=40, deadline=None)
@given(big_l=st.floats(1.5, 1e6), t=st.sampled_from([1.2, 1.5, 2.0]))
def test_closed_form_matches_quadrature(big_l, t):
    xi = moser_adams_xi(n=4, log_k=big_l)
    quad = PiecewiseRadial(4, xi.pieces).lap_norm_fn(t) ** t
    assert quad == pytest.approx(xi_closed_form(big_l, 4, t)["total"], rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(big_l=st.floats(1.5, 2500.0), t=st.floats(1.1, 3.0))
def test_closed_norm_matches_quadrature_any_exponent(big_l, t):
    # above t = n/2 the norm grows like e^{(2/n - 1/t) L}
    xi = moser_adams_xi(n=4, log_k=big_l)
    quad = PiecewiseRadial(4, xi.pieces).lap_norm_fn(t)
    assert quad == pytest.approx(xi.lap_norm_fn(t), rel=1e-11)


@pytest.mark.parametrize("n", [5, 6])
def test_closed_form_other_dimensions(n):
    big_l = 25.0
    xi = moser_adams_xi(n=n, log_k=big_l)
    for t in (1.5, n / 2):
        quad = PiecewiseRadial(n, xi.pieces).lap_norm_fn(t) ** t
        assert quad == pytest.approx(xi_closed_form(big_l, n, t)["total"], rel=1e-9)


def test_middle_annulus_is_exactly_one():
    for big_l in (3.0, 50.0, 1e5):
        assert xi_closed_form(big_l, 4, 2.0)["annulus"] == pytest.approx(1.0, rel=1e-14)
        assert xi_closed_form(big_l, 4, 2.0)["disc"] == pytest.approx(4.0 / big_l, rel=1e-14)


def test_full_norm_tends_to_one():
    p = 1.5
    values = []
    for big_l in (1e1, 1e2, 1e3, 1e4, 1e6):
        xi = moser_adams_xi(n=4, log_k=big_l)
        values.append(xi.lap_norm_fn(2.0) ** 2 + xi.lap_norm_fn(p) ** 2)
    assert np.all(np.diff(values) < 0)
    assert values[-1] == pytest.approx(1.0, abs=2e-3)


def test_collar_shrinks_with_k():
    r = np.linspace(1.0, 2.0, 401)
    sizes, laps = [], []
    for big_l in (5.0, 50.0, 500.0, 5000.0):
        xi = moser_adams_xi(n=4, log_k=big_l)
        sizes.append(np.max(np.abs(xi(r))))
        laps.append(np.max(np.abs(xi.lap_at(r))))
    assert np.all(np.diff(sizes) < 0) and np.all(np.diff(laps) < 0)
    # both scale like (ln k)**(-2/n)
    assert sizes[-1] / sizes[0] == pytest.approx((5000.0 / 5.0) ** -0.5, rel=1e-10)


def test_sequence_rejects_bad_input():
    with pytest.raises(ValueError):
        moser_adams_xi(2.0, 4)
    with pytest.raises(ValueError):
        moser_adams_xi(10.0, 4, log_k=2.0)
    with pytest.raises(ValueError):
        moser_adams_xi(10.0, 3)
    with pytest.raises(ValueError):
        moser_adams_xi(n=4, log_k=0.9)


def test_on_grid_and_dilation():
    xi = moser_adams_xi(1e3, 4)
    grid = make_log_grid(4, 1e-4, 3.0, 512)
    sampled = xi.on_grid(grid)
    assert np.array_equal(sampled.values, xi(grid.nodes))
    assert np.all(sampled.values[grid.nodes > 2.0] == 0.0)
    w = xi.dilate(1.7)
    r = np.geomspace(1e-3, 1.5, 50)
    assert np.allclose(w(r), xi(1.7 * r), rtol=1e-14)
    assert np.allclose(w.lap_at(r), 1.7**2 * xi.lap_at(1.7 * r), rtol=1e-13)
    plain = PiecewiseRadial(4, w.pieces)
    for t in (1.5, 2.0):
        assert plain.lap_norm_fn(t) == pytest.approx(w.lap_norm_fn(t), rel=1e-10)


def test_piecewise_construction_checks():
    zero = lambda x: np.zeros_like(x)
    with pytest.raises(ValueError):
        PiecewiseRadial(4, [Piece(-1.0, 0.0, zero, zero, zero)])
    with pytest.raises(ValueError):
        PiecewiseRadial(4, [Piece(-math.inf, -1.0, zero, zero, zero), Piece(-0.5, 0.0, zero, zero, zero)])


# ---------------------------------------------------------------------------
# truncated logarithm


@settings(max_examples=40, deadline=None)
@given(r_cut=st.floats(1e-8, 0.5), eps=st.floats(0.01, 0.49))
def test_truncated_log_shape(r_cut, eps):
    v = truncated_log_profile(r_cut, eps, 4)
    inside = np.geomspace(r_cut * 1e-6, r_cut, 20)
    assert np.all(v(inside) == 1.0)
    assert v(np.array([1.0]))[0] == pytest.approx(0.0, abs=1e-15)
    assert v.junction_mismatch() <= 1e-12
    assert v.derivative_mismatch() <= 1e-12 / r_cut


def test_truncated_log_middle_is_exact_logarithm():
    r_cut, eps = 1e-4, 0.2
    v = truncated_log_profile(r_cut, eps, 4)
    big_l = math.log(1 / r_cut)
    s = np.geomspace(r_cut ** (1 - eps) * 1.01, r_cut**eps * 0.99, 30)
    assert np.allclose(v(s), np.log(1 / s) / big_l, rtol=1e-13)


def test_normalized_variant():
    r_cut = 1e-3
    a = truncated_log_profile(r_cut, 0.1, 4)
    b = truncated_log_profile(r_cut, 0.1, 4, normalized=True)
    s = np.geomspace(1e-4, 0.9, 20)
    assert np.allclose(b(s), math.log(1 / r_cut) ** 0.5 * a(s), rtol=1e-14)


def test_theta_within_explicit_bound():
    v = truncated_log_profile(1e-3, 0.1, 4, normalized=True)
    # ||Lap v||_2**2 = omega**(-1) (2 omega)**2 theta in dimension four
    theta = v.lap_norm_fn(2.0) ** 2 / (4 * OMEGA)
    assert 0 < theta <= theta_bound(1e-3, 0.1, 4)


@settings(max_examples=30, deadline=None)
@given(log_r=st.floats(2.0, 200.0), eps=st.floats(0.02, 0.45))
def test_theta_bound_holds_broadly(log_r, eps):
    v = truncated_log_profile(math.exp(-log_r), eps, 4, normalized=True)
    theta = v.lap_norm_fn(2.0) ** 2 / (4 * OMEGA)
    assert theta <= theta_bound(math.exp(-log_r), eps, 4) * (1 + 1e-12)


def test_truncated_log_rejects_bad_input():
    with pytest.raises(ValueError):
        truncated_log_profile(1.0, 0.1, 4)
    with pytest.raises(ValueError):
        truncated_log_profile(0.1, 0.5, 4)
    with pytest.raises(ValueError):
        truncated_log_profile(0.1, 0.1, 3)


# ---------------------------------------------------------------------------
# concentration family


def test_supports_are_disjoint():
    u, _ = cc_sharpness_family(1e6, 0.5)
    xi = moser_adams_xi(1e6, 4)
    r = np.geomspace(1e-5, 4.0, 5000)
    assert np.all(u.lap_at(r) * xi.lap_at(r) == 0.0)


def _e_norm(profile, p=1.5):
    return (profile.lap_norm_fn(2.0) ** 2 + profile.lap_norm_fn(p) ** 2) ** 0.5


@pytest.mark.parametrize("delta", [0.1, 0.5, 0.9])
def test_family_norms(delta):
    u, u_k = cc_sharpness_family(1e4, delta)
    assert _e_norm(u) == pytest.approx(delta, rel=1e-12)
    assert _e_norm(u_k) == pytest.approx(1.0, rel=1e-12)


def test_unnormalized_norm_tends_to_one():
    sizes = [cc_sharpness_family(k, 0.5)[1].params["v_norm"] for k in np.geomspace(1e3, 1e9, 7)]
    assert np.all(np.diff(sizes) < 0)
    assert sizes[-1] - 1 < sizes[0] - 1


def test_disjoint_support_identity():
    delta = 0.5
    u, _ = cc_sharpness_family(1e3, delta)
    defects = []
    for k in np.geomspace(1e3, 1e9, 7):
        _, u_k = cc_sharpness_family(k, delta)
        v_k = u_k * u_k.params["v_norm"]
        big_l = math.log(k)
        defect = v_k.lap_norm_fn(2.0) ** 2 - u.lap_norm_fn(2.0) ** 2 - (1 - delta**2)
        closed = (1 - delta**2) * (xi_closed_form(big_l, 4, 2.0)["total"] - 1)
        assert defect == pytest.approx(closed, rel=1e-8)
        defects.append(defect)
    # falls like 1/ln k: a third of its first value across k = 1e3 .. 1e9
    assert np.all(np.diff(defects) < 0)
    assert defects[-1] / defects[0] == pytest.approx(1 / 3, rel=1e-6)


def test_family_rejects_bad_delta():
    for delta in (0.0, 1.0, -0.2):
        with pytest.raises(ValueError):
            cc_sharpness_family(1e3, delta)
