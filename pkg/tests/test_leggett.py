import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from leggett_nlhv.errors import DomainError, InvalidQuadratureError
from leggett_nlhv.leggett import (
    CorrelationBounds,
    QuadratureSpec,
    analyzer_pair,
    bounds_by_integration,
    bounds_closed_form,
    max_violation,
    quantum_prediction,
    sphere_average_abs_dot,
    sphere_mean_abs_dot,
    violation_at,
    violation_ranges,
)
from leggett_nlhv.poincare import random_direction
from leggett_nlhv.twophoton import correlation, odd_state

PHI_STAR = 2 * math.asin(0.25)
PRODUCT = QuadratureSpec("product", order=200)


def adaptive_sphere_mean(n):
    """(1/4pi) int |u.n| dOmega with scipy's adaptive cubature in the fixed xyz frame."""

    def f(theta, phi):
        u = (math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
        return abs(u[0] * n[0] + u[1] * n[1] + u[2] * n[2]) * math.sin(theta)

    val, _ = integrate.dblquad(f, 0, 2 * math.pi, 0, math.pi, epsabs=1e-10, epsrel=1e-10)
    return val / (4 * math.pi)


def plain_mc_sphere_mean(n, samples, seed):
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1, 1, samples)
    az = rng.uniform(0, 2 * math.pi, samples)
    s = np.sqrt(1 - z * z)
    u = np.stack([s * np.cos(az), s * np.sin(az), z], axis=1)
    f = np.abs(u @ np.asarray(n, float))
    return f.mean(), f.std(ddof=1) / math.sqrt(samples)


@pytest.mark.parametrize("n, expected", [((0, 0, 1), 0.5), ((0, 0, 0), 0.0), ((0, 0, 2), 1.0)])
def test_sphere_mean_examples(n, expected):
    assert sphere_mean_abs_dot(n, PRODUCT) == pytest.approx(expected, abs=1e-12)


def test_sphere_mean_adaptive_oracle():
    assert adaptive_sphere_mean((0, 0, 1)) == pytest.approx(0.5, abs=1e-8)
    n = (0.3, -1.1, 0.7)
    assert sphere_mean_abs_dot(n) == pytest.approx(adaptive_sphere_mean(n), abs=1e-6)


def test_sphere_mean_mc_oracle():
    m, se = plain_mc_sphere_mean((0, 0, 1), 200_000, 5)
    assert abs(m - 0.5) < 4 * se


def test_sphere_mean_half_length(rng=np.random.default_rng(3)):
    for _ in range(50):
        n = np.asarray(random_direction(rng)) * rng.uniform(0, 3)
        assert abs(sphere_mean_abs_dot(n) - np.linalg.norm(n) / 2) < 1e-6


def test_product_rule_small_order_still_exact_on_aligned_axis():
    # |t| is linear on each half once the kink sits on the cell boundary
    assert sphere_mean_abs_dot((1, 2, 2), QuadratureSpec(order=2)) == pytest.approx(1.5, abs=1e-12)


def test_monte_carlo_sphere_mean_within_three_sigma():
    val, err = sphere_average_abs_dot((0.2, 0.4, -0.9), QuadratureSpec("monte-carlo", samples=10**5, seed=11))
    assert err > 0
    assert abs(val - np.linalg.norm((0.2, 0.4, -0.9)) / 2) < 3 * err


def test_monte_carlo_is_seeded():
    q = QuadratureSpec("monte-carlo", samples=1000, seed=9)
    assert sphere_mean_abs_dot((0, 1, 0), q) == sphere_mean_abs_dot((0, 1, 0), q)
    assert sphere_mean_abs_dot((0, 1, 0), q) != sphere_mean_abs_dot((0, 1, 0), QuadratureSpec("monte-carlo", samples=1000, seed=10))


@pytest.mark.parametrize(
    "kwargs",
    [dict(method="simpson"), dict(order=1), dict(order=2.5), dict(samples=0), dict(seed=-1), dict(seed=2**64)],
)
def test_quadrature_spec_validation(kwargs):
    with pytest.raises(InvalidQuadratureError):
        QuadratureSpec(**kwargs)


def test_bounds_by_integration_examples():
    a = (1.0, 0.0, 0.0)
    b = bounds_by_integration(a, a)
    assert (b.lower, b.upper) == pytest.approx((0, 1), abs=1e-12)
    b = bounds_by_integration(a, (-1.0, 0.0, 0.0))
    assert (b.lower, b.upper) == pytest.approx((-1, 0), abs=1e-12)
    b = bounds_by_integration(a, (0.0, 1.0, 0.0))
    h = math.sqrt(2) / 2
    assert (b.lower, b.upper) == pytest.approx((-1 + h, 1 - h), abs=1e-12)
    assert b.upper == pytest.approx(0.29289, abs=1e-5)


def test_bounds_closed_form_examples():
    assert bounds_closed_form(0.0) == CorrelationBounds(0.0, 1.0)
    assert bounds_closed_form(math.pi) == CorrelationBounds(-1.0, 0.0)
    b = bounds_closed_form(math.pi / 2)
    assert (b.lower, b.upper) == pytest.approx((-1 + math.sqrt(2) / 2, 1 - math.sqrt(2) / 2), abs=1e-15)
    assert bounds_closed_form(90, degrees=True) == b


@pytest.mark.parametrize("bad", [-0.01, math.pi + 0.01, math.nan])
def test_bounds_closed_form_domain(bad):
    with pytest.raises(DomainError):
        bounds_closed_form(bad)
    with pytest.raises(DomainError):
        quantum_prediction(bad)
    with pytest.raises(DomainError):
        violation_at(bad)


def test_integration_matches_closed_form_on_fine_grid():
    for phi in np.radians(np.linspace(0, 180, 1801)):
        q = bounds_by_integration(*analyzer_pair(phi), PRODUCT)
        c = bounds_closed_form(phi)
        assert abs(q.lower - c.lower) < 1e-6 and abs(q.upper - c.upper) < 1e-6


def test_bounds_rotation_invariant(rng=np.random.default_rng(8)):
    from scipy.spatial.transform import Rotation

    a, b = np.asarray(random_direction(rng)), np.asarray(random_direction(rng))
    ref = bounds_by_integration(a, b)
    for r in Rotation.random(50, random_state=4).as_matrix():
        got = bounds_by_integration(r @ a, r @ b)
        assert abs(got.lower - ref.lower) < 1e-6 and abs(got.upper - ref.upper) < 1e-6


def test_bounds_depend_only_on_angle(rng=np.random.default_rng(9)):
    for _ in range(20):
        a, b = np.asarray(random_direction(rng)), np.asarray(random_direction(rng))
        phi = math.acos(np.clip(a @ b, -1, 1))
        q, c = bounds_by_integration(a, b), bounds_closed_form(phi)
        assert abs(q.lower - c.lower) < 1e-6 and abs(q.upper - c.upper) < 1e-6


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, math.pi))
def test_bounds_shape(phi):
    b = bounds_closed_form(phi)
    assert -1 <= b.lower <= 0 <= b.upper <= 1
    assert b.lower <= b.upper
    assert abs(b.lower + bounds_closed_form(math.pi - phi).upper) <= 1e-15


@pytest.mark.parametrize("deg, expected", [(0, 1.0), (60, 0.5), (90, 0.0)])
def test_quantum_prediction(deg, expected):
    assert quantum_prediction(deg, degrees=True) == pytest.approx(expected, abs=1e-15)


def test_quantum_prediction_matches_two_photon_correlation():
    for phi in np.radians(np.linspace(0, 180, 37)):
        assert abs(quantum_prediction(phi) + correlation(odd_state(), *analyzer_pair(phi))) < 1e-12


def test_violation_at_examples():
    assert violation_at(90, degrees=True).violation == 0
    assert violation_at(PHI_STAR).violation == pytest.approx(0.125, abs=1e-15)
    assert violation_at(math.pi - PHI_STAR).violation == pytest.approx(0.125, abs=1e-15)
    assert violation_at(59.9, degrees=True).violation > 0
    assert violation_at(60.1, degrees=True).violation == 0


@settings(max_examples=300, deadline=None)
@given(st.floats(0.0, math.pi))
def test_violation_report_formula(phi):
    r = violation_at(phi)
    assert r.violation == max(0.0, r.quantum_value - r.bounds.upper, r.bounds.lower - r.quantum_value)
    assert r.violation >= 0


def test_no_violation_between_60_and_120():
    for d in np.arange(601, 1200) / 10:
        assert violation_at(d, degrees=True).violation == 0
    # the endpoints are exact only up to the rounding of cos(60 deg)
    for d in (60.0, 120.0):
        assert violation_at(d, degrees=True).violation <= 1e-15


def test_violation_at_boundaries_is_zero():
    assert violation_at(0.0).violation == 0
    assert violation_at(math.pi).violation == 0


def test_violation_ranges():
    tol = math.radians(1e-6)
    ranges = violation_ranges(tol)
    assert len(ranges) == 2
    (a0, a1), (b0, b1) = [tuple(map(math.degrees, r)) for r in ranges]
    assert a0 == 0.0 and b1 == 180.0
    assert abs(a1 - 60) < 1e-6 and abs(b0 - 120) < 1e-6


def test_violation_ranges_validates_tolerance():
    with pytest.raises(ValueError):
        violation_ranges(0)


def test_max_violation_against_grid_search():
    mv = max_violation(1e-12)
    assert abs(mv.v_star - 0.125) < 1e-9
    assert abs(mv.phi_star - PHI_STAR) < 1e-6
    assert abs(mv.phi_star_mirror - (math.pi - PHI_STAR)) < 1e-6
    # independent oracle: dense scan at 1e-4 degree resolution
    deg = np.arange(0, 600001) * 1e-4
    v = np.cos(np.radians(deg)) - 1 + np.sin(np.radians(deg) / 2)
    assert abs(math.degrees(mv.phi_star) - deg[v.argmax()]) <= 1e-4
    assert abs(v.max() - mv.v_star) < 1e-9
    assert violation_at(mv.phi_star_mirror).violation == pytest.approx(mv.v_star, abs=1e-12)


def test_paper_quoted_maximizer_is_not_the_stationary_point():
    # 28.8 deg is documented alongside; it sits measurably below the optimum
    assert violation_at(28.8, degrees=True).violation < 0.125 - 1e-6


def test_monte_carlo_bounds_on_fine_grid():
    from leggett_nlhv.verify import mc_worst_sigma

    # default spec (10^6 directions, seed 0) over 1801 angles; common directions for all angles
    assert mc_worst_sigma(samples=10**6, seed=0, points=1801) <= 3.0
