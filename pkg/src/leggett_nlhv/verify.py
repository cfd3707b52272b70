"""Self-check suites run by ``leggett verify``.

Each check measures a worst-case error over a seeded batch of random
instances and compares it against a tolerance.  Passing ``tol`` overrides
every default tolerance (the Monte Carlo 3-sigma check is statistical and
keeps its own threshold).
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Optional

import numpy as np

from . import leggett as lg
from . import poincare as pc
from . import twophoton as tp

STATE_TOL = 1e-12
INTEGRAL_TOL = 1e-6
MC_SIGMAS = 3.0
# absolute float floor for MC comparisons where the standard error itself underflows
MC_FLOAT_FLOOR = 1e-15
SUITES = ("states", "integrals")


class CheckResult(NamedTuple):
    suite: str
    name: str
    error: float
    tol: float
    passed: bool

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.suite}/{self.name}  error={self.error:.3e}  tol={self.tol:.1e}"


def _dirs(rng, k):
    return [np.asarray(pc.random_direction(rng)) for _ in range(k)]


def _max(values) -> float:
    return float(max(values, default=0.0))


def _random_rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


# -- states ------------------------------------------------------------------


def _eigenrelation(rng):
    errs = []
    for u in _dirs(rng, 100):
        psi = pc.state_from_bloch(u).amplitudes
        errs.append(np.linalg.norm(pc.pauli_dot(u) @ psi - psi))
    return _max(errs)


def _expectation_identity(rng):
    errs = []
    for a, b in zip(_dirs(rng, 100), _dirs(rng, 100)):
        errs.append(abs(pc.expectation(pc.state_from_bloch(a), b) - a @ b))
    return _max(errs)


def _bloch_round_trip(rng):
    return _max(
        np.linalg.norm(np.asarray(pc.bloch_from_state(pc.state_from_bloch(u))) - u) for u in _dirs(rng, 100)
    )


def _normalization(rng):
    errs = []
    for _ in range(100):
        psi = pc.random_state(rng)
        for out in (pc.state_from_bloch(pc.random_direction(rng)), pc.parity_apply(psi), psi.canonical()):
            errs.append(abs(out.norm() - 1.0))
    return _max(errs)


def _parity_negation(rng):
    errs = []
    for _ in range(100):
        psi = pc.random_state(rng)
        v = np.asarray(pc.bloch_from_state(psi))
        w = np.asarray(pc.bloch_from_state(pc.parity_apply(psi)))
        errs.append(np.linalg.norm(w + v))
    return _max(errs)


def _parity_twice_projective(rng):
    return _max(abs(abs(pc.parity_squared_phase(pc.random_state(rng))) - 1.0) for _ in range(100))


def _odd_u_independence(rng):
    ref = tp.odd_state()
    return _max(1.0 - ref.fidelity(tp.odd_state_from_u(u)) for u in _dirs(rng, 100))


def _odd_correlation(rng):
    return _max(
        abs(tp.correlation(tp.odd_state(), a, b) + a @ b) for a, b in zip(_dirs(rng, 200), _dirs(rng, 200))
    )


def _even_correlation(rng):
    return _max(
        abs(tp.correlation(tp.even_state(), a, b) - (a @ b - 2 * a[2] * b[2]))
        for a, b in zip(_dirs(rng, 200), _dirs(rng, 200))
    )


def _even_reflection(rng):
    flip = np.array([1.0, 1.0, -1.0])
    return _max(
        abs(tp.correlation(tp.even_state(), a, b) - a @ (b * flip)) for a, b in zip(_dirs(rng, 200), _dirs(rng, 200))
    )


def _projector_consistency(rng):
    errs = []
    for state in (tp.odd_state(), tp.even_state()):
        for a, b in zip(_dirs(rng, 100), _dirs(rng, 100)):
            p = tp.joint_probabilities(state, a, b)
            ma, mb = p.marginals()
            errs += [
                abs(sum(p) - 1.0),
                abs(ma - 0.5),
                abs(mb - 0.5),
                abs(p.correlation() - tp.correlation(state, a, b)),
                max(0.0, -min(p)),
            ]
    return _max(errs)


def _odd_parity_ray(rng):
    s = tp.odd_state()
    return 1.0 - s.fidelity(tp.parity_apply_both(s))


# -- integrals ---------------------------------------------------------------


def _grid_rad(points=181):
    return np.radians(np.linspace(0.0, 180.0, points))


def _quadrature_vs_closed(rng):
    quad = lg.QuadratureSpec("product", order=lg.DEFAULT_ORDER)
    errs = []
    for phi in _grid_rad():
        q = lg.bounds_by_integration(*lg.analyzer_pair(phi), quad)
        c = lg.bounds_closed_form(phi)
        errs += [abs(q.lower - c.lower), abs(q.upper - c.upper)]
    return _max(errs)


def _sphere_mean_length(rng):
    errs = []
    for _ in range(50):
        n = np.asarray(pc.random_direction(rng)) * rng.uniform(0.0, 3.0)
        errs.append(abs(lg.sphere_mean_abs_dot(n) - 0.5 * np.linalg.norm(n)))
    return _max(errs)


def _rotation_invariance(rng):
    errs = []
    for _ in range(50):
        a, b = np.asarray(pc.random_direction(rng)), np.asarray(pc.random_direction(rng))
        r = _random_rotation(rng)
        x, y = lg.bounds_by_integration(a, b), lg.bounds_by_integration(r @ a, r @ b)
        errs += [abs(x.lower - y.lower), abs(x.upper - y.upper)]
    return _max(errs)


def mc_worst_sigma(samples: int = lg.DEFAULT_SAMPLES, seed: int = 0, points: int = 181) -> float:
    """Worst ``|MC - closed| / std_err`` over an angle grid (after a float floor)."""
    quad = lg.QuadratureSpec("monte-carlo", samples=samples, seed=seed)
    worst = 0.0
    for phi in _grid_rad(points):
        m = lg.bounds_by_integration(*lg.analyzer_pair(phi), quad)
        c = lg.bounds_closed_form(phi)
        for got, want, err in ((m.lower, c.lower, m.lower_err), (m.upper, c.upper, m.upper_err)):
            dev = max(0.0, abs(got - want) - MC_FLOAT_FLOOR)
            if dev > 0.0:
                worst = max(worst, dev / err if err > 0.0 else math.inf)
    return worst


def _range_endpoints(rng):
    ends = [math.degrees(x) for r in lg.violation_ranges(1e-12) for x in r]
    if len(ends) != 4:
        return math.inf
    return _max(abs(x - y) for x, y in zip(ends, (0.0, 60.0, 120.0, 180.0)))


def _max_violation(rng):
    mv = lg.max_violation(1e-12)
    return max(abs(mv.v_star - 0.125), abs(mv.phi_star - 2.0 * math.asin(0.25)))


def _no_violation_middle(rng):
    return _max(lg.violation_at(d, degrees=True).violation for d in np.arange(600, 1201) / 10.0)


def _bound_symmetry(rng):
    errs = []
    for phi in _grid_rad(1801):
        errs.append(abs(lg.bounds_closed_form(phi).lower + lg.bounds_closed_form(math.pi - phi).upper))
    return _max(errs)


_CHECKS: dict[str, list[tuple[str, Callable, float]]] = {
    "states": [
        ("eigenrelation", _eigenrelation, STATE_TOL),
        ("expectation_identity", _expectation_identity, STATE_TOL),
        ("bloch_round_trip", _bloch_round_trip, STATE_TOL),
        ("normalization", _normalization, STATE_TOL),
        ("parity_negates_bloch", _parity_negation, STATE_TOL),
        ("parity_twice_same_ray", _parity_twice_projective, STATE_TOL),
        ("odd_state_u_independent", _odd_u_independence, STATE_TOL),
        ("odd_correlation", _odd_correlation, STATE_TOL),
        ("even_correlation", _even_correlation, STATE_TOL),
        ("even_reflection_identity", _even_reflection, STATE_TOL),
        ("projector_probabilities", _projector_consistency, STATE_TOL),
        ("odd_state_parity_ray", _odd_parity_ray, STATE_TOL),
    ],
    "integrals": [
        ("product_quadrature_vs_closed_form", _quadrature_vs_closed, INTEGRAL_TOL),
        ("sphere_mean_half_length", _sphere_mean_length, INTEGRAL_TOL),
        ("rotation_invariance", _rotation_invariance, INTEGRAL_TOL),
        ("violation_range_endpoints_deg", _range_endpoints, INTEGRAL_TOL),
        ("max_violation", _max_violation, INTEGRAL_TOL),
        ("no_violation_60_to_120", _no_violation_middle, INTEGRAL_TOL),
        ("bound_mirror_symmetry", _bound_symmetry, INTEGRAL_TOL),
    ],
}


def run_suite(suite: str = "all", tol: Optional[float] = None, seed: int = 2024) -> list[CheckResult]:
    if suite == "all":
        names = SUITES
    elif suite in SUITES:
        names = (suite,)
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    results = []
    for s in names:
        rng = np.random.default_rng(seed)
        for name, fn, default_tol in _CHECKS[s]:
            t = default_tol if tol is None else tol
            err = float(fn(rng))
            results.append(CheckResult(s, name, err, t, err <= t))
        if s == "integrals":
            worst = mc_worst_sigma()
            results.append(CheckResult(s, "monte_carlo_within_3_sigma", worst, MC_SIGMAS, worst <= MC_SIGMAS))
    return results
