"""Leggett bounds for an antipodal, isotropic source of polarization pairs.

With the pair distribution ``F(u, v) = delta(u + v) / 4 pi`` the bounded
quantity ``-E = P(a, b)`` obeys

    -1 + <|u.(a+b)|> <= -E <= 1 - <|u.(a-b)|>

where ``<.>`` is the average over the unit sphere.  Since ``<|u.n|> = |n|/2``
this reduces to ``-1 + |cos(phi/2)| <= -E(phi) <= 1 - |sin(phi/2)|`` for an
analyzer angle ``phi``.  Everything here reports ``-E``; for the odd-parity
state that is ``cos(phi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal, NamedTuple

import numpy as np
from scipy import optimize

from ._random import check_seed, substream
from .errors import DomainError, InvalidQuadratureError
from .poincare import BlochVector, as_vector, require_unit

# quoted in the source publication; kept for side-by-side display only
PAPER_MAX_VIOLATION_DEG = (28.8, 151.2)
PAPER_VIOLATION_RANGES_DEG = ((0.0, 60.0), (120.0, 180.0))

DEFAULT_ORDER = 200
DEFAULT_SAMPLES = 10**6
_ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class QuadratureSpec:
    """How to average over the unit sphere.

    ``product``: Gauss-Legendre in ``cos(theta)`` split at the equator (the
    kink of ``|u.n|``), uniform in azimuth, polar axis aligned with ``n``.
    ``order`` is the azimuthal node count; each hemisphere gets ``order // 2``
    Legendre nodes.  ``monte-carlo``: ``samples`` isotropic directions drawn
    from a seeded Philox stream; the same directions are reused for every
    ``n`` with the same ``(samples, seed)``.
    """

    method: Literal["product", "monte-carlo"] = "product"
    order: int = DEFAULT_ORDER
    samples: int = DEFAULT_SAMPLES
    seed: int = 0

    def __post_init__(self):
        if self.method not in ("product", "monte-carlo"):
            raise InvalidQuadratureError(f"unknown quadrature method {self.method!r}")
        if int(self.order) != self.order or self.order < 2:
            raise InvalidQuadratureError(f"order must be an integer >= 2, got {self.order!r}")
        if int(self.samples) != self.samples or self.samples < 1:
            raise InvalidQuadratureError(f"samples must be an integer >= 1, got {self.samples!r}")
        try:
            check_seed(self.seed)
        except (TypeError, ValueError) as exc:
            raise InvalidQuadratureError(str(exc)) from None


@dataclass(frozen=True)
class CorrelationBounds:
    """Interval ``[lower, upper]`` for ``-E``; ``*_err`` are Monte Carlo standard errors."""

    lower: float
    upper: float
    lower_err: float = 0.0
    upper_err: float = 0.0

    def signed_excess(self, value: float) -> float:
        """Distance outside the interval, negative (distance to nearest edge) inside."""
        return max(value - self.upper, self.lower - value)

    def violation(self, value: float) -> float:
        return max(0.0, self.signed_excess(value))


@dataclass(frozen=True)
class ViolationReport:
    phi: float
    quantum_value: float
    bounds: CorrelationBounds
    violation: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "violation", self.bounds.violation(self.quantum_value))

    @property
    def phi_deg(self) -> float:
        return math.degrees(self.phi)


class MaxViolation(NamedTuple):
    phi_star: float
    phi_star_mirror: float
    v_star: float


def check_angle(phi: float, degrees: bool = False) -> float:
    """Validate an analyzer angle in [0, pi] (or [0, 180] degrees); returns radians.

    Values a hair outside the range from unit conversion are clamped; anything
    further out raises DomainError rather than being wrapped.
    """
    phi = float(phi)
    if degrees:
        phi = math.radians(phi)
    if not math.isfinite(phi) or phi < -_ANGLE_SLACK or phi > math.pi + _ANGLE_SLACK:
        raise DomainError(f"analyzer angle must lie in [0, pi] rad / [0, 180] deg, got {phi!r} rad")
    return min(max(phi, 0.0), math.pi)


def analyzer_pair(phi: float) -> tuple[BlochVector, BlochVector]:
    """Linear-polarization analyzers (equatorial) at relative angle ``phi``."""
    return BlochVector(1.0, 0.0, 0.0), BlochVector(math.cos(phi), math.sin(phi), 0.0)


# -- sphere averages ---------------------------------------------------------


def _frame(n_hat: np.ndarray) -> np.ndarray:
    """Rows ``e1, e2, n_hat``: a right-handed orthonormal frame around ``n_hat``."""
    helper = np.zeros(3)
    helper[np.argmin(np.abs(n_hat))] = 1.0
    e1 = np.cross(n_hat, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n_hat, e1)
    return np.vstack([e1, e2, n_hat])


@lru_cache(maxsize=8)
def _product_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Local-frame nodes and weights (summing to 1) for the sphere average."""
    half = max(1, order // 2)
    x, w = np.polynomial.legendre.leggauss(half)
    # map [-1, 1] onto [-1, 0] and [0, 1] so the kink sits on a cell edge
    t = np.concatenate([0.5 * (x - 1.0), 0.5 * (x + 1.0)])
    wt = np.concatenate([0.5 * w, 0.5 * w])
    az = 2.0 * math.pi * np.arange(order) / order
    s = np.sqrt(1.0 - t * t)
    nodes = np.stack(
        [
            np.outer(s, np.cos(az)).ravel(),
            np.outer(s, np.sin(az)).ravel(),
            np.repeat(t, order),
        ],
        axis=1,
    )
    # (1/4pi) * wt * (2pi/order)
    weights = np.repeat(wt, order) / (2.0 * order)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


@lru_cache(maxsize=2)
def _mc_directions(samples: int, seed: int) -> np.ndarray:
    rng = substream(seed, 0)
    d = rng.normal(size=(samples, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    d.flags.writeable = False
    return d


def sphere_average_abs_dot(n, quad: QuadratureSpec = QuadratureSpec()) -> tuple[float, float]:
    """``(1/4pi) * integral |u.n| du`` with its standard error (0 for the product rule)."""
    n = as_vector(n)
    if quad.method == "product":
        length = float(np.linalg.norm(n))
        frame = _frame(n / length) if length > 0.0 else np.eye(3)
        nodes, weights = _product_rule(int(quad.order))
        u = nodes @ frame
        return float(weights @ np.abs(u @ n)), 0.0
    d = _mc_directions(int(quad.samples), int(quad.seed))
    f = np.abs(d @ n)
    err = float(f.std(ddof=1) / math.sqrt(f.size)) if f.size > 1 else 0.0
    return float(f.mean()), err


def sphere_mean_abs_dot(n, quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Sphere average of ``|u.n|``; the exact value is ``|n|/2``."""
    return sphere_average_abs_dot(n, quad)[0]


# -- bounds ------------------------------------------------------------------


def bounds_by_integration(a, b, quad: QuadratureSpec = QuadratureSpec()) -> CorrelationBounds:
    a, b = require_unit(a, "a"), require_unit(b, "b")
    plus, plus_err = sphere_average_abs_dot(a + b, quad)
    minus, minus_err = sphere_average_abs_dot(a - b, quad)
    return CorrelationBounds(-1.0 + plus, 1.0 - minus, plus_err, minus_err)


def bounds_closed_form(phi: float, degrees: bool = False) -> CorrelationBounds:
    """``(-1 + |cos(phi/2)|, 1 - |sin(phi/2)|)`` for ``phi`` in [0, pi]."""
    phi = check_angle(phi, degrees)
    # cos(phi/2) written as sin((pi - phi)/2) so that phi = pi lands exactly on 0
    return CorrelationBounds(-1.0 + math.sin(0.5 * (math.pi - phi)), 1.0 - math.sin(0.5 * phi))


def quantum_prediction(phi: float, degrees: bool = False) -> float:
    """``-E_Q(phi) = cos(phi)`` for the odd-parity pair."""
    return math.cos(check_angle(phi, degrees))


def violation_at(phi: float, degrees: bool = False) -> ViolationReport:
    phi = check_angle(phi, degrees)
    return ViolationReport(phi, quantum_prediction(phi), bounds_closed_form(phi))


def _signed_excess(phi: float) -> float:
    return bounds_closed_form(phi).signed_excess(quantum_prediction(phi))


def violation_ranges(tolerance: float = 1e-10, grid: int = 721) -> list[tuple[float, float]]:
    """Maximal open sub-intervals of (0, pi) where the quantum value leaves the bounds.

    A uniform scan of ``grid`` points brackets each sign change of the signed
    excess; interior endpoints are then bisected to ``tolerance`` radians.
    The domain ends 0 and pi are returned as-is when a range touches them.
    """
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    phis = np.linspace(0.0, math.pi, grid)[1:-1]
    inside = [_signed_excess(p) > 0.0 for p in phis]

    def edge(i):
        return optimize.bisect(_signed_excess, phis[i], phis[i + 1], xtol=tolerance)

    ranges = []
    start = 0.0 if inside[0] else None
    for i in range(len(phis) - 1):
        if inside[i] == inside[i + 1]:
            continue
        x = edge(i)
        if inside[i + 1]:
            start = x
        else:
            ranges.append((start, x))
            start = None
    if start is not None:
        ranges.append((start, math.pi))
    return ranges


def max_violation(tolerance: float = 1e-10) -> MaxViolation:
    """Largest violation, searched by bounded Brent inside the first violation range.

    The bounds map onto each other under ``phi -> pi - phi`` (lower and upper
    exchanged) while ``cos`` flips sign, so the mirror angle ties the maximum.
    """
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance!r}")
    lo, hi = violation_ranges(tolerance)[0]
    res = optimize.minimize_scalar(
        lambda p: -violation_at(p).violation,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": tolerance},
    )
    phi_star = float(res.x)
    return MaxViolation(phi_star, math.pi - phi_star, violation_at(phi_star).violation)
