"""Single-photon polarization states on the Poincaré sphere.

Amplitudes are stored over the circular basis ``(psi_plus, psi_minus)``
(right, left circular), so ``sigma_z = diag(1, -1)`` and the z axis of the
sphere is circular polarization.  ``psi_plus = (e_x + i e_y)/sqrt(2)``,
``psi_minus = (e_x - i e_y)/sqrt(2)``.

A direction with polar angles ``(theta, phi)`` maps to the spinor

    psi(u) = exp(-i phi/2) cos(theta/2) psi_plus + exp(i phi/2) sin(theta/2) psi_minus

with ``phi`` reduced to ``[0, 2 pi)`` before the half-angle phases are taken,
and ``phi = 0`` at the poles when the direction comes in as a vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import DomainError, InvalidDirectionError

TWO_PI = 2.0 * math.pi
ATOL = 1e-12
# amplitudes below this are treated as structural zeros (pole states)
ZERO_AMPLITUDE = 1e-14
# slack accepted when a caller promises a unit direction or a normalized state
UNIT_SLACK = 1e-10


def _frozen(m):
    m.flags.writeable = False
    return m


IDENTITY2 = _frozen(np.eye(2, dtype=complex))
SIGMA_X = _frozen(np.array([[0, 1], [1, 0]], dtype=complex))
SIGMA_Y = _frozen(np.array([[0, -1j], [1j, 0]], dtype=complex))
SIGMA_Z = _frozen(np.array([[1, 0], [0, -1]], dtype=complex))


class BlochVector(NamedTuple):
    """Real 3-vector on (or inside) the Poincaré sphere."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def __neg__(self):
        return BlochVector(-self.x, -self.y, -self.z)


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise InvalidDirectionError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidDirectionError(f"non-finite direction {arr}")
    return arr


def unit_vector(v) -> np.ndarray:
    """Normalize ``v``; zero or non-finite input raises InvalidDirectionError."""
    arr = as_vector(v)
    n = float(np.linalg.norm(arr))
    if n == 0.0:
        raise InvalidDirectionError("the zero vector has no direction")
    return arr / n


def require_unit(v, name: str = "direction") -> np.ndarray:
    arr = as_vector(v)
    n = float(np.linalg.norm(arr))
    if abs(n - 1.0) > UNIT_SLACK:
        raise InvalidDirectionError(f"{name} must be a unit vector, |{name}| = {n!r}")
    return arr


def reduce_azimuth(phi: float) -> float:
    """Map an azimuth onto ``[0, 2 pi)``."""
    if not math.isfinite(phi):
        raise DomainError(f"non-finite azimuth {phi!r}")
    r = math.fmod(phi, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    # fmod + shift can round up onto 2 pi itself
    if r >= TWO_PI:
        r = 0.0
    return r


@dataclass(frozen=True)
class SphericalAngles:
    """Polar angle ``theta`` in [0, pi] and azimuth ``phi`` reduced to [0, 2 pi)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not (math.isfinite(theta) and 0.0 <= theta <= math.pi):
            raise DomainError(f"polar angle must lie in [0, pi], got {theta!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", reduce_azimuth(float(self.phi)))

    @classmethod
    def from_bloch(cls, v) -> "SphericalAngles":
        x, y, z = unit_vector(v)
        rho = math.hypot(x, y)
        # atan2 keeps full precision near the poles, unlike acos(z)
        theta = math.atan2(rho, z)
        phi = math.atan2(y, x) if rho > 0.0 else 0.0
        return cls(theta, phi)

    def to_bloch(self) -> BlochVector:
        st = math.sin(self.theta)
        return BlochVector(st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta))


@dataclass(frozen=True)
class PolarizationState:
    """Pure single-photon polarization state over ``(psi_plus, psi_minus)``."""

    c_plus: complex
    c_minus: complex

    def __post_init__(self):
        cp, cm = complex(self.c_plus), complex(self.c_minus)
        norm2 = abs(cp) ** 2 + abs(cm) ** 2
        if not math.isfinite(norm2) or abs(norm2 - 1.0) > UNIT_SLACK:
            raise ValueError(f"state is not normalized: |c+|^2 + |c-|^2 = {norm2!r}")
        object.__setattr__(self, "c_plus", cp)
        object.__setattr__(self, "c_minus", cm)

    @classmethod
    def from_amplitudes(cls, amps, normalize: bool = False) -> "PolarizationState":
        amps = np.asarray(amps, dtype=complex)
        if amps.shape != (2,):
            raise ValueError(f"expected 2 amplitudes, got shape {amps.shape}")
        if normalize:
            n = np.linalg.norm(amps)
            if n == 0.0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / n
        return cls(amps[0], amps[1])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.c_plus, self.c_minus], dtype=complex)

    def norm(self) -> float:
        return math.sqrt(abs(self.c_plus) ** 2 + abs(self.c_minus) ** 2)

    def inner(self, other: "PolarizationState") -> complex:
        """``<self|other>``."""
        return self.c_plus.conjugate() * other.c_plus + self.c_minus.conjugate() * other.c_minus

    def fidelity(self, other: "PolarizationState") -> float:
        return abs(self.inner(other))

    def scaled(self, phase: complex) -> "PolarizationState":
        return PolarizationState(phase * self.c_plus, phase * self.c_minus)

    def canonical(self) -> "PolarizationState":
        """Same ray with the first nonzero amplitude made real and positive."""
        lead = self.c_plus if abs(self.c_plus) > ZERO_AMPLITUDE else self.c_minus
        return self.scaled(abs(lead) / lead)


Direction = Union[SphericalAngles, BlochVector, np.ndarray, tuple, list]


def _spinor(angles: SphericalAngles) -> PolarizationState:
    half_t, half_p = 0.5 * angles.theta, 0.5 * angles.phi
    return PolarizationState(
        complex(math.cos(half_p), -math.sin(half_p)) * math.cos(half_t),
        complex(math.cos(half_p), math.sin(half_p)) * math.sin(half_t),
    )


def state_from_bloch(u: Direction) -> PolarizationState:
    """Spinor ``psi(u)`` with the canonical half-angle phases.

    ``u`` may be :class:`SphericalAngles` (its azimuth is used as given, also at
    the poles) or any nonzero 3-vector, which is normalized first.
    """
    if not isinstance(u, SphericalAngles):
        u = SphericalAngles.from_bloch(u)
    return _spinor(u)


def bloch_from_state(psi: PolarizationState) -> BlochVector:
    """Pauli expectations ``(<sx>, <sy>, <sz>)``."""
    cross = psi.c_plus.conjugate() * psi.c_minus
    return BlochVector(
        2.0 * cross.real,
        2.0 * cross.imag,
        abs(psi.c_plus) ** 2 - abs(psi.c_minus) ** 2,
    )


def angles_from_state(psi: PolarizationState) -> SphericalAngles:
    """Polar angles of the state's Bloch vector, read from the amplitudes.

    At the poles the azimuth follows the vector convention (``phi = 0``).
    """
    ap, am = abs(psi.c_plus), abs(psi.c_minus)
    theta = 2.0 * math.atan2(am, ap)
    if ap <= ZERO_AMPLITUDE or am <= ZERO_AMPLITUDE:
        return SphericalAngles(theta, 0.0)
    phi = math.atan2(psi.c_minus.imag, psi.c_minus.real) - math.atan2(psi.c_plus.imag, psi.c_plus.real)
    return SphericalAngles(theta, phi)


def pauli_dot(n) -> np.ndarray:
    """``n . sigma`` as a 2x2 complex matrix; linear in ``n``, no unit check."""
    nx, ny, nz = as_vector(n)
    return np.array([[nz, nx - 1j * ny], [nx + 1j * ny, -nz]], dtype=complex)


def expectation(psi_a: PolarizationState, b) -> float:
    """``<psi_a| sigma.b |psi_a>``; equals ``a.b`` for ``psi_a = psi(a)``."""
    v = psi_a.amplitudes
    return float(np.vdot(v, pauli_dot(b) @ v).real)


def antipode(u: SphericalAngles) -> SphericalAngles:
    """``(pi - theta, phi + pi mod 2 pi)``, the angles of ``-u``."""
    return SphericalAngles(math.pi - u.theta, u.phi + math.pi)


def parity_apply(psi: PolarizationState) -> PolarizationState:
    """Parity map ``P psi(u) = -i psi(-u)``.

    Non-canonical global phases ride along: if ``psi = g psi(u)`` the result is
    ``-i g psi(-u)``.  The Bloch vector is negated exactly.  ``P`` applied twice
    gives back the same ray but with a phase that depends on the azimuth branch
    (it is ``-1`` on ``psi_plus``); see :func:`parity_squared_phase`.
    """
    angles = angles_from_state(psi)
    g = _spinor(angles).inner(psi)
    g /= abs(g)
    return _spinor(antipode(angles)).scaled(-1j * g)


def parity_squared_phase(psi: PolarizationState) -> complex:
    """``<psi| P P |psi>``; unit modulus, value recorded rather than assumed."""
    return psi.inner(parity_apply(parity_apply(psi)))


def random_direction(rng: np.random.Generator) -> BlochVector:
    v = rng.normal(size=3)
    return BlochVector(*(v / np.linalg.norm(v)))


def random_state(rng: np.random.Generator) -> PolarizationState:
    """Haar-random pure state with a random global phase."""
    return PolarizationState.from_amplitudes(rng.normal(size=2) + 1j * rng.normal(size=2), normalize=True)
