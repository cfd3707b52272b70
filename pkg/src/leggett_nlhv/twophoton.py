"""Two-photon polarization states and their correlation functions.

Amplitudes are ordered over the product basis
``(++, +-, -+, --)`` with photon A as the left tensor factor, where ``+``/``-``
stand for the circular states ``psi_plus``/``psi_minus``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, NamedTuple

import numpy as np

from .poincare import (
    UNIT_SLACK,
    PolarizationState,
    SphericalAngles,
    antipode,
    as_vector,
    parity_apply,
    pauli_dot,
    require_unit,
    state_from_bloch,
)

Parity = Literal["odd", "even"]
PARITIES = ("odd", "even")
OUTCOMES = ((1, 1), (1, -1), (-1, 1), (-1, -1))

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class TwoPhotonState:
    amplitudes: tuple

    def __post_init__(self):
        amps = tuple(complex(c) for c in self.amplitudes)
        if len(amps) != 4:
            raise ValueError(f"expected 4 amplitudes, got {len(amps)}")
        norm2 = sum(abs(c) ** 2 for c in amps)
        if not math.isfinite(norm2) or abs(norm2 - 1.0) > UNIT_SLACK:
            raise ValueError(f"two-photon state is not normalized: norm^2 = {norm2!r}")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, v, normalize: bool = False) -> "TwoPhotonState":
        v = np.asarray(v, dtype=complex).reshape(-1)
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(tuple(v))

    @classmethod
    def product(cls, psi_a: PolarizationState, psi_b: PolarizationState) -> "TwoPhotonState":
        return cls.from_vector(np.kron(psi_a.amplitudes, psi_b.amplitudes))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def inner(self, other: "TwoPhotonState") -> complex:
        return complex(np.vdot(self.vector, other.vector))

    def fidelity(self, other: "TwoPhotonState") -> float:
        return abs(self.inner(other))

    def swapped(self) -> "TwoPhotonState":
        """Exchange the photon labels A <-> B."""
        pp, pm, mp, mm = self.amplitudes
        return TwoPhotonState((pp, mp, pm, mm))


class OutcomeProbabilities(NamedTuple):
    """Probabilities of the outcome pairs ``(+,+), (+,-), (-,+), (-,-)``."""

    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    def correlation(self) -> float:
        """``sum alpha*beta P(alpha, beta)``."""
        return self.p_pp - self.p_pm - self.p_mp + self.p_mm

    def marginals(self) -> tuple[float, float]:
        """``P(alpha=+1)`` for photon A and ``P(beta=+1)`` for photon B."""
        return self.p_pp + self.p_pm, self.p_pp + self.p_mp


def odd_state() -> TwoPhotonState:
    """``-(i/sqrt2)(psi+_A psi-_B - psi-_A psi+_B)``."""
    return TwoPhotonState((0.0, -1j * _INV_SQRT2, 1j * _INV_SQRT2, 0.0))


def even_state() -> TwoPhotonState:
    """``-(i/sqrt2)(psi+_A psi-_B + psi-_A psi+_B)``."""
    return TwoPhotonState((0.0, -1j * _INV_SQRT2, -1j * _INV_SQRT2, 0.0))


def state_for(parity: Parity) -> TwoPhotonState:
    if parity == "odd":
        return odd_state()
    if parity == "even":
        return even_state()
    raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")


def odd_state_from_u(u) -> TwoPhotonState:
    """Antisymmetric pair with polarizations ``u`` and ``-u``.

    ``(1/sqrt2)[psi_A(u) psi_B(-u) - psi_A(-u) psi_B(u)]``.  The ray does not
    depend on ``u``; only the global phase does.
    """
    angles = SphericalAngles.from_bloch(require_unit(u, "u"))
    up = state_from_bloch(angles).amplitudes
    down = state_from_bloch(antipode(angles)).amplitudes
    return TwoPhotonState.from_vector(_INV_SQRT2 * (np.kron(up, down) - np.kron(down, up)))


def _analyzer_pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    return require_unit(a, "a"), require_unit(b, "b")


def correlation(state: TwoPhotonState, a, b) -> float:
    """``<psi| (sigma.a) x (sigma.b) |psi>`` by explicit 4x4 operator application."""
    a, b = _analyzer_pair(a, b)
    v = state.vector
    op = np.kron(pauli_dot(a), pauli_dot(b))
    return float(np.vdot(v, op @ v).real)


def closed_form_correlation(parity: Parity, a, b) -> float:
    """``-a.b`` for odd parity, ``a.b - 2 a_z b_z`` for even parity."""
    a, b = as_vector(a), as_vector(b)
    if parity == "odd":
        return -float(a @ b)
    if parity == "even":
        return float(a @ b) - 2.0 * float(a[2] * b[2])
    raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")


def _projector(n, sign: int) -> np.ndarray:
    return 0.5 * (np.eye(2, dtype=complex) + sign * pauli_dot(n))


def joint_probabilities(state: TwoPhotonState, a, b) -> OutcomeProbabilities:
    a, b = _analyzer_pair(a, b)
    v = state.vector
    probs = []
    for alpha, beta in OUTCOMES:
        op = np.kron(_projector(a, alpha), _projector(b, beta))
        probs.append(float(np.vdot(v, op @ v).real))
    return OutcomeProbabilities(*probs)


def apply_local(state: TwoPhotonState, f: Callable[[PolarizationState], PolarizationState]) -> TwoPhotonState:
    """Apply a single-photon map to both factors of every product-basis term.

    ``sum c_ij e_i x e_j  ->  sum c_ij f(e_i) x f(e_j)``.  For linear ``f`` this
    is ``f x f``; for the parity map it is its term-by-term extension.
    """
    basis = [PolarizationState(1.0, 0.0), PolarizationState(0.0, 1.0)]
    images = [f(e).amplitudes for e in basis]
    out = np.zeros(4, dtype=complex)
    for k, c in enumerate(state.amplitudes):
        i, j = divmod(k, 2)
        out += c * np.kron(images[i], images[j])
    return TwoPhotonState.from_vector(out)


def parity_apply_both(state: TwoPhotonState) -> TwoPhotonState:
    return apply_local(state, parity_apply)


def parity_eigenvalue(state: TwoPhotonState) -> complex:
    """``<psi| P_A P_B |psi>``: the recorded two-photon parity phase."""
    return state.inner(parity_apply_both(state))
