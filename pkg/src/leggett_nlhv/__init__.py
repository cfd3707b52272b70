"""Leggett-type bounds on two-photon polarization correlations.

Poincaré-sphere state algebra, exact odd/even parity correlations, the
antipodal-isotropic Leggett bound (by quadrature and in closed form) and a
seeded Monte Carlo simulator for finite-statistics runs.
"""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    InvalidConfigError,
    InvalidDirectionError,
    InvalidQuadratureError,
)
from .poincare import (
    BlochVector,
    PolarizationState,
    SphericalAngles,
    antipode,
    bloch_from_state,
    expectation,
    parity_apply,
    pauli_dot,
    state_from_bloch,
)
from .twophoton import (
    OutcomeProbabilities,
    TwoPhotonState,
    closed_form_correlation,
    correlation,
    even_state,
    joint_probabilities,
    odd_state,
    odd_state_from_u,
)
from .leggett import (
    CorrelationBounds,
    QuadratureSpec,
    ViolationReport,
    bounds_by_integration,
    bounds_closed_form,
    max_violation,
    quantum_prediction,
    sphere_mean_abs_dot,
    violation_at,
    violation_ranges,
)
from .experiment import (
    EstimateReport,
    RunConfig,
    SampleCounts,
    estimate_E,
    sample_run,
    violation_significance,
)
