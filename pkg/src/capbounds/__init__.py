"""Two-way capacity bounds, Gaussian-state entropies, teleportation-simulation
error budgets and CV-QKD security thresholds."""

from .bounds import (
    BoundResult,
    StrongConverseParams,
    bound_cv,
    c_eps,
    corrected_pipeline,
    finite_n_weak_bound,
    flux_dv,
    relent_variance,
    sc_bound,
)
from .channels import (
    AdditiveNoise,
    Amplifier,
    AmplitudeDamping,
    B1Form,
    Dephasing,
    Depolarizing,
    Erasure,
    GaussianChannelSpec,
    Identity,
    Pauli,
    PureLoss,
    QLimAmplifier,
    ThermalLoss,
)
from .errors import (
    CapBoundsError,
    CutoffTooSmall,
    DomainError,
    InternalConsistencyError,
    InvalidArgument,
    NumericError,
    QuantumLimitedSingularity,
    SingularStateError,
)
from .gaussian_entropy import relative_entropy, sigma_term, von_neumann_entropy
from .qkd import sweep_thresholds, threshold_solve
from .symplectic import GaussianState, symplectic_eigenvalues
from .tele_sim import convergence_diagnostic, peel, sim_error_budget

__version__ = "0.1.0"
