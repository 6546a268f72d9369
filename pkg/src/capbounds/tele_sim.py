"""Teleportation simulation of Gaussian channels and its error ledger.

The Braunstein-Kimble (BK) protocol with a TMSV resource of energy ``mu``
acts on the teleported mode as additive noise ``xi(mu) = 2 mu - sqrt(4 mu^2 - 1)``.
Simulating a channel ``E`` then gives ``E o I^mu``.  Errors are tracked as
a per-use trace distance ``delta`` that the peeling argument turns into an
``n``-use output infidelity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import (
    AdditiveNoise,
    Amplifier,
    CanonicalForm,
    GaussianChannelSpec,
    ThermalLoss,
    to_spec,
    transmission_and_noise,
)
from .errors import DomainError, InvalidArgument, QuantumLimitedSingularity
from .gaussian_entropy import bk_tmsv_fidelity, bk_tmsv_infidelity
from .symplectic import GaussianState, Z2, is_physical, two_mode_cov

SINGULAR_GUARD = 1e-9


def bk_noise(mu: float) -> float:
    """Added noise of the BK channel, computed as ``1 / (2 mu + sqrt(4 mu^2 - 1))``."""
    if not mu >= 0.5:
        raise InvalidArgument(f"mu must be >= 1/2, got {mu}")
    return 1.0 / (2 * mu + math.sqrt(4 * mu * mu - 1))


def simulate_compose(form: CanonicalForm, mu: float) -> GaussianChannelSpec:
    """Channel of ``E o I^mu``: the BK noise is pushed through ``T``."""
    spec = to_spec(form)
    return GaussianChannelSpec(spec.T, spec.N + bk_noise(mu) * spec.T @ spec.T.T, spec.d)


def bk_output_cov(resource_cov, gain: float, v_in) -> np.ndarray:
    """Output CM of gain-``gain`` BK teleportation over a two-mode resource.

    With resource blocks ``A`` (sender side), ``B`` (receiver) and
    cross-correlations ``C`` the output is
    ``k^2 V_in + B + k^2 Z A Z - k (C^T Z + Z C)``; for standard-form
    resources this is ``k^2 V_in + (k^2 a - 2 k c + b) I``.
    """
    R = np.asarray(resource_cov, dtype=float)
    if R.shape != (4, 4):
        raise InvalidArgument("resource must be a two-mode covariance matrix")
    A, C, B = R[:2, :2], R[:2, 2:], R[2:, 2:]
    k = gain
    noise = B + k * k * Z2 @ A @ Z2 - k * (C.T @ Z2 + Z2 @ C)
    return k * k * np.asarray(v_in, dtype=float) + noise


def sigma_nu(eta: float, nu: float) -> GaussianState:
    """Finite-energy resource simulating ``V -> eta V + nu I`` with gain ``sqrt(eta)``.

    The squeezing ``r >= 0`` is fixed by ``nu = e^(-2r) (eta + 1) / 2``, so
    ``|1 - eta|/2 < nu <= (eta + 1)/2``.  Raises
    :class:`QuantumLimitedSingularity` at the lower end.
    """
    if not eta > 0:
        raise InvalidArgument(f"eta must be positive, got {eta}")
    if not nu > 0:
        raise InvalidArgument(f"nu must be positive (nu = 0 needs infinite squeezing), got {nu}")
    em2r = 2 * nu / (eta + 1)  # e^{-2r}
    if em2r > 1:
        raise DomainError(f"nu = {nu} > (eta + 1)/2 needs negative squeezing r < 0")
    e2r = 1 / em2r
    denom = -e2r * abs(eta - 1) + eta + 1
    if abs(denom) <= SINGULAR_GUARD:
        raise QuantumLimitedSingularity(
            f"quantum-limited point nu = |1 - eta|/2 = {abs(1 - eta) / 2:g}; "
            "use pure_loss_resource for the pure-loss channel"
        )
    if denom < 0:
        raise DomainError(f"nu = {nu} lies below the quantum limit |1 - eta|/2")
    b = (-abs(eta - 1) + eta * e2r + em2r) / denom
    a = (b + (eta - 1) * em2r) / eta
    c = (b - em2r) / math.sqrt(eta)
    cov = 0.5 * two_mode_cov(a, b, c)
    if not is_physical(cov):
        raise DomainError(f"resource for (eta={eta}, nu={nu}) is not a physical state")
    return GaussianState(cov)


def finite_resource_state(form: CanonicalForm) -> GaussianState:
    """Resource state for a thermal-loss, amplifier or additive-noise form."""
    if not isinstance(form, (ThermalLoss, Amplifier, AdditiveNoise)):
        raise InvalidArgument(f"no finite-resource simulation for {type(form).__name__}")
    eta, nu = transmission_and_noise(form)
    return sigma_nu(eta, nu)


def pure_loss_resource(eta: float) -> GaussianState:
    """Resource for the pure-loss channel, ``a = (eta + 1) / (2 (1 - eta))``."""
    if not 0 < eta < 1:
        raise InvalidArgument(f"eta must lie in (0, 1), got {eta}")
    a = (eta + 1) / (2 * (1 - eta))
    return GaussianState(two_mode_cov(a, a, math.sqrt(a * a - 0.25)))


def _probe_covs():
    covs = [0.5 * np.eye(2), 3.2 * np.eye(2), np.diag([0.5 * math.e**2, 0.5 * math.e**-2])]
    th = 0.7
    R = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    covs.append(R @ np.diag([4.0, 0.3]) @ R.T)
    covs.append(np.array([[1.3, 0.4], [0.4, 0.9]]))
    return covs


def verify_finite_resource(resource: GaussianState, gain: float, target: GaussianChannelSpec) -> float:
    """Max deviation between BK teleportation over ``resource`` and ``target``.

    Compared on a fixed set of single-mode input covariance matrices.
    """
    if resource.nmodes != 2:
        raise InvalidArgument("resource must be a two-mode state")
    if not gain > 0:
        raise InvalidArgument("gain must be positive")
    worst = 0.0
    for V in _probe_covs():
        got = bk_output_cov(resource.cov, gain, V)
        want = target.T @ V @ target.T.T + target.N
        worst = max(worst, float(np.max(np.abs(got - want))))
    return worst


def max_input_mu(N_constraint: float) -> float:
    """TMSV parameter of a two-mode input carrying ``N_constraint`` photons in total."""
    return N_constraint / 2 + 0.5


def sim_error_budget(form: CanonicalForm, mu: float, N_constraint: float) -> float:
    """Diagnostic surrogate for the energy-constrained simulation error.

    ``delta = 2 sqrt(1 - F^2)`` with ``F`` the BK fidelity on the TMSV of
    maximal allowed energy.  ``form`` only enters through the reduction to
    the identity channel (data processing), so the value is form-independent.
    It is an upper-bound style diagnostic, not a certified diamond norm.
    """
    if not isinstance(form, CanonicalForm):
        raise InvalidArgument(f"not a canonical form: {form!r}")
    if not N_constraint >= 0:
        raise InvalidArgument(f"energy constraint must be >= 0, got {N_constraint}")
    _, one_minus_f2 = bk_tmsv_infidelity(mu, max_input_mu(N_constraint))
    return 2 * math.sqrt(one_minus_f2)


@dataclass(frozen=True)
class ErrorBudget:
    n_uses: int
    delta: float
    security_eps: float
    eps_tp: float
    eps_composed: float
    mu: float | None = None
    N_constraint: float | None = None

    @property
    def saturated(self) -> bool:
        return self.eps_composed >= 1.0


def peel(n_uses: int, delta: float, security_eps: float, mu=None, N_constraint=None) -> ErrorBudget:
    """Propagate a per-use error ``delta`` through ``n_uses`` adaptive rounds."""
    if int(n_uses) != n_uses or n_uses < 1:
        raise InvalidArgument(f"n_uses must be a positive integer, got {n_uses!r}")
    if not delta >= 0:
        raise InvalidArgument(f"delta must be >= 0, got {delta}")
    if not 0 < security_eps < 1:
        raise InvalidArgument(f"security_eps must lie in (0, 1), got {security_eps}")
    eps_tp = min(1.0, n_uses * delta / 2)
    composed = min(1.0, (math.sqrt(security_eps) + math.sqrt(eps_tp)) ** 2)
    return ErrorBudget(int(n_uses), float(delta), float(security_eps), eps_tp, composed, mu, N_constraint)


@dataclass(frozen=True)
class ConvergenceReport:
    mu_grid: np.ndarray
    mu_in_grid: np.ndarray
    infidelity: np.ndarray  # [i, j] -> 1 - F(mu_grid[i], mu_in_grid[j])
    row_limits: np.ndarray  # largest-mu entry of each column (fixed mu_in)
    col_limits: np.ndarray  # largest-mu_in entry of each row (fixed mu)
    decay_exponent: float  # fitted p in F ~ mu_in^(-p) at the largest mu, mu_in >> mu


def convergence_diagnostic(mu_grid, mu_in_grid) -> ConvergenceReport:
    """Infidelity matrix of BK teleportation over TMSV inputs.

    Along ``mu`` (fixed ``mu_in``) the infidelity vanishes; along ``mu_in``
    (fixed ``mu``) it tends to one, so convergence is strong but not uniform.
    """
    mus = np.asarray(mu_grid, dtype=float)
    mins = np.asarray(mu_in_grid, dtype=float)
    if mus.size == 0 or mins.size == 0:
        raise InvalidArgument("grids must be nonempty")
    M = np.array([[bk_tmsv_infidelity(m, t)[0] for t in mins] for m in mus])
    # asymptotic slope of log F against log mu_in, probed far past the grid
    tail = (1e6 * mus[-1], 1e7 * mus[-1])
    f = [bk_tmsv_fidelity(mus[-1], t) for t in tail]
    exponent = -math.log(f[1] / f[0]) / math.log(tail[1] / tail[0])
    return ConvergenceReport(mus, mins, M, M[-1, :].copy(), M[:, -1].copy(), exponent)
