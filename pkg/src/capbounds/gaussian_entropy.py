"""Entropic functionals of Gaussian states.

The relative entropy is evaluated from the first two moments through the
Gibbs matrix ``G = 2i Omega arccoth(2i V Omega)``, so no Williamson
decomposition is needed.  All results are in bits.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgument, NumericError, SingularStateError
from .symplectic import (
    GaussianState,
    _check_cov,
    omega,
    s_entropy,
    symplectic_eigenvalues,
)

PURE_GUARD = 1e-9
IMAG_TOL = 1e-9
CLAMP_TOL = 1e-9


def _cov_and_mean(obj):
    if isinstance(obj, GaussianState):
        return _check_cov(obj.cov), obj.mean
    V = _check_cov(obj)
    return V, np.zeros(V.shape[0])


def _arccoth(z):
    # principal branch, z off the cut [-1, 1]
    return 0.5 * np.log((z + 1) / (z - 1))


def gibbs_matrix(cm) -> np.ndarray:
    """Gibbs matrix ``G`` of a strictly mixed Gaussian state.

    ``2iVOmega`` is similar to the Hermitian matrix ``H = 2i K Omega K``
    with ``K = V^(1/2)``, so ``arccoth`` is applied through ``eigh(H)``
    and mapped back with ``K``.  Eigenvalues of ``H`` are ``+-2 nu_k``.

    Raises
    ------
    SingularStateError
        If any symplectic eigenvalue is within ``1e-9`` of ``1/2``.  Blend
        quasi-pure states with a little thermal noise before calling.
    NumericError
        If the result carries a non-negligible imaginary or antisymmetric part.
    """
    V, _ = _cov_and_mean(cm)
    nus = symplectic_eigenvalues(V)
    if nus[-1] <= 0.5 + PURE_GUARD:
        raise SingularStateError(
            f"Gibbs matrix diverges: symplectic eigenvalue {nus[-1]!r} is (numerically) 1/2"
        )
    n = V.shape[0] // 2
    Om = omega(n)
    w, U = np.linalg.eigh(V)
    K = (U * np.sqrt(w)) @ U.T
    Kinv = (U / np.sqrt(w)) @ U.T
    d, W = np.linalg.eigh(2j * K @ Om @ K)
    fM = K @ ((W * _arccoth(d.astype(complex))) @ W.conj().T) @ Kinv
    G = 2j * Om @ fM
    scale = max(1.0, float(np.max(np.abs(G))))
    if np.max(np.abs(G.imag)) > IMAG_TOL * scale:
        raise NumericError(f"Gibbs matrix has imaginary residue {np.max(np.abs(G.imag)):.3e}")
    G = G.real
    if np.max(np.abs(G - G.T)) > IMAG_TOL * scale:
        raise NumericError("Gibbs matrix is not symmetric")
    return 0.5 * (G + G.T)


def sigma_term(v1, v2, delta=None) -> float:
    """The functional ``Sigma(V1, V2)`` in bits.

    ``v1`` and ``v2`` may be covariance matrices or :class:`GaussianState`
    objects.  The mean offset ``delta = x1 - x2`` is taken from the states
    when both are states, from ``delta`` when given, and is zero otherwise.
    """
    V1, x1 = _cov_and_mean(v1)
    V2, x2 = _cov_and_mean(v2)
    if V1.shape != V2.shape:
        raise InvalidArgument(f"mode mismatch: {V1.shape} vs {V2.shape}")
    if delta is None:
        delta = x1 - x2
    delta = np.asarray(delta, dtype=float)
    if delta.shape != (V1.shape[0],):
        raise InvalidArgument("delta has the wrong length")
    G2 = gibbs_matrix(V2)
    n = V1.shape[0] // 2
    sign, logdet = np.linalg.slogdet(V2 + 0.5j * omega(n))
    if abs(np.angle(sign)) > 1e-8:
        raise NumericError(f"ln det(V2 + i Omega/2) has imaginary part {np.angle(sign):.3e}")
    total = logdet + np.trace(V1 @ G2) + delta @ G2 @ delta
    return float(total / (2 * math.log(2)))


def von_neumann_entropy(cm) -> float:
    """Entropy in bits, ``sum_k s(nu_k)`` over the symplectic spectrum."""
    V, _ = _cov_and_mean(cm)
    return float(sum(s_entropy(max(nu, 0.5)) for nu in symplectic_eigenvalues(V)))


def relative_entropy(rho1, rho2) -> float:
    """Relative entropy ``S(rho1 || rho2)`` in bits.

    ``rho2`` must be strictly mixed.  ``rho1`` may be pure: the self term
    ``Sigma(V1, V1)`` equals the von Neumann entropy of ``rho1`` and is
    evaluated that way when the Gibbs matrix of ``V1`` is singular.
    """
    V1, x1 = _cov_and_mean(rho1)
    V2, x2 = _cov_and_mean(rho2)
    if V1.shape != V2.shape:
        raise InvalidArgument(f"mode mismatch: {V1.shape} vs {V2.shape}")
    try:
        self_term = sigma_term(V1, V1)
    except SingularStateError:
        self_term = von_neumann_entropy(V1)
    value = sigma_term(V1, V2, delta=x1 - x2) - self_term
    if value < -CLAMP_TOL:
        raise NumericError(f"relative entropy came out negative: {value:.3e}")
    return max(value, 0.0)


# -- BK teleportation fidelity ---------------------------------------------


def _bk_xi(mu: float) -> float:
    return 1.0 / (2 * mu + math.sqrt(4 * mu * mu - 1))


def bk_fidelity_radicand(mu_res: float, mu_in: float) -> float:
    """Fourth-root argument of the fidelity, evaluated term by term.

    Loses precision for large ``mu_res``; kept as a cross-check of the
    factored form ``(1 + 2 mu_in xi)^2`` used by :func:`bk_tmsv_fidelity`.
    """
    xi = 2 * mu_res - math.sqrt(4 * mu_res**2 - 1)
    return 1 - 4 * mu_in * (math.sqrt(4 * mu_res**2 - 1) + mu_in - 2 * mu_res * (1 + 2 * mu_in * xi))


def _check_fid_args(mu_res, mu_in):
    if not mu_res > 0.5:
        raise InvalidArgument(f"resource energy must exceed 1/2, got {mu_res}")
    if not mu_in >= 0.5:
        raise InvalidArgument(f"input TMSV parameter must be >= 1/2, got {mu_in}")


def bk_tmsv_fidelity(mu_res: float, mu_in: float) -> float:
    """Fidelity between a TMSV(mu_in) and its image under BK teleportation.

    ``mu_res`` is the energy of the TMSV resource.  Since
    ``4 mu xi - 1 = xi^2``, the radicand factors as ``(1 + 2 mu_in xi)^2``
    and ``F = (1 + 2 mu_in xi)^(-1/2)``, which stays accurate for any
    ``mu_res``.
    """
    _check_fid_args(mu_res, mu_in)
    x = 2 * mu_in * _bk_xi(mu_res)
    radicand = (1 + x) ** 2
    if not radicand >= 1 - 1e-12:
        raise NumericError(f"fidelity radicand {radicand} < 1")
    return (1 + x) ** -0.5


def bk_tmsv_infidelity(mu_res: float, mu_in: float) -> tuple[float, float]:
    """Return ``(1 - F, 1 - F**2)`` without cancellation."""
    _check_fid_args(mu_res, mu_in)
    x = 2 * mu_in * _bk_xi(mu_res)
    return -math.expm1(-0.5 * math.log1p(x)), x / (1 + x)
