"""Covariance-matrix algebra for bosonic Gaussian states.

Conventions
-----------
* Quadratures are ordered mode by mode, ``(q1, p1, q2, p2, ...)``.
* ``[q, p] = i`` so the vacuum covariance matrix is ``I / 2``.
* The symplectic form is ``Omega = diag([[0, 1], [-1, 0]], ...)``.

A state is physical when ``V + i Omega / 2 >= 0``.  Use
:func:`xxpp_permutation` to move between this ordering and the blocked
``(q1, ..., qn, p1, ..., pn)`` ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvalidArgument

PHYSICAL_TOL = 1e-10
SYMMETRY_RTOL = 1e-12
Z2 = np.diag([1.0, -1.0])


@dataclass(frozen=True)
class GaussianState:
    """Zero- or finite-mean Gaussian state given by its first two moments."""

    cov: np.ndarray
    mean: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise InvalidArgument(f"covariance matrix must be 2n x 2n, got {cov.shape}")
        mean = np.zeros(cov.shape[0]) if self.mean is None else np.array(self.mean, dtype=float)
        if mean.shape != (cov.shape[0],):
            raise InvalidArgument("mean vector length must match the covariance matrix")
        if not np.all(np.isfinite(mean)):
            raise InvalidArgument("mean vector must be finite")
        cov.setflags(write=False)
        mean.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)

    @property
    def nmodes(self) -> int:
        return self.cov.shape[0] // 2

    def displaced(self, shift) -> "GaussianState":
        return GaussianState(self.cov, self.mean + np.asarray(shift, dtype=float))


def omega(nmodes: int) -> np.ndarray:
    """Symplectic form for ``nmodes`` modes in interleaved ordering."""
    if int(nmodes) != nmodes or nmodes < 1:
        raise InvalidArgument(f"nmodes must be a positive integer, got {nmodes!r}")
    return np.kron(np.eye(int(nmodes)), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def xxpp_permutation(nmodes: int) -> np.ndarray:
    """Permutation matrix ``P`` with ``P @ x_interleaved = x_blocked``.

    For a covariance matrix, ``P @ V @ P.T`` gives the blocked form and
    ``P @ omega(n) @ P.T == [[0, I], [-I, 0]]``.
    """
    if nmodes < 1:
        raise InvalidArgument("nmodes must be positive")
    order = list(range(0, 2 * nmodes, 2)) + list(range(1, 2 * nmodes, 2))
    return np.eye(2 * nmodes)[order]


def _check_cov(cm) -> np.ndarray:
    V = np.asarray(cm, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2 or V.shape[0] == 0:
        raise InvalidArgument(f"covariance matrix must be 2n x 2n, got {V.shape}")
    scale = max(1.0, float(np.max(np.abs(V))))
    if np.max(np.abs(V - V.T)) > SYMMETRY_RTOL * scale:
        raise InvalidArgument("covariance matrix is not symmetric")
    return 0.5 * (V + V.T)


def _as_cov(obj) -> np.ndarray:
    return obj.cov if isinstance(obj, GaussianState) else obj


def uncertainty_min_eigenvalue(cm) -> float:
    """Smallest eigenvalue of the Hermitian matrix ``V + i Omega / 2``."""
    V = _check_cov(_as_cov(cm))
    return float(np.linalg.eigvalsh(V + 0.5j * omega(V.shape[0] // 2))[0])


def is_physical(cm, tol: float = PHYSICAL_TOL) -> bool:
    return uncertainty_min_eigenvalue(cm) >= -tol


def symplectic_eigenvalues(cm) -> np.ndarray:
    """Symplectic spectrum of a physical covariance matrix, descending.

    Computed as the positive eigenvalues of the Hermitian matrix
    ``i V^(1/2) Omega V^(1/2)``, which are the moduli of the eigenvalues
    of ``i Omega V``.
    """
    V = _check_cov(_as_cov(cm))
    if not is_physical(V):
        raise DomainError("symplectic spectrum requested for an unphysical covariance matrix")
    n = V.shape[0] // 2
    w, U = np.linalg.eigh(V)
    root = (U * np.sqrt(np.clip(w, 0.0, None))) @ U.T
    ev = np.linalg.eigvalsh(1j * root @ omega(n) @ root)
    # eigenvalues come in +/- pairs; the upper half holds the spectrum
    return np.sort(ev[n:])[::-1].copy()


def make_vacuum(nmodes: int = 1) -> GaussianState:
    return GaussianState(0.5 * np.eye(2 * nmodes))


def make_thermal(nbar: float) -> GaussianState:
    """Single-mode thermal state with covariance ``(nbar + 1/2) I``."""
    if not nbar >= 0:
        raise InvalidArgument(f"nbar must be >= 0, got {nbar}")
    return GaussianState((nbar + 0.5) * np.eye(2))


def make_tmsv(mu: float) -> GaussianState:
    """Two-mode squeezed vacuum with local variance ``mu = nbar + 1/2``."""
    if not mu >= 0.5:
        raise InvalidArgument(f"TMSV parameter mu must be >= 1/2, got {mu}")
    c = math.sqrt(max(mu * mu - 0.25, 0.0))
    I2 = np.eye(2)
    return GaussianState(np.block([[mu * I2, c * Z2], [c * Z2, mu * I2]]))


def two_mode_cov(a: float, b: float, c: float) -> np.ndarray:
    """Standard-form CM ``[[a I, c Z], [c Z, b I]]``."""
    I2 = np.eye(2)
    return np.block([[a * I2, c * Z2], [c * Z2, b * I2]])


def mean_photon_number(state: GaussianState) -> float:
    """Total mean photon number summed over all modes."""
    V = state.cov
    return float(np.trace(V) / 2 - state.nmodes / 2 + state.mean @ state.mean / 2)


def partial_transpose(cm, mode: int) -> np.ndarray:
    """Flip the momentum of ``mode``, the CM-level partial transpose."""
    V = np.array(_as_cov(cm), dtype=float)
    flip = np.ones(V.shape[0])
    flip[2 * mode + 1] = -1.0
    return V * np.outer(flip, flip)


def ppt_min_symplectic_eigenvalue(cm, mode: int = 1) -> float:
    """Smallest symplectic eigenvalue of the partially transposed CM.

    A two-mode Gaussian state is separable iff this is ``>= 1/2``.
    """
    Vt = _check_cov(partial_transpose(cm, mode))
    n = Vt.shape[0] // 2
    ev = np.linalg.eigvals(1j * omega(n) @ Vt)
    return float(np.sort(np.abs(ev))[0])


# -- scalar entropic functions ---------------------------------------------


def _xlog2x(x: float) -> float:
    return 0.0 if x == 0 else x * math.log2(x)


def h_entropy(x: float) -> float:
    """Entropy in bits of a thermal mode with mean photon number ``x``."""
    if not x >= 0:
        raise InvalidArgument(f"h(x) requires x >= 0, got {x}")
    if x == 0:
        return 0.0
    return (x + 1) * math.log2(x + 1) - x * math.log2(x)


def s_entropy(x: float) -> float:
    """Entropy in bits of a mode with symplectic eigenvalue ``x``; equals ``h(x - 1/2)``."""
    if not x >= 0.5:
        raise InvalidArgument(f"s(x) requires x >= 1/2, got {x}")
    if x == 0.5:
        return 0.0
    return _xlog2x(x + 0.5) - _xlog2x(x - 0.5)


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise InvalidArgument(f"H2(p) requires p in [0, 1], got {p}")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropic_functions(x: float) -> dict:
    """Evaluate ``h``, ``s`` and ``H2`` at ``x``.

    Entries whose domain does not contain ``x`` are ``None``; a negative
    ``x`` lies outside every domain and raises.
    """
    if not x >= 0:
        raise InvalidArgument(f"no entropic function is defined at x={x}")
    return {
        "h": h_entropy(x),
        "s": s_entropy(x) if x >= 0.5 else None,
        "H2": binary_entropy(x) if x <= 1 else None,
    }


# -- random states for property checks -------------------------------------


def random_symplectic(nmodes: int, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """``expm(Omega H)`` for a random symmetric ``H``; always symplectic."""
    from scipy.linalg import expm

    A = rng.normal(size=(2 * nmodes, 2 * nmodes))
    return expm(omega(nmodes) @ (scale * (A + A.T) / 2))


def random_covariance(
    nmodes: int, rng: np.random.Generator, nu_range=(0.6, 3.0), scale: float = 0.5
) -> np.ndarray:
    """Random strictly mixed CM with symplectic spectrum drawn from ``nu_range``."""
    nus = rng.uniform(*nu_range, size=nmodes)
    S = random_symplectic(nmodes, rng, scale)
    V = S @ np.diag(np.repeat(nus, 2)) @ S.T
    return 0.5 * (V + V.T)
