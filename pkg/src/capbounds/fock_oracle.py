"""Truncated Fock-basis oracle for photon-number-diagonal Gaussian states.

Only geometric (thermal) photon statistics are represented.  This module
deliberately avoids the covariance-matrix code paths so it can be used to
check them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CutoffTooSmall, DomainError, InvalidArgument

TAIL_TOL = 1e-8
DEFAULT_CUTOFF = 400
MAX_CUTOFF = 4096


@dataclass(frozen=True)
class FockDistribution:
    probs: np.ndarray
    cutoff: int
    tail_mass: float
    ratio: float | None = None  # geometric ratio p[k+1]/p[k], if the law is geometric


def _geometric(nbar: float, cutoff: int | None) -> FockDistribution:
    if not nbar >= 0:
        raise InvalidArgument(f"nbar must be >= 0, got {nbar}")
    r = nbar / (nbar + 1)

    def tail(c):
        return r ** (c + 1)

    if cutoff is None:
        cutoff = DEFAULT_CUTOFF
        while tail(cutoff) >= TAIL_TOL and cutoff < MAX_CUTOFF:
            cutoff = min(2 * cutoff, MAX_CUTOFF)
    elif int(cutoff) != cutoff or cutoff < 1:
        raise InvalidArgument(f"cutoff must be a positive integer, got {cutoff!r}")
    cutoff = int(cutoff)
    t = tail(cutoff)
    if t >= TAIL_TOL:
        raise CutoffTooSmall(f"tail mass {t:.3e} at cutoff {cutoff} exceeds {TAIL_TOL:g}")
    k = np.arange(cutoff + 1)
    probs = (1 - r) * r**k
    return FockDistribution(probs=probs, cutoff=cutoff, tail_mass=t, ratio=r)


def thermal_pmf(nbar: float, cutoff: int | None = None) -> FockDistribution:
    """Photon-number law ``nbar^k / (nbar+1)^(k+1)`` of a thermal state.

    With ``cutoff=None`` the cutoff starts at 400 and doubles (up to 4096)
    until the tail mass drops below ``1e-8``.
    """
    return _geometric(nbar, cutoff)


def tmsv_schmidt(mu: float, cutoff: int | None = None) -> FockDistribution:
    """Squared Schmidt coefficients of TMSV(mu), i.e. its reduced thermal law."""
    if not mu >= 0.5:
        raise InvalidArgument(f"mu must be >= 1/2, got {mu}")
    return _geometric(mu - 0.5, cutoff)


def shannon_entropy(p: FockDistribution) -> float:
    q = p.probs[p.probs > 0]
    return float(-np.sum(q * np.log2(q)))


def mean_number(p: FockDistribution) -> float:
    """Mean photon number including the closed-form geometric tail."""
    k = np.arange(p.cutoff + 1)
    head = float(k @ p.probs)
    if p.ratio is None or p.tail_mass == 0:
        return head
    # sum_{k>c} k p_k = tail * (c + 1 + r / (1 - r)) for a geometric law
    return head + p.tail_mass * (p.cutoff + 1 + p.ratio / (1 - p.ratio))


def diag_relative_entropy(p: FockDistribution, q: FockDistribution, return_error: bool = False):
    """Classical relative entropy ``sum_k p_k log2(p_k / q_k)`` in bits.

    The sum runs over the truncated support.  With ``return_error=True`` a
    ``(value, error)`` pair is returned where ``error`` is the magnitude of
    the neglected tail; it is exact when both laws are geometric and
    ``nan`` otherwise.
    """
    if p.cutoff != q.cutoff:
        raise InvalidArgument("distributions must share a cutoff")
    support = p.probs > 0
    pp = p.probs[support]
    if p.ratio is not None and q.ratio is not None and q.ratio > 0:
        # geometric laws: take logs in closed form, the far tail of q underflows
        k = np.arange(p.cutoff + 1)[support]
        log_q = math.log2(1 - q.ratio) + k * math.log2(q.ratio)
    else:
        if np.any(q.probs[support] <= 0):
            raise DomainError("q vanishes where p does not")
        log_q = np.log2(q.probs[support])
    value = float(np.sum(pp * (np.log2(pp) - log_q)))
    if not return_error:
        return value
    error = math.nan
    if p.ratio is not None and q.ratio is not None:
        if p.tail_mass == 0:
            error = 0.0
        else:
            # log-ratio is affine in k: a + b k
            a = math.log2((1 - p.ratio) / (1 - q.ratio))
            b = math.log2(p.ratio / q.ratio)
            mean_k = p.cutoff + 1 + p.ratio / (1 - p.ratio)
            error = abs(p.tail_mass * (a + b * mean_k))
    return value, error


def pure_state_fidelity(v_pure, v_other, delta=None) -> float:
    """Uhlmann fidelity between a pure Gaussian state and any Gaussian state.

    ``F = sqrt(Tr[rho sigma]) = det(V1 + V2)^(-1/4) exp(-delta^T (V1+V2)^-1 delta / 4)``
    in the vacuum-variance-1/2 convention.  Purity of ``v_pure`` is the
    caller's responsibility.
    """
    S = np.asarray(v_pure, dtype=float) + np.asarray(v_other, dtype=float)
    d = np.zeros(S.shape[0]) if delta is None else np.asarray(delta, dtype=float)
    overlap = math.exp(-0.5 * d @ np.linalg.solve(S, d)) / math.sqrt(np.linalg.det(S))
    return math.sqrt(overlap)
