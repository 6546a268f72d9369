"""Single-mode Gaussian channels, qubit channels and their quasi-Choi states.

A Gaussian channel acts on first and second moments as
``x -> T x + d`` and ``V -> T V T^T + N``.  Phase-insensitive channels are
built from canonical forms; ``nu`` below is the added noise in ``N = nu I``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InternalConsistencyError, InvalidArgument
from .symplectic import GaussianState, is_physical, make_tmsv

BONA_FIDE_TOL = 1e-10


@dataclass(frozen=True)
class GaussianChannelSpec:
    T: np.ndarray
    N: np.ndarray
    d: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        T = np.array(self.T, dtype=float).reshape(2, 2)
        N = np.array(self.N, dtype=float).reshape(2, 2)
        d = np.array(self.d, dtype=float).reshape(2)
        if np.max(np.abs(N - N.T)) > 1e-12:
            raise InvalidArgument("noise matrix must be symmetric")
        if np.linalg.eigvalsh(N)[0] < -1e-12:
            raise InvalidArgument("noise matrix must be positive semidefinite")
        for a in (T, N, d):
            a.setflags(write=False)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "d", d)

    @property
    def bona_fide(self) -> bool:
        # complete positivity with vacuum variance 1/2: det N >= (det T - 1)^2 / 4
        return np.linalg.det(self.N) >= (np.linalg.det(self.T) - 1) ** 2 / 4 - BONA_FIDE_TOL


# -- canonical forms -------------------------------------------------------


class CanonicalForm:
    """Marker base class for the phase-insensitive canonical forms and B1."""

    label = "form"


def _need(cond, msg):
    if not cond:
        raise InvalidArgument(msg)


@dataclass(frozen=True)
class ThermalLoss(CanonicalForm):
    eta: float
    nbar: float = 0.0
    label = "thermal-loss"

    def __post_init__(self):
        _need(0.0 <= self.eta <= 1.0, f"transmissivity must lie in [0, 1], got {self.eta}")
        _need(self.nbar >= 0, f"nbar must be >= 0, got {self.nbar}")


@dataclass(frozen=True)
class PureLoss(CanonicalForm):
    eta: float
    label = "pure-loss"

    def __post_init__(self):
        _need(0.0 <= self.eta <= 1.0, f"transmissivity must lie in [0, 1], got {self.eta}")

    @property
    def nbar(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Amplifier(CanonicalForm):
    g: float
    nbar: float = 0.0
    label = "amplifier"

    def __post_init__(self):
        _need(self.g > 1, f"gain must exceed 1, got {self.g}")
        _need(self.nbar >= 0, f"nbar must be >= 0, got {self.nbar}")


@dataclass(frozen=True)
class QLimAmplifier(CanonicalForm):
    g: float
    label = "ql-amplifier"

    def __post_init__(self):
        _need(self.g > 1, f"gain must exceed 1, got {self.g}")

    @property
    def nbar(self) -> float:
        return 0.0


@dataclass(frozen=True)
class AdditiveNoise(CanonicalForm):
    xi: float
    label = "additive-noise"

    def __post_init__(self):
        _need(self.xi >= 0, f"additive noise must be >= 0, got {self.xi}")


@dataclass(frozen=True)
class B1Form(CanonicalForm):
    """Adds one vacuum unit of noise to the momentum only."""

    label = "b1"


@dataclass(frozen=True)
class Identity(CanonicalForm):
    label = "identity"


def transmission_and_noise(form: CanonicalForm) -> tuple[float, float]:
    """``(tau, nu)`` with ``V -> tau V + nu I`` for phase-insensitive forms."""
    if isinstance(form, (ThermalLoss, PureLoss)):
        return form.eta, (1 - form.eta) * (form.nbar + 0.5)
    if isinstance(form, (Amplifier, QLimAmplifier)):
        return form.g, (form.g - 1) * (form.nbar + 0.5)
    if isinstance(form, AdditiveNoise):
        return 1.0, form.xi
    if isinstance(form, Identity):
        return 1.0, 0.0
    raise InvalidArgument(f"{type(form).__name__} is not phase-insensitive")


def to_spec(form: CanonicalForm) -> GaussianChannelSpec:
    if isinstance(form, B1Form):
        return GaussianChannelSpec(np.eye(2), np.diag([0.0, 1.0]))
    if not isinstance(form, CanonicalForm):
        raise InvalidArgument(f"not a canonical form: {form!r}")
    tau, nu = transmission_and_noise(form)
    return GaussianChannelSpec(math.sqrt(tau) * np.eye(2), nu * np.eye(2))


def apply(spec: GaussianChannelSpec, state: GaussianState, mode: int = 0) -> GaussianState:
    """Apply a single-mode channel to ``mode`` (0-based) of ``state``."""
    n = state.nmodes
    if not 0 <= mode < n:
        raise InvalidArgument(f"mode {mode} out of range for a {n}-mode state")
    sl = slice(2 * mode, 2 * mode + 2)
    S = np.eye(2 * n)
    S[sl, sl] = spec.T
    noise = np.zeros((2 * n, 2 * n))
    noise[sl, sl] = spec.N
    cov = S @ state.cov @ S.T + noise
    mean = S @ state.mean
    mean[sl] += spec.d
    if not is_physical(cov):
        raise InternalConsistencyError("channel output failed the uncertainty principle")
    return GaussianState(cov, mean)


def quasi_choi(form: CanonicalForm, mu: float) -> GaussianState:
    """Channel applied to the second mode of TMSV(mu)."""
    return apply(to_spec(form), make_tmsv(mu), mode=1)


@dataclass(frozen=True)
class ChannelChecks:
    bona_fide: bool
    # None means the classifier makes no claim for this form
    entanglement_breaking: bool | None
    zero_bound_region: bool
    tele_covariant: bool
    uniform_convergence: bool


def channel_checks(form: CanonicalForm) -> ChannelChecks:
    spec = to_spec(form)
    eb = None
    zero = False
    if isinstance(form, (ThermalLoss, PureLoss)):
        eta = form.eta
        eb = eta == 0 or (eta < 1 and form.nbar >= eta / (1 - eta))
        zero = eb
    elif isinstance(form, Amplifier):
        zero = form.nbar >= 1 / (form.g - 1)
    elif isinstance(form, AdditiveNoise):
        zero = form.xi >= 1
    elif isinstance(form, Identity):
        eb = False
    rank = int(np.linalg.matrix_rank(spec.N, tol=1e-12))
    return ChannelChecks(
        bona_fide=bool(spec.bona_fide),
        entanglement_breaking=eb,
        zero_bound_region=bool(zero),
        tele_covariant=True,
        uniform_convergence=rank == 2,
    )


# -- qubit channels --------------------------------------------------------


class DVChannelSpec:
    label = "dv"


def _prob(p, name="p"):
    _need(0.0 <= p <= 1.0, f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class Pauli(DVChannelSpec):
    p0: float
    p1: float
    p2: float
    p3: float
    label = "pauli"

    def __post_init__(self):
        for i, p in enumerate(self.probs):
            _prob(p, f"p{i}")
        _need(abs(sum(self.probs) - 1) <= 1e-12, f"Pauli probabilities sum to {sum(self.probs)}")

    @property
    def probs(self) -> tuple[float, float, float, float]:
        return (self.p0, self.p1, self.p2, self.p3)


@dataclass(frozen=True)
class Depolarizing(DVChannelSpec):
    """``rho -> (1 - p) rho + p I / 2``."""

    p: float
    label = "depolarizing"

    def __post_init__(self):
        _prob(self.p)

    def to_pauli(self) -> Pauli:
        q = self.p / 4
        return Pauli(1 - 3 * q, q, q, q)


@dataclass(frozen=True)
class Dephasing(DVChannelSpec):
    p: float
    label = "dephasing"

    def __post_init__(self):
        _prob(self.p)

    def to_pauli(self) -> Pauli:
        return Pauli(1 - self.p, 0.0, 0.0, self.p)


@dataclass(frozen=True)
class Erasure(DVChannelSpec):
    p: float
    label = "erasure"

    def __post_init__(self):
        _prob(self.p)


@dataclass(frozen=True)
class AmplitudeDamping(DVChannelSpec):
    p: float
    label = "amplitude-damping"

    def __post_init__(self):
        _prob(self.p)

    def kraus(self) -> tuple[np.ndarray, np.ndarray]:
        a0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1 - self.p)]])
        a1 = np.array([[0.0, math.sqrt(self.p)], [0.0, 0.0]])
        return a0, a1
