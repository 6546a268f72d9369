"""Two-way capacity bounds for qubit and single-mode Gaussian channels.

Weak-converse values are the entanglement flux (REE of the Choi state).
Strong-converse values add the finite-``n`` correction
``sqrt(V / (n (1 - eps))) + C(eps) / n``.  :func:`corrected_pipeline`
rebuilds the Gaussian-channel strong converse on top of an explicit
teleportation-simulation error budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist

from .channels import (
    AdditiveNoise,
    Amplifier,
    AmplitudeDamping,
    B1Form,
    CanonicalForm,
    Dephasing,
    Depolarizing,
    DVChannelSpec,
    Erasure,
    Identity,
    Pauli,
    PureLoss,
    QLimAmplifier,
    ThermalLoss,
)
from .errors import InvalidArgument
from .symplectic import binary_entropy, h_entropy, s_entropy
from .tele_sim import ErrorBudget, peel, sim_error_budget

LOG2E = 1 / math.log(2)
HIERARCHY_CAPACITY = "Q2 = D2 = K = P2"
HIERARCHY_BOUND = "Q2 = D2 <= K = P2 <= value"


@dataclass
class BoundResult:
    value: float  # bits per channel use; math.inf marks an unbounded result
    kind: str  # "weak" | "strong" | "capacity"
    channel: str
    formula_id: str
    params: dict = field(default_factory=dict)
    zero_clamped: bool = False

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.value)

    @property
    def hierarchy(self) -> str:
        return HIERARCHY_CAPACITY if self.kind == "capacity" else HIERARCHY_BOUND

    def as_dict(self) -> dict:
        return {
            "channel": self.channel,
            "kind": self.kind,
            "value": self.value,
            "formula_id": self.formula_id,
            "zero_clamped": self.zero_clamped,
            "hierarchy": self.hierarchy,
            "params": dict(self.params),
        }


def _describe(obj) -> tuple[str, dict]:
    params = {k: v for k, v in vars(obj).items()} if hasattr(obj, "__dict__") else {}
    return obj.label, params


# -- qubit channels --------------------------------------------------------


def flux_dv(channel: DVChannelSpec) -> BoundResult:
    """Entanglement flux of a qubit channel."""
    label, params = _describe(channel)
    if isinstance(channel, Pauli):
        pmax = max(channel.probs)
        value = 1 - binary_entropy(pmax) if pmax >= 0.5 else 0.0
        return BoundResult(value, "weak", label, "pauli-flux", params, zero_clamped=pmax < 0.5)
    if isinstance(channel, Depolarizing):
        p = channel.p
        value = 1 - binary_entropy(0.75 * p) if p <= 2 / 3 else 0.0
        return BoundResult(value, "weak", label, "depolarizing-flux", params, zero_clamped=p > 2 / 3)
    if isinstance(channel, Dephasing):
        return BoundResult(1 - binary_entropy(channel.p), "capacity", label, "dephasing-capacity", params)
    if isinstance(channel, Erasure):
        return BoundResult(1 - channel.p, "capacity", label, "erasure-capacity", params)
    if isinstance(channel, AmplitudeDamping):
        p = channel.p
        value = 1.0 if p == 0 else min(1.0, -math.log2(p))
        return BoundResult(value, "weak", label, "amplitude-damping-bound", params)
    raise InvalidArgument(f"unsupported qubit channel {channel!r}")


# -- bosonic channels ------------------------------------------------------


def _thermal_loss_bound(eta, nbar):
    if eta == 1:
        return math.inf, False
    if nbar >= eta / (1 - eta):
        return 0.0, True
    value = -math.log2(1 - eta) - (nbar * math.log2(eta) if nbar else 0.0) - h_entropy(nbar)
    return max(value, 0.0), False


def _amplifier_bound(g, nbar):
    if nbar >= 1 / (g - 1):
        return 0.0, True
    value = (nbar + 1) * math.log2(g) - math.log2(g - 1) - h_entropy(nbar)
    return max(value, 0.0), False


def bound_cv(form: CanonicalForm) -> BoundResult:
    """Flux bound (or capacity, for distillable forms) of a bosonic channel."""
    label, params = _describe(form)
    if isinstance(form, PureLoss):
        value = math.inf if form.eta == 1 else -math.log2(1 - form.eta)
        return BoundResult(value, "capacity", label, "pure-loss-capacity", params)
    if isinstance(form, QLimAmplifier):
        return BoundResult(-math.log2(1 - 1 / form.g), "capacity", label, "ql-amplifier-capacity", params)
    if isinstance(form, ThermalLoss):
        value, clamped = _thermal_loss_bound(form.eta, form.nbar)
        return BoundResult(value, "weak", label, "thermal-loss-flux", params, clamped)
    if isinstance(form, Amplifier):
        value, clamped = _amplifier_bound(form.g, form.nbar)
        return BoundResult(value, "weak", label, "amplifier-flux", params, clamped)
    if isinstance(form, AdditiveNoise):
        xi = form.xi
        if xi == 0:
            return BoundResult(math.inf, "weak", label, "additive-noise-flux", params)
        if xi >= 1:
            return BoundResult(0.0, "weak", label, "additive-noise-flux", params, True)
        value = (xi - 1) * LOG2E - math.log2(xi)
        return BoundResult(max(value, 0.0), "weak", label, "additive-noise-flux", params)
    if isinstance(form, Identity):
        return BoundResult(math.inf, "capacity", label, "identity", params)
    if isinstance(form, B1Form):
        raise InvalidArgument("no closed-form flux bound is available for the B1 form")
    raise InvalidArgument(f"unsupported form {form!r}")


def pure_loss_scaling(eta: float) -> float:
    """Ratio of the pure-loss capacity to ``eta``; tends to ``log2 e``."""
    if not 0 < eta <= 0.01:
        raise InvalidArgument(f"high-loss regime requires 0 < eta <= 0.01, got {eta}")
    # -log2(1 - eta) evaluated without cancellation
    return -math.log1p(-eta) * LOG2E / eta


def rev_coherent_info(eta: float, omega: float) -> float:
    """Reverse coherent information of a thermal-loss channel; may be negative."""
    if not 0 < eta < 1:
        raise InvalidArgument(f"eta must lie in (0, 1), got {eta}")
    return -math.log1p(-eta) * LOG2E - s_entropy(omega)


def relent_variance(form: CanonicalForm) -> float:
    """Relative-entropy variance of the Choi state (unconstrained)."""
    if isinstance(form, (PureLoss, QLimAmplifier)):
        return 0.0
    if isinstance(form, ThermalLoss):
        n = form.nbar
        if n == 0:
            return 0.0
        if form.eta == 0:
            raise InvalidArgument("variance undefined at eta = 0")
        return n * (n + 1) * math.log2(form.eta * (n + 1) / n) ** 2
    if isinstance(form, Amplifier):
        n = form.nbar
        if n == 0:
            return 0.0
        return n * (n + 1) * math.log2((n + 1) / (form.g * n)) ** 2
    if isinstance(form, AdditiveNoise):
        return (1 - form.xi) ** 2 * LOG2E**2
    raise InvalidArgument(f"no relative-entropy variance for {type(form).__name__}")


def c_eps(security_eps: float) -> float:
    if not 0 < security_eps < 1:
        raise InvalidArgument(f"security_eps must lie in (0, 1), got {security_eps}")
    return math.log2(6) + 2 * math.log2((1 + security_eps) / (1 - security_eps))


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF."""
    if not 0 < p < 1:
        raise InvalidArgument(f"p must lie in (0, 1), got {p}")
    return NormalDist().inv_cdf(p)


VARIANTS = ("chebyshev", "gaussian-quantile", "distillable")


@dataclass(frozen=True)
class StrongConverseParams:
    n_uses: int
    security_eps: float
    variance: float | None = None  # None: use relent_variance(form)
    variant: str = "chebyshev"

    def __post_init__(self):
        if int(self.n_uses) != self.n_uses or self.n_uses < 1:
            raise InvalidArgument(f"n_uses must be a positive integer, got {self.n_uses!r}")
        if not 0 < self.security_eps < 1:
            raise InvalidArgument(f"security_eps must lie in (0, 1), got {self.security_eps}")
        if self.variance is not None and not self.variance >= 0:
            raise InvalidArgument("variance must be >= 0")
        if self.variant not in VARIANTS:
            raise InvalidArgument(f"variant must be one of {VARIANTS}, got {self.variant!r}")


def is_distillable(form) -> bool:
    return isinstance(form, (PureLoss, QLimAmplifier)) or (
        isinstance(form, (ThermalLoss, Amplifier)) and form.nbar == 0
    )


def sc_bound(form: CanonicalForm, params: StrongConverseParams) -> BoundResult:
    """Finite-``n`` strong-converse bound on the secret-key rate.

    The ``gaussian-quantile`` variant omits the ``O(log2 n / n)`` term,
    whose constant is not known; it is flagged in ``params`` instead.
    """
    if isinstance(form, (B1Form, Identity)):
        raise InvalidArgument(f"strong-converse bound not available for {type(form).__name__}")
    if params.variant == "distillable" and not is_distillable(form):
        raise InvalidArgument("the distillable variant applies only to pure loss and quantum-limited amplifiers")
    phi = bound_cv(form)
    n, eps = params.n_uses, params.security_eps
    V = relent_variance(form) if params.variance is None else params.variance
    meta = dict(phi.params, n_uses=n, security_eps=eps, variance=V, variant=params.variant, flux=phi.value)
    if params.variant == "distillable":
        value = phi.value + c_eps(eps) / n
    elif params.variant == "chebyshev":
        value = phi.value + math.sqrt(V / (n * (1 - eps))) + c_eps(eps) / n
    else:
        value = phi.value + math.sqrt(V / n) * normal_quantile(eps)
        meta["unresolved_residual"] = "O(log2(n)/n)"
    return BoundResult(value, "strong", phi.channel, f"strong-converse-{params.variant}", meta)


def corrected_pipeline(
    form: CanonicalForm,
    n_uses: int,
    security_eps: float,
    mu: float,
    N_constraint: float,
    delta: float | None = None,
) -> tuple[BoundResult, ErrorBudget]:
    """Strong-converse bound with the simulation error propagated explicitly.

    ``delta`` defaults to :func:`sim_error_budget`; pass a value to inject
    one.  When the composed security parameter saturates at 1 the bound is
    unbounded (``value = inf``).  The ``O(1/mu)`` corrections are dropped and
    listed in ``params["dropped_terms"]``.
    """
    if delta is None:
        delta = sim_error_budget(form, mu, N_constraint)
    budget = peel(n_uses, delta, security_eps, mu=mu, N_constraint=N_constraint)
    V2 = 2 * relent_variance(form)
    meta = {
        "n_uses": n_uses,
        "security_eps": security_eps,
        "mu": mu,
        "N_constraint": N_constraint,
        "delta": delta,
        "eps_tp": budget.eps_tp,
        "eps_composed": budget.eps_composed,
        "variance": V2,
        "dropped_terms": "O(1/mu)",
    }
    if budget.saturated:
        phi = bound_cv(form)
        meta["flux"] = phi.value
        return BoundResult(math.inf, "strong", phi.channel, "corrected-strong-converse", meta), budget
    res = sc_bound(form, StrongConverseParams(n_uses, budget.eps_composed, V2, "chebyshev"))
    meta["flux"] = res.params["flux"]
    return BoundResult(res.value, "strong", res.channel, "corrected-strong-converse", meta), budget


FINITE_N_MEASURES = ("REE", "squashed")


def finite_n_weak_bound(E_value: float, security_eps: float, n_uses: int, alpha: float, measure: str = "REE") -> float:
    """Rate bound ``E + alpha g(eps) + h(eps) / n`` from a continuity inequality.

    ``REE``: ``g = 4 eps``, ``h = 2 H2(eps)``.
    ``squashed``: ``g = 16 sqrt(eps)``, ``h = 2 H2(2 sqrt(eps))``.
    """
    if not E_value >= 0:
        raise InvalidArgument("E_value must be >= 0")
    if not alpha > 0:
        raise InvalidArgument("alpha must be positive")
    if int(n_uses) != n_uses or n_uses < 1:
        raise InvalidArgument("n_uses must be a positive integer")
    if not security_eps >= 0:
        raise InvalidArgument("security_eps must be >= 0")
    if measure == "REE":
        g, harg = 4 * security_eps, security_eps
    elif measure == "squashed":
        g, harg = 16 * math.sqrt(security_eps), 2 * math.sqrt(security_eps)
    else:
        raise InvalidArgument(f"measure must be one of {FINITE_N_MEASURES}")
    if harg > 1:
        raise InvalidArgument(f"binary-entropy argument {harg} exceeds 1")
    return E_value + alpha * g + 2 * binary_entropy(harg) / n_uses
