"""Acceptance checks shared by the ``selftest`` command and the test suite.

Each check recomputes a headline result and compares it with an
independent evaluation (closed form, Fock sum, direct bisection).  A check
returns a :class:`CheckResult`; nothing here raises on failure.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import bounds, qkd, tele_sim
from .channels import (
    AdditiveNoise,
    Amplifier,
    Depolarizing,
    Dephasing,
    Erasure,
    GaussianChannelSpec,
    PureLoss,
    QLimAmplifier,
    ThermalLoss,
)
from .errors import QuantumLimitedSingularity
from .fock_oracle import diag_relative_entropy, thermal_pmf
from .gaussian_entropy import relative_entropy, sigma_term
from .symplectic import make_thermal, make_tmsv, random_covariance, symplectic_eigenvalues


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} [{self.number}] {self.title}: {self.detail}"


def _h2(p):
    # written out here so the capacity check does not reuse the library's H2
    return -p * math.log(p) / math.log(2) - (1 - p) * math.log(1 - p) / math.log(2)


def _timed(fn):
    t0 = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t0


def check_capacities() -> CheckResult:
    cases = [
        ("pure-loss 0.5", lambda: bounds.bound_cv(PureLoss(0.5)).value, 1.0, 1e-12),
        ("ql-amplifier 2", lambda: bounds.bound_cv(QLimAmplifier(2.0)).value, 1.0, 1e-12),
        ("erasure 0.25", lambda: bounds.flux_dv(Erasure(0.25)).value, 0.75, 0.0),
        ("dephasing 0.1", lambda: bounds.flux_dv(Dephasing(0.1)).value, 1 - _h2(0.1), 1e-12),
    ]
    ok, parts = True, []
    for name, fn, want, tol in cases:
        fn()  # warm up imports before timing
        got, dt = _timed(fn)
        good = abs(got - want) <= tol and dt < 1e-3
        ok &= good
        parts.append(f"{name}={got:.12g} ({dt * 1e6:.0f} us)")
    return CheckResult(1, "capacities", ok, "; ".join(parts))


def check_rate_loss() -> CheckResult:
    ratio = bounds.bound_cv(PureLoss(1e-3)).value / 1e-3
    rel = abs(ratio / math.log2(math.e) - 1)
    return CheckResult(2, "rate-loss scaling", rel < 1e-3, f"C/eta={ratio:.6f}, rel. dev {rel:.2e}")


def check_zero_boundaries() -> CheckResult:
    ok, worst = True, 0.0
    for eta in np.round(np.arange(0.1, 0.95, 0.1), 10):
        n0 = eta / (1 - eta)
        at = bounds.bound_cv(ThermalLoss(eta, n0)).value
        below = bounds.bound_cv(ThermalLoss(eta, n0 - 1e-9)).value
        above = bounds.bound_cv(ThermalLoss(eta, n0 + 1e-9)).value
        worst = max(worst, at, below, above)
        ok &= at == 0.0 and above == 0.0 and below < 1e-6
    add = bounds.bound_cv(AdditiveNoise(1.0)).value
    dep = bounds.flux_dv(Depolarizing(2 / 3)).value
    ok &= add == 0.0 and abs(dep) < 1e-12
    return CheckResult(3, "zero boundaries", ok, f"max thermal-loss value near edge {worst:.2e}; additive {add}; depolarizing {dep:.1e}")


def check_relative_entropy_oracle(n_random: int = 200, seed: int = 7) -> CheckResult:
    t0 = time.perf_counter()
    grid = [0.1, 0.5, 1.0, 2.0, 3.5, 5.0]
    worst_fock = 0.0
    for n1 in grid:
        for n2 in grid:
            got = relative_entropy(make_thermal(n1), make_thermal(n2))
            p, q = thermal_pmf(n1), thermal_pmf(n2)
            if q.cutoff != p.cutoff:
                c = max(p.cutoff, q.cutoff)
                p, q = thermal_pmf(n1, c), thermal_pmf(n2, c)
            ok_cut = p.cutoff <= 4096
            worst_fock = max(worst_fock, abs(got - diag_relative_entropy(p, q)) if ok_cut else math.inf)
    rng = np.random.default_rng(seed)
    worst_self = 0.0
    for i in range(n_random):
        V = random_covariance(1 + i % 3, rng)
        entropy = sum(_s_bits(nu) for nu in symplectic_eigenvalues(V))
        worst_self = max(worst_self, abs(sigma_term(V, V) - entropy))
    dt = time.perf_counter() - t0
    ok = worst_fock < 1e-6 and worst_self < 1e-8 and dt < 30
    return CheckResult(4, "relative-entropy oracle", ok,
                       f"Fock max dev {worst_fock:.1e}; Sigma(V,V) max dev {worst_self:.1e}; {dt:.1f} s")


def _s_bits(nu):
    a, b = nu + 0.5, nu - 0.5
    return a * math.log2(a) - (b * math.log2(b) if b > 0 else 0.0)


def check_simulation_algebra() -> CheckResult:
    worst = 0.0
    for eta in np.round(np.arange(0.1, 0.95, 0.1), 10):
        target = GaussianChannelSpec(math.sqrt(eta) * np.eye(2), (1 - eta) / 2 * np.eye(2))
        worst = max(worst, tele_sim.verify_finite_resource(tele_sim.pure_loss_resource(eta), math.sqrt(eta), target))
    for eta in (0.2, 0.5, 0.8, 1.0, 1.5, 3.0):
        lo, hi = abs(1 - eta) / 2, (1 + eta) / 2
        for f in (0.1, 0.5, 1.0):
            nu = lo + f * (hi - lo)
            target = GaussianChannelSpec(math.sqrt(eta) * np.eye(2), nu * np.eye(2))
            worst = max(worst, tele_sim.verify_finite_resource(tele_sim.sigma_nu(eta, nu), math.sqrt(eta), target))
    tmsv_worst = 0.0
    for mu in (0.6, 1.0, 5.0, 50.0):
        xi = tele_sim.bk_noise(mu)
        target = GaussianChannelSpec(np.eye(2), xi * np.eye(2))
        tmsv_worst = max(tmsv_worst, tele_sim.verify_finite_resource(make_tmsv(mu), 1.0, target))
    raised, slightly_off = 0, 0
    for eta in (0.2, 0.5, 0.8):
        try:
            tele_sim.finite_resource_state(ThermalLoss(eta, 0.0))
        except QuantumLimitedSingularity:
            raised += 1
        try:
            tele_sim.sigma_nu(eta, (1 - eta) / 2 * (1 + 1e-6))
            slightly_off += 1
        except QuantumLimitedSingularity:
            pass
    ok = worst < 1e-10 and tmsv_worst < 1e-12 and raised == 3 and slightly_off == 3
    return CheckResult(5, "simulation algebra", ok,
                       f"resource dev {worst:.1e}; TMSV dev {tmsv_worst:.1e}; singular raised {raised}/3")


def check_convergence() -> CheckResult:
    rep = tele_sim.convergence_diagnostic([1.0, 10.0, 100.0, 1e3], [0.5, 1.0, 10.0, 100.0])
    row_ok = bool(rep.row_limits[0] < 1e-3) and bool(np.all(np.diff(rep.infidelity, axis=0) < 0))
    col = [tele_sim.bk_tmsv_infidelity(m, 1e4 * m)[0] for m in rep.mu_grid]
    col_ok = all(c > 0.9 for c in col)
    mus = [1.0, 10.0, 100.0, 1e3, 1e4]
    deltas = [tele_sim.sim_error_budget(PureLoss(0.5), m, 10.0) for m in mus]
    dec = all(b < a for a, b in zip(deltas, deltas[1:]))
    small = deltas[-1] < 1e-2
    ok = row_ok and col_ok and dec and small
    return CheckResult(6, "convergence topology", ok,
                       f"infidelity(1e3, 1/2)={rep.row_limits[0]:.2e}; min column limit {min(col):.4f}; "
                       f"delta(1e4, N=10)={deltas[-1]:.4g} (needs < 1e-2); decay exponent {rep.decay_exponent:.4f}")


def check_corrected_strong_converse() -> CheckResult:
    target = 1 + bounds.c_eps(0.01) / 100
    values = []
    for k in range(2, 21):
        res, _ = bounds.corrected_pipeline(PureLoss(0.5), 100, 0.01, 10.0**k, 10.0)
        values.append(res.value)
    finite = [v for v in values if math.isfinite(v)]
    mono = all(b <= a for a, b in zip(finite, finite[1:]))
    conv = bool(finite) and abs(finite[-1] - target) < 1e-5
    sentinel, _ = bounds.corrected_pipeline(PureLoss(0.5), 10**6, 0.01, 10.0, 10.0)
    ok = mono and conv and math.isinf(values[0]) and math.isinf(sentinel.value)
    last = finite[-1] if finite else math.nan
    return CheckResult(7, "corrected strong converse", ok,
                       f"value at mu=1e20 {last:.7f} vs {target:.7f}; monotone {mono}; sentinel {sentinel.value}")


def _oracle_lb_threshold(eta):
    # h(nbar) = -log2(1 - eta) solved by plain bisection, then nbar -> eps
    target = -math.log2(1 - eta)

    def h(x):
        return (x + 1) * math.log2(x + 1) - x * math.log2(x) if x > 0 else 0.0

    lo, hi = 0.0, 10.0
    for _ in range(200):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if h(mid) < target else (lo, mid)
    return (1 - eta) * lo / eta


def check_qkd_thresholds() -> CheckResult:
    t0 = time.perf_counter()
    curves = {c.protocol: c for c in qkd.sweep_thresholds(loss_db=np.linspace(0, 30, 61))}
    dt = time.perf_counter() - t0
    ub = all(v == 1.0 for _, v in curves["eps_UB"].points)
    got = float(qkd.threshold_solve(qkd.rate_lb, 0.5))
    want = _oracle_lb_threshold(0.5)
    lb_ok = abs(got - want) < 1e-3
    order = all(
        lb < inf < 1.0
        for (_, lb), (_, inf) in zip(curves["eps_LB"].points, curves["eps_trusted_inf"].points)
    )
    worst = 0.0
    for eta in np.linspace(0.05, 0.95, 10):
        for eps in np.linspace(0.0, 0.2, 10):
            worst = max(worst, abs(qkd.rate_trusted(eta, eps, 0.0) - qkd.rate_lb(eta, eps) / 2))
    ok = ub and lb_ok and order and worst < 1e-9 and dt < 60
    return CheckResult(8, "QKD thresholds", ok,
                       f"eps_LB(0.5)={got:.6f} vs oracle {want:.6f}; ordering {order}; "
                       f"trusted(xi=0) dev {worst:.1e}; sweep {dt:.2f} s")


def check_finite_n() -> CheckResult:
    E = 0.8123
    exact = bounds.finite_n_weak_bound(E, 0.0, 100, 1.0) == E
    eps_grid = np.linspace(0.0, 0.4, 21)
    n_grid = [1, 2, 5, 10, 100, 1000]
    inc = all(
        all(b > a for a, b in zip(row, row[1:]))
        for row in ([bounds.finite_n_weak_bound(E, e, n, 1.0) for e in eps_grid] for n in n_grid)
    )
    dec = all(
        all(b < a for a, b in zip(col, col[1:]))
        for col in ([bounds.finite_n_weak_bound(E, e, n, 1.0) for n in n_grid] for e in eps_grid[1:])
    )
    return CheckResult(9, "finite-n composer", exact and inc and dec,
                       f"eps=0 exact {exact}; increasing in eps {inc}; decreasing in n {dec}")


CHECKS = (
    check_capacities,
    check_rate_loss,
    check_zero_boundaries,
    check_relative_entropy_oracle,
    check_simulation_algebra,
    check_convergence,
    check_corrected_strong_converse,
    check_qkd_thresholds,
    check_finite_n,
)


def run_all() -> list[CheckResult]:
    return [check() for check in CHECKS]
