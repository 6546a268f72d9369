"""CV-QKD key rates over thermal-loss channels and excess-noise thresholds.

The channel is parametrised by transmissivity ``eta`` and excess noise
``eps``, with thermal variance ``omega = 1/2 + eta eps / (1 - eta)``.  A
protocol's security threshold is the excess noise at which its rate
crosses zero.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import rev_coherent_info
from .errors import InvalidArgument
from .symplectic import s_entropy

log = logging.getLogger(__name__)

LOG2E = 1 / math.log(2)
ROOT_TOL = 1e-10
SCAN_POINTS = 64
TRUSTED_XI = (1e2, 1e3, 1e4)
THERMAL_V0 = 1e3
MIN_LOSS_DB = 1e-4  # 0 dB is evaluated here; every rate has a pole at eta = 1


def _s(x: float) -> float:
    # absorb roundoff just below the vacuum value
    return s_entropy(0.5 if 0.5 - 1e-12 <= x < 0.5 else x)


def _check_eta(eta):
    if not 0 < eta < 1:
        raise InvalidArgument(f"eta must lie in (0, 1), got {eta}")


def excess_map(eta: float, excess_noise: float) -> dict:
    """Thermal number and variance of a channel with the given excess noise."""
    _check_eta(eta)
    if not excess_noise >= 0:
        raise InvalidArgument(f"excess noise must be >= 0, got {excess_noise}")
    nbar = eta * excess_noise / (1 - eta)
    return {"nbar": nbar, "omega": nbar + 0.5}


def excess_from_nbar(eta: float, nbar: float) -> float:
    _check_eta(eta)
    return (1 - eta) * nbar / eta


def db_to_eta(loss_db):
    return 10.0 ** (-np.asarray(loss_db, dtype=float) / 10)


def eta_to_db(eta):
    return -10 * np.log10(np.asarray(eta, dtype=float))


def rate_lb(eta: float, excess_noise: float) -> float:
    """Reverse-coherent-information rate."""
    return rev_coherent_info(eta, excess_map(eta, excess_noise)["omega"])


def rate_trusted(eta: float, excess_noise: float, xi_bob: float, coherent: bool = False) -> float:
    """Squeezed-state protocol with Bob's trusted additive noise ``xi_bob``.

    Includes the 1/2 basis-reconciliation factor; ``coherent=True`` gives
    the memory-assisted version without it (twice the rate).
    """
    if not xi_bob >= 0:
        raise InvalidArgument(f"trusted noise must be >= 0, got {xi_bob}")
    w = excess_map(eta, excess_noise)["omega"]
    t = 1 - eta
    nu = math.sqrt(w * (1 + 4 * w * xi_bob * t) / (4 * (w + xi_bob * t)))
    rate = 0.25 * math.log2((w + xi_bob * t) / (t * (t * w + xi_bob))) + (_s(nu) - _s(w)) / 2
    return 2 * rate if coherent else rate


def mutual_info_ab(eta, omega, xi_bob, mu_mod) -> float:
    """Alice-Bob mutual information at modulation ``mu_mod``, no sifting factor."""
    return 0.5 * math.log2((eta * mu_mod + (1 - eta) * omega + xi_bob) / (eta / mu_mod + (1 - eta) * omega + xi_bob))


def holevo_be(eta, omega, xi_bob, mu_mod) -> float:
    """Eve's Holevo bound on Bob's outcomes, high-modulation form."""
    t = 1 - eta
    nu = math.sqrt(omega * (1 + 4 * omega * xi_bob * t) / (4 * (omega + xi_bob * t)))
    return 0.5 * math.log2(t * eta * mu_mod / (omega + xi_bob * t)) + _s(omega) - _s(nu)


def rate_noswitching(eta: float, excess_noise: float) -> float:
    """Coherent states with heterodyne detection, reverse reconciliation."""
    w = excess_map(eta, excess_noise)["omega"]
    t = 1 - eta
    arg = (2 / math.e) * eta / (t * (eta + 2 * w * t + 1))
    return math.log2(arg) + _s((1 + 2 * w * t) / (2 * eta)) - _s(w)


def rate_twoway(eta: float, excess_noise: float, v0: float) -> float:
    """Two-way protocol with Gaussian-modulated thermal states of variance ``v0``."""
    if not v0 >= 0.5:
        raise InvalidArgument(f"v0 must be >= 1/2, got {v0}")
    w = excess_map(eta, excess_noise)["omega"]
    e2, e3 = eta**2, eta**3
    num = e2 * v0 + w + e3 * (w - v0)
    nu2 = math.sqrt(w * (1 + 4 * e2 * v0 * w + e3 * (1 - 4 * w * v0)) / (4 * num))
    return 0.5 * math.log2(num / ((1 - eta) * ((1 - e2) * w + eta * v0))) + _s(nu2) - _s(w)


@dataclass
class ThresholdSolution:
    excess_noise: float
    iterations: int = 0
    residual: float = 0.0
    multiple_roots: bool = False
    clamped: str | None = None  # "zero" | "upper" when no root was bracketed

    def __float__(self):
        return self.excess_noise


def threshold_solve(rate_fn, eta: float, bracket=(0.0, 1.0), tol: float = ROOT_TOL) -> ThresholdSolution:
    """Largest tolerable excess noise: the smallest root of ``rate_fn(eta, eps)``.

    The bracket is scanned on a uniform grid for the first sign change,
    which is then bisected until the interval is below ``tol`` (or the
    rate is exactly zero).  Rates that scale like ``1/xi`` make a residual
    test on ``|R|`` stop too early, so it is only reported.  Returns 0 when
    the rate is not positive at the lower end and the upper end when the
    rate stays positive.
    """
    lo, hi = map(float, bracket)

    def f(e):
        return rate_fn(eta, e)

    f_lo = f(lo)
    if f_lo <= 0:
        return ThresholdSolution(lo, 0, f_lo, clamped="zero")
    grid = np.linspace(lo, hi, SCAN_POINTS + 1)
    vals = [f_lo] + [f(e) for e in grid[1:]]
    changes = [i for i in range(SCAN_POINTS) if (vals[i] > 0) != (vals[i + 1] > 0)]
    if not changes:
        return ThresholdSolution(hi, 0, float(vals[-1]), clamped="upper")
    multiple = len(changes) > 1
    if multiple:
        log.warning("rate changes sign %d times at eta=%g; keeping the smallest root", len(changes), eta)
    i = changes[0]
    a, b = grid[i], grid[i + 1]
    fa = vals[i]
    it = 0
    mid, fm = a, fa
    while b - a > tol and it < 200:
        it += 1
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0:
            break
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return ThresholdSolution(float(mid), it, float(fm), multiple_roots=multiple)


@dataclass
class TrustedLimit:
    excess_noise: float
    iterates: list
    residual: float
    monotone: bool


def threshold_trusted_inf(eta: float, xis=TRUSTED_XI) -> TrustedLimit:
    """Threshold of the trusted-noise protocol extrapolated to infinite trusted noise.

    Thresholds at ``xis`` (geometric, ratio 10) are Richardson-extrapolated
    in ``1/xi``.  The residual is the change produced by the last
    extrapolation level.
    """
    xs = [float(threshold_solve(lambda e_, x_, xi=xi: rate_trusted(e_, x_, xi), eta)) for xi in xis]
    monotone = all(b >= a for a, b in zip(xs, xs[1:]))
    if not monotone:
        log.warning("trusted-noise thresholds not monotone in xi at eta=%g: %s", eta, xs)
    ratio = xis[1] / xis[0]
    level = xs
    while len(level) > 1:
        prev = level
        level = [(ratio * b - a) / (ratio - 1) for a, b in zip(level, level[1:])]
        ratio *= xis[1] / xis[0]
    value = level[0]
    residual = abs(value - prev[-1])
    return TrustedLimit(value, xs, residual, monotone)


def low_loss_expansion(eta: float, nbar: float) -> dict:
    """Low-loss, low-noise expansion of the reverse coherent information."""
    if not (0 < eta <= 0.05 and 0 <= nbar <= 0.05):
        raise InvalidArgument("expansion regime is 0 < eta <= 0.05, 0 <= nbar <= 0.05")
    exact = rev_coherent_info(eta, nbar + 0.5)
    expansion = (eta - nbar) * LOG2E + (nbar * math.log2(nbar) if nbar else 0.0)
    return {"exact": exact, "expansion": expansion}


@dataclass
class ThresholdCurve:
    protocol: str
    points: list  # (loss_db, excess_noise), sorted by loss
    solver_meta: list = field(default_factory=list)


PROTOCOLS = ("eps_UB", "eps_LB", "eps_trusted_inf", "no_switching", "two_way_coherent", "two_way_thermal")


def _thresholds_at(loss_db: float) -> dict:
    eval_db = max(loss_db, MIN_LOSS_DB)
    eta = float(db_to_eta(eval_db))
    lb = threshold_solve(rate_lb, eta)
    inf = threshold_trusted_inf(eta)
    ns = threshold_solve(rate_noswitching, eta)
    coh = threshold_solve(lambda e, x: rate_twoway(e, x, 0.5), eta)
    th = threshold_solve(lambda e, x: rate_twoway(e, x, THERMAL_V0), eta)

    def meta(sol):
        return {"iterations": sol.iterations, "residual": sol.residual, "clamped": sol.clamped,
                "multiple_roots": sol.multiple_roots, "eval_loss_db": eval_db}

    return {
        "eps_UB": (1.0, {"eval_loss_db": eval_db}),
        "eps_LB": (lb.excess_noise, meta(lb)),
        "eps_trusted_inf": (inf.excess_noise, {"iterates": inf.iterates, "residual": inf.residual,
                                               "monotone": inf.monotone, "eval_loss_db": eval_db}),
        "no_switching": (ns.excess_noise, meta(ns)),
        "two_way_coherent": (coh.excess_noise, meta(coh)),
        "two_way_thermal": (th.excess_noise, meta(th)),
    }


def sweep_thresholds(loss_db=None, eta=None, workers: int | None = None) -> list[ThresholdCurve]:
    """Threshold curves for every protocol over a loss grid (dB) or an ``eta`` grid.

    ``eps_UB`` is identically 1.  A 0 dB point is evaluated at
    ``MIN_LOSS_DB``.  ``workers > 1`` evaluates grid points in a process pool.
    """
    if (loss_db is None) == (eta is None):
        raise InvalidArgument("give exactly one of loss_db or eta")
    grid = np.sort(np.asarray(loss_db if eta is None else eta_to_db(eta), dtype=float))
    if grid.size == 0:
        raise InvalidArgument("grid must be nonempty")
    if np.any(grid < 0):
        raise InvalidArgument("loss must be >= 0 dB")
    if workers and workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_thresholds_at, grid.tolist()))
    else:
        rows = [_thresholds_at(x) for x in grid.tolist()]
    curves = []
    for name in PROTOCOLS:
        pts = [(float(x), float(row[name][0])) for x, row in zip(grid, rows)]
        curves.append(ThresholdCurve(name, pts, [row[name][1] for row in rows]))
    return curves
