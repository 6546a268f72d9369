"""Command-line interface.

Exit codes: 0 success, 1 selftest failure, 2 usage error, 3 domain error,
4 unwritable output path.  A ``--config FILE`` of ``key=value`` lines
supplies defaults for the subcommand's flags; flags on the command line
win.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import acceptance, bounds, qkd, tele_sim
from .channels import (
    AdditiveNoise,
    Amplifier,
    AmplitudeDamping,
    B1Form,
    CanonicalForm,
    Dephasing,
    Depolarizing,
    Erasure,
    Identity,
    Pauli,
    PureLoss,
    QLimAmplifier,
    ThermalLoss,
)
from .errors import CapBoundsError
from .report import emit

CHANNELS = {
    "pure-loss": (PureLoss, ("eta",)),
    "thermal-loss": (ThermalLoss, ("eta", "nbar")),
    "amplifier": (Amplifier, ("g", "nbar")),
    "ql-amplifier": (QLimAmplifier, ("g",)),
    "additive-noise": (AdditiveNoise, ("xi",)),
    "b1": (B1Form, ()),
    "identity": (Identity, ()),
    "pauli": (Pauli, ("p0", "p1", "p2", "p3")),
    "depolarizing": (Depolarizing, ("p",)),
    "dephasing": (Dephasing, ("p",)),
    "erasure": (Erasure, ("p",)),
    "amplitude-damping": (AmplitudeDamping, ("p",)),
}
CHANNEL_PARAMS = ("eta", "nbar", "g", "xi", "p", "p0", "p1", "p2", "p3")
BOUND_COLUMNS = ["channel", "kind", "value", "formula_id", "zero_clamped", "hierarchy"]


class UsageError(Exception):
    pass


# -- argument helpers ------------------------------------------------------


def parse_grid(text: str) -> tuple[float, float, int]:
    """``start:stop:steps`` -> ``(start, stop, steps)``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like start:stop:steps, got {text!r}")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None
    if steps < 2:
        raise UsageError("a grid needs steps >= 2")
    return start, stop, steps


def parse_list(text: str) -> list[float]:
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}: {exc}") from None
    if not values:
        raise UsageError("list must be nonempty")
    return values


def read_config(path: str) -> list[str]:
    """Turn a ``key=value`` file into argv tokens (``--key value``)."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    tokens = []
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        tokens += ["--" + key.replace("_", "-"), value]
    return tokens


def _split_config(argv: list[str]) -> tuple[list[str], str | None]:
    out, path, i = [], None, 0
    while i < len(argv):
        a = argv[i]
        if a == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a path")
            path = argv[i + 1]
            i += 2
            continue
        if a.startswith("--config="):
            path = a.split("=", 1)[1]
        else:
            out.append(a)
        i += 1
    return out, path


def build_channel(args, need=None):
    name = args.channel
    if name is None:
        raise UsageError("--channel is required")
    cls, names = CHANNELS[name]
    given = {k: getattr(args, k) for k in CHANNEL_PARAMS if getattr(args, k, None) is not None}
    skip = {need} if need else set()
    extra = set(given) - set(names) - skip
    if extra:
        raise UsageError(f"channel {name} does not take {', '.join('--' + e for e in sorted(extra))}")
    missing = [k for k in names if k not in given and k not in skip]
    if missing:
        raise UsageError(f"channel {name} needs {', '.join('--' + m for m in missing)}")
    return cls, names, given


def make_channel(args):
    cls, names, given = build_channel(args)
    return cls(*(given[k] for k in names))


def _flux(channel):
    if isinstance(channel, CanonicalForm):
        return bounds.bound_cv(channel)
    return bounds.flux_dv(channel)


def _bound_row(res) -> dict:
    return {k: v for k, v in res.as_dict().items() if k in BOUND_COLUMNS}


# -- subcommands -----------------------------------------------------------


def cmd_bound(args):
    return BOUND_COLUMNS, [_bound_row(_flux(make_channel(args)))], {}


def cmd_capacity(args):
    channel = make_channel(args)
    res = _flux(channel)
    if res.kind != "capacity":
        if not (isinstance(channel, CanonicalForm) and bounds.is_distillable(channel)):
            raise CapBoundsError(f"{channel.label} with these parameters is not a distillable channel")
        res.kind = "capacity"
    return BOUND_COLUMNS, [_bound_row(res)], {}


def cmd_sweep(args):
    cls, names, given = build_channel(args, need=args.param)
    if args.param not in names:
        raise UsageError(f"channel {args.channel} has no parameter {args.param!r}")
    start, stop, steps = parse_grid(args.grid)
    if args.scale == "linear":
        xs = np.linspace(start, stop, steps)
    elif args.scale == "log":
        if start <= 0 or stop <= 0:
            raise CapBoundsError("log grid needs positive endpoints")
        xs = np.geomspace(start, stop, steps)
    else:
        if args.param != "eta":
            raise UsageError("--scale db applies to --param eta only")
        xs = np.linspace(start, stop, steps)
    col = "loss_db" if args.scale == "db" else args.param
    label = cls.label
    rows = []
    for x in xs.tolist():
        value = float(qkd.db_to_eta(x)) if args.scale == "db" else x
        params = dict(given, **{args.param: value})
        res = _flux(cls(*(params[k] for k in names)))
        rows.append({col: x, label: res.value})
    return [col, label], rows, {}


def cmd_qkd_thresholds(args):
    start, stop, steps = parse_grid(args.db)
    grid = np.sort(np.linspace(start, stop, steps))
    curves = qkd.sweep_thresholds(loss_db=grid, workers=args.workers)
    rows = [{"loss_db": x} for x in grid.tolist()]
    for curve in curves:
        for row, (_, value) in zip(rows, curve.points):
            row[curve.protocol] = value
    return ["loss_db", *qkd.PROTOCOLS], rows, {"min_loss_db": qkd.MIN_LOSS_DB}


def cmd_strong_converse(args):
    form = make_channel(args)
    if not isinstance(form, CanonicalForm):
        raise UsageError("strong-converse supports bosonic channels only")
    if (args.mu is None) != (args.N is None):
        raise UsageError("--mu and --N go together")
    if args.mu is None:
        params = bounds.StrongConverseParams(args.n, args.eps, args.variance, args.variant)
        res = bounds.sc_bound(form, params)
        p = res.params
        cols = ["channel", "variant", "n_uses", "security_eps", "flux", "variance", "value"]
        row = {"channel": res.channel, "variant": args.variant, "n_uses": args.n, "security_eps": args.eps,
               "flux": p["flux"], "variance": p["variance"], "value": res.value}
        return cols, [row], {}
    res, budget = bounds.corrected_pipeline(form, args.n, args.eps, args.mu, args.N)
    p = res.params
    cols = ["channel", "n_uses", "security_eps", "mu", "N_constraint", "delta", "eps_tp",
            "eps_composed", "flux", "variance", "value"]
    row = {"channel": res.channel, "n_uses": args.n, "security_eps": args.eps, "mu": args.mu,
           "N_constraint": args.N, "delta": budget.delta, "eps_tp": budget.eps_tp,
           "eps_composed": budget.eps_composed, "flux": p["flux"], "variance": p["variance"], "value": res.value}
    return cols, [row], {"dropped_terms": p["dropped_terms"]}


def cmd_sim_error(args):
    if args.table == "convergence":
        rep = tele_sim.convergence_diagnostic(parse_list(args.mu_grid), parse_list(args.mu_in_grid))
        rows = [
            {"mu": m, "mu_in": t, "infidelity": rep.infidelity[i, j]}
            for i, m in enumerate(rep.mu_grid.tolist())
            for j, t in enumerate(rep.mu_in_grid.tolist())
        ]
        return ["mu", "mu_in", "infidelity"], rows, {"decay_exponent": rep.decay_exponent}
    if args.mu is None or args.N is None:
        raise UsageError("sim-error needs --mu and --N")
    form = make_channel(args) if args.channel else Identity()
    if not isinstance(form, CanonicalForm):
        raise UsageError("sim-error supports bosonic channels only")
    delta = tele_sim.sim_error_budget(form, args.mu, args.N)
    row = {"mu": args.mu, "N_constraint": args.N, "delta": delta}
    cols = ["mu", "N_constraint", "delta"]
    if (args.n is None) != (args.eps is None):
        raise UsageError("--n and --eps go together")
    if args.n is not None:
        b = tele_sim.peel(args.n, delta, args.eps)
        row.update(n_uses=b.n_uses, security_eps=b.security_eps, eps_tp=b.eps_tp,
                   eps_composed=b.eps_composed, saturated=b.saturated)
        cols += ["n_uses", "security_eps", "eps_tp", "eps_composed", "saturated"]
    return cols, [row], {}


def cmd_selftest(args):
    results = acceptance.run_all()
    for r in results:
        print(r.line())
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed" + (f"; failed: {failed}" if failed else ""))
    return 1 if failed else 0


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output file (default: stdout)")

    chan = argparse.ArgumentParser(add_help=False)
    chan.add_argument("--channel", choices=sorted(CHANNELS))
    for name in CHANNEL_PARAMS:
        chan.add_argument("--" + name, type=float)

    parser = argparse.ArgumentParser(prog="capbounds", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file of flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common, chan], help="flux bound of one channel")
    p.set_defaults(func=cmd_bound)
    p = sub.add_parser("capacity", parents=[common, chan], help="capacity of a distillable channel")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("sweep", parents=[common, chan], help="bound over a grid of one parameter")
    p.add_argument("--param", required=True, choices=CHANNEL_PARAMS)
    p.add_argument("--grid", required=True, help="start:stop:steps")
    p.add_argument("--scale", choices=("linear", "log", "db"), default="linear")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("qkd-thresholds", parents=[common], help="excess-noise thresholds against loss")
    p.add_argument("--db", default="0:30:61", help="loss grid in dB, start:stop:steps")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_qkd_thresholds)

    p = sub.add_parser("strong-converse", parents=[common, chan], help="finite-n strong-converse bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--variant", choices=bounds.VARIANTS, default="chebyshev")
    p.add_argument("--variance", type=float)
    p.add_argument("--mu", type=float, help="resource energy; with --N selects the corrected pipeline")
    p.add_argument("--N", type=float, help="input energy constraint")
    p.set_defaults(func=cmd_strong_converse)

    p = sub.add_parser("sim-error", parents=[common, chan], help="simulation error and its n-use budget")
    p.add_argument("--mu", type=float)
    p.add_argument("--N", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--table", choices=("budget", "convergence"), default="budget")
    p.add_argument("--mu-grid", default="1,10,100,1000")
    p.add_argument("--mu-in-grid", default="0.5,1,10,100,1000,10000")
    p.set_defaults(func=cmd_sim_error)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def _write(text: str, path: str | None) -> int:
    if path is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc.strerror or exc}", file=sys.stderr)
        return 4
    return 0


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        argv, config = _split_config(list(argv))
        if config is not None:
            # config tokens go right after the subcommand so later flags override them
            tokens = read_config(config)
            cmd_at = next((i for i, a in enumerate(argv) if not a.startswith("-")), None)
            if cmd_at is None:
                raise UsageError("no subcommand given")
            argv = argv[: cmd_at + 1] + tokens + argv[cmd_at + 1 :]
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"capbounds: error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
        if isinstance(result, int):
            return result
        columns, rows, extra = result
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"capbounds {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except CapBoundsError as exc:
        print(f"capbounds {args.command}: domain error: {exc}", file=sys.stderr)
        return 3
    params = {
        k: v for k, v in sorted(vars(args).items())
        if v is not None and k not in ("func", "command", "out", "format", "config")
    }
    meta = {"command": args.command, "params": params, **extra}
    return _write(emit(columns, rows, args.format, meta), args.out)


def main(argv=None) -> None:
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
