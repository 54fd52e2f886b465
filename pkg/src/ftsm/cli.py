"""Command-line front end.

Subcommands: ``kernel``, ``simulate``, ``cf``, ``codiff`` and ``verify``.
Options may also come from a flat ``key = value`` file passed with
``--config``; flags given on the command line override it.

Exit codes: 0 success, 1 a verification check failed, 2 invalid configuration.
"""

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__
from .kernel import KernelParams, Regime, c_norm, g_exponent, kernel_eval, kernel_lp_const, lp_integrable
from .measure import parse_measure, series_constants

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG = 0, 1, 2
KINDS = ("ts", "ftsm", "fsm", "fbm", "coupled")
CF_KINDS = ("ts", "ftsm", "fsm", "short", "long")


class ConfigError(ValueError):
    pass


def read_config(path):
    """Parse a flat ``key = value`` file; '#' starts a comment, dashes in keys become underscores."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def _model_args(p, need_rho=True):
    p.add_argument("--H", type=float, required=True, help="Hurst-type index H")
    p.add_argument("--alpha", type=float, required=True, help="stability index in (0, 2)")
    if need_rho:
        p.add_argument("--rho", default="rho1", help="inner measure: rho1, rho2, rho2(a) or x1:w1,x2:w2")


def build_parser():
    parser = argparse.ArgumentParser(prog="ftsm", description="Fractional tempered stable motion toolkit.")
    parser.add_argument("--version", action="version", version=f"ftsm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat key = value file with defaults for this command")
        return p

    p = add("kernel", "evaluate the Volterra kernel K(t, s)")
    _model_args(p, need_rho=False)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--p", type=float, help="also print the L^p constant C_{H,alpha,p}")

    p = add("simulate", "simulate sample paths to CSV")
    p.add_argument("--kind", choices=KINDS, default="ftsm")
    _model_args(p)
    p.add_argument("--T", type=float, default=1.0, help="horizon")
    p.add_argument("--grid-n", type=int, default=100, help="number of grid steps on [0, T]")
    p.add_argument("--terms", type=int, default=500, help="series terms (N for --kind fbm)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--remainder", choices=("gaussian", "none"), default="gaussian")
    p.add_argument("--out", default="paths.csv")

    p = add("cf", "characteristic function values")
    p.add_argument("--kind", choices=CF_KINDS, default="ftsm")
    _model_args(p)
    p.add_argument("--y", type=float, nargs="+", default=[1.0])
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--h", type=float, default=1.0, help="time scale for --kind short/long")

    p = add("codiff", "codifference of L_{t+1} - L_t and L_1")
    _model_args(p)
    p.add_argument("--theta1", type=float, default=1.0)
    p.add_argument("--theta2", type=float, default=-1.0)
    p.add_argument("--t", type=float, nargs="+", default=[10.0])

    p = add("verify", "run verification checks")
    p.add_argument("--suite", default="all",
                   choices=("covariance", "qv", "lrd", "gauss", "cf", "holder", "all"))
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--scale", type=float, default=1.0, help="multiplier on replication counts")
    p.add_argument("--json", dest="json_out", help="write the report array to this file ('-' for stdout)")

    for p in sub.choices.values():
        p.add_argument("--workers", type=int, help="worker threads (default: FTSM_WORKERS or 1)")
    return parser


def _config_path(argv):
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def parse_args(argv=None):
    """Parse flags, with defaults taken from the ``--config`` file when one is given."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    path = _config_path(argv)
    command = next((tok for tok in argv if tok in COMMANDS), None)
    if path and command:
        sub = parser._subparsers._group_actions[0].choices[command]
        known = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, value in read_config(path).items():
            if key not in known or key in ("help", "config"):
                raise ConfigError(f"unknown configuration key '{key}' for '{command}'")
            action = known[key]
            conv = action.type or str
            try:
                if action.nargs in ("+", "*"):
                    defaults[key] = [conv(v) for v in value.replace(",", " ").split()]
                else:
                    defaults[key] = conv(value)
            except ValueError:
                raise ConfigError(f"invalid value for {key}: {value!r}") from None
            if action.choices is not None and defaults[key] not in action.choices:
                raise ConfigError(f"{key}={value} not in {sorted(action.choices)}")
            action.required = False
        sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _params(args):
    try:
        return KernelParams(args.H, args.alpha)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _rho(args):
    try:
        return parse_measure(args.rho, args.alpha)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _resolved(args):
    # output location and thread count do not affect results, so they stay out of the record
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("config", "out", "workers")}


def _fmt(x):
    return repr(float(x))


def _complex_str(z):
    return f"{z.real!r}{z.imag:+.17g}j"


def cmd_kernel(args, out):
    params = _params(args)
    if args.t <= 0:
        raise ConfigError("t must be positive")
    k = float(kernel_eval(params, args.t, args.s))
    print(f"K={k:.17g}", file=out)
    print(f"G={g_exponent(params):.17g}", file=out)
    print(f"regime={params.regime.value}", file=out)
    if params.regime is not Regime.LEVY:
        print(f"c_norm={c_norm(params):.17g}", file=out)
    if args.p is not None:
        if not lp_integrable(params, args.p):
            raise ConfigError(f"K is not in L^{args.p:g}: need H in (1/alpha - 1/p, 1/alpha + 1/p)")
        print(f"C_p={kernel_lp_const(params, args.p):.17g}", file=out)
    return EXIT_OK


def _simulate(args, params, rho, grid):
    from . import series

    if args.kind == "fbm":
        path = series.simulate_fbm_approx(args.seed, params, args.terms, grid, n_reps=args.reps, T=args.T)
        return {"value": path.values}, path

    consts = series_constants(rho, args.alpha, args.T)
    n = args.terms

    def block(offset, count):
        d = series.make_driver(args.seed, args.T, n, rho, args.alpha, n_reps=count, rep_offset=offset)
        if args.kind == "ts":
            return series.simulate_ts(d, consts, grid, args.remainder).values[..., None]
        if args.kind == "ftsm":
            return series.simulate_ftsm(d, params, consts, grid, args.remainder).values[..., None]
        if args.kind == "fsm":
            return series.simulate_fsm(d, params, consts, grid, args.remainder).values[..., None]
        a = series.simulate_ftsm(d, params, consts, grid, args.remainder).values
        b = series.simulate_ts(d, consts, grid, args.remainder).values
        return np.stack([a, b], axis=-1)

    chunk = max(1, min(1000, 1_000_000 // n))
    values = series.replicate(block, args.reps, chunk=chunk, workers=args.workers)
    probe = series.make_driver(args.seed, args.T, n, rho, args.alpha)
    flags = {"tail_bound": series.tail_bound(probe), "remainder": args.remainder}
    if args.kind == "coupled":
        return {"ftsm": values[..., 0], "ts": values[..., 1]}, flags
    return {"value": values[..., 0]}, flags


def cmd_simulate(args, out):
    params = _params(args)
    rho = _rho(args)
    if args.T <= 0 or args.grid_n < 1 or args.terms < 1 or args.reps < 1:
        raise ConfigError("T, grid-n, terms and reps must be positive")
    if args.kind == "fsm" and args.alpha == 1.0 and not rho.is_symmetric:
        raise ConfigError("fsm with alpha = 1 requires a symmetric inner measure")
    series_constants(rho, args.alpha, args.T)
    if params.regime is Regime.ROUGH:
        print("ftsm: warning: H < 1/alpha, paths are unbounded on every interval; grid values are still defined",
              file=sys.stderr)
    grid = np.linspace(0.0, args.T, args.grid_n + 1)
    columns, extra = _simulate(args, params, rho, grid)
    flags = extra.flags if hasattr(extra, "flags") else extra
    if params.regime is Regime.ROUGH:
        flags = dict(flags, unbounded_regime=True)
    config = _resolved(args)
    config["rho_atoms"] = rho.to_dict()
    names = list(columns)
    with open(args.out, "w", newline="") as fh:
        fh.write(f"# ftsm {__version__}\n")
        fh.write(f"# seed={args.seed} kind={args.kind} H={args.H!r} alpha={args.alpha!r} rho={args.rho} "
                 f"T={args.T!r} grid_n={args.grid_n} terms={args.terms} reps={args.reps} "
                 f"remainder={args.remainder}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rep", "t"] + names)
        for r in range(args.reps):
            for g, t in enumerate(grid):
                w.writerow([r, _fmt(t)] + [_fmt(columns[c][r, g]) for c in names])
    sidecar = {"version": __version__, "config": config, "flags": flags, "columns": ["rep", "t"] + names}
    with open(args.out + ".json", "w") as fh:
        json.dump(_json_safe(sidecar), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out} ({args.reps} x {grid.size} rows) and {args.out}.json", file=out)
    return EXIT_OK


def _json_safe(obj):
    from .verify import _jsonable

    return _jsonable(obj)


def cmd_cf(args, out):
    from . import charfn

    params = _params(args)
    rho = _rho(args)
    if args.h <= 0 or args.t < 0:
        raise ConfigError("h must be positive and t nonnegative")
    for y in args.y:
        if args.kind == "ts":
            z = charfn.cf_ts(y, args.t, rho, args.alpha)
        elif args.kind == "ftsm":
            z = charfn.cf_ftsm(y, args.t, params, rho)
        elif args.kind == "fsm":
            z = charfn.cf_fsm(y, args.t, params, rho)
        elif args.kind == "short":
            z = charfn.cf_rescaled_short(y, args.t, params, rho, args.h)
        else:
            z = charfn.cf_rescaled_long(y, params, rho, args.h)
        print(f"y={y!r} cf={_complex_str(z)}", file=out)
    return EXIT_OK


def cmd_codiff(args, out):
    from . import charfn

    params = _params(args)
    rho = _rho(args)
    if any(t < 1 for t in args.t):
        raise ConfigError("codifference needs t >= 1")
    for t in args.t:
        z = charfn.codifference(args.theta1, args.theta2, t, params, rho)
        print(f"t={t!r} codifference={_complex_str(complex(z))}", file=out)
    if args.alpha != 1.0:
        c = charfn.codifference_asymptotic_constant(args.theta1, args.theta2, params, rho)
        print(f"asymptotic_constant={_complex_str(complex(c))} exponent={2 * (params.G - 1):.17g}", file=out)
    return EXIT_OK


def cmd_verify(args, out):
    from . import verify

    if args.scale <= 0:
        raise ConfigError("scale must be positive")
    reports = verify.run_suite(args.suite, args.seed, scale=args.scale, workers=args.workers)
    print(verify.format_table(reports), file=out)
    failed = [r.name for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed", file=out)
    if args.json_out:
        text = json.dumps([r.to_dict() for r in reports], indent=2)
        if args.json_out == "-":
            print(text, file=out)
        else:
            with open(args.json_out, "w") as fh:
                fh.write(text + "\n")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


COMMANDS = {"kernel": cmd_kernel, "simulate": cmd_simulate, "cf": cmd_cf, "codiff": cmd_codiff,
            "verify": cmd_verify}


def run(args, out=None):
    """Dispatch parsed ``args``; returns the exit status."""
    out = sys.stdout if out is None else out
    if getattr(args, "workers", None) is not None and args.workers < 1:
        raise ConfigError("workers must be at least 1")
    return COMMANDS[args.command](args, out)


def main(argv=None):
    try:
        args = parse_args(argv)
        return run(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"ftsm: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
