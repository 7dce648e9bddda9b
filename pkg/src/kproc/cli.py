"""Command-line interface: environment sampling, simulation, analytic
evaluation, aging experiments, and the verification suite.

Every command is deterministic given its flags; all randomness flows from
the explicit --seed. A JSON config file may supply any long-flag value
(keys use the flag spelling, hyphens or underscores); flags given on the
command line override the file.

Exit statuses: 0 success, 1 verification-check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .aging import CONDITIONAL, INDICATOR, AgingCurve, c_theta, lambda0, lambda0_density, \
    lambda0_prime, lambda_hat, lambda_mc, lambda_tilde, write_curve_csv
from .analytics import corr_transform, entrance_transform, first_hit_transform, green, \
    green_xy, laplace_exit, omega
from .env import load_env, sample_gamma, save_env
from .kprocess import KParams, simulate_k, write_trajectory_csv
from .rng import SeedSpec
from .states import INFINITY
from .trapmodel import UNIFORM, load_trap_env, sample_trap_env, simulate_trap
from .verify import DEFAULT_SEED, GROUP_NAMES, run_verify, write_report

__all__ = ["main"]

_T_GRID_DEFAULT = (1e-2, 1e-3, 1e-4)
_THETA_GRID_DEFAULT = (0.25, 0.5, 1.0, 2.0, 4.0)


def _apply_config(args: argparse.Namespace) -> None:
    """Fill unset (None) options from the JSON config file, if given."""
    if getattr(args, "config", None) is None:
        return
    with open(args.config) as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict):
        raise ValueError("config file must hold a JSON object")
    for key, value in payload.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ValueError(f"missing required option --{name.replace('_', '-')}")


def _floats(tokens, what: str) -> np.ndarray:
    if tokens is None:
        raise ValueError(f"missing {what}")
    flat: list[float] = []
    for tok in tokens if isinstance(tokens, (list, tuple)) else [tokens]:
        for piece in str(tok).split(","):
            if piece.strip():
                flat.append(float(piece))
    if not flat:
        raise ValueError(f"empty {what}")
    return np.array(flat)


def _parse_start(token, n_hint: str = "site index") -> object:
    if token is None:
        return INFINITY
    text = str(token).strip().lower()
    if text in ("inf", "infinity", "uniform"):
        return INFINITY
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"start must be 'inf' or a {n_hint}, got {token!r}") from None


def cmd_env_sample(args: argparse.Namespace) -> int:
    _apply_config(args)
    _require(args, "alpha", "terms", "seed", "out")
    env = sample_gamma(float(args.alpha), int(args.terms), SeedSpec(int(args.seed)))
    save_env(env, args.out)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    _apply_config(args)
    _require(args, "model", "horizon", "seed")
    model = str(args.model)
    horizon = float(args.horizon)
    seed = SeedSpec(int(args.seed))
    if model == "k":
        _require(args, "env")
        env = load_env(args.env)
        c = 0.0 if args.c is None else float(args.c)
        n = None if args.n is None else int(args.n)
        start = _parse_start(args.start)
        traj = simulate_k(KParams(env=env, c=c, n=n), start, horizon, seed)
    elif model == "trap":
        if args.trap_env is not None:
            trap = load_trap_env(args.trap_env)
        else:
            _require(args, "n", "alpha")
            # the environment draw uses substream 1; the path uses substream 0
            trap = sample_trap_env(int(args.n), float(args.alpha), seed.child(1))
        start = _parse_start(args.start)
        start = UNIFORM if start is INFINITY else start
        traj = simulate_trap(trap, start, horizon, seed)
    else:
        raise ValueError(f"unknown model {model!r}; choose 'k' or 'trap'")
    if args.out is None:
        write_trajectory_csv(traj, sys.stdout)
    else:
        write_trajectory_csv(traj, args.out)
    return 0


def _print_value(value: float) -> None:
    print(f"{value:.15g}")


def _print_transform(result) -> None:
    _print_value(result.value)
    print(f"# truncation_error_bound {result.truncation_error_bound:.15g}")


def cmd_analytic(args: argparse.Namespace) -> int:
    _apply_config(args)
    name = args.name

    def env():
        _require(args, "env")
        return load_env(args.env)

    if name == "exit":
        _require(args, "gamma_x", "lam")
        _print_value(laplace_exit(float(args.gamma_x), float(args.lam)))
    elif name == "entrance":
        _require(args, "env", "set", "lam")
        sites = [int(v) for v in _floats(args.set, "--set")]
        y = None if args.y is None else int(args.y)
        result = entrance_transform(env(), sites, float(args.lam),
                                    from_infinity=y is None, y=y)
        _print_transform(result)
    elif name == "green":
        _require(args, "env", "lam", "x")
        x = _parse_start(args.x)
        _print_transform(green(env(), float(args.c or 0.0), float(args.lam), x))
    elif name == "green-xy":
        _require(args, "env", "lam", "x", "y")
        x = _parse_start(args.x)
        _print_transform(green_xy(env(), float(args.c or 0.0), float(args.lam),
                                  x, int(args.y)))
    elif name == "corr":
        _require(args, "env", "lam", "mu")
        _print_transform(corr_transform(env(), float(args.lam), float(args.mu)))
    elif name == "first-hit":
        _require(args, "env", "x", "lam")
        _print_transform(first_hit_transform(env(), float(args.c or 0.0),
                                             int(args.x), float(args.lam)))
    elif name == "omega":
        _require(args, "env", "i", "j", "r")
        _print_transform(omega(env(), int(args.i), int(args.j), float(args.r)))
    elif name == "lambda0":
        _require(args, "theta", "alpha")
        _print_value(lambda0(float(args.theta), float(args.alpha)))
    elif name == "lambda0-prime":
        _require(args, "theta", "alpha")
        _print_value(lambda0_prime(float(args.theta), float(args.alpha)))
    elif name == "lambda0-density":
        _require(args, "z", "alpha")
        _print_value(lambda0_density(float(args.z), float(args.alpha)))
    elif name == "c-theta":
        _require(args, "theta", "alpha")
        _print_value(c_theta(float(args.theta), float(args.alpha)))
    elif name == "lambda-hat":
        _require(args, "theta", "alpha")
        _print_value(lambda_hat(float(args.theta), float(args.alpha)))
    elif name == "lambda-tilde":
        _require(args, "theta", "alpha")
        _print_value(lambda_tilde(float(args.theta), float(args.alpha)))
    else:
        raise ValueError(f"unknown analytic name {name!r}")
    return 0


def cmd_aging_curve(args: argparse.Namespace) -> int:
    _apply_config(args)
    _require(args, "seed")
    reps = 0 if args.reps is None else int(args.reps)
    if reps < 1:
        raise ValueError("reps must be a positive integer")
    estimator_token = (args.estimator or "conditional").lower()
    estimators = {"indicator": INDICATOR, "conditional": CONDITIONAL}
    if estimator_token not in estimators:
        raise ValueError(f"unknown estimator {args.estimator!r}")
    estimator = estimators[estimator_token]
    seed = SeedSpec(int(args.seed))
    workers = 1 if args.workers is None else int(args.workers)

    if args.env is not None:
        environment = load_env(args.env)
    else:
        _require(args, "alpha", "terms")
        environment = sample_gamma(float(args.alpha), int(args.terms), seed)
    params = KParams(env=environment, c=0.0)

    grid = _floats(args.theta if args.theta else list(_THETA_GRID_DEFAULT), "--theta")
    t_values = _floats(args.t if args.t else list(_T_GRID_DEFAULT), "--t")
    out_dir = args.out_dir or "."
    os.makedirs(out_dir, exist_ok=True)

    limit_values = np.array([lambda0(th, environment.alpha) for th in grid])
    limit_curve = AgingCurve(theta_grid=grid, values=limit_values,
                             std_errors=np.array([]), alpha=environment.alpha)
    write_curve_csv(limit_curve, os.path.join(out_dir, "lambda0.csv"))

    max_deviation = {}
    for k, t in enumerate(t_values):
        curve = lambda_mc(params, float(t), grid, reps, seed.child((k + 1) << 20),
                          estimator=estimator, workers=workers)
        write_curve_csv(curve, os.path.join(out_dir, f"lambda_t={t:g}.csv"))
        max_deviation[f"{t:g}"] = float(np.max(np.abs(curve.values - limit_values)))

    summary = {
        "alpha": environment.alpha,
        "estimator": estimator_token,
        "reps": reps,
        "seed": int(args.seed),
        "theta_grid": grid.tolist(),
        "max_deviation": max_deviation,
    }
    with open(os.path.join(out_dir, "aging_summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    _apply_config(args)
    only: list[str] = []
    for tok in args.only or []:
        only.extend(p.strip() for p in tok.split(",") if p.strip())
    tolerances = {}
    for tok in args.tolerance or []:
        name, _, value = tok.partition("=")
        if not value:
            raise ValueError(f"--tolerance expects NAME=VALUE, got {tok!r}")
        tolerances[name.strip()] = float(value)
    seed = DEFAULT_SEED if args.seed is None else int(args.seed)
    workers = 1 if args.workers is None else int(args.workers)

    report = run_verify(only=only or None, seed=seed, workers=workers,
                        tolerances=tolerances)
    if args.out is not None:
        write_report(report, args.out)
    for check in report["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"{status} {check['name']}: measured {check['measured']:.6g} "
              f"{check['comparison']} tolerance {check['tolerance']:.6g}")
        if "note" in check:
            print(f"     note: {check['note']}")
    failed = sum(1 for c in report["checks"] if not c["passed"])
    total = len(report["checks"])
    print(f"{total - failed}/{total} checks passed")
    return 0 if report["all_passed"] else 1


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON file supplying defaults for any option")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kproc",
        description="Simulation and verification toolkit for uniform-entrance "
                    "jump processes and the complete-graph trap model.")
    commands = parser.add_subparsers(dest="command", required=True)

    env_cmd = commands.add_parser("env", help="environment operations")
    env_sub = env_cmd.add_subparsers(dest="subcommand", required=True)
    sample = env_sub.add_parser("sample", help="sample a heavy-tailed environment")
    sample.add_argument("--alpha", type=float)
    sample.add_argument("--terms", type=int)
    sample.add_argument("--seed", type=int)
    sample.add_argument("--out")
    _add_common(sample)
    sample.set_defaults(func=cmd_env_sample)

    sim = commands.add_parser("simulate", help="simulate a trajectory to CSV")
    sim.add_argument("--model", choices=["k", "trap"])
    sim.add_argument("--env", help="environment JSON (model k)")
    sim.add_argument("--trap-env", help="trap environment JSON (model trap)")
    sim.add_argument("--n", type=int, help="truncation level / graph size")
    sim.add_argument("--alpha", type=float, help="tail index (sampling a trap env)")
    sim.add_argument("--c", type=float, help="unstable-holding weight (model k)")
    sim.add_argument("--start", help="'inf' (uniform entrance) or a site index")
    sim.add_argument("--horizon", type=float)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", help="CSV path (stdout when omitted)")
    _add_common(sim)
    sim.set_defaults(func=cmd_simulate)

    ana = commands.add_parser("analytic", help="evaluate a closed form")
    ana.add_argument("name", help="exit | entrance | green | green-xy | corr | "
                                  "first-hit | omega | lambda0 | lambda0-prime | "
                                  "lambda0-density | c-theta | lambda-hat | lambda-tilde")
    ana.add_argument("--env")
    ana.add_argument("--gamma-x", type=float, dest="gamma_x")
    ana.add_argument("--lam", type=float)
    ana.add_argument("--mu", type=float)
    ana.add_argument("--c", type=float)
    ana.add_argument("--x")
    ana.add_argument("--y", type=int)
    ana.add_argument("--set", help="comma-separated site indices")
    ana.add_argument("--r", type=float)
    ana.add_argument("--i", type=int)
    ana.add_argument("--j", type=int)
    ana.add_argument("--theta", type=float)
    ana.add_argument("--z", type=float)
    ana.add_argument("--alpha", type=float)
    _add_common(ana)
    ana.set_defaults(func=cmd_analytic)

    aging_cmd = commands.add_parser("aging", help="aging experiments")
    aging_sub = aging_cmd.add_subparsers(dest="subcommand", required=True)
    curve = aging_sub.add_parser("curve", help="Monte Carlo aging curves plus the limit")
    curve.add_argument("--env", help="environment JSON (else sampled from --alpha/--terms)")
    curve.add_argument("--alpha", type=float)
    curve.add_argument("--terms", type=int)
    curve.add_argument("--t", action="append", help="observation time (repeatable)")
    curve.add_argument("--theta", action="append", help="theta grid point or comma list")
    curve.add_argument("--reps", type=int)
    curve.add_argument("--seed", type=int)
    curve.add_argument("--estimator", help="indicator | conditional")
    curve.add_argument("--workers", type=int)
    curve.add_argument("--out-dir", dest="out_dir")
    _add_common(curve)
    curve.set_defaults(func=cmd_aging_curve)

    ver = commands.add_parser("verify", help="run the acceptance checks")
    ver.add_argument("--only", action="append",
                     help=f"check group (repeatable): {', '.join(GROUP_NAMES)}")
    ver.add_argument("--tolerance", action="append", metavar="NAME=VALUE",
                     help="override a check tolerance (repeatable)")
    ver.add_argument("--seed", type=int)
    ver.add_argument("--workers", type=int)
    ver.add_argument("--out", help="write the JSON report here")
    _add_common(ver)
    ver.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
