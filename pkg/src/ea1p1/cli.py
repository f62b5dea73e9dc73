"""Command-line front end.

Subcommands: ``bounds`` (closed forms), ``mc`` (one-step Monte Carlo),
``sweep`` (experiment tables + figures), ``run`` (trajectories), and
``opt-sigma`` (optimal mutation scale for the cheating jump).

Exit codes: 0 success, 2 invalid arguments, 3 runtime or numerical error.
Every stochastic subcommand requires an explicit ``--seed``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__, bounds as bd
from .core import Algorithm, initial_state, run as run_trajectory
from .errors import Ea1p1Error
from .harness import (
    EXPERIMENTS,
    MC_EXPERIMENTS,
    default_sweep_spec,
    emit_csv,
    run_sweep,
)
from .montecarlo import (
    McConfig,
    McEstimate,
    estimate_improvement_rate,
    estimate_success_probability,
    estimate_transition_mix,
)
from .numerics import maximize_1d
from .problems import ProblemKind, ProblemSpec, TransitionKind
from .sampler import Placement, PlacementKind, RngStream, place

_PLACEMENTS = {
    "single-axis": PlacementKind.SINGLE_AXIS,
    "equal": PlacementKind.EQUAL_COORDINATES,
    "shell": PlacementKind.UNIFORM_ON_SHELL,
}


def _positive_float(text: str) -> float:
    value = float(text)
    if not (value > 0.0) or not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a positive finite number, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def _print_kv(**pairs) -> None:
    for key, value in pairs.items():
        if value is None:
            continue
        if isinstance(value, float):
            print(f"{key}={_fmt(value)}")
        else:
            print(f"{key}={value}")


def _problem_from_args(args) -> ProblemSpec:
    if args.problem == "sphere":
        if getattr(args, "m", None) is not None:
            raise Ea1p1Error("--m applies to the cheating problem only")
        return ProblemSpec.sphere(args.n)
    if args.m is None:
        raise Ea1p1Error("the cheating problem requires --m")
    return ProblemSpec.cheating(args.n, args.m)


def _print_bound_value(bv: bd.BoundValue, **inputs) -> None:
    _print_kv(formula=bv.formula_id, kind=bv.kind.value, **inputs)
    if bv.kind is bd.BoundKind.INTERVAL:
        _print_kv(lower=bv.lower, upper=bv.upper)
    else:
        _print_kv(value=bv.value)


def _cmd_bounds(args) -> int:
    c, sigma, n, m = args.c, args.sigma, args.n, args.m
    fid = args.formula
    needs_m = fid.startswith("p_cht") or fid.startswith("ir_cht")
    if needs_m and m is None:
        raise Ea1p1Error(f"formula {fid} requires --m")
    inputs = {"c": c, "sigma": sigma, "n": n}
    if m is not None:
        inputs["m"] = m
    if fid == "p_sph_1d":
        _print_bound_value(bd.p_sph_1d(c, sigma), **inputs)
    elif fid == "p_sph_rus":
        # RUS formulas need a shell point; the CLI evaluates the
        # equal-coordinates configuration on the shell C.
        xs = np.full(n, math.sqrt(c / n))
        exact, interval = bd.p_sph_rus(xs, sigma, c=c)
        _print_bound_value(exact, **inputs)
        _print_kv(interval_lower=interval.lower, interval_upper=interval.upper)
    elif fid == "p_sph_ep":
        _print_bound_value(bd.p_sph_ep_bounds(c, sigma, n), **inputs)
    elif fid == "ir_sph_1d":
        _print_bound_value(bd.ir_sph_1d(c, sigma), **inputs)
    elif fid == "ir_sph_rus":
        xs = np.full(n, math.sqrt(c / n))
        _print_bound_value(bd.ir_sph_rus(xs, sigma, c=c), **inputs)
    elif fid == "ir_sph_ep":
        _print_bound_value(bd.ir_sph_ep_bounds(c, sigma, n), **inputs)
    elif fid == "p_cht_1d":
        _print_bound_value(bd.p_cht_1d(m, c, sigma), **inputs)
    elif fid == "p_cht_ep":
        _print_bound_value(bd.p_cht_ep_bounds(m, c, sigma, n), **inputs)
    elif fid == "ir_cht_1d":
        _print_bound_value(bd.ir_cht_1d(m, c, sigma), **inputs)
    elif fid == "ir_cht_ep":
        _print_bound_value(bd.ir_cht_ep_bounds(m, c, sigma, n), **inputs)
    else:  # argparse choices make this unreachable
        raise Ea1p1Error(f"unknown formula {fid}")
    return 0


def _print_estimate(est: McEstimate, prefix: str = "") -> None:
    _print_kv(**{
        f"{prefix}mean": est.mean,
        f"{prefix}std_error": est.std_error,
        f"{prefix}ci_lo": est.ci[0],
        f"{prefix}ci_hi": est.ci[1],
        f"{prefix}samples": est.samples,
        f"{prefix}successes": est.successes,
    })


def _cmd_mc(args) -> int:
    problem = _problem_from_args(args)
    cfg = McConfig(
        samples=args.samples,
        master_seed=args.seed,
        partitions=args.partitions,
    )
    if args.target == "exploit":
        target = TransitionKind.EXPLOITATION
        shell = args.c
    else:
        target = TransitionKind.RIGHT_EXPLORATION
        if args.m is None:
            raise Ea1p1Error("--target explore requires the cheating problem (--m)")
        shell = 2.0 * args.m + 1.0 - args.c
    placement = Placement(_PLACEMENTS[args.placement], shell)
    algo = Algorithm(args.algo)
    if args.metric == "probability":
        est = estimate_success_probability(
            problem, algo, placement, args.c, args.sigma, target, cfg
        )
        _print_estimate(est)
    elif args.metric == "improvement":
        est = estimate_improvement_rate(
            problem, algo, placement, args.c, args.sigma, target, cfg
        )
        _print_estimate(est)
    else:  # transitions
        mix = estimate_transition_mix(problem, algo, placement, args.c, args.sigma, cfg)
        for kind, est in mix.items():
            _print_estimate(est, prefix=f"{kind.value}_")
    return 0


def _cmd_sweep(args) -> int:
    if args.experiment in MC_EXPERIMENTS and args.seed is None:
        raise _ArgumentDomainError(
            f"experiment {args.experiment!r} is stochastic and requires --seed"
        )
    spec = default_sweep_spec(
        args.experiment,
        samples=args.samples,
        seed=args.seed,
        output_path=args.out,
        dims=tuple(args.dims) if args.dims else None,
    )
    table = run_sweep(spec)
    emit_csv(table, args.out)
    print(f"wrote {len(table.rows)} rows to {args.out}")
    if not args.no_plot:
        from .plots import render_sweep_figure

        figure_path = os.path.splitext(args.out)[0] + ".png"
        render_sweep_figure(table, figure_path)
        print(f"wrote figure to {figure_path}")
    for key in ("experiment", "seed", "samples"):
        if key in table.metadata:
            print(f"{key}={table.metadata[key]}")
    return 0


def _cmd_run(args) -> int:
    problem = _problem_from_args(args)
    if args.init_norm2 is not None:
        shell = args.init_norm2
    elif problem.kind is ProblemKind.SPHERE:
        shell = 1.0
    else:
        shell = 1.5 * problem.m  # inside the cheating shell
    stream = RngStream(args.seed, stream_id=0)
    x0 = place(Placement(_PLACEMENTS[args.placement], shell), problem.n, stream)
    state = initial_state(problem, x0)
    final, records = run_trajectory(
        problem, Algorithm(args.algo), state, args.sigma, args.generations, stream
    )
    accepted = sum(1 for r in records if r.accepted)
    mix = {kind: 0 for kind in TransitionKind}
    for rec in records:
        mix[rec.transition] += 1
    _print_kv(
        generations=len(records),
        initial_fitness=state.fitness,
        final_fitness=final.fitness,
        final_norm2=float(final.x @ final.x),
        accepted=accepted,
        total_improvement=state.fitness - final.fitness,
    )
    for kind in TransitionKind:
        _print_kv(**{kind.value: mix[kind]})
    return 0


def _cmd_opt_sigma(args) -> int:
    closed = bd.optimal_sigma_cht_1d(args.m, args.c)
    result = maximize_1d(
        lambda s: bd.p_cht_1d(args.m, args.c, s).value,
        bracket=(0.25 * closed, 3.0 * closed),
        tol=1e-6,
    )
    _print_kv(
        m=args.m,
        c=args.c,
        sigma_closed_form=closed,
        sigma_numeric=result.arg,
        difference=abs(closed - result.arg),
        p_hit_at_optimum=bd.p_cht_1d(args.m, args.c, closed).value,
    )
    return 0


class _ArgumentDomainError(Ea1p1Error):
    """Invalid argument combination detected after parsing (exit code 2)."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ea1p1",
        description="Exploitation/exploration metrics of elitist (1+1) EAs "
        "under Gaussian mutation: closed-form bounds, Monte-Carlo "
        "estimation, and experiment sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"ea1p1 {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_problem_args(p, need_n=True):
        p.add_argument("--problem", choices=["sphere", "cheating"], required=True)
        if need_n:
            p.add_argument("--n", type=_positive_int, required=True, help="dimension")
        p.add_argument("--m", type=_positive_float, help="cheating plateau boundary M")

    p_bounds = sub.add_parser("bounds", help="evaluate one closed-form bound")
    add_problem_args(p_bounds)
    p_bounds.add_argument("--formula", choices=list(bd.FORMULA_IDS), required=True)
    p_bounds.add_argument("--c", type=_positive_float, required=True)
    p_bounds.add_argument("--sigma", type=_positive_float, required=True)
    p_bounds.set_defaults(func=_cmd_bounds)

    p_mc = sub.add_parser("mc", help="one-step Monte-Carlo estimate")
    add_problem_args(p_mc)
    p_mc.add_argument("--algo", choices=["rus", "ep"], required=True)
    p_mc.add_argument("--placement", choices=list(_PLACEMENTS), default="single-axis")
    p_mc.add_argument("--c", type=_positive_float, required=True)
    p_mc.add_argument("--sigma", type=_positive_float, required=True)
    p_mc.add_argument("--target", choices=["exploit", "explore"], required=True)
    p_mc.add_argument("--samples", type=_positive_int, required=True)
    p_mc.add_argument("--seed", type=int, required=True)
    p_mc.add_argument("--partitions", type=_positive_int, default=1)
    p_mc.add_argument(
        "--metric",
        choices=["probability", "improvement", "transitions"],
        default="probability",
    )
    p_mc.set_defaults(func=_cmd_mc)

    p_sweep = sub.add_parser("sweep", help="run an experiment, write CSV + figure")
    p_sweep.add_argument("--experiment", choices=list(EXPERIMENTS), required=True)
    p_sweep.add_argument("--out", required=True, help="CSV output path")
    p_sweep.add_argument("--samples", type=_positive_int, default=1_000_000)
    p_sweep.add_argument("--seed", type=int, help="required for stochastic experiments")
    p_sweep.add_argument("--dims", type=_positive_int, nargs="+")
    p_sweep.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_run = sub.add_parser("run", help="run a seeded trajectory")
    add_problem_args(p_run)
    p_run.add_argument("--algo", choices=["rus", "ep"], required=True)
    p_run.add_argument("--sigma", type=_positive_float, required=True)
    p_run.add_argument("--generations", type=_nonnegative_int, required=True)
    p_run.add_argument("--seed", type=int, required=True)
    p_run.add_argument("--init-norm2", type=_positive_float)
    p_run.add_argument("--placement", choices=list(_PLACEMENTS), default="equal")
    p_run.set_defaults(func=_cmd_run)

    p_opt = sub.add_parser(
        "opt-sigma", help="optimal mutation scale for the cheating jump"
    )
    p_opt.add_argument("--m", type=_positive_float, required=True)
    p_opt.add_argument("--c", type=_positive_float, required=True)
    p_opt.set_defaults(func=_cmd_opt_sigma)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _ArgumentDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (Ea1p1Error, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
