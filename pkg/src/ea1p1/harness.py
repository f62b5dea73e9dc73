"""Experiment sweeps, the CSV exchange format, and reproduction plumbing.

Each experiment regenerates one of the trend tables behind the analysis:

* ``fig1``      sphere exploitation probability: MC vs sandwich, per dimension
* ``fig2``      single-coordinate sphere improvement rate over sigma/sqrt(C)
* ``fig3``      sphere improvement rate: MC vs lower bound, per dimension
* ``dim-decay`` geometric decay of the probability upper bound in n
* ``rus-scaling`` n times the univariate-search improvement rate (flat line)
* ``cht-opt-sigma`` cheating jump probability over sigma with its optimum
* ``cht-zero-prob`` right-exploration success counts of univariate search

Tables carry a metadata echo sufficient to regenerate them byte-for-byte:
``spec_from_metadata(read_csv(path).metadata)`` rebuilds the sweep spec.
Timestamps are deliberately excluded from the emitted bytes.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .bounds import (
    fit_decay_base,
    ir_sph_1d,
    ir_sph_ep_bounds,
    optimal_sigma_cht_1d,
    p_cht_1d,
    p_sph_ep_bounds,
)
from .core import Algorithm
from .errors import DomainError, Ea1p1Error
from .montecarlo import McConfig, estimate_improvement_rate, estimate_success_probability
from .problems import ProblemSpec, TransitionKind
from .sampler import Placement, PlacementKind

EXPERIMENTS = (
    "fig1",
    "fig2",
    "fig3",
    "dim-decay",
    "rus-scaling",
    "cht-opt-sigma",
    "cht-zero-prob",
)

MC_EXPERIMENTS = frozenset({"fig1", "fig3", "rus-scaling", "cht-zero-prob"})

# Fixed experiment constants (echoed in metadata). Sphere sweeps condition on
# C = 1 without loss of generality (scale invariance in sigma/sqrt(C)).
SPHERE_C = 1.0
CHT_M = 10.0
CHT_OPT_SIGMA_C = 4.0
CHT_ZERO_PROB_C = 2.0
RATIO_AT_MAX_RATE = 0.88  # near-optimal sigma/sqrt(C) of the 1-D rate


@dataclass(frozen=True)
class SweepSpec:
    """One experiment's control grid, dimensions, MC budget, and output."""

    experiment: str
    grid: tuple[float, ...]
    dims: tuple[int, ...]
    mc: McConfig | None = None
    output_path: str | None = None

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise DomainError(f"unknown experiment {self.experiment!r}")
        if len(self.grid) == 0:
            raise DomainError("grid must be nonempty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise DomainError("grid must be strictly increasing")
        if len(self.dims) == 0:
            raise DomainError("dims must be nonempty")
        if self.experiment in MC_EXPERIMENTS and self.mc is None:
            raise DomainError(f"experiment {self.experiment!r} needs an McConfig")


@dataclass
class SweepTable:
    """Rectangular sweep output plus the metadata echo that regenerates it."""

    header: list[str]
    rows: list[tuple]
    metadata: dict[str, str] = field(default_factory=dict)


def default_grid(experiment: str) -> tuple[float, ...]:
    if experiment in ("fig1", "fig3"):
        return tuple(np.linspace(0.05, 3.0, 60))
    if experiment == "fig2":
        return tuple(np.linspace(0.01, 3.0, 300))
    if experiment == "dim-decay":
        return tuple(float(n) for n in range(2, 9))
    if experiment == "rus-scaling":
        return (1.0, 2.0, 4.0, 8.0, 16.0)
    if experiment == "cht-opt-sigma":
        return tuple(np.linspace(0.5, 8.0, 76))
    if experiment == "cht-zero-prob":
        return (1.0, 2.0, 4.0, 8.0)
    raise DomainError(f"unknown experiment {experiment!r}")


def default_dims(experiment: str) -> tuple[int, ...]:
    if experiment in ("fig1", "fig3"):
        return (1, 2, 3, 5, 10)
    if experiment == "dim-decay":
        return tuple(range(2, 9))
    if experiment in ("rus-scaling", "cht-zero-prob"):
        return tuple(int(v) for v in default_grid(experiment))
    return (1,)


def default_sweep_spec(
    experiment: str,
    samples: int = 1_000_000,
    seed: int | None = None,
    output_path: str | None = None,
    dims: tuple[int, ...] | None = None,
) -> SweepSpec:
    """Documented defaults; MC experiments require an explicit seed."""
    mc = None
    if experiment in MC_EXPERIMENTS:
        if seed is None:
            raise DomainError(f"experiment {experiment!r} requires an explicit seed")
        mc = McConfig(samples=samples, master_seed=seed)
    return SweepSpec(
        experiment=experiment,
        grid=default_grid(experiment),
        dims=dims if dims is not None else default_dims(experiment),
        mc=mc,
        output_path=output_path,
    )


def _point_config(mc: McConfig, point_index: int) -> McConfig:
    """Per-point MC config with a seed derived from (master_seed, index).

    SeedSequence composition keeps points statistically independent while the
    whole sweep stays a pure function of the master seed.
    """
    ss = np.random.SeedSequence(entropy=(mc.master_seed, point_index))
    derived = int(ss.generate_state(1, np.uint64)[0])
    return McConfig(
        samples=mc.samples,
        master_seed=derived,
        partitions=mc.partitions,
        confidence=mc.confidence,
    )


def _base_metadata(spec: SweepSpec) -> dict[str, str]:
    meta = {
        "package": f"ea1p1 {__version__}",
        "experiment": spec.experiment,
        "grid": ",".join(format(v, ".17g") for v in spec.grid),
        "dims": ",".join(str(d) for d in spec.dims),
    }
    if spec.mc is not None:
        meta["samples"] = str(spec.mc.samples)
        meta["seed"] = str(spec.mc.master_seed)
        meta["partitions"] = str(spec.mc.partitions)
        meta["confidence"] = format(spec.mc.confidence, ".17g")
    return meta


def run_sweep(spec: SweepSpec) -> SweepTable:
    """Evaluate the experiment over its grid; row order follows the grid."""
    builder = _BUILDERS[spec.experiment]
    header, rows, extra = builder(spec)
    meta = _base_metadata(spec)
    meta.update(extra)
    return SweepTable(header=header, rows=rows, metadata=meta)


def _sweep_fig1(spec: SweepSpec):
    rows = []
    idx = 0
    for n in spec.dims:
        problem = ProblemSpec.sphere(n)
        start = Placement(PlacementKind.SINGLE_AXIS, SPHERE_C)
        for ratio in spec.grid:
            sigma = ratio * math.sqrt(SPHERE_C)
            est = estimate_success_probability(
                problem,
                Algorithm.EP,
                start,
                SPHERE_C,
                sigma,
                TransitionKind.EXPLOITATION,
                _point_config(spec.mc, idx),
            )
            bv = p_sph_ep_bounds(SPHERE_C, sigma, n)
            rows.append((float(ratio), n, est.mean, bv.lower, bv.upper))
            idx += 1
    header = ["ratio", "n", "mc_estimate", "lower_bound", "upper_bound"]
    return header, rows, {"problem": "sphere", "c": format(SPHERE_C, ".17g")}


def _sweep_fig2(spec: SweepSpec):
    rows = [
        (float(r), ir_sph_1d(SPHERE_C, r * math.sqrt(SPHERE_C)).value) for r in spec.grid
    ]
    return ["ratio", "ir_exact"], rows, {"problem": "sphere", "c": format(SPHERE_C, ".17g")}


def _sweep_fig3(spec: SweepSpec):
    rows = []
    idx = 0
    for n in spec.dims:
        problem = ProblemSpec.sphere(n)
        start = Placement(PlacementKind.EQUAL_COORDINATES, SPHERE_C)
        for ratio in spec.grid:
            sigma = ratio * math.sqrt(SPHERE_C)
            est = estimate_improvement_rate(
                problem,
                Algorithm.EP,
                start,
                SPHERE_C,
                sigma,
                TransitionKind.EXPLOITATION,
                _point_config(spec.mc, idx),
            )
            bv = ir_sph_ep_bounds(SPHERE_C, sigma, n)
            rows.append((float(ratio), n, est.mean, bv.lower))
            idx += 1
    header = ["ratio", "n", "ir_mc", "ir_lower"]
    return header, rows, {"problem": "sphere", "c": format(SPHERE_C, ".17g")}


def _sweep_dim_decay(spec: SweepSpec):
    sigma = math.sqrt(SPHERE_C)
    values = {int(n): p_sph_ep_bounds(SPHERE_C, sigma, int(n)).upper for n in spec.grid}
    fit = fit_decay_base(values, offset="n-1")
    rows = [(int(n), values[int(n)], fit.base_a) for n in spec.grid]
    meta = {
        "problem": "sphere",
        "c": format(SPHERE_C, ".17g"),
        "sigma": format(sigma, ".17g"),
        "fit_r2": format(fit.r2, ".17g"),
    }
    return ["n", "upper_bound", "fitted_a"], rows, meta


def _sweep_rus_scaling(spec: SweepSpec):
    rows = []
    for idx, nf in enumerate(spec.grid):
        n = int(nf)
        problem = ProblemSpec.sphere(n)
        sigma = RATIO_AT_MAX_RATE * math.sqrt(SPHERE_C / n)
        est = estimate_improvement_rate(
            problem,
            Algorithm.RUS,
            Placement(PlacementKind.EQUAL_COORDINATES, SPHERE_C),
            SPHERE_C,
            sigma,
            TransitionKind.EXPLOITATION,
            _point_config(spec.mc, idx),
        )
        rows.append((n, n * est.mean))
    meta = {
        "problem": "sphere",
        "c": format(SPHERE_C, ".17g"),
        "sigma_rule": "0.88*sqrt(C/n)",
    }
    return ["n", "scaled_ir_mc"], rows, meta


def _sweep_cht_opt_sigma(spec: SweepSpec):
    sigma_star = optimal_sigma_cht_1d(CHT_M, CHT_OPT_SIGMA_C)
    rows = [
        (float(s), p_cht_1d(CHT_M, CHT_OPT_SIGMA_C, float(s)).value, sigma_star)
        for s in spec.grid
    ]
    meta = {
        "problem": "cheating",
        "m": format(CHT_M, ".17g"),
        "c": format(CHT_OPT_SIGMA_C, ".17g"),
    }
    return ["sigma", "p_hit", "sigma_star"], rows, meta


def _sweep_cht_zero_prob(spec: SweepSpec):
    sigma = optimal_sigma_cht_1d(CHT_M, CHT_ZERO_PROB_C)
    shell = 2.0 * CHT_M + 1.0 - CHT_ZERO_PROB_C
    rows = []
    for idx, nf in enumerate(spec.grid):
        n = int(nf)
        problem = ProblemSpec.cheating(n, CHT_M)
        est = estimate_success_probability(
            problem,
            Algorithm.RUS,
            Placement(PlacementKind.EQUAL_COORDINATES, shell),
            CHT_ZERO_PROB_C,
            sigma,
            TransitionKind.RIGHT_EXPLORATION,
            _point_config(spec.mc, idx),
        )
        rows.append((n, est.successes))
    meta = {
        "problem": "cheating",
        "m": format(CHT_M, ".17g"),
        "c": format(CHT_ZERO_PROB_C, ".17g"),
        "sigma": format(sigma, ".17g"),
    }
    return ["n", "successes"], rows, meta


_BUILDERS = {
    "fig1": _sweep_fig1,
    "fig2": _sweep_fig2,
    "fig3": _sweep_fig3,
    "dim-decay": _sweep_dim_decay,
    "rus-scaling": _sweep_rus_scaling,
    "cht-opt-sigma": _sweep_cht_opt_sigma,
    "cht-zero-prob": _sweep_cht_zero_prob,
}


# ---------------------------------------------------------------------------
# CSV exchange format
# ---------------------------------------------------------------------------

def _fmt_cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def render_csv(table: SweepTable) -> str:
    """Serialize: '#' metadata lines, header row, then 12-significant-digit
    data rows. Deterministic bytes for a fixed spec and seed."""
    buf = io.StringIO()
    for key in sorted(table.metadata):
        buf.write(f"# {key}={table.metadata[key]}\n")
    buf.write(",".join(table.header) + "\n")
    for row in table.rows:
        buf.write(",".join(_fmt_cell(v) for v in row) + "\n")
    return buf.getvalue()


def emit_csv(table: SweepTable, path: str) -> None:
    """Write the table; I/O failures carry the path."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_csv(table))
    except OSError as exc:
        raise Ea1p1Error(f"failed to write sweep table to {path}: {exc}") from exc


def _parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_csv(path: str) -> SweepTable:
    """Parse a table written by emit_csv."""
    metadata: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[tuple] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition("=")
                    metadata[key.strip()] = value
                elif header is None:
                    header = line.split(",")
                else:
                    rows.append(tuple(_parse_cell(c) for c in line.split(",")))
    except OSError as exc:
        raise Ea1p1Error(f"failed to read sweep table from {path}: {exc}") from exc
    if header is None:
        raise Ea1p1Error(f"no header row found in {path}")
    return SweepTable(header=header, rows=rows, metadata=metadata)


def spec_from_metadata(metadata: dict[str, str], output_path: str | None = None) -> SweepSpec:
    """Rebuild the SweepSpec from a table's metadata echo."""
    experiment = metadata["experiment"]
    grid = tuple(float(v) for v in metadata["grid"].split(","))
    dims = tuple(int(v) for v in metadata["dims"].split(","))
    mc = None
    if "seed" in metadata:
        mc = McConfig(
            samples=int(metadata["samples"]),
            master_seed=int(metadata["seed"]),
            partitions=int(metadata.get("partitions", "1")),
            confidence=float(metadata.get("confidence", "0.99")),
        )
    return SweepSpec(
        experiment=experiment, grid=grid, dims=dims, mc=mc, output_path=output_path
    )
