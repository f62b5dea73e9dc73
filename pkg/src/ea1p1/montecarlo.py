"""Seeded one-step Monte-Carlo estimation of the search metrics.

Every quantity here is a one-step conditional metric given the fitness of
the present solution, so estimation simulates exactly one mutation per
sample. Samples are split across ``partitions`` independent streams derived
from the master seed; the merge is a fixed-order reduction over partition
index, which makes every estimate a pure function of (config, inputs)
regardless of how partitions are scheduled.

Start points: deterministic placements (single_axis, equal_coordinates) are
constructed once and conditioned on; uniform_on_shell re-draws the start
every sample, estimating the shell-averaged metric. Passing an explicit
vector instead of a Placement conditions on that exact point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Iterable, Sequence

import numpy as np

from .core import Algorithm
from .errors import (
    DomainError,
    InconsistentStateError,
    InfeasiblePointError,
    UnsupportedProblemError,
)
from .problems import (
    ProblemKind,
    ProblemSpec,
    TransitionKind,
    promising_region_radius2,
)
from .sampler import Placement, PlacementKind, RngStream, place

_CHUNK = 1 << 18  # cap per-block sample count to bound memory in EP draws


@dataclass(frozen=True)
class McConfig:
    """Sample budget, seeding, partitioning, and confidence level."""

    samples: int
    master_seed: int
    partitions: int = 1
    confidence: float = 0.99

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise DomainError(f"samples must be >= 1, got {self.samples}")
        if not (1 <= self.partitions <= self.samples):
            raise DomainError(
                f"partitions must be in [1, samples], got {self.partitions}"
            )
        if not (0.0 < self.confidence < 1.0):
            raise DomainError(f"confidence must be in (0, 1), got {self.confidence}")


@dataclass(frozen=True)
class McEstimate:
    """Estimate with standard error and confidence interval."""

    mean: float
    std_error: float
    ci: tuple[float, float]
    samples: int
    successes: int | None = None


def _z_value(confidence: float) -> float:
    return NormalDist().inv_cdf(0.5 + confidence / 2.0)


def _wilson_interval(k: int, n: int, confidence: float) -> tuple[float, float]:
    """Wilson score interval; honest near 0 and 1 (zero-success cases)."""
    z = _z_value(confidence)
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2.0 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def _partition_sizes(cfg: McConfig) -> list[int]:
    base, extra = divmod(cfg.samples, cfg.partitions)
    return [base + (1 if k < extra else 0) for k in range(cfg.partitions)]


def _probability_estimate(k: int, n: int, confidence: float) -> McEstimate:
    p = k / n
    se = math.sqrt(p * (1.0 - p) / n)
    return McEstimate(
        mean=p,
        std_error=se,
        ci=_wilson_interval(k, n, confidence),
        samples=n,
        successes=k,
    )


def _mean_estimate(count: int, total: float, total_sq: float, confidence: float) -> McEstimate:
    mean = total / count
    if count > 1:
        var = max(0.0, (total_sq - count * mean * mean) / (count - 1))
    else:
        var = 0.0
    se = math.sqrt(var / count)
    z = _z_value(confidence)
    return McEstimate(
        mean=mean, std_error=se, ci=(mean - z * se, mean + z * se), samples=count
    )


# ---------------------------------------------------------------------------
# Proposal kernels: squared norm of one mutation from the start point(s)
# ---------------------------------------------------------------------------

def _start_matrix(
    start: np.ndarray | Placement, n: int, count: int, stream: RngStream
) -> tuple[np.ndarray | None, np.ndarray]:
    """Either a fixed start vector (returned as 1-D) or per-sample rows."""
    if isinstance(start, Placement):
        if start.kind is PlacementKind.UNIFORM_ON_SHELL:
            g = stream.standard_normal((count, n))
            norms = np.linalg.norm(g, axis=1)
            norms[norms < 1e-12] = 1.0  # measure-zero guard
            rows = g * (math.sqrt(start.target_norm2) / norms)[:, None]
            return None, rows
        fixed = place(start, n, stream)
        return fixed, np.empty(0)
    fixed = np.asarray(start, dtype=float)
    if fixed.shape != (n,):
        raise DomainError(f"start point must have shape ({n},), got {fixed.shape}")
    return fixed, np.empty(0)


def _proposal_norm2(
    algo: Algorithm,
    start: np.ndarray | Placement,
    n: int,
    sigma: float,
    count: int,
    stream: RngStream,
) -> np.ndarray:
    """Squared norms ||y||^2 of `count` one-step proposals."""
    fixed, rows = _start_matrix(start, n, count, stream)
    if algo is Algorithm.RUS:
        z = stream.normal(sigma, size=count)
        idx = stream.integers(n, size=count)
        if fixed is not None:
            s0 = float(fixed @ fixed)
            xj = fixed[idx]
        else:
            s0 = np.einsum("ij,ij->i", rows, rows)
            xj = rows[np.arange(count), idx]
        return s0 - xj * xj + (xj + z) ** 2
    # EP: isotropic mutation of all coordinates
    z = stream.normal(sigma, size=(count, n))
    if fixed is not None:
        y = fixed[None, :] + z
    else:
        y = rows + z
    return np.einsum("ij,ij->i", y, y)


def _iter_partition_norms(
    spec: ProblemSpec,
    algo: Algorithm,
    start: np.ndarray | Placement,
    sigma: float,
    cfg: McConfig,
) -> Iterable[np.ndarray]:
    """Proposal norms per partition, in fixed partition order, chunked."""
    if not (sigma > 0.0):
        raise DomainError(f"sigma must be positive, got {sigma}")
    algo = Algorithm(algo)
    for k, size in enumerate(_partition_sizes(cfg)):
        stream = RngStream(cfg.master_seed, stream_id=k)
        produced = 0
        while produced < size:
            block = min(_CHUNK, size - produced)
            yield _proposal_norm2(algo, start, spec.n, sigma, block, stream)
            produced += block


def _resolve_start(
    spec: ProblemSpec,
    placement: Placement | np.ndarray | Sequence[float],
    c: float,
    target: TransitionKind,
) -> Placement | np.ndarray:
    """Validate that the start shell matches the conditioning fitness C."""
    if target is TransitionKind.EXPLOITATION:
        if spec.kind is not ProblemKind.SPHERE:
            raise UnsupportedProblemError(
                "exploitation estimation is defined on the sphere problem"
            )
        want = c
    elif target is TransitionKind.RIGHT_EXPLORATION:
        if spec.kind is not ProblemKind.CHEATING:
            raise UnsupportedProblemError(
                "right-exploration estimation is defined on the cheating problem"
            )
        want = 2.0 * spec.m + 1.0 - c
        if want > 2.0 * spec.m:
            raise InfeasiblePointError(
                f"start shell ||x||^2 = {want} lies outside the domain (need C >= 1)"
            )
    else:
        raise UnsupportedProblemError(f"unsupported target {target}")

    if isinstance(placement, Placement):
        t = placement.target_norm2
    else:
        v = np.asarray(placement, dtype=float)
        t = float(v @ v)
        placement = v
    if abs(t - want) > 1e-9 * max(1.0, abs(want)):
        raise InconsistentStateError(
            f"placement squared norm {t} inconsistent with C={c} (expected {want})"
        )
    return placement


def estimate_success_probability(
    spec: ProblemSpec,
    algo: Algorithm,
    placement: Placement | np.ndarray | Sequence[float],
    c: float,
    sigma: float,
    target: TransitionKind,
    cfg: McConfig,
) -> McEstimate:
    """Fraction of one-step proposals landing in the promising region.

    Success means ||y||^2 <= C on the sphere (exploitation) or
    ||y||^2 <= min(C, M) on the cheating problem (right exploration).
    Infeasible proposals count as failures. Wilson interval at the
    configured confidence.
    """
    start = _resolve_start(spec, placement, c, target)
    rho = promising_region_radius2(spec, c)
    k = 0
    for norms in _iter_partition_norms(spec, algo, start, sigma, cfg):
        k += int(np.count_nonzero(norms <= rho))
    return _probability_estimate(k, cfg.samples, cfg.confidence)


def estimate_improvement_rate(
    spec: ProblemSpec,
    algo: Algorithm,
    placement: Placement | np.ndarray | Sequence[float],
    c: float,
    sigma: float,
    target: TransitionKind,
    cfg: McConfig,
) -> McEstimate:
    """Mean relative one-step gain (C - f(y))/C restricted to the target.

    Proposals outside the promising region contribute 0 (elitist
    truncation); inside it, f(y) = ||y||^2 on both problems.
    """
    start = _resolve_start(spec, placement, c, target)
    rho = promising_region_radius2(spec, c)
    count = 0
    total = 0.0
    total_sq = 0.0
    for norms in _iter_partition_norms(spec, algo, start, sigma, cfg):
        gains = np.where(norms <= rho, (c - norms) / c, 0.0)
        count += gains.size
        total += float(gains.sum())
        total_sq += float(np.dot(gains, gains))
    return _mean_estimate(count, total, total_sq, cfg.confidence)


def estimate_transition_mix(
    spec: ProblemSpec,
    algo: Algorithm,
    placement: Placement | np.ndarray | Sequence[float],
    c: float,
    sigma: float,
    cfg: McConfig,
) -> dict[TransitionKind, McEstimate]:
    """One-step frequencies of the move taxonomy on the cheating problem.

    The start shell must be consistent with fitness C (either region).
    Frequencies over {exploitation, right exploration, mistaken exploration,
    rejected} sum to 1; each gets its own probability-mode estimate.
    """
    if spec.kind is not ProblemKind.CHEATING:
        raise UnsupportedProblemError("transition mix is defined on the cheating problem")
    m = spec.m
    if isinstance(placement, Placement):
        t = placement.target_norm2
        start: Placement | np.ndarray = placement
    else:
        v = np.asarray(placement, dtype=float)
        t = float(v @ v)
        start = v
    if t > 2.0 * m:
        raise InfeasiblePointError(f"start shell ||x||^2 = {t} outside the domain")
    fx = t if t <= m else 2.0 * m + 1.0 - t
    if abs(fx - c) > 1e-9 * max(1.0, abs(c)):
        raise InconsistentStateError(
            f"start shell ||x||^2 = {t} has fitness {fx}, inconsistent with C = {c}"
        )
    x_absorbing = t <= m

    counts = {kind: 0 for kind in TransitionKind}
    for norms in _iter_partition_norms(spec, algo, start, sigma, cfg):
        feasible = norms <= 2.0 * m
        y_absorbing = norms <= m
        fy = np.where(y_absorbing, norms, 2.0 * m + 1.0 - norms)
        accepted = feasible & (fy <= fx)
        same_region = y_absorbing == x_absorbing
        counts[TransitionKind.REJECTED] += int(np.count_nonzero(~accepted))
        counts[TransitionKind.EXPLOITATION] += int(np.count_nonzero(accepted & same_region))
        if x_absorbing:
            counts[TransitionKind.MISTAKEN_EXPLORATION] += int(
                np.count_nonzero(accepted & ~same_region)
            )
        else:
            counts[TransitionKind.RIGHT_EXPLORATION] += int(
                np.count_nonzero(accepted & ~same_region)
            )
    return {
        kind: _probability_estimate(k, cfg.samples, cfg.confidence)
        for kind, k in counts.items()
    }
