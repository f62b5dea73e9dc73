"""Benchmark landscapes, region labels, and the move taxonomy.

Two minimization problems are supported:

* sphere: f(x) = ||x||^2 on all of R^n, single basin at the origin.
* cheating: a two-region landscape on the ball ||x||^2 <= 2M. Inside the
  absorbing ball ||x||^2 <= M the fitness is ||x||^2; in the outer shell
  M < ||x||^2 <= 2M it is (2M+1) - ||x||^2, so fitness improves toward the
  outer boundary and deceives coordinate-wise local search.

Norms are squared Euclidean norms throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InfeasiblePointError


class ProblemKind(str, enum.Enum):
    SPHERE = "sphere"
    CHEATING = "cheating"


class RegionLabel(enum.Enum):
    ABSORBING = "absorbing"
    CHEATING_REGION = "cheating_region"
    INFEASIBLE = "infeasible"


class TransitionKind(enum.Enum):
    EXPLOITATION = "exploitation"
    RIGHT_EXPLORATION = "right_exploration"
    MISTAKEN_EXPLORATION = "mistaken_exploration"
    REJECTED = "rejected"


@dataclass(frozen=True)
class ProblemSpec:
    """Which benchmark, its dimension, and the plateau boundary M (cheating)."""

    kind: ProblemKind
    n: int
    m: float | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"dimension must be >= 1, got {self.n}")
        if self.kind is ProblemKind.CHEATING:
            if self.m is None or not (self.m > 0.0):
                raise DomainError(f"cheating problem requires M > 0, got {self.m}")
        elif self.m is not None:
            raise DomainError("sphere problem takes no M parameter")

    @classmethod
    def sphere(cls, n: int) -> "ProblemSpec":
        return cls(kind=ProblemKind.SPHERE, n=n)

    @classmethod
    def cheating(cls, n: int, m: float) -> "ProblemSpec":
        return cls(kind=ProblemKind.CHEATING, n=n, m=float(m))


def _as_vector(spec: ProblemSpec, x: Sequence[float] | np.ndarray) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (spec.n,):
        raise DomainError(f"expected a vector of length {spec.n}, got shape {v.shape}")
    return v


def norm2(x: Sequence[float] | np.ndarray) -> float:
    """Squared Euclidean norm."""
    v = np.asarray(x, dtype=float)
    return float(np.dot(v, v))


def is_feasible(spec: ProblemSpec, x: Sequence[float] | np.ndarray) -> bool:
    """Sphere is unbounded; cheating lives on the closed ball ||x||^2 <= 2M."""
    if spec.kind is ProblemKind.SPHERE:
        return True
    return norm2(_as_vector(spec, x)) <= 2.0 * spec.m


def evaluate(spec: ProblemSpec, x: Sequence[float] | np.ndarray) -> float:
    """Fitness of x; raises InfeasiblePointError outside the cheating ball."""
    v = _as_vector(spec, x)
    s = float(np.dot(v, v))
    if spec.kind is ProblemKind.SPHERE:
        return s
    m = spec.m
    if s <= m:
        return s
    if s <= 2.0 * m:
        return (2.0 * m + 1.0) - s
    raise InfeasiblePointError(
        f"point with ||x||^2 = {s} outside the cheating domain ||x||^2 <= {2.0 * m}"
    )


def classify_point(spec: ProblemSpec, x: Sequence[float] | np.ndarray) -> RegionLabel:
    """Region of x. The boundary ||x||^2 = M belongs to the absorbing region."""
    v = _as_vector(spec, x)
    if spec.kind is ProblemKind.SPHERE:
        return RegionLabel.ABSORBING
    s = float(np.dot(v, v))
    if s <= spec.m:
        return RegionLabel.ABSORBING
    if s <= 2.0 * spec.m:
        return RegionLabel.CHEATING_REGION
    return RegionLabel.INFEASIBLE


def classify_transition(
    spec: ProblemSpec,
    x: Sequence[float] | np.ndarray,
    y: Sequence[float] | np.ndarray,
    accepted: bool,
) -> TransitionKind:
    """Move taxonomy from the region labels of (x, y) and the accept flag.

    Rejected moves are rejected regardless of geometry. Accepted moves within
    one region are exploitation; region changes are exploration, called
    "right" when they enter the absorbing region and "mistaken" when they
    leave it.
    """
    lx = classify_point(spec, x)
    ly = classify_point(spec, y)
    if RegionLabel.INFEASIBLE in (lx, ly):
        raise InfeasiblePointError("classify_transition requires feasible endpoints")
    if not accepted:
        return TransitionKind.REJECTED
    if lx is ly:
        return TransitionKind.EXPLOITATION
    if lx is RegionLabel.CHEATING_REGION and ly is RegionLabel.ABSORBING:
        return TransitionKind.RIGHT_EXPLORATION
    return TransitionKind.MISTAKEN_EXPLORATION


def promising_region_radius2(spec: ProblemSpec, c: float) -> float:
    """Squared radius of the ball {y : f(y) <= C} centered at the origin.

    For the sphere this is C itself. For the cheating problem a fitness
    target C <= M+1 is met inside the ball of squared radius min(C, M): the
    absorbing ball caps the target when M <= C <= M+1.
    """
    if not (c > 0.0) or not math.isfinite(c):
        raise DomainError(f"fitness level C must be positive and finite, got {c}")
    if spec.kind is ProblemKind.SPHERE:
        return float(c)
    if c > spec.m + 1.0:
        raise DomainError(
            f"cheating fitness level C must satisfy C <= M+1 = {spec.m + 1.0}, got {c}"
        )
    return float(min(c, spec.m))
