"""The two elitist (1+1) algorithms as one-step transition functions.

Both algorithms propose y = x + z and keep the better of x and y, accepting
ties. The univariate variant (RUS) perturbs one uniformly chosen coordinate
with N(0, sigma^2); the programming variant (EP) perturbs all coordinates
with isotropic N(0, sigma^2 I). Proposals outside the feasible domain are
replaced by the current point and recorded as rejections, so acceptance
statistics measure the mutation operator rather than the boundary clamp.

Stream consumption per step (relevant when comparing RUS and EP on one
stream): RUS consumes one uniform index draw plus one Gaussian; EP consumes
n Gaussians.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InfeasiblePointError
from .problems import (
    ProblemSpec,
    TransitionKind,
    classify_transition,
    evaluate,
    is_feasible,
)
from .sampler import RngStream


class Algorithm(str, enum.Enum):
    RUS = "rus"
    EP = "ep"


@dataclass(frozen=True)
class SearchState:
    """Current solution, its cached fitness, and the generation counter."""

    x: np.ndarray
    fitness: float
    generation: int = 0


@dataclass(frozen=True)
class StepRecord:
    """Instrumentation of one mutation-selection step."""

    proposed: np.ndarray
    accepted: bool
    transition: TransitionKind
    improvement: float


def initial_state(spec: ProblemSpec, x: Sequence[float] | np.ndarray) -> SearchState:
    """Validate x and build a state with its fitness computed."""
    v = np.array(x, dtype=float)
    if not is_feasible(spec, v):
        raise InfeasiblePointError(f"initial point with ||x||^2 = {float(v @ v)} infeasible")
    return SearchState(x=v, fitness=evaluate(spec, v), generation=0)


def _select(spec: ProblemSpec, state: SearchState, y: np.ndarray) -> tuple[SearchState, StepRecord]:
    if not is_feasible(spec, y):
        nxt = SearchState(x=state.x, fitness=state.fitness, generation=state.generation + 1)
        rec = StepRecord(proposed=y, accepted=False, transition=TransitionKind.REJECTED, improvement=0.0)
        return nxt, rec
    fy = evaluate(spec, y)
    accepted = fy <= state.fitness
    transition = classify_transition(spec, state.x, y, accepted)
    if accepted:
        nxt = SearchState(x=y, fitness=fy, generation=state.generation + 1)
        improvement = state.fitness - fy
    else:
        nxt = SearchState(x=state.x, fitness=state.fitness, generation=state.generation + 1)
        improvement = 0.0
    return nxt, StepRecord(proposed=y, accepted=accepted, transition=transition, improvement=improvement)


def rus_step(
    spec: ProblemSpec, state: SearchState, sigma: float, stream: RngStream
) -> tuple[SearchState, StepRecord]:
    """Mutate one uniformly chosen coordinate, then select elitist."""
    if not (sigma > 0.0):
        raise DomainError(f"sigma must be positive, got {sigma}")
    j = int(stream.integers(spec.n))
    y = state.x.copy()
    y[j] += stream.gaussian(sigma)
    return _select(spec, state, y)


def ep_step(
    spec: ProblemSpec, state: SearchState, sigma: float, stream: RngStream
) -> tuple[SearchState, StepRecord]:
    """Mutate all coordinates with isotropic Gaussian noise, then select."""
    if not (sigma > 0.0):
        raise DomainError(f"sigma must be positive, got {sigma}")
    y = state.x + stream.normal(sigma, size=spec.n)
    return _select(spec, state, y)


_STEP_FUNCTIONS = {Algorithm.RUS: rus_step, Algorithm.EP: ep_step}


def run(
    spec: ProblemSpec,
    algo: Algorithm,
    init: SearchState,
    sigma: float,
    generations: int,
    stream: RngStream,
) -> tuple[SearchState, list[StepRecord]]:
    """Apply the step function ``generations`` times, recording every step."""
    if generations < 0:
        raise DomainError(f"generations must be >= 0, got {generations}")
    step = _STEP_FUNCTIONS[Algorithm(algo)]
    state = init
    records: list[StepRecord] = []
    for _ in range(generations):
        state, rec = step(spec, state, sigma, stream)
        records.append(rec)
    return state, records
