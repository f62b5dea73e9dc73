"""Closed-form success probabilities and one-step improvement rates.

Each formula is an individually named evaluator returning a BoundValue
tagged with its formula id, so sweep tables and the CLI can trace every
number back to the expression that produced it. Conventions:

* C is the fitness of the present solution, sigma the mutation scale,
  n the dimension, M the cheating plateau boundary.
* Sphere formulas condition on a shell point with ||x||^2 = C; the target is
  the ball ||y||^2 <= C.
* Cheating formulas condition on a point in the outer (cheating) shell,
  ||x||^2 = 2M+1-C; the target is the origin-centered ball of squared radius
  min(C, M); only the branch 0 < C < M carries the n-dimensional bounds.

All probabilities are exact Gaussian integrals or products thereof; the
n-dimensional bounds come from enclosing-box (upper) and inscribed-box
(lower) factorizations of the target ball.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, FitRangeError, InconsistentStateError
from .numerics import SQRT_2PI, gaussian_cdf

__all__ = [
    "BoundKind",
    "BoundValue",
    "ScalingFit",
    "p_sph_1d",
    "p_sph_rus",
    "p_sph_ep_bounds",
    "ir_sph_1d",
    "ir_sph_rus",
    "ir_sph_ep_bounds",
    "p_cht_1d",
    "optimal_sigma_cht_1d",
    "rus_cht_coordinate_feasible",
    "p_cht_ep_bounds",
    "ir_cht_1d",
    "ir_cht_ep_bounds",
    "fit_decay_base",
    "FORMULA_IDS",
]


class BoundKind(str, enum.Enum):
    EXACT = "exact"
    UPPER = "upper"
    LOWER = "lower"
    INTERVAL = "interval"


@dataclass(frozen=True)
class BoundValue:
    """A closed-form evaluation: point value or (lower, upper) interval.

    ``raw_lower`` preserves an interval's lower end before clamping to 0,
    for inspection when the printed formula can dip negative.
    """

    formula_id: str
    kind: BoundKind
    value: float | None = None
    lower: float | None = None
    upper: float | None = None
    raw_lower: float | None = None

    def __post_init__(self) -> None:
        if self.kind is BoundKind.INTERVAL:
            if self.lower is None or self.upper is None:
                raise DomainError("interval BoundValue needs lower and upper")
            if self.lower > self.upper + 1e-12:
                raise DomainError(
                    f"invalid interval [{self.lower}, {self.upper}] for {self.formula_id}"
                )
        elif self.value is None:
            raise DomainError(f"point BoundValue needs a value for {self.formula_id}")

    @classmethod
    def exact(cls, formula_id: str, value: float) -> "BoundValue":
        return cls(formula_id=formula_id, kind=BoundKind.EXACT, value=value)

    @classmethod
    def interval(
        cls, formula_id: str, lower: float, upper: float, raw_lower: float | None = None
    ) -> "BoundValue":
        return cls(
            formula_id=formula_id,
            kind=BoundKind.INTERVAL,
            lower=lower,
            upper=upper,
            raw_lower=lower if raw_lower is None else raw_lower,
        )


@dataclass(frozen=True)
class ScalingFit:
    """Geometric decay base fitted to bound values across dimensions."""

    base_a: float
    r2: float
    dims: tuple[int, ...]
    offset: str  # regressor was "n" or "n-1"

    def __post_init__(self) -> None:
        if len(self.dims) < 4:
            raise DomainError("decay fits require values at >= 4 dimensions")


def _check_positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        if not (value > 0.0) or not math.isfinite(value):
            raise DomainError(f"{name} must be positive and finite, got {value}")


def _check_dimension(n: int) -> None:
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")


def _shell_coords(xs: Sequence[float] | np.ndarray, c: float | None) -> tuple[np.ndarray, float]:
    """Absolute coordinates of a shell point plus its squared norm.

    Coordinate signs are irrelevant to every single-coordinate probability,
    so negatives are mirrored. When the caller states the shell level C, a
    relative mismatch beyond 1e-9 is an inconsistency error.
    """
    v = np.abs(np.asarray(xs, dtype=float))
    if v.ndim != 1 or v.size < 1:
        raise DomainError(f"expected a 1-D point, got shape {v.shape}")
    s = float(v @ v)
    if not (s > 0.0):
        raise DomainError("shell point must have positive squared norm")
    if c is not None:
        if abs(s - c) > 1e-9 * max(abs(c), 1.0):
            raise InconsistentStateError(
                f"||x||^2 = {s} does not match the stated shell C = {c}"
            )
        s = float(c)
    return v, s


# ---------------------------------------------------------------------------
# Sphere: success probabilities
# ---------------------------------------------------------------------------

def p_sph_1d(c: float, sigma: float) -> BoundValue:
    """Single-coordinate success probability Phi(2*sqrt(C)/sigma) - 1/2.

    Probability that a Gaussian step from the shell point sqrt(C) lands in
    [-sqrt(C), sqrt(C)]. Increases toward its supremum 1/2 as sigma -> 0.
    """
    _check_positive(c=c, sigma=sigma)
    return BoundValue.exact("p_sph_1d", gaussian_cdf(2.0 * math.sqrt(c) / sigma) - 0.5)


def p_sph_rus(
    xs: Sequence[float] | np.ndarray, sigma: float, c: float | None = None
) -> tuple[BoundValue, BoundValue]:
    """Exact univariate-search success probability plus its sandwich.

    Exact value: (1/n) * sum_i [Phi(2*|x_i|/sigma) - 1/2]. The interval
    [(1/n)*(Phi(2*sqrt(C)/(sigma*sqrt(n))) - 1/2),
     Phi(2*sqrt(C)/(sigma*sqrt(n))) - 1/2]
    follows from the largest coordinate (lower) and concavity of the
    single-coordinate probability in x_i^2 (upper); the upper end is attained
    at equal coordinates.
    """
    _check_positive(sigma=sigma)
    v, s = _shell_coords(xs, c)
    n = v.size
    exact = float(np.mean([gaussian_cdf(2.0 * xi / sigma) - 0.5 for xi in v]))
    shared = gaussian_cdf(2.0 * math.sqrt(s) / (sigma * math.sqrt(n))) - 0.5
    interval = BoundValue.interval("p_sph_rus_interval", shared / n, shared)
    return BoundValue.exact("p_sph_rus", exact), interval


def p_sph_ep_bounds(c: float, sigma: float, n: int) -> BoundValue:
    """Sandwich for the full-mutation success probability on the sphere.

    Upper: the enclosing box factorizes into the axis term times the
    (n-1)-fold central-slab mass. Lower: the inscribed box from the
    equal-coordinates configuration gives a perfect n-th power.
    """
    _check_positive(c=c, sigma=sigma)
    _check_dimension(n)
    root_c = math.sqrt(c)
    upper = (gaussian_cdf(2.0 * root_c / sigma) - 0.5) * (
        gaussian_cdf(root_c / sigma) - gaussian_cdf(-root_c / sigma)
    ) ** (n - 1)
    lower = (gaussian_cdf(2.0 * root_c / (sigma * math.sqrt(n))) - 0.5) ** n
    return BoundValue.interval("p_sph_ep", lower, upper)


# ---------------------------------------------------------------------------
# Sphere: improvement rates
# ---------------------------------------------------------------------------

def ir_sph_1d(c: float, sigma: float) -> BoundValue:
    """Single-coordinate improvement rate on the sphere.

    2*sigma/sqrt(2*pi*C) - (sigma^2/C) * (1/2 - Phi(-2*sqrt(C)/sigma));
    the expected relative fitness gain of one elitist step from sqrt(C).
    Scale-free in the ratio sigma/sqrt(C), single-peaked with maximum
    ~0.3239 near ratio 0.88.
    """
    _check_positive(c=c, sigma=sigma)
    root_c = math.sqrt(c)
    value = 2.0 * sigma / (SQRT_2PI * root_c) - (sigma * sigma / c) * (
        0.5 - gaussian_cdf(-2.0 * root_c / sigma)
    )
    return BoundValue.exact("ir_sph_1d", value)


def ir_sph_rus(
    xs: Sequence[float] | np.ndarray, sigma: float, c: float | None = None
) -> BoundValue:
    """Exact univariate-search improvement rate on the sphere.

    (1/n) * sum_i (x_i^2 / C) * ir_sph_1d(x_i^2, sigma). Zero coordinates
    contribute nothing (their limit term vanishes).
    """
    _check_positive(sigma=sigma)
    v, s = _shell_coords(xs, c)
    n = v.size
    total = 0.0
    for xi in v:
        xi2 = xi * xi
        if xi2 == 0.0:
            continue
        total += (xi2 / s) * ir_sph_1d(xi2, sigma).value
    return BoundValue.exact("ir_sph_rus", total / n)


def ir_sph_ep_bounds(c: float, sigma: float, n: int) -> BoundValue:
    """Sandwich for the full-mutation improvement rate on the sphere.

    Upper: the rate never exceeds the success probability (relative gain is
    at most 1 inside the target), so the probability upper bound applies.
    Lower: restricting the gain integral to the inscribed box factorizes into
    the single-coordinate probability at effective scale sigma*sqrt(n),
    raised to n-1, times the matching single-coordinate rate. At n = 1 the
    lower end reduces exactly to ir_sph_1d.
    """
    _check_positive(c=c, sigma=sigma)
    _check_dimension(n)
    upper = p_sph_ep_bounds(c, sigma, n).upper
    s_eff = sigma * math.sqrt(n)
    raw_lower = (p_sph_1d(c, s_eff).value ** (n - 1)) * ir_sph_1d(c, s_eff).value
    lower = max(0.0, raw_lower)
    return BoundValue.interval("ir_sph_ep", lower, upper, raw_lower=raw_lower)


# ---------------------------------------------------------------------------
# Cheating problem
# ---------------------------------------------------------------------------

def _cht_geometry(m: float, c: float) -> tuple[float, float, float]:
    """Distance x of the shell point from the origin and window [a, b].

    The present solution sits at x = sqrt(2M+1-C) in the cheating shell; the
    target ball has radius r = sqrt(min(C, M)), so a successful coordinate
    step must land in [x-r, x+r] scaled by sigma. Requires 0 < C <= M+1.
    """
    _check_positive(m=m, c=c)
    if c > m + 1.0:
        raise DomainError(f"fitness level C must satisfy C <= M+1 = {m + 1.0}, got {c}")
    x = math.sqrt(2.0 * m + 1.0 - c)
    r = math.sqrt(m) if c >= m else math.sqrt(c)
    return x, x - r, x + r


def p_cht_1d(m: float, c: float, sigma: float) -> BoundValue:
    """Single-coordinate probability of jumping into the target ball.

    Phi(b/sigma) - Phi(a/sigma) with [a, b] = [x-r, x+r] around the shell
    point x = sqrt(2M+1-C). Vanishes in both limits sigma -> 0 (mass stays at
    x, outside the target) and sigma -> infinity (mass disperses), so it has
    an interior maximizer in sigma.
    """
    _check_positive(sigma=sigma)
    _, a, b = _cht_geometry(m, c)
    return BoundValue.exact("p_cht_1d", gaussian_cdf(b / sigma) - gaussian_cdf(a / sigma))


def optimal_sigma_cht_1d(m: float, c: float) -> float:
    """Stationary sigma of the window probability Phi(b/s) - Phi(a/s).

    Setting the derivative to zero gives sigma* = sqrt((b^2-a^2)/(2*ln(b/a)));
    the log-mean-value form shows a < sigma* < b. Requires C < M+1 so that
    the window stays away from the origin (a > 0).
    """
    _, a, b = _cht_geometry(m, c)
    if not (a > 0.0):
        raise DomainError(
            f"optimal sigma needs the window bounded away from 0 (C < M+1), got a={a}"
        )
    return math.sqrt((b * b - a * a) / (2.0 * math.log(b / a)))


def rus_cht_coordinate_feasible(m: float, c: float, xi2: float) -> bool:
    """Whether mutating one coordinate can reach the target ball at all.

    From the shell ||x||^2 = 2M+1-C, changing coordinate i alone reaches
    ||y||^2 <= rho (rho = min(C, M)) iff y_i^2 <= rho - (2M+1-C) + x_i^2,
    which has a solution exactly when that threshold is positive. For
    C < M this reads 2*(C-M) - 1 + x_i^2 > 0: when C is small every
    coordinate fails and single-coordinate search can never reach the
    optimum's basin.
    """
    _check_positive(m=m, c=c)
    if xi2 < 0.0:
        raise DomainError(f"xi2 must be >= 0, got {xi2}")
    rho = min(c, m)
    return rho - (2.0 * m + 1.0 - c) + xi2 > 0.0


def p_cht_ep_bounds(m: float, c: float, sigma: float, n: int) -> BoundValue:
    """Sandwich for the full-mutation right-exploration probability.

    Analyzed branch 0 < C < M, with u = sqrt(2M+1-C):
    upper = (Phi((u+sqrt(C))/sigma) - Phi((u-sqrt(C))/sigma))
            * (Phi(sqrt(C)/sigma) - Phi(-sqrt(C)/sigma))^(n-1)
    lower = (Phi((u+sqrt(C))/(sigma*sqrt(n))) - Phi((u-sqrt(C))/(sigma*sqrt(n))))^n
    by the same enclosing-box / inscribed-box arguments as on the sphere.
    """
    _check_positive(sigma=sigma)
    _check_dimension(n)
    _require_cht_branch(m, c)
    u = math.sqrt(2.0 * m + 1.0 - c)
    root_c = math.sqrt(c)
    upper = (gaussian_cdf((u + root_c) / sigma) - gaussian_cdf((u - root_c) / sigma)) * (
        gaussian_cdf(root_c / sigma) - gaussian_cdf(-root_c / sigma)
    ) ** (n - 1)
    sn = sigma * math.sqrt(n)
    lower = (gaussian_cdf((u + root_c) / sn) - gaussian_cdf((u - root_c) / sn)) ** n
    return BoundValue.interval("p_cht_ep", lower, upper)


def _require_cht_branch(m: float, c: float) -> None:
    _check_positive(m=m, c=c)
    if not (c < m):
        raise DomainError(f"this bound is defined for 0 < C < M, got C={c}, M={m}")


def _improvement_integral_1d(c: float, x: float, sigma: float) -> float:
    """E[(C - y^2)+ restricted to |y| <= sqrt(C)] for y ~ N(x, sigma^2).

    Closed form of (1/(sqrt(2*pi)*sigma)) * int_{-sqrt(C)}^{sqrt(C)}
    (C - y^2) exp(-(y-x)^2/(2*sigma^2)) dy, assembled from the Gaussian
    moment integrals:

        (C - sigma^2 - x^2) * [Phi((x+sqrt(C))/sigma) - Phi((x-sqrt(C))/sigma)]
        + sigma*(sqrt(C)+x)/sqrt(2*pi) * exp(-(sqrt(C)-x)^2/(2*sigma^2))
        + sigma*(sqrt(C)-x)/sqrt(2*pi) * exp(-(sqrt(C)+x)^2/(2*sigma^2))

    Nonnegative for every (c, x, sigma) since the integrand is nonnegative.
    """
    root_c = math.sqrt(c)
    window = gaussian_cdf((x + root_c) / sigma) - gaussian_cdf((x - root_c) / sigma)
    e_minus = math.exp(-((root_c - x) ** 2) / (2.0 * sigma * sigma))
    e_plus = math.exp(-((root_c + x) ** 2) / (2.0 * sigma * sigma))
    return (
        (c - sigma * sigma - x * x) * window
        + sigma * (root_c + x) / SQRT_2PI * e_minus
        + sigma * (root_c - x) / SQRT_2PI * e_plus
    )


def ir_cht_1d(m: float, c: float, sigma: float) -> BoundValue:
    """Single-coordinate right-exploration improvement rate.

    The expected relative gain of a jump from x = sqrt(2M+1-C) into the
    target ball of squared radius C (branch 0 < C < M), divided by C.
    """
    _check_positive(sigma=sigma)
    _require_cht_branch(m, c)
    x = math.sqrt(2.0 * m + 1.0 - c)
    return BoundValue.exact("ir_cht_1d", _improvement_integral_1d(c, x, sigma) / c)


def ir_cht_ep_bounds(m: float, c: float, sigma: float, n: int) -> BoundValue:
    """Sandwich for the full-mutation right-exploration improvement rate.

    Upper: the rate cannot exceed the success probability, so the
    probability upper bound applies. Lower: restricting the gain integral to
    the box inscribed in the target ball at the equal-coordinates
    configuration factorizes into D^(n-1) times n/C times the
    single-coordinate gain at the scaled geometry (target C/n, distance
    u/sqrt(n)), where D is the per-coordinate window mass
    Phi((u+sqrt(C))/(sigma*sqrt(n))) - Phi((u-sqrt(C))/(sigma*sqrt(n))).
    The assembly is nonnegative by construction and reduces to ir_cht_1d at
    n = 1; the clamp is retained as a guard only.
    """
    _check_positive(sigma=sigma)
    _check_dimension(n)
    _require_cht_branch(m, c)
    upper = p_cht_ep_bounds(m, c, sigma, n).upper
    u = math.sqrt(2.0 * m + 1.0 - c)
    root_n = math.sqrt(n)
    root_c = math.sqrt(c)
    d = gaussian_cdf((u + root_c) / (sigma * root_n)) - gaussian_cdf(
        (u - root_c) / (sigma * root_n)
    )
    raw_lower = (d ** (n - 1)) * n * _improvement_integral_1d(c / n, u / root_n, sigma) / c
    lower = max(0.0, raw_lower)
    return BoundValue.interval("ir_cht_ep", lower, upper, raw_lower=raw_lower)


# ---------------------------------------------------------------------------
# Dimension scaling
# ---------------------------------------------------------------------------

def fit_decay_base(values: Mapping[int, float], offset: str = "n-1") -> ScalingFit:
    """Fit value ~ const * a^k by least squares of log(value) on k.

    ``offset`` selects the exponent model: k = n for "n", k = n-1 for "n-1"
    (the fitted base is the same either way; the offset fixes the intercept's
    meaning). Requires >= 4 distinct dimensions and positive values. A fitted
    base outside (0, 1) (e.g. from a constant sequence) raises FitRangeError
    reporting the offending value.
    """
    if offset not in ("n", "n-1"):
        raise DomainError(f"offset must be 'n' or 'n-1', got {offset!r}")
    dims = sorted(int(k) for k in values.keys())
    if len(dims) < 4:
        raise DomainError(f"need values at >= 4 dimensions, got {len(dims)}")
    ys = []
    for d in dims:
        v = float(values[d])
        if not (v > 0.0) or not math.isfinite(v):
            raise DomainError(f"values must be positive and finite, got {v} at n={d}")
        ys.append(math.log(v))
    shift = 1 if offset == "n-1" else 0
    xs = np.array([d - shift for d in dims], dtype=float)
    ys_arr = np.array(ys)
    slope, intercept = np.polyfit(xs, ys_arr, 1)
    fitted = intercept + slope * xs
    ss_res = float(np.sum((ys_arr - fitted) ** 2))
    ss_tot = float(np.sum((ys_arr - ys_arr.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 and ss_res == 0.0 else 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 0.0
    base = math.exp(float(slope))
    if not (0.0 < base < 1.0):
        raise FitRangeError(
            f"fitted decay base {base:.6g} outside (0, 1); values do not decay geometrically",
            fitted=base,
        )
    return ScalingFit(base_a=base, r2=r2, dims=tuple(dims), offset=offset)


FORMULA_IDS = (
    "p_sph_1d",
    "p_sph_rus",
    "p_sph_ep",
    "ir_sph_1d",
    "ir_sph_rus",
    "ir_sph_ep",
    "p_cht_1d",
    "p_cht_ep",
    "ir_cht_1d",
    "ir_cht_ep",
)
