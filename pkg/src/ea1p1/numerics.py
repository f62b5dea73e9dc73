"""Special functions, adaptive quadrature, and deterministic 1-D maximization.

Everything here is a pure function of its arguments. ``gaussian_cdf`` and the
moment integrals are the fast closed forms used throughout the bound
evaluators; ``integrate`` is the independent adaptive-quadrature oracle that
the test suite uses to cross-check every closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import AccuracyError, DomainError, EvaluationError

SQRT_2PI = math.sqrt(2.0 * math.pi)

# 1/phi and 1/phi^2 for golden-section refinement.
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy budget for ``integrate``."""

    abs_tol: float = 1e-10
    max_subdivisions: int = 100_000

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_subdivisions < 1:
            raise DomainError(
                f"max_subdivisions must be >= 1, got {self.max_subdivisions}"
            )


@dataclass(frozen=True)
class ArgmaxResult:
    """Location and value of a 1-D maximum, with the bracket searched."""

    arg: float
    value: float
    bracket: tuple[float, float]


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


def gaussian_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function.

    erfc keeps full relative accuracy in the lower tail, so the symmetry
    gaussian_cdf(-z) == 1 - gaussian_cdf(z) holds to rounding error.
    """
    z = _require_finite("z", z)
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def gaussian_pdf(z: float) -> float:
    """Standard normal density."""
    z = _require_finite("z", z)
    return math.exp(-0.5 * z * z) / SQRT_2PI


def psi(z: float) -> float:
    """Increasing concave transform psi(z) = sqrt(2*pi) * (Phi(sqrt(z)) - 1/2).

    Equals the half-weighted integral (1/2) * int_0^z exp(-t/2)/sqrt(t) dt,
    which is the normalization under which the single-coordinate success
    probability is psi(4*x^2/sigma^2)/sqrt(2*pi). Computing through the CDF
    identity removes the integrable singularity at 0.
    """
    z = _require_finite("z", z)
    if z < 0.0:
        raise DomainError(f"psi requires z >= 0, got {z}")
    return SQRT_2PI * (gaussian_cdf(math.sqrt(z)) - 0.5)


def moment_integrals(a: float, b: float) -> tuple[float, float, float]:
    """Signed Gaussian moment integrals of orders 2, 0, 1 over [a, b].

    Returns (I1, I2, I3) with weight exp(-z^2/2)/sqrt(2*pi):

        I1 = int z^2 w(z) dz = -(b*w(b) - a*w(a)) + Phi(b) - Phi(a)
        I2 = int     w(z) dz = Phi(b) - Phi(a)
        I3 = int z   w(z) dz = -(w(b) - w(a))

    a > b is allowed; all three integrals are then negated accordingly.
    """
    a = _require_finite("a", a)
    b = _require_finite("b", b)
    wa = gaussian_pdf(a)
    wb = gaussian_pdf(b)
    i2 = gaussian_cdf(b) - gaussian_cdf(a)
    i1 = -(b * wb - a * wa) + i2
    i3 = -(wb - wa)
    return (i1, i2, i3)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Adaptive-Simpson estimate of int_a^b f with absolute error <= abs_tol.

    Classic recursion with Richardson extrapolation, run iteratively on an
    explicit stack. Raises AccuracyError when the subdivision budget runs out
    before the local tolerances are met.
    """
    if spec is None:
        spec = QuadratureSpec()
    a = _require_finite("a", a)
    b = _require_finite("b", b)
    if a == b:
        return 0.0
    if a > b:
        return -integrate(f, b, a, spec)

    def feval(x: float) -> float:
        y = float(f(x))
        if not math.isfinite(y):
            raise EvaluationError(
                f"integrand returned non-finite value {y} at x={x}", abscissa=x
            )
        return y

    def simpson(lo: float, hi: float, flo: float, fmid: float, fhi: float) -> float:
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    fa, fb = feval(a), feval(b)
    m = 0.5 * (a + b)
    fm = feval(m)
    whole = simpson(a, b, fa, fm, fb)

    total = 0.0
    unresolved = 0.0  # residual error estimate of intervals we gave up on
    budget = spec.max_subdivisions
    stack = [(a, b, fa, fm, fb, whole, spec.abs_tol)]
    while stack:
        lo, hi, flo, fmid, fhi, s, tol = stack.pop()
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = feval(lm)
        frm = feval(rm)
        s_left = simpson(lo, mid, flo, flm, fmid)
        s_right = simpson(mid, hi, fmid, frm, fhi)
        s2 = s_left + s_right
        err = (s2 - s) / 15.0
        # Width floor guards against infinite splitting at rough points.
        if abs(err) <= tol or (hi - lo) <= 1e-14 * max(1.0, abs(lo) + abs(hi)):
            total += s2 + err
            continue
        if budget <= 0:
            total += s2 + err
            unresolved += abs(err)
            continue
        budget -= 1
        stack.append((lo, mid, flo, flm, fmid, s_left, tol / 2.0))
        stack.append((mid, hi, fmid, frm, fhi, s_right, tol / 2.0))

    if unresolved > spec.abs_tol:
        raise AccuracyError(
            f"subdivision budget {spec.max_subdivisions} exhausted; "
            f"achieved tolerance {unresolved:.3e} > requested {spec.abs_tol:.3e}",
            achieved_tol=unresolved,
            estimate=total,
        )
    return total


def maximize_1d(
    objective: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = 1e-8,
    grid_points: int = 1001,
) -> ArgmaxResult:
    """Locate a local maximizer by coarse grid scan plus golden-section.

    The grid (>= 1000 points by default) picks the best cell; golden-section
    then refines inside the two neighboring cells until the bracket width
    drops below ``tol``. Fully deterministic: identical inputs give
    bit-identical results. Unimodality is only assumed inside the refinement
    cell, not across the whole bracket.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise DomainError(f"bracket must be a nonempty finite interval, got {bracket}")
    if not (tol > 0.0):
        raise DomainError(f"tol must be positive, got {tol}")
    if grid_points < 2:
        raise DomainError(f"grid_points must be >= 2, got {grid_points}")

    def feval(x: float) -> float:
        y = float(objective(x))
        if not math.isfinite(y):
            raise EvaluationError(
                f"objective returned non-finite value {y} at x={x}", abscissa=x
            )
        return y

    step = (hi - lo) / (grid_points - 1)
    best_i = 0
    best_x = lo
    best_y = feval(lo)
    for i in range(1, grid_points):
        x = lo + i * step if i < grid_points - 1 else hi
        y = feval(x)
        if y > best_y:
            best_i, best_x, best_y = i, x, y

    # Golden-section inside the cells adjacent to the best grid point.
    a = lo + (best_i - 1) * step if best_i > 0 else lo
    b = lo + (best_i + 1) * step if best_i < grid_points - 1 else hi
    c = a + _INV_PHI2 * (b - a)
    d = a + _INV_PHI * (b - a)
    fc = feval(c)
    fd = feval(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = a + _INV_PHI2 * (b - a)
            fc = feval(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = feval(d)

    arg = 0.5 * (a + b)
    val = feval(arg)
    if best_y > val:  # grid point can beat the refined midpoint at coarse tol
        arg, val = best_x, best_y
    return ArgmaxResult(arg=arg, value=val, bracket=(lo, hi))
