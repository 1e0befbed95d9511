"""Doubly-exponential and uniform trapezoid rules with level doubling.

All rules share one control object and report the difference between the
last two levels as their error estimate.  The trapezoid rule on an analytic,
rapidly decaying integrand converges geometrically in the step, so that
difference overstates the error of the finer level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import NoConvergence

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class QuadratureControls:
    """Refinement controls shared by every quadrature in the package."""

    rule: str = "de"
    max_level: int = 12
    abs_target: float = 1e-15
    rel_target: float = 1e-14
    initial_step: float = 0.5
    max_abscissa: float = 6.5


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error_estimate: float
    level: int
    evaluations: int
    abs_integral: float


def _csum(values: list[complex]) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def _accept(value: complex, err: float, ctl: QuadratureControls) -> bool:
    return err <= max(ctl.abs_target, ctl.rel_target * abs(value))


def _outward(
    node_term: Callable[[float], complex],
    h: float,
    offset: float,
    limit: float,
    reference: float,
) -> tuple[list[complex], int]:
    """Evaluate node_term at offset + j*step in both directions.

    The step is 2h for midpoint sweeps (offset nonzero) and h otherwise.  A
    direction stops after three consecutive terms below 1e-20 times the
    larger of ``reference`` and the biggest term seen.
    """
    step = 2.0 * h if offset else h
    terms: list[complex] = []
    evals = 0
    for sign in (1.0, -1.0):
        j = 0 if (offset or sign > 0) else 1
        quiet = 0
        biggest = reference
        while True:
            tau = sign * (offset + j * step)
            if abs(tau) > limit:
                break
            val = node_term(tau)
            evals += 1
            terms.append(val)
            mag = abs(val)
            biggest = max(biggest, mag)
            if mag <= 1e-20 * biggest and abs(tau) > 1.0:
                quiet += 1
                if quiet >= 3:
                    break
            else:
                quiet = 0
            j += 1
    return terms, evals


def _refine(node_term: Callable[[float], complex], ctl: QuadratureControls) -> QuadResult:
    h = ctl.initial_step
    terms, evals = _outward(node_term, h, 0.0, ctl.max_abscissa, 0.0)
    total = _csum(terms)
    abs_total = math.fsum(abs(t) for t in terms)
    reference = max((abs(t) for t in terms), default=0.0)
    value = h * total
    prev = value
    for level in range(1, ctl.max_level + 1):
        h *= 0.5
        new, n_new = _outward(node_term, h, h, ctl.max_abscissa, reference)
        evals += n_new
        total = total + _csum(new)
        abs_total += math.fsum(abs(t) for t in new)
        prev, value = value, h * total
        err = abs(value - prev)
        if level >= 2 and _accept(value, err, ctl):
            return QuadResult(value, err, level, evals, h * abs_total)
    raise NoConvergence(
        f"quadrature did not settle after {ctl.max_level} halvings "
        f"(last change {abs(value - prev):.3e})"
    )


def exp_sinh(f: Callable[[float], complex], controls: QuadratureControls | None = None) -> QuadResult:
    """Integral of f over (0, inf) with x = exp(pi/2 sinh tau)."""
    ctl = controls or QuadratureControls()

    def node(tau: float) -> complex:
        u = HALF_PI * math.sinh(tau)
        if u > 700.0 or u < -700.0:
            return 0.0
        x = math.exp(u)
        if x == 0.0:
            return 0.0
        w = HALF_PI * math.cosh(tau) * x
        return complex(f(x)) * w

    return _refine(node, ctl)


def tanh_sinh(
    f: Callable[[float, float], complex],
    a: float,
    b: float,
    controls: QuadratureControls | None = None,
) -> QuadResult:
    """Integral over (a, b) with the tanh-sinh map.

    ``f`` is called as ``f(x, 1 - t)`` where t in (0, 1) is the unit-interval
    coordinate, so factors like (1 - t)^p stay accurate near b.
    """
    ctl = controls or QuadratureControls()
    width = b - a

    def node(tau: float) -> complex:
        u = HALF_PI * math.sinh(tau)
        if abs(u) > 350.0:
            return 0.0
        t = 1.0 / (1.0 + math.exp(-2.0 * u))
        one_minus_t = 1.0 / (1.0 + math.exp(2.0 * u))
        if t == 0.0 or one_minus_t == 0.0:
            return 0.0
        w = HALF_PI * math.cosh(tau) / (2.0 * math.cosh(u) ** 2)
        return complex(f(a + width * t, one_minus_t)) * w * width

    return _refine(node, ctl)


def trapezoid_halfline_even(
    f: Callable[[float], complex],
    controls: QuadratureControls | None = None,
    cutoff: Callable[[float], bool] | None = None,
) -> QuadResult:
    """Integral over (0, inf) of an even integrand that already decays doubly
    exponentially; uses the plain trapezoid rule on the full line, halved.

    ``cutoff(u)`` returns True once the integrand is negligible for all larger u.
    """
    ctl = controls or QuadratureControls()

    def sweep(h: float, start: float, step: float) -> tuple[list[complex], int]:
        out: list[complex] = []
        u = start
        n = 0
        while True:
            val = complex(f(u))
            n += 1
            out.append(val)
            if cutoff is not None and cutoff(u):
                break
            if n > 200000:
                raise NoConvergence("integrand does not decay")
            u += step
        return out, n

    h = ctl.initial_step
    first, evals = sweep(h, 0.0, h)
    total = 0.5 * first[0] + _csum(first[1:])
    abs_total = 0.5 * abs(first[0]) + math.fsum(abs(v) for v in first[1:])
    value = h * total
    prev = value
    for level in range(1, ctl.max_level + 1):
        h *= 0.5
        new, n_new = sweep(h, h, 2.0 * h)
        evals += n_new
        total += _csum(new)
        abs_total += math.fsum(abs(v) for v in new)
        prev, value = value, h * total
        err = abs(value - prev)
        if level >= 2 and _accept(value, err, ctl):
            return QuadResult(value, err, level, evals, h * abs_total)
    raise NoConvergence(
        f"trapezoid did not settle after {ctl.max_level} halvings "
        f"(last change {abs(value - prev):.3e})"
    )


def trapezoid_interval(
    f: Callable[[float], complex],
    a: float,
    b: float,
    controls: QuadratureControls | None = None,
    panels: int = 64,
) -> QuadResult:
    """Composite trapezoid on [a, b] with panel doubling.

    Intended for smooth integrands whose endpoint values are negligible, where
    the rule converges geometrically.
    """
    ctl = controls or QuadratureControls()
    n = panels
    h = (b - a) / n
    vals = [complex(f(a + j * h)) for j in range(n + 1)]
    evals = n + 1
    total = 0.5 * (vals[0] + vals[-1]) + _csum(vals[1:-1])
    abs_total = math.fsum(abs(v) for v in vals)
    value = h * total
    prev = value
    for level in range(1, ctl.max_level + 1):
        mids = [complex(f(a + (2 * j + 1) * h * 0.5)) for j in range(n)]
        evals += n
        total += _csum(mids)
        abs_total += math.fsum(abs(v) for v in mids)
        n *= 2
        h *= 0.5
        prev, value = value, h * total
        err = abs(value - prev)
        if level >= 2 and _accept(value, err, ctl):
            return QuadResult(value, err, level, evals, h * abs_total)
    raise NoConvergence(
        f"trapezoid did not settle after {ctl.max_level} halvings "
        f"(last change {abs(value - prev):.3e})"
    )
