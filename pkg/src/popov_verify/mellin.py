"""Quadrature checks of the Mellin pairs and the large-height estimates.

Forward transforms are integrated over (0, inf) with the exp-sinh rule and
compared with their Gamma times 2F1 closed forms.  Inverse transforms are
trapezoid sums on the segment [sigma - iT, sigma + iT] plus an analytic tail
from the exponential decay rate pi/2 - beta/alpha.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DomainError, FailedToFindTau0, InvalidSpec
from .identities import EvaluationReport, make_report
from .quadrature import QuadratureControls, exp_sinh, trapezoid_interval
from .series import ValueWithBound
from .specfun import EPS, SpecialValue, bessel_i_scaled, bessel_j, bessel_k, gamma, hyp2f1

PI = math.pi


@dataclass(frozen=True)
class LineIntegralSpec:
    """Segment of a vertical line plus the decay model of its tail.

    Past height T the integrand is assumed bounded by
    prefactor * t^exponent * exp(-rate * t) on both ends.
    """

    sigma: float
    height: float
    integrand: Callable[[complex], complex]
    exponent: float
    rate: float
    prefactor: float = 1.0

    def __post_init__(self) -> None:
        if not self.rate > 0.0:
            raise InvalidSpec(f"decay rate {self.rate} is not positive; need beta/alpha < pi/2")
        if not self.height > 0.0:
            raise InvalidSpec("truncation height must be positive")

    def tail(self) -> float:
        """Both-ended tail: 2 * prefactor * T^a e^{-cT} / (c - a/T) once c > a/T."""
        a, c, t = self.exponent, self.rate, self.height
        denom = c - max(a, 0.0) / t
        if denom <= 0.0:
            return math.inf
        return 2.0 * self.prefactor * t**a * math.exp(-c * t) / denom


@dataclass(frozen=True)
class AsymptoticCheckResult:
    heights: tuple[float, ...]
    ratios: tuple[complex, ...]
    deviations: tuple[float, ...]
    tau0: float | None = None

    def __post_init__(self) -> None:
        if any(b <= a for a, b in zip(self.heights, self.heights[1:])):
            raise InvalidSpec("heights must be strictly increasing")

    @property
    def band(self) -> float:
        """max / min of the deviation sequence."""
        lo = min(self.deviations)
        return math.inf if lo == 0.0 else max(self.deviations) / lo

    @property
    def decreasing(self) -> bool:
        gaps = [abs(r - 1.0) for r in self.ratios]
        return all(b < a for a, b in zip(gaps, gaps[1:]))


def _check_ab(alpha: float, beta: float) -> None:
    if not (alpha > beta > 0.0):
        raise InvalidSpec(f"need alpha > beta > 0, got alpha={alpha}, beta={beta}")


def _product(a: SpecialValue, b: SpecialValue) -> SpecialValue:
    v = a.value * b.value
    return SpecialValue(v, abs(a.value) * b.abs_error_bound + abs(b.value) * a.abs_error_bound + EPS * abs(v))


def _quad_value(res, rel_eval: float = 64 * EPS) -> ValueWithBound:
    err = res.error_estimate + rel_eval * res.abs_integral
    return ValueWithBound(complex(res.value), err, res.evaluations, 0.0, err)


# ------------------------------------------------------- e^{-ax} J(bx) pair


def mellin_closed_form(s: complex, alpha: float, beta: float, k: int) -> SpecialValue:
    """(b/2a)^nu a^-s Gamma(s+nu)/Gamma(nu+1) 2F1((s+nu)/2, (s+nu+1)/2; nu+1; -b^2/a^2)."""
    nu = k / 4.0 - 0.5
    s = complex(s)
    g = gamma(s + nu)
    f = hyp2f1((s + nu) / 2.0, (s + nu + 1.0) / 2.0, nu + 1.0, -(beta / alpha) ** 2)
    pref = (beta / (2.0 * alpha)) ** nu * cmath.exp(-s * math.log(alpha)) / math.gamma(nu + 1.0)
    out = _product(g, f)
    return SpecialValue(pref * out.value, abs(pref) * out.abs_error_bound + 8 * EPS * abs(pref * out.value) * (abs(s) + 2))


def mellin_forward_check(
    s: complex, alpha: float, beta: float, k: int, tol: float = 1e-10, controls: QuadratureControls | None = None
) -> EvaluationReport:
    """int_0^inf x^{s-1} e^{-alpha x} J_nu(beta x) dx, nu = k/4 - 1/2, against its closed form."""
    _check_ab(alpha, beta)
    nu = k / 4.0 - 0.5
    s = complex(s)
    if not s.real > -nu:
        raise DomainError(f"the transform needs Re s > 1/2 - k/4 = {-nu}")

    def f(x: float) -> complex:
        if alpha * x > 740.0:
            return 0.0
        j = bessel_j(nu, beta * x).value
        return cmath.exp((s - 1.0) * math.log(x) - alpha * x) * j

    ctl = controls or QuadratureControls(abs_target=tol / 10, rel_target=tol / 10)
    lhs = _quad_value(exp_sinh(f, ctl))
    closed = mellin_closed_form(s, alpha, beta, k)
    rhs = ValueWithBound(closed.value, closed.abs_error_bound, 0, 0.0, closed.abs_error_bound)
    return make_report("mellin_forward", lhs, rhs, tol, {"s": s, "alpha": alpha, "beta": beta, "k": k})


def _line(spec: LineIntegralSpec, tol: float, controls: QuadratureControls | None) -> ValueWithBound:
    """(1/2pi) int_{-T}^{T} F(sigma + it) dt with the modelled tail."""
    def f(t: float) -> complex:
        return spec.integrand(complex(spec.sigma, t))

    ctl = controls or QuadratureControls(abs_target=tol / 10, rel_target=1e-14, max_level=10)
    res = trapezoid_interval(f, -spec.height, spec.height, ctl, panels=max(64, int(8 * spec.height)))
    value = res.value / (2.0 * PI)
    tail = spec.tail() / (2.0 * PI)
    evaluation = (res.error_estimate + 64 * EPS * res.abs_integral) / (2.0 * PI)
    return ValueWithBound(value, tail + evaluation, res.evaluations, tail, evaluation)


def _choose_height(make: Callable[[float], LineIntegralSpec], tol: float, start: float = 8.0) -> LineIntegralSpec:
    height = start
    spec = make(height)
    while spec.tail() / (2.0 * PI) > tol / 2:
        height *= 1.25
        if height > 2000.0:
            raise InvalidSpec("no truncation height meets the tolerance")
        spec = make(height)
    return spec


def inverse_line_spec(
    n_arg: float, alpha: float, beta: float, k: int, sigma: float, height: float
) -> LineIntegralSpec:
    nu = k / 4.0 - 0.5
    pref = (beta / (2.0 * alpha)) ** nu / math.gamma(nu + 1.0)
    lax = math.log(alpha * n_arg)

    def integrand(s: complex) -> complex:
        g = gamma(s + nu).value
        f = hyp2f1((s + nu) / 2.0, (s + nu + 1.0) / 2.0, nu + 1.0, -(beta / alpha) ** 2).value
        return pref * g * f * cmath.exp(-s * lax)

    return LineIntegralSpec(
        sigma,
        height,
        integrand,
        sigma + k / 4.0 - 1.0,
        PI / 2.0 - beta / alpha,
        pref * math.sqrt(2.0 * PI) * math.exp(-sigma * lax),
    )


def mellin_inverse_check(
    n_arg: float,
    alpha: float,
    beta: float,
    k: int,
    sigma: float = 1.0,
    height: float | None = None,
    tol: float = 1e-8,
    controls: QuadratureControls | None = None,
) -> EvaluationReport:
    """e^{-alpha n} J_nu(beta n) against the truncated inverse Mellin integral."""
    _check_ab(alpha, beta)
    if not n_arg > 0.0:
        raise InvalidSpec("n_arg must be positive")
    if not sigma > 0.25:
        raise InvalidSpec("the line needs sigma > 1/4")
    nu = k / 4.0 - 0.5
    if not sigma > -nu:
        raise InvalidSpec(f"the line needs sigma > {-nu}")
    if height is None:
        spec = _choose_height(lambda h: inverse_line_spec(n_arg, alpha, beta, k, sigma, h), tol)
    else:
        spec = inverse_line_spec(n_arg, alpha, beta, k, sigma, height)
    rhs = _line(spec, tol, controls)
    j = bessel_j(nu, beta * n_arg)
    e = math.exp(-alpha * n_arg)
    lhs = ValueWithBound(complex(e * j.value), e * j.abs_error_bound + 4 * EPS * abs(e * j.value) * (alpha * n_arg + 1), 0)
    return make_report(
        "mellin_inverse",
        lhs,
        rhs,
        tol,
        {"n_arg": n_arg, "alpha": alpha, "beta": beta, "k": k, "sigma": sigma, "T": spec.height},
        {"tail_model": spec.tail() / (2 * PI), "imag_part": rhs.value.imag},
    )


def line_tail_model(alpha: float, beta: float, k: int, sigma: float, heights: Sequence[float]) -> list[tuple[float, float, float]]:
    """(T, measured |Gamma 2F1| at sigma+iT, model sqrt(2pi) T^{sigma+k/4-1} e^{-(pi/2-b/a)T})."""
    _check_ab(alpha, beta)
    nu = k / 4.0 - 0.5
    out = []
    for t in heights:
        s = complex(sigma, t)
        v = gamma(s + nu).value * hyp2f1((s + nu) / 2.0, (s + nu + 1.0) / 2.0, nu + 1.0, -(beta / alpha) ** 2).value
        model = math.sqrt(2.0 * PI) * t ** (sigma + k / 4.0 - 1.0) * math.exp(-(PI / 2.0 - beta / alpha) * t)
        out.append((float(t), abs(v), model))
    return out


def round_trip(
    alpha: float, beta: float, k: int, sigma: float = 1.0, points: Sequence[float] = (0.5, 1.0, 2.0), tol: float = 1e-8
) -> list[EvaluationReport]:
    """Feed the closed-form transform back through the inverse integral."""
    return [mellin_inverse_check(p, alpha, beta, k, sigma, None, tol) for p in points]


# ---------------------------------------------------------- J times K pair


def jk_closed_form(s: complex, alpha: float, beta: float, mu: float, nu: complex) -> SpecialValue:
    s = complex(s)
    nu = complex(nu)
    a1 = (s + mu - nu) / 2.0
    a2 = (s + mu + nu) / 2.0
    g = _product(gamma(a1), gamma(a2))
    f = hyp2f1(a1, a2, mu + 1.0, -(beta / alpha) ** 2)
    gp = _product(g, f)
    pref = cmath.exp((s - 2.0) * math.log(2.0) + mu * math.log(beta) - (s + mu) * math.log(alpha)) / math.gamma(mu + 1.0)
    v = pref * gp.value
    return SpecialValue(v, abs(pref) * gp.abs_error_bound + 8 * EPS * abs(v) * (abs(s) + 2))


def gamma2f1_product(sigma: float, t: float, mu: float, nu: complex, ratio: float) -> complex:
    """Gamma(a1) Gamma(a2) 2F1(a1, a2; mu+1; -ratio^2) / Gamma(mu+1), a_i = (sigma+mu-+nu)/2 + it/2."""
    nu = complex(nu)
    a1 = (sigma + mu - nu) / 2.0 + 0.5j * t
    a2 = (sigma + mu + nu) / 2.0 + 0.5j * t
    return gamma(a1).value * gamma(a2).value * hyp2f1(a1, a2, mu + 1.0, -ratio * ratio).value / math.gamma(mu + 1.0)


def mellin_jk_check(
    s: complex,
    alpha: float,
    beta: float,
    mu: float,
    nu: complex,
    tol: float = 1e-9,
    controls: QuadratureControls | None = None,
    inverse_at: float | None = 1.0,
) -> EvaluationReport:
    """int_0^inf x^{s-1} J_mu(beta x) K_nu(alpha x) dx against 2^{s-2} Gamma Gamma 2F1.

    With ``inverse_at`` set, the notes also carry the inverse line-integral
    check of J_mu(beta x) K_nu(alpha x) at that x.
    """
    _check_ab(alpha, beta)
    s = complex(s)
    nu = complex(nu)
    if not mu > -1.0:
        raise InvalidSpec("need mu > -1")
    if not (s + mu).real > abs(nu.real):
        raise DomainError("the transform needs Re(s + mu) > |Re nu|")

    def f(x: float) -> complex:
        if alpha * x > 740.0:
            return 0.0
        kv = bessel_k(nu, alpha * x).value
        return cmath.exp((s - 1.0) * math.log(x)) * bessel_j(mu, beta * x).value * kv

    ctl = controls or QuadratureControls(abs_target=tol / 10, rel_target=tol / 10)
    lhs = _quad_value(exp_sinh(f, ctl), 1e-13)
    closed = jk_closed_form(s, alpha, beta, mu, nu)
    rhs = ValueWithBound(closed.value, closed.abs_error_bound, 0, 0.0, closed.abs_error_bound)
    notes: dict = {}
    if inverse_at is not None:
        inv = jk_inverse_check(inverse_at, alpha, beta, mu, nu, None, None, tol)
        notes["inverse_residual"] = inv.abs_residual
        notes["inverse_passed"] = inv.passed
    return make_report(
        "mellin_jk", lhs, rhs, tol, {"s": s, "alpha": alpha, "beta": beta, "mu": mu, "nu": nu}, notes
    )


def jk_inverse_check(
    x: float,
    alpha: float,
    beta: float,
    mu: float,
    nu: complex,
    sigma: float | None = None,
    height: float | None = None,
    tol: float = 1e-8,
) -> EvaluationReport:
    """J_mu(beta x) K_nu(alpha x) from the inverse Mellin line integral.

    The tail past T uses 4 pi (t/2)^{sigma+mu-1} e^{-(pi/2-b/a)t}, which is
    asserted only for t >= tau0; T is therefore raised to at least the
    scanned tau0.
    """
    _check_ab(alpha, beta)
    nu = complex(nu)
    if sigma is None:
        sigma = abs(nu.real) - mu + 1.0
    if not sigma + mu > abs(nu.real):
        raise InvalidSpec("the line needs sigma + mu > |Re nu|")
    ratio = beta / alpha
    scan = asymptotic_check_gamma2f1(sigma, mu, nu, ratio, 60.0)
    lax = math.log(alpha * x / 2.0)
    pref = ratio**mu / 4.0

    def integrand(s: complex) -> complex:
        return pref * gamma2f1_product(sigma, s.imag, mu, nu, ratio) * cmath.exp(-s * lax)

    def make(h: float) -> LineIntegralSpec:
        # (t/2)^{a} = 2^{-a} t^{a}
        a = sigma + mu - 1.0
        return LineIntegralSpec(sigma, h, integrand, a, PI / 2.0 - ratio, pref * 4.0 * PI * 2.0**-a * math.exp(-sigma * lax))

    start = max(scan.tau0 or 0.0, 8.0)
    spec = make(max(height, start)) if height is not None else _choose_height(make, tol, start)
    rhs = _line(spec, tol, None)
    j = bessel_j(mu, beta * x)
    kv = bessel_k(nu, alpha * x)
    prod = _product(SpecialValue(complex(j.value), j.abs_error_bound), kv)
    lhs = ValueWithBound(prod.value, prod.abs_error_bound, 0, 0.0, prod.abs_error_bound)
    return make_report(
        "mellin_jk_inverse", lhs, rhs, tol, {"x": x, "alpha": alpha, "beta": beta, "mu": mu, "nu": nu, "T": spec.height}
    )


# ------------------------------------------------------- height asymptotics


def _lemma21_ratio(sigma: float, nu_order: float, ratio: float, t: float) -> complex:
    """2F1(...+it/2...) / (Gamma(nu+1) (rt/2)^-nu I_nu(rt)); complex in general."""
    a = (sigma + nu_order) / 2.0 + 0.5j * t
    f = hyp2f1(a, a + 0.5, nu_order + 1.0, -ratio * ratio).value
    u = ratio * t
    if u == 0.0:
        return complex(f)
    i_scaled = bessel_i_scaled(nu_order, u).value.real
    # log of Gamma(nu+1) (u/2)^-nu I_nu(u)
    log_ref = math.lgamma(nu_order + 1.0) - nu_order * math.log(u / 2.0) + math.log(i_scaled) + u
    return complex(f) * math.exp(-log_ref)


def asymptotic_check_2f1(
    sigma: float, nu_order: float, alpha: float, beta: float, heights: Sequence[float]
) -> AsymptoticCheckResult:
    """Ratio of 2F1 at height t to its claimed Bessel-I asymptote.

    ``deviations`` holds |ratio - 1| * t; a 1 + O(1/t) law keeps it bounded.
    """
    if not nu_order > -1.0:
        raise InvalidSpec("need nu > -1")
    if not sigma > -nu_order:
        raise InvalidSpec("need sigma > -nu")
    if not (alpha > beta >= 0.0):
        raise InvalidSpec("need alpha > beta >= 0")
    hs = tuple(float(h) for h in heights)
    if not hs or min(hs) <= 0.0:
        raise InvalidSpec("heights must be positive")
    ratios = tuple(_lemma21_ratio(sigma, nu_order, beta / alpha, t) for t in hs)
    devs = tuple(abs(r - 1.0) * t for r, t in zip(ratios, hs))
    return AsymptoticCheckResult(hs, ratios, devs)


def lemma42_sides(sigma: float, mu: float, nu: complex, ratio: float, t: float) -> tuple[float, float]:
    """(|Gamma Gamma 2F1 / Gamma(mu+1)|, 4 pi (t/2)^{sigma+mu-1} e^{-(pi/2 - ratio) t})."""
    lhs = abs(gamma2f1_product(sigma, t, mu, nu, ratio))
    rhs = 4.0 * PI * (t / 2.0) ** (sigma + mu - 1.0) * math.exp(-(PI / 2.0 - ratio) * t)
    return lhs, rhs


def asymptotic_check_gamma2f1(
    sigma: float,
    mu: float,
    nu: complex,
    ratio: float,
    tau0_search_max: float = 30.0,
    step: float = 0.5,
    horizon: float | None = None,
) -> AsymptoticCheckResult:
    """Scan t for the threshold past which the Gamma 2F1 inequality holds.

    Heights run from ``step`` to ``horizon`` (default 4 * tau0_search_max,
    at least 120).  ``ratios`` holds lhs / bound, ``deviations`` the slack
    1 - lhs / bound.
    """
    nu = complex(nu)
    if not mu > -1.0:
        raise InvalidSpec("need mu > -1")
    if not sigma + mu > abs(nu.real):
        raise InvalidSpec("need sigma + mu > |Re nu|")
    if not 0.0 <= ratio < 1.0:
        raise InvalidSpec("need 0 <= beta/alpha < 1")
    top = horizon if horizon is not None else max(4.0 * tau0_search_max, 120.0)
    n = int(round(top / step))
    hs = tuple(step * (i + 1) for i in range(n))
    ratios = []
    for t in hs:
        lhs, rhs = lemma42_sides(sigma, mu, nu, ratio, t)
        ratios.append(lhs / rhs)
    tau0 = None
    for i in range(len(hs) - 1, -1, -1):
        if ratios[i] > 1.0:
            break
        tau0 = hs[i]
    if tau0 is None or tau0 > tau0_search_max:
        raise FailedToFindTau0(
            f"no threshold <= {tau0_search_max} keeps the bound on the sampled heights (last found {tau0})"
        )
    return AsymptoticCheckResult(hs, tuple(ratios), tuple(1.0 - r for r in ratios), tau0)
