"""Special functions returning a value together with an absolute error bound.

Bounds combine a truncation part (ratio-test or alternating remainders,
asymptotic remainders, quadrature level differences) and a rounding model of
the form eps * sum|terms| * (operation count).  The rounding model is
deliberately generous; tests compare every bound against a high-precision
re-evaluation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .errors import DomainError, NoConvergence, PoleAt, RangeExceeded
from .quadrature import QuadratureControls, tanh_sinh, trapezoid_halfline_even

EPS = 2.0**-52
TINY = 1e-300
CANCELLATION_LIMIT = 1e8
MAX_SERIES_TERMS = 200_000

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class SpecialValue:
    value: complex
    abs_error_bound: float

    @property
    def real(self) -> float:
        return self.value.real

    def scaled(self, factor: complex, factor_rel_err: float = 0.0) -> "SpecialValue":
        v = self.value * factor
        return SpecialValue(v, abs(factor) * self.abs_error_bound + abs(v) * (factor_rel_err + 2 * EPS))


def _csum(values: list[complex]) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def _is_nonpositive_integer(s: complex) -> bool:
    return s.imag == 0.0 and s.real <= 0.0 and s.real == math.floor(s.real)


# --------------------------------------------------------------------- gamma


def _lanczos(z: complex) -> tuple[complex, float]:
    z = z - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    log_t = cmath.log(t)
    expo = (z + 0.5) * log_t - t
    if expo.real > 709.0:
        raise RangeExceeded(f"gamma overflows at {z + 1}")
    val = _SQRT_2PI * cmath.exp(expo) * acc
    rel = EPS * (40.0 + 2.0 * abs(expo) + 2.0 * abs(z)) + 3e-15
    return val, rel


# B_{2k} / (2k (2k-1)) for k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_NEXT = 43867.0 / 798.0 / (18.0 * 17.0)


def _two_product(a: float, b: float) -> tuple[float, float]:
    """Exact split a*b = p + e (Dekker)."""
    p = a * b
    factor = 134217729.0
    ca = factor * a
    ah = ca - (ca - a)
    al = a - ah
    cb = factor * b
    bh = cb - (cb - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _loggamma_stirling(s: complex) -> tuple[float, float, float]:
    """(Re, Im, abs error) of log Gamma(s) for |s| >= 15, Re s > 0."""
    x, y = s.real, s.imag
    big_l = math.log(abs(s))
    big_a = math.atan2(y, x)
    inv = 1.0 / s
    inv2 = inv * inv
    corr = 0j
    power = inv
    for coef in _STIRLING:
        corr += coef * power
        power *= inv2
    rem = abs(_STIRLING_NEXT * power) / math.cos(big_a / 2.0) ** 18
    xm = x - 0.5
    p1 = _two_product(xm, big_l)
    p2 = _two_product(y, big_a)
    p3 = _two_product(y, big_l)
    p4 = _two_product(xm, big_a)
    half_log_2pi = 0.9189385332046728
    re = math.fsum([p1[0], p1[1], -p2[0], -p2[1], -x, half_log_2pi, corr.real])
    im = math.fsum([p3[0], p3[1], p4[0], p4[1], -y, corr.imag])
    err = rem + EPS * (abs(xm * big_l) + abs(y * big_a) + abs(y * big_l) + abs(xm * big_a)) * 1.0 + EPS * (abs(x) + abs(y) + 4.0)
    return re, im, err


def _gamma_stirling(s: complex) -> tuple[complex, float]:
    """Gamma(s) for Re s >= 1/2 via shift to Re s >= 12 and Stirling."""
    shift = 0
    prod = 1 + 0j
    z = s
    while z.real < 12.0 or abs(z) < 15.0:
        prod *= z
        z += 1.0
        shift += 1
    re, im, err = _loggamma_stirling(z)
    if re > 709.0 + math.log(max(abs(prod), TINY)):
        raise RangeExceeded(f"gamma overflows at {s}")
    val = math.exp(re) * complex(math.cos(im), math.sin(im)) / prod
    rel = err + EPS * (abs(re) + 4.0 + 3.0 * shift)
    return val, rel


def _sinpi(s: complex) -> complex:
    """sin(pi s), reducing Re s to [-1/2, 1/2] exactly so zeros keep relative accuracy."""
    n = round(s.real)
    r = s.real - n
    sign = -1.0 if n % 2 else 1.0
    px, py = math.pi * r, math.pi * s.imag
    return complex(sign * math.sin(px) * math.cosh(py), sign * math.cos(px) * math.sinh(py))


def _gamma_right(s: complex) -> tuple[complex, float]:
    if abs(s.imag) > 3.0:
        return _gamma_stirling(s)
    return _lanczos(s)


def gamma(s: complex) -> SpecialValue:
    """Gamma function.

    Real arguments use the C library; complex arguments use Lanczos (g=7,
    n=9) near the real axis and a shifted Stirling series otherwise, with
    reflection for Re s < 1/2.
    """
    s = complex(s)
    if _is_nonpositive_integer(s):
        raise PoleAt(s, f"gamma has a pole at {s.real:g}")
    if s.imag == 0.0:
        x = s.real
        try:
            v = math.gamma(x)
        except OverflowError as exc:
            raise RangeExceeded(f"gamma({x}) overflows") from exc
        return SpecialValue(complex(v, 0.0), abs(v) * EPS * (16.0 + abs(x)))
    if s.real < 0.5:
        g, rel = _gamma_right(1.0 - s)
        sn = _sinpi(s)
        rel_sin = EPS * (abs(math.pi * s.imag) + 8.0)
        v = math.pi / (sn * g)
        return SpecialValue(v, abs(v) * (rel + rel_sin + 4 * EPS))
    v, rel = _gamma_right(s)
    return SpecialValue(v, abs(v) * rel)


def rgamma(s: complex) -> complex:
    """1/Gamma(s), zero at the poles."""
    s = complex(s)
    if _is_nonpositive_integer(s):
        return 0j
    return 1.0 / gamma(s).value


def gamma_ratio_bound_real(nu: float) -> float:
    """1/Gamma(nu + 1) for real nu > -1."""
    return math.exp(-math.lgamma(nu + 1.0))


# ------------------------------------------------------------- Bessel J and I


def _check_order(nu: float, low: float = -0.5) -> float:
    if isinstance(nu, complex):
        if nu.imag != 0.0:
            raise DomainError("order must be real")
        nu = nu.real
    nu = float(nu)
    if not math.isfinite(nu) or nu < low:
        raise DomainError(f"order {nu} outside [{low}, inf)")
    return nu


def _check_arg(t: float) -> float:
    if isinstance(t, complex):
        if t.imag != 0.0:
            raise DomainError("argument must be real")
        t = t.real
    t = float(t)
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"argument {t} must be a finite nonnegative real")
    return t


def _ascending_0f1(nu: float, w: complex, log_prefactor: complex) -> tuple[complex, float, float]:
    """sum_m exp(log_prefactor) w^m / (m! Gamma(nu+m+1)).

    Returns (value, abs_error_bound, max_abs_term).
    """
    log0 = log_prefactor - math.lgamma(nu + 1.0)
    if log0.real > 709.0:
        raise RangeExceeded("leading term overflows")
    term = cmath.exp(log0) if isinstance(log0, complex) else math.exp(log0)
    term = complex(term)
    terms = [term]
    aw = abs(w)
    m = 0
    max_term = abs(term)
    abs_sum = abs(term)
    weighted = 4.0 * abs(term)
    tail = 0.0
    while True:
        denom = (m + 1) * (nu + m + 1)
        term = term * w / denom
        m += 1
        mag = abs(term)
        terms.append(term)
        abs_sum += mag
        weighted += mag * (3.0 * m + 4.0)
        if mag > max_term:
            max_term = mag
            if mag > 1e300:
                raise RangeExceeded("ascending series overflows")
        rho = aw / ((m + 1) * (nu + m + 1))
        if rho < 0.5 and mag <= 1e-18 * max_term:
            tail = mag * rho / (1.0 - rho)
            break
        if mag == 0.0:
            break
        if m > MAX_SERIES_TERMS:
            raise NoConvergence("ascending series did not terminate")
    value = _csum(terms)
    rel0 = EPS * (abs(log0) + 4.0)
    err = tail + EPS * weighted + rel0 * abs_sum + EPS * abs(value)
    return value, err, max_term


def _hankel_j(nu: float, t: float) -> tuple[float, float]:
    """Large-argument expansion with the first-neglected-term remainder.

    The remainder statement holds for real order and positive argument once
    at least max(nu, 1) + 1 terms of each of P and Q are taken.
    """
    lmin = int(math.ceil(max(nu, 1.0))) + 1
    mu = 4.0 * nu * nu
    c = [1.0]
    k = 0
    while True:
        k += 1
        c.append(c[-1] * (mu - (2 * k - 1) ** 2) / (8.0 * k * t))
        if k >= 2 * lmin + 1 and k % 2 == 1:
            rem = abs(c[k - 1]) + abs(c[k])
            prev = abs(c[k - 3]) + abs(c[k - 2])
            if rem == 0.0 or rem < 1e-3 * EPS or rem > prev or k > 400:
                break
    best = None
    for ell in range(lmin, (len(c) - 2) // 2 + 1):
        rem = abs(c[2 * ell]) + abs(c[2 * ell + 1])
        if best is None or rem < best[1]:
            best = (ell, rem)
    assert best is not None
    ell, rem = best
    p = math.fsum((-1) ** j * c[2 * j] for j in range(ell))
    q = math.fsum((-1) ** j * c[2 * j + 1] for j in range(ell))
    mag = math.sqrt(2.0 / (math.pi * t))
    shift = (0.5 * nu + 0.25) * math.pi
    omega = t - shift
    val = mag * (p * math.cos(omega) - q * math.sin(omega))
    d_omega = EPS * (abs(t) + abs(shift) + 2.0) * 2.0
    abs_pq = abs(p) + abs(q)
    sum_c = math.fsum(abs(x) for x in c[: 2 * ell])
    err = mag * (rem + abs_pq * (d_omega + 6 * EPS) + 4 * EPS * sum_c)
    return val, err


def _j_envelope(nu: float, t: float) -> float:
    """Natural magnitude of J_nu(t) used for the cancellation guard."""
    small = math.exp(nu * math.log(t / 2.0) - math.lgamma(nu + 1.0)) if t > 0 else 1.0
    return min(small, math.sqrt(2.0 / (math.pi * t)) if t > 0 else small)


def bessel_j(nu: float, t: float) -> SpecialValue:
    """J_nu(t) for real nu >= -1/2 and real t >= 0.

    Ascending series for moderate t; the large-argument expansion with its
    certified remainder when that gives a tighter bound.
    """
    nu = _check_order(nu)
    t = _check_arg(t)
    if t == 0.0:
        if nu == 0.0:
            return SpecialValue(1 + 0j, 0.0)
        if nu > 0.0:
            return SpecialValue(0j, 0.0)
        raise DomainError("J_nu(0) is singular for negative order")
    env = _j_envelope(nu, t)
    if t >= 12.0:
        val, err = _hankel_j(nu, t)
        if t >= 40.0 or err <= 64 * EPS * env:
            return SpecialValue(complex(val, 0.0), err)
    else:
        val, err = None, math.inf
    value, aerr, max_term = _ascending_0f1(nu, -(t * t) / 4.0, nu * math.log(t / 2.0))
    if aerr > err:
        return SpecialValue(complex(val, 0.0), err)
    if max_term > CANCELLATION_LIMIT * max(abs(value), env):
        raise RangeExceeded(
            f"J_{nu}({t}): ascending series cancels beyond the guard "
            f"(max term {max_term:.3e})"
        )
    return SpecialValue(complex(value.real, 0.0), aerr)


def bessel_i_scaled(nu: float, t: float) -> SpecialValue:
    """exp(-t) I_nu(t) for real nu >= -1/2 and real t >= 0."""
    nu = _check_order(nu)
    t = _check_arg(t)
    if t == 0.0:
        if nu == 0.0:
            return SpecialValue(1 + 0j, 0.0)
        if nu > 0.0:
            return SpecialValue(0j, 0.0)
        raise DomainError("I_nu(0) is singular for negative order")
    value, err, _ = _ascending_0f1(nu, (t * t) / 4.0, nu * math.log(t / 2.0) - t)
    return SpecialValue(complex(value.real, 0.0), err)


def bessel_i(nu: float, t: float) -> SpecialValue:
    """I_nu(t) for real nu >= -1/2 and real t >= 0 (ascending series)."""
    s = bessel_i_scaled(nu, t)
    if t > 709.0:
        raise RangeExceeded(f"I_{nu}({t}) overflows")
    f = math.exp(t)
    return SpecialValue(s.value * f, s.abs_error_bound * f * (1 + EPS * (t + 2)) + abs(s.value) * f * EPS * (t + 2))


def bessel_norm0f1(nu: float, w: complex) -> SpecialValue:
    """sum_m w^m/(m! Gamma(nu+m+1)) for real nu > -1 and complex w.

    Equals (u/2)^(-nu) J_nu(u) at w = -u^2/4 and (u/2)^(-nu) I_nu(u) at
    w = u^2/4; entire in w, so it stays finite at u = 0 and for complex u.
    """
    nu = _check_order(nu, low=-1.0 + 1e-15)
    w = complex(w)
    if w.imag == 0.0 and w.real <= -36.0 and nu >= -0.5:
        t = 2.0 * math.sqrt(-w.real)
        j = bessel_j(nu, t)
        scale = math.exp(-nu * math.log(t / 2.0))
        return j.scaled(scale, EPS * (abs(nu * math.log(t / 2.0)) + 2))
    value, err, max_term = _ascending_0f1(nu, w, 0.0)
    if w.imag != 0.0 or w.real < 0.0:
        u = 2.0 * cmath.sqrt(-w)
        env = math.exp(abs(u.imag) - math.lgamma(nu + 1.0)) / (1.0 + abs(u)) ** (nu + 0.5)
        if max_term > CANCELLATION_LIMIT * max(abs(value), env):
            raise RangeExceeded(f"0F1 ascending series cancels beyond the guard at w={w}")
    return SpecialValue(value, err)


def bessel_j_normalized(nu: float, u: complex) -> SpecialValue:
    """(u/2)^(-nu) J_nu(u), entire in u^2."""
    u = complex(u)
    return bessel_norm0f1(nu, -(u * u) / 4.0)


def bessel_i_normalized(nu: float, u: complex) -> SpecialValue:
    """(u/2)^(-nu) I_nu(u), entire in u^2."""
    u = complex(u)
    return bessel_norm0f1(nu, (u * u) / 4.0)


# ------------------------------------------------------------------- Bessel K


def bessel_k_scaled(nu: complex, t: float, controls: QuadratureControls | None = None) -> SpecialValue:
    """exp(t) K_nu(t) for complex order and real t > 0.

    Trapezoid rule on the integral of exp(-t(cosh u - 1)) cosh(nu u) over
    u in (0, inf), halving the step until two levels agree.
    """
    if isinstance(t, complex):
        if t.imag != 0.0:
            raise DomainError("argument must be real")
        t = t.real
    t = float(t)
    if not math.isfinite(t) or t <= 0.0:
        raise DomainError(f"K_nu(t) requires t > 0, got {t}")
    nu = complex(nu)
    mu = abs(nu.real)
    ctl = controls or QuadratureControls()
    ctl = replace(ctl, initial_step=min(ctl.initial_step, 2.0 / math.sqrt(t)))

    def f(u: float) -> complex:
        return math.exp(-t * (math.cosh(u) - 1.0)) * cmath.cosh(nu * u)

    def cutoff(u: float) -> bool:
        return u > 1.0 and t * (math.cosh(u) - 1.0) - mu * u > 80.0

    res = trapezoid_halfline_even(f, ctl, cutoff)
    err = res.error_estimate + EPS * res.abs_integral * 16.0
    return SpecialValue(res.value, err)


def bessel_k(nu: complex, t: float, controls: QuadratureControls | None = None) -> SpecialValue:
    """K_nu(t) for complex order and real t > 0."""
    s = bessel_k_scaled(nu, t, controls)
    f = math.exp(-t)
    return SpecialValue(s.value * f, s.abs_error_bound * f + abs(s.value) * f * EPS * (abs(t) + 2))


def bessel_k_bound(nu_real: float, t: float) -> float:
    """Upper bound for |K_nu(t)| with |Re nu| = nu_real.

    From cosh u >= 1 + u^2/2 and cosh(mu u) <= exp(mu u):
    K <= sqrt(2 pi / t) exp(mu^2 / (2 t)) exp(-t).
    """
    mu = abs(nu_real)
    return math.sqrt(2.0 * math.pi / t) * math.exp(mu * mu / (2.0 * t) - t)


# ------------------------------------------------------- hypergeometric series


def _gauss_series(a: complex, b: complex, c: complex, z: complex) -> SpecialValue:
    if _is_nonpositive_integer(c):
        raise PoleAt(c, "2F1 with c a nonpositive integer")
    term = 1 + 0j
    terms = [term]
    weighted = 0.0
    az = abs(z)
    l = 0
    tail = 0.0
    max_term = 1.0
    while True:
        ratio = (a + l) * (b + l) / ((c + l) * (l + 1)) * z
        term = term * ratio
        l += 1
        mag = abs(term)
        if mag == 0.0:
            break
        terms.append(term)
        weighted += mag * (8.0 * l + 4.0)
        max_term = max(max_term, mag)
        base = l + c.real
        if base > 0.5:
            rho = az * (1.0 + abs(a - 1.0) / (l + 1)) * (1.0 + abs(b - c) / base)
            if rho < 1.0:
                rem = mag * rho / (1.0 - rho)
                if rem <= 1e-3 * EPS * max(abs(_csum(terms[-4:])), max_term * 1e-12, TINY) or rem <= 1e-3 * EPS * max_term:
                    tail = rem
                    break
        if l > MAX_SERIES_TERMS:
            raise NoConvergence(f"2F1 series at z={z} did not converge")
    value = _csum(terms)
    err = tail + EPS * (weighted + 2.0 + abs(value))
    return SpecialValue(value, err)


def hyp2f1(a: complex, b: complex, c: complex, z: complex, method: str = "auto") -> SpecialValue:
    """Gauss 2F1 for |z| < 1 or real z < 1.

    ``method`` selects the direct series, the Pfaff transformation
    (1-z)^(-a) F(a, c-b; c; z/(z-1)) or the Euler transformation
    (1-z)^(c-a-b) F(c-a, c-b; c; z).  ``auto`` uses Pfaff for z <= -1/2.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    real_z = z.imag == 0.0
    if real_z and z.real >= 1.0 or (not real_z and abs(z) >= 1.0):
        raise DomainError(f"2F1 outside the supported disk: z={z}")
    if method == "auto":
        method = "pfaff" if real_z and z.real <= -0.5 else "direct"
    if method == "direct":
        if abs(z) >= 1.0:
            raise DomainError("direct 2F1 series needs |z| < 1")
        return _gauss_series(a, b, c, z)
    log1mz = cmath.log(1.0 - z)
    if method == "pfaff":
        w = z / (z - 1.0)
        inner = _gauss_series(a, c - b, c, w)
        pref = cmath.exp(-a * log1mz)
        rel = EPS * (abs(a * log1mz) + 4.0)
        return inner.scaled(pref, rel)
    if method == "euler":
        if abs(z) >= 1.0:
            raise DomainError("Euler transformation keeps z, needs |z| < 1")
        inner = _gauss_series(c - a, c - b, c, z)
        ex = (c - a - b) * log1mz
        pref = cmath.exp(ex)
        return inner.scaled(pref, EPS * (abs(ex) + 4.0))
    raise ValueError(f"unknown method {method!r}")


def hyp2f1_euler_integral(
    a: complex, b: complex, c: complex, z: float, controls: QuadratureControls | None = None
) -> SpecialValue:
    """Euler integral Gamma(c)/(Gamma(b)Gamma(c-b)) int_0^1 t^(b-1)(1-t)^(c-b-1)(1-zt)^(-a) dt.

    Needs Re c > Re b > 0 and real z < 1.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if not (c.real > b.real > 0.0):
        raise DomainError("Euler integral needs Re c > Re b > 0")
    if z >= 1.0:
        raise DomainError("Euler integral needs z < 1")

    def f(t: float, one_minus_t: float) -> complex:
        return cmath.exp(
            (b - 1.0) * math.log(t) + (c - b - 1.0) * math.log(one_minus_t) - a * math.log(1.0 - z * t)
        )

    res = tanh_sinh(f, 0.0, 1.0, controls)
    gc, gb, gcb = gamma(c), gamma(b), gamma(c - b)
    pref = gc.value / (gb.value * gcb.value)
    rel = (
        gc.abs_error_bound / abs(gc.value)
        + gb.abs_error_bound / abs(gb.value)
        + gcb.abs_error_bound / abs(gcb.value)
    )
    val = pref * res.value
    err = abs(pref) * (res.error_estimate + 16 * EPS * res.abs_integral) + abs(val) * rel
    return SpecialValue(val, err)


def hyp1f1(a: complex, b: complex, z: complex) -> SpecialValue:
    """Kummer 1F1 by its power series; Kummer's transformation when Re z < -1."""
    a, b, z = complex(a), complex(b), complex(z)
    if _is_nonpositive_integer(b):
        raise PoleAt(b, "1F1 with b a nonpositive integer")
    if z.real < -1.0:
        inner = _kummer_series(b - a, b, -z)
        return inner.scaled(cmath.exp(z), EPS * (abs(z) + 2.0))
    return _kummer_series(a, b, z)


def _kummer_series(a: complex, b: complex, z: complex) -> SpecialValue:
    term = 1 + 0j
    terms = [term]
    weighted = 0.0
    az = abs(z)
    l = 0
    tail = 0.0
    max_term = 1.0
    while True:
        term = term * (a + l) * z / ((b + l) * (l + 1))
        l += 1
        mag = abs(term)
        if mag == 0.0:
            break
        terms.append(term)
        weighted += mag * (6.0 * l + 4.0)
        max_term = max(max_term, mag)
        base = l + b.real
        if base > 0.5:
            rho = az * (1.0 + abs(a - b) / base) / (l + 1)
            if rho < 1.0:
                rem = mag * rho / (1.0 - rho)
                if rem <= 1e-3 * EPS * max_term:
                    tail = rem
                    break
        if l > MAX_SERIES_TERMS:
            raise NoConvergence(f"1F1 series at z={z} did not converge")
    value = _csum(terms)
    return SpecialValue(value, tail + EPS * (weighted + 2.0 + abs(value)))


def _poch(x: complex, n: int) -> complex:
    out = 1 + 0j
    for j in range(n):
        out *= x + j
    return out


def humbert_phi3(b: complex, c: complex, w: complex, u: complex) -> SpecialValue:
    """Humbert Phi3(b; c; w, u) = sum (b)_k w^k u^m / ((c)_{k+m} k! m!).

    Summed along anti-diagonals d = k + m with the tail bounded by
    (B)_d (|w|+|u|)^d / (|(c)_d| d!), B = max(|b|, 1), which needs Re c > 0.
    """
    b, c, w, u = complex(b), complex(c), complex(w), complex(u)
    if c.real <= 0.0:
        raise DomainError("Phi3 evaluation needs Re c > 0")
    big_b = max(abs(b), 1.0)
    s = abs(w) + abs(u)
    a_k: list[complex] = [1 + 0j]
    b_m: list[complex] = [1 + 0j]
    inv_c = 1 + 0j
    diag_sums: list[complex] = []
    weighted = 0.0
    env = 1.0
    d = 0
    tail = 0.0
    while True:
        if d > 0:
            a_k.append(a_k[-1] * (b + d - 1) * w / d)
            b_m.append(b_m[-1] * u / d)
            inv_c = inv_c / (c + d - 1)
            env = env * (big_b + d - 1) * s / (abs(c + d - 1) * d)
        parts = [a_k[k] * b_m[d - k] for k in range(d + 1)]
        sd = inv_c * _csum(parts)
        diag_sums.append(sd)
        weighted += abs(inv_c) * math.fsum(abs(p) for p in parts) * (4.0 * d + 6.0)
        nxt = d + 1
        rho = s * max(1.0, (big_b + nxt) / (c.real + nxt)) / (nxt + 1)
        env_next = env * (big_b + d) * s / ((c.real + d) * (d + 1))
        if rho < 1.0 and d >= 2:
            rem = env_next / (1.0 - rho)
            if rem <= 1e-3 * EPS * max(abs(_csum(diag_sums)), 1e-300) or rem == 0.0:
                tail = rem
                break
        d += 1
        if d > 5000:
            raise NoConvergence("Phi3 anti-diagonal sums did not converge")
    value = _csum(diag_sums)
    return SpecialValue(value, tail + EPS * (weighted + abs(value)))


def phi3_magnitude_bound(b: complex, c: float, w: complex, u_abs: float) -> float:
    """Upper bound for |Phi3(b; c; w, u)| valid for real c > 0 and |u| <= u_abs.

    (c)_{k+m} >= (c)_k (c)_m gives a product of a 1F1-type series in w and a
    0F1-type series in u; the latter is at most exp(2 sqrt(u / min(1, c))).
    """
    b = complex(b)
    aw = abs(w)
    term = 1.0
    total = 1.0
    k = 0
    while True:
        term *= abs(b + k) * aw / ((c + k) * (k + 1))
        k += 1
        total += term
        if term < 1e-17 * total and abs(b + k) * aw / ((c + k) * (k + 1)) < 0.5:
            total += 2 * term
            break
        if k > 100000:
            raise NoConvergence("Phi3 bound series")
    return total * math.exp(2.0 * math.sqrt(u_abs / min(1.0, c)))
