"""Truncated evaluation of weighted Bessel-type series with certified tails.

A single series is

    sum_{n >= start} c * a(n) * lam_n^p * kernel(lam_n) * osc(beta * lam_n^g)

with lam_n = scale * n^power.  The truncation point is chosen before any
term is summed, from an envelope B(n) >= |term n| whose logarithm splits
into a concave part and a nonincreasing part; once the concave increments
drop below zero the tail past N is at most B(N+1) / (1 - rho).
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .arith import ArithmeticSequence, Growth, SumOfSquares, r_k_table
from .errors import HorizonOverflow, InvalidSpec, TolUnreachable
from .specfun import (
    EPS,
    SpecialValue,
    bessel_i_scaled,
    bessel_j,
    bessel_k_scaled,
    bessel_norm0f1,
    humbert_phi3,
    phi3_magnitude_bound,
)

DEFAULT_MAX_TERMS = 1_000_000

OSCILLATORS = ("J", "I", "Jn", "In", "cos", "sin", "cosh", "sinh", "one", "phi3")
KERNELS = ("exp", "K")


def max_terms_default() -> int:
    raw = os.environ.get("POPOV_VERIFY_MAX_TERMS")
    if raw:
        try:
            return max(int(raw), 1)
        except ValueError:
            pass
    return DEFAULT_MAX_TERMS


@lru_cache(maxsize=None)
def sum_of_squares(k: int) -> SumOfSquares:
    """Shared r_k sequence so that tables are built once per process."""
    return SumOfSquares(k)


@dataclass(frozen=True)
class ValueWithBound:
    """A truncated sum.

    ``tail_bound`` is the full certified error: the truncation tail plus the
    accumulated evaluation error of the summed terms.
    """

    value: complex
    tail_bound: float
    terms_used: int
    truncation: float = 0.0
    evaluation: float = 0.0

    def __add__(self, other: "ValueWithBound") -> "ValueWithBound":
        return ValueWithBound(
            self.value + other.value,
            self.tail_bound + other.tail_bound + EPS * abs(self.value + other.value),
            self.terms_used + other.terms_used,
            self.truncation + other.truncation,
            self.evaluation + other.evaluation + EPS * abs(self.value + other.value),
        )

    def scaled(self, factor: complex, rel_err: float = 0.0) -> "ValueWithBound":
        v = self.value * factor
        extra = abs(v) * (rel_err + 2 * EPS)
        return ValueWithBound(
            v,
            abs(factor) * self.tail_bound + extra,
            self.terms_used,
            abs(factor) * self.truncation,
            abs(factor) * self.evaluation + extra,
        )


def exact(value: complex, rel_err: float = 0.0) -> ValueWithBound:
    """A closed-form quantity with a relative evaluation error."""
    value = complex(value)
    err = abs(value) * (rel_err + EPS)
    return ValueWithBound(value, err, 0, 0.0, err)


@dataclass(frozen=True)
class Kernel:
    kind: str = "exp"
    rate: float = 0.0
    order: complex = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KERNELS:
            raise InvalidSpec(f"unknown kernel {self.kind!r}")
        if not (self.rate > 0.0):
            raise InvalidSpec("kernel rate must be positive")


@dataclass(frozen=True)
class Oscillator:
    kind: str = "one"
    order: float = 0.0
    scale: complex = 0.0
    arg_power: float = 1.0
    params: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in OSCILLATORS:
            raise InvalidSpec(f"unknown oscillator {self.kind!r}")
        if self.kind in ("J", "I"):
            sc = complex(self.scale)
            if sc.imag != 0.0 or sc.real < 0.0:
                raise InvalidSpec("J and I oscillators need a real nonnegative scale")
            if self.order < -0.5:
                raise InvalidSpec("J and I oscillators need order >= -1/2")
        if self.kind in ("Jn", "In") and self.order <= -1.0:
            raise InvalidSpec("normalized Bessel oscillators need order > -1")
        if self.arg_power not in (0.5, 1.0):
            raise InvalidSpec("oscillator argument power must be 1/2 or 1")
        if self.kind == "phi3":
            if len(self.params) != 3 or self.arg_power != 1.0:
                raise InvalidSpec("phi3 oscillator needs params (b, c, w) and arg power 1")
            if complex(self.params[1]).imag != 0.0 or complex(self.params[1]).real <= 0.0:
                raise InvalidSpec("phi3 oscillator needs real c > 0")


@dataclass(frozen=True)
class IndexMap:
    """lam_n = scale * n^power."""

    scale: float = 1.0
    power: int = 1

    def __post_init__(self) -> None:
        if self.power not in (1, 2) or not self.scale > 0.0:
            raise InvalidSpec("index map needs power 1 or 2 and positive scale")

    def __call__(self, n: float) -> float:
        return self.scale * n**self.power


@dataclass(frozen=True)
class BesselSeriesSpec:
    weights: ArithmeticSequence
    power: complex
    kernel: Kernel
    oscillator: Oscillator = field(default_factory=Oscillator)
    index_map: IndexMap = field(default_factory=IndexMap)
    coefficient: complex = 1.0
    start: int = 1

    def __post_init__(self) -> None:
        if self.start < 1:
            raise InvalidSpec("series start must be >= 1")
        self._net_linear_rate()

    def _net_linear_rate(self) -> float:
        """Coefficient of -lam in the log envelope; must be positive."""
        osc = self.oscillator
        growth = 0.0
        if osc.arg_power == 1.0 or self.index_map.power * osc.arg_power > 1.0:
            growth = _osc_growth_rate(osc)
        rate = self.kernel.rate - growth
        if not rate > 0.0:
            raise InvalidSpec("oscillator growth is not dominated by the kernel decay")
        return rate


def _osc_growth_rate(osc: Oscillator) -> float:
    """Exponential growth coefficient of |osc(u)| in |u|/|scale| units."""
    sc = complex(osc.scale)
    kind = osc.kind
    if kind in ("I",):
        return sc.real
    if kind in ("cosh", "sinh"):
        return abs(sc.real)
    if kind in ("cos", "sin"):
        return abs(sc.imag)
    if kind == "Jn":
        if osc.order >= -0.5:
            return abs(sc.imag)
        return abs(sc) / math.sqrt(1.0 + osc.order)
    if kind == "In":
        if osc.order >= -0.5:
            return abs(sc.real)
        return abs(sc) / math.sqrt(1.0 + osc.order)
    return 0.0


class _Envelope:
    """log B(n) = const + D log n + box log(2 sqrt n + 1) - R lam + Q lam^g + extra(n)."""

    def __init__(self, spec: BesselSeriesSpec) -> None:
        osc = spec.oscillator
        imap = spec.index_map
        g: Growth = spec.weights.growth
        p_re = complex(spec.power).real
        const = math.log(abs(complex(spec.coefficient))) if spec.coefficient else -math.inf
        const += math.log(g.const)
        lam_pow = p_re
        self.sub_coef = 0.0
        self.sub_pow = osc.arg_power
        growth = _osc_growth_rate(osc)
        linear_growth = osc.arg_power == 1.0 or imap.power * osc.arg_power > 1.0
        rate = spec.kernel.rate
        if linear_growth:
            rate -= growth
        else:
            self.sub_coef = growth
        if osc.kind in ("J", "I"):
            beta = complex(osc.scale).real
            if beta == 0.0:
                const += 0.0 if osc.order == 0 else -math.inf
            else:
                const += osc.order * math.log(beta / 2.0) - math.lgamma(osc.order + 1.0)
                lam_pow += osc.order * osc.arg_power
        elif osc.kind in ("Jn", "In"):
            const -= math.lgamma(osc.order + 1.0)
        elif osc.kind == "phi3":
            b, c, w = osc.params
            # exp(2 sqrt(|u1| lam / min(1, c))) is sublinear in lam
            self.phi3_const = phi3_magnitude_bound(b, complex(c).real, w, 0.0)
            const += math.log(self.phi3_const)
            self.sub_coef = 2.0 * math.sqrt(abs(complex(osc.scale)) / min(1.0, complex(c).real))
            self.sub_pow = 0.5
        self.k_mu = None
        if spec.kernel.kind == "K":
            self.k_mu = abs(complex(spec.kernel.order).real)
            const += 0.5 * math.log(2.0 * math.pi / spec.kernel.rate)
            lam_pow -= 0.5
        # lam^e = scale^e * n^(power e)
        const += lam_pow * math.log(imap.scale)
        self.const = const
        self.rate = rate
        self.alpha = spec.kernel.rate
        self.box = g.box
        self.d_power = g.power + imap.power * lam_pow
        self.imap = imap

    def concave(self, n: float) -> float:
        lam = self.imap(n)
        out = self.box * math.log(2.0 * math.sqrt(n) + 1.0) - self.rate * lam
        if self.d_power > 0.0:
            out += self.d_power * math.log(n)
        if self.sub_coef:
            out += self.sub_coef * lam**self.sub_pow
        return out

    def nonincreasing(self, n: float) -> float:
        out = 0.0
        if self.d_power < 0.0:
            out += self.d_power * math.log(n)
        if self.k_mu is not None:
            out += self.k_mu**2 / (2.0 * self.alpha * self.imap(n))
        return out

    def log_bound(self, n: float) -> float:
        return self.const + self.concave(n) + self.nonincreasing(n)

    def tail(self, n_trunc: int) -> float:
        """Bound on sum_{n > n_trunc} B(n); inf while the envelope still grows."""
        a, b = n_trunc + 1, n_trunc + 2
        step = self.concave(b) - self.concave(a)
        if step >= 0.0:
            return math.inf
        lb = self.log_bound(a)
        if lb < -745.0:
            return 0.0
        return math.exp(lb) / (-math.expm1(step))


def choose_truncation(tail: Callable[[int], float], tol: float, max_terms: int, start: int = 0) -> int:
    """Smallest N >= start with tail(N) <= tol, by doubling then bisection."""
    if not tol > 0.0:
        raise InvalidSpec("tolerance must be positive")
    if tail(start) <= tol:
        return start
    hi = max(start, 1)
    while tail(hi) > tol:
        if hi >= max_terms:
            raise TolUnreachable(
                f"tail bound {tail(hi):.3e} still above {tol:.3e} at the term ceiling {max_terms}"
            )
        hi = min(2 * hi, max_terms)
    lo = max(start, hi // 2)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail(mid) <= tol:
            hi = mid
        else:
            lo = mid
    return hi if tail(lo) > tol else lo


def series_tail_bound(spec: BesselSeriesSpec, n_trunc: int) -> float:
    return _Envelope(spec).tail(n_trunc)


def _kernel_osc(spec: BesselSeriesSpec, lam: float) -> SpecialValue:
    """kernel(lam) * osc(beta lam^g) with exponential factors combined."""
    osc = spec.oscillator
    ker = spec.kernel
    u = complex(osc.scale) * lam**osc.arg_power
    if ker.kind == "K":
        ks = bessel_k_scaled(ker.order, ker.rate * lam)
        log_k = -ker.rate * lam
        base = ks
    else:
        base = SpecialValue(1 + 0j, 0.0)
        log_k = -ker.rate * lam
    kind = osc.kind
    if kind == "J":
        o = bessel_j(osc.order, u.real)
        shift = 0.0
    elif kind == "I":
        o = bessel_i_scaled(osc.order, u.real)
        shift = u.real
    elif kind == "Jn":
        o = bessel_norm0f1(osc.order, -(u * u) / 4.0)
        shift = 0.0
    elif kind == "In":
        if u.imag == 0.0 and u.real > 30.0 and osc.order >= -0.5:
            # (u/2)^-nu I_nu(u) with e^u moved into the exponent
            ri = bessel_i_scaled(osc.order, u.real)
            o = ri.scaled(math.exp(-osc.order * math.log(u.real / 2.0)), EPS * (abs(osc.order * math.log(u.real / 2.0)) + 2))
            shift = u.real
        else:
            o = bessel_norm0f1(osc.order, (u * u) / 4.0)
            shift = 0.0
    elif kind in ("cos", "sin", "cosh", "sinh"):
        # combine exp(log_k) with the exponentials inside the trig function
        e = u if kind in ("cosh", "sinh") else 1j * u
        sign = 1.0 if kind in ("cos", "cosh") else -1.0
        plus = cmath.exp(log_k + e)
        minus = cmath.exp(log_k - e)
        val = 0.5 * (plus + sign * minus)
        if kind == "sin":
            val = val / 1j
        err = EPS * (abs(plus) + abs(minus)) * (abs(log_k) + abs(e) + 4.0)
        return SpecialValue(val * base.value, abs(val) * base.abs_error_bound + err * abs(base.value))
    elif kind == "one":
        o = SpecialValue(1 + 0j, 0.0)
        shift = 0.0
    else:
        b, c, w = osc.params
        o = humbert_phi3(b, c, w, u)
        shift = 0.0
    expo = log_k + shift
    f = math.exp(expo)
    v = base.value * o.value * f
    err = f * (abs(base.value) * o.abs_error_bound + abs(o.value) * base.abs_error_bound)
    err += abs(v) * EPS * (abs(expo) + 4.0)
    return SpecialValue(v, err)


def eval_series(
    spec: BesselSeriesSpec,
    tol: float,
    max_terms: int | None = None,
    n_trunc: int | None = None,
) -> ValueWithBound:
    """Sum the series to a certified tail <= tol (or to a fixed ``n_trunc``)."""
    env = _Envelope(spec)
    cap = max_terms if max_terms is not None else max_terms_default()
    if n_trunc is None:
        n_trunc = choose_truncation(env.tail, tol, cap, start=spec.start - 1)
    elif n_trunc > cap:
        raise TolUnreachable(f"requested truncation {n_trunc} exceeds the ceiling {cap}")
    tail = env.tail(n_trunc)
    if n_trunc < spec.start:
        return ValueWithBound(0j, tail, 0, tail, 0.0)
    try:
        table = spec.weights.table(n_trunc)
    except HorizonOverflow as exc:
        raise TolUnreachable(str(exc)) from exc
    imap = spec.index_map
    p = complex(spec.power)
    coef = complex(spec.coefficient)
    terms: list[complex] = []
    errs: list[float] = []
    for n in range(spec.start, n_trunc + 1):
        a = complex(table[n])
        if a == 0:
            continue
        lam = imap(n)
        lp = cmath.exp(p * math.log(lam)) if p != 0 else 1 + 0j
        ko = _kernel_osc(spec, lam)
        front = coef * a * lp
        t = front * ko.value
        terms.append(t)
        errs.append(abs(front) * ko.abs_error_bound + abs(t) * EPS * (abs(p * math.log(lam)) + 6.0))
    value = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    evaluation = math.fsum(errs) + EPS * abs(value)
    return ValueWithBound(value, tail + evaluation, n_trunc - spec.start + 1, tail, evaluation)


# --------------------------------------------------------------- double series


@dataclass(frozen=True)
class DoubleSeriesSpec:
    """sum_{m,n>=1} c a(m) b(n) (m/n)^rho (mn)^jp F(s_F sqrt(mn)) K_nu(s_K sqrt(mn)).

    F is J or I of real order mu >= -1/2.  Terms are grouped by P = mn so the
    Bessel factors are evaluated once per product.
    """

    weights_m: ArithmeticSequence
    weights_n: ArithmeticSequence
    ratio_exponent: complex
    joint_power: float
    inner: str
    inner_order: float
    inner_scale: float
    k_order: complex
    k_scale: float
    coefficient: complex = 1.0

    def __post_init__(self) -> None:
        if self.inner not in ("J", "I"):
            raise InvalidSpec("inner oscillator must be J or I")
        if self.inner_order < -0.5:
            raise InvalidSpec("inner order must be >= -1/2")
        if not self.k_scale > 0.0 or self.inner_scale < 0.0:
            raise InvalidSpec("scales must be positive")
        if self.decay_rate() <= 0.0:
            raise InvalidSpec("I growth is not dominated by the K decay")

    def decay_rate(self) -> float:
        return self.k_scale - (self.inner_scale if self.inner == "I" else 0.0)


def _pair_growth(gm: Growth, gn: Growth) -> tuple[float, float]:
    """(log const, power of P) with |a(m) b(n)| <= exp(const) P^power when mn = P."""
    const = math.log(gm.const * gn.const)
    power = max(gm.power, 0.0) + max(gn.power, 0.0)
    common = min(gm.box, gn.box)
    # (2 sqrt m + 1)(2 sqrt n + 1) <= 9 sqrt(mn)
    const += common * math.log(9.0)
    power += common / 2.0
    extra = abs(gm.box - gn.box)
    # remaining (2 sqrt m + 1) <= 3 sqrt(P) since m <= P
    const += extra * math.log(3.0)
    power += extra / 2.0
    return const, power


class _DoubleEnvelope:
    def __init__(self, spec: DoubleSeriesSpec) -> None:
        const, power = _pair_growth(spec.weights_m.growth, spec.weights_n.growth)
        const += math.log(abs(complex(spec.coefficient))) if spec.coefficient else -math.inf
        # number of pairs with mn = P is at most 2 sqrt(P)
        const += math.log(2.0)
        power += 0.5
        power += abs(complex(spec.ratio_exponent).real) + spec.joint_power
        mu = spec.inner_order
        if spec.inner_scale > 0.0:
            const += mu * math.log(spec.inner_scale / 2.0) - math.lgamma(mu + 1.0)
            power += mu / 2.0
        elif mu != 0.0:
            const = -math.inf
        const += 0.5 * math.log(2.0 * math.pi / spec.k_scale)
        power -= 0.25
        self.const = const
        self.power = power
        self.gamma = spec.decay_rate()
        self.k_mu = abs(complex(spec.k_order).real)
        self.k_scale = spec.k_scale

    def tail(self, m_trunc: int) -> float:
        """Bound on sum over P > m_trunc by the integral of P^d exp(-g sqrt P)."""
        big_m = max(m_trunc, 1)
        x = math.sqrt(big_m)
        d, g = self.power, self.gamma
        if d > 0.0 and x < 2.0 * d / g:
            return math.inf
        a1 = 2.0 * d + 1.0
        log_pref = self.const + self.k_mu**2 / (2.0 * self.k_scale * x) + math.log(2.0)
        log_core = a1 * math.log(x) - g * x
        if a1 <= 0.0:
            denom = g
        else:
            denom = g - a1 / x
            if denom <= 0.0:
                return math.inf
        lb = log_pref + log_core - math.log(denom)
        if lb < -745.0:
            return 0.0
        return math.exp(lb)


def _divisor_pairs(p: int) -> list[tuple[int, int]]:
    out = []
    d = 1
    while d * d <= p:
        if p % d == 0:
            out.append((d, p // d))
            if d * d != p:
                out.append((p // d, d))
        d += 1
    out.sort()
    return out


def grouped_coefficient(spec: DoubleSeriesSpec, p: int, tab_m=None, tab_n=None) -> complex:
    """sum_{mn = P} a(m) b(n) (m/n)^rho, summed exactly rounded."""
    tab_m = spec.weights_m.table(p) if tab_m is None else tab_m
    tab_n = spec.weights_n.table(p) if tab_n is None else tab_n
    rho = complex(spec.ratio_exponent)
    parts = []
    for m, n in _divisor_pairs(p):
        a = complex(tab_m[m]) * complex(tab_n[n])
        if a == 0:
            continue
        parts.append(a * cmath.exp(rho * (math.log(m) - math.log(n))))
    return complex(math.fsum(v.real for v in parts), math.fsum(v.imag for v in parts))


def eval_double_series(
    spec: DoubleSeriesSpec,
    tol: float,
    max_terms: int | None = None,
    m_trunc: int | None = None,
) -> ValueWithBound:
    """Sum over products P = mn <= M with the tail past M certified <= tol."""
    env = _DoubleEnvelope(spec)
    cap = max_terms if max_terms is not None else max_terms_default()
    if m_trunc is None:
        m_trunc = choose_truncation(env.tail, tol, cap, start=1)
    tail = env.tail(m_trunc)
    tab_m = spec.weights_m.table(m_trunc)
    tab_n = spec.weights_n.table(m_trunc)
    coef = complex(spec.coefficient)
    terms: list[complex] = []
    errs: list[float] = []
    pairs = 0
    for p in range(1, m_trunc + 1):
        dp = _divisor_pairs(p)
        pairs += len(dp)
        c = grouped_coefficient(spec, p, tab_m, tab_n)
        if c == 0:
            continue
        root = math.sqrt(p)
        ks = bessel_k_scaled(spec.k_order, spec.k_scale * root)
        arg = spec.inner_scale * root
        if spec.inner == "J":
            inner = bessel_j(spec.inner_order, arg)
            expo = -spec.k_scale * root
        else:
            inner = bessel_i_scaled(spec.inner_order, arg)
            expo = -spec.k_scale * root + arg
        f = math.exp(expo)
        front = coef * c * p**spec.joint_power
        val = front * ks.value * inner.value * f
        terms.append(val)
        c_abs = math.fsum(
            abs(complex(tab_m[m]) * complex(tab_n[n]))
            * math.exp(complex(spec.ratio_exponent).real * (math.log(m) - math.log(n)))
            for m, n in dp
        )
        err = abs(front) * f * (abs(ks.value) * inner.abs_error_bound + abs(inner.value) * ks.abs_error_bound)
        err += abs(coef) * c_abs * p**spec.joint_power * f * abs(ks.value * inner.value) * EPS * (
            abs(expo) + abs(complex(spec.ratio_exponent)) * math.log(p + 1) + 8.0
        )
        errs.append(err)
    value = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    evaluation = math.fsum(errs) + EPS * abs(value)
    return ValueWithBound(value, tail + evaluation, pairs, tail, evaluation)


def double_series_max_product(spec: DoubleSeriesSpec, tol: float, max_terms: int | None = None) -> int:
    cap = max_terms if max_terms is not None else max_terms_default()
    return choose_truncation(_DoubleEnvelope(spec).tail, tol, cap, start=1)


# ----------------------------------------------------------------- Riesz sums


def riesz_sum(k: int, q: float, x: float) -> ValueWithBound:
    """sum' r_k(n) (x - n)^q / Gamma(q + 1) over 0 <= n <= x.

    The prime halves the n = x term when q = 0 and x is an integer.
    """
    if k < 1 or q < 0.0 or x < 0.0:
        raise InvalidSpec("riesz_sum needs k >= 1, q >= 0 and x >= 0")
    n_max = int(math.floor(x))
    r = sum_of_squares(k).table(n_max)
    g = math.gamma(q + 1.0)
    parts = []
    for n in range(n_max + 1):
        rn = int(r[n])
        if not rn:
            continue
        if n == x:
            if q == 0.0:
                parts.append(0.5 * rn / g)
            continue
        parts.append(rn * (x - n) ** q / g)
    value = math.fsum(parts)
    err = EPS * math.fsum(abs(v) for v in parts) * (abs(q) * math.log(x + 2.0) + 6.0)
    return ValueWithBound(complex(value, 0.0), err, n_max + 1, 0.0, err)


def _hankel_bound_factor(nu: float, t0: float) -> float:
    """H with |J_nu(t)| <= sqrt(2/(pi t)) H for every t >= t0.

    Uses the same first-neglected-term remainder as the evaluator; each
    a_j / t^j decreases in t, so the value at t0 bounds all larger t.
    """
    ell = int(math.ceil(max(nu, 1.0))) + 1
    mu = 4.0 * nu * nu
    a = [1.0]
    for j in range(1, 2 * ell + 2):
        a.append(a[-1] * (mu - (2 * j - 1) ** 2) / (8.0 * j))
    return math.fsum(abs(a[j]) / t0**j for j in range(2 * ell + 2))


def riesz_series_tail(k: int, q: float, x: float, n_trunc: int) -> float:
    """Bound on pi^-q sum_{n > N} r_k(n) (x/n)^(k/4+q/2) |J_{k/2+q}(2 pi sqrt(n x))|."""
    nu = k / 2.0 + q
    a = k / 4.0 + q / 2.0
    e = -a - 0.25
    expo = k / 2.0 + e
    if expo >= 0.0:
        raise InvalidSpec("the Bessel side of the Riesz identity needs q > (k-1)/2")
    big_n = float(max(n_trunc, 1))
    t0 = 2.0 * math.pi * math.sqrt((n_trunc + 1) * x)
    h = _hankel_bound_factor(nu, t0)
    c = math.sqrt(k) / 2.0
    vk = math.pi ** (k / 2.0) / math.gamma(k / 2.0 + 1.0)
    lattice = abs(e) * vk * (1.0 + c / math.sqrt(big_n)) ** k * big_n**expo / (-expo)
    return math.pi ** (-q - 1.0) * x ** (a - 0.25) * h * lattice


def _hankel_j_vec(nu: float, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ell = int(math.ceil(max(nu, 1.0))) + 1
    mu = 4.0 * nu * nu
    tmin = float(t.min())
    coeffs = [1.0]
    while True:
        j = len(coeffs)
        coeffs.append(coeffs[-1] * (mu - (2 * j - 1) ** 2) / (8.0 * j))
        if len(coeffs) >= 2 * ell + 2 and len(coeffs) % 2 == 0:
            rem = abs(coeffs[-2]) / tmin ** (len(coeffs) - 2) + abs(coeffs[-1]) / tmin ** (len(coeffs) - 1)
            if rem < 1e-18 or len(coeffs) > 60:
                break
    n_pairs = (len(coeffs) - 2) // 2
    p = np.zeros_like(t)
    q = np.zeros_like(t)
    abs_sum = np.zeros_like(t)
    for j in range(n_pairs):
        p += (-1) ** j * coeffs[2 * j] / t ** (2 * j)
        q += (-1) ** j * coeffs[2 * j + 1] / t ** (2 * j + 1)
        abs_sum += abs(coeffs[2 * j]) / t ** (2 * j) + abs(coeffs[2 * j + 1]) / t ** (2 * j + 1)
    rem = abs(coeffs[2 * n_pairs]) / t ** (2 * n_pairs) + abs(coeffs[2 * n_pairs + 1]) / t ** (2 * n_pairs + 1)
    mag = np.sqrt(2.0 / (np.pi * t))
    shift = (0.5 * nu + 0.25) * math.pi
    omega = t - shift
    val = mag * (p * np.cos(omega) - q * np.sin(omega))
    d_omega = EPS * (t + abs(shift) + 2.0) * 2.0
    err = mag * (rem + (np.abs(p) + np.abs(q)) * (d_omega + 6 * EPS) + 4 * EPS * abs_sum)
    return val, err


def riesz_bessel_series(k: int, q: float, x: float, tol: float, max_terms: int | None = None) -> ValueWithBound:
    """pi^-q sum_{n >= 1} r_k(n) (x/n)^(k/4+q/2) J_{k/2+q}(2 pi sqrt(n x)).

    Converges for q > (k-1)/2; the tail uses Abel summation against the
    lattice-point count and the large-argument envelope of J.
    """
    if k < 1 or x <= 0.0:
        raise InvalidSpec("riesz series needs k >= 1 and x > 0")
    nu = k / 2.0 + q
    a = k / 4.0 + q / 2.0
    cap = max_terms if max_terms is not None else max_terms_default()
    if k == 1:
        cap = cap * cap
    n_trunc = choose_truncation(lambda n: riesz_series_tail(k, q, x, n), tol, cap, start=1)
    tail = riesz_series_tail(k, q, x, n_trunc)
    if k == 1:
        m = np.arange(1, math.isqrt(n_trunc) + 1, dtype=np.float64)
        n = m * m
        r = np.full(m.shape, 2.0)
    else:
        if n_trunc > 50_000_000:
            raise TolUnreachable("Riesz series needs too many terms")
        table = r_k_table(k, n_trunc)
        idx = np.nonzero(table[1:])[0] + 1
        n = idx.astype(np.float64)
        r = table[idx].astype(np.float64)
    t = 2.0 * np.pi * np.sqrt(n * x)
    jv = np.empty_like(t)
    je = np.empty_like(t)
    big = t >= 40.0
    if big.any():
        jv[big], je[big] = _hankel_j_vec(nu, t[big])
    for i in np.nonzero(~big)[0]:
        s = bessel_j(nu, float(t[i]))
        jv[i] = s.value.real
        je[i] = s.abs_error_bound
    front = math.pi ** (-q) * r * np.exp(a * (math.log(x) - np.log(n)))
    terms = front * jv
    value = math.fsum(terms.tolist())
    evaluation = float(np.sum(front * je)) + EPS * float(np.sum(np.abs(terms))) * (a * math.log(n_trunc + 2.0) + 8.0)
    return ValueWithBound(complex(value, 0.0), tail + evaluation, len(n), tail, evaluation)
