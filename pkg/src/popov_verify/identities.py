"""Both sides of every catalogued identity, assembled from certified series.

Each ``verify_*`` function evaluates the left and right sides independently
and returns an :class:`EvaluationReport`.  A report passes when

    |lhs - rhs| <= tol + lhs.tail_bound + rhs.tail_bound,

where every tail bound already contains the summation and special-function
evaluation error.  Series are summed to ``tol / 4`` each.

Identities that carry a factor z^nu (Popov's formula and its relatives) are
divided through by (sqrt(pi) z / 2)^nu and written with the entire function
Lambda_nu(u) = (u/2)^-nu J_nu(u), so that z = 0 and complex z need no special
handling.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

from .arith import (
    CharacterTwist,
    DirichletCharacter,
    Divisor,
    Ones,
    RamanujanTau,
    CompletedEtaK,
    bernoulli,
    gauss_sum,
    riemann_zeta,
    zeta_like,
)
from .errors import DomainNotCovered, InvalidSpec, PoleAt
from .quadrature import QuadratureControls, trapezoid_interval
from .series import (
    BesselSeriesSpec,
    DoubleSeriesSpec,
    IndexMap,
    Kernel,
    Oscillator,
    ValueWithBound,
    eval_double_series,
    eval_series,
    exact,
    riesz_bessel_series,
    riesz_sum,
    sum_of_squares,
)
from .specfun import EPS, SpecialValue, gamma, hyp1f1

PI = math.pi


@dataclass(frozen=True)
class EvaluationReport:
    identity: str
    lhs: ValueWithBound
    rhs: ValueWithBound
    abs_residual: float
    rel_residual: float
    tol: float
    passed: bool
    params: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def threshold(self) -> float:
        return self.tol + self.lhs.tail_bound + self.rhs.tail_bound

    def recompute_pass(self) -> bool:
        return self.abs_residual <= self.threshold

    @property
    def terms_used(self) -> int:
        return self.lhs.terms_used + self.rhs.terms_used


def make_report(
    identity: str,
    lhs: ValueWithBound,
    rhs: ValueWithBound,
    tol: float,
    params: dict | None = None,
    notes: dict | None = None,
) -> EvaluationReport:
    diff = abs(lhs.value - rhs.value)
    scale = max(abs(lhs.value), abs(rhs.value))
    rel = diff / scale if scale > 0.0 else 0.0
    ok = diff <= tol + lhs.tail_bound + rhs.tail_bound
    return EvaluationReport(identity, lhs, rhs, diff, rel, tol, ok, dict(params or {}), dict(notes or {}))


def _check_tol(tol: float) -> float:
    if not (isinstance(tol, (int, float)) and tol > 0.0 and math.isfinite(tol)):
        raise InvalidSpec(f"tolerance must be a positive number, got {tol!r}")
    return float(tol)


def _check_k(k: int, low: int = 1) -> int:
    if isinstance(k, bool) or not isinstance(k, int) or k < low:
        raise InvalidSpec(f"k must be an integer >= {low}, got {k!r}")
    return k


def _check_xy(x: float, y: float, strict: bool = True) -> None:
    if not (x > 0.0 and y > 0.0):
        raise InvalidSpec(f"need x > 0 and y > 0, got x={x}, y={y}")
    if strict and not x > y:
        raise InvalidSpec(f"need x > y > 0, got x={x}, y={y}")


def involution(x: float, y: float, variant: str = "J") -> tuple[float, float]:
    """(x, y) -> (x, y) / (x^2 + y^2) for J, / (x^2 - y^2) for I."""
    d = _d(x, y, variant)
    return x / d, y / d


def _d(x: float, y: float, variant: str) -> float:
    if variant == "J":
        return math.fsum((x * x, y * y))
    if variant == "I":
        return (x - y) * (x + y)
    raise InvalidSpec(f"variant must be 'J' or 'I', got {variant!r}")


def _cpow(base: float, expo: complex) -> complex:
    return cmath.exp(complex(expo) * math.log(base))


# ------------------------------------------------------------- theta family


def _theta_series(k: int, rate: float, coef: complex, tol: float, max_terms: int | None) -> ValueWithBound:
    spec = BesselSeriesSpec(sum_of_squares(k), 0.0, Kernel("exp", rate), coefficient=coef)
    return eval_series(spec, tol, max_terms)


def verify_theta_k(k: int, x: float, tol: float = 1e-12, max_terms: int | None = None) -> EvaluationReport:
    """sum_{n>=0} r_k(n) e^{-pi n x} against x^{-k/2} sum_{n>=0} r_k(n) e^{-pi n / x}."""
    k = _check_k(k)
    tol = _check_tol(tol)
    if not x > 0.0:
        raise InvalidSpec("theta_k needs x > 0")
    f = x ** (-k / 2.0)
    lhs = exact(1.0) + _theta_series(k, PI * x, 1.0, tol / 4, max_terms)
    rhs = exact(f) + _theta_series(k, PI / x, f, tol / 4, max_terms)
    return make_report("theta_k", lhs, rhs, tol, {"k": k, "x": x})


def _popov_side(k: int, x: float, z: complex, side: str, tol: float, max_terms: int | None) -> ValueWithBound:
    """x^{+-k/4} e^{+-z^2/8} [1/Gamma(k/2) + sum r_k e^{-pi n x^{+-1}} Lambda(k/2-1, .)]."""
    nu = k / 2.0 - 1.0
    z = complex(z)
    if side == "lhs":
        xe, sgn, kind = x, 1.0, "Jn"
    else:
        xe, sgn, kind = 1.0 / x, -1.0, "In"
    front = x ** (sgn * k / 4.0) * cmath.exp(sgn * z * z / 8.0)
    g = gamma(nu + 1.0)
    const = exact(front / g.value, g.abs_error_bound / abs(g.value) + EPS * (abs(z) ** 2 + 4))
    osc = Oscillator(kind, nu, math.sqrt(PI * xe) * z, 0.5)
    spec = BesselSeriesSpec(sum_of_squares(k), 0.0, Kernel("exp", PI * xe), osc, coefficient=front)
    return const + eval_series(spec, tol, max_terms)


def verify_popov(k: int, x: float, z: complex, tol: float = 1e-12, max_terms: int | None = None) -> EvaluationReport:
    """Popov's formula, divided by (sqrt(pi) z / 2)^(k/2-1)."""
    k = _check_k(k)
    tol = _check_tol(tol)
    if not x > 0.0:
        raise InvalidSpec("popov needs x > 0")
    lhs = _popov_side(k, x, z, "lhs", tol / 4, max_terms)
    rhs = _popov_side(k, x, z, "rhs", tol / 4, max_terms)
    return make_report("popov", lhs, rhs, tol, {"k": k, "x": x, "z": complex(z)}, {"normalization": "(sqrt(pi) z/2)^(k/2-1)"})


def verify_popov_k1(x: float, z: complex, tol: float = 1e-12, max_terms: int | None = None) -> EvaluationReport:
    """The k = 1 case written with cos and cosh over the squares."""
    tol = _check_tol(tol)
    if not x > 0.0:
        raise InvalidSpec("popov_k1 needs x > 0")
    z = complex(z)
    one = Ones()
    sides = []
    for xe, sgn, kind in ((x, 1.0, "cos"), (1.0 / x, -1.0, "cosh")):
        front = x ** (sgn / 4.0) * cmath.exp(sgn * z * z / 8.0)
        osc = Oscillator(kind, 0.0, math.sqrt(PI * xe) * z, 0.5)
        spec = BesselSeriesSpec(one, 0.0, Kernel("exp", PI * xe), osc, IndexMap(1.0, 2), coefficient=2.0 * front)
        sides.append(exact(front, EPS * (abs(z) ** 2 + 4)) + eval_series(spec, tol / 4, max_terms))
    return make_report("popov_k1", sides[0], sides[1], tol, {"x": x, "z": z})


def _big_theta(
    k: int, x: float, y: float, variant: str, factor: float, tol: float, max_terms: int | None
) -> ValueWithBound:
    """factor * Theta_k(x, y), with J or I inside."""
    nu = k / 4.0 - 0.5
    g = gamma(nu + 1.0)
    c = (PI * y) ** nu / (2.0**nu * g.value.real)
    const = exact(factor * c, g.abs_error_bound / abs(g.value) + 4 * EPS * (abs(nu) * abs(math.log(PI * y)) + 2))
    osc = Oscillator(variant, nu, PI * y)
    spec = BesselSeriesSpec(sum_of_squares(k), -nu, Kernel("exp", PI * x), osc, coefficient=factor)
    return const + eval_series(spec, tol, max_terms)


def verify_analogue(
    k: int,
    x: float,
    y: float,
    variant: str = "J",
    tol: float = 1e-9,
    max_terms: int | None = None,
    probe: bool = False,
) -> EvaluationReport:
    """The J or I transformation with the (x^2 +- y^2) map.

    ``probe=True`` lets the J variant run with y >= x.  Such reports are
    flagged in ``notes`` and make no claim either way.
    """
    k = _check_k(k)
    tol = _check_tol(tol)
    if variant not in ("J", "I"):
        raise InvalidSpec(f"variant must be 'J' or 'I', got {variant!r}")
    outside = probe and variant == "J" and y >= x
    _check_xy(x, y, strict=not outside)
    d = _d(x, y, variant)
    xm, ym = x / d, y / d
    lhs = _big_theta(k, x, y, variant, 1.0, tol / 4, max_terms)
    rhs = _big_theta(k, xm, ym, variant, 1.0 / math.sqrt(d), tol / 4, max_terms)
    notes = {"mapped": (xm, ym)}
    if outside:
        notes["outside_stated_domain"] = True
    ident = "analogue_j" if variant == "J" else "analogue_i"
    return make_report(ident, lhs, rhs, tol, {"k": k, "x": x, "y": y}, notes)


def verify_theta_involution(k: int, x: float, y: float, tol: float = 1e-10, max_terms: int | None = None) -> EvaluationReport:
    """Theta_k(x, y) against (x^2+y^2)^{-1/2} Theta_k at the mapped point."""
    k = _check_k(k)
    tol = _check_tol(tol)
    _check_xy(x, y)
    xm, ym = involution(x, y, "J")
    xb, yb = involution(xm, ym, "J")
    twice = max(abs(xb - x), abs(yb - y))
    d = _d(x, y, "J")
    lhs = _big_theta(k, x, y, "J", 1.0, tol / 4, max_terms)
    rhs = _big_theta(k, xm, ym, "J", 1.0 / math.sqrt(d), tol / 4, max_terms)
    return make_report(
        "theta_involution", lhs, rhs, tol, {"k": k, "x": x, "y": y}, {"mapped": (xm, ym), "map_twice_error": twice}
    )


def verify_k4(x: float, y: float, tol: float = 1e-12, max_terms: int | None = None) -> EvaluationReport:
    """2 pi y + sum r_4(n)/n (e^{-pi n(x-y)} - e^{-pi n(x+y)}) against its image.

    The differences of exponentials are summed as 2 e^{-pi n a} sinh(pi n b),
    which avoids cancellation for small y.
    """
    tol = _check_tol(tol)
    _check_xy(x, y)
    d = _d(x, y, "I")
    r4 = sum_of_squares(4)
    sides = []
    for a, b, const in ((x, y, 2.0 * PI * y), (x / d, y / d, 2.0 * PI * y / d)):
        osc = Oscillator("sinh", 0.0, PI * b)
        spec = BesselSeriesSpec(r4, -1.0, Kernel("exp", PI * a), osc, coefficient=2.0)
        sides.append(exact(const, 2 * EPS) + eval_series(spec, tol / 4, max_terms))
    return make_report("k4_exp", sides[0], sides[1], tol, {"x": x, "y": y})


def verify_divisor(
    k: int, x: float, y: float, variant: str = "J", tol: float = 1e-10, max_terms: int | None = None
) -> EvaluationReport:
    """sigma_k twisted transformation for odd k >= 3 with Bernoulli constants."""
    k = _check_k(k, 3)
    if k % 2 == 0:
        raise InvalidSpec("divisor identity needs odd k")
    tol = _check_tol(tol)
    if variant not in ("J", "I"):
        raise InvalidSpec(f"variant must be 'J' or 'I', got {variant!r}")
    _check_xy(x, y)
    d = _d(x, y, variant)
    b = float(bernoulli(k + 1))
    half = k / 2.0
    c = b * (PI * y) ** half / (2.0 * (k + 1) * math.gamma(half + 1.0))
    s_const = (-1) ** ((k - 1) // 2)
    s_series = (-1) ** ((k + 1) // 2)
    weights = Divisor(k)
    rel = 8 * EPS * (half * abs(math.log(PI * y)) + 4)
    lhs_spec = BesselSeriesSpec(weights, -half, Kernel("exp", 2 * PI * x), Oscillator(variant, half, 2 * PI * y))
    rhs_spec = BesselSeriesSpec(
        weights,
        -half,
        Kernel("exp", 2 * PI * x / d),
        Oscillator(variant, half, 2 * PI * y / d),
        coefficient=s_series / math.sqrt(d),
    )
    lhs = exact(-c, rel) + eval_series(lhs_spec, tol / 4, max_terms)
    rhs = exact(s_const * c / d ** ((k + 1) / 2.0), rel) + eval_series(rhs_spec, tol / 4, max_terms)
    ident = "divisor_j" if variant == "J" else "divisor_i"
    return make_report(ident, lhs, rhs, tol, {"k": k, "x": x, "y": y}, {"bernoulli": str(bernoulli(k + 1))})


def verify_cusp_tau(
    x: float, y: float, variant: str = "J", tol: float = 1e-12, max_terms: int | None = None, probe: bool = False
) -> EvaluationReport:
    """Ramanujan tau weighted transformation; weight 12 makes the sign +1."""
    tol = _check_tol(tol)
    if variant not in ("J", "I"):
        raise InvalidSpec(f"variant must be 'J' or 'I', got {variant!r}")
    outside = probe and variant == "J" and y >= x
    _check_xy(x, y, strict=not outside)
    d = _d(x, y, variant)
    sign = (-1) ** (12 // 2)
    w = RamanujanTau()
    order = 5.5
    lhs_spec = BesselSeriesSpec(w, -order, Kernel("exp", 2 * PI * x), Oscillator(variant, order, 2 * PI * y))
    rhs_spec = BesselSeriesSpec(
        w,
        -order,
        Kernel("exp", 2 * PI * x / d),
        Oscillator(variant, order, 2 * PI * y / d),
        coefficient=sign / math.sqrt(d),
    )
    lhs = eval_series(lhs_spec, tol / 4, max_terms)
    rhs = eval_series(rhs_spec, tol / 4, max_terms)
    notes = {"sign": sign}
    if outside:
        notes["outside_stated_domain"] = True
    ident = "cusp_tau_j" if variant == "J" else "cusp_tau_i"
    return make_report(ident, lhs, rhs, tol, {"x": x, "y": y}, notes)


def verify_character(
    chi: DirichletCharacter, x: float, y: float, tol: float = 1e-12, max_terms: int | None = None
) -> EvaluationReport:
    """Twisted theta-Bessel transformation for a primitive character.

    Even characters use J_{-1/4}, odd ones J_{1/4}; the index map is
    lam_n = pi n^2 / q and sqrt(n) = (q lam / pi)^{1/4}.
    """
    tol = _check_tol(tol)
    if not isinstance(chi, DirichletCharacter):
        raise InvalidSpec("a DirichletCharacter is required")
    if chi.principal or not chi.primitive:
        raise InvalidSpec("the character must be primitive and nonprincipal")
    _check_xy(x, y)
    q = chi.modulus
    g = gauss_sum(chi)
    d = _d(x, y, "J")
    if chi.parity == "even":
        order, eps_factor = -0.25, g
    else:
        order, eps_factor = 0.25, -1j * g
    imap = IndexMap(PI / q, 2)
    root = (q / PI) ** 0.25
    lhs_spec = BesselSeriesSpec(
        CharacterTwist(Ones(), chi), 0.25, Kernel("exp", x), Oscillator("J", order, y), imap, coefficient=root
    )
    factor = eps_factor / math.sqrt(q * d)
    rhs_spec = BesselSeriesSpec(
        CharacterTwist(Ones(), chi.conjugate()),
        0.25,
        Kernel("exp", x / d),
        Oscillator("J", order, y / d),
        imap,
        coefficient=root * factor,
    )
    lhs = eval_series(lhs_spec, tol / 4, max_terms)
    rhs = eval_series(rhs_spec, tol / 4, max_terms)
    ident = "char_even" if chi.parity == "even" else "char_odd"
    return make_report(
        ident, lhs, rhs, tol, {"x": x, "y": y, "q": q, "chi": chi.label or str(chi.values)}, {"gauss_sum": g}
    )


# --------------------------------------------------------------- Riesz sums


def verify_riesz(k: int, q_riesz: float, x: float, tol: float = 1e-4, max_terms: int | None = None) -> EvaluationReport:
    """Riesz sum against the main term plus the Bessel expansion."""
    k = _check_k(k)
    tol = _check_tol(tol)
    if not q_riesz > (k - 1) / 2.0:
        raise InvalidSpec(f"the Bessel expansion needs q > (k-1)/2 = {(k - 1) / 2}")
    if not x > 0.0:
        raise InvalidSpec("riesz needs x > 0")
    lhs = riesz_sum(k, q_riesz, x)
    main = PI ** (k / 2.0) * x ** (k / 2.0 + q_riesz) / math.gamma(q_riesz + 1.0 + k / 2.0)
    # the left side is a finite sum, so the series gets the whole budget
    rhs = exact(main, 8 * EPS * (abs(math.log(x)) * (k / 2.0 + q_riesz) + 4)) + riesz_bessel_series(
        k, q_riesz, x, tol, max_terms
    )
    return make_report("riesz_cn", lhs, rhs, tol, {"k": k, "q_riesz": q_riesz, "x": x})


# ------------------------------------------------------------- Humbert form


def verify_phi3(
    k: int, nu: float, x: float, z: complex, tol: float = 1e-10, max_terms: int | None = None
) -> EvaluationReport:
    """J series against 1F1 plus the Phi_3 weighted series, divided by z^nu pi^(nu/2) 2^-nu."""
    k = _check_k(k)
    tol = _check_tol(tol)
    nu = float(nu)
    if not nu > -1.0:
        raise InvalidSpec("phi3 needs nu > -1")
    if not x > 0.0:
        raise InvalidSpec("phi3 needs x > 0")
    z = complex(z)
    g = gamma(nu + 1.0)
    rg = 1.0 / g.value.real
    grel = g.abs_error_bound / abs(g.value)
    zz = z * z
    ep = cmath.exp(zz / 8.0)
    em = cmath.exp(-zz / 8.0)
    w = sum_of_squares(k)

    front_l = x ** ((nu + 1.0) / 2.0) * ep
    osc = Oscillator("Jn", nu, math.sqrt(PI * x) * z, 0.5)
    spec_l = BesselSeriesSpec(w, 0.0, Kernel("exp", PI * x), osc, coefficient=front_l)
    lhs = exact(front_l * rg, grel + EPS * (abs(zz) + 4)) + eval_series(spec_l, tol / 4, max_terms)

    front_r = x ** ((nu - k + 1.0) / 2.0) * rg
    f11 = hyp1f1(k / 2.0, nu + 1.0, -zz / 4.0)
    const_r = ValueWithBound(
        front_r * ep * f11.value,
        abs(front_r * ep) * f11.abs_error_bound + abs(front_r * ep * f11.value) * (grel + EPS * (abs(zz) + 4)),
        0,
    )
    osc_r = Oscillator("phi3", nu, PI * zz / (4.0 * x), 1.0, (1.0 - k / 2.0 + nu, nu + 1.0, zz / 4.0))
    spec_r = BesselSeriesSpec(w, 0.0, Kernel("exp", PI / x), osc_r, coefficient=front_r * em)
    rhs = const_r + eval_series(spec_r, tol / 4, max_terms)
    return make_report("phi3", lhs, rhs, tol, {"k": k, "nu": nu, "x": x, "z": z}, {"normalization": "z^nu pi^(nu/2) 2^-nu"})


# ------------------------------------------------------- Guinand-type sums


def _eta_pair(k: int, nu: complex) -> tuple[SpecialValue, SpecialValue]:
    """eta_k(nu) and eta_k(-nu), refusing the strip for k >= 2."""
    nu = complex(nu)
    half = k / 2.0
    if nu == 0 or nu == half or nu == -half:
        raise PoleAt(nu, "eta_k(nu) or eta_k(-nu) has a pole here")
    if k >= 2 and abs(nu.real) <= half:
        raise DomainNotCovered(f"guinand with k={k} is evaluated only for |Re nu| > {half}")
    series = CompletedEtaK(k)
    return zeta_like(series, nu), zeta_like(series, -nu)


def _guinand_double(
    k: int, nu: complex, x: float, y: float, variant: str, coef: complex
) -> DoubleSeriesSpec:
    w = sum_of_squares(k)
    return DoubleSeriesSpec(
        w, w, complex(nu) / 2.0, 0.5 - k / 4.0, variant, k / 2.0 - 1.0, 2 * PI * y, complex(nu), 2 * PI * x, coef
    )


def _guinand_sums(
    k: int, nu: complex, x: float, y: float, variant: str, tol: float, max_terms: int | None
) -> tuple[ValueWithBound, ValueWithBound]:
    """S(x, y) and the mapped S with its 1/d prefactor."""
    d = _d(x, y, variant)
    c = 2.0 * math.gamma(k / 2.0) * (PI * y) ** (1.0 - k / 2.0)
    direct = eval_double_series(_guinand_double(k, nu, x, y, variant, c), tol, max_terms)
    mapped = eval_double_series(_guinand_double(k, nu, x / d, y / d, variant, c / d), tol, max_terms)
    return direct, mapped


def _boundary(x: float, d: float, k: int, nu: complex, e_pos: SpecialValue, e_neg: SpecialValue) -> ValueWithBound:
    nu = complex(nu)
    half = k / 2.0
    a = _cpow(x, -nu) * e_pos.value
    b = _cpow(x, nu) * e_neg.value
    ld = math.log(d)
    # D^e - 1 via expm1 to keep accuracy near the self-dual circle
    br_a = cmath.exp((nu - half) * ld) - 1.0 if abs((nu - half) * ld) > 1e-3 else _cexpm1((nu - half) * ld)
    br_b = cmath.exp((-nu - half) * ld) - 1.0 if abs((-nu - half) * ld) > 1e-3 else _cexpm1((-nu - half) * ld)
    value = a * br_a + b * br_b
    err = abs(_cpow(x, -nu)) * abs(br_a) * e_pos.abs_error_bound + abs(_cpow(x, nu)) * abs(br_b) * e_neg.abs_error_bound
    err += 8 * EPS * (abs(a) + abs(b)) * (abs(nu) * (abs(math.log(x)) + abs(ld)) + half * abs(ld) + 2)
    return ValueWithBound(value, err, 0, 0.0, err)


def _cexpm1(w: complex) -> complex:
    """exp(w) - 1 for small |w|."""
    half_sin = math.sin(0.5 * w.imag)
    return complex(
        math.expm1(w.real) * math.cos(w.imag) - 2.0 * half_sin * half_sin,
        math.exp(w.real) * math.sin(w.imag),
    )


def verify_guinand(
    k: int,
    nu: complex,
    x: float,
    y: float,
    variant: str = "J",
    tol: float = 1e-9,
    max_terms: int | None = None,
) -> EvaluationReport:
    """Double K-Bessel series difference against the eta_k boundary terms."""
    k = _check_k(k)
    tol = _check_tol(tol)
    if variant not in ("J", "I"):
        raise InvalidSpec(f"variant must be 'J' or 'I', got {variant!r}")
    _check_xy(x, y, strict=variant == "I")
    e_pos, e_neg = _eta_pair(k, nu)
    d = _d(x, y, variant)
    direct, mapped = _guinand_sums(k, nu, x, y, variant, tol / 4, max_terms)
    lhs = direct + mapped.scaled(-1.0)
    rhs = _boundary(x, d, k, nu, e_pos, e_neg)
    ident = "guinand_j" if variant == "J" else "guinand_i"
    return make_report(ident, lhs, rhs, tol, {"k": k, "nu": complex(nu), "x": x, "y": y})


def verify_psi_involution(
    k: int, nu: complex, x: float, y: float, tol: float = 1e-9, max_terms: int | None = None
) -> EvaluationReport:
    """Psi_k(nu; x, y) against (x^2+y^2)^{-k/2} Psi_k at the mapped point."""
    k = _check_k(k)
    tol = _check_tol(tol)
    _check_xy(x, y, strict=False)
    e_pos, e_neg = _eta_pair(k, nu)
    nu = complex(nu)
    d = _d(x, y, "J")
    xm, ym = x / d, y / d

    def psi(xx: float, yy: float, factor: float) -> ValueWithBound:
        c = 2.0 * math.gamma(k / 2.0) * (PI * yy) ** (1.0 - k / 2.0)
        s = eval_double_series(_guinand_double(k, nu, xx, yy, "J", c * factor), tol / 4, max_terms)
        a = _cpow(xx, -nu) * e_pos.value
        b = _cpow(xx, nu) * e_neg.value
        err = abs(_cpow(xx, -nu)) * e_pos.abs_error_bound + abs(_cpow(xx, nu)) * e_neg.abs_error_bound
        err += 8 * EPS * (abs(a) + abs(b)) * (abs(nu) * abs(math.log(xx)) + 2)
        return ValueWithBound((a + b) * factor, err * factor, 0, 0.0, err * factor) + s

    lhs = psi(x, y, 1.0)
    rhs = psi(xm, ym, d ** (-k / 2.0))
    return make_report("psi_involution", lhs, rhs, tol, {"k": k, "nu": nu, "x": x, "y": y}, {"mapped": (xm, ym)})


def _k1_chain_pole(nu: complex) -> None:
    nu = complex(nu)
    if nu.imag == 0.0 and nu.real == round(nu.real):
        n = int(round(nu.real))
        if n % 2 == 0 or abs(n) == 1:
            raise PoleAt(nu, "Gamma(nu/2) zeta(nu) or Gamma(-nu/2) zeta(-nu) is singular or indeterminate here")


def _k1_chain_series(nu: complex, a: float, b: float, coef: complex, tol: float, max_terms: int | None) -> ValueWithBound:
    """coef * sum sigma_{-nu}(n) n^{nu/2} cos(2 pi n b) K_{nu/2}(2 pi n a)."""
    nu = complex(nu)
    osc = Oscillator("cos", 0.0, 2 * PI * b) if b > 0.0 else Oscillator("one")
    spec = BesselSeriesSpec(Divisor(-nu), nu / 2.0, Kernel("K", 2 * PI * a, nu / 2.0), osc, coefficient=coef)
    return eval_series(spec, tol, max_terms)


def _gz(s: complex) -> SpecialValue:
    """Gamma(s/2) zeta(s)."""
    g = gamma(s / 2.0)
    z = riemann_zeta(s)
    v = g.value * z.value
    return SpecialValue(v, abs(g.value) * z.abs_error_bound + abs(z.value) * g.abs_error_bound + EPS * abs(v))


def verify_guinand_k1_chain(
    nu: complex, x: float, y: float, tol: float = 1e-9, max_terms: int | None = None
) -> EvaluationReport:
    """Divisor-sum cosine/K form; at y = 0 also checks the alpha-beta form."""
    tol = _check_tol(tol)
    if not (x > 0.0 and y >= 0.0):
        raise InvalidSpec("the k=1 chain needs x > 0 and y >= 0")
    nu = complex(nu)
    _k1_chain_pole(nu)
    d = _d(x, y, "J")
    lhs = _k1_chain_series(nu, x, y, 1.0, tol / 4, max_terms) + _k1_chain_series(
        nu, x / d, y / d, -1.0 / math.sqrt(d), tol / 4, max_terms
    )
    gp = _gz(nu)
    gm = _gz(-nu)
    ld = math.log(d)
    e1 = -(1.0 - nu) / 2.0 * ld
    e2 = -(1.0 + nu) / 2.0 * ld
    br1 = _cexpm1(e1) if abs(e1) < 1e-3 else cmath.exp(e1) - 1.0
    br2 = _cexpm1(e2) if abs(e2) < 1e-3 else cmath.exp(e2) - 1.0
    p1 = 0.25 * _cpow(PI * x, -nu / 2.0)
    p2 = 0.25 * _cpow(PI * x, nu / 2.0)
    val = p1 * gp.value * br1 + p2 * gm.value * br2
    err = abs(p1 * br1) * gp.abs_error_bound + abs(p2 * br2) * gm.abs_error_bound
    err += 8 * EPS * (abs(p1 * gp.value) + abs(p2 * gm.value)) * (abs(nu) * (abs(math.log(PI * x)) + abs(ld)) + 2)
    rhs = ValueWithBound(val, err, 0, 0.0, err)
    notes: dict = {}
    if y == 0.0:
        alpha = PI * x
        ab = verify_alpha_beta_form(nu, alpha, tol, max_terms)
        notes["alpha_beta_residual"] = ab.abs_residual
        notes["alpha_beta_passed"] = ab.passed
    return make_report("guinand_k1", lhs, rhs, tol, {"nu": nu, "x": x, "y": y}, notes)


def verify_alpha_beta_form(nu: complex, alpha: float, tol: float = 1e-9, max_terms: int | None = None) -> EvaluationReport:
    """Ramanujan's two-series form with alpha beta = pi^2."""
    tol = _check_tol(tol)
    if not alpha > 0.0:
        raise InvalidSpec("alpha must be positive")
    nu = complex(nu)
    _k1_chain_pole(nu)
    beta = PI * PI / alpha
    lhs = _k1_chain_series(nu, alpha / PI, 0.0, math.sqrt(alpha), tol / 4, max_terms) + _k1_chain_series(
        nu, beta / PI, 0.0, -math.sqrt(beta), tol / 4, max_terms
    )
    gp = _gz(nu)
    gm = _gz(-nu)
    b1 = _cpow(beta, (1.0 + nu) / 2.0) - _cpow(alpha, (1.0 + nu) / 2.0)
    b2 = _cpow(beta, (1.0 - nu) / 2.0) - _cpow(alpha, (1.0 - nu) / 2.0)
    val = 0.25 * gm.value * b1 + 0.25 * gp.value * b2
    err = 0.25 * (abs(b1) * gm.abs_error_bound + abs(b2) * gp.abs_error_bound)
    err += 8 * EPS * 0.25 * (abs(gm.value) + abs(gp.value)) * (
        abs(_cpow(beta, (1.0 + nu) / 2.0)) + abs(_cpow(alpha, (1.0 + nu) / 2.0))
        + abs(_cpow(beta, (1.0 - nu) / 2.0)) + abs(_cpow(alpha, (1.0 - nu) / 2.0))
    ) * (abs(nu) * max(abs(math.log(alpha)), abs(math.log(beta))) + 2)
    rhs = ValueWithBound(val, err, 0, 0.0, err)
    return make_report("guinand_k1", lhs, rhs, tol, {"nu": nu, "alpha": alpha, "beta": beta}, {"mode": "alpha_beta"})


# ------------------------------------------------------ integral formula, k=1


def _popov_integrand(t: float, x: float, z: complex) -> SpecialValue:
    """pi^{-1/4-it} Gamma(1/4+it) 2 zeta(1/2+2it) 1F1(1/4+it; 1/2; -z^2/4) x^{-it}."""
    s = complex(0.25, t)
    g = gamma(s)
    ze = riemann_zeta(2.0 * s)
    f = hyp1f1(s, 0.5, -(z * z) / 4.0)
    ph = cmath.exp(-s * math.log(PI) - 1j * t * math.log(x))
    v = ph * g.value * 2.0 * ze.value * f.value
    rel = (
        g.abs_error_bound / abs(g.value)
        + ze.abs_error_bound / max(abs(ze.value), 1e-300)
        + f.abs_error_bound / max(abs(f.value), 1e-300)
    )
    err = abs(v) * rel
    if ze.value == 0 or f.value == 0:
        err = abs(ph) * 2 * (abs(g.value) + g.abs_error_bound) * (
            (abs(ze.value) + ze.abs_error_bound) * (abs(f.value) + f.abs_error_bound)
        ) - abs(v)
    err += abs(v) * EPS * (abs(t) * (math.log(PI) + abs(math.log(x))) + 8)
    return SpecialValue(v, err)


def _integral_tail(t: float, z: complex, x: float) -> float:
    """Envelope for the integral of |integrand| over |s| > t on both ends.

    Model: |integrand(t)| decays at least like exp(-(pi/2 - c/sqrt t) t) past
    the sampled height, with c from the 1F1 growth exp(|z| sqrt t); the
    sampled magnitude is inflated by 4.  This is a measured envelope, not a
    proof.
    """
    m = max(abs(_popov_integrand(t, x, z).value), abs(_popov_integrand(-t, x, z).value))
    rate = PI / 2.0 - abs(z) / math.sqrt(t) - 0.25 / t
    if rate <= 0.1:
        return math.inf
    return 4.0 * 2.0 * m / rate


def verify_popov_integral_k1(
    x: float, z: complex, tol: float = 1e-6, k: int = 1, controls: QuadratureControls | None = None
) -> EvaluationReport:
    """Series side minus boundary term against the t-line integral (k = 1).

    Both sides are divided by (sqrt(pi) z / 2)^{-1/2}.
    """
    if k != 1:
        raise DomainNotCovered("the integral representation is evaluated only for k = 1")
    tol = _check_tol(tol)
    if not x > 0.0:
        raise InvalidSpec("needs x > 0")
    z = complex(z)
    ep = cmath.exp(z * z / 8.0)
    em = cmath.exp(-z * z / 8.0)
    rg = 1.0 / math.sqrt(PI)
    w = sum_of_squares(1)

    osc = Oscillator("Jn", -0.5, math.sqrt(PI * x) * z, 0.5)
    front = x**0.25 * ep
    lhs = eval_series(BesselSeriesSpec(w, 0.0, Kernel("exp", PI * x), osc, coefficient=front), tol / 4) + exact(
        -(x**-0.25) * em * rg, 4 * EPS
    )

    osc_m = Oscillator("In", -0.5, math.sqrt(PI / x) * z, 0.5)
    front_m = x**-0.25 * em
    middle = eval_series(BesselSeriesSpec(w, 0.0, Kernel("exp", PI / x), osc_m, coefficient=front_m), tol / 4) + exact(
        -(x**0.25) * ep * rg, 4 * EPS
    )

    pref = ep * rg / (2.0 * PI)
    big_t = 8.0
    while _integral_tail(big_t, z, x) * abs(pref) > tol / 4:
        big_t += 4.0
        if big_t > 400.0:
            raise DomainNotCovered("integral tail does not fall below the tolerance")
    tail = _integral_tail(big_t, z, x) * abs(pref)
    errs: list[float] = []

    def f(t: float) -> complex:
        v = _popov_integrand(t, x, z)
        errs.append(v.abs_error_bound)
        return v.value

    ctl = controls or QuadratureControls(abs_target=tol / (8 * abs(pref)), rel_target=1e-13, max_level=10)
    res = trapezoid_interval(f, -big_t, big_t, ctl, panels=max(64, int(8 * big_t)))
    val = pref * res.value
    evaluation = abs(pref) * (res.error_estimate + 2 * big_t * max(errs) + 16 * EPS * res.abs_integral)
    rhs = ValueWithBound(val, tail + evaluation, res.evaluations, tail, evaluation)
    notes = {
        "T": big_t,
        "tail_model": "measured envelope",
        "middle": middle.value,
        "middle_residual": abs(middle.value - lhs.value),
        "middle_threshold": middle.tail_bound + lhs.tail_bound + tol,
    }
    return make_report("popov_integral_k1", lhs, rhs, tol, {"x": x, "z": z, "k": 1}, notes)


# ------------------------------------------------------------------ catalog


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    params: tuple[str, ...]
    constraint: str
    anchor: str
    defaults: dict
    runner: Callable[..., EvaluationReport]


def _r(fn: Callable[..., EvaluationReport], **fixed) -> Callable[..., EvaluationReport]:
    def run(**kw):
        kw.update(fixed)
        return fn(**kw)

    return run


CATALOG: dict[str, CatalogEntry] = {
    e.id: e
    for e in (
        CatalogEntry("popov", ("k", "x", "z"), "x>0, z complex", "Popov's theta-Bessel formula", {"tol": 1e-12}, verify_popov),
        CatalogEntry("popov_k1", ("x", "z"), "x>0, z complex", "cos/cosh form of Popov's formula for k=1", {"tol": 1e-12}, verify_popov_k1),
        CatalogEntry("theta_k", ("k", "x"), "x>0", "theta transformation for sums of k squares", {"tol": 1e-12}, verify_theta_k),
        CatalogEntry("riesz_cn", ("k", "q_riesz", "x"), "x>0, q>(k-1)/2", "Bessel expansion of Riesz sums of r_k", {"tol": 1e-4}, verify_riesz),
        CatalogEntry("phi3", ("k", "nu", "x", "z"), "nu>-1, x>0", "Humbert Phi_3 summation formula", {"tol": 1e-10}, verify_phi3),
        CatalogEntry("analogue_j", ("k", "x", "y"), "x>y>0", "J-Bessel analogue of Popov's formula", {"tol": 1e-9}, _r(verify_analogue, variant="J")),
        CatalogEntry("analogue_i", ("k", "x", "y"), "x>y>0", "I-Bessel analogue of Popov's formula", {"tol": 1e-9}, _r(verify_analogue, variant="I")),
        CatalogEntry("theta_involution", ("k", "x", "y"), "x>y>0", "Theta_k(x,y) under (x,y)->(x,y)/(x^2+y^2)", {"tol": 1e-9}, verify_theta_involution),
        CatalogEntry("k4_exp", ("x", "y"), "x>y>0", "exponential identity for r_4(n)/n", {"tol": 1e-12}, verify_k4),
        CatalogEntry("divisor_j", ("k", "x", "y"), "x>y>0, k odd >= 3", "sigma_k analogue with J", {"tol": 1e-10}, _r(verify_divisor, variant="J")),
        CatalogEntry("divisor_i", ("k", "x", "y"), "x>y>0, k odd >= 3", "sigma_k analogue with I", {"tol": 1e-10}, _r(verify_divisor, variant="I")),
        CatalogEntry("cusp_tau_j", ("x", "y"), "x>y>0", "Ramanujan tau analogue with J", {"tol": 1e-12}, _r(verify_cusp_tau, variant="J")),
        CatalogEntry("cusp_tau_i", ("x", "y"), "x>y>0", "Ramanujan tau analogue with I", {"tol": 1e-12}, _r(verify_cusp_tau, variant="I")),
        CatalogEntry("char_even", ("q", "x", "y"), "x>y>0, chi even primitive", "even Dirichlet character analogue (J_{-1/4})", {"tol": 1e-12, "q": 5}, verify_character),
        CatalogEntry("char_odd", ("q", "x", "y"), "x>y>0, chi odd primitive", "odd Dirichlet character analogue (J_{1/4})", {"tol": 1e-12, "q": 4}, verify_character),
        CatalogEntry("guinand_j", ("k", "nu", "x", "y"), "x,y>0, |Re nu|>k/2 for k>=2", "Ramanujan-Guinand generalization with J", {"tol": 1e-9}, _r(verify_guinand, variant="J")),
        CatalogEntry("guinand_i", ("k", "nu", "x", "y"), "x>y>0, |Re nu|>k/2 for k>=2", "Ramanujan-Guinand generalization with I", {"tol": 1e-9}, _r(verify_guinand, variant="I")),
        CatalogEntry("guinand_k1", ("nu", "x", "y"), "x>0, y>=0, nu not in 2Z or +-1", "divisor-sum cos/K form for k=1", {"tol": 1e-9}, verify_guinand_k1_chain),
        CatalogEntry("psi_involution", ("k", "nu", "x", "y"), "x,y>0, |Re nu|>k/2 for k>=2", "Psi_k(nu;x,y) involution", {"tol": 1e-9}, verify_psi_involution),
        CatalogEntry("popov_integral_k1", ("x", "z"), "x>0, k=1", "t-line integral representation for k=1", {"tol": 1e-6}, verify_popov_integral_k1),
    )
}


def character_for_modulus(q: int, parity: str | None = None) -> DirichletCharacter:
    """A fixed real primitive character mod q used by the catalog runner."""
    from .arith import legendre

    if q == 4:
        return DirichletCharacter(4, (0, 1, 0, -1), "chi4")
    if q == 8 and parity != "odd":
        return DirichletCharacter(8, (0, 1, 0, -1, 0, -1, 0, 1), "chi8")
    chi = legendre(q)
    if parity is not None and chi.parity != parity:
        raise InvalidSpec(f"the quadratic character mod {q} is {chi.parity}, not {parity}")
    return chi


@dataclass(frozen=True)
class IdentityCase:
    """One catalog identity with resolved parameters."""

    id: str
    params: dict
    tol: float | None = None

    def __post_init__(self) -> None:
        if self.id not in CATALOG:
            raise InvalidSpec(f"unknown identity id {self.id!r}")
        entry = CATALOG[self.id]
        merged = {key: v for key, v in entry.defaults.items() if key != "tol"}
        merged.update(self.params)
        missing = [p for p in entry.params if p not in merged]
        if missing:
            raise InvalidSpec(f"{self.id} needs parameters {', '.join(missing)}")
        extra = [p for p in merged if p not in entry.params and p not in ("max_terms", "probe", "chi")]
        if extra:
            raise InvalidSpec(f"{self.id} does not take {', '.join(extra)}")
        object.__setattr__(self, "params", merged)
        tol = entry.defaults["tol"] if self.tol is None else self.tol
        object.__setattr__(self, "tol", _check_tol(tol))
        _validate(self.id, merged)

    def evaluate(self) -> EvaluationReport:
        entry = CATALOG[self.id]
        kw = dict(self.params)
        if self.id in ("char_even", "char_odd"):
            chi = kw.pop("chi", None) or character_for_modulus(int(kw["q"]), self.id[5:])
            kw.pop("q")
            kw["chi"] = chi
        return entry.runner(tol=self.tol, **kw)


def _validate(ident: str, p: dict) -> None:
    x, y = p.get("x"), p.get("y")
    needs_xy = CATALOG[ident].constraint.startswith("x>y>0")
    if needs_xy and not p.get("probe"):
        _check_xy(float(x), float(y))
    if "k" in p:
        _check_k(p["k"])
    if x is not None and not float(x) > 0.0:
        raise InvalidSpec(f"{ident} needs x > 0")
