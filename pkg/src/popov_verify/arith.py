"""Arithmetic sequences, Dirichlet characters, Bernoulli numbers and zeta-type values."""

from __future__ import annotations

import cmath
import math
import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .errors import DomainError, DomainNotCovered, HorizonOverflow, InvalidSpec, PoleAt
from .quadrature import QuadratureControls, exp_sinh
from .specfun import EPS, SpecialValue, _sinpi, gamma

DEFAULT_HORIZON = 10_000_000


def _horizon_limit() -> int:
    raw = os.environ.get("POPOV_VERIFY_MAX_TERMS")
    if raw:
        try:
            return max(int(raw), 1)
        except ValueError:
            pass
    return DEFAULT_HORIZON


@dataclass(frozen=True)
class Growth:
    """|a(n)| <= const * n^power * (2 sqrt(n) + 1)^box for n >= 1."""

    const: float = 1.0
    power: float = 0.0
    box: int = 0

    def bound(self, n: float) -> float:
        return self.const * n**self.power * (2.0 * math.sqrt(n) + 1.0) ** self.box


class ArithmeticSequence:
    """Lazily tabulated sequence a(0), a(1), ... with a write-once cache.

    Tables grow by recomputation to a larger horizon; every kind below is
    computed deterministically so earlier entries never change.
    """

    exact: bool = True
    growth: Growth = Growth()

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._table: np.ndarray | list | None = None

    def _compute(self, n_max: int):
        raise NotImplementedError

    def table(self, n_max: int):
        """Values a(0..n_max); do not mutate the result."""
        if n_max < 0:
            raise InvalidSpec("table size must be nonnegative")
        limit = _horizon_limit()
        if n_max > limit:
            raise HorizonOverflow(f"index {n_max} exceeds the horizon {limit}")
        with self._lock:
            cur = self._table
            if cur is None or len(cur) <= n_max:
                size = n_max if cur is None else min(max(n_max, 2 * (len(cur) - 1)), limit)
                new = self._compute(max(size, 16))
                if isinstance(new, np.ndarray):
                    new.setflags(write=False)
                else:
                    new = tuple(new)
                self._table = new
                cur = new
        return cur[: n_max + 1]

    def __call__(self, n: int):
        if n < 0:
            raise InvalidSpec("index must be nonnegative")
        return self.table(n)[n]

    def key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ArithmeticSequence) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


def r_k_table(k: int, n_max: int) -> np.ndarray:
    """r_k(0..n_max) by iterated convolution with the sparse r_1 table."""
    if k < 0:
        raise InvalidSpec("k must be nonnegative")
    out = np.zeros(n_max + 1, dtype=np.int64)
    out[0] = 1
    if k == 0:
        return out
    if (2.0 * math.sqrt(n_max) + 1.0) ** k > 9.0e18:
        raise HorizonOverflow(f"r_{k} up to {n_max} overflows 64-bit integers")
    root = isqrt(n_max)
    for _ in range(k):
        new = out.copy()
        for m in range(1, root + 1):
            sq = m * m
            new[sq:] += 2 * out[: n_max + 1 - sq]
        out = new
    return out


class SumOfSquares(ArithmeticSequence):
    """r_k(n): representations of n as an ordered sum of k signed squares."""

    def __init__(self, k: int) -> None:
        super().__init__()
        if not isinstance(k, int) or k < 1:
            raise InvalidSpec(f"k must be a positive integer, got {k!r}")
        self.k = k
        self.growth = Growth(1.0, 0.0, k)

    def _compute(self, n_max: int) -> np.ndarray:
        return r_k_table(self.k, n_max)

    def key(self) -> tuple:
        return ("r", self.k)

    def __repr__(self) -> str:
        return f"SumOfSquares({self.k})"


class Divisor(ArithmeticSequence):
    """sigma_z(n) = sum_{d | n} d^z, with sigma_z(0) = 0."""

    def __init__(self, z: complex) -> None:
        super().__init__()
        self.z = z
        zc = complex(z)
        self._int = zc.imag == 0.0 and zc.real >= 0 and zc.real == int(zc.real)
        self.exact = self._int
        self.growth = Growth(1.0, 1.0 + max(zc.real, 0.0), 0)

    def _compute(self, n_max: int):
        if self._int:
            p = int(complex(self.z).real)
            out = [0] * (n_max + 1)
            for d in range(1, n_max + 1):
                dp = d**p
                for m in range(d, n_max + 1, d):
                    out[m] += dp
            return out
        zc = complex(self.z)
        out = np.zeros(n_max + 1, dtype=np.complex128)
        for d in range(1, n_max + 1):
            out[d::d] += cmath.exp(zc * math.log(d))
        return out

    def key(self) -> tuple:
        return ("sigma", complex(self.z))

    def __repr__(self) -> str:
        return f"Divisor({self.z!r})"


def _series_mul(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        if ai:
            lim = n - i
            for j, bj in enumerate(b[: lim + 1]):
                if bj:
                    out[i + j] += ai * bj
    return out


def tau_table(n_max: int) -> list[int]:
    """tau(0..n_max) from q * prod (1 - q^m)^24 with exact integers."""
    n = max(n_max - 1, 0)
    p = [0] * (n + 1)
    p[0] = 1
    for m in range(1, n + 1):
        for i in range(n, m - 1, -1):
            p[i] -= p[i - m]
    p3 = _series_mul(_series_mul(p, p, n), p, n)
    p6 = _series_mul(p3, p3, n)
    p12 = _series_mul(p6, p6, n)
    p24 = _series_mul(p12, p12, n)
    return [0] + p24[: n_max]


class RamanujanTau(ArithmeticSequence):
    growth = Growth(1.0, 6.5, 0)

    def _compute(self, n_max: int) -> list[int]:
        return tau_table(n_max)

    def key(self) -> tuple:
        return ("tau",)

    def __repr__(self) -> str:
        return "RamanujanTau()"


class Ones(ArithmeticSequence):
    """a(n) = 1 for n >= 1 and a(0) = 0."""

    growth = Growth(1.0, 0.0, 0)

    def _compute(self, n_max: int) -> np.ndarray:
        out = np.ones(n_max + 1, dtype=np.int64)
        out[0] = 0
        return out

    def key(self) -> tuple:
        return ("one",)

    def __repr__(self) -> str:
        return "Ones()"


def r_k(k: int, n: int) -> int:
    return int(SumOfSquares(k)(n)) if n >= 0 else 0


def sigma(z: complex, n: int) -> complex | int:
    """sigma_z(n) by trial division."""
    if n < 1:
        raise InvalidSpec("sigma needs n >= 1")
    divs = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            divs.append(d)
            if d * d != n:
                divs.append(n // d)
        d += 1
    zc = complex(z)
    if zc.imag == 0.0 and zc.real >= 0 and zc.real == int(zc.real):
        p = int(zc.real)
        return sum(x**p for x in divs)
    vals = [cmath.exp(zc * math.log(x)) for x in sorted(divs)]
    s = complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
    return s.real if zc.imag == 0.0 else s


@lru_cache(maxsize=None)
def _tau_cached(n_max: int) -> tuple[int, ...]:
    return tuple(tau_table(n_max))


def tau(n: int) -> int:
    if n < 1:
        raise InvalidSpec("tau needs n >= 1")
    size = 64
    while size < n:
        size *= 2
    return _tau_cached(size)[n]


@lru_cache(maxsize=None)
def _bernoulli_list(n: int) -> tuple[Fraction, ...]:
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * b[j]
        b.append(-acc / (m + 1))
    return tuple(b)


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{j<=n} C(n+1, j) B_j = 0."""
    if n < 0:
        raise InvalidSpec("bernoulli needs n >= 0")
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    size = 32
    while size < n:
        size *= 2
    return _bernoulli_list(size)[n]


# ----------------------------------------------------------------- characters


@dataclass(frozen=True)
class DirichletCharacter:
    """Character modulo q given by its full value table chi(0..q-1)."""

    modulus: int
    values: tuple[complex, ...]
    label: str = ""
    parity: str = field(init=False)
    primitive: bool = field(init=False)

    def __post_init__(self) -> None:
        q = self.modulus
        if q < 1 or len(self.values) != q:
            raise InvalidSpec("value table must have exactly q entries")
        vals = tuple(complex(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        for a in range(q):
            unit = gcd(a, q) == 1
            if unit and abs(abs(vals[a]) - 1.0) > 1e-12:
                raise InvalidSpec(f"|chi({a})| must be 1")
            if not unit and vals[a] != 0:
                raise InvalidSpec(f"chi({a}) must vanish")
        for a in range(q):
            for b in range(q):
                if abs(vals[a * b % q] - vals[a] * vals[b]) > 1e-10:
                    raise InvalidSpec("value table is not multiplicative")
        minus = vals[(q - 1) % q] if q > 1 else 1.0
        object.__setattr__(self, "parity", "even" if abs(minus - 1.0) < 1e-10 else "odd")
        object.__setattr__(self, "primitive", self._is_primitive())

    def _is_primitive(self) -> bool:
        q = self.modulus
        if q == 1:
            return True
        for d in range(1, q):
            if q % d:
                continue
            induced = True
            for a in range(1, q):
                if gcd(a, q) == 1 and a % d == 1 % d and abs(self.values[a] - 1.0) > 1e-10:
                    induced = False
                    break
            if induced:
                return False
        return True

    @property
    def principal(self) -> bool:
        return all(
            abs(v - 1.0) < 1e-12 for a, v in enumerate(self.values) if gcd(a, self.modulus) == 1
        )

    def __call__(self, n: int) -> complex:
        return self.values[n % self.modulus]

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus, tuple(v.conjugate() for v in self.values), self.label + "*" if self.label else ""
        )

    @classmethod
    def from_table(cls, q: int, values, label: str = "") -> "DirichletCharacter":
        return cls(q, tuple(values), label)


def legendre(p: int) -> DirichletCharacter:
    """The quadratic character modulo an odd prime p."""
    if p < 3 or any(p % d == 0 for d in range(2, isqrt(p) + 1)):
        raise InvalidSpec(f"{p} is not an odd prime")
    squares = {a * a % p for a in range(1, p)}
    vals = [0] + [1 if a in squares else -1 for a in range(1, p)]
    return DirichletCharacter(p, tuple(vals), f"legendre{p}")


def gauss_sum(chi: DirichletCharacter) -> complex:
    """G(chi) = sum_l chi(l) exp(2 pi i l / q)."""
    if chi.principal:
        raise InvalidSpec("Gauss sums of the principal character are not used")
    q = chi.modulus
    parts = []
    for l in range(1, q):
        v = chi(l)
        if v:
            ang = 2.0 * math.pi * l / q
            parts.append(v * complex(math.cos(ang), math.sin(ang)))
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


class CharacterTwist(ArithmeticSequence):
    """chi(n) * base(n)."""

    exact = False

    def __init__(self, base: ArithmeticSequence, chi: DirichletCharacter) -> None:
        super().__init__()
        self.base = base
        self.chi = chi
        self.growth = base.growth

    def _compute(self, n_max: int) -> np.ndarray:
        base = self.base.table(n_max)
        out = np.zeros(n_max + 1, dtype=np.complex128)
        for n in range(n_max + 1):
            c = self.chi(n)
            if c:
                out[n] = c * complex(base[n])
        return out

    def key(self) -> tuple:
        return ("twist", self.base.key(), self.chi.modulus, self.chi.values)

    def __repr__(self) -> str:
        return f"CharacterTwist({self.base!r}, mod {self.chi.modulus})"


# ----------------------------------------------------------- zeta-type values


@lru_cache(maxsize=64)
def _borwein_weights(n: int) -> tuple[float, ...]:
    d = []
    acc = 0
    for i in range(n + 1):
        acc += math.factorial(n + i - 1) * 4**i // (math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    dn = d[n]
    return tuple(float(Fraction(dn - d[k], dn)) for k in range(n))


_BORWEIN_BASE = math.log(3.0 + math.sqrt(8.0))


def _zeta_borwein(s: complex) -> SpecialValue:
    """Borwein's accelerated alternating series, valid for Re s >= 1/2."""
    lw = (1.0 - s) * math.log(2.0)
    # 1 - 2^(1-s) = -expm1(w), evaluated without cancellation near s = 1
    half_sin = math.sin(0.5 * lw.imag)
    em1 = complex(
        math.expm1(lw.real) * math.cos(lw.imag) - 2.0 * half_sin * half_sin,
        math.exp(lw.real) * math.sin(lw.imag),
    )
    denom = -em1
    if abs(denom) < 1e-300:
        raise DomainError(f"alternating series factor vanishes at s={s}")
    g = abs(gamma(s).value)
    need = math.log(2.0 / max(g * abs(denom), 1e-300)) + 40.0 * math.log(10.0)
    n = min(max(int(math.ceil(need / _BORWEIN_BASE)), 8), 600)
    w = _borwein_weights(n)
    parts = []
    for k in range(n):
        val = w[k] * cmath.exp(-s * math.log(k + 1.0))
        parts.append(val if k % 2 == 0 else -val)
    total = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    value = total / denom
    trunc = 2.0 / ((3.0 + math.sqrt(8.0)) ** n * g * abs(denom))
    abs_sum = math.fsum(abs(p) for p in parts)
    rnd = EPS * abs_sum * (8.0 + abs(s) * math.log(n + 1.0)) / abs(denom) + EPS * abs(value) * (abs(lw) / abs(denom) + 8)
    return SpecialValue(value, trunc + rnd)


def riemann_zeta(s: complex) -> SpecialValue:
    """zeta(s) for s != 1; reflection for Re s < 1/2."""
    s = complex(s)
    if s == 1:
        raise PoleAt(s, "zeta has a pole at s = 1")
    if s == 0:
        return SpecialValue(-0.5 + 0j, 0.0)
    if s.real >= 0.5:
        return _zeta_borwein(s)
    other = _zeta_borwein(1.0 - s)
    g = gamma(1.0 - s)
    sn = _sinpi(s / 2.0)
    pref = cmath.exp(s * math.log(2.0) + (s - 1.0) * math.log(math.pi)) * sn
    value = pref * g.value * other.value
    err = abs(pref) * (
        abs(g.value) * other.abs_error_bound + abs(other.value) * g.abs_error_bound
    ) + abs(value) * EPS * (abs(s) * 4 + 8)
    return SpecialValue(value, err)


@dataclass(frozen=True)
class ZetaLikeSeries:
    """A zeta-type Dirichlet series.

    kind is ``riemann``, ``zeta_k`` (sum r_k(n) n^-s) or ``eta_k``
    (pi^-s Gamma(s) zeta_k(s), which satisfies eta_k(s) = eta_k(k/2 - s)).
    """

    kind: str
    k: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("riemann", "zeta_k", "eta_k"):
            raise InvalidSpec(f"unknown zeta kind {self.kind!r}")
        if self.kind != "riemann" and (not isinstance(self.k, int) or self.k < 1):
            raise InvalidSpec("k must be a positive integer")

    @property
    def abscissa(self) -> float:
        return 1.0 if self.kind == "riemann" else self.k / 2.0


def RiemannZeta() -> ZetaLikeSeries:
    return ZetaLikeSeries("riemann")


def ZetaK(k: int) -> ZetaLikeSeries:
    return ZetaLikeSeries("zeta_k", k)


def CompletedEtaK(k: int) -> ZetaLikeSeries:
    return ZetaLikeSeries("eta_k", k)


def _theta_minus_one(k: int, u: float, n_terms: int = 30) -> float:
    r = r_k_table(k, n_terms)
    vals = [float(r[n]) * math.exp(-math.pi * n * u) for n in range(1, n_terms + 1)]
    return math.fsum(vals)


def eta_k_theta(k: int, s: complex, controls: QuadratureControls | None = None) -> SpecialValue:
    """pi^-s Gamma(s) zeta_k(s) from the Mellin transform of the theta function.

    eta_k(s) = int_1^inf (Theta(u) - 1)(u^(s-1) + u^(k/2-s-1)) du
               + 1/(s - k/2) - 1/s,
    where Theta(u) = sum r_k(n) exp(-pi n u).  The integral converges for all
    s; callers restrict its use to the half-planes where the Dirichlet series
    defines zeta_k.
    """
    s = complex(s)
    if s == 0 or s == k / 2.0:
        raise PoleAt(s, "eta_k has poles at 0 and k/2")
    n_terms = 30
    half = k / 2.0

    def env(n: int) -> float:
        return (2.0 * math.sqrt(n) + 1.0) ** k * math.exp(-math.pi * n)

    rho = env(n_terms + 2) / env(n_terms + 1)
    tail_at_one = env(n_terms + 1) / (1.0 - rho)
    # for u >= 1 the tail is at most tail_at_one * exp(-pi (N+1)(u-1))
    decay = math.pi * (n_terms + 1)
    slope = max(s.real - 1.0, half - s.real - 1.0, 0.0)
    tail = tail_at_one * 2.0 / (decay - slope)

    def f(v: float) -> complex:
        u = 1.0 + v
        lu = math.log(u)
        th = _theta_minus_one(k, u, n_terms)
        return th * (cmath.exp((s - 1.0) * lu) + cmath.exp((half - s - 1.0) * lu))

    res = exp_sinh(f, controls)
    value = res.value + 1.0 / (s - half) - 1.0 / s
    err = res.error_estimate + 16 * EPS * res.abs_integral + tail + EPS * (abs(value) + 4)
    return SpecialValue(value, err)


def zeta_k_partial(k: int, s: complex, n_max: int) -> tuple[complex, float]:
    """Partial sum of sum_{1<=n<=n_max} r_k(n) n^-s and a bound on the tail.

    The tail bound uses Abel summation with the lattice count
    A(t) <= V_k (sqrt t + sqrt(k)/2)^k, V_k the unit-ball volume.
    """
    s = complex(s)
    half = k / 2.0
    if s.real <= half:
        raise DomainError("the Dirichlet series needs Re s > k/2")
    r = r_k_table(k, n_max)
    n = np.arange(1, n_max + 1, dtype=np.float64)
    vals = r[1:].astype(np.float64) * np.exp(-s * np.log(n))
    total = complex(math.fsum(vals.real), math.fsum(vals.imag))
    vk = math.pi**half / math.gamma(half + 1.0)
    c = math.sqrt(k) / 2.0
    big_n = float(n_max)
    grow = (1.0 + c / math.sqrt(big_n)) ** k
    lattice_n = vk * (math.sqrt(big_n) + c) ** k
    tail = lattice_n * big_n ** (-s.real) + abs(s) * vk * grow * big_n ** (half - s.real) / (s.real - half)
    rnd = EPS * float(np.sum(np.abs(vals))) * (abs(s) * math.log(big_n + 1) + 4)
    return total, tail + rnd


def zeta_like(series: ZetaLikeSeries, s: complex) -> SpecialValue:
    """Evaluate a zeta-type series where its definition is covered."""
    s = complex(s)
    if series.kind == "riemann":
        return riemann_zeta(s)
    k = series.k
    half = k / 2.0
    if series.kind == "zeta_k":
        if k == 1:
            z = riemann_zeta(2.0 * s)
            return SpecialValue(2.0 * z.value, 2.0 * z.abs_error_bound)
        if s.real <= half:
            raise DomainNotCovered(f"zeta_{k}(s) is only evaluated for Re s > {half}")
        eta = eta_k_theta(k, s)
        g = gamma(s)
        pref = cmath.exp(s * math.log(math.pi)) / g.value
        value = pref * eta.value
        err = abs(pref) * eta.abs_error_bound + abs(value) * (g.abs_error_bound / abs(g.value) + EPS * (abs(s) + 4))
        return SpecialValue(value, err)
    # completed eta_k
    if k == 1:
        if s == 0 or s == 0.5:
            raise PoleAt(s, "eta_1 has poles at 0 and 1/2")
        if s.real < 0.25:
            s = 0.5 - s
        g = gamma(s)
        z = riemann_zeta(2.0 * s)
        pref = cmath.exp(-s * math.log(math.pi))
        value = pref * g.value * 2.0 * z.value
        err = abs(pref) * 2.0 * (abs(g.value) * z.abs_error_bound + abs(z.value) * g.abs_error_bound) + abs(value) * EPS * (abs(s) * 2 + 4)
        return SpecialValue(value, err)
    if s.real > half:
        return eta_k_theta(k, s)
    if s.real < 0.0:
        return eta_k_theta(k, half - s)
    raise DomainNotCovered(f"eta_{k}(s) inside the strip 0 <= Re s <= {half} is out of scope")
