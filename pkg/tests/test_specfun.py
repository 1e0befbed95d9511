from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import mp_bessel_i, mp_bessel_j, mp_bessel_k, mp_hyp2f1
from popov_verify.errors import DomainError, PoleAt
from popov_verify.quadrature import QuadratureControls
from popov_verify.specfun import (
    bessel_i,
    bessel_i_scaled,
    bessel_j,
    bessel_j_normalized,
    bessel_k,
    bessel_norm0f1,
    gamma,
    hyp1f1,
    hyp2f1,
    hyp2f1_euler_integral,
    humbert_phi3,
    rgamma,
)


def close(v, ref, slack=0.0):
    """|v - ref| within the reported bound (plus slack for the oracle)."""
    return abs(v.value - ref) <= v.abs_error_bound + slack


# gamma


def test_gamma_fixed_values():
    assert abs(gamma(0.5).value - math.sqrt(math.pi)) < 1e-15
    assert gamma(5).value == pytest.approx(24.0, rel=1e-15)
    ref = complex(mpmath.gamma(0.25 + 3j))
    assert abs(gamma(0.25 + 3j).value - ref) < 1e-12 * abs(ref)


@given(st.floats(-20, 40), st.floats(-30, 30))
@settings(max_examples=150, deadline=None)
def test_gamma_against_mpmath(re, im):
    s = complex(re, im)
    if abs(s - round(re)) < 1e-6 and round(re) <= 0:
        return
    v = gamma(s)
    ref = complex(mpmath.gamma(s))
    assert abs(v.value - ref) <= v.abs_error_bound + 1e-13 * abs(ref)


def test_gamma_poles():
    for n in (0, -1, -7):
        with pytest.raises(PoleAt):
            gamma(n)
        assert rgamma(n) == 0


# Bessel J and I


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0, 3.0, 10.0])
def test_half_order_closed_forms(t):
    j = bessel_j(-0.5, t)
    i = bessel_i(-0.5, t)
    assert abs(j.value - math.sqrt(2 / (math.pi * t)) * math.cos(t)) < 1e-11
    assert abs(i.value - math.sqrt(2 / (math.pi * t)) * math.cosh(t)) < 1e-11 * math.cosh(t)


def test_j_and_i_at_zero():
    for nu in (0.25, 1.0, 5.5):
        assert bessel_j(nu, 0.0).value == 0
        assert bessel_i(nu, 0.0).value == 0
    assert bessel_j(0.0, 0.0).value == 1


def test_j0_integral_representation():
    ref = float(mpmath.quad(lambda th: mpmath.cos(mpmath.sin(th)), [0, mpmath.pi]) / mpmath.pi)
    assert abs(bessel_j(0.0, 1.0).value - ref) < 1e-14


@given(st.floats(-0.5, 12), st.floats(0.01, 80))
@settings(max_examples=150, deadline=None)
def test_bessel_j_against_mpmath(nu, t):
    v = bessel_j(nu, t)
    assert close(v, mp_bessel_j(nu, t), 1e-15)


@given(st.floats(-0.5, 12), st.floats(0.01, 60))
@settings(max_examples=100, deadline=None)
def test_bessel_i_against_mpmath(nu, t):
    v = bessel_i(nu, t)
    ref = mp_bessel_i(nu, t)
    assert close(v, ref, 1e-15 * abs(ref))


@pytest.mark.parametrize("nu", [-0.25, 0.0, 1.0, 5.5])
def test_i_normalized_bound(nu):
    for t in np.linspace(0.05, 20, 80):
        scaled = bessel_i_scaled(nu, t).value.real  # e^{-t} I_nu(t)
        assert (t / 2) ** (-nu) * scaled * math.gamma(nu + 1) <= 1.0 + 1e-14


@pytest.mark.parametrize("nu", [-0.25, 0.0, 1.0, 5.5])
def test_small_argument_limit(nu):
    vals = [abs(y ** (-nu) * bessel_j(nu, y).value * math.gamma(nu + 1) * 2**nu - 1) for y in 10.0 ** -np.arange(1, 7)]
    assert vals[-1] < 1e-10
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_order_below_half_rejected():
    with pytest.raises(DomainError):
        bessel_j(-0.7, 1.0)


def test_norm0f1_is_scaled_0f1():
    for nu, w in [(0.5, -2.0), (1.25, 3.0), (-0.75, 0.4 - 1.3j), (2.0, -50.0)]:
        ref = complex(mpmath.hyp0f1(nu + 1, w) / mpmath.gamma(nu + 1))
        assert close(bessel_norm0f1(nu, w), ref, 1e-14 * abs(ref))


def test_j_normalized_complex_argument():
    u = 1.3 + 0.6j
    ref = complex(mpmath.besselj(0.75, u) * (u / 2) ** -0.75)
    assert close(bessel_j_normalized(0.75, u), ref, 1e-14)


# Bessel K


@pytest.mark.parametrize("t", [0.5, 1.0, 3.0, 10.0])
def test_k_half_closed_form(t):
    v = bessel_k(0.5, t)
    assert abs(v.value - math.sqrt(math.pi / (2 * t)) * math.exp(-t)) < 1e-11


def test_k_even_in_order():
    for nu in (0.3, 1.7 + 0.4j, 2j):
        a, b = bessel_k(nu, 1.3), bessel_k(-nu, 1.3)
        assert abs(a.value - b.value) <= a.abs_error_bound + b.abs_error_bound + 1e-15


def test_k_imaginary_order_refinement():
    coarse = bessel_k(2j, 1.0)
    fine = bessel_k(2j, 1.0, QuadratureControls(max_level=14, abs_target=1e-17, rel_target=1e-16))
    assert abs(coarse.value - fine.value) < 1e-11
    assert close(coarse, mp_bessel_k(2j, 1.0), 1e-15)


@given(st.floats(-4, 4), st.floats(-3, 3), st.floats(0.05, 40))
@settings(max_examples=100, deadline=None)
def test_bessel_k_against_mpmath(re, im, t):
    nu = complex(re, im)
    v = bessel_k(nu, t)
    ref = mp_bessel_k(nu, t)
    assert close(v, ref, 1e-14 * abs(ref))


# hypergeometric


def test_hyp2f1_fixed():
    k, x, y = 2, 2.0, 1.0
    z = -(y * y) / (x * x)
    v = hyp2f1(k / 4, k / 4 + 0.5, k / 4 + 0.5, z)
    assert abs(v.value - (1 + y * y / (x * x)) ** (-k / 4)) < 1e-12
    assert hyp2f1(0.3, 1.7, 2.2, 0.0).value == 1
    assert abs(hyp2f1(1, 1, 2, -0.5).value - 2 * math.log(1.5)) < 1e-14


def test_hyp2f1_triple_path():
    rng = np.random.default_rng(20240611)
    for _ in range(100):
        a = complex(*rng.uniform(-2, 2, 2))
        b = complex(*rng.uniform(-2, 2, 2))
        c = complex(rng.uniform(0.3, 3), rng.uniform(-2, 2))
        z = rng.uniform(-0.9, 0)
        vals = [hyp2f1(a, b, c, z, method=m) for m in ("direct", "pfaff", "euler")]
        for u in vals:
            for w in vals:
                assert abs(u.value - w.value) <= u.abs_error_bound + w.abs_error_bound + 1e-14
        ref = mp_hyp2f1(a, b, c, z)
        assert abs(vals[1].value - ref) <= vals[1].abs_error_bound + 1e-13 * max(1, abs(ref))


@pytest.mark.parametrize("a,b,c,z", [(0.3, 0.7, 1.9, -0.6), (1.0, 0.5, 2.5, -0.95), (2.0, 1.5, 4.0, 0.7)])
def test_hyp2f1_euler_integral(a, b, c, z):
    quad = hyp2f1_euler_integral(a, b, c, z)
    ser = hyp2f1(a, b, c, z)
    assert abs(quad.value - ser.value) < 1e-10


def test_hyp2f1_outside_disk():
    with pytest.raises(DomainError):
        hyp2f1(1, 1, 2, 1.0)


def test_hyp1f1_values():
    assert hyp1f1(0.4, 1.3, 0.0).value == 1
    assert abs(hyp1f1(1.7, 1.7, -0.3).value - math.exp(-0.3)) < 1e-15
    for k, z in [(1, 0.5), (2, 1.3), (5, 0.8 + 0.4j)]:
        v = hyp1f1(k / 2, k / 2, -(z * z) / 4)
        assert abs(v.value - cmath.exp(-(z * z) / 4)) < 1e-14


@given(st.floats(-3, 3), st.floats(0.2, 4), st.floats(-30, 30), st.floats(-5, 5))
@settings(max_examples=80, deadline=None)
def test_hyp1f1_against_mpmath(a, b, zr, zi):
    v = hyp1f1(a, b, complex(zr, zi))
    ref = complex(mpmath.hyp1f1(a, b, complex(zr, zi)))
    assert close(v, ref, 1e-13 * max(1, abs(ref)))


def test_phi3_slices():
    assert humbert_phi3(0.7, 1.3, 0.0, 0.0).value == 1
    w = 0.45 - 0.2j
    assert abs(humbert_phi3(0.7, 1.3, w, 0.0).value - hyp1f1(0.7, 1.3, w).value) < 1e-14
    u = -2.5
    ref = complex(mpmath.hyp0f1(1.3, u))
    assert abs(humbert_phi3(0.0, 1.3, w, u).value - ref) < 1e-14


@pytest.mark.parametrize("b,c,w,u", [(0.7, 1.3, 0.4, -0.9), (1.5, 2.0, -1.2, 3.0), (-0.25, 0.75, 0.3 + 0.2j, -6.0)])
def test_phi3_against_double_series(b, c, w, u):
    v = humbert_phi3(b, c, w, u)
    ref = complex(mpmath.hyper2d({"m": [b]}, {"m+n": [c]}, w, u))
    assert close(v, ref, 1e-14 * max(1, abs(ref)))
