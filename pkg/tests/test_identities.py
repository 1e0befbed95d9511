from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import primitive_characters
from popov_verify.arith import DirichletCharacter, bernoulli, legendre
from popov_verify.errors import DomainNotCovered, InvalidSpec, PoleAt
from popov_verify.identities import (
    CATALOG,
    IdentityCase,
    character_for_modulus,
    involution,
    verify_analogue,
    verify_character,
    verify_cusp_tau,
    verify_divisor,
    verify_alpha_beta_form,
    verify_guinand,
    verify_guinand_k1_chain,
    verify_k4,
    verify_phi3,
    verify_popov,
    verify_popov_integral_k1,
    verify_popov_k1,
    verify_psi_involution,
    verify_riesz,
    verify_theta_involution,
    verify_theta_k,
)

EPS = 2.220446049250313e-16
CHI4 = DirichletCharacter(4, (0, 1, 0, -1))


def assert_pass(rep, bound=None):
    assert rep.passed, (rep.identity, rep.params, rep.abs_residual, rep.threshold)
    assert rep.recompute_pass()
    if bound is not None:
        assert rep.abs_residual <= bound


# theta and Popov


@pytest.mark.parametrize("k", [1, 2, 5, 8])
def test_theta_self_dual(k):
    rep = verify_theta_k(k, 1.0)
    assert rep.abs_residual <= 1e-15
    assert_pass(rep)


def test_theta_examples():
    assert_pass(verify_theta_k(2, 3.0), 1e-12)
    rep = verify_theta_k(1, 0.5)
    direct = 1 + 2 * sum(math.exp(-math.pi * 0.5 * n * n) for n in range(1, 40))
    assert abs(rep.lhs.value - direct) < 1e-14
    assert abs(direct - 0.5**-0.5 * (1 + 2 * sum(math.exp(-math.pi * 2 * n * n) for n in range(1, 40)))) < 1e-14


def test_popov_examples():
    rep = verify_popov(1, 1.0, 0.0)
    assert rep.abs_residual <= 1e-15
    assert_pass(verify_popov(2, 1.3, 0.7), 1e-10)
    a = verify_popov(1, 2.0, 1.0)
    b = verify_popov_k1(2.0, 1.0)
    assert_pass(a)
    assert_pass(b)


@pytest.mark.parametrize("k,x,z", [(3, 0.8, 0.4 + 0.3j), (4, 1.7, 1.2j), (6, 0.6, 2.0)])
def test_popov_complex_z(k, x, z):
    assert_pass(verify_popov(k, x, z))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_popov_at_zero_is_theta(k):
    a = verify_popov(k, 1.4, 0.0)
    b = verify_theta_k(k, 1.4)
    assert abs(a.abs_residual - b.abs_residual) <= 1e-12
    assert_pass(a)


def test_riesz_examples():
    rep = verify_riesz(1, 1.0, 2.3)
    assert rep.lhs.value == pytest.approx(4.9, abs=1e-14)
    assert_pass(rep, 1e-4)
    rep = verify_riesz(1, 2.0, 0.5)
    assert rep.lhs.value == pytest.approx(0.125, abs=1e-15)
    assert_pass(rep)
    assert_pass(verify_riesz(2, 1.5, 1.0, tol=1e-3), 1e-3)


def test_riesz_order_domain():
    with pytest.raises(InvalidSpec):
        verify_riesz(3, 0.5, 1.0)


def test_phi3_examples():
    a = verify_phi3(2, 0.0, 1.2, 0.4)
    assert_pass(a)
    assert_pass(verify_phi3(3, 0.75, 0.9, 0.0), 1e-12)
    assert_pass(verify_phi3(1, 0.25, 1.5, 0.5), 1e-8)


@pytest.mark.parametrize("k,x,z", [(2, 1.2, 0.4), (3, 0.8, 0.7), (5, 1.5, 0.3)])
def test_phi3_reduces_to_popov(k, x, z):
    a = verify_phi3(k, k / 2 - 1, x, z)
    b = verify_popov(k, x, z)
    assert abs(a.abs_residual - b.abs_residual) <= 1e-9
    assert_pass(a)


# J and I analogues


@pytest.mark.parametrize("k", [1, 2, 3, 7])
def test_analogue_self_dual(k):
    rep = verify_analogue(k, 0.8, 0.6, "J")
    assert rep.abs_residual <= 1e-13
    rep = verify_analogue(k, 1.25, 0.75, "I")
    assert rep.abs_residual <= 1e-13


def test_analogue_examples():
    assert_pass(verify_analogue(2, 2.0, 1.0, "J", tol=1e-13), 1e-11)
    a = verify_analogue(2, 1.7, 1e-6, "J")
    b = verify_theta_k(2, 1.7)
    assert abs(a.abs_residual - b.abs_residual) <= 1e-5


def test_analogue_domain():
    with pytest.raises(InvalidSpec, match="x > y > 0"):
        verify_analogue(2, 1.0, 2.0, "I")
    with pytest.raises(InvalidSpec):
        verify_analogue(2, 1.0, 1.0, "J")
    with pytest.raises(InvalidSpec):
        verify_analogue(2, 1.0, 0.5, "K")


def test_analogue_probe_mode_flags_outside_domain():
    rep = verify_analogue(2, 0.5, 0.9, "J", probe=True)
    assert rep.notes["outside_stated_domain"] is True
    with pytest.raises(InvalidSpec):
        verify_analogue(2, 0.5, 0.9, "I", probe=True)


def test_residual_scaling_grid():
    # no tolerance allowance: the residual must sit inside the certified tails
    for variant in "JI":
        for k in (1, 2, 3):
            for x in (0.7, 1.0, 1.3, 1.7, 2.2):
                for frac in (0.1, 0.3, 0.5, 0.7, 0.9):
                    rep = verify_analogue(k, x, frac * x, variant)
                    scale = max(abs(rep.lhs.value), abs(rep.rhs.value))
                    assert rep.abs_residual <= rep.lhs.tail_bound + rep.rhs.tail_bound + 100 * EPS * scale


@given(st.floats(0.01, 10), st.floats(0.01, 10), st.sampled_from("JI"))
@settings(max_examples=200)
def test_involution_twice(x, y, variant):
    if variant == "I" and not x > y * (1 + 1e-9):
        return
    xm, ym = involution(*involution(x, y, variant), variant)
    # the rounded midpoint feeds x^2 - y^2, whose condition number is about x / (x - y)
    cond = 1.0 if variant == "J" else x / (x - y)
    bound = 4 * EPS * (2 + cond)
    assert abs(xm - x) <= bound * x and abs(ym - y) <= bound * y


def test_theta_involution_examples():
    rep = verify_theta_involution(3, 1.1, 0.4)
    assert_pass(rep, 1e-10)
    assert_pass(verify_theta_involution(1, 2.0, 0.1), 1e-10)
    assert verify_theta_involution(2, 0.9, 0.3).notes["map_twice_error"] <= 1e-15


@pytest.mark.parametrize("tol", [1e-6, 1e-9, 1e-12])
def test_pass_stable_under_looser_tol(tol):
    for rep_fn in (lambda t: verify_analogue(3, 1.5, 0.5, "I", tol=t), lambda t: verify_divisor(3, 1.5, 0.5, "J", tol=t)):
        if rep_fn(tol).passed:
            assert rep_fn(10 * tol).passed


# arithmetic-weight analogues


def test_k4_examples():
    assert_pass(verify_k4(1.25, 0.75), 1e-12)
    assert_pass(verify_k4(2.0, 0.5), 1e-12)
    rep = verify_k4(1.3, 1e-12)
    assert abs(rep.lhs.value) < 1e-10 and abs(rep.rhs.value) < 1e-10


@pytest.mark.parametrize("k", [3, 5, 7])
@pytest.mark.parametrize("variant", ["J", "I"])
def test_divisor(k, variant):
    rep = verify_divisor(k, 1.5, 0.5, variant)
    assert_pass(rep, 1e-10)
    assert rep.notes["bernoulli"] == str(bernoulli(k + 1))


def test_divisor_needs_odd_k():
    with pytest.raises(InvalidSpec):
        verify_divisor(4, 1.5, 0.5)
    with pytest.raises(InvalidSpec):
        verify_divisor(1, 1.5, 0.5)


def test_cusp_tau():
    assert_pass(verify_cusp_tau(1.2, 0.3, "J"), 1e-12)
    assert_pass(verify_cusp_tau(1.2, 0.3, "I"), 1e-12)
    rep = verify_cusp_tau(0.8, 0.6, "J")
    assert rep.abs_residual <= 1e-14
    assert rep.notes["sign"] == 1


def test_character_examples():
    assert_pass(verify_character(legendre(5), 1.0, 0.4), 1e-12)
    rep = verify_character(CHI4, 1.1, 0.2)
    assert abs(rep.notes["gauss_sum"] - 2j) < 1e-14
    assert_pass(rep, 1e-12)


@pytest.mark.parametrize("q", [5, 7, 13])
def test_character_conjugate_symmetry(q):
    for vals in primitive_characters(q):
        chi = DirichletCharacter(q, vals)
        a = verify_character(chi, 1.2, 0.3)
        b = verify_character(chi.conjugate(), 1.2, 0.3)
        assert_pass(a)
        assert_pass(b)
        assert abs(b.lhs.value - a.lhs.value.conjugate()) <= a.lhs.tail_bound + b.lhs.tail_bound
        assert abs(b.rhs.value - a.rhs.value.conjugate()) <= a.rhs.tail_bound + b.rhs.tail_bound


def test_character_must_be_primitive():
    principal = DirichletCharacter(5, (0, 1, 1, 1, 1))
    with pytest.raises(InvalidSpec):
        verify_character(principal, 1.0, 0.4)


# Guinand-type formulas


def test_guinand_examples():
    assert_pass(verify_guinand(1, 1.2, 1.0, 0.3, "J"), 1e-9)
    assert_pass(verify_guinand(2, 1.5, 1.2, 0.4, "J"))
    assert_pass(verify_guinand(3, 2.5, 1.2, 0.5, "I"))


@pytest.mark.parametrize("k,nu,variant", [(1, 1.2, "J"), (1, 0.7 + 0.3j, "J"), (3, 2.5, "I"), (2, 1.5 - 0.4j, "J")])
def test_guinand_reflection_exact(k, nu, variant):
    a = verify_guinand(k, nu, 1.1, 0.35, variant)
    b = verify_guinand(k, -nu, 1.1, 0.35, variant)
    assert a.lhs.value == b.lhs.value
    assert a.rhs.value == b.rhs.value


def test_guinand_self_dual():
    rep = verify_guinand(1, 1.1, 0.6, 0.8, "J")
    assert rep.abs_residual == 0.0


def test_guinand_excluded_orders():
    with pytest.raises(PoleAt):
        verify_guinand(2, 1.0, 1.0, 0.3)
    with pytest.raises(DomainNotCovered):
        verify_guinand(3, 1.0, 1.0, 0.3)


def test_k1_chain():
    rep = verify_guinand_k1_chain(1.5, 1.2, 0.0)
    assert_pass(rep, 1e-9)
    assert rep.notes["alpha_beta_passed"]
    assert_pass(verify_guinand_k1_chain(0.5 + 1j, 1.0, 0.3))
    for nu in (2.0, -4.0, 1.0, -1.0):
        with pytest.raises(PoleAt):
            verify_guinand_k1_chain(nu, 1.0, 0.0)


def test_alpha_beta_form_symmetric_point():
    assert verify_alpha_beta_form(0.7, math.pi).abs_residual == 0.0
    assert_pass(verify_alpha_beta_form(0.7, 2.0))
    assert_pass(verify_alpha_beta_form(-0.3 + 0.5j, 5.0))


def test_psi_involution():
    assert verify_psi_involution(1, 1.1, 0.6, 0.8).abs_residual == 0.0
    assert_pass(verify_psi_involution(1, 1.1, 1.3, 0.2), 1e-9)
    for args in [(1, 1.1, 1.3, 0.2), (2, 1.5, 1.0, 0.4), (3, -2.5, 0.9, 0.6)]:
        assert verify_psi_involution(*args).passed == verify_guinand(*args).passed


# integral representation


def test_popov_integral_examples():
    assert_pass(verify_popov_integral_k1(1.0, 0.0), 1e-6)
    assert_pass(verify_popov_integral_k1(1.5, 0.5), 1e-6)
    rep = verify_popov_integral_k1(1.0, 0.5)
    assert rep.notes["middle_residual"] <= rep.notes["middle_threshold"]


def test_popov_integral_only_k1():
    with pytest.raises(DomainNotCovered):
        verify_popov_integral_k1(1.0, 0.5, k=2)


# catalog


def test_catalog_has_twenty_entries():
    assert len(CATALOG) == 20
    for entry in CATALOG.values():
        assert entry.constraint and entry.anchor and entry.params


def test_identity_case_defaults_and_validation():
    rep = IdentityCase("char_even", {"x": 1.0, "y": 0.4}).evaluate()
    assert_pass(rep)
    with pytest.raises(InvalidSpec):
        IdentityCase("nope", {})
    with pytest.raises(InvalidSpec):
        IdentityCase("analogue_j", {"k": 2, "x": 1.0})
    with pytest.raises(InvalidSpec):
        IdentityCase("analogue_j", {"k": 2, "x": 1.0, "y": 0.5, "nu": 1.0})
    with pytest.raises(InvalidSpec):
        IdentityCase("analogue_i", {"k": 2, "x": 1.0, "y": 2.0})
    with pytest.raises(InvalidSpec):
        IdentityCase("theta_k", {"k": 2, "x": 1.0}, tol=-1.0)


def test_character_for_modulus():
    assert character_for_modulus(4).parity == "odd"
    assert character_for_modulus(5, "even").parity == "even"
    with pytest.raises(InvalidSpec):
        character_for_modulus(5, "odd")
