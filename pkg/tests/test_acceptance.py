"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from _oracles import lattice_counts, mp_hyp2f1, random_series_spec
from popov_verify.arith import RamanujanTau, bernoulli, r_k_table, sigma, tau
from popov_verify.cli import main
from popov_verify.identities import (
    IdentityCase,
    verify_analogue,
    verify_phi3,
    verify_popov,
    verify_theta_k,
)
from popov_verify.mellin import (
    asymptotic_check_2f1,
    asymptotic_check_gamma2f1,
    mellin_forward_check,
    mellin_inverse_check,
    mellin_jk_check,
    round_trip,
)
from popov_verify.series import eval_series
from popov_verify.specfun import bessel_i, bessel_j, bessel_k, hyp2f1

PI = math.pi


@pytest.fixture
def verdict(capsys):
    def say(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail

    return say


def q_expansion_tau(n_max: int) -> list[int]:
    # q * prod (1 - q^m)^24, exact integer arithmetic
    poly = [0] * (n_max + 1)
    poly[0] = 1
    for m in range(1, n_max + 1):
        for _ in range(24):
            for j in range(n_max, m - 1, -1):
                poly[j] -= poly[j - m]
    return [0] + poly[:n_max]


def test_criterion_1_arithmetic_oracles(verdict):
    t0 = time.perf_counter()
    fails = []
    for k in (1, 2, 3, 4):
        if not np.array_equal(r_k_table(k, 200), lattice_counts(k, 200)):
            fails.append(f"r_{k}")
    expansion = q_expansion_tau(50)
    if list(RamanujanTau().table(50)) != expansion:
        fails.append("tau table")
    if [tau(n) for n in range(1, 51)] != expansion[1:]:
        fails.append("tau(n)")
    if (tau(2), tau(3)) != (-24, 252):
        fails.append("tau(2), tau(3)")
    if sigma(3, 6) != 252:
        fails.append("sigma_3(6)")
    if bernoulli(4) != Fraction(-1, 30):
        fails.append("B_4")
    dt = time.perf_counter() - t0
    verdict(1, not fails and dt < 10, f"arithmetic oracles, failures={fails or 'none'}, {dt:.2f}s (< 10s)")


def test_criterion_2_special_function_oracles(verdict):
    t0 = time.perf_counter()
    worst = 0.0
    for t in (0.5, 1.0, 3.0, 10.0):
        pref = math.sqrt(2 / (PI * t))
        worst = max(
            worst,
            abs(bessel_j(-0.5, t).value - pref * math.cos(t)),
            abs(bessel_i(-0.5, t).value - pref * math.cosh(t)) / math.cosh(t),
            abs(bessel_k(0.5, t).value - math.sqrt(PI / (2 * t)) * math.exp(-t)),
        )
    residue = 0.0
    for a, b, z in [(0.3, 1.7, -0.5), (1.25, 0.75, 0.4), (0.5 + 0.2j, 2.0 - 1j, -0.9), (2.0, 0.5, 0.7)]:
        for m in ("direct", "pfaff", "euler"):
            residue = max(residue, abs(hyp2f1(a, b, b, z, method=m).value - (1 - z) ** (-a)))
    rng = np.random.default_rng(20240611)
    disagree = 0
    for _ in range(100):
        a = complex(*rng.uniform(-2, 2, 2))
        b = complex(*rng.uniform(-2, 2, 2))
        c = complex(rng.uniform(0.3, 3), rng.uniform(-2, 2))
        z = rng.uniform(-0.9, 0)
        vals = [hyp2f1(a, b, c, z, method=m) for m in ("direct", "pfaff", "euler")]
        ref = mp_hyp2f1(a, b, c, z)
        ok = all(abs(u.value - w.value) <= u.abs_error_bound + w.abs_error_bound + 1e-14 for u in vals for w in vals)
        ok = ok and abs(vals[1].value - ref) <= vals[1].abs_error_bound + 1e-13 * max(1, abs(ref))
        disagree += not ok
    dt = time.perf_counter() - t0
    ok = worst <= 1e-11 and residue <= 1e-12 and disagree == 0 and dt < 30
    verdict(
        2, ok,
        f"half-order closed forms err={worst:.1e} (<= 1e-11), residue identity err={residue:.1e} (<= 1e-12), "
        f"triple-path disagreements={disagree}/100, {dt:.2f}s (< 30s)",
    )


def test_criterion_3_theorem_grid(verdict):
    t0 = time.perf_counter()
    cases = failed = 0
    for k in range(1, 6):
        for x in (0.7, 1.0, 1.5, 2.0):
            for y in (0.1, x / 3, 0.9 * x):
                for variant in ("J", "I"):
                    rep = verify_analogue(k, x, y, variant, tol=1e-9)
                    cases += 1
                    failed += not (rep.passed and rep.recompute_pass())
    dt = time.perf_counter() - t0
    self_dual = max(
        max(verify_analogue(k, 0.8, 0.6, "J").abs_residual, verify_analogue(k, 1.25, 0.75, "I").abs_residual)
        for k in range(1, 6)
    )
    ok = cases == 120 and failed == 0 and dt < 60 and self_dual <= 1e-13
    verdict(3, ok, f"{cases - failed}/{cases} grid cases pass at tol 1e-9 in {dt:.2f}s (< 60s), self-dual max residual {self_dual:.1e} (<= 1e-13)")


def test_criterion_4_degeneration_ladder(verdict):
    d_theta = d_phi3 = d_popov = 0.0
    for k in (1, 2, 3, 4, 5):
        for x in (0.8, 1.7):
            d_theta = max(d_theta, abs(verify_analogue(k, x, 1e-6).abs_residual - verify_theta_k(k, x).abs_residual))
            d_popov = max(d_popov, abs(verify_popov(k, x, 0.0).abs_residual - verify_theta_k(k, x).abs_residual))
        for x, z in ((1.2, 0.4), (0.8, 0.7 + 0.2j)):
            d_phi3 = max(d_phi3, abs(verify_phi3(k, k / 2 - 1, x, z).abs_residual - verify_popov(k, x, z).abs_residual))
    ok = d_theta <= 1e-4 and d_phi3 <= 1e-9 and d_popov <= 1e-12
    verdict(4, ok, f"analogue(y=1e-6)~theta {d_theta:.1e} (<= 1e-4), phi3~popov {d_phi3:.1e} (<= 1e-9), popov(z=0)~theta {d_popov:.1e} (<= 1e-12)")


CATALOG_CASES = [
    ("k4_exp", {"x": 2.0, "y": 0.5}, None),
    ("divisor_j", {"k": 3, "x": 1.5, "y": 0.5}, None),
    ("cusp_tau_j", {"x": 1.2, "y": 0.3}, None),
    ("char_even", {"q": 5, "x": 1.0, "y": 0.4}, None),
    ("char_odd", {"q": 4, "x": 1.1, "y": 0.2}, None),
    ("riesz_cn", {"k": 1, "q_riesz": 1.0, "x": 2.3}, 1e-4),
    ("popov_integral_k1", {"x": 1.0, "z": 0.0}, 1e-6),
    ("guinand_j", {"k": 1, "nu": 1.2, "x": 1.0, "y": 0.3}, None),
    ("guinand_k1", {"nu": 1.5, "x": 1.2, "y": 0.0}, None),
    ("psi_involution", {"k": 1, "nu": 1.1, "x": 1.3, "y": 0.2}, None),
]


def test_criterion_5_catalog_breadth(verdict):
    t0 = time.perf_counter()
    failed = []
    for ident, params, tol in CATALOG_CASES:
        rep = IdentityCase(ident, params, tol).evaluate()
        if not (rep.passed and rep.recompute_pass()):
            failed.append(ident)
    dt = time.perf_counter() - t0
    ok = not failed and dt < 300
    verdict(5, ok, f"{len(CATALOG_CASES) - len(failed)}/{len(CATALOG_CASES)} catalog identities pass, failures={failed or 'none'}, {dt:.2f}s (< 300s)")


def test_criterion_6_mellin_suite(verdict):
    reports = [
        mellin_forward_check(2.0, 2.0, 1.0, 2),
        mellin_forward_check(0.8 + 0.5j, 3.0, 1.0, 1, tol=1e-9),
        mellin_inverse_check(1.0, PI * 1.5, PI * 0.5, 2, sigma=1.0),
        mellin_jk_check(2.0, 2.0, 1.0, 0.5, 0.5),
        mellin_jk_check(1.5, 3.0, 1.0, 0.0, 0.3),
    ]
    worst = max(r.abs_residual for r in reports)
    transforms_ok = all(r.passed for r in reports) and worst <= 1e-6
    trip = round_trip(2.0, 1.0, 2)
    trip_ok = len(trip) == 3 and all(r.passed and r.abs_residual <= 1e-6 for r in trip)
    window = asymptotic_check_2f1(1.0, 0.0, 1.0, 0.3, [50, 100, 200])
    window_ok = window.decreasing and window.band <= 4.0
    scan = asymptotic_check_gamma2f1(1.5, 0.0, 0.5, 0.4, 30.0)
    scan_ok = scan.tau0 is not None and scan.tau0 <= 30.0
    # the second height configuration is tracked separately as an expected failure in test_mellin
    second = asymptotic_check_2f1(0.5, 0.75, 1.0, 0.5, [50, 100, 200])
    ok = transforms_ok and trip_ok and window_ok and scan_ok
    verdict(
        6, ok,
        f"transform residual max {worst:.1e} (<= 1e-6), round trip {sum(r.passed for r in trip)}/3, "
        f"2F1 band {window.band:.3f} decreasing={window.decreasing} (<= 4), tau0={scan.tau0} (<= 30); "
        f"[info] sigma=0.5 nu=0.75 band {second.band:.3f} decreasing={second.decreasing}",
    )


def test_criterion_7_certification_soundness(verdict):
    rng = np.random.default_rng(777)
    violations = []
    for i in range(50):
        spec, tol = random_series_spec(rng)
        r = eval_series(spec, tol)
        n = r.terms_used + spec.start - 1
        ref = eval_series(spec, tol, n_trunc=max(4 * n, 4))
        if abs(ref.value - r.value) > r.tail_bound:
            violations.append(i)
    verdict(7, not violations, f"{len(violations)} violations over 50 random series at 4x truncation, indices={violations or 'none'}")


def test_criterion_8_cli_determinism(verdict, tmp_path):
    argv = ["scan", "theta_involution", "--k", "1..3", "--x", "0.7..2.0:5", "--y", "0.1..0.6:4", "--format", "json"]
    hashes = []
    for i, jobs in enumerate(("1", "2", "4", "1", "4")):
        path = tmp_path / f"run{i}.json"
        code = main(argv + ["--jobs", jobs, "--out", str(path)])
        doc = json.loads(path.read_text())
        hashes.append((code, doc["summary"]["determinism_hash"], len(doc["records"])))
    ok = len(set(hashes)) == 1 and hashes[0][0] == 0
    verdict(8, ok, f"{len(hashes)} scans at jobs 1,2,4,1,4 give {len(set(h for _, h, _ in hashes))} distinct hash(es), {hashes[0][2]} records each")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
