"""Acceptance suite: every shipped-quality criterion at its stated tolerance.

Run with `pytest -s tests/test_acceptance.py` to see one PASS/FAIL line per
criterion.
"""

import math
import time

import numpy as np
import pytest

from riskcal import (
    TABLE1_CASES,
    CoefficientIndex,
    FirstOrderCase,
    Polynomial,
    RiskScenario,
    closed_loop_charpoly,
    coverage_probability,
    destabilizing_value,
    estimate_probability,
    instability_ratio,
    is_hurwitz,
    margins,
    prob_instability_a,
    prob_instability_b,
    ratio_below_one_certificate,
    required_samples,
    risk_probabilistic,
    risk_ratio,
    risk_worstcase,
    stable_a,
    stable_b,
    stable_fraction,
    substitute_coefficient,
    sufficient_condition,
    uniform_box_fraction,
)

from support import grid_stable_fraction_b, random_case, random_stable_loop, roots_max_real

ROW1, ROW2 = TABLE1_CASES


def check(num: int, description: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[criterion {num}] {status}: {description}{suffix}")
    assert ok, f"criterion {num} failed: {description}{suffix}"


def case_with(base: FirstOrderCase, **overrides) -> FirstOrderCase:
    params = dict(a=base.a, r=base.r, p0=base.p0, q0=base.q0, sigma_p=base.sigma_p,
                  sigma_q=base.sigma_q, k_a=base.k_a, k_b=base.k_b)
    params.update(overrides)
    return FirstOrderCase(**params)


def test_criterion_1_benchmark_row_1():
    start = time.perf_counter()
    p_box = coverage_probability(ROW1)
    p_b = stable_fraction(ROW1)
    p_ca = prob_instability_a(ROW1)
    ratio = p_ca / prob_instability_b(ROW1)
    elapsed = time.perf_counter() - start
    ok = (
        abs(p_box - 0.91) <= 0.005
        and abs(p_b - 0.9998) <= 5e-5
        and abs(p_ca - 2.3e-2) <= 5e-4
        and abs(ratio - 112.0) <= 0.05 * 112.0
        and elapsed < 1.0
    )
    check(1, "benchmark row 1 closed forms and quadrature", ok,
          f"P_box={p_box:.4f} P_B={p_b:.6f} P_CA={p_ca:.6f} ratio={ratio:.2f} "
          f"t={elapsed:.3f}s")


def test_criterion_2_benchmark_row_2():
    p_box = coverage_probability(ROW2)
    p_b = stable_fraction(ROW2)
    p_ca = prob_instability_a(ROW2)
    ratio = p_ca / prob_instability_b(ROW2)
    ok = (
        round(p_box, 2) == 0.99
        and abs(p_b - 0.9956) <= 5e-5
        and abs(p_ca - 6.2e-3) <= 2e-4
        and abs(ratio - 2.2e4) <= 0.10 * 2.2e4
    )
    check(2, "benchmark row 2 closed forms and quadrature", ok,
          f"P_box={p_box:.4f} P_B={p_b:.6f} P_CA={p_ca:.6f} ratio={ratio:.0f}")


def test_criterion_3_monte_carlo_cross_validation():
    start = time.perf_counter()
    n, confidence = 10**6, 0.999
    details = []
    ok = True
    for label, case, seed in (("row1", ROW1, 101), ("row2", ROW2, 202)):
        p_ca = prob_instability_a(case)
        p_cb = prob_instability_b(case)
        est_a = estimate_probability(lambda p, q: not stable_a(p, q, case), case,
                                     n, confidence=confidence, seed=seed)
        est_b = estimate_probability(lambda p, q: not stable_b(p, q, case), case,
                                     n, confidence=confidence, seed=seed + 1)
        ok_a = est_a.ci_low <= p_ca <= est_a.ci_high
        ok_b = est_b.ci_low <= p_cb <= est_b.ci_high
        ok = ok and ok_a and ok_b
        details.append(f"{label}: A in CI={ok_a} B in CI={ok_b}")
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 30.0
    check(3, "1e6-sample Monte Carlo CIs cover closed forms", ok,
          "; ".join(details) + f"; t={elapsed:.1f}s")


def test_criterion_4_box_geometry_oracle():
    rng = np.random.default_rng(404)
    worst = 0.0
    worst_jump = 0.0
    for i in range(50):
        case = random_case(rng, branch=i % 3 + 1)
        worst = max(worst, abs(stable_fraction(case) - grid_stable_fraction_b(case)))
        m = margins(case)
        for point in (m.rho_b, m.rho_b_star):
            below = stable_fraction(case_with(case, r=point * (1 - 1e-12)))
            above = stable_fraction(case_with(case, r=point * (1 + 1e-12)))
            worst_jump = max(worst_jump, abs(below - above))
    ok = worst <= 0.005 and worst_jump <= 1e-9
    check(4, "box stable fraction vs 400x400 grid across all branches", ok,
          f"max grid gap={worst:.5f} max branch jump={worst_jump:.2e}")


def test_criterion_5_routh_vs_root_oracle():
    rng = np.random.default_rng(505)
    trials, bad = 10_000, 0
    for _ in range(trials):
        deg = int(rng.integers(0, 7))
        coeffs = rng.uniform(-10.0, 10.0, size=deg + 1)
        if abs(coeffs[0]) < 1e-9:
            coeffs[0] = 1.0
        p = Polynomial(coeffs)
        critical = roots_max_real(p.coeffs)
        if is_hurwitz(p) != (critical < -1e-9) and abs(critical) > 1e-7:
            bad += 1
    check(5, f"Routh test vs root oracle on {trials} random polynomials", bad == 0,
          f"disagreements outside 1e-7 band: {bad}")


def test_criterion_6_destabilization_certificate():
    rng = np.random.default_rng(606)
    loops, certified = 100, 0
    failures = 0
    for _ in range(loops):
        controller, plant = random_stable_loop(rng)
        indices = [CoefficientIndex.denominator(t) for t in range(1, plant.den.degree + 1)]
        indices += [CoefficientIndex.numerator(i) for i in range(plant.num.degree + 1)]
        for which in indices:
            value = destabilizing_value(controller, plant, which)
            perturbed = substitute_coefficient(plant, which, value)
            if is_hurwitz(closed_loop_charpoly(controller, perturbed)):
                failures += 1
            certified += 1
    check(6, f"destabilizing value breaks {loops} random stable loops at every index",
          failures == 0, f"{certified} certificates, {failures} failures")


def test_criterion_7_sufficient_condition_implication():
    rng = np.random.default_rng(707)
    holds, violations, attempts = 0, 0, 0
    while holds < 200 and attempts < 20_000:
        attempts += 1
        case = random_case(rng)
        if not sufficient_condition(case):
            continue
        holds += 1
        if not prob_instability_a(case, tol=1e-12) > prob_instability_b(case):
            violations += 1
    ok = holds >= 200 and violations == 0
    check(7, "sufficient condition implies riskier worst-case design", ok,
          f"{holds} qualifying cases, {violations} violations")


def test_criterion_8_detection_bound():
    eps, delta = 0.05, 0.1
    plan = required_samples(eps, delta)
    case = ROW1
    threshold = case.q0 + case.r * (1.0 - 2.0 * eps)  # slab of volume fraction eps
    campaigns = 2000
    detected = 0
    for k in range(campaigns):
        est = uniform_box_fraction(lambda p, q: q > threshold, case,
                                   plan.n_required, seed=80_000 + k)
        detected += est.p_hat > 0.0
    rate = detected / campaigns
    ok = rate >= 1.0 - delta - 0.02
    check(8, f"planted eps=0.05 violation detected with N={plan.n_required} samples",
          ok, f"detection rate {rate:.4f} over {campaigns} campaigns")


def test_criterion_9_risk_algebra():
    rng = np.random.default_rng(909)
    identity_worst = 0.0
    soundness_violations = 0
    checked = 0
    while checked < 10_000:
        pr_m = rng.uniform(0.0, 1.0)
        pr_e = rng.uniform(0.0, 1.0 - pr_m)
        s = RiskScenario(pr_m=pr_m, pr_e=pr_e,
                         v_p_given_m=rng.uniform(0, 1),
                         v_p_given_e=rng.uniform(0, 1),
                         v_w_given_e=rng.uniform(0, 1))
        checked += 1
        if risk_worstcase(s) > 0.0:
            two_term = (s.v_p_given_e / s.v_w_given_e
                        + s.v_p_given_m * s.pr_m / (s.v_w_given_e * s.pr_e))
            denom = max(1.0, abs(two_term))
            identity_worst = max(identity_worst,
                                 abs(risk_ratio(s) - two_term) / denom)
            if ratio_below_one_certificate(s, rng.uniform(0.01, 0.99)):
                if not risk_ratio(s) < 1.0:
                    soundness_violations += 1
    ok = identity_worst <= 1e-12 and soundness_violations == 0
    check(9, "risk-ratio identity and certificate soundness on 1e4 scenarios", ok,
          f"max identity gap={identity_worst:.2e}, counterexamples={soundness_violations}")
