"""Shared generators and oracles for the test suite."""

from __future__ import annotations

import numpy as np

from riskcal import (
    FirstOrderCase,
    RationalTF,
    closed_loop_charpoly,
    is_hurwitz,
    margins,
)


def random_case(rng: np.random.Generator, branch: int | None = None) -> FirstOrderCase:
    """Random valid scenario; branch 1/2/3 places r below rho_B, between
    rho_B and rho_B*, or above rho_B*."""
    a = rng.uniform(0.5, 20.0)
    p0 = -rng.uniform(0.5, 15.0)
    q0 = rng.uniform(0.5, 30.0)
    sigma_p = (a - p0) / rng.uniform(0.5, 4.0)
    sigma_q = sigma_p * rng.uniform(0.2, 2.0)
    k_b = rng.uniform(1.05, 8.0)
    k_a = a * k_b * rng.uniform(1.2, 5.0)
    rho_b = (k_b * q0 - p0) / (k_b + 1.0)
    rho_b_star = (k_b * q0 - p0) / (k_b - 1.0)
    if branch == 1:
        r = rho_b * rng.uniform(0.2, 0.95)
    elif branch == 2:
        r = rho_b + (rho_b_star - rho_b) * rng.uniform(0.02, 0.98)
    elif branch == 3:
        r = rho_b_star * rng.uniform(1.05, 3.0)
    else:
        r = rho_b_star * rng.uniform(0.1, 2.0)
    return FirstOrderCase(a=a, r=r, p0=p0, q0=q0, sigma_p=sigma_p,
                          sigma_q=sigma_q, k_a=k_a, k_b=k_b)


def random_stable_loop(rng: np.random.Generator) -> tuple[RationalTF, RationalTF]:
    """Random (controller, plant) pair with a Hurwitz-stable nominal loop.

    Both denominators are monic and the numerator product degree is kept
    strictly below n + kappa, so the characteristic polynomial's leading
    coefficient is pinned at 1.
    """
    while True:
        n_c = int(rng.integers(0, 3))
        m_c = int(rng.integers(0, n_c + 1))
        kappa = int(rng.integers(1, 4))
        ell = int(rng.integers(0, kappa + 1))
        if m_c + ell >= n_c + kappa:
            continue
        a = [1.0] + rng.uniform(-3.0, 3.0, size=n_c).tolist()
        b = [rng.uniform(0.2, 3.0) * rng.choice([-1.0, 1.0])] + rng.uniform(
            -3.0, 3.0, size=m_c
        ).tolist()
        alpha = [1.0] + rng.uniform(-3.0, 3.0, size=kappa).tolist()
        beta = [rng.uniform(0.2, 3.0) * rng.choice([-1.0, 1.0])] + rng.uniform(
            -3.0, 3.0, size=ell
        ).tolist()
        controller = RationalTF.from_coeffs(b, a)
        plant = RationalTF.from_coeffs(beta, alpha)
        if is_hurwitz(closed_loop_charpoly(controller, plant)):
            return controller, plant


def grid_stable_fraction_b(case: FirstOrderCase, n: int = 400) -> float:
    """Cell-center grid estimate of the box volume fraction where p < K_B q.

    For an n x n grid and a single straight cut, the cell-counting error is
    at most (2n - 1)/n^2, i.e. below 0.005 for n = 400.
    """
    step = 2.0 * case.r / n
    qs = case.q0 - case.r + (np.arange(n) + 0.5) * step
    ps = case.p0 - case.r + (np.arange(n) + 0.5) * step
    grid_q, grid_p = np.meshgrid(qs, ps)
    return float(np.mean(grid_p < case.k_b * grid_q))


def roots_max_real(coeffs) -> float:
    rts = np.roots(coeffs)
    return -np.inf if rts.size == 0 else float(np.max(rts.real))


def expected_margins(case: FirstOrderCase) -> tuple[float, float, float]:
    m = margins(case)
    return m.rho_a, m.rho_b, m.rho_b_star
