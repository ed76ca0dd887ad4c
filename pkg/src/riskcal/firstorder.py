"""Closed-form risk quantities for the single-pole uncertain plant q/(s - p)
with independent Gaussian parameters, compared across two feedback designs:

  controller A:  K_A / (s + a)   (designed to cover a whole uncertainty box)
  controller B:  K_B             (static gain; covers most, not all, of it)

The uncertainty box B(r) is the axis-aligned square of radius r around the
nominal (q0, p0).  Everything here is deterministic; Monte Carlo cross-checks
live in the montecarlo module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .quadrature import erf, integrate

__all__ = [
    "FirstOrderCase",
    "Margins",
    "PolarAuxiliaries",
    "BoundaryDataset",
    "TABLE1_CASES",
    "stable_a",
    "stable_b",
    "margins",
    "coverage_probability",
    "stable_fraction",
    "instability_fraction",
    "polar_auxiliaries",
    "prob_instability_a",
    "prob_instability_b",
    "instability_ratio",
    "sufficient_condition",
    "boundary_dataset",
]


@dataclass(frozen=True)
class FirstOrderCase:
    """Scenario parameters: plant q/(s-p) with p ~ N(p0, sigma_p) and
    q ~ N(q0, sigma_q) independent, controllers K_A/(s+a) and K_B, and an
    uncertainty box of radius r around (q0, p0)."""

    a: float
    r: float
    p0: float
    q0: float
    sigma_p: float
    sigma_q: float
    k_a: float
    k_b: float

    def __post_init__(self):
        if not self.a > 0.0:
            raise ValueError(f"requires a > 0, got a={self.a}")
        if not self.r > 0.0:
            raise ValueError(f"requires r > 0, got r={self.r}")
        if not self.p0 < 0.0:
            raise ValueError(f"requires p0 < 0, got p0={self.p0}")
        if not self.q0 > 0.0:
            raise ValueError(f"requires q0 > 0, got q0={self.q0}")
        if not self.sigma_p > 0.0:
            raise ValueError(f"requires sigma_p > 0, got sigma_p={self.sigma_p}")
        if not self.sigma_q > 0.0:
            raise ValueError(f"requires sigma_q > 0, got sigma_q={self.sigma_q}")
        if not self.k_a > 0.0:
            raise ValueError(f"requires K_A > 0, got K_A={self.k_a}")
        if not 1.0 < self.k_b < self.k_a / self.a:
            raise ValueError(
                f"requires 1 < K_B < K_A/a, got K_B={self.k_b} with K_A/a={self.k_a / self.a}"
            )


# The two benchmark scenarios exercised throughout the test suite and by the
# `table1` CLI subcommand.
TABLE1_CASES: tuple[FirstOrderCase, FirstOrderCase] = (
    FirstOrderCase(a=10, r=17, p0=-10, q0=20, sigma_p=10, sigma_q=5, k_a=30, k_b=2),
    FirstOrderCase(a=40, r=49, p0=-10, q0=50, sigma_p=20, sigma_q=10, k_a=4000, k_b=10),
)


def stable_a(p: float, q: float, case: FirstOrderCase) -> bool:
    """Closed loop under controller A is stable iff p < a and p < (K_A/a) q;
    boundary points count as unstable."""
    return p < case.a and p < (case.k_a / case.a) * q


def stable_b(p: float, q: float, case: FirstOrderCase) -> bool:
    """Closed loop under controller B is stable iff p < K_B q (strict)."""
    return p < case.k_b * q


@dataclass(frozen=True)
class Margins:
    """Largest box radii each controller is guaranteed to cover, plus the
    radius beyond which the box is never fully covered by controller B."""

    rho_a: float
    rho_b: float
    rho_b_star: float
    r_in_gap: bool  # the case's r lies in (rho_b, rho_a)


def margins(case: FirstOrderCase) -> Margins:
    """Deterministic stability margins of both designs.

    rho_A = min((K_A q0 - a p0)/(K_A + a), a - p0) and
    rho_B = (K_B q0 - p0)/(K_B + 1); rho_B* = (K_B q0 - p0)/(K_B - 1) marks
    where the unstable part of the box stops being a triangle.  For
    r in (rho_B, rho_A), controller B may fail inside the box while
    controller A covers all of it.
    """
    rho_a = min(
        (case.k_a * case.q0 - case.a * case.p0) / (case.k_a + case.a),
        case.a - case.p0,
    )
    rho_b = (case.k_b * case.q0 - case.p0) / (case.k_b + 1.0)
    rho_b_star = (case.k_b * case.q0 - case.p0) / (case.k_b - 1.0)
    return Margins(rho_a, rho_b, rho_b_star, rho_b < case.r < rho_a)


def coverage_probability(case: FirstOrderCase) -> float:
    """Gaussian probability mass captured by the box B(r):
    erf(r/(sqrt(2) sigma_p)) * erf(r/(sqrt(2) sigma_q))."""
    s2 = math.sqrt(2.0)
    return erf(case.r / (s2 * case.sigma_p)) * erf(case.r / (s2 * case.sigma_q))


def stable_fraction(case: FirstOrderCase) -> float:
    """Lebesgue fraction of the box B(r) on which controller B stabilizes.

    Piecewise in r: 1 below rho_B (no unstable corner), then a triangular
    corner is cut (quadratic deficit), then the cut region widens to a
    trapezoid for r > rho_B*.  Continuous at both branch points.
    """
    m = margins(case)
    r, p0, q0, kb = case.r, case.p0, case.q0, case.k_b
    if r < m.rho_b:
        return 1.0
    if r <= m.rho_b_star:
        excess = r + (p0 + r) / kb - q0
        return 1.0 - kb * excess * excess / (8.0 * r * r)
    return 0.5 - (p0 / kb - q0) / (2.0 * r)


def instability_fraction(case: FirstOrderCase) -> float:
    """Complement of stable_fraction: box volume fraction where controller B
    fails."""
    return 1.0 - stable_fraction(case)


@dataclass(frozen=True)
class PolarAuxiliaries:
    """Standardized geometry of controller A's instability region: the
    stable set {y < u, y < k x + v} in unit-Gaussian coordinates, and the
    polar angle theta_star in (0, pi) where the two boundary constraints
    exchange activity."""

    u: float
    v: float
    k: float
    w: float
    theta_star: float


def polar_auxiliaries(case: FirstOrderCase) -> PolarAuxiliaries:
    u = (case.a - case.p0) / case.sigma_p
    v = ((case.k_a / case.a) * case.q0 - case.p0) / case.sigma_p
    k = (case.k_a / case.a) * (case.sigma_q / case.sigma_p)
    w = v / math.sqrt(1.0 + k * k)
    # tan(theta_star) = k u / (u - v), placed in (0, pi): principal value for
    # u > v, shifted by pi for u < v, exactly pi/2 when u = v.
    if abs(u - v) <= 1e-12 * max(abs(u), abs(v)):
        theta_star = 0.5 * math.pi
    else:
        theta_star = math.atan(k * u / (u - v))
        if u < v:
            theta_star += math.pi
    return PolarAuxiliaries(u, v, k, w, theta_star)


def _gauss_tail_integrand(scale: float):
    """theta -> exp(-scale^2 / (2 sin^2 theta)), with the removable endpoint
    limit at sin(theta) = 0 defined as 0."""

    half_sq = 0.5 * scale * scale

    def f(theta: float) -> float:
        s = math.sin(theta)
        if s == 0.0:
            return 0.0
        z = half_sq / (s * s)
        return math.exp(-z) if z < 745.0 else 0.0

    return f


def prob_instability_a(case: FirstOrderCase, tol: float = 1e-9) -> float:
    """Probability that controller A fails to stabilize, to absolute
    tolerance tol, via the polar-angle integrals

      (1/2pi) [ int_0^theta* exp(-u^2/(2 sin^2 t)) dt
              + int_{theta*-arctan k}^pi exp(-w^2/(2 sin^2 t)) dt ].

    Quadrature non-convergence propagates as QuadratureError.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    aux = polar_auxiliaries(case)
    tol_each = tol * math.pi
    first = integrate(_gauss_tail_integrand(aux.u), 0.0, aux.theta_star, tol_each)
    second = integrate(
        _gauss_tail_integrand(aux.w),
        aux.theta_star - math.atan(aux.k),
        math.pi,
        tol_each,
    )
    return (first.value + second.value) / (2.0 * math.pi)


def prob_instability_b(case: FirstOrderCase) -> float:
    """Probability that controller B fails to stabilize:
    1/2 - 1/2 erf((K_B q0 - p0)/sqrt(2 (sigma_p^2 + K_B^2 sigma_q^2)))."""
    num = case.k_b * case.q0 - case.p0
    den = math.sqrt(2.0 * (case.sigma_p**2 + case.k_b**2 * case.sigma_q**2))
    return 0.5 - 0.5 * erf(num / den)


def instability_ratio(case: FirstOrderCase, tol: float = 1e-9) -> float:
    """Risk ratio of the two designs: P(A fails) / P(B fails)."""
    return prob_instability_a(case, tol) / prob_instability_b(case)


def sufficient_condition(case: FirstOrderCase) -> bool:
    """True when 1 + (K_B sigma_q/sigma_p)^2 < ((K_B q0 - p0)/(a - p0))^2,
    which guarantees P(A fails) > P(B fails); the converse is not claimed."""
    lhs = 1.0 + (case.k_b * case.sigma_q / case.sigma_p) ** 2
    rhs = ((case.k_b * case.q0 - case.p0) / (case.a - case.p0)) ** 2
    return lhs < rhs


@dataclass(frozen=True)
class BoundaryDataset:
    """Named polylines, each a sequence of (q, p) points, for plotting the
    stability boundaries of both designs over the window
    [q0 - 2r, q0 + 2r] x [p0 - 2r, p0 + 2r]."""

    series: dict[str, list[tuple[float, float]]]

    def iter_rows(self):
        for name, points in self.series.items():
            for q, p in points:
                yield name, q, p


def _linspace(lo: float, hi: float, n: int) -> list[float]:
    if n == 1:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def boundary_dataset(
    case: FirstOrderCase, points_per_segment: int = 64, include_ellipses: bool = True
) -> BoundaryDataset:
    """Sample the stability-boundary lines p = K_B q, p = (K_A/a) q and
    p = a, the closed box perimeter, and (optionally) the 1- and 2-sigma
    Gaussian ellipses."""
    if points_per_segment < 2:
        raise ValueError("points_per_segment must be >= 2")
    n = points_per_segment
    q0, p0, r = case.q0, case.p0, case.r
    q_lo, q_hi = q0 - 2.0 * r, q0 + 2.0 * r
    qs = _linspace(q_lo, q_hi, n)

    series: dict[str, list[tuple[float, float]]] = {
        "stab_boundary_B": [(q, case.k_b * q) for q in qs],
        "stab_boundary_A_gain": [(q, (case.k_a / case.a) * q) for q in qs],
        "stab_boundary_A_pole": [(q, case.a) for q in qs],
    }

    corners = [
        (q0 - r, p0 - r),
        (q0 + r, p0 - r),
        (q0 + r, p0 + r),
        (q0 - r, p0 + r),
        (q0 - r, p0 - r),
    ]
    box: list[tuple[float, float]] = []
    for (x1, y1), (x2, y2) in zip(corners[:-1], corners[1:]):
        ts = _linspace(0.0, 1.0, n)
        if box:
            ts = ts[1:]  # shared corner already emitted
        box.extend((x1 + t * (x2 - x1), y1 + t * (y2 - y1)) for t in ts)
    series["box"] = box

    if include_ellipses:
        for j in (1, 2):
            ring = [
                (
                    q0 + j * case.sigma_q * math.cos(t),
                    p0 + j * case.sigma_p * math.sin(t),
                )
                for t in _linspace(0.0, 2.0 * math.pi, max(n, 16))
            ]
            series[f"sigma_ellipse_{j}"] = ring

    return BoundaryDataset(series)
