"""Failure-risk bookkeeping over three uncertainty subsets: instances that
are modeled and possible (M), modeled but impossible (N, carries no mass in
any formula here), and possible but unmodeled (E).

A worst-case design covers every modeled instance, so it only fails on E; a
probabilistic design accepts a violation rate inside M and is also exposed
on E.  The ratio of the two failure risks decides which design is safer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "RiskScenario",
    "risk_probabilistic",
    "risk_worstcase",
    "risk_ratio",
    "flat_degradation_ratio",
    "ratio_below_one_certificate",
]


@dataclass(frozen=True)
class RiskScenario:
    """Masses of M and E plus the conditional violation rates of each design.

    The worst-case design has zero violation rate on M by construction, so
    only its rate on E appears.  pr_m + pr_e may be < 1; the remainder is
    mass outside the possible set and is irrelevant to both risks.
    """

    pr_m: float
    pr_e: float
    v_p_given_m: float
    v_p_given_e: float
    v_w_given_e: float

    def __post_init__(self):
        for name in ("pr_m", "pr_e", "v_p_given_m", "v_p_given_e", "v_w_given_e"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"requires 0 <= {name} <= 1, got {val}")
        if self.pr_m + self.pr_e > 1.0 + 1e-12:
            raise ValueError(
                f"requires pr_m + pr_e <= 1, got {self.pr_m} + {self.pr_e}"
            )


def risk_probabilistic(s: RiskScenario) -> float:
    """Violation probability of the probabilistic design:
    v_p|M * Pr(M) + v_p|E * Pr(E)."""
    return s.v_p_given_m * s.pr_m + s.v_p_given_e * s.pr_e


def risk_worstcase(s: RiskScenario) -> float:
    """Violation probability of the worst-case design: v_w|E * Pr(E)."""
    return s.v_w_given_e * s.pr_e


def risk_ratio(s: RiskScenario) -> float:
    """risk_probabilistic / risk_worstcase; +inf when only the worst-case
    risk vanishes, 1 when both vanish (indifference)."""
    num = risk_probabilistic(s)
    den = risk_worstcase(s)
    if den == 0.0:
        return 1.0 if num == 0.0 else math.inf
    return num / den


def flat_degradation_ratio(s: RiskScenario) -> float:
    """Approximate risk ratio v_p|M / (v_w|E * Pr(E)) under the flatness
    assumption v_p|E ~ v_p|M (the rate on E is ignored)."""
    den = s.v_w_given_e * s.pr_e
    if den <= 0.0:
        raise ValueError("requires v_w_given_e * pr_e > 0")
    return s.v_p_given_m / den


def ratio_below_one_certificate(s: RiskScenario, lam: float) -> bool:
    """Sufficient check that the probabilistic design is strictly safer.

    True iff v_p|E / v_w|E <= lam and v_p|M * Pr(M) / Pr(E) <
    (1 - lam) * v_w|E; together these bound the two terms of the exact risk
    ratio below lam and 1 - lam, so True implies risk_ratio(s) < 1.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError(f"requires 0 < lambda < 1, got {lam}")
    if s.pr_e <= 0.0 or s.v_w_given_e <= 0.0:
        raise ValueError("requires pr_e > 0 and v_w_given_e > 0")
    first = s.v_p_given_e / s.v_w_given_e <= lam
    second = s.v_p_given_m * s.pr_m / s.pr_e < (1.0 - lam) * s.v_w_given_e
    return first and second
