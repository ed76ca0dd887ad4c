"""Polynomial algebra, closed-loop characteristic polynomials, Hurwitz testing,
and coefficient perturbations that provably break a stabilized loop.

Polynomials are real coefficient sequences in descending powers of s, so a
plant denominator sum(alpha_i * s**(kappa - i)) is stored as
(alpha_0, alpha_1, ..., alpha_kappa) and an index tau points directly at
alpha_tau.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

# Relative threshold below which a Routh pivot (or a polynomial coefficient)
# is treated as zero; marginal stability counts as failure here.
ROUTH_ZERO_REL = 1e-12


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial, coefficients in descending powers of s.

    The zero polynomial is the single coefficient 0; otherwise the leading
    coefficient must be nonzero.
    """

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Sequence[float]):
        cs = tuple(float(c) for c in coeffs)
        if not cs:
            raise ValueError("polynomial needs at least one coefficient")
        if len(cs) > 1 and cs[0] == 0.0:
            raise ValueError("leading coefficient must be nonzero (trim before constructing)")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __call__(self, s: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in self.coeffs:
            acc = acc * s + c
        return acc

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return poly_mul(self, other)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact coefficient convolution; degree(p*q) = degree(p) + degree(q)."""
    if p.is_zero or q.is_zero:
        return Polynomial((0.0,))
    out = [0.0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Polynomial(out)


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    """Coefficient-wise sum, aligned at s^0; exact-zero leading terms trimmed."""
    la, lb = len(p.coeffs), len(q.coeffs)
    n = max(la, lb)
    out = [0.0] * n
    for i, a in enumerate(p.coeffs):
        out[n - la + i] += a
    for i, b in enumerate(q.coeffs):
        out[n - lb + i] += b
    while len(out) > 1 and out[0] == 0.0:
        out.pop(0)
    return Polynomial(out)


@dataclass(frozen=True)
class RationalTF:
    """Proper rational transfer function num/den (both descending powers)."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den.is_zero:
            raise ValueError("denominator must not be the zero polynomial")
        if not self.num.is_zero and self.num.degree > self.den.degree:
            raise ValueError(
                "improper transfer function: requires degree(num) <= degree(den)"
            )

    @classmethod
    def from_coeffs(cls, num: Sequence[float], den: Sequence[float]) -> "RationalTF":
        return cls(Polynomial(num), Polynomial(den))


class CoefficientKind(enum.Enum):
    PLANT_DENOMINATOR = "den"
    PLANT_NUMERATOR = "num"


@dataclass(frozen=True)
class CoefficientIndex:
    """Selects one plant coefficient: denominator alpha_tau (tau >= 1) or
    numerator beta_iota (iota >= 0), indexed in descending powers."""

    kind: CoefficientKind
    index: int

    def __post_init__(self):
        lo = 1 if self.kind is CoefficientKind.PLANT_DENOMINATOR else 0
        if self.index < lo:
            raise ValueError(
                f"{self.kind.value} coefficient index must be >= {lo}, got {self.index}"
            )

    @classmethod
    def denominator(cls, tau: int) -> "CoefficientIndex":
        return cls(CoefficientKind.PLANT_DENOMINATOR, tau)

    @classmethod
    def numerator(cls, iota: int) -> "CoefficientIndex":
        return cls(CoefficientKind.PLANT_NUMERATOR, iota)

    @classmethod
    def parse(cls, text: str) -> "CoefficientIndex":
        """Parse 'den:TAU' or 'num:IOTA' (the CLI --coeff syntax)."""
        try:
            kind_s, idx_s = text.split(":", 1)
            kind = CoefficientKind(kind_s)
            idx = int(idx_s)
        except (ValueError, KeyError):
            raise ValueError(f"expected 'den:TAU' or 'num:IOTA', got {text!r}") from None
        return cls(kind, idx)

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.index}"


def closed_loop_charpoly(controller: RationalTF, plant: RationalTF) -> Polynomial:
    """Characteristic polynomial den_C*den_G + num_C*num_G of the unity
    feedback loop; degree n + kappa, leading coefficient 1 when both
    denominators are monic and the numerator product has lower degree."""
    return poly_add(
        poly_mul(controller.den, plant.den), poly_mul(controller.num, plant.num)
    )


def is_hurwitz(p: Polynomial) -> bool:
    """True iff every root of p has strictly negative real part.

    Routh array test with a relative zero threshold: any first-column entry
    with |entry| <= 1e-12 * max|coeff| is treated as zero, and marginal cases
    are declared unstable. Degree-0 nonzero polynomials are vacuously stable.
    """
    if p.is_zero:
        raise ValueError("zero polynomial has no stability classification")
    c = list(p.coeffs)
    if c[0] < 0.0:
        c = [-x for x in c]
    if len(c) == 1:
        return True
    tol = ROUTH_ZERO_REL * max(abs(x) for x in c)
    # Necessary condition: with positive leading coefficient, every
    # coefficient of a Hurwitz polynomial is strictly positive.
    if any(x <= tol for x in c):
        return False
    row_prev = c[0::2]
    row_cur = c[1::2]
    while row_cur:
        pivot = row_cur[0]
        if pivot <= tol:
            return False
        width = len(row_prev) - 1
        nxt = []
        for j in range(width):
            above = row_prev[j + 1]
            left = row_cur[j + 1] if j + 1 < len(row_cur) else 0.0
            nxt.append((pivot * above - row_prev[0] * left) / pivot)
        row_prev, row_cur = row_cur, nxt
    return True


def _normalized_loop_coeffs(controller: RationalTF, plant: RationalTF):
    """Validate the normalizations the destabilization result relies on and
    unpack coefficient sequences."""
    a = controller.den.coeffs
    b = controller.num.coeffs
    alpha = plant.den.coeffs
    beta = plant.num.coeffs
    if abs(a[0] - 1.0) > 1e-12:
        raise ValueError("controller denominator must be monic (a_0 = 1)")
    if b[0] == 0.0:
        raise ValueError("controller numerator leading coefficient b_0 must be nonzero")
    if alpha[0] <= 0.0:
        raise ValueError("plant denominator leading coefficient must be positive")
    return a, b, alpha, beta


def coefficient_offset(
    controller: RationalTF, plant: RationalTF, which: CoefficientIndex
) -> float:
    """Offset added to the selected plant coefficient inside the closed-loop
    characteristic polynomial, at the plant's current coefficient values.

    For a denominator index tau the coefficient of s^(n+kappa-tau) equals
    alpha_tau + xi; for a numerator index iota the coefficient of
    s^(m+l-iota) equals b_0*beta_iota + zeta.  Returns xi (resp. zeta); both
    are independent of the selected coefficient itself.
    """
    a, b, alpha, beta = _normalized_loop_coeffs(controller, plant)
    n, m = len(a) - 1, len(b) - 1
    kappa, ell = len(alpha) - 1, len(beta) - 1
    idx = which.index
    if which.kind is CoefficientKind.PLANT_DENOMINATOR:
        if not 1 <= idx <= kappa:
            raise ValueError(f"denominator index must satisfy 1 <= tau <= {kappa}, got {idx}")
        xi = sum(a[idx - j] * alpha[j] for j in range(max(0, idx - n), idx))
        sig = idx + (m + ell) - (n + kappa)
        if sig >= 0:
            xi += sum(
                b[i] * beta[sig - i] for i in range(max(0, sig - ell), min(m, sig) + 1)
            )
        return xi
    if not 0 <= idx <= ell:
        raise ValueError(f"numerator index must satisfy 0 <= iota <= {ell}, got {idx}")
    zeta = sum(b[idx - j] * beta[j] for j in range(max(0, idx - m), idx))
    sig = idx + (n + kappa) - (m + ell)
    zeta += sum(
        a[i] * alpha[sig - i] for i in range(max(0, sig - kappa), min(n, sig) + 1)
    )
    return zeta


def substitute_coefficient(
    plant: RationalTF, which: CoefficientIndex, value: float
) -> RationalTF:
    """Copy of the plant with the selected coefficient replaced by value."""
    if which.kind is CoefficientKind.PLANT_DENOMINATOR:
        cs = list(plant.den.coeffs)
        cs[which.index] = value
        return RationalTF(plant.num, Polynomial(cs))
    cs = list(plant.num.coeffs)
    cs[which.index] = value
    return RationalTF(Polynomial(cs), plant.den)


def default_slack(offset: float) -> float:
    """Margin used past the instability threshold when none is given; scaled
    so the certificate survives roundoff at any offset magnitude."""
    return 1e-3 * (1.0 + abs(offset))


def destabilizing_value(
    controller: RationalTF,
    plant: RationalTF,
    which: CoefficientIndex,
    slack: float | None = None,
) -> float:
    """Value for the selected plant coefficient that makes the closed loop
    unstable, all other coefficients held at their current values.

    Drives the corresponding characteristic-polynomial coefficient strictly
    past zero: v = -xi - slack for a denominator index, v = -zeta/b_0 -/+
    slack for a numerator index depending on sign(b_0).  Requires a stable
    nominal loop; slack defaults to 1e-3 * (1 + |offset|).
    """
    _, b, _, _ = _normalized_loop_coeffs(controller, plant)
    if not is_hurwitz(closed_loop_charpoly(controller, plant)):
        raise ValueError("nominal closed loop must be stable")
    offset = coefficient_offset(controller, plant, which)
    if slack is None:
        slack = default_slack(offset)
    if slack <= 0.0:
        raise ValueError("slack must be positive")
    if which.kind is CoefficientKind.PLANT_DENOMINATOR:
        return -offset - slack
    b0 = b[0]
    if b0 > 0.0:
        return -offset / b0 - slack
    return -offset / b0 + slack
