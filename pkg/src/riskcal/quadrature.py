"""Error function and deterministic adaptive quadrature on finite intervals.

The integrator bisects adaptively, scoring each panel with an embedded
Gauss(7)/Kronrod(15) pair.  All Kronrod nodes are interior, so integrands
with removable endpoint singularities (defined to be 0 at the endpoint) are
never evaluated there.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

__all__ = ["erf", "integrate", "QuadratureResult", "QuadratureError"]

# 15-point Kronrod abscissae on [-1, 1] (nonnegative half; symmetric) and
# weights, with the embedded 7-point Gauss weights on the shared nodes.
_XGK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
)
_WGK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)


class QuadratureError(RuntimeError):
    """Raised when the requested tolerance cannot be certified within the
    evaluation budget; never returns a silently wrong value instead."""


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def erf(x: float) -> float:
    """Gauss error function (2/sqrt(pi)) * integral of exp(-t^2) from 0 to x.

    Delegates to the C library's rational/continued-fraction implementation
    (error well below 1e-13 absolute), evaluated on |x| and mirrored so that
    erf(-x) == -erf(x) holds exactly.
    """
    if not math.isfinite(x):
        raise ValueError(f"erf requires finite input, got {x!r}")
    return math.copysign(math.erf(abs(x)), x) if x != 0.0 else 0.0


def _gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """Kronrod-15 estimate on [a, b] and |K15 - G7| error score."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fk = 0.0
    fg = 0.0
    for i, x in enumerate(_XGK):
        if x == 0.0:
            y = f(mid)
            if not math.isfinite(y):
                raise QuadratureError(f"integrand returned non-finite value at {mid!r}")
            fk += _WGK[i] * y
            fg += _WG[3] * y
            continue
        y1 = f(mid - half * x)
        y2 = f(mid + half * x)
        if not (math.isfinite(y1) and math.isfinite(y2)):
            raise QuadratureError("integrand returned non-finite value")
        fk += _WGK[i] * (y1 + y2)
        if i % 2 == 1:
            fg += _WG[i // 2] * (y1 + y2)
    return fk * half, abs(fk - fg) * abs(half)


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-9,
    max_evaluations: int = 10**6,
) -> QuadratureResult:
    """Adaptive bisection integral of f over [lo, hi] to absolute tolerance.

    Deterministic for fixed inputs.  Raises QuadratureError if the error
    estimate cannot be brought under tol within max_evaluations integrand
    calls.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("integration limits must be finite")
    if lo > hi:
        raise ValueError(f"requires lo <= hi, got lo={lo!r} > hi={hi!r}")
    if lo == hi:
        return QuadratureResult(0.0, 0.0, 0)

    # Initial split damps node aliasing on integrands with flat dead zones.
    n0 = 8
    evaluations = 0
    heap: list[tuple[float, int, float, float, float, float]] = []
    tick = 0
    total_err = 0.0
    edges = [lo + (hi - lo) * i / n0 for i in range(n0 + 1)]
    for a, b in zip(edges[:-1], edges[1:]):
        val, err = _gk15(f, a, b)
        evaluations += 15
        total_err += err
        heapq.heappush(heap, (-err, tick, a, b, val, err))
        tick += 1

    while total_err > tol:
        if evaluations + 30 > max_evaluations:
            raise QuadratureError(
                f"tolerance {tol:g} not reached within {max_evaluations} evaluations "
                f"(error estimate {total_err:g})"
            )
        _, _, a, b, val, err = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            # Panel is at floating-point resolution; its score cannot improve.
            raise QuadratureError(
                f"tolerance {tol:g} not reachable: panel [{a!r}, {b!r}] cannot be split "
                f"(error estimate {total_err:g})"
            )
        lval, lerr = _gk15(f, a, mid)
        rval, rerr = _gk15(f, mid, b)
        evaluations += 30
        total_err += lerr + rerr - err
        heapq.heappush(heap, (-lerr, tick, a, mid, lval, lerr))
        tick += 1
        heapq.heappush(heap, (-rerr, tick, mid, b, rval, rerr))
        tick += 1
        # Running error drifts by rounding; refresh before declaring success.
        if total_err <= tol:
            total_err = math.fsum(item[5] for item in heap)

    value = math.fsum(item[4] for item in heap)
    return QuadratureResult(value, total_err, evaluations)
