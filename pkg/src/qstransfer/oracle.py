"""Closed-form three-qubit success and fidelity series, the inverse
solve for the readout parameter, and interplay diagnostics.

The coefficient tables are exact integer transcriptions; the sign and
power structure is applied at evaluation time so the float and rational
paths share one source of truth.  The tables assume the offset-symmetric
readout ratio kappa = 1/2; the outer success wrapper keeps kappa free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

A_SWAP = (32, 156, 460, 915, 1296, 1344, 1032, 585, 240, 68, 12, 1)

# rows n = 0..10, columns k = 0..2
A_TELEPORT = (
    (6, 4, 1),
    (26, 36, 10),
    (102, 147, 45),
    (239, 359, 120),
    (371, 581, 210),
    (399, 651, 252),
    (301, 511, 210),
    (157, 277, 120),
    (54, 99, 45),
    (11, 21, 10),
    (1, 2, 1),
)
A_CLUSTER = (
    (6, 4, 2),
    (26, 40, 20),
    (105, 180, 90),
    (260, 480, 240),
    (435, 840, 420),
    (510, 1008, 504),
    (421, 840, 420),
    (240, 480, 240),
    (90, 180, 90),
    (20, 40, 20),
    (2, 4, 2),
)

B_SWAP = (29, 127, 333, 582, 714, 630, 402, 183, 57, 11, 1)

# rows n = 0..9, columns k = 0..2
B_TELEPORT = (
    (6, 4, 1),
    (23, 32, 9),
    (79, 115, 36),
    (160, 244, 84),
    (211, 337, 126),
    (188, 314, 126),
    (113, 197, 84),
    (44, 80, 36),
    (10, 19, 9),
    (1, 2, 1),
)
B_CLUSTER = (
    (6, 4, 2),
    (23, 36, 18),
    (82, 144, 72),
    (178, 336, 168),
    (257, 504, 252),
    (253, 504, 252),
    (168, 336, 168),
    (72, 144, 72),
    (18, 36, 18),
    (2, 4, 2),
)

SUCCESS_TABLES = {"teleport": A_TELEPORT, "ghz": A_TELEPORT, "cluster": A_CLUSTER}
FIDELITY_TABLES = {"teleport": B_TELEPORT, "ghz": B_TELEPORT, "cluster": B_CLUSTER}

DEFAULT_KAPPA = 0.5


class OracleError(ValueError):
    """Unknown scheme or an unattainable inversion target."""


@dataclass(frozen=True)
class CoefficientTable:
    """Bundle of the published integer coefficient tables."""

    a_swap: tuple = A_SWAP
    a_teleport: tuple = A_TELEPORT
    a_cluster: tuple = A_CLUSTER
    b_swap: tuple = B_SWAP
    b_teleport: tuple = B_TELEPORT
    b_cluster: tuple = B_CLUSTER
    kappa: float = DEFAULT_KAPPA


def _swap_series(coeffs, p):
    """1 + sum_j (-1)^j c_j 2^(2j-1) 3^-(j+1) p^j, term-compensated."""
    terms = [
        (-1) ** j * c * 2 ** (2 * j - 1) * p**j / 3 ** (j + 1)
        for j, c in enumerate(coeffs, start=1)
    ]
    if isinstance(p, Fraction):
        return 1 + sum(terms)
    return 1.0 + math.fsum(terms)


def _double_series(table, q, p):
    """sum_{n,k} c_{nk} (-1)^(n+k) 2^(2n-k-1) 3^-(n-k+1) q^k p^n."""
    exact = isinstance(p, Fraction) or isinstance(q, Fraction)
    terms = []
    for n, row in enumerate(table):
        for k, c in enumerate(row):
            num = c * (-1) ** (n + k) * q**k * p**n
            e2, e3 = 2 * n - k - 1, n - k + 1
            if exact:
                t = Fraction(num) * Fraction(2) ** e2 / Fraction(3) ** e3
            else:
                t = num * 2.0**e2 * 3.0**-e3
            terms.append(t)
    return sum(terms) if exact else math.fsum(terms)


def m0_swap(p):
    """Bloch-averaged true probability of 0 for the 3-qubit swap chain."""
    return _swap_series(A_SWAP, p)


def nominal_success(m0bar, q, kappa=DEFAULT_KAPPA):
    """Recorded success after the response matrix: q + m0bar(1-(kappa+1)q)."""
    return q + m0bar * (1 - (kappa + 1) * q)


def m0bar(scheme: str, q, p):
    """Pre-readout Bloch-averaged success (inner series) for a scheme."""
    if scheme == "swap":
        return m0_swap(p)
    if scheme not in SUCCESS_TABLES:
        raise OracleError(f"unknown scheme {scheme!r}")
    return _double_series(SUCCESS_TABLES[scheme], q, p)


def m_tilde(scheme: str, q, p, kappa=DEFAULT_KAPPA):
    """Nominal (recorded) success probability surface for a scheme."""
    return nominal_success(m0bar(scheme, q, p), q, kappa)


def fidelity(scheme: str, q, p):
    """Bloch-averaged transfer fidelity series (q ignored for swap)."""
    if scheme == "swap":
        return _swap_series(B_SWAP, p)
    if scheme not in FIDELITY_TABLES:
        raise OracleError(f"unknown scheme {scheme!r}")
    return _double_series(FIDELITY_TABLES[scheme], q, p)


def swap_dip_slope_sign(p: float, kappa=DEFAULT_KAPPA) -> float:
    """Sign of d m_tilde/dq for swap at fixed p: sign(1-(kappa+1) m0bar)."""
    return math.copysign(1.0, 1.0 - (kappa + 1) * m0_swap(p))


def _zero_p_success(scheme: str, q: float, kappa: float) -> float:
    return m_tilde(scheme, q, 0.0, kappa)


def solve_q(
    scheme: str,
    target: float,
    kappa: float = DEFAULT_KAPPA,
    tol: float = 1e-10,
) -> float:
    """Invert the p=0 contour of the success surface for q.

    The contour decreases from 1 at q=0 down to its minimum; only
    targets on that branch are attainable, and the swap contour
    1 - kappa*q inverts in closed form.
    """
    if scheme == "swap":
        qhat = (1.0 - target) / kappa
        if not 0.0 <= qhat <= 1.0:
            raise OracleError(
                f"target {target} outside attainable range "
                f"[{1 - kappa}, 1] for swap"
            )
        return qhat
    if scheme not in SUCCESS_TABLES:
        raise OracleError(f"unknown scheme {scheme!r}")
    grid = [i / 2000 for i in range(2001)]
    vals = [_zero_p_success(scheme, g, kappa) for g in grid]
    imin = min(range(len(vals)), key=vals.__getitem__)
    lo, hi = 0.0, grid[imin]
    if not vals[imin] - tol <= target <= 1.0 + tol:
        raise OracleError(
            f"target {target} outside attainable range "
            f"[{vals[imin]:.6f}, 1] for {scheme}"
        )
    # monotone decreasing on [0, q_min]: plain bisection
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _zero_p_success(scheme, mid, kappa) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
