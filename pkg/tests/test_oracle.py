"""Tests of the closed-form success/fidelity series and their inversion.

Published table values used here were cross-checked independently before
being frozen; rational-arithmetic identities pin the transcription.
"""

from fractions import Fraction

import numpy as np
import pytest


from qstransfer.oracle import (
    OracleError,
    fidelity,
    m0_swap,
    m0bar,
    m_tilde,
    nominal_success,
    solve_q,
    swap_dip_slope_sign,
)

SCHEMES = ("swap", "teleport", "ghz", "cluster")


@pytest.mark.parametrize("scheme", SCHEMES)
def test_noiseless_limits(scheme):
    assert m0bar(scheme, 0.0, 0.0) == pytest.approx(1.0, abs=1e-14)
    assert fidelity(scheme, 0.0, 0.0) == pytest.approx(1.0, abs=1e-14)
    assert m_tilde(scheme, 0.0, 0.0) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_half_at_completely_depolarizing_rational(scheme):
    """Exact 1/2 at p = 3/4 (q = 0) in rational arithmetic pins every
    coefficient of both series."""
    p = Fraction(3, 4)
    q = Fraction(0)
    assert m0bar(scheme, q, p) == Fraction(1, 2)
    assert fidelity(scheme, q, p) == Fraction(1, 2)


def test_float_path_agrees_with_rational():
    qs = np.linspace(0.0, 1.0, 7)
    ps = np.linspace(0.0, 1.0, 7)
    for scheme in SCHEMES:
        for q in qs:
            for p in ps:
                exact = m0bar(
                    scheme, Fraction(q).limit_denominator(10**6),
                    Fraction(p).limit_denominator(10**6),
                )
                # evaluate the float path at the *same* rational point
                approx = m0bar(
                    scheme,
                    float(Fraction(q).limit_denominator(10**6)),
                    float(Fraction(p).limit_denominator(10**6)),
                )
                assert abs(float(exact) - approx) < 1e-12


def test_ghz_shares_teleport_series():
    for q, p in [(0.0, 0.1), (0.3, 0.4), (0.9, 0.8)]:
        assert m0bar("ghz", q, p) == m0bar("teleport", q, p)
        assert fidelity("ghz", q, p) == fidelity("teleport", q, p)


def test_swap_series_q_independent():
    assert m0bar("swap", 0.0, 0.3) == m0bar("swap", 0.9, 0.3)
    assert fidelity("swap", 0.0, 0.3) == fidelity("swap", 0.9, 0.3)


def test_swap_p0_contour_closed_form():
    for q in (0.0, 0.2, 0.8):
        assert m_tilde("swap", q, 0.0) == pytest.approx(1.0 - 0.5 * q)


def test_teleport_p0_contour():
    """At p = 0 the single-hop series reduces to 1 - q + 3 q^2 / 8."""
    for q in (0.0, 0.1, 0.5, 1.0):
        assert m0bar("teleport", q, 0.0) == pytest.approx(
            1.0 - q + 3.0 * q * q / 8.0, abs=1e-14
        )


def test_nominal_success_wrapper():
    assert nominal_success(0.8, 0.1, kappa=0.5) == pytest.approx(
        0.1 + 0.8 * (1 - 1.5 * 0.1)
    )
    # identity at q = 0
    assert nominal_success(0.8, 0.0) == pytest.approx(0.8)


def test_dip_slope_sign_tracks_two_thirds():
    # near p = 0 the pre-readout success exceeds 2/3: recorded success
    # falls with q; deep depolarizing pushes it below 2/3 and the slope
    # flips sign
    assert swap_dip_slope_sign(0.0) == -1.0
    assert swap_dip_slope_sign(0.6) == 1.0
    for p in (0.05, 0.3, 0.6, 0.9):
        h = 1e-5
        slope = (m_tilde("swap", 0.2 + h, p) - m_tilde("swap", 0.2 - h, p)) / (
            2 * h
        )
        assert np.sign(slope) == swap_dip_slope_sign(p)


def test_solve_q_swap_closed_form():
    assert solve_q("swap", 0.95583) == pytest.approx(0.08834)
    assert solve_q("swap", 1.0) == pytest.approx(0.0)


@pytest.mark.parametrize("scheme", ["teleport", "cluster"])
def test_solve_q_round_trip(scheme):
    for q_true in (0.02, 0.1, 0.3):
        target = m_tilde(scheme, q_true, 0.0)
        assert solve_q(scheme, target) == pytest.approx(q_true, abs=1e-8)


def test_solve_q_rejects_unattainable():
    with pytest.raises(OracleError):
        solve_q("swap", 0.3)
    with pytest.raises(OracleError):
        solve_q("teleport", 0.1)
    with pytest.raises(OracleError):
        solve_q("smoke-signals", 0.9)


def test_unknown_scheme_raises():
    with pytest.raises(OracleError):
        m0bar("morse", 0.1, 0.1)
    with pytest.raises(OracleError):
        fidelity("morse", 0.1, 0.1)


def test_series_monotone_near_origin():
    ps = np.linspace(0.0, 0.1, 11)
    vals = [m0_swap(p) for p in ps]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    fids = [fidelity("cluster", 0.05, p) for p in ps]
    assert all(a > b for a, b in zip(fids, fids[1:]))


def test_surfaces_bounded():
    for scheme in SCHEMES:
        for q in np.linspace(0, 1, 6):
            for p in np.linspace(0, 1, 6):
                assert 0.0 <= m_tilde(scheme, q, p) <= 1.0
                assert 0.0 <= fidelity(scheme, q, p) <= 1.0
