"""Tests for gate folding, the exponential extrapolation fit, readout
inversion and the combined mitigation pipeline."""

import math

import numpy as np
import pytest

from qstransfer import mitigation, oracle
from qstransfer.circuits import Unitary, build_scheme
from qstransfer.engine import NoiseSpec, averaged_success
from qstransfer.mitigation import (
    FoldSpec,
    MitigationError,
    estimate_q_from_contour,
    exp_fit,
    fold_circuit,
    invert_readout,
    mitigate_pipeline,
    zne_curve,
    zne_extrapolate,
)


def _cx_count(c):
    return c.count(Unitary, "cx")


def test_fold_identity_at_alpha_one():
    c = build_scheme("swap", 3)
    assert fold_circuit(c, 1.0) is c


def test_fold_triples_gates_at_alpha_three():
    c = build_scheme("swap", 3)
    folded = fold_circuit(c, 3.0)
    assert _cx_count(folded) == 3 * _cx_count(c)


def test_fold_fractional_alpha():
    c = build_scheme("swap", 3)  # 6 foldable CNOTs
    folded = fold_circuit(c, 1.5)  # round(0.5 * 6 / 2) = 2 extra pairs
    assert _cx_count(folded) == 6 + 4
    # extra folds go to the earliest gates: first op appears tripled
    assert folded.ops[0] == folded.ops[1] == folded.ops[2]


def test_fold_covers_h_gates():
    c = build_scheme("cluster", 3)  # 2 cx + 2 h foldable
    folded = fold_circuit(c, 3.0)
    assert _cx_count(folded) == 6
    assert folded.count(Unitary, "h") == 6


def test_fold_skips_boundary_roles():
    from qstransfer.circuits import wrap_protocol

    c = wrap_protocol(build_scheme("swap", 3), 0.3, 0.4)
    folded = fold_circuit(c, 3.0)
    inits = [op for op in folded.ops
             if isinstance(op, Unitary) and op.role is not None]
    assert len(inits) == 2  # initializer and disentangler are not folded


def test_fold_rejects_alpha_below_one():
    with pytest.raises(MitigationError):
        FoldSpec(0.5)


def test_folded_circuit_noiseless_equivalence():
    c = build_scheme("teleport", 3)
    spec = NoiseSpec(p=0.0, q=0.0)
    for alpha in (1.5, 2.0, 3.0):
        r = averaged_success(fold_circuit(c, alpha), spec, 4, 4)
        assert r.m0_true == pytest.approx(1.0, abs=1e-12)


def test_folding_amplifies_noise_monotonically():
    c = build_scheme("swap", 3)
    spec = NoiseSpec(p=0.02, q=0.0)
    vals = [
        averaged_success(fold_circuit(c, a), spec, 4, 4).m0_true
        for a in (1.0, 2.0, 3.0, 4.0)
    ]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_exp_fit_recovers_synthetic_parameters():
    a, b, c = 0.4, 0.9, 0.55
    alphas = [1.0, 1.5, 2.0, 2.5, 3.0, 4.0]
    pts = [(x, a * math.exp(-b * x) + c) for x in alphas]
    fit = exp_fit(pts)
    assert fit.a == pytest.approx(a, abs=1e-6)
    assert fit.b == pytest.approx(b, abs=1e-6)
    assert fit.c == pytest.approx(c, abs=1e-6)
    value, _ = zne_extrapolate(fit)
    assert value == pytest.approx(a + c, abs=1e-6)


def test_exp_fit_degenerate_constant_data():
    fit = exp_fit([(1.0, 0.7), (2.0, 0.7), (3.0, 0.7)])
    assert fit.degenerate
    value, err = zne_extrapolate(fit)
    assert value == pytest.approx(0.7)
    assert err == 0.0


def test_exp_fit_needs_three_alphas():
    with pytest.raises(MitigationError):
        exp_fit([(1.0, 0.5), (1.0, 0.5), (2.0, 0.4)])


def test_invert_readout_round_trip():
    from qstransfer.channels import ReadoutModel, apply_readout

    true = np.array([0.8, 0.2])
    rec = apply_readout(true, ReadoutModel(0.05, 0.1))
    out, clipped = invert_readout(rec, 0.05, 0.1)
    assert not clipped
    assert np.allclose(out, true, atol=1e-12)


def test_invert_readout_clips_overshoot():
    out, clipped = invert_readout([0.99, 0.01], 0.05, 0.1)
    assert clipped
    assert out[0] == pytest.approx(1.0)
    assert out.sum() == pytest.approx(1.0)


def test_invert_readout_near_singular():
    with pytest.raises(MitigationError, match="singular"):
        invert_readout([0.5, 0.5], 0.5, 0.45)


def test_estimate_q_from_contour_matches_closed_form():
    target = oracle.m_tilde("teleport", 0.08, 0.0)
    got = estimate_q_from_contour("teleport", 3, target, grid_size=41)
    assert got == pytest.approx(0.08, abs=5e-4)


def test_zne_curve_shape():
    pts = zne_curve("swap", 3, NoiseSpec(p=0.02, q=0.05), (1.0, 2.0, 3.0),
                    n_theta=4, n_phi=4)
    alphas = [a for a, _ in pts]
    es = [e for _, e in pts]
    assert alphas == [1.0, 2.0, 3.0]
    assert es[0] > es[1] > es[2]


def test_mitigate_pipeline_swap_reaches_unity():
    """The swap chain has no intermediary measurements, so ZNE plus the
    inverse response recovers the ideal value (clipped at the boundary)."""
    spec = NoiseSpec(p=0.02, q=0.05)
    unmit = averaged_success(build_scheme("swap", 3), spec).m0_recorded
    pts = zne_curve("swap", 3, spec)
    report = mitigate_pipeline("swap", 3, unmit, pts)
    assert abs(report.final - 1.0) <= max(2 * report.final_err, 1e-3)
    assert abs(report.final - 1.0) < abs(report.unmitigated - 1.0)
    assert report.q_hat == pytest.approx((1 - unmit) / 0.5, abs=1e-12)


@pytest.mark.parametrize("scheme", ["teleport", "ghz", "cluster"])
def test_mitigate_pipeline_improves(scheme):
    spec = NoiseSpec(p=0.02, q=0.05)
    unmit = averaged_success(build_scheme(scheme, 3), spec).m0_recorded
    pts = zne_curve(scheme, 3, spec)
    report = mitigate_pipeline(scheme, 3, unmit, pts)
    assert abs(report.final - 1.0) < abs(report.unmitigated - 1.0)


def test_report_row_and_table():
    spec = NoiseSpec(p=0.02, q=0.05)
    unmit = averaged_success(build_scheme("swap", 3), spec).m0_recorded
    report = mitigate_pipeline("swap", 3, unmit, zne_curve("swap", 3, spec))
    row = report.row()
    assert row["scheme"] == "swap"
    assert set(row) >= {"unmitigated", "zne", "readout_mitigated", "q_hat"}
    table = mitigation.format_report_table([report])
    assert "swap" in table and "Unmitigated" in table
