"""Tests of sweep configuration, the CSV/manifest contract, Haar
sampling and the Hellinger metric."""

import dataclasses
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qstransfer import sweep
from qstransfer.sweep import (
    CSV_COLUMNS,
    ConfigError,
    SurfaceRecord,
    SweepConfig,
    compare_schemes,
    csv_to_records,
    haar_sample,
    hellinger_fidelity,
    records_to_csv,
    run_sweep,
    write_outputs,
)

SMALL = SweepConfig(
    schemes=("swap", "cluster"),
    n_list=(3,),
    p_grid=(0.0, 0.1),
    q_grid=(0.0, 0.2),
)


def test_config_validation():
    with pytest.raises(ConfigError, match="unknown schemes"):
        SweepConfig(schemes=("swap", "osmosis"))
    with pytest.raises(ConfigError, match="outside"):
        SweepConfig(p_grid=(0.0, 1.5))
    with pytest.raises(ConfigError, match="non-empty"):
        SweepConfig(p_grid=())
    with pytest.raises(ConfigError, match="mode"):
        SweepConfig(mode="approximate")
    with pytest.raises(ConfigError, match="capped"):
        SweepConfig(n_list=(9,), mode="exact")
    with pytest.raises(ConfigError, match="placement"):
        SweepConfig(placement="everywhere")


def test_grid_skips_even_teleport():
    cfg = SweepConfig(
        schemes=("teleport", "cluster"), n_list=(3, 4), p_grid=(0.0,),
        q_grid=(0.0,),
    )
    records, manifest = run_sweep(cfg)
    combos = {(r.scheme, r.n) for r in records}
    assert ("teleport", 4) not in combos
    assert ("cluster", 4) in combos
    assert manifest["record_count"] == len(records) == 3


def test_exact_sweep_matches_engine():
    records, _ = run_sweep(SMALL)
    from qstransfer import engine
    from qstransfer.circuits import build_scheme

    for r in records:
        want = engine.averaged_success(
            build_scheme(r.scheme, r.n), SMALL.noise_spec(r.p, r.q)
        )
        assert r.success_recorded == pytest.approx(want.m0_recorded, abs=1e-14)
        assert r.success_true == pytest.approx(want.m0_true, abs=1e-14)


def test_csv_header_frozen():
    assert CSV_COLUMNS == (
        "scheme", "n", "p", "q", "success_recorded", "success_true",
        "fidelity", "stderr", "shots", "seed",
    )
    text = records_to_csv([])
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)


def test_csv_round_trip_exact():
    records, _ = run_sweep(
        dataclasses.replace(SMALL, mode="shots", shots=64, averaging="haar")
    )
    text = records_to_csv(records)
    back = csv_to_records(text)
    assert len(back) == len(records)
    for a, b in zip(records, back):
        assert a.scheme == b.scheme and a.n == b.n
        assert a.p == b.p and a.q == b.q
        # 12 significant digits round-trip cleanly at these magnitudes
        assert b.success_recorded == pytest.approx(
            a.success_recorded, abs=1e-11
        )
        assert b.shots == a.shots and b.seed == a.seed


def test_csv_rejects_foreign_header():
    with pytest.raises(ConfigError, match="header"):
        csv_to_records("a,b,c\n1,2,3\n")


def test_sweep_deterministic_across_runs():
    cfg = dataclasses.replace(SMALL, mode="shots", shots=128, averaging="haar")
    r1, _ = run_sweep(cfg)
    r2, _ = run_sweep(cfg)
    assert records_to_csv(r1) == records_to_csv(r2)


def test_seed_changes_shots_results():
    cfg = dataclasses.replace(SMALL, mode="shots", shots=128, averaging="haar")
    r1, _ = run_sweep(cfg)
    r2, _ = run_sweep(dataclasses.replace(cfg, seed=99))
    assert records_to_csv(r1) != records_to_csv(r2)


def test_parallel_equals_serial():
    cfg = dataclasses.replace(SMALL, mode="shots", shots=64, averaging="haar")
    serial, _ = run_sweep(cfg)
    parallel, _ = run_sweep(dataclasses.replace(cfg, workers=2))
    assert records_to_csv(serial) == records_to_csv(parallel)


def test_manifest_contents(tmp_path):
    records, manifest = run_sweep(SMALL)
    path = tmp_path / "surface.csv"
    manifest_path = write_outputs(records, manifest, path)
    assert manifest_path.endswith(".manifest.json")
    with open(manifest_path) as fh:
        loaded = json.load(fh)
    assert loaded["artifact_version"] == sweep.ARTIFACT_VERSION
    assert loaded["record_count"] == len(records)
    assert loaded["config"]["schemes"] == ["swap", "cluster"]
    assert set(loaded["placement_policy"]) == {"swap", "cluster"}
    # the CSV beside it parses back
    back = csv_to_records(path.read_text())
    assert len(back) == len(records)


def test_compare_schemes_rows():
    rows = compare_schemes(
        SweepConfig(n_list=(3,), p_grid=(0.05,), q_grid=(0.05,))
    )
    assert [r["scheme"] for r in rows] == list(
        ("swap", "teleport", "ghz", "cluster")
    )
    assert all(0.0 < r["success"] < 1.0 for r in rows)


def test_haar_sample_ranges_and_determinism():
    pts = haar_sample(123, 500)
    assert pts.shape == (500, 2)
    assert (pts[:, 0] >= 0).all() and (pts[:, 0] <= np.pi).all()
    assert (pts[:, 1] >= 0).all() and (pts[:, 1] <= 2 * np.pi).all()
    assert np.array_equal(pts, haar_sample(123, 500))
    # cos(theta) should be roughly uniform on [-1, 1]
    assert abs(np.mean(np.cos(pts[:, 0]))) < 0.1
    with pytest.raises(ValueError):
        haar_sample(1, 0)


def test_hellinger_identities():
    p = {"00": 30, "01": 10, "11": 60}
    assert hellinger_fidelity(p, p) == pytest.approx(1.0)
    assert hellinger_fidelity({"0": 1}, {"1": 1}) == 0.0
    # symmetric and normalization-invariant
    q = {"00": 50, "11": 50}
    assert hellinger_fidelity(p, q) == pytest.approx(hellinger_fidelity(q, p))
    assert hellinger_fidelity(p, q) == pytest.approx(
        hellinger_fidelity(p, {"00": 5, "11": 5})
    )
    # array form agrees with dict form
    assert hellinger_fidelity([3, 1, 0, 6], [5, 0, 0, 5]) == pytest.approx(
        hellinger_fidelity(
            {"00": 3, "01": 1, "11": 6}, {"00": 5, "11": 5}
        )
    )


def test_hellinger_two_outcome_closed_form():
    m, r = 0.7, 1.0
    got = hellinger_fidelity([m, 1 - m], [r, 1 - r])
    assert got == pytest.approx(m)


@given(
    st.lists(st.floats(0.0, 100.0), min_size=2, max_size=6).filter(
        lambda v: sum(v) > 0
    ),
    st.data(),
)
def test_hellinger_bounds_and_symmetry(p_counts, data):
    q_counts = data.draw(
        st.lists(
            st.floats(0.0, 100.0),
            min_size=len(p_counts),
            max_size=len(p_counts),
        ).filter(lambda v: sum(v) > 0)
    )
    f = hellinger_fidelity(p_counts, q_counts)
    assert -1e-12 <= f <= 1.0 + 1e-12
    assert f == pytest.approx(hellinger_fidelity(q_counts, p_counts))


def test_hellinger_rejects_empty():
    with pytest.raises(ValueError):
        hellinger_fidelity({}, {"0": 1})


def test_surface_record_optional_fields():
    r = SurfaceRecord("swap", 3, 0.1, 0.2, 0.9, 0.91)
    assert r.fidelity is None and r.stderr is None
    text = records_to_csv([r])
    line = text.splitlines()[1]
    assert line == "swap,3,0.1,0.2,0.9,0.91,,,,"
