"""Grid sweeps over (p, q) per scheme and chain length, scheme
comparison tables, Hellinger fidelity, and CSV/manifest emission.

The CSV schema is frozen (header, column order, 12-significant-digit
formatting): it is the contract consumed by the standalone plot
component and must not change without versioning the manifest.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict

import numpy as np

from . import engine
from .circuits import SCHEMES, build_scheme

CSV_COLUMNS = (
    "scheme",
    "n",
    "p",
    "q",
    "success_recorded",
    "success_true",
    "fidelity",
    "stderr",
    "shots",
    "seed",
)

ARTIFACT_VERSION = "0.1.0"


class ConfigError(ValueError):
    """Invalid sweep configuration."""


@dataclass(frozen=True)
class SweepConfig:
    schemes: tuple = SCHEMES
    n_list: tuple = (3,)
    p_grid: tuple = (0.0,)
    q_grid: tuple = (0.0,)
    kappa: float = 0.5
    mode: str = "exact"  # "exact" or "shots"
    shots: int = 1024
    averaging: str = "quadrature"  # "quadrature" or "haar"
    quad_nodes: int = 16
    haar_samples: int = 5
    seed: int = 0
    placement: str | None = None  # policy name; None -> oracle-matched
    readout_mode: str = "flip-channel-approx"
    include_fidelity: bool = False
    workers: int = 0

    def __post_init__(self):
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown:
            raise ConfigError(f"unknown schemes {unknown}")
        if not self.p_grid or not self.q_grid or not self.n_list:
            raise ConfigError("grids and n_list must be non-empty")
        for v in list(self.p_grid) + list(self.q_grid):
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"grid value {v} outside [0, 1]")
        if self.mode not in ("exact", "shots"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == "exact" and max(self.n_list) > engine.DM_QUBIT_CAP:
            raise ConfigError(
                f"exact mode capped at {engine.DM_QUBIT_CAP} qubits"
            )
        if max(self.n_list) > engine.SV_QUBIT_CAP:
            raise ConfigError(f"chains capped at {engine.SV_QUBIT_CAP} qubits")
        if self.averaging not in ("quadrature", "haar"):
            raise ConfigError(f"unknown averaging {self.averaging!r}")
        if self.placement is not None and self.placement not in engine.POLICIES:
            raise ConfigError(f"unknown placement policy {self.placement!r}")

    def noise_spec(self, p: float, q: float) -> engine.NoiseSpec:
        placement = (
            engine.POLICIES[self.placement] if self.placement else None
        )
        return engine.NoiseSpec(
            p=p,
            q=q,
            kappa=self.kappa,
            placement=placement,
            readout_mode=self.readout_mode,
        )


@dataclass(frozen=True)
class SurfaceRecord:
    scheme: str
    n: int
    p: float
    q: float
    success_recorded: float
    success_true: float
    fidelity: float | None = None
    stderr: float | None = None
    shots: int | None = None
    seed: int | None = None


def _grid_points(cfg: SweepConfig):
    idx = 0
    for scheme in cfg.schemes:
        for n in cfg.n_list:
            if scheme == "teleport" and n % 2 == 0:
                continue
            for p in cfg.p_grid:
                for q in cfg.q_grid:
                    yield idx, scheme, n, p, q
                    idx += 1


def _point_seed(master: int, index: int) -> int:
    ss = np.random.SeedSequence(entropy=(master, index))
    return int(ss.generate_state(1)[0])


def _eval_point(args):
    cfg, index, scheme, n, p, q = args
    spec = cfg.noise_spec(p, q)
    circuit = build_scheme(scheme, n)
    if cfg.mode == "exact" and cfg.averaging == "quadrature":
        res = engine.averaged_success(
            circuit, spec, cfg.quad_nodes, cfg.quad_nodes
        )
        fid = (
            engine.averaged_fidelity(
                circuit, spec, cfg.quad_nodes, cfg.quad_nodes
            )
            if cfg.include_fidelity
            else None
        )
        return SurfaceRecord(
            scheme, n, p, q, res.m0_recorded, res.m0_true, fidelity=fid
        )
    seed = _point_seed(cfg.seed, index)
    angles = haar_sample(seed, cfg.haar_samples)
    rng = np.random.default_rng(seed + 1)
    if cfg.mode == "exact":
        rec = []
        true = []
        for theta, phi in angles:
            r = engine.exact_eval(circuit, spec, theta, phi)
            rec.append(r.m0_recorded)
            true.append(r.m0_true)
        stderr = (
            float(np.std(rec, ddof=1) / math.sqrt(len(rec)))
            if len(rec) > 1
            else 0.0
        )
        return SurfaceRecord(
            scheme,
            n,
            p,
            q,
            float(np.mean(rec)),
            float(np.mean(true)),
            stderr=stderr,
            seed=seed,
        )
    rec = []
    true = []
    for theta, phi in angles:
        r = engine.sample_shots(
            circuit, spec, theta, phi, cfg.shots, int(rng.integers(2**63))
        )
        rec.append(r.m0_recorded)
        true.append(r.m0_true)
    if len(rec) > 1:
        stderr = float(np.std(rec, ddof=1) / math.sqrt(len(rec)))
    else:
        m = rec[0]
        stderr = math.sqrt(max(m * (1 - m), 0.0) / cfg.shots)
    return SurfaceRecord(
        scheme,
        n,
        p,
        q,
        float(np.mean(rec)),
        float(np.mean(true)),
        stderr=stderr,
        shots=cfg.shots,
        seed=seed,
    )


def run_sweep(cfg: SweepConfig):
    """Evaluate every grid point; returns (records, manifest dict).

    Points are independent: with ``workers > 0`` they are dispatched to
    a process pool and merged back in deterministic grid order, so the
    parallel record set is identical to the serial one.
    """
    start = time.time()
    tasks = [
        (cfg, index, scheme, n, p, q)
        for index, scheme, n, p, q in _grid_points(cfg)
    ]
    if cfg.workers > 0:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_eval_point, tasks, chunksize=8))
    else:
        records = [_eval_point(t) for t in tasks]
    placement = {
        scheme: engine.ORACLE_MATCHED_PLACEMENT[scheme].name
        if cfg.placement is None
        else cfg.placement
        for scheme in cfg.schemes
    }
    manifest = {
        "artifact_version": ARTIFACT_VERSION,
        "config": asdict(cfg),
        "placement_policy": placement,
        "record_count": len(records),
        "wall_time_s": round(time.time() - start, 3),
    }
    return records, manifest


def compare_schemes(cfg: SweepConfig):
    """Per-(n, scheme) mean success with standard error over the
    averaging repetitions, as a list of row dicts."""
    rows = []
    for n in cfg.n_list:
        for scheme in cfg.schemes:
            if scheme == "teleport" and n % 2 == 0:
                continue
            sub = SweepConfig(
                schemes=(scheme,),
                n_list=(n,),
                p_grid=cfg.p_grid,
                q_grid=cfg.q_grid,
                kappa=cfg.kappa,
                mode=cfg.mode,
                shots=cfg.shots,
                averaging=cfg.averaging,
                quad_nodes=cfg.quad_nodes,
                haar_samples=cfg.haar_samples,
                seed=cfg.seed,
                placement=cfg.placement,
                readout_mode=cfg.readout_mode,
            )
            records, _ = run_sweep(sub)
            mean = float(np.mean([r.success_recorded for r in records]))
            err = float(np.mean([r.stderr or 0.0 for r in records]))
            rows.append(
                {"n": n, "scheme": scheme, "success": mean, "stderr": err}
            )
    return rows


def format_compare_table(rows) -> str:
    lines = [f"{'n':>3} {'scheme':<10} {'success':>14} {'stderr':>12}"]
    for r in rows:
        lines.append(
            f"{r['n']:>3} {r['scheme']:<10} {r['success']:>14.8f} "
            f"{r['stderr']:>12.3e}"
        )
    return "\n".join(lines)


# --- metrics ---------------------------------------------------------------


def hellinger_fidelity(p_counts, q_counts) -> float:
    """(sum_i sqrt(p_i q_i))^2 between two counts distributions.

    Counts are normalized internally; keys missing on one side count as
    zero.  Equals the quantum state fidelity for diagonal densities.
    """
    if isinstance(p_counts, dict) or isinstance(q_counts, dict):
        keys = set(p_counts) | set(q_counts)
        pv = np.array([float(p_counts.get(k, 0.0)) for k in sorted(keys)])
        qv = np.array([float(q_counts.get(k, 0.0)) for k in sorted(keys)])
    else:
        pv = np.asarray(p_counts, dtype=float)
        qv = np.asarray(q_counts, dtype=float)
    if pv.sum() <= 0 or qv.sum() <= 0:
        raise ValueError("empty counts distribution")
    pv = pv / pv.sum()
    qv = qv / qv.sum()
    return float(np.sum(np.sqrt(pv * qv)) ** 2)


def haar_sample(seed: int, count: int) -> np.ndarray:
    """Uniform Bloch-sphere samples as (count, 2) rows of (theta, phi)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    phis = rng.uniform(0.0, 2.0 * math.pi, size=count)
    thetas = np.arccos(rng.uniform(-1.0, 1.0, size=count))
    return np.stack([thetas, phis], axis=1)


# --- CSV / manifest --------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [
                r.scheme,
                r.n,
                _fmt(r.p),
                _fmt(r.q),
                _fmt(r.success_recorded),
                _fmt(r.success_true),
                _fmt(r.fidelity),
                _fmt(r.stderr),
                _fmt(r.shots),
                _fmt(r.seed),
            ]
        )
    return buf.getvalue()


def csv_to_records(text: str):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ConfigError(f"unexpected CSV header {header}")
    out = []
    for row in reader:
        if not row:
            continue
        out.append(
            SurfaceRecord(
                scheme=row[0],
                n=int(row[1]),
                p=float(row[2]),
                q=float(row[3]),
                success_recorded=float(row[4]),
                success_true=float(row[5]),
                fidelity=float(row[6]) if row[6] else None,
                stderr=float(row[7]) if row[7] else None,
                shots=int(row[8]) if row[8] else None,
                seed=int(row[9]) if row[9] else None,
            )
        )
    return out


def write_outputs(records, manifest, csv_path) -> str:
    """Write the CSV and its side-by-side JSON manifest."""
    csv_path = str(csv_path)
    with open(csv_path, "w") as fh:
        fh.write(records_to_csv(records))
    manifest_path = csv_path.rsplit(".", 1)[0] + ".manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest_path
