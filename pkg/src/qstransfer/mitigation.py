"""Zero-noise extrapolation by gate folding, readout response inversion,
and the combined ZNE -> q-extrapolation -> inverse-response pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import engine, oracle
from .circuits import Circuit, Unitary, build_scheme

DEFAULT_FOLDABLE = frozenset({"cx", "h"})


class MitigationError(ValueError):
    """Invalid fold factor, degenerate fit input, or singular response."""


@dataclass(frozen=True)
class FoldSpec:
    """Gate-folding request: scale the foldable-gate count by alpha.

    Integer odd alpha folds every foldable gate (alpha-1)/2 times;
    fractional alpha assigns the extra folds to the earliest foldable
    gates in program order, deterministically.
    """

    alpha: float
    gates: frozenset = DEFAULT_FOLDABLE

    def __post_init__(self):
        if self.alpha < 1.0:
            raise MitigationError(f"alpha={self.alpha} must be >= 1")


def fold_circuit(c: Circuit, spec: FoldSpec | float) -> Circuit:
    """Replace each foldable gate G by G (G^dag G)^k.

    The fold targets are self-inverse (CNOT, H by default) so the folded
    circuit is unitarily equivalent to the original at zero noise.
    """
    if isinstance(spec, (int, float)):
        spec = FoldSpec(float(spec))
    foldable = [
        i
        for i, op in enumerate(c.ops)
        if isinstance(op, Unitary) and op.gate in spec.gates and op.role is None
    ]
    count = len(foldable)
    if count == 0 or spec.alpha == 1.0:
        return c
    total_folds = round((spec.alpha - 1.0) * count / 2.0)
    base, extra = divmod(total_folds, count)
    ops = []
    for i, op in enumerate(c.ops):
        ops.append(op)
        if i in foldable:
            k = base + (1 if foldable.index(i) < extra else 0)
            ops.extend([op, op] * k)
    return replace(c, ops=tuple(ops))


@dataclass
class ExpFit:
    """Least-squares fit of E(alpha) = a exp(-b alpha) + c."""

    a: float
    b: float
    c: float
    residual: float
    cov_diag: tuple = (0.0, 0.0, 0.0)
    cov_ac: float = 0.0
    degenerate: bool = False


def _linear_solve(alphas, es, ws, b):
    basis = np.exp(-b * alphas)
    design = np.stack([basis, np.ones_like(alphas)], axis=1)
    wsqrt = np.sqrt(ws)
    sol, *_ = np.linalg.lstsq(design * wsqrt[:, None], es * wsqrt, rcond=None)
    resid = float(np.sum(ws * (design @ sol - es) ** 2))
    return sol[0], sol[1], resid


def exp_fit(points, b_max: float = 10.0) -> ExpFit:
    """Variable-projection fit: scan + golden-section refine the decay
    rate, solving the linear (a, c) subproblem in closed form at each b.

    ``points`` is a sequence of (alpha, E) or (alpha, E, weight).
    """
    pts = [tuple(p) for p in points]
    if len({p[0] for p in pts}) < 3:
        raise MitigationError("need at least 3 distinct alpha values")
    alphas = np.array([p[0] for p in pts], dtype=float)
    es = np.array([p[1] for p in pts], dtype=float)
    ws = np.array([p[2] if len(p) > 2 else 1.0 for p in pts], dtype=float)

    if np.ptp(es) < 1e-14:
        return ExpFit(0.0, 0.0, float(np.mean(es)), 0.0, degenerate=True)

    bs = np.linspace(0.0, b_max, 401)
    resids = [_linear_solve(alphas, es, ws, b)[2] for b in bs]
    i = int(np.argmin(resids))
    lo = bs[max(i - 1, 0)]
    hi = bs[min(i + 1, len(bs) - 1)]
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    x1, x2 = hi - gr * (hi - lo), lo + gr * (hi - lo)
    f1 = _linear_solve(alphas, es, ws, x1)[2]
    f2 = _linear_solve(alphas, es, ws, x2)[2]
    for _ in range(80):
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - gr * (hi - lo)
            f1 = _linear_solve(alphas, es, ws, x1)[2]
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + gr * (hi - lo)
            f2 = _linear_solve(alphas, es, ws, x2)[2]
    b = 0.5 * (lo + hi)
    a, c, resid = _linear_solve(alphas, es, ws, b)

    # covariance from the Jacobian at the optimum
    basis = np.exp(-b * alphas)
    jac = np.stack([basis, -a * alphas * basis, np.ones_like(alphas)], axis=1)
    jtj = jac.T @ (ws[:, None] * jac)
    dof = max(len(pts) - 3, 1)
    try:
        cov = np.linalg.pinv(jtj) * (resid / dof if len(pts) > 3 else resid)
    except np.linalg.LinAlgError:
        cov = np.zeros((3, 3))
    return ExpFit(
        float(a),
        float(b),
        float(c),
        resid,
        cov_diag=tuple(np.diag(cov)),
        cov_ac=float(cov[0, 2]),
    )


def zne_extrapolate(fit: ExpFit) -> tuple[float, float]:
    """Zero-noise limit E(0) = a + c with propagated uncertainty."""
    if fit.degenerate:
        return fit.c, 0.0
    var = fit.cov_diag[0] + fit.cov_diag[2] + 2.0 * fit.cov_ac
    return fit.a + fit.c, math.sqrt(max(var, 0.0))


def invert_readout(recorded, q0: float, q1: float):
    """Apply the inverse response matrix; clip-and-renormalize if the
    algebraic inverse overshoots [0, 1].  Returns (probs, clipped)."""
    scale = 1.0 - q0 - q1
    if scale < 0.1:
        raise MitigationError(
            f"response matrix near-singular: 1 - q0 - q1 = {scale:.3f} < 0.1"
        )
    v = np.asarray(recorded, dtype=float)
    inv = np.array([[1.0 - q1, -q1], [-q0, 1.0 - q0]]) / scale
    out = inv @ v
    clipped = bool(out.min() < 0.0 or out.max() > 1.0)
    if clipped:
        out = np.clip(out, 0.0, 1.0)
        s = out.sum()
        if s > 0:
            out = out / s
    return out, clipped


def estimate_q_from_contour(
    scheme: str,
    n: int,
    target: float,
    kappa: float = oracle.DEFAULT_KAPPA,
    grid_size: int = 101,
) -> float:
    """Numeric q-extrapolation for chains without a closed-form series:
    interpolate the engine's p=0 success contour with a monotone cubic
    and invert its decreasing branch."""
    circuit = build_scheme(scheme, n)
    qs = np.linspace(0.0, 1.0, grid_size)
    vals = np.array(
        [
            engine.averaged_success(
                circuit, engine.NoiseSpec(p=0.0, q=q, kappa=kappa)
            ).m0_recorded
            for q in qs
        ]
    )
    imin = int(np.argmin(vals))
    qs, vals = qs[: imin + 1], vals[: imin + 1]
    if not vals[-1] - 1e-9 <= target <= vals[0] + 1e-9:
        raise MitigationError(
            f"target {target} outside the contour range "
            f"[{vals[-1]:.6f}, {vals[0]:.6f}]"
        )
    interp = PchipInterpolator(qs, vals)
    lo, hi = 0.0, float(qs[-1])
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if interp(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class MitigationReport:
    """All intermediates of one mitigation run, one table row."""

    scheme: str
    n: int
    unmitigated: float
    q_hat: float
    fit: ExpFit
    e_zne: float
    zne_err: float
    final: float
    final_err: float
    clipped: bool

    def row(self) -> dict:
        return {
            "scheme": self.scheme,
            "n": self.n,
            "unmitigated": self.unmitigated,
            "zne": self.e_zne,
            "zne_err": self.zne_err,
            "readout_mitigated": self.final,
            "readout_mitigated_err": self.final_err,
            "q_hat": self.q_hat,
            "clipped": self.clipped,
        }


def mitigate_pipeline(
    scheme: str,
    n: int,
    unmitigated: float,
    zne_points,
    kappa: float = oracle.DEFAULT_KAPPA,
) -> MitigationReport:
    """ZNE then approximate readout inversion.

    The effective accumulated readout parameter is read off the p=0
    contour at the unmitigated value (closed form at n=3, numeric
    contour inversion otherwise), then the inverse response matrix is
    applied to the extrapolated zero-noise value.
    """
    if n == 3:
        q_hat = oracle.solve_q(scheme, unmitigated, kappa)
    else:
        q_hat = estimate_q_from_contour(scheme, n, unmitigated, kappa)
    fit = exp_fit(zne_points)
    e_zne, zne_err = zne_extrapolate(fit)
    probs, clipped = invert_readout(
        [e_zne, 1.0 - e_zne], kappa * q_hat, q_hat
    )
    scale = 1.0 - (kappa + 1.0) * q_hat
    final_err = zne_err / scale if scale > 0 else zne_err
    return MitigationReport(
        scheme=scheme,
        n=n,
        unmitigated=unmitigated,
        q_hat=q_hat,
        fit=fit,
        e_zne=e_zne,
        zne_err=zne_err,
        final=float(probs[0]),
        final_err=final_err,
        clipped=clipped,
    )


def zne_curve(
    scheme: str,
    n: int,
    spec: engine.NoiseSpec,
    alphas=(1.0, 1.5, 2.0, 2.5, 3.0),
    n_theta: int = 16,
    n_phi: int = 16,
):
    """Engine-generated (alpha, E) points for a scheme under one spec."""
    base = build_scheme(scheme, n)
    pts = []
    for alpha in alphas:
        folded = fold_circuit(base, FoldSpec(alpha))
        res = engine.averaged_success(folded, spec, n_theta, n_phi)
        pts.append((alpha, res.m0_recorded))
    return pts


def format_report_table(reports) -> str:
    """Plain-text table mirroring (scheme, unmitigated, ZNE, readout)."""
    lines = [
        f"{'Scheme':<10} {'n':>2} {'Unmitigated':>12} "
        f"{'ZNE value':>20} {'Readout mitigated':>20}"
    ]
    for r in reports:
        lines.append(
            f"{r.scheme:<10} {r.n:>2} {r.unmitigated:>12.5f} "
            f"{r.e_zne:>12.5f} +/- {r.zne_err:.5f} "
            f"{r.final:>12.5f} +/- {r.final_err:.5f}"
        )
    return "\n".join(lines)
