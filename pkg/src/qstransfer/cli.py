"""Command-line interface: sweep, compare, oracle, zne, mitigate, check.

Exit codes: 0 success, 2 configuration error, 3 numerical-invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import engine, mitigation, oracle, sweep
from .circuits import SCHEMES, build_scheme, serialize_circuit, wrap_protocol

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVARIANT = 3


def _floats(text: str) -> tuple:
    return tuple(float(x) for x in text.split(","))


def _ints(text: str) -> tuple:
    return tuple(int(x) for x in text.split(","))


def _add_sweep_args(sub):
    sub.add_argument("--schemes", default=",".join(SCHEMES))
    sub.add_argument("--n-list", default="3")
    sub.add_argument("--p-grid", default="0")
    sub.add_argument("--q-grid", default="0")
    sub.add_argument("--kappa", type=float, default=0.5)
    sub.add_argument("--mode", choices=("exact", "shots"), default="exact")
    sub.add_argument("--shots", type=int, default=1024)
    sub.add_argument(
        "--averaging", choices=("quadrature", "haar"), default=None,
        help="default: quadrature in exact mode, haar in shots mode",
    )
    sub.add_argument("--quad-nodes", type=int, default=16)
    sub.add_argument("--haar-samples", type=int, default=5)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--placement", choices=sorted(engine.POLICIES), default=None)
    sub.add_argument(
        "--readout-mode",
        choices=("flip-channel-approx", "exact-record"),
        default="flip-channel-approx",
    )
    sub.add_argument("--include-fidelity", action="store_true")
    sub.add_argument("--workers", type=int, default=0)
    sub.add_argument("--config", help="JSON file with SweepConfig fields")


def _build_config(args) -> sweep.SweepConfig:
    fields = {
        "schemes": tuple(args.schemes.split(",")),
        "n_list": _ints(args.n_list),
        "p_grid": _floats(args.p_grid),
        "q_grid": _floats(args.q_grid),
        "kappa": args.kappa,
        "mode": args.mode,
        "shots": args.shots,
        "averaging": args.averaging
        or ("quadrature" if args.mode == "exact" else "haar"),
        "quad_nodes": args.quad_nodes,
        "haar_samples": args.haar_samples,
        "seed": args.seed,
        "placement": args.placement,
        "readout_mode": args.readout_mode,
        "include_fidelity": getattr(args, "include_fidelity", False),
        "workers": getattr(args, "workers", 0),
    }
    if args.config:
        with open(args.config) as fh:
            fields.update(json.load(fh))
        for key in ("schemes", "n_list", "p_grid", "q_grid"):
            fields[key] = tuple(fields[key])
    return sweep.SweepConfig(**fields)


def cmd_sweep(args) -> int:
    cfg = _build_config(args)
    if args.dump_circuit:
        for scheme in cfg.schemes:
            for n in cfg.n_list:
                if scheme == "teleport" and n % 2 == 0:
                    continue
                c = wrap_protocol(build_scheme(scheme, n), 0.0, 0.0)
                sys.stdout.write(serialize_circuit(c))
                sys.stdout.write("\n")
        return EXIT_OK
    records, manifest = sweep.run_sweep(cfg)
    if args.output:
        manifest_path = sweep.write_outputs(records, manifest, args.output)
        print(f"wrote {len(records)} records to {args.output}")
        print(f"manifest: {manifest_path}")
    else:
        sys.stdout.write(sweep.records_to_csv(records))
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _build_config(args)
    rows = sweep.compare_schemes(cfg)
    print(sweep.format_compare_table(rows))
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.surface:
        qs = np.linspace(0.0, 1.0, args.grid)
        ps = np.linspace(0.0, 1.0, args.grid)
        records = []
        for scheme in args.schemes.split(","):
            for p in ps:
                for q in qs:
                    records.append(
                        sweep.SurfaceRecord(
                            scheme=scheme,
                            n=3,
                            p=float(p),
                            q=float(q),
                            success_recorded=oracle.m_tilde(
                                scheme, q, p, args.kappa
                            ),
                            success_true=oracle.m0bar(scheme, q, p),
                            fidelity=oracle.fidelity(scheme, q, p),
                        )
                    )
        if args.output:
            manifest = {
                "artifact_version": sweep.ARTIFACT_VERSION,
                "source": "analytic-oracle",
                "record_count": len(records),
            }
            sweep.write_outputs(records, manifest, args.output)
            print(f"wrote {len(records)} oracle records to {args.output}")
        else:
            sys.stdout.write(sweep.records_to_csv(records))
        return EXIT_OK
    for scheme in args.schemes.split(","):
        print(
            f"{scheme}: success={oracle.m_tilde(scheme, args.q, args.p, args.kappa):.12f} "
            f"fidelity={oracle.fidelity(scheme, args.q, args.p):.12f}"
        )
    return EXIT_OK


def cmd_zne(args) -> int:
    spec = engine.NoiseSpec(p=args.p, q=args.q, kappa=args.kappa)
    alphas = _floats(args.alphas)
    pts = mitigation.zne_curve(args.scheme, args.n, spec, alphas)
    fit = mitigation.exp_fit(pts)
    value, err = mitigation.zne_extrapolate(fit)
    for alpha, e in pts:
        print(f"alpha={alpha:g}  E={e:.8f}")
    print(
        f"fit: a={fit.a:.6f} b={fit.b:.6f} c={fit.c:.6f} "
        f"residual={fit.residual:.3e}"
    )
    print(f"E(0) = {value:.6f} +/- {err:.6f}")
    return EXIT_OK


def cmd_mitigate(args) -> int:
    spec = engine.NoiseSpec(p=args.p, q=args.q, kappa=args.kappa)
    reports = []
    for scheme in args.schemes.split(","):
        if scheme == "teleport" and args.n % 2 == 0:
            continue
        circuit = build_scheme(scheme, args.n)
        unmit = engine.averaged_success(circuit, spec).m0_recorded
        pts = mitigation.zne_curve(scheme, args.n, spec, _floats(args.alphas))
        reports.append(
            mitigation.mitigate_pipeline(scheme, args.n, unmit, pts, args.kappa)
        )
    if args.json:
        print(json.dumps([r.row() for r in reports], indent=2))
    else:
        print(mitigation.format_report_table(reports))
    return EXIT_OK


def cmd_check(args) -> int:
    """Fast numerical-invariant audit; exit 3 on any violation."""
    from . import channels as ch

    failures = []

    def expect(name, ok):
        print(f"{'PASS' if ok else 'FAIL'} {name}")
        if not ok:
            failures.append(name)

    for p in (0.0, 0.3, 0.75, 1.0):
        try:
            ch.depolarizing_1q(p)
            ch.depolarizing_2q(p)
            ok = True
        except ch.ChannelError:
            ok = False
        expect(f"kraus completeness p={p}", ok)
    spec0 = engine.NoiseSpec(p=0.0, q=0.0)
    for scheme in SCHEMES:
        c = build_scheme(scheme, 3)
        r = engine.exact_eval(c, spec0, 0.7, 1.9)
        expect(f"zero-noise identity {scheme}", abs(r.m0_recorded - 1) < 1e-12)
    for scheme in ("swap", "teleport", "cluster"):
        c = build_scheme(scheme, 3)
        s = engine.NoiseSpec(p=0.2, q=0.1)
        got = engine.averaged_success(c, s).m0_recorded
        want = oracle.m_tilde(scheme, 0.1, 0.2)
        expect(f"oracle-engine {scheme}", abs(got - want) < 1e-10)
    v, clipped = mitigation.invert_readout(
        ch.apply_readout([0.8, 0.2], ch.ReadoutModel(0.05, 0.1)), 0.05, 0.1
    )
    expect("readout inversion round trip", abs(v[0] - 0.8) < 1e-10)
    return EXIT_INVARIANT if failures else EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qstransfer",
        description="Noisy state-transfer simulation over a linear qubit chain",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("sweep", help="evaluate a (p, q) grid to CSV")
    _add_sweep_args(s)
    s.add_argument("--output", "-o", help="CSV path (stdout if omitted)")
    s.add_argument(
        "--dump-circuit",
        action="store_true",
        help="print the wrapped circuits for the configured schemes and exit",
    )
    s.set_defaults(func=cmd_sweep)

    s = subs.add_parser("compare", help="per-n scheme comparison table")
    _add_sweep_args(s)
    s.set_defaults(func=cmd_compare)

    s = subs.add_parser("oracle", help="closed-form 3-qubit values/surfaces")
    s.add_argument("--schemes", default="swap,teleport,cluster")
    s.add_argument("--p", type=float, default=0.0)
    s.add_argument("--q", type=float, default=0.0)
    s.add_argument("--kappa", type=float, default=0.5)
    s.add_argument("--surface", action="store_true")
    s.add_argument("--grid", type=int, default=41)
    s.add_argument("--output", "-o")
    s.set_defaults(func=cmd_oracle)

    s = subs.add_parser("zne", help="gate-folding curve and extrapolation")
    s.add_argument("--scheme", choices=SCHEMES, default="swap")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--p", type=float, default=0.02)
    s.add_argument("--q", type=float, default=0.05)
    s.add_argument("--kappa", type=float, default=0.5)
    s.add_argument("--alphas", default="1,1.5,2,2.5,3")
    s.set_defaults(func=cmd_zne)

    s = subs.add_parser("mitigate", help="full ZNE + readout pipeline")
    s.add_argument("--schemes", default=",".join(SCHEMES))
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--p", type=float, default=0.02)
    s.add_argument("--q", type=float, default=0.05)
    s.add_argument("--kappa", type=float, default=0.5)
    s.add_argument("--alphas", default="1,1.5,2,2.5,3")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_mitigate)

    s = subs.add_parser("check", help="run the numerical invariant audit")
    s.set_defaults(func=cmd_check)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (sweep.ConfigError, engine.EngineError, oracle.OracleError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
