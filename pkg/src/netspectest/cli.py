"""Command-line entry point: ``netspectest <command> ...``.

Commands: ``test`` (two groups), ``anova`` (several groups), ``simulate``
(rejection-rate curves), ``sweep`` (binarization threshold sweep) and
``calibrate`` (null distribution of the statistic). Results are JSON on
stdout; ``--out`` additionally writes CSV.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from netspectest import fileio, montecarlo, simharness


def _common(p: argparse.ArgumentParser, estimator_default="avg"):
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--q", type=int, default=1000, help="Monte Carlo sign diagonals per test")
    p.add_argument("--estimator", choices=montecarlo.ESTIMATORS, default=estimator_default)
    p.add_argument("--k", type=int, default=None, help="communities for the sbm estimator")
    p.add_argument("--c", type=float, default=1.0, help="neighborhood constant for mnbs")
    p.add_argument("--weighted", action="store_true", help="weighted networks (variance estimators)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None, help="also write CSV here")
    p.add_argument("--json", action="store_true", help="include per-iteration statistics in the JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netspectest", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="two-sample test from two group manifests")
    p.add_argument("manifest1", type=Path)
    p.add_argument("manifest2", type=Path)
    _common(p)

    p = sub.add_parser("anova", help="multi-sample test from several group manifests")
    p.add_argument("manifests", type=Path, nargs="+")
    _common(p)
    p.add_argument("--pairs", choices=("ordered", "unordered"), default="ordered")

    p = sub.add_parser("simulate", help="rejection-rate curves for a simulation design")
    p.add_argument("--spec", type=Path, default=None, help="experiment spec as JSON")
    p.add_argument("--experiment", default="sbm")
    p.add_argument("--full-scale", action="store_true", help="n up to 1000 and 5000 replicates")
    p.add_argument("--n-grid", type=str, default=None, help="comma-separated node counts")
    p.add_argument("--m-grid", type=str, default=None, help="comma-separated sample sizes")
    p.add_argument("--replicates", type=int, default=None)
    p.add_argument("--sparsity", type=float, default=None)
    p.add_argument("--workers", type=int, default=1)
    _common(p, estimator_default=None)

    p = sub.add_parser("sweep", help="binary tests across binarization thresholds")
    p.add_argument("manifest1", type=Path)
    p.add_argument("manifest2", type=Path, nargs="?", default=None,
                   help="omit to run the half-subsample null protocol on manifest1")
    p.add_argument("--thresholds", type=str, default="0.1,0.2,0.3,0.4,0.5,0.6")
    p.add_argument("--estimators", type=str, default="avg,sbm")
    p.add_argument("--replicates", type=int, default=1000, help="subsamples for the null protocol")
    _common(p)

    p = sub.add_parser("calibrate", help="null distribution of the statistic")
    p.add_argument("--experiment", default="sbm", choices=("sbm", "graphon", "corr_er", "beta"))
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--m", type=int, default=20)
    p.add_argument("--replicates", type=int, default=2000)
    p.add_argument("--oracle", action="store_true", help="use the generating probabilities")
    p.add_argument("--sparsity", type=float, default=1.0)
    _common(p)
    return parser


def _ints(text):
    return tuple(int(v) for v in text.split(","))


def _config(args, parser, estimator=None) -> montecarlo.TestConfig:
    est = estimator or args.estimator
    if est == "sbm" and args.k is None:
        parser.error("--k is required with --estimator sbm")
    try:
        return montecarlo.TestConfig(
            alpha=args.alpha, Q=args.q, estimator=est, K=args.k, C=args.c,
            weighted=args.weighted, seed=args.seed, pairs=getattr(args, "pairs", "ordered"),
        )
    except ValueError as exc:
        parser.error(str(exc))


def _emit(doc: dict):
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _write(path: Path, text: str):
    path.write_text(text)


def _theta_csv(samples) -> str:
    return "q,statistic\n" + "".join(f"{q},{t!r}\n" for q, t in enumerate(samples))


def _load(manifest: Path, weighted: bool):
    group = fileio.load_group(manifest)
    if group.weighted != weighted:
        kind = "weighted" if group.weighted else "binary"
        raise ValueError(f"{manifest}: {kind} group, pass --weighted to match" if group.weighted
                         else f"{manifest}: binary group used with --weighted")
    return group


def cmd_test(args, parser):
    cfg = _config(args, parser)
    g1, g2 = _load(args.manifest1, cfg.weighted), _load(args.manifest2, cfg.weighted)
    res = montecarlo.run_two_sample_test(g1, g2, cfg)
    _emit(res.to_dict(include_samples=args.json))
    if args.out:
        _write(args.out, _theta_csv(res.theta_samples))


def cmd_anova(args, parser):
    if len(args.manifests) < 2:
        parser.error("anova needs at least two manifests")
    cfg = _config(args, parser)
    groups = [_load(m, cfg.weighted) for m in args.manifests]
    res = montecarlo.run_multisample_test(groups, cfg)
    _emit(res.to_dict(include_samples=args.json))
    if args.out:
        _write(args.out, _theta_csv(res.theta_samples))


def cmd_simulate(args, parser):
    if args.spec is not None:
        doc = json.loads(args.spec.read_text())
    else:
        doc = {"experiment": args.experiment}
    overrides = {
        "n_grid": _ints(args.n_grid) if args.n_grid else None,
        "m_grid": _ints(args.m_grid) if args.m_grid else None,
        "replicates": args.replicates,
        "sparsity": args.sparsity,
        "estimators": (args.estimator,) if args.estimator else None,
        "K": args.k,
        "C": args.c if args.c != 1.0 else None,
        "alpha": args.alpha if args.alpha != 0.05 else None,
        "seed": args.seed if args.seed != 0 else None,
    }
    doc.update({k: v for k, v in overrides.items() if v is not None})
    try:
        if args.full_scale:
            exp = doc.pop("experiment")
            doc.setdefault("n_grid", simharness.FULL_N_GRID)
            doc.setdefault("replicates", 5000)
            spec = simharness.ExperimentSpec(exp, **doc)
        else:
            spec = simharness.ExperimentSpec.from_dict(doc)
    except (ValueError, TypeError) as exc:
        parser.error(str(exc))
    points = simharness.run_experiment(spec, workers=args.workers)
    _emit({
        "spec": spec.to_dict(),
        "points": [p.__dict__ for p in points],
        "monotonicity_flags": [list(f) for f in simharness.monotonicity_flags(points)],
    })
    if args.out:
        simharness.emit_curves(points, args.out)


def cmd_sweep(args, parser):
    ests = tuple(e for e in args.estimators.split(",") if e)
    for e in ests:
        if e not in montecarlo.ESTIMATORS:
            parser.error(f"unknown estimator {e!r}")
    if "sbm" in ests and args.k is None:
        parser.error("--k is required with --estimator sbm")
    thresholds = [float(t) for t in args.thresholds.split(",")]
    cfg = montecarlo.TestConfig(alpha=args.alpha, Q=args.q, estimator="avg", K=args.k, C=args.c, seed=args.seed)
    g1 = fileio.load_group(args.manifest1)
    g2 = fileio.load_group(args.manifest2) if args.manifest2 else None
    res = fileio.threshold_sweep(g1, g2, thresholds, cfg, ests, args.replicates)
    _emit(res.to_dict())
    if args.out:
        _write(args.out, res.to_csv())


def cmd_calibrate(args, parser):
    cfg = _config(args, parser)
    s = montecarlo.null_calibration(args.experiment, args.n, args.m, args.replicates, cfg,
                                    oracle=args.oracle, sparsity=args.sparsity)
    doc = {
        "experiment": args.experiment, "n": args.n, "m": args.m, "replicates": args.replicates,
        "oracle": args.oracle, "mean": s.mean, "variance": s.variance,
        "ks_distance": s.ks_distance, "rejection_rate": s.rejection_rate,
    }
    if args.json:
        doc["theta_samples"] = s.thetas.tolist()
    _emit(doc)
    if args.out:
        _write(args.out, _theta_csv(s.thetas.tolist()))


COMMANDS = {
    "test": cmd_test,
    "anova": cmd_anova,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "calibrate": cmd_calibrate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args, parser)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"netspectest {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
