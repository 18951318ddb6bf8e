"""Rejection-rate curves for the simulation designs.

Every replicate draws fresh networks and runs each configured estimator on
the same draw. Two-sample designs use a single sign diagonal per replicate;
the multi-sample design needs several to estimate the correlations, and its
per-replicate rejection fraction is averaged instead.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from netspectest import scenarios
from netspectest.montecarlo import TestConfig, run_multisample_test, run_two_sample_test
from netspectest.models import stream_rng

CSV_HEADER = ("n", "m", "estimator", "hypothesis", "rate", "replicates", "stderr")
DESK_N_GRID = (100, 200, 300, 500)
FULL_N_GRID = tuple(range(100, 1001, 100))
M_GRID = (10, 50)


def default_estimators(experiment: str) -> Tuple[str, ...]:
    return ("avg", "sbm") if experiment == "beta" else ("avg", "sbm", "mnbs")


@dataclass(frozen=True)
class ExperimentSpec:
    experiment: str
    n_grid: Tuple[int, ...] = DESK_N_GRID
    m_grid: Tuple[int, ...] = M_GRID
    sparsity: float = 1.0
    replicates: int = 1000
    estimators: Optional[Tuple[str, ...]] = None
    hypotheses: Optional[Tuple[str, ...]] = None
    alpha: float = 0.05
    seed: int = 0
    K: int = 2
    C: float = 1.0
    q_multisample: int = 200

    def __post_init__(self):
        if self.experiment not in scenarios.EXPERIMENTS:
            raise ValueError(f"unknown experiment id {self.experiment!r}")
        if not self.n_grid or not self.m_grid:
            raise ValueError("n and m grids must be nonempty")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        for name in ("n_grid", "m_grid"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        ests = default_estimators(self.experiment) if self.estimators is None else tuple(self.estimators)
        if self.experiment == "beta" and "mnbs" in ests:
            raise ValueError("mnbs applies to binary networks only")
        object.__setattr__(self, "estimators", ests)
        hyps = scenarios.HYPOTHESES[self.experiment] if self.hypotheses is None else tuple(self.hypotheses)
        for h in hyps:
            scenarios.check_design(self.experiment, h)
        object.__setattr__(self, "hypotheses", hyps)

    @classmethod
    def full_scale(cls, experiment: str, **overrides) -> "ExperimentSpec":
        """Full grid: n from 100 to 1000 and 5000 replicates per point."""
        return cls(experiment, n_grid=FULL_N_GRID, replicates=5000, **overrides)

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentSpec":
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown experiment spec fields: {sorted(unknown)}")
        return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in doc.items()})

    def to_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}


@dataclass(frozen=True)
class CurvePoint:
    n: int
    m: int
    estimator: str
    hypothesis: str
    rate: float
    replicates: int
    stderr: float
    experiment: str = ""

    @classmethod
    def from_rate(cls, n, m, estimator, hypothesis, rate, replicates, experiment=""):
        stderr = math.sqrt(rate * (1.0 - rate) / replicates)
        return cls(n, m, estimator, hypothesis, rate, replicates, stderr, experiment)


def _replicate(spec: ExperimentSpec, n: int, m: int, hyp_index: int, r: int) -> List[float]:
    hypothesis = spec.hypotheses[hyp_index]
    rng = stream_rng(spec.seed, n, m, scenarios.HYPOTHESES[spec.experiment].index(hypothesis), r)
    d = scenarios.draw(spec.experiment, hypothesis, n, m, rng, spec.sparsity)
    test_seed = int(rng.integers(2**63))
    out = []
    for est in spec.estimators:
        multi = spec.experiment == "multisample"
        cfg = TestConfig(
            alpha=spec.alpha,
            Q=spec.q_multisample if multi else 1,
            estimator=est,
            K=spec.K,
            C=spec.C,
            weighted=d.weighted,
            seed=test_seed,
        )
        if multi:
            res = run_multisample_test(d.groups, cfg)
        else:
            res = run_two_sample_test(d.groups[0], d.groups[1], cfg)
        out.append(res.rejection_rate)
    return out


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> List[CurvePoint]:
    """Rejection rate for every (n, m, hypothesis, estimator) cell of ``spec``.

    Replicate ``r`` of a cell draws from a generator keyed by
    ``(seed, n, m, hypothesis, r)``, so the output does not depend on
    ``workers`` or on the grid order.
    """
    points = []
    for n in spec.n_grid:
        for m in spec.m_grid:
            for h, hypothesis in enumerate(spec.hypotheses):
                jobs = range(spec.replicates)
                if workers > 1:
                    with ThreadPoolExecutor(workers) as pool:
                        rows = list(pool.map(lambda r: _replicate(spec, n, m, h, r), jobs))
                else:
                    rows = [_replicate(spec, n, m, h, r) for r in jobs]
                rates = np.asarray(rows).mean(axis=0)
                for est, rate in zip(spec.estimators, rates):
                    points.append(CurvePoint.from_rate(n, m, est, hypothesis, float(rate), spec.replicates, spec.experiment))
    return sort_points(points)


def sort_points(points: Sequence[CurvePoint]) -> List[CurvePoint]:
    return sorted(points, key=lambda p: (p.experiment, p.estimator, p.hypothesis, p.n, p.m))


def curves_csv(points: Sequence[CurvePoint]) -> str:
    if not points:
        raise ValueError("no curve points to emit")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in sort_points(points):
        w.writerow([p.n, p.m, p.estimator, p.hypothesis, repr(p.rate), p.replicates, repr(p.stderr)])
    return buf.getvalue()


def emit_curves(points: Sequence[CurvePoint], destination) -> Path:
    """Write ``points`` as plot-ready CSV to ``destination``."""
    text = curves_csv(points)
    path = Path(destination)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write curves to {path}: {exc}") from exc
    return path


def read_curves(source, experiment: str = "") -> List[CurvePoint]:
    with open(source, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [
        CurvePoint(int(r["n"]), int(r["m"]), r["estimator"], r["hypothesis"], float(r["rate"]),
                   int(r["replicates"]), float(r["stderr"]), experiment)
        for r in rows
    ]


def monotonicity_flags(points: Sequence[CurvePoint]) -> List[Tuple[str, str, int]]:
    """Alternative curves whose rate at the largest n is below the rate at the smallest n."""
    flags = []
    keys = {(p.estimator, p.hypothesis, p.m) for p in points if p.hypothesis != "null"}
    for est, hyp, m in sorted(keys):
        curve = sorted((p.n, p.rate) for p in points if (p.estimator, p.hypothesis, p.m) == (est, hyp, m))
        if len(curve) > 1 and curve[-1][1] < curve[0][1]:
            flags.append((est, hyp, m))
    return flags
