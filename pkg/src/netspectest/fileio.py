"""Reading and writing network groups, binarization and threshold sweeps.

Two file formats hold one network each:

* ``dense-csv``: ``n`` lines of ``n`` comma-separated reals.
* ``edge-list``: a first line holding ``n``, then lines ``i j [w]`` with
  1-based node indices; a missing weight means 1.

A manifest is a JSON document with keys ``label``, ``format``, ``n``,
``files`` (paths relative to the manifest) and ``weighted``.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from netspectest.clustering import DegenerateClusteringError
from netspectest.matrix import NetworkGroup
from netspectest.models import stream_rng
from netspectest.montecarlo import TestConfig, run_two_sample_test

FORMATS = ("dense-csv", "edge-list")


class InputWarning(UserWarning):
    pass


class ParseError(ValueError):
    pass


@dataclass
class GroupManifest:
    label: str
    format: str
    n: int
    files: List[Path]
    weighted: bool = False

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}; expected one of {FORMATS}")
        if not self.files:
            raise ValueError("manifest lists no files")
        self.files = [Path(f) for f in self.files]

    @classmethod
    def load(cls, path) -> "GroupManifest":
        path = Path(path)
        doc = json.loads(path.read_text())
        files = [f if Path(f).is_absolute() else path.parent / f for f in doc["files"]]
        return cls(doc["label"], doc["format"], int(doc["n"]), files, bool(doc.get("weighted", False)))

    def dump(self, path) -> Path:
        path = Path(path)
        files = []
        for f in self.files:
            try:
                files.append(str(Path(f).relative_to(path.parent)))
            except ValueError:
                files.append(str(f))
        doc = {"label": self.label, "format": self.format, "n": self.n, "files": files, "weighted": self.weighted}
        path.write_text(json.dumps(doc, indent=2) + "\n")
        return path


def _read_dense_csv(path: Path, n: int) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                row = [float(tok) for tok in line.split(",")]
            except ValueError:
                raise ParseError(f"{path}:{lineno}: unparseable line {line.strip()!r}") from None
            if len(row) != n:
                raise ParseError(f"{path}:{lineno}: expected {n} values, got {len(row)}")
            rows.append(row)
    if len(rows) != n:
        raise ParseError(f"{path}: expected {n} rows, got {len(rows)}")
    return np.array(rows)


def _read_edge_list(path: Path, n: int) -> np.ndarray:
    A = np.zeros((n, n))
    seen = np.zeros((n, n), dtype=bool)
    header = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            toks = line.split()
            if not toks:
                continue
            try:
                if header is None:
                    if len(toks) != 1:
                        raise ValueError
                    header = int(toks[0])
                    if header != n:
                        raise ParseError(f"{path}:{lineno}: file declares n={header}, manifest n={n}")
                    continue
                if len(toks) not in (2, 3):
                    raise ValueError
                i, j = int(toks[0]) - 1, int(toks[1]) - 1
                w = float(toks[2]) if len(toks) == 3 else 1.0
            except ParseError:
                raise
            except ValueError:
                raise ParseError(f"{path}:{lineno}: unparseable line {line.strip()!r}") from None
            if not (0 <= i < n and 0 <= j < n):
                raise ParseError(f"{path}:{lineno}: node index out of range 1..{n}")
            A[i, j] = w
            seen[i, j] = True
    if header is None:
        raise ParseError(f"{path}: missing node-count header")
    # an edge listed in one direction only is undirected
    once = seen & ~seen.T
    A[once.T] = A.T[once.T]
    return A


def _clean(A: np.ndarray, path: Path) -> np.ndarray:
    if not np.array_equal(A, A.T):
        warnings.warn(f"{path}: asymmetric input, symmetrized by the larger entry", InputWarning, stacklevel=3)
        A = np.maximum(A, A.T)
    if np.any(np.diag(A) != 0):
        warnings.warn(f"{path}: nonzero diagonal set to zero", InputWarning, stacklevel=3)
        A = A.copy()
        np.fill_diagonal(A, 0.0)
    return A


def read_network(path, fmt: str, n: int) -> np.ndarray:
    path = Path(path)
    A = _read_dense_csv(path, n) if fmt == "dense-csv" else _read_edge_list(path, n)
    return _clean(A, path)


def load_group(manifest) -> NetworkGroup:
    """Read every file of a manifest (a :class:`GroupManifest` or a path to one)."""
    if not isinstance(manifest, GroupManifest):
        manifest = GroupManifest.load(manifest)
    mats = []
    for f in manifest.files:
        A = read_network(f, manifest.format, manifest.n)
        if not manifest.weighted:
            if np.any((A < 0) | (A > 1)):
                raise ParseError(f"{f}: entry outside [0, 1] in a group declared binary")
            if np.any((A != 0) & (A != 1)):
                raise ParseError(f"{f}: fractional entry in a group declared binary")
        mats.append(A)
    return NetworkGroup.from_matrices(mats, weighted=manifest.weighted)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_network(A: np.ndarray, path, fmt: str = "dense-csv") -> Path:
    path = Path(path)
    n = A.shape[0]
    if fmt == "dense-csv":
        lines = [",".join(_fmt(v) for v in row) for row in A]
    elif fmt == "edge-list":
        iu, ju = np.nonzero(np.triu(A, 1))
        lines = [str(n)] + [f"{i + 1} {j + 1} {_fmt(A[i, j])}" for i, j in zip(iu, ju)]
    else:
        raise ValueError(f"unknown format {fmt!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def write_group(group: NetworkGroup, directory, label: str, fmt: str = "dense-csv") -> GroupManifest:
    """Write one file per network plus ``<label>.json``; returns the manifest."""
    if group.matrices is None:
        raise ValueError("writing a group needs the raw network stack")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    ext = "csv" if fmt == "dense-csv" else "txt"
    files = [write_network(A, directory / f"{label}_{k:04d}.{ext}", fmt) for k, A in enumerate(group.matrices)]
    manifest = GroupManifest(label, fmt, group.n, files, group.weighted)
    manifest.dump(directory / f"{label}.json")
    return manifest


def binarize(A, t: float) -> np.ndarray:
    """Edge where the magnitude exceeds ``t``; the diagonal stays empty."""
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    B = (np.abs(np.asarray(A, dtype=np.float64)) > t).astype(np.float64)
    np.fill_diagonal(B, 0.0)
    return B


def binarize_group(group: NetworkGroup, t: float) -> NetworkGroup:
    if group.matrices is None:
        raise ValueError("binarizing needs the raw network stack")
    return NetworkGroup.from_matrices([binarize(A, t) for A in group.matrices])


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    estimator: str
    setting: str
    rate: Optional[float]
    status: str = "ok"


@dataclass
class ThresholdSweepResult:
    thresholds: List[float]
    rows: List[SweepRow] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["threshold,estimator,setting,rate,status"]
        for r in self.rows:
            rate = "" if r.rate is None else repr(r.rate)
            lines.append(f"{r.threshold!r},{r.estimator},{r.setting},{rate},{r.status}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "thresholds": self.thresholds,
            "rows": [r.__dict__ for r in self.rows],
        }


def threshold_sweep(
    group1: NetworkGroup,
    group2: Optional[NetworkGroup],
    thresholds: Sequence[float],
    config: TestConfig,
    estimators: Sequence[str] = ("avg", "sbm"),
    null_replicates: int = 1000,
) -> ThresholdSweepResult:
    """Binary tests on thresholded weighted groups across a threshold grid.

    With two groups each threshold runs the binary two-sample test on the
    binarized groups (setting ``"alt"``). With ``group2=None`` the whole
    binarized group is tested against random half-size subsamples of
    itself, one sign diagonal per subsample (setting ``"null"``); groups are
    binarized before subsampling. Thresholds that leave a group with no
    edges at all are reported as degenerate and skipped.
    """
    thresholds = [float(t) for t in thresholds]
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ValueError("threshold grid must be strictly increasing")
    result = ThresholdSweepResult(thresholds)
    setting = "alt" if group2 is not None else "null"
    for ti, t in enumerate(thresholds):
        b1 = binarize_group(group1, t)
        b2 = binarize_group(group2, t) if group2 is not None else None
        empty = not b1.mean.any() or (b2 is not None and not b2.mean.any())
        for est in estimators:
            if empty:
                result.rows.append(SweepRow(t, est, setting, None, "degenerate: null graphs"))
                continue
            cfg = config.replace(estimator=est, weighted=False, seed=int(config.seed) + ti)
            try:
                if b2 is not None:
                    rate = run_two_sample_test(b1, b2, cfg).rejection_rate
                else:
                    rate = _subsample_null_rate(b1, cfg.replace(Q=1), null_replicates)
            except DegenerateClusteringError:
                result.rows.append(SweepRow(t, est, setting, None, "degenerate: clustering failed"))
                continue
            result.rows.append(SweepRow(t, est, setting, rate))
    return result


def _subsample_null_rate(group: NetworkGroup, config: TestConfig, replicates: int) -> float:
    half = group.m // 2
    if half < 1:
        raise ValueError("subsample null needs at least two networks")
    rejections = 0.0
    for r in range(replicates):
        rng = stream_rng(config.seed, 3, r)
        sub = group.subset(np.sort(rng.choice(group.m, size=half, replace=False)))
        cfg = config.replace(seed=int(rng.integers(2**63)))
        rejections += run_two_sample_test(group, sub, cfg).rejection_rate
    return rejections / replicates
