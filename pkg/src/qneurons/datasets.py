"""Seeded generators for the three benchmark datasets and their label swaps.

Samples come from ``numpy.random.default_rng(seed)`` (PCG64).  Samples are
kept in generation order (cluster by cluster); nothing is shuffled.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import DegenerateInputError, InvalidArgumentError

__all__ = [
    "LabeledDataset",
    "DATASETS",
    "TARGETS",
    "gen_diagonal_blobs",
    "gen_concentric_circles",
    "gen_square_blobs",
    "swap_labels",
    "minmax_scale",
    "make_problem",
    "write_csv",
    "read_csv",
]

HALF_PI = math.pi / 2

# dataset -> (default target, swapped target)
TARGETS = {
    "diagonal": ("center", "corner"),
    "circles": ("inner", "outer"),
    "square": ("xor", "nxor"),
}
DATASETS = tuple(TARGETS)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Two-feature samples with binary labels (1 = positive class)."""

    samples: np.ndarray
    labels: np.ndarray
    scaled: bool = False

    def __post_init__(self):
        x = np.array(self.samples, dtype=float)
        y = np.array(self.labels, dtype=np.int64).ravel()
        if x.ndim != 2 or x.shape[1] != 2:
            raise InvalidArgumentError("samples must have shape (n, 2)")
        if x.shape[0] != y.size:
            raise InvalidArgumentError("samples and labels differ in length")
        if not np.isin(y, (0, 1)).all():
            raise InvalidArgumentError("labels must be 0 or 1")
        if y.sum() == 0 or y.sum() == y.size:
            raise DegenerateInputError("both classes must be present")
        if self.scaled and ((x < 0).any() or (x > HALF_PI).any()):
            raise InvalidArgumentError("scaled samples must lie in [0, pi/2]")
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "labels", y)

    def __len__(self):
        return self.labels.size

    def __eq__(self, other):
        if not isinstance(other, LabeledDataset):
            return NotImplemented
        return (self.scaled == other.scaled
                and np.array_equal(self.samples, other.samples)
                and np.array_equal(self.labels, other.labels))

    @property
    def positives(self) -> int:
        return int(self.labels.sum())

    @property
    def negatives(self) -> int:
        return len(self) - self.positives


def gen_diagonal_blobs(seed: int = 0, std: float = 1.2) -> LabeledDataset:
    """Three clusters along a diagonal; the 50-point center cluster is positive.

    Each corner cluster holds 25 points so both classes have 50.
    """
    rng = np.random.default_rng(seed)
    centers = [((-5.0, 8.0), 25, 0), ((0.0, 0.0), 50, 1), ((5.0, -8.0), 25, 0)]
    xs, ys = [], []
    for center, count, label in centers:
        xs.append(np.asarray(center) + rng.normal(0.0, std, size=(count, 2)))
        ys.append(np.full(count, label))
    return LabeledDataset(np.vstack(xs), np.concatenate(ys))


def gen_concentric_circles(seed: int = 0, noise: float = 0.05, factor: float = 0.4,
                           n_per_circle: int = 50) -> LabeledDataset:
    """Unit outer circle and an inner circle of radius ``factor`` (positive)."""
    if noise < 0 or not 0 < factor < 1:
        raise InvalidArgumentError("need noise >= 0 and 0 < factor < 1")
    rng = np.random.default_rng(seed)
    angles = np.linspace(0.0, 2 * math.pi, n_per_circle, endpoint=False)
    ring = np.column_stack([np.cos(angles), np.sin(angles)])
    x = np.vstack([ring, factor * ring])
    if noise > 0:
        x = x + rng.normal(0.0, noise, size=x.shape)
    y = np.concatenate([np.zeros(n_per_circle), np.ones(n_per_circle)])
    return LabeledDataset(x, y)


def gen_square_blobs(seed: int = 0, std: float = 0.05, n_per_blob: int = 25) -> LabeledDataset:
    """Blobs on the corners of ``[0, pi/2]^2`` with XOR labels."""
    if std < 0 or n_per_blob < 1:
        raise InvalidArgumentError("need std >= 0 and n_per_blob >= 1")
    rng = np.random.default_rng(seed)
    corners = [((0.0, 0.0), 0), ((0.0, HALF_PI), 1), ((HALF_PI, 0.0), 1), ((HALF_PI, HALF_PI), 0)]
    xs, ys = [], []
    for corner, label in corners:
        pts = np.tile(corner, (n_per_blob, 1))
        if std > 0:
            pts = pts + rng.normal(0.0, std, size=pts.shape)
        xs.append(pts)
        ys.append(np.full(n_per_blob, label))
    return LabeledDataset(np.vstack(xs), np.concatenate(ys))


def swap_labels(d: LabeledDataset) -> LabeledDataset:
    return replace(d, labels=1 - d.labels)


def minmax_scale(d: LabeledDataset) -> LabeledDataset:
    """Map each feature's [min, max] onto [0, pi/2]."""
    x = d.samples
    lo, hi = x.min(axis=0), x.max(axis=0)
    span = hi - lo
    if (span == 0).any():
        raise DegenerateInputError("a feature has zero range")
    scaled = np.clip((x - lo) / span * HALF_PI, 0.0, HALF_PI)
    # pin the endpoints against rounding
    scaled[x == lo] = 0.0
    scaled[x == hi] = HALF_PI
    # features already spanning exactly [0, pi/2] pass through bit-for-bit
    done = (lo == 0.0) & (hi == HALF_PI)
    scaled[:, done] = x[:, done]
    return LabeledDataset(scaled, d.labels, scaled=True)


def make_problem(dataset: str, target: str | None = None, seed: int = 0,
                 std: float | None = None, n_per_blob: int = 25,
                 noise: float = 0.05, scale: bool = True) -> LabeledDataset:
    """Generate, label for ``target`` and scale one of the six problems.

    ``std`` defaults to 1.2 for the diagonal blobs and 0.05 for the square.
    """
    if dataset not in TARGETS:
        raise InvalidArgumentError(f"unknown dataset {dataset!r}; expected one of {DATASETS}")
    default, swapped = TARGETS[dataset]
    target = default if target is None else target.lower()
    if target not in (default, swapped):
        raise InvalidArgumentError(f"dataset {dataset!r} has targets {default!r}, {swapped!r}")
    if dataset == "diagonal":
        d = gen_diagonal_blobs(seed, 1.2 if std is None else std)
    elif dataset == "circles":
        d = gen_concentric_circles(seed, noise)
    else:
        d = gen_square_blobs(seed, 0.05 if std is None else std, n_per_blob)
    if target == swapped:
        d = swap_labels(d)
    return minmax_scale(d) if scale else d


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(d: LabeledDataset, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x0", "x1", "label"])
        for (x0, x1), label in zip(d.samples, d.labels):
            w.writerow([_fmt(x0), _fmt(x1), int(label)])


def read_csv(path, scaled: bool | None = None) -> LabeledDataset:
    """Load a dataset CSV; ``scaled`` is inferred from the value range if omitted."""
    with open(Path(path), newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or set(rows[0]) != {"x0", "x1", "label"}:
        raise InvalidArgumentError(f"{path}: expected columns x0,x1,label")
    x = np.array([[float(r["x0"]), float(r["x1"])] for r in rows])
    y = np.array([int(r["label"]) for r in rows])
    if scaled is None:
        scaled = bool((x >= 0).all() and (x <= HALF_PI).all())
    return LabeledDataset(x, y, scaled=scaled)
