"""Scoring, grid searches, activation-shape studies and circuit benchmarks."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata, spearmanr

from .datasets import HALF_PI, LabeledDataset
from .errors import DegenerateInputError, InvalidArgumentError
from .framework import NeuronModel, as_vector, build_framework_circuit
from .neurons import PcdqnParams, make_neuron
from .statevector import depth, run, sample_shots, size

__all__ = [
    "SearchResult",
    "ShapePoint",
    "EstimateRow",
    "SEARCH_KINDS",
    "METRICS",
    "auc_roc",
    "auc_rows",
    "weight_grid",
    "param_grid",
    "grid_search",
    "metric",
    "shape_study",
    "shape_trend",
    "estimate_activation",
    "estimate_dataset",
    "circuit_growth",
]

SEARCH_KINDS = ("cvqn", "cdqn", "pcdqn")
METRICS = ("manhattan", "euclidean", "linear", "polynomial", "rbf", "sigmoid")

TAUS = (0.25, 0.5, 1.0, 2.0, 4.0)
DELTAS = tuple(k * math.pi / 4 for k in range(7))


@dataclass(frozen=True)
class SearchResult:
    neuron: str
    best_weights: tuple[float, float]
    best_params: PcdqnParams | None
    best_auc: float
    evaluations: int


@dataclass(frozen=True)
class ShapePoint:
    metric_value: float
    activation: float
    input: tuple[float, ...]


@dataclass(frozen=True)
class EstimateRow:
    sample_index: int
    x0: float
    x1: float
    label: int
    p_closed: float
    p_estimated: float
    shots: int
    seed: int


# --- AUC -------------------------------------------------------------------

def _class_counts(labels: np.ndarray) -> tuple[np.ndarray, int, int]:
    y = np.asarray(labels).ravel()
    if not np.isin(y, (0, 1)).all():
        raise InvalidArgumentError("labels must be 0 or 1")
    pos = y == 1
    n_pos = int(pos.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateInputError("AUC needs both classes")
    return pos, n_pos, n_neg


def auc_roc(scores, labels) -> float:
    """Fraction of positive/negative pairs ranked correctly, ties counting half."""
    s = np.asarray(scores, dtype=float).ravel()
    pos, n_pos, n_neg = _class_counts(labels)
    if s.size != pos.size:
        raise InvalidArgumentError("scores and labels differ in length")
    sp = s[pos][:, None]
    sn = s[~pos][None, :]
    wins = np.count_nonzero(sp > sn) + 0.5 * np.count_nonzero(sp == sn)
    return float(wins / (n_pos * n_neg))


def auc_rows(scores: np.ndarray, labels) -> np.ndarray:
    """AUC of every row of a ``(k, n)`` score matrix, via average ranks.

    Numerically identical to :func:`auc_roc` row by row: rank sums are
    multiples of 1/2, so the numerator is exact.
    """
    scores = np.atleast_2d(np.asarray(scores, dtype=float))
    pos, n_pos, n_neg = _class_counts(labels)
    if scores.shape[-1] != pos.size:
        raise InvalidArgumentError("scores and labels differ in length")
    ranks = rankdata(scores, method="average", axis=-1)
    u = ranks[:, pos].sum(axis=-1) - n_pos * (n_pos + 1) / 2
    return u / (n_pos * n_neg)


# --- grids and search --------------------------------------------------------

def weight_grid(resolution: int = 100) -> np.ndarray:
    """``(resolution**2, 2)`` array over ``[0, pi/2]^2``; first component outer."""
    if resolution < 2:
        raise InvalidArgumentError("resolution must be at least 2")
    axis = np.linspace(0.0, HALF_PI, resolution)
    a, b = np.meshgrid(axis, axis, indexing="ij")
    return np.column_stack([a.ravel(), b.ravel()])


def param_grid(include_identity: bool = False) -> list[PcdqnParams]:
    """The 34 ``(tau, delta)`` pairs, tau outer; ``(1, 0)`` only on request."""
    return [PcdqnParams(t, d) for t in TAUS for d in DELTAS
            if include_identity or (t, d) != (1.0, 0.0)]


def _best_for(model: NeuronModel, x: np.ndarray, y: np.ndarray,
              weights: np.ndarray) -> tuple[int, float]:
    scores = model.activation(x[None, :, :], weights[:, None, :])
    aucs = auc_rows(scores, y)
    i = int(np.argmax(aucs))
    return i, float(aucs[i])


def grid_search(neuron_kind: str, dataset: LabeledDataset, resolution: int = 100,
                params: Sequence[PcdqnParams] | None = None,
                workers: int = 1) -> SearchResult:
    """Exhaustive search for the first AUC-maximizing weight (and parameters).

    Candidates are ordered parameters-outer, then weights in
    :func:`weight_grid` order.  A later candidate replaces the incumbent
    only with a strictly larger AUC, so the result does not depend on
    ``workers``.
    """
    kind = neuron_kind.lower()
    if kind not in SEARCH_KINDS:
        raise InvalidArgumentError(f"grid search supports {SEARCH_KINDS}, got {neuron_kind!r}")
    if not dataset.scaled:
        raise InvalidArgumentError("dataset must be scaled to [0, pi/2]")
    weights = weight_grid(resolution)
    x, y = dataset.samples, dataset.labels
    if kind == "pcdqn":
        settings = list(param_grid() if params is None else params)
        if not settings:
            raise InvalidArgumentError("empty parameter grid")
        models = [make_neuron("pcdqn", p.tau, p.delta) for p in settings]
    else:
        settings = [None]
        models = [make_neuron(kind)]

    def work(model):
        return _best_for(model, x, y, weights)

    if workers > 1 and len(models) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(work, models))
    else:
        outcomes = [work(m) for m in models]

    best = None
    for setting, (i, auc) in zip(settings, outcomes):
        if best is None or auc > best[2]:
            best = (setting, i, auc)
    setting, i, auc = best
    return SearchResult(
        neuron=kind,
        best_weights=(float(weights[i, 0]), float(weights[i, 1])),
        best_params=setting,
        best_auc=auc,
        evaluations=len(models) * len(weights),
    )


# --- shapes -----------------------------------------------------------------

def metric(kind: str, x, y) -> float:
    """Classical relation between two vectors.

    Kernel hyperparameters follow common library defaults: ``gamma = 1/m``,
    ``coef0 = 1`` and degree 3 for the polynomial kernel.
    """
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    if x.size != y.size:
        raise InvalidArgumentError("vectors differ in length")
    gamma = 1.0 / x.size
    if kind == "manhattan":
        return float(np.abs(x - y).sum())
    if kind == "euclidean":
        return float(np.sqrt(((x - y) ** 2).sum()))
    if kind == "linear":
        return float(x @ y)
    if kind == "polynomial":
        return float((gamma * (x @ y) + 1.0) ** 3)
    if kind == "rbf":
        return float(np.exp(-gamma * ((x - y) ** 2).sum()))
    if kind == "sigmoid":
        return float(np.tanh(gamma * (x @ y) + 1.0))
    raise InvalidArgumentError(f"unknown metric {kind!r}; expected one of {METRICS}")


def shape_study(neuron_kind: str, params: PcdqnParams | None = None,
                metric_kind: str = "euclidean", resolution: int = 10,
                reference: Sequence[float] = (HALF_PI, HALF_PI)) -> list[ShapePoint]:
    """Activation against a metric for every point of a ``resolution^2`` grid."""
    if neuron_kind == "pcdqn" and params is not None:
        model = make_neuron("pcdqn", params.tau, params.delta)
    else:
        model = make_neuron(neuron_kind)
    ref = as_vector(reference, "reference")
    points = []
    for v in weight_grid(resolution):
        points.append(ShapePoint(
            metric_value=metric(metric_kind, v, ref),
            activation=float(model.activation(v, ref)),
            input=(float(v[0]), float(v[1])),
        ))
    return points


def shape_trend(points: Iterable[ShapePoint]) -> float:
    """Spearman rank correlation of activation against metric value."""
    pts = list(points)
    rho = spearmanr([p.metric_value for p in pts], [p.activation for p in pts])[0]
    return float(rho)


# --- shot estimation ----------------------------------------------------------

def _model(neuron: NeuronModel | str, params: PcdqnParams | None) -> NeuronModel:
    if isinstance(neuron, NeuronModel):
        return neuron
    if params is not None:
        return make_neuron(neuron, params.tau, params.delta)
    return make_neuron(neuron)


def estimate_activation(neuron: NeuronModel | str, theta, phi, shots: int = 20000,
                        seed: int = 0, params: PcdqnParams | None = None) -> float:
    """Fraction of 1 outcomes on the ancilla over ``shots`` executions."""
    model = _model(neuron, params)
    circ = build_framework_circuit(model, theta, phi)
    state = run(circ)
    return sample_shots(state, circ.measured_qubit, shots, seed) / shots


def estimate_dataset(neuron: NeuronModel | str, dataset: LabeledDataset, weights,
                     shots: int = 20000, seed: int = 0,
                     params: PcdqnParams | None = None) -> list[EstimateRow]:
    """Shot estimates for every sample; sample ``i`` uses seed ``seed + i`` (mod 2**64)."""
    model = _model(neuron, params)
    phi = as_vector(weights, "weights")
    rows = []
    for i, (v, label) in enumerate(zip(dataset.samples, dataset.labels)):
        s = (int(seed) + i) % 2**64
        rows.append(EstimateRow(
            sample_index=i,
            x0=float(v[0]),
            x1=float(v[1]),
            label=int(label),
            p_closed=float(model.activation(v, phi)),
            p_estimated=estimate_activation(model, v, phi, shots, s),
            shots=int(shots),
            seed=s,
        ))
    return rows


# --- circuit growth -----------------------------------------------------------

def circuit_growth(neuron_kind: str, m_values: Iterable[int],
                   params: PcdqnParams | None = None,
                   fused: bool = False) -> list[tuple[int, int, int]]:
    """``(m, depth, size)`` of the full framework circuit for each arity."""
    if neuron_kind == "pcdqn":
        p = params or PcdqnParams()
        model = make_neuron("pcdqn", p.tau, p.delta, fused=fused)
    else:
        model = make_neuron(neuron_kind)
    table = []
    for m in m_values:
        if neuron_kind == "bvqn":
            theta = np.where(np.arange(m) % 2, -1.0, 1.0)
            phi = -theta
        else:
            theta = np.full(m, 0.5)
            phi = np.full(m, 0.25)
        circ = build_framework_circuit(model, theta, phi)
        table.append((int(m), depth(circ), size(circ)))
    return table
