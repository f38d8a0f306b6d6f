"""File formats for search reports, shape/growth/estimation tables.

Floats are written with 17 significant digits so every file reads back to
the exact in-memory values.
"""

from __future__ import annotations

import csv
import json
from typing import Iterable, Sequence

from .analysis import EstimateRow, SearchResult, ShapePoint

SEARCH_FIELDS = ("dataset", "target", "neuron", "tau", "delta", "phi0", "phi1", "auc", "evaluations")
SHAPE_FIELDS = ("input_x0", "input_x1", "metric", "metric_value", "activation")
GROWTH_FIELDS = ("neuron", "m", "depth", "size")
ESTIMATE_FIELDS = ("sample_index", "x0", "x1", "label", "p_closed", "p_estimated", "shots", "seed")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def search_report(result: SearchResult, dataset: str, target: str) -> dict:
    p = result.best_params
    return {
        "dataset": dataset,
        "target": target,
        "neuron": result.neuron,
        "tau": None if p is None else p.tau,
        "delta": None if p is None else p.delta,
        "phi0": result.best_weights[0],
        "phi1": result.best_weights[1],
        "auc": result.best_auc,
        "evaluations": result.evaluations,
    }


def write_search_report(report: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump({k: report[k] for k in SEARCH_FIELDS}, fh, indent=2)
        fh.write("\n")


def read_search_report(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _write_rows(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, float) else v for v in row])


def write_shape_csv(points: Iterable[ShapePoint], metric_kind: str, path) -> None:
    _write_rows(path, SHAPE_FIELDS, (
        (p.input[0], p.input[1], metric_kind, p.metric_value, p.activation) for p in points))


def write_growth_csv(rows: Iterable[tuple[str, int, int, int]], path) -> None:
    _write_rows(path, GROWTH_FIELDS, rows)


def write_estimation_csv(rows: Iterable[EstimateRow], path) -> None:
    _write_rows(path, ESTIMATE_FIELDS, (
        (r.sample_index, r.x0, r.x1, r.label, r.p_closed, r.p_estimated, r.shots, r.seed)
        for r in rows))


def write_table(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    _write_rows(path, header, rows)


def read_table(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
