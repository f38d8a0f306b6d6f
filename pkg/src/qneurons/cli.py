"""Command-line front end.

Every subcommand reads an optional flat ``key = value`` config file
(``--config``); explicit flags override file values.  Keys are the long
flag names with either dashes or underscores::

    # run.cfg
    dataset = circles
    target = inner
    seed = 0
    neuron = pcdqn
    resolution = 100
    shots = 20000
    est-seed = 0
    output-dir = results

Exit codes: 0 success, 2 I/O failure, 3 degenerate data, 4 invalid
arguments.  The default output directory is ``$QNEURONS_OUTPUT_DIR`` or
the current directory.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import analysis, datasets, reports
from .errors import DegenerateInputError, InvalidArgumentError
from .neurons import NEURON_KINDS, PcdqnParams

log = logging.getLogger("qneurons")

ENV_OUTPUT_DIR = "QNEURONS_OUTPUT_DIR"

EXIT_IO = 2
EXIT_DEGENERATE = 3
EXIT_INVALID = 4

# problems whose best configurations are re-checked with shot sampling
SHOT_PROBLEMS = (("diagonal", "center"), ("circles", "inner"))
SHAPE_PARAMS = ((0.25, "pi/2"), (0.5, "pi/4"), (1.0, "pi/4"), (1.0, "3pi/2"),
                (2.0, "5pi/4"), (4.0, "0"))


@dataclass
class RunConfig:
    dataset: str = "diagonal"
    target: str | None = None
    seed: int = 0
    std: float | None = None
    n_per_blob: int = 25
    noise: float = 0.05
    data: str | None = None
    raw: bool = False
    neuron: str = "cdqn"
    neurons: str = "cvqn,cdqn,pcdqn"
    tau: float | None = None
    delta: float | None = None
    phi0: float | None = None
    phi1: float | None = None
    resolution: int = 100
    metric: str = "euclidean"
    m: str = "2,4,8"
    shots: int = 20000
    est_seed: int = 0
    workers: int = 1
    output: str | None = None
    output_dir: str | None = None

    @property
    def out_dir(self) -> Path:
        return Path(self.output_dir or os.environ.get(ENV_OUTPUT_DIR) or ".")

    def validate(self) -> None:
        if self.dataset not in datasets.DATASETS:
            raise InvalidArgumentError(f"unknown dataset {self.dataset!r}")
        if self.neuron not in NEURON_KINDS:
            raise InvalidArgumentError(f"unknown neuron {self.neuron!r}")
        if self.metric not in analysis.METRICS:
            raise InvalidArgumentError(f"unknown metric {self.metric!r}")
        for s in (self.seed, self.est_seed):
            if not 0 <= s < 2**64:
                raise InvalidArgumentError("seeds must be unsigned 64-bit integers")
        if self.shots < 1:
            raise InvalidArgumentError("shots must be positive")


_FIELD_TYPES = {"seed": int, "n_per_blob": int, "resolution": int, "shots": int,
                "est_seed": int, "workers": int, "std": float, "noise": float,
                "tau": float, "delta": float, "phi0": float, "phi1": float}


def parse_angle(text: str) -> float:
    """Parse a float or a multiple of pi such as ``3pi/4`` or ``pi``."""
    t = text.strip().lower().replace(" ", "")
    if "pi" not in t:
        return float(t)
    num, _, den = t.partition("/")
    coef = num.replace("*", "").replace("pi", "")
    value = (float(coef) if coef not in ("", "+", "-") else float(coef + "1")) * math.pi
    return value / float(den) if den else value


def _convert(key: str, value: str):
    if key in ("tau", "delta", "phi0", "phi1"):
        return parse_angle(value)
    if key == "raw":
        return value.strip().lower() in ("1", "true", "yes", "on")
    conv = _FIELD_TYPES.get(key)
    return conv(value) if conv else value.strip()


def read_config(path) -> dict:
    values = {}
    names = {f.name for f in fields(RunConfig)}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in names:
                raise InvalidArgumentError(f"{path}:{lineno}: bad config line {line!r}")
            values[key] = _convert(key, value)
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    sup = argparse.SUPPRESS
    p.add_argument("--config", default=sup, help="flat key = value config file")
    p.add_argument("--output-dir", default=sup)
    p.add_argument("--dataset", choices=datasets.DATASETS, default=sup)
    p.add_argument("--target", default=sup)
    p.add_argument("--seed", type=int, default=sup)
    p.add_argument("--std", type=float, default=sup)
    p.add_argument("--n-per-blob", type=int, default=sup)
    p.add_argument("--noise", type=float, default=sup)
    p.add_argument("--workers", type=int, default=sup)


def build_parser() -> argparse.ArgumentParser:
    sup = argparse.SUPPRESS
    parser = _Parser(prog="qneurons", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-data", help="write a dataset CSV")
    _add_common(p)
    p.add_argument("--output", default=sup, help="CSV path (default: <output-dir>/<dataset>_<target>.csv)")
    p.add_argument("--raw", action="store_true", default=sup, help="skip min-max scaling")

    neuron_args = dict(choices=NEURON_KINDS, default=sup)
    p = sub.add_parser("search", help="grid search for the best weights")
    _add_common(p)
    p.add_argument("--neuron", **neuron_args)
    p.add_argument("--data", default=sup, help="dataset CSV instead of generating one")
    p.add_argument("--resolution", type=int, default=sup)
    p.add_argument("--output", default=sup)

    p = sub.add_parser("shapes", help="activation versus a classical metric")
    _add_common(p)
    p.add_argument("--neuron", **neuron_args)
    p.add_argument("--metric", choices=analysis.METRICS, default=sup)
    p.add_argument("--tau", type=parse_angle, default=sup)
    p.add_argument("--delta", type=parse_angle, default=sup)
    p.add_argument("--output", default=sup)

    p = sub.add_parser("growth", help="circuit depth and size versus input size")
    _add_common(p)
    p.add_argument("--m", default=sup, help="comma-separated input sizes")
    p.add_argument("--neurons", default=sup, help="comma-separated neuron kinds")
    p.add_argument("--output", default=sup)

    p = sub.add_parser("estimate", help="shot-sampled activations over a dataset")
    _add_common(p)
    p.add_argument("--neuron", **neuron_args)
    p.add_argument("--data", default=sup)
    p.add_argument("--tau", type=parse_angle, default=sup)
    p.add_argument("--delta", type=parse_angle, default=sup)
    p.add_argument("--phi0", type=parse_angle, default=sup)
    p.add_argument("--phi1", type=parse_angle, default=sup)
    p.add_argument("--resolution", type=int, default=sup)
    p.add_argument("--shots", type=int, default=sup)
    p.add_argument("--est-seed", type=int, default=sup)
    p.add_argument("--output", default=sup)

    p = sub.add_parser("reproduce", help="run every experiment into one directory")
    _add_common(p)
    p.add_argument("--resolution", type=int, default=sup)
    p.add_argument("--shots", type=int, default=sup)
    p.add_argument("--est-seed", type=int, default=sup)
    return parser


def make_config(ns: argparse.Namespace) -> RunConfig:
    values = {}
    given = vars(ns)
    if "config" in given:
        values.update(read_config(given["config"]))
    names = {f.name for f in fields(RunConfig)}
    values.update({k: v for k, v in given.items() if k in names})
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# --- commands -----------------------------------------------------------------

def _target(cfg: RunConfig) -> str:
    return cfg.target or datasets.TARGETS[cfg.dataset][0]


def _load(cfg: RunConfig) -> datasets.LabeledDataset:
    if cfg.data:
        d = datasets.read_csv(cfg.data)
        return d if d.scaled else datasets.minmax_scale(d)
    return datasets.make_problem(cfg.dataset, _target(cfg), cfg.seed, cfg.std,
                                 cfg.n_per_blob, cfg.noise)


def _params(cfg: RunConfig) -> PcdqnParams | None:
    if cfg.neuron != "pcdqn":
        return None
    return PcdqnParams(1.0 if cfg.tau is None else cfg.tau,
                       0.0 if cfg.delta is None else cfg.delta)


def _out(cfg: RunConfig, default_name: str) -> Path:
    if cfg.output:
        path = Path(cfg.output)
    else:
        path = cfg.out_dir / default_name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def cmd_gen_data(cfg: RunConfig) -> int:
    target = _target(cfg)
    if cfg.data:
        raise InvalidArgumentError("gen-data generates data; --data is not accepted")
    d = datasets.make_problem(cfg.dataset, target, cfg.seed, cfg.std, cfg.n_per_blob,
                              cfg.noise, scale=not cfg.raw)
    path = _out(cfg, f"{cfg.dataset}_{target}.csv")
    datasets.write_csv(d, path)
    print(f"{path}: {len(d)} samples ({d.positives} positive, {d.negatives} negative)")
    return 0


def _search(cfg: RunConfig, d: datasets.LabeledDataset, dataset: str, target: str,
            neuron: str) -> dict:
    result = analysis.grid_search(neuron, d, cfg.resolution, workers=cfg.workers)
    return reports.search_report(result, dataset, target)


def cmd_search(cfg: RunConfig) -> int:
    if cfg.neuron not in analysis.SEARCH_KINDS:
        raise InvalidArgumentError(f"search supports {analysis.SEARCH_KINDS}")
    dataset = Path(cfg.data).stem if cfg.data else cfg.dataset
    target = "file" if cfg.data else _target(cfg)
    report = _search(cfg, _load(cfg), dataset, target, cfg.neuron)
    path = _out(cfg, f"search_{dataset}_{target}_{cfg.neuron}.json")
    reports.write_search_report(report, path)
    print(json.dumps(report))
    return 0


def cmd_shapes(cfg: RunConfig) -> int:
    points = analysis.shape_study(cfg.neuron, _params(cfg), cfg.metric)
    path = _out(cfg, f"shapes_{cfg.neuron}_{cfg.metric}.csv")
    reports.write_shape_csv(points, cfg.metric, path)
    print(f"{path}: {len(points)} rows, spearman {analysis.shape_trend(points):+.4f}")
    return 0


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InvalidArgumentError(f"bad integer list {text!r}") from None


def _growth_rows(kinds, ms) -> list[tuple[str, int, int, int]]:
    rows = []
    for kind in kinds:
        if kind not in NEURON_KINDS:
            raise InvalidArgumentError(f"unknown neuron {kind!r}")
        rows += [(kind, m, dep, sz) for m, dep, sz in analysis.circuit_growth(kind, ms)]
    return rows


def cmd_growth(cfg: RunConfig) -> int:
    kinds = [k.strip() for k in cfg.neurons.split(",") if k.strip()]
    rows = _growth_rows(kinds, _ints(cfg.m))
    path = _out(cfg, "growth.csv")
    reports.write_growth_csv(rows, path)
    print(f"{path}: {len(rows)} rows")
    return 0


def _estimate(cfg: RunConfig, d, neuron: str, weights, params) -> tuple[list, float, float]:
    rows = analysis.estimate_dataset(neuron, d, weights, cfg.shots, cfg.est_seed, params)
    auc_closed = analysis.auc_roc([r.p_closed for r in rows], d.labels)
    auc_shots = analysis.auc_roc([r.p_estimated for r in rows], d.labels)
    return rows, auc_closed, auc_shots


def cmd_estimate(cfg: RunConfig) -> int:
    if cfg.neuron == "bvqn":
        raise InvalidArgumentError("estimate supports continuous-valued neurons only")
    d = _load(cfg)
    if cfg.phi0 is not None and cfg.phi1 is not None:
        weights, params = (cfg.phi0, cfg.phi1), _params(cfg)
    else:
        best = analysis.grid_search(cfg.neuron, d, cfg.resolution, workers=cfg.workers)
        weights, params = best.best_weights, best.best_params
    rows, auc_closed, auc_shots = _estimate(cfg, d, cfg.neuron, weights, params)
    dataset = Path(cfg.data).stem if cfg.data else cfg.dataset
    target = "file" if cfg.data else _target(cfg)
    path = _out(cfg, f"estimate_{dataset}_{target}_{cfg.neuron}.csv")
    reports.write_estimation_csv(rows, path)
    print(f"{path}: {len(rows)} rows, auc closed {auc_closed:.4f} shots {auc_shots:.4f}")
    return 0


def cmd_reproduce(cfg: RunConfig) -> int:
    """All six problems x three neurons, shot checks, shapes and growth."""
    root = cfg.out_dir
    for sub in ("data", "search", "estimate", "shapes"):
        (root / sub).mkdir(parents=True, exist_ok=True)

    summary = []
    best = {}
    for dataset in datasets.DATASETS:
        for target in datasets.TARGETS[dataset]:
            d = datasets.make_problem(dataset, target, cfg.seed, cfg.std, cfg.n_per_blob, cfg.noise)
            datasets.write_csv(d, root / "data" / f"{dataset}_{target}.csv")
            row = [dataset, target]
            for neuron in analysis.SEARCH_KINDS:
                report = _search(cfg, d, dataset, target, neuron)
                reports.write_search_report(
                    report, root / "search" / f"{dataset}_{target}_{neuron}.json")
                best[dataset, target, neuron] = (d, report)
                row.append(report["auc"])
                log.info("%s/%s %s auc=%.4f", dataset, target, neuron, report["auc"])
            summary.append(row)
    reports.write_table(root / "summary.csv", ("dataset", "target", *analysis.SEARCH_KINDS), summary)

    shot_rows = []
    for dataset, target in SHOT_PROBLEMS:
        for neuron in analysis.SEARCH_KINDS:
            d, report = best[dataset, target, neuron]
            params = None if report["tau"] is None else PcdqnParams(report["tau"], report["delta"])
            rows, auc_closed, auc_shots = _estimate(
                cfg, d, neuron, (report["phi0"], report["phi1"]), params)
            reports.write_estimation_csv(
                rows, root / "estimate" / f"{dataset}_{target}_{neuron}.csv")
            shot_rows.append((dataset, target, neuron, auc_closed, auc_shots))
    reports.write_table(root / "shot_auc.csv",
                        ("dataset", "target", "neuron", "auc_closed", "auc_shots"), shot_rows)

    for neuron in ("cvqn", "cdqn"):
        for metric_kind in analysis.METRICS:
            reports.write_shape_csv(analysis.shape_study(neuron, None, metric_kind), metric_kind,
                                    root / "shapes" / f"{neuron}_{metric_kind}.csv")
    for tau, delta in SHAPE_PARAMS:
        points = analysis.shape_study("pcdqn", PcdqnParams(tau, parse_angle(delta)))
        name = f"pcdqn_tau{tau:g}_delta{delta.replace('/', 'over')}_euclidean.csv"
        reports.write_shape_csv(points, "euclidean", root / "shapes" / name)

    reports.write_growth_csv(_growth_rows(analysis.SEARCH_KINDS, [2, 4, 8]), root / "growth.csv")

    header = f"{'dataset':<10}{'target':<8}" + "".join(f"{k.upper():>9}" for k in analysis.SEARCH_KINDS)
    print(header)
    for row in summary:
        print(f"{row[0]:<10}{row[1]:<8}" + "".join(f"{v:>9.4f}" for v in row[2:]))
    return 0


COMMANDS = {
    "gen-data": cmd_gen_data,
    "search": cmd_search,
    "shapes": cmd_shapes,
    "growth": cmd_growth,
    "estimate": cmd_estimate,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = make_config(ns)
        return COMMANDS[ns.command](cfg)
    except DegenerateInputError as exc:
        print(f"qneurons: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except OSError as exc:
        print(f"qneurons: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InvalidArgumentError, ValueError, TypeError) as exc:
        print(f"qneurons: invalid argument: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
