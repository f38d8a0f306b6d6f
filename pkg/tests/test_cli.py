import csv
import json
import math

import pytest

from qneurons.cli import main, parse_angle, read_config
from qneurons.datasets import read_csv
from qneurons.errors import InvalidArgumentError
from qneurons.reports import ESTIMATE_FIELDS, SEARCH_FIELDS, SHAPE_FIELDS


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def exit_code(argv):
    # argparse failures exit directly; validation failures return the code
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


def test_parse_angle():
    assert parse_angle("3pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_angle("pi") == math.pi
    assert parse_angle("-pi/2") == -math.pi / 2
    assert parse_angle("0.25") == 0.25


def test_gen_data_is_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["gen-data", "--dataset", "circles", "--seed", "7", "--output", str(a)]) == 0
    assert main(["gen-data", "--dataset", "circles", "--seed", "7", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(rows(a)) == 100
    assert read_csv(a).scaled


def test_gen_data_exact_corners(tmp_path):
    out = tmp_path / "sq.csv"
    assert main(["gen-data", "--dataset", "square", "--std", "0", "--n-per-blob", "1",
                 "--output", str(out)]) == 0
    assert [r["label"] for r in rows(out)] == ["0", "1", "1", "0"]


def test_gen_data_raw(tmp_path):
    out = tmp_path / "raw.csv"
    assert main(["gen-data", "--dataset", "diagonal", "--raw", "--output", str(out)]) == 0
    assert not read_csv(out).scaled


def test_search_writes_report(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert main(["search", "--dataset", "square", "--target", "nxor", "--std", "0",
                 "--n-per-blob", "1", "--neuron", "cvqn", "--output", str(out)]) == 0
    report = json.loads(out.read_text())
    assert tuple(report) == SEARCH_FIELDS
    assert report["auc"] == 1.0 and report["tau"] is None
    assert (report["phi0"], report["phi1"]) == (0.0, 0.0)
    assert report["evaluations"] == 10000
    assert json.loads(capsys.readouterr().out) == report


def test_search_from_csv(tmp_path):
    data = tmp_path / "d.csv"
    main(["gen-data", "--dataset", "circles", "--output", str(data)])
    out = tmp_path / "s.json"
    assert main(["search", "--data", str(data), "--neuron", "pcdqn", "--resolution", "8",
                 "--output", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["tau"] is not None and report["evaluations"] == 34 * 64


def test_shapes(tmp_path):
    out = tmp_path / "shape.csv"
    assert main(["shapes", "--neuron", "pcdqn", "--tau", "2", "--delta", "5pi/4",
                 "--metric", "rbf", "--output", str(out)]) == 0
    table = rows(out)
    assert len(table) == 100 and tuple(table[0]) == SHAPE_FIELDS
    assert {r["metric"] for r in table} == {"rbf"}


def test_growth(tmp_path):
    out = tmp_path / "g.csv"
    assert main(["growth", "--output", str(out)]) == 0
    table = rows(out)
    assert len(table) == 9
    for kind in ("cvqn", "cdqn", "pcdqn"):
        assert [r["m"] for r in table if r["neuron"] == kind] == ["2", "4", "8"]
    cd = [r for r in table if r["neuron"] == "cdqn"]
    assert [r["depth"] for r in cd] == ["7"] * 3


def test_estimate_fixed_weights(tmp_path):
    out = tmp_path / "e.csv"
    assert main(["estimate", "--dataset", "square", "--std", "0", "--n-per-blob", "1",
                 "--neuron", "cvqn", "--phi0", "0", "--phi1", "0", "--shots", "1000",
                 "--output", str(out)]) == 0
    table = rows(out)
    assert tuple(table[0]) == ESTIMATE_FIELDS and len(table) == 4
    assert [float(r["p_closed"]) for r in table] == pytest.approx([1, 0.5, 0.5, 1])
    assert [r["seed"] for r in table] == ["0", "1", "2", "3"]


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# square corners\ndataset = square\nn-per-blob = 1\nstd = 0\nseed = 3\n")
    out = tmp_path / "c.csv"
    assert main(["gen-data", "--config", str(cfg), "--n-per-blob", "2", "--output", str(out)]) == 0
    assert len(rows(out)) == 8
    assert read_config(cfg) == {"dataset": "square", "n_per_blob": 1, "std": 0.0, "seed": 3}


def test_config_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(InvalidArgumentError):
        read_config(cfg)
    assert main(["gen-data", "--config", str(cfg)]) == 4


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("QNEURONS_OUTPUT_DIR", str(tmp_path / "env"))
    assert main(["gen-data", "--dataset", "circles", "--target", "outer"]) == 0
    assert (tmp_path / "env" / "circles_outer.csv").exists()


def test_exit_codes(tmp_path):
    assert main(["search", "--data", str(tmp_path / "missing.csv")]) == 2
    flat = tmp_path / "flat.csv"
    flat.write_text("x0,x1,label\n1,0,1\n1,1,1\n")
    assert main(["search", "--data", str(flat), "--resolution", "4"]) == 3
    assert main(["estimate", "--dataset", "circles", "--shots", "0"]) == 4
    for argv in (["search", "--neuron", "bvqn"], ["shapes", "--tau", "nonsense"],
                 ["gen-data", "--dataset", "moons"]):
        assert exit_code(argv) == 4


def test_reproduce_small(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["reproduce", "--output-dir", str(out), "--resolution", "6", "--shots", "200"]) == 0
    summary = rows(out / "summary.csv")
    assert [(r["dataset"], r["target"]) for r in summary] == [
        ("diagonal", "center"), ("diagonal", "corner"), ("circles", "inner"),
        ("circles", "outer"), ("square", "xor"), ("square", "nxor")]
    assert len(list((out / "search").glob("*.json"))) == 18
    assert len(list((out / "shapes").glob("*.csv"))) == 18
    assert len(rows(out / "shot_auc.csv")) == 6
    assert "PCDQN" in capsys.readouterr().out
