import io
import json

import pandas as pd
import pytest
from numpy.testing import assert_allclose

from spline_QI.cli import EXIT_OK, EXIT_USAGE, main


def summary_of(out):
    text = out[:out.rindex("}") + 1]
    return json.loads(text)


def test_coeffs_q3(capsys):
    assert main(["coeffs", "--qi", "q3", "--partition", "uniform:10"]) == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert set(frame["node"]) == {"knot"}
    first = frame[frame["index"] == frame["index"].min()]
    assert_allclose(first["weight"], [-1. / 6., 4. / 3., -1. / 6.])
    assert list(first["offset"]) == [-2, -1, 0]


def test_coeffs_to_file(tmp_path):
    path = tmp_path / "coeffs.csv"
    assert main(["coeffs", "--qi", "qpstar:p=2", "--m", "2",
                 "--partition", "uniform:12", "--out", str(path)]) == EXIT_OK
    frame = pd.read_csv(path)
    assert set(frame["offset"]) == {-2, 0, 2}


def test_bounds(tmp_path, capsys):
    out = tmp_path / "bounds"
    code = main(["bounds", "--qi", "q2star", "--qi", "g2", "--m", "3",
                 "--partitions", "random:2:n=14:seed=1", "--out", str(out)])
    assert code == EXIT_OK
    summary = summary_of(capsys.readouterr().out)
    assert summary["fail_count"] == 0
    assert summary["pass_count"] > 0
    assert summary["folder"] == str(out)
    assert (out / "bounds.csv").is_file()


def test_nearbest(tmp_path, capsys):
    code = main(["nearbest", "--m", "2", "--p", "2", "--partitions",
                 "uniform:12", "--out", str(tmp_path / "nb")])
    assert code == EXIT_OK
    assert summary_of(capsys.readouterr().out)["experiment"] == "nearbest"


def test_section11(tmp_path, capsys):
    code = main(["section11", "--h", "1", "--h", "100", "--points", "8",
                 "--out", str(tmp_path / "s11")])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "lambda_s ratio" in out
    ratio = float(out.strip().splitlines()[-1].split(":")[-1])
    assert ratio == pytest.approx(40., rel=0.05)


def test_lebesgue(tmp_path):
    path = tmp_path / "lebesgue.csv"
    assert main(["lebesgue", "--qi", "q2star", "--m", "2", "--points", "4",
                 "--out", str(path)]) == EXIT_OK
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["x", "lambda"]
    assert frame["lambda"].max() <= 1.5 + 1e-12


def test_oracle(tmp_path, capsys):
    assert main(["oracle", "--instances", "5", "--seed", "2",
                 "--out", str(tmp_path / "oracle")]) == EXIT_OK
    assert summary_of(capsys.readouterr().out)["pass_count"] == 10


def test_run_config(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"experiment": "mesh_ratio"}),
                      encoding="utf-8")
    assert main(["run", "--config", str(config),
                 "--out", str(tmp_path / "mr")]) == EXIT_OK


@pytest.mark.parametrize("argv", [
    ["bounds", "--bogus"],
    ["nope"],
    [],
    ["run", "--config", "does/not/exist.json"],
    ["coeffs", "--qi", "nope"],
    ["coeffs", "--qi", "q3", "--m", "2"],
])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_help():
    assert main(["--help"]) == EXIT_OK
