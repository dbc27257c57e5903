import json
import math
import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracgap import cli
from diracgap.cli import (
    EXIT_HYPOTHESIS,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    Table,
    UsageError,
    emit_plot,
    main,
    parse_config,
)
from diracgap.core import HypothesisUnmet

SVG = "{http://www.w3.org/2000/svg}"


def read_table(path):
    return Table.from_csv(path.read_text())


def error_record(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


# eig end to end
# ---------------------------------------------------------------------------


def test_eig_three_levels(tmp_path):
    assert main(["eig", "--nu", "0.5", "--levels", "3", "--out", str(tmp_path)]) == EXIT_OK
    table = read_table(tmp_path / "eig.csv")
    assert table.columns == ("k", "kappa", "n", "lambda", "residual", "bracket_lo", "bracket_hi")
    lam = table.column("lambda")
    assert lam.size == 3 and np.all(np.diff(lam) > 0)
    assert abs(lam[0] - np.sqrt(0.75)) <= 1e-6
    params = json.loads(table.comment)
    assert params["nu"] == 0.5 and params["levels"] == 3 and params["subcommand"] == "eig"


def test_eig_convergence_table_and_plot(tmp_path):
    argv = ["eig", "--nu", "0.5", "--n", "96", "--converge", "--plot", "--out", str(tmp_path)]
    assert main(argv) == EXIT_OK
    conv = read_table(tmp_path / "convergence.csv")
    assert conv.column("n").tolist() == [12, 24, 48, 96]
    assert np.all(np.diff(conv.column("lambda")) <= 1e-9)
    root = ET.parse(tmp_path / "convergence.svg").getroot()
    assert len(root.findall(f"{SVG}circle")) == 4


def test_missing_required_key_writes_nothing(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["eig", "--out", str(out)]) == EXIT_USAGE
    assert not out.exists()
    rec = error_record(capsys)
    assert rec["error"] == "usage" and rec["exit_status"] == EXIT_USAGE
    assert "nu" in rec["message"]


@pytest.mark.parametrize(
    "argv",
    [
        ["eig", "--nu", "1.0"],
        ["eig", "--nu", "0.5", "--n", "4"],
        ["eig", "--nu", "0.5", "--kappa", "0"],
        ["eig", "--nu", "abc"],
        ["eig", "--nu", "0.5", "--converge", "--n", "100"],
        ["eig", "--nu", "0.5", "--potential-file", "/nonexistent/v.txt"],
        ["soliton", "--omega", "1.0"],
        ["soliton", "--g", "cubic"],
        ["magnetic", "--nu", "0.5", "--B", "1,-2"],
        ["limit", "--c-values", "1,5"],
        ["hardy", "--inequality", "nope"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv, tmp_path):
    assert main(argv + ["--out", str(tmp_path / "x")]) == EXIT_USAGE
    assert not (tmp_path / "x").exists()


def test_numerical_failure_exit_code(tmp_path, capsys):
    # the free operator has no gap level to find
    assert main(["eig", "--nu", "0", "--r-max", "20", "--n", "40", "--out", str(tmp_path)]) == EXIT_NUMERICAL
    rec = json.loads((tmp_path / "error.json").read_text())
    assert rec["error"] == "numerical" and rec["exit_status"] == EXIT_NUMERICAL
    assert error_record(capsys) == rec
    assert not list(tmp_path.glob("*.csv"))


def test_hypothesis_failure_exit_code(tmp_path, monkeypatch):
    def unmet(cfg, comment):
        raise HypothesisUnmet("projection vanishes")

    monkeypatch.setitem(cli.COMMANDS, "hardy", unmet)
    assert main(["hardy", "--out", str(tmp_path)]) == EXIT_HYPOTHESIS
    assert json.loads((tmp_path / "error.json").read_text())["error"] == "hypothesis-unmet"


# configuration
# ---------------------------------------------------------------------------


def test_config_file_overridden_by_flags(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"nu": 0.3, "levels": 2, "n": 64, "c": 2.0}))
    cfg = parse_config(["eig", "--config", str(path), "--nu", "0.5"])
    assert cfg.params["nu"] == 0.5 and cfg.params["levels"] == 2
    assert cfg.params["n"] == 64 and cfg.params["c"] == 2.0


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    with pytest.raises(UsageError):
        parse_config(["eig", "--config", str(bad)])
    with pytest.raises(UsageError):
        parse_config(["eig", "--config", str(tmp_path / "missing.json")])
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"nu": 0.5, "colour": "red"}))
    with pytest.raises(UsageError):
        parse_config(["eig", "--config", str(unknown)])


def test_build_defaults_and_types():
    cfg = RunConfig.build("magnetic", {"nu": "0.9", "B": "1,10,100", "seed": 3})
    assert cfg.params["B"] == [1.0, 10.0, 100.0] and cfg.seed == 3
    assert cfg.params["n_half"] == 100 and cfg.plot is False
    cfg = RunConfig.build("soliton", {"g": "power:0.5"})
    assert cfg.params["branches"] == 1 and cfg.params["omega"] == 0.5


def test_threads_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("GAPSOLVE_THREADS", "zero")
    assert main(["hardy", "--samples", "2", "--out", str(tmp_path / "a")]) == EXIT_USAGE
    monkeypatch.setenv("GAPSOLVE_THREADS", "1")
    assert main(["hardy", "--samples", "3", "--out", str(tmp_path / "one")]) == EXIT_OK
    monkeypatch.setenv("GAPSOLVE_THREADS", "3")
    assert main(["hardy", "--samples", "3", "--out", str(tmp_path / "three")]) == EXIT_OK
    assert (tmp_path / "one" / "hardy.csv").read_bytes() == (tmp_path / "three" / "hardy.csv").read_bytes()


# other subcommands
# ---------------------------------------------------------------------------


def test_soliton_two_branches(tmp_path):
    assert main(["soliton", "--g", "soler", "--omega", "0.5", "--branches", "2", "--out", str(tmp_path)]) == EXIT_OK
    table = read_table(tmp_path / "branches.csv")
    x = table.column("x_n")
    assert x.size == 2 and x[0] < x[1]
    assert table.column("nodes_v").tolist() == [0, 1]
    assert (tmp_path / "profile_2.csv").exists()


def test_lambda_t_agrees(tmp_path):
    assert main(["lambda-t", "--nu", "0.5", "--n", "96", "--out", str(tmp_path)]) == EXIT_OK
    assert abs(read_table(tmp_path / "lambda_t.csv").column("difference")[0]) <= 1e-8


def test_magnetic_table(tmp_path):
    assert main(["magnetic", "--nu", "0.9", "--B", "1,10", "--n-half", "40", "--out", str(tmp_path)]) == EXIT_OK
    c0 = read_table(tmp_path / "c0.csv").column("c0")
    assert c0[0] > c0[1]


def test_hardy_table(tmp_path):
    assert main(["hardy", "--inequality", "Hardyclass", "--samples", "5", "--out", str(tmp_path)]) == EXIT_OK
    table = read_table(tmp_path / "hardy.csv")
    assert table.column("seed").tolist() == [0, 1, 2, 3, 4]
    assert np.all(table.column("margin") >= -1e-10 * table.column("rhs"))


# tables and plots
# ---------------------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=6))
def test_csv_float_roundtrip(values):
    table = Table(("i", "x"), tuple((i, v) for i, v in enumerate(values)), '{"a": 1}')
    back = Table.from_csv(table.to_csv())
    assert back.comment == '{"a": 1}'
    assert back.column("x").tolist() == [float(v) for v in values]


def test_table_row_length_checked():
    with pytest.raises(ValueError):
        Table(("a", "b"), ((1,),))


def convergence_table():
    rows = ((25, 0.8661, float("nan")), (50, 0.86603, 7e-5), (100, 0.866026, 4e-6), (200, 0.8660254, 6e-7))
    return Table(("n", "lambda", "error_estimate"), rows, '{"nu": 0.5}')


def test_convergence_plot_markers():
    svg = emit_plot(convergence_table(), "convergence")
    root = ET.fromstring(svg)
    assert len(root.findall(f"{SVG}circle")) == 4
    (line,) = root.findall(f"{SVG}polyline")
    pts = [tuple(map(float, p.split(","))) for p in line.get("points").split()]
    xs, ys = zip(*pts)
    assert list(xs) == sorted(xs)
    # lambda decreases, so screen y increases
    assert list(ys) == sorted(ys)
    assert root.find(f"{SVG}metadata").text == '{"nu": 0.5}'


def test_profile_plot_two_curves():
    r = np.linspace(0, 5, 20)
    table = Table(("r", "u", "v"), tuple(zip(r, r * np.exp(-r), np.exp(-r))))
    root = ET.fromstring(emit_plot(table, "profile"))
    assert [p.get("class") for p in root.findall(f"{SVG}polyline")] == ["u", "v"]


def test_sweep_plot_skips_text_columns():
    table = Table(("c", "mu", "label"), ((5.0, -0.51, "a"), (10.0, -0.501, "b")))
    root = ET.fromstring(emit_plot(table, "sweep"))
    assert [p.get("class") for p in root.findall(f"{SVG}polyline")] == ["mu"]


def test_plot_deterministic(tmp_path):
    a = emit_plot(convergence_table(), "convergence", tmp_path / "a.svg")
    emit_plot(convergence_table(), "convergence", tmp_path / "b.svg")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
    assert not re.search(r"\d{4}-\d{2}-\d{2}", a)


def test_plot_rejects_bad_input():
    with pytest.raises(ValueError):
        emit_plot(Table(("n", "lambda"), ()), "convergence")
    with pytest.raises(ValueError):
        emit_plot(convergence_table(), "histogram")


def test_fmt_values():
    assert cli._fmt(True) == "true"
    assert cli._fmt(np.int64(3)) == "3"
    assert cli._fmt(0.1) == "0.1"
    assert cli._fmt(float("nan")) == "nan" and math.isnan(float(cli._fmt(float("nan"))))
