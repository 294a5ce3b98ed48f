import json

import numpy as np
import pytest
from click.testing import CliRunner

from convexchains import records
from convexchains.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestSolve:
    def test_standard(self, runner, tmp_path):
        f = write(tmp_path, "pts.txt", "# three points on the arc\n0.25 0.25\n\n0.04 0.64\n0.64 0.04\n0.5 0.4\n")
        res = runner.invoke(main, ["solve", "--input", f])
        assert res.exit_code == 0, res.output
        rec = json.loads(res.output)
        assert rec["length"] == 3 and sorted(rec["indices"]) == [0, 1, 2]

    def test_worked_example(self, runner, tmp_path):
        f = write(tmp_path, "pts.txt", "0.1 0.4\n0.5 0.1\n0.2 0.7\n")
        rec = json.loads(runner.invoke(main, ["solve", "--input", f]).output)
        assert rec["length"] == 2 and rec["indices"] == [0, 1]

    def test_empty_file(self, runner, tmp_path):
        f = write(tmp_path, "pts.txt", "# nothing here\n")
        res = runner.invoke(main, ["solve", "--input", f])
        assert res.exit_code == 0 and json.loads(res.output)["length"] == 0

    def test_custom_triangle_and_band(self, runner, tmp_path):
        # doubled triangle; the second point is on the parabola, the first is not
        f = write(tmp_path, "pts.txt", "0.2 0.2\n0.5 0.5\n")
        tri = ["--triangle", "0 2 0 0 2 0"]
        res = runner.invoke(main, ["solve", "--input", f, *tri])
        assert res.exit_code == 0, res.output
        assert json.loads(res.output)["length"] == 1
        res = runner.invoke(main, ["solve", "--input", f, *tri, "--band", "0.05"])
        assert json.loads(res.output) == {"schema": 1, "length": 1, "indices": [1]}

    def test_parse_error(self, runner, tmp_path):
        f = write(tmp_path, "pts.txt", "0.1 0.1\n0.2 oops\n")
        res = runner.invoke(main, ["solve", "--input", f])
        assert res.exit_code == 2 and "line 2" in res.output

    def test_missing_file(self, runner, tmp_path):
        assert runner.invoke(main, ["solve", "--input", str(tmp_path / "nope")]).exit_code == 2

    def test_outside(self, runner, tmp_path):
        f = write(tmp_path, "pts.txt", "0.1 0.1\n0.9 0.9\n")
        res = runner.invoke(main, ["solve", "--input", f])
        assert res.exit_code == 3 and "(0.9, 0.9)" in res.output

    def test_bad_triangle(self, runner, tmp_path):
        f = write(tmp_path, "pts.txt", "0.1 0.1\n")
        assert runner.invoke(main, ["solve", "--input", f, "--triangle", "0 0 1 1 2 2"]).exit_code == 2


class TestSimulate:
    def test_roundtrip(self, runner, tmp_path):
        out = tmp_path / "sim.csv"
        res = runner.invoke(main, ["simulate", "--n", "200", "--reps", "6", "--seed", "3", "--out", str(out)])
        assert res.exit_code == 0, res.output
        stdout = json.loads(res.output.strip().splitlines()[-1])
        assert "elapsedSeconds" in stdout
        text = out.read_text()
        assert text.startswith("replicate,seed,length\n") and "elapsedSeconds" not in text
        back = records.read_simulation(out)
        assert back.mean_length == stdout["meanLength"] and len(back.lengths) == 6
        assert back.normalized_mean == pytest.approx(np.mean(back.lengths) / 200 ** (1 / 3))

    def test_unwritable(self, runner, tmp_path):
        out = tmp_path / "missing" / "sim.csv"
        res = runner.invoke(main, ["simulate", "--n", "10", "--reps", "2", "--seed", "1", "--out", str(out)])
        assert res.exit_code == 4

    def test_usage(self, runner, tmp_path):
        res = runner.invoke(main, ["simulate", "--n", "0", "--reps", "2", "--seed", "1", "--out", str(tmp_path / "x")])
        assert res.exit_code == 2

    def test_single_rep_warning(self, runner, tmp_path):
        res = runner.invoke(main, ["simulate", "--n", "20", "--reps", "1", "--seed", "1", "--out", str(tmp_path / "x")])
        assert res.exit_code == 0 and "warning" in res.output

    def test_poisson(self, runner, tmp_path):
        args = ["simulate", "--n", "100", "--reps", "3", "--seed", "1", "--model", "poisson", "--out", str(tmp_path / "x")]
        res = runner.invoke(main, args)
        assert res.exit_code == 0 and json.loads(res.output)["model"] == "poisson"


class TestOtherCommands:
    def test_probability_chain(self, runner):
        res = runner.invoke(main, ["probability", "chain", "--k", "3", "--reps", "20000", "--seed", "1"])
        assert res.exit_code == 0
        rec = json.loads(res.output)
        assert rec["exact"] == pytest.approx(1 / 18) and abs(rec["estimate"] - 1 / 18) < 4 * rec["stdError"]

    def test_probability_chain_k1(self, runner):
        rec = json.loads(runner.invoke(main, ["probability", "chain", "--k", "1", "--reps", "100", "--seed", "1"]).output)
        assert rec["estimate"] == 1.0 and rec["exact"] == 1.0

    def test_probability_bad_kind(self, runner):
        assert runner.invoke(main, ["probability", "triangle", "--reps", "10", "--seed", "1"]).exit_code == 2

    def test_probability_convex_position(self, runner):
        res = runner.invoke(main, ["probability", "convex-position", "--n", "4", "--reps", "20000", "--seed", "1"])
        assert res.exit_code == 0 and json.loads(res.output)["exact"] == pytest.approx(25 / 36)

    def test_geometry_check(self, runner):
        res = runner.invoke(main, ["geometry-check", "--samples", "2000", "--seed", "1"])
        assert res.exit_code == 0 and "FAIL" not in res.output and res.output.count("PASS") == 5

    def test_geometry_check_violation_exit(self, runner, monkeypatch):
        from convexchains import experiments as ex

        bad = ex.PropertyResult("blaschke_deficit", checked=1, passed=0, counterexamples=[(1, 0, 0)])
        monkeypatch.setattr(ex, "run_geometry_checks", lambda samples, seed: [bad])
        res = runner.invoke(main, ["geometry-check", "--samples", "10", "--seed", "1"])
        assert res.exit_code == 1 and "counterexample" in res.output

    def test_limit_shape_roundtrip(self, runner, tmp_path):
        out = tmp_path / "ls.csv"
        res = runner.invoke(main, ["limit-shape", "--n", "300", "--reps", "4", "--seed", "2", "--out", str(out)])
        assert res.exit_code == 0, res.output
        back = records.read_limit_shape(out)
        assert len(back.rows) == 4
        assert json.loads(res.output)["quantiles"] == pytest.approx(back.quantiles())

    def test_limit_shape_zero_reps(self, runner, tmp_path):
        args = ["limit-shape", "--n", "300", "--reps", "0", "--seed", "2", "--out", str(tmp_path / "x")]
        assert runner.invoke(main, args).exit_code == 2


@pytest.mark.parametrize(
    "command",
    [
        ["simulate", "--n", "400", "--reps", "8", "--seed", "11"],
        ["simulate", "--n", "300", "--reps", "5", "--seed", "11", "--model", "poisson", "--band", "0.3"],
        ["limit-shape", "--n", "400", "--reps", "5", "--seed", "12"],
    ],
)
def test_files_identical_across_threads(runner, tmp_path, command):
    blobs = []
    for i, threads in enumerate(["1", "1", "3"]):
        out = tmp_path / f"out{i}.csv"
        res = runner.invoke(main, [*command, "--out", str(out), "--threads", threads])
        assert res.exit_code == 0, res.output
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1] == blobs[2]


def test_point_parser():
    pts = records.parse_points("# c\n1 2\n\n  3.5   4e-1 \n")
    assert pts.tolist() == [[1, 2], [3.5, 0.4]]
    assert records.parse_points("").shape == (0, 2)
    for bad in ("1 2 3\n", "1\n", "nan 1\n"):
        with pytest.raises(records.PointFileError):
            records.parse_points(bad)
