import json
import math
import subprocess
import sys

import pytest

from spinroots.cli import _encode, main, run

MEASURE_KEYS = {
    "input", "mode", "chain", "matrix", "spectrum", "shots",
    "histogram", "roots", "residuals", "seed",
}


def run_json(*args):
    text, code = run([*args, "--format", "json"])
    return json.loads(text), code


class TestCompanion:
    def test_not_real(self):
        report, code = run_json("companion", "--poly", "x^2+1")
        assert code == 2
        assert report["verdict"]["verdict"] == "not all zeros real"
        assert report["verdict"]["d_k"] == -1.0

    def test_cubic_coeffs(self):
        report, code = run_json("companion", "--coeffs", "1,-6,11,-6")
        assert code == 0
        assert report["matrix"]["diag"] == [2.0, 2.0, 2.0]
        assert report["matrix"]["offdiag"] == pytest.approx([0.8164965809277260, 0.5773502691896258], abs=1e-15)
        assert report["chain"]["d_exact"] == ["2/3", "1/3"]
        assert report["identity"]["max_residual"] <= 1e-8

    def test_exchange(self):
        report, _ = run_json("companion", "--poly", "x^2-1")
        assert report["matrix"] == {"diag": [0.0, 0.0], "offdiag": [1.0]}

    def test_degree_anomaly(self):
        report, code = run_json("companion", "--poly", "x^3-1")
        assert code == 2
        assert report["verdict"]["error"] == "DegreeAnomaly"

    def test_float_mode(self):
        report, code = run_json("companion", "--coeffs", "1,-6,11,-6", "--mode", "float")
        assert code == 0 and report["mode"] == "float"
        assert "d_exact" not in report["chain"]
        assert report["chain"]["d"] == pytest.approx([2 / 3, 1 / 3], abs=1e-14)


class TestMeasure:
    def test_sequential(self):
        report, code = run_json("measure", "--coeffs", "1,-6,11,-6", "--shots", "100", "--seed", "7")
        assert code == 0
        assert MEASURE_KEYS <= report.keys()
        assert report["complete"] is True
        assert report["roots"] == pytest.approx([1, 2, 3], abs=1e-12)
        assert report["reconstructed_descending"] == pytest.approx([1, -6, 11, -6], abs=1e-10)
        assert all(r <= 1e-10 for r in report["residuals"])
        assert report["seed"] == 7

    def test_parallel(self):
        report, code = run_json("measure", "--poly", "x^2-1", "--parallel", "2", "--seed", "1")
        assert code == 0
        assert report["shots"] == 2
        assert len(report["outcomes"]) == 2
        assert all(abs(abs(o[2]) - 1) < 1e-12 for o in report["outcomes"])

    def test_byte_identical(self):
        args = ["measure", "--coeffs", "1,-6,11,-6", "--seed", "42", "--format", "json"]
        assert run(args)[0] == run(args)[0]

    def test_thread_count_irrelevant(self):
        base = ["measure", "--coeffs", "1,-10,35,-50,24", "--parallel", "50", "--seed", "9", "--format", "json"]
        assert run(base)[0] == run(base + ["--workers", "4"])[0]

    def test_seed_zero_is_reported(self):
        report, _ = run_json("measure", "--poly", "x^2-1", "--seed", "0")
        assert report["seed"] != 0
        again, _ = run_json("measure", "--poly", "x^2-1", "--seed", str(report["seed"]))
        assert again["outcomes"] == report["outcomes"]

    def test_incomplete_exits_zero(self):
        report, code = run_json("measure", "--coeffs", "1,-6,11,-6", "--shots", "1", "--seed", "3")
        assert code == 0 and report["complete"] is False

    def test_not_real_keeps_schema(self):
        report, code = run_json("measure", "--poly", "x^2+1", "--seed", "5")
        assert code == 2
        assert MEASURE_KEYS <= report.keys()
        assert report["spectrum"] is None


class TestMultipole:
    def test_exchange(self):
        report, code = run_json("multipole", "--poly", "x^2-1")
        assert code == 0
        nonzero = [c for c in report["coefficients"] if abs(c["c"]) > 1e-12]
        assert len(nonzero) == 1
        assert nonzero[0]["word"] == "x" and nonzero[0]["c"] == pytest.approx(1.0)

    def test_identity(self):
        report, _ = run_json("multipole", "--poly", "(x-1)^2")
        nonzero = [c for c in report["coefficients"] if abs(c["c"]) > 1e-12]
        assert [(c["index"], c["c"]) for c in nonzero] == [(0, 1.0)]

    def test_count(self):
        report, _ = run_json("multipole", "--poly", "(x-1)*(x-2)*(x+3)*(x-0.5)")
        assert len(report["coefficients"]) == 16
        assert report["residuals"]["gram_max_deviation"] <= 1e-12


class TestVerify:
    def test_cubic_passes(self):
        report, code = run_json("verify", "--coeffs", "1,-6,11,-6")
        assert code == 0
        assert all(c["passed"] for c in report["checks"])

    def test_degenerate_passes(self):
        report, code = run_json("verify", "--poly", "(x-1)^2")
        assert code == 0
        assert report["chain"]["flags"] == [True]

    def test_not_real(self):
        report, code = run_json("verify", "--poly", "x^2+1")
        assert code == 2
        assert report["oracle"]["complex_present"] is True

    def test_degree_twelve(self):
        expr = "*".join(f"(x-{k}/3)" for k in range(-6, 6))
        _, code = run_json("verify", "--poly", expr)
        assert code == 0

    def test_failure_exit_1(self):
        # coarse bisection brackets push the spectrum away from the oracle roots
        report, code = run_json("verify", "--coeffs", "1,-6,11,-6", "--tol-eig", "0.01")
        assert code == 1
        assert report["failed"] == "spectrum_vs_oracle"


class TestUsage:
    @pytest.mark.parametrize(
        "argv",
        [
            ["companion", "--poly", "x^2 + y"],
            ["companion", "--poly", "x^"],
            ["companion", "--coeffs", "1,a"],
            ["companion", "--coeffs", "5"],
            ["companion", "--coeffs", "1,inf"],
            ["companion"],
            ["bogus", "--poly", "x"],
            ["measure", "--poly", "x", "--seed", "-1"],
            ["measure", "--poly", "x", "--shots", "0"],
        ],
    )
    def test_exit_3(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            sys.exit(main(argv))
        assert exc.value.code == 3

    def test_subprocess_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "spinroots", "companion", "--poly", "x^2+1"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 2
        assert "not all zeros real" in proc.stdout

    def test_text_output(self, capsys):
        assert main(["measure", "--coeffs", "1,-6,11,-6", "--seed", "7"]) == 0
        out = capsys.readouterr().out
        assert "complete=True" in out


class TestEncoding:
    def test_seventeen_digits(self):
        assert _encode(0.1) == "0.10000000000000001"
        assert _encode(1.0) == "1.0"
        assert _encode(2 / 3) == "0.66666666666666663"

    def test_round_trip(self):
        values = [math.pi, -1 / 3, 2.0**-1074, 1e308]
        assert json.loads(_encode(values)) == values

    def test_structures(self):
        obj = {"a": [1, True, None, "s"], "b": {"c": 0.5}}
        assert json.loads(_encode(obj)) == obj
