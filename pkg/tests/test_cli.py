"""Command line interface: subcommands, formats, exit codes, determinism."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from meanlab import cli
from meanlab import expr as ex

EBM_WITNESS = [
    "check-equality",
    "--f", "sin(x)", "--g", "cos(x)", "--F", "x", "--G", "1",
    "--measure", "ebm", "--lo", "-0.7", "--hi", "0.7", "--grid", "10",
]


def run_cli(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, argv):
    code, out, err = run_cli(capsys, argv + ["--format", "json"])
    assert code == 0, err
    return json.loads(out)


class TestEval:
    def test_geometric_mean_text(self, capsys):
        code, out, err = run_cli(
            capsys,
            ["eval", "--f", "log(x)", "--g", "1", "--measure", "ebm",
             "--x", "1", "--y", "4"],
        )
        assert code == 0
        assert out.strip() == "2.0"

    def test_json_envelope(self, capsys):
        doc = run_json(
            capsys,
            ["eval", "--f", "log(x)", "--g", "1", "--measure", "ebm",
             "--x", "1", "--y", "4"],
        )
        assert doc["schema"] == "meanlab-report/1"
        assert doc["command"] == "eval"
        assert doc["version"]
        assert doc["result"]["value"] == pytest.approx(2.0, abs=1e-10)
        assert doc["config"]["measure"] == {"type": "atoms", "atoms": [[0.0, 0.5], [1.0, 0.5]]}

    def test_default_interval_pads_hull(self, capsys):
        doc = run_json(
            capsys,
            ["eval", "--f", "x", "--g", "1", "--x", "2", "--y", "3"],
        )
        # pad is 0.05 * (span + 1) around the hull of the arguments
        assert doc["config"]["lo"] == pytest.approx(2.0 - 0.1)
        assert doc["config"]["hi"] == pytest.approx(3.0 + 0.1)

    def test_explicit_interval_respected(self, capsys):
        doc = run_json(
            capsys,
            ["eval", "--f", "x", "--g", "1", "--x", "2", "--y", "3",
             "--lo", "1", "--hi", "5"],
        )
        assert doc["config"]["lo"] == 1.0 and doc["config"]["hi"] == 5.0

    def test_parse_error_exits_2(self, capsys):
        code, out, err = run_cli(
            capsys, ["eval", "--f", "bogus(", "--g", "1", "--x", "1", "--y", "2"]
        )
        assert code == 2
        assert "ParseError" in err

    def test_point_outside_interval_exits_2(self, capsys):
        code, out, err = run_cli(
            capsys,
            ["eval", "--f", "x", "--g", "1", "--x", "0.1", "--y", "0.9",
             "--lo", "0.2", "--hi", "1.0"],
        )
        assert code == 2
        assert "OutOfInterval" in err


class TestMoments:
    def test_lebesgue_text_with_regime(self, capsys):
        code, out, err = run_cli(capsys, ["moments", "--measure", "lebesgue", "--nmax", "6"])
        assert code == 0
        assert "mu2 = 0.0833333333333333" in out
        assert "regime = even_symmetric" in out
        assert "p = 0.666666666666667" in out

    def test_small_nmax_skips_regime(self, capsys):
        code, out, err = run_cli(capsys, ["moments", "--measure", "ebm", "--nmax", "4"])
        assert code == 0
        assert "regime" not in out
        assert "mu4 = 0.0625" in out

    def test_json_values(self, capsys):
        doc = run_json(capsys, ["moments", "--measure", "lebesgue", "--nmax", "6"])
        mu = doc["result"]["mu"]
        assert mu[2] == pytest.approx(1.0 / 12.0, abs=1e-14)
        assert mu[4] == pytest.approx(1.0 / 80.0, abs=1e-14)
        assert mu[6] == pytest.approx(1.0 / 448.0, abs=1e-14)
        assert doc["result"]["regime"]["p"] == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_unknown_preset_exits_2(self, capsys):
        code, out, err = run_cli(capsys, ["moments", "--measure", "nope"])
        assert code == 2
        assert "unknown measure preset" in err


class TestClassify:
    def test_binary_symmetric(self, capsys):
        doc = run_json(capsys, ["classify", "--measure", "ebm"])
        assert doc["result"]["regime"] == "even_symmetric"
        assert doc["result"]["p"] == pytest.approx(2.0, abs=1e-14)

    def test_json_measure_argument(self, capsys):
        spec = json.dumps({"type": "atoms", "atoms": [[0.0, 0.3], [0.7, 0.7]]})
        doc = run_json(capsys, ["classify", "--measure", spec])
        assert doc["result"]["regime"] == "mu3_nonzero"


class TestDerivatives:
    def test_closed_form_values(self, capsys):
        doc = run_json(
            capsys,
            ["derivatives", "--f", "log(x)", "--g", "1", "--measure", "ebm",
             "--x", "1", "--lo", "0.25", "--hi", "4"],
        )
        ms = doc["result"]["closed_form"]
        assert ms[1] == pytest.approx(-0.25, abs=1e-12)
        assert ms[3] == pytest.approx(-3.0 / 16.0, abs=1e-12)
        assert ms[5] == pytest.approx(-45.0 / 64.0, abs=1e-12)
        assert "numeric" not in doc["result"]

    def test_numeric_cross_check(self, capsys):
        doc = run_json(
            capsys,
            ["derivatives", "--f", "log(x)", "--g", "1", "--measure", "ebm",
             "--x", "1", "--lo", "0.25", "--hi", "4", "--numeric", "--radius", "0.5"],
        )
        closed = doc["result"]["closed_form"]
        numeric = doc["result"]["numeric"]
        assert numeric[1] == pytest.approx(closed[1], abs=1e-6)
        assert doc["config"]["radius"] == 0.5


class TestCheckEquality:
    def test_binary_symmetric_battery(self, capsys):
        doc = run_json(capsys, EBM_WITNESS)
        result = doc["result"]
        assert result["battery"] == "EBM"
        assert result["all_hold"] is True
        assert result["fitted"]["alpha"] == pytest.approx(-1.0, abs=1e-8)
        assert result["fitted"]["beta"] == pytest.approx(0.0, abs=1e-8)

    def test_text_battery_lines(self, capsys):
        code, out, err = run_cli(capsys, EBM_WITNESS)
        assert code == 0
        assert out.count("[PASS]") == 9
        assert "verdict: all assertions hold" in out

    def test_lebesgue_dispatch(self, capsys):
        argv = [a if a != "ebm" else "lebesgue" for a in EBM_WITNESS]
        doc = run_json(capsys, argv)
        assert doc["result"]["battery"] == "ECM"
        assert doc["result"]["all_hold"] is True

    def test_third_moment_dispatch(self, capsys):
        spec = json.dumps({"type": "atoms", "atoms": [[0.0, 0.3], [0.7, 0.7]]})
        argv = [a if a != "ebm" else spec for a in EBM_WITNESS]
        doc = run_json(capsys, argv)
        assert doc["result"]["battery"] == "N1.5"
        assert doc["result"]["all_hold"] is False

    def test_split_dispatch(self, capsys):
        s = 0.21378583129651413
        spec = json.dumps(
            {"type": "atoms", "atoms": [[0.0, 0.6 - s], [0.6, 0.4], [1.0, s]]}
        )
        argv = [a if a != "ebm" else spec for a in EBM_WITNESS]
        doc = run_json(capsys, argv)
        assert doc["result"]["battery"] == "N2.5"
        assert doc["result"]["alternative"] == "power_law"
        assert doc["result"]["holds"] is False

    def test_even_fragment_dispatch(self, capsys):
        spec = json.dumps(
            {"type": "atoms", "atoms": [[0.0, 1 / 6], [0.5, 2 / 3], [1.0, 1 / 6]]}
        )
        argv = [a if a != "ebm" else spec for a in EBM_WITNESS]
        doc = run_json(capsys, argv)
        assert doc["result"]["battery"] == "N3"
        assert doc["result"]["alternative"] == "iii"
        assert doc["result"]["holds"] is True
        assert doc["result"]["r"] == pytest.approx(-1.0, abs=1e-10)

    def test_tolerance_override_echoed(self, capsys):
        doc = run_json(capsys, EBM_WITNESS + ["--tol", "mean_gap=1e-22"])
        assert doc["config"]["tolerances"] == {"mean_gap": 1e-22}
        assert doc["result"]["tolerances"]["mean_gap"] == 1e-22
        assert doc["result"]["failing"] == ["i"]

    def test_bad_tolerance_exits_2(self, capsys):
        code, out, err = run_cli(capsys, EBM_WITNESS + ["--tol", "nonsense"])
        assert code == 2

    def test_nonpositive_tolerance_exits_2(self, capsys):
        code, out, err = run_cli(capsys, EBM_WITNESS + ["--tol", "mean_gap=0"])
        assert code == 2
        assert "positive" in err


class TestMakePair:
    def test_trig_text(self, capsys):
        code, out, err = run_cli(
            capsys, ["make-pair", "--alpha", "-1", "--phi", "x", "--lo", "-0.7", "--hi", "0.7"]
        )
        assert code == 0
        assert "f = sin(x)" in out and "g = cos(x)" in out

    def test_result_round_trips_through_parser(self, capsys):
        doc = run_json(
            capsys,
            ["make-pair", "--alpha", "2.5", "--phi", "0.5 * x", "--cauchy",
             "--lo", "-0.4", "--hi", "0.4"],
        )
        pair = ex.validate_pair(doc["result"]["f"], doc["result"]["g"], (-0.4, 0.4))
        assert pair.g_at(0.0) > 0.0

    def test_invalid_domain_exits_2(self, capsys):
        code, out, err = run_cli(
            capsys, ["make-pair", "--alpha", "-1", "--phi", "x", "--lo", "-2", "--hi", "2"]
        )
        assert code == 2
        assert "NotPositive" in err


class TestPlumbing:
    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, err = run_cli(
            capsys,
            ["moments", "--measure", "ebm", "--format", "json", "--output", str(target)],
        )
        assert code == 0
        assert out == ""
        doc = json.loads(target.read_text())
        assert doc["command"] == "moments"

    def test_missing_required_flag_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["eval", "--f", "x", "--g", "1", "--x", "1"])
        assert exc.value.code == 2

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--version"])
        assert exc.value.code == 0
        assert "meanlab" in capsys.readouterr().out

    def test_subprocess_runs_are_byte_identical(self):
        argv = [sys.executable, "-m", "meanlab.cli"] + EBM_WITNESS + ["--format", "json"]
        first = subprocess.run(argv, capture_output=True, text=True, check=True)
        second = subprocess.run(argv, capture_output=True, text=True, check=True)
        assert first.stdout == second.stdout
        assert first.stdout.strip()
