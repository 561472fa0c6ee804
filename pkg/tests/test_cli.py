"""Tests for the command-line surface and its exit codes."""

import json
import logging

import pytest

from kirchhoff_lab.main import COMMANDS, dispatch


@pytest.fixture(autouse=True)
def quiet_environment(monkeypatch):
    monkeypatch.setenv("KIRCHHOFF_LOG", "quiet")
    monkeypatch.delenv("KIRCHHOFF_VERBOSE", raising=False)
    yield
    logging.getLogger().handlers.clear()


PAIR_KEYS = {"ok", "mu_min", "mu_max", "s_min", "s_max", "worst_super_margin", "worst_sub_margin", "worst_nodes"}


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


def _stderr_json(capsys):
    err = capsys.readouterr().err
    return json.loads(err.strip().splitlines()[-1])


class TestSpectralCommands:
    """Tests for eigen and torsion."""

    def test_eigen(self, capsys):
        assert dispatch(["eigen", "--a", "0", "--b", "3.141592653589793", "--n", "2001"]) == 0
        report = _stdout_json(capsys)
        assert abs(report["lambda1"] - 1.0) <= 1e-5
        assert report["n"] == 2001
        assert {"lambda1", "n", "domain"} <= set(report)
        assert report["domain"] == {"a": 0.0, "b": 3.141592653589793}
        assert "a" not in report and "b" not in report

    def test_torsion_with_file(self, capsys, tmp_path):
        out = tmp_path / "e.csv"
        assert dispatch(["torsion", "--a", "0", "--b", "1", "--n", "401", "--out", str(out)]) == 0
        report = _stdout_json(capsys)
        assert report["center"] == pytest.approx(0.125)
        assert {"sup_e", "n", "domain"} <= set(report)
        assert "sup" not in report
        assert report["sup_e"] == pytest.approx(0.125)
        assert report["domain"] == {"a": 0.0, "b": 1.0}
        assert out.read_text(encoding="utf-8").startswith("x,value\n")

    def test_invalid_interval(self, capsys):
        assert dispatch(["eigen", "--a", "1", "--b", "0", "--n", "11"]) == 2
        assert _stderr_json(capsys)["error"] == "ConfigError"


class TestClassifyCommand:
    """Tests for classify-m."""

    def test_power_shift(self, capsys):
        assert dispatch(["classify-m", "--a", "1", "--b", "1", "--c", "0", "--p", "1"]) == 0
        flags = _stdout_json(capsys)
        assert flags["m2"] is True
        assert flags["monotonicity"] == "increasing"

    def test_constant(self, capsys):
        assert dispatch(["classify-m", "--family", "constant", "--m", "2"]) == 0
        assert _stdout_json(capsys)["m1"] is True


class TestCounterexampleCommands:
    """Tests for counterexample verify and search."""

    def test_verify_case1(self, capsys):
        argv = ["counterexample", "verify", "--a", "1", "--b", "10000", "--c", "0", "--p", "3", "--rho", "0.405"]
        assert dispatch(argv) == 0
        witness = _stdout_json(capsys)
        assert witness["valid"] is True
        assert witness["condi_margin"] == pytest.approx(706.0, abs=1.0)

    def test_verify_constant_rejected(self, capsys):
        argv = ["counterexample", "verify", "--a", "1", "--b", "0", "--rho", "0.3"]
        assert dispatch(argv) == 1
        assert _stdout_json(capsys)["valid"] is False

    def test_search_case2(self, capsys):
        argv = ["counterexample", "search", "--case", "2", "--a", "1", "--c", "1", "--rho", "0.1"]
        assert dispatch(argv) == 0
        assert _stdout_json(capsys)["p"] == -2

    def test_search_without_witness(self, capsys):
        argv = ["counterexample", "search", "--case", "1", "--b", "1e-6"]
        assert dispatch(argv) == 1
        assert _stderr_json(capsys)["error"] == "NoWitness"


class TestRunCommands:
    """Tests for solve and verify-pair."""

    SMALL_SUBLINEAR = ["--model", "sublinear", "--lambda", "1", "--q", "0.5", "--n", "201",
                       "--m-family", "power_shift", "--m-a", "1", "--m-b", "1", "--m-c", "0", "--m-p", "1"]

    def test_solve_writes_solution(self, capsys, tmp_path):
        out = tmp_path / "u.csv"
        assert dispatch(["solve", *self.SMALL_SUBLINEAR, "--out", str(out)]) == 0
        report = _stdout_json(capsys)
        assert report["converged"] is True
        assert report["status"] == "ok"
        assert report["construction"]["pair"]["ok"] is True
        assert set(report["construction"]["pair"]) == PAIR_KEYS
        assert len(out.read_text(encoding="utf-8").splitlines()) == 202

    def test_solve_is_deterministic(self, capsys):
        dispatch(["solve", *self.SMALL_SUBLINEAR])
        first = capsys.readouterr().out
        dispatch(["solve", *self.SMALL_SUBLINEAR])
        assert capsys.readouterr().out == first

    def test_solve_budget_exhausted(self, capsys):
        assert dispatch(["solve", *self.SMALL_SUBLINEAR, "--max-iter", "1"]) == 3
        assert _stdout_json(capsys)["status"] == "not_converged"

    def test_negative_lambda(self, capsys):
        assert dispatch(["solve", "--model", "sublinear", "--lambda", "-1", "--n", "201"]) == 2
        assert _stderr_json(capsys)["error"] == "NoPositiveSolution"

    def test_invalid_exponent(self, capsys):
        assert dispatch(["solve", "--model", "sublinear", "--q", "1.5", "--n", "201"]) == 2
        assert "model" in _stderr_json(capsys)["message"]

    def test_unknown_config_key(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"model": {"kind": "sublinear", "bogus": 1}}), encoding="utf-8")
        assert dispatch(["solve", "--config", str(config)]) == 2
        assert "model.bogus" in _stderr_json(capsys)["message"]

    def test_config_file_with_overrides(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({
            "domain": {"n": 101},
            "M": {"family": "constant", "m": 1.0},
            "model": {"kind": "logistic", "lambda": 2.0, "p": 2.0},
        }), encoding="utf-8")
        assert dispatch(["verify-pair", "--config", str(config), "--n", "201"]) == 0
        report = _stdout_json(capsys)
        assert set(report) == PAIR_KEYS | {"construction"}
        assert report["ok"] is True
        assert report["mu_min"] == report["mu_max"] == 1.0
        assert set(report["worst_nodes"]) == {"super", "sub"}
        assert set(report["worst_nodes"]["super"]) == {"node", "x"}
        assert report["construction"]["feasible"] is True
        assert report["construction"]["threshold_info"]["upper_level"] == 2.0
        assert report["construction"]["pair"] is None

    def test_user_pair_rejected(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({
            "domain": {"n": 201},
            "model": {"kind": "sublinear", "lambda": 1.0, "q": 0.5},
            "pair": {"epsilon": 0.001, "K": 0.01},
        }), encoding="utf-8")
        assert dispatch(["verify-pair", "--config", str(config)]) == 1
        report = _stdout_json(capsys)
        assert report["ok"] is False
        assert report["construction"]["feasible"] is False
        assert report["worst_super_margin"] < 0 or report["worst_sub_margin"] < 0

    def test_missing_config_file(self, capsys, tmp_path):
        assert dispatch(["solve", "--config", str(tmp_path / "absent.json")]) == 2
        assert _stderr_json(capsys)["error"] == "ConfigError"


class TestEnvironment:
    """Tests for environment settings and usage errors."""

    def test_bad_log_level(self, capsys, monkeypatch):
        monkeypatch.setenv("KIRCHHOFF_LOG", "loud")
        assert dispatch(["eigen", "--n", "101"]) == 2
        assert _stderr_json(capsys)["error"] == "ConfigError"

    def test_unknown_command(self, capsys):
        assert dispatch(["integrate"]) == 2
        assert _stderr_json(capsys)["error"] == "ConfigError"

    def test_unexpected_exception_is_invalid_input(self, capsys, monkeypatch):
        def crash(args):
            raise RuntimeError("boom")

        monkeypatch.setitem(COMMANDS, "eigen", crash)
        assert dispatch(["eigen", "--n", "101"]) == 2
        diagnostic = _stderr_json(capsys)
        assert diagnostic["error"] == "RuntimeError"
        assert diagnostic["exit_code"] == 2
