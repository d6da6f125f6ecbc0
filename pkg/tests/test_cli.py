import json
import os

import pytest

from tilepump import cli
from tilepump.instances import fixture_text


@pytest.fixture()
def col_n_file(tmp_path):
    path = tmp_path / "col-n.json"
    path.write_text(fixture_text("COL-N"))
    return str(path)


@pytest.fixture()
def fork_file(tmp_path):
    path = tmp_path / "fork.json"
    path.write_text(fixture_text("FORK"))
    return str(path)


class TestExitCodes:
    def test_analyze_completes(self, col_n_file, capsys):
        assert cli.main(["analyze", col_n_file]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["outcome"]["kind"] == "Pumpable"

    def test_analyze_inconclusive_still_zero(self, tmp_path, capsys):
        path = tmp_path / "line-e.json"
        path.write_text(fixture_text("LINE-E"))
        assert cli.main(["analyze", str(path)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["outcome"]["kind"] == "Inconclusive"

    def test_usage_error(self, capsys):
        assert cli.main(["pump"]) == 1

    def test_invalid_instance(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"tileset": [], "seed": []}')
        assert cli.main(["analyze", str(bad)]) == 2

    def test_budget_exceeded(self, col_n_file, monkeypatch):
        monkeypatch.setenv("TILEPUMP_BUDGET_MS", "0.0001")
        assert cli.main(["analyze", col_n_file]) == 3

    def test_missing_file_is_instance_error(self):
        assert cli.main(["analyze", "/nonexistent.json"]) == 2


class TestCommands:
    def test_pump(self, col_n_file, capsys):
        assert cli.main(["pump", col_n_file, "--i", "1", "--j", "2"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["result"] == "infinite"

    def test_visibility(self, col_n_file, capsys):
        assert cli.main(["visibility", col_n_file, "--side", "west"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert len(out["visible"]) == 4

    def test_uturn(self, col_n_file, capsys):
        assert cli.main(["uturn", col_n_file]) == 0
        assert json.loads(capsys.readouterr().out)["uturn"] is None

    def test_render(self, col_n_file, tmp_path, capsys):
        out_svg = str(tmp_path / "out.svg")
        assert cli.main(["render", col_n_file, "-o", out_svg,
                         "--overlay", 'visibility="east"']) == 0
        text = open(out_svg).read()
        assert text.count("visibility-ray") == 5

    def test_verify_round_trip(self, col_n_file, fork_file, tmp_path, capsys):
        from tilepump import certify
        from tilepump.engine import conclude
        from tilepump.instances import load_fixture

        tas, p = load_fixture("FORK")
        report = conclude(tas, p)
        cert_path = tmp_path / "cert.json"
        cert_path.write_text(certify.serialize_certificate(report.outcome.certificate))
        assert cli.main(["verify", fork_file, str(cert_path)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["valid"] is True

        # the same certificate against a different instance must not verify
        assert cli.main(["verify", col_n_file, str(cert_path)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["valid"] is False

    def test_bounds(self, capsys):
        assert cli.main(["bounds", "--tiles", "1", "--seed-size", "1"]) == 0
        out = json.loads(capsys.readouterr().out)
        by_name = {b["name"]: b for b in out["bounds"]}
        assert by_name["f_b"]["value"] == "3"
        assert by_name["B_seed"]["value"] == "3"

    def test_bounds_astronomical_guard(self, capsys):
        assert cli.main(["bounds", "--tiles", "4", "--seed-size", "2", "--n", "12"]) == 0
        out = json.loads(capsys.readouterr().out)
        f_b = [b for b in out["bounds"] if b["name"] == "f_b"][0]
        assert f_b["value"] is None and "astronomical" in f_b["note"]

    def test_deterministic_output(self, col_n_file, capsys):
        cli.main(["analyze", col_n_file])
        first = capsys.readouterr().out
        cli.main(["analyze", col_n_file])
        second = capsys.readouterr().out
        assert first == second


class TestCrossProcessDeterminism:
    def test_analyze_stable_under_hash_randomization(self, col_n_file):
        import subprocess
        import sys

        def run(seed):
            env = dict(os.environ, PYTHONHASHSEED=seed)
            return subprocess.run(
                [sys.executable, "-m", "tilepump.cli", "analyze", col_n_file],
                capture_output=True, env=env, check=True).stdout

        assert run("1") == run("31337")
