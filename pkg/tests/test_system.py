"""
End-to-End Tests for the command-line harness
"""

import pytest
import sys
import os
import json
import math
import tempfile
import shutil

import numpy as np
import pandas as pd

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, c_table_rows, main
from lab_config import LabSettings, get_settings
from instances import fixture_path
from report_storage import RunManifest, manifest_path


class CliTestCase:
    """Temporary output directory plus helpers for running commands"""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def out(self, name):
        return os.path.join(self.temp_dir, name)

    def write_input(self, name, data):
        path = self.out(name)
        with open(path, "w") as f:
            if isinstance(data, str):
                f.write(data)
            else:
                json.dump(data, f)
        return path

    def run_json(self, argv, name):
        path = self.out(name)
        code = main(argv + ["--out", path])
        report = None
        if os.path.exists(path):
            with open(path) as f:
                report = json.load(f)
        return code, report


class TestSignedSumCommand(CliTestCase):
    """signed-sum subcommand"""

    def test_hexagonal_fixture(self):
        code, report = self.run_json(
            ["signed-sum", "--input", fixture_path("hexagonal_generators")], "hex.json"
        )
        assert code == EXIT_OK
        assert report["result"]["value"] == pytest.approx(2.0, abs=1e-12)
        assert report["equality"] is True
        manifest = RunManifest.load(manifest_path(self.out("hex.json")))
        assert manifest.command == "signed-sum"
        assert manifest.outputs == [self.out("hex.json")]

    def test_zero_generator(self):
        code, report = self.run_json(["signed-sum", "--input", fixture_path("zero_generator")], "zero.json")
        assert code == EXIT_OK
        assert report["result"]["value"] == 0.0
        assert report["result"]["pattern"] == [1]

    def test_both_methods_agree(self):
        rng = np.random.default_rng(12)
        path = self.write_input("g.json", {"generators": rng.normal(size=(12, 2)).tolist()})
        code, report = self.run_json(["signed-sum", "--input", path, "--method", "both"], "both.json")
        assert code == EXIT_OK
        assert report["agreement"] is True
        assert report["brute"]["value"] == pytest.approx(report["result"]["value"], rel=1e-12)

    def test_csv_output(self):
        path = self.out("hex.csv")
        code = main(["signed-sum", "--input", fixture_path("hexagonal_generators"), "--format", "csv", "--out", path])
        assert code == EXIT_OK
        table = pd.read_csv(path)
        assert list(table.columns) == ["n", "value", "lower_bound", "slack", "equality"]
        assert table["value"][0] == pytest.approx(2.0)

    def test_malformed_json(self):
        path = self.write_input("bad.json", "{not json")
        code, report = self.run_json(["signed-sum", "--input", path], "bad_out.json")
        assert code == EXIT_USAGE
        assert report is None

    def test_missing_file(self):
        code, _ = self.run_json(["signed-sum", "--input", self.out("missing.json")], "missing_out.json")
        assert code == EXIT_USAGE

    def test_empty_generator_list(self):
        path = self.write_input("empty.json", {"generators": []})
        code, _ = self.run_json(["signed-sum", "--input", path], "empty_out.json")
        assert code == EXIT_USAGE

    def test_sweep_needs_planar_input(self):
        path = self.write_input("space.json", {"generators": [[1, 0, 0], [0, 1, 0]]})
        assert self.run_json(["signed-sum", "--input", path], "s.json")[0] == EXIT_USAGE
        code, report = self.run_json(["signed-sum", "--input", path, "--method", "brute"], "b.json")
        assert code == EXIT_OK
        assert report["result"]["value"] == pytest.approx(math.sqrt(2.0))

    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == EXIT_USAGE


class TestCTableCommand(CliTestCase):
    """c-table subcommand"""

    @pytest.mark.parametrize("n_max", [1, 3, 100])
    def test_rows(self, n_max):
        path = self.out(f"table_{n_max}.csv")
        assert main(["c-table", "--n-max", str(n_max), "--out", path]) == EXIT_OK
        table = pd.read_csv(path)
        assert len(table) == n_max
        assert list(table.columns) == ["n", "c_2nn", "minkowski_constant", "gap_to_2_over_pi"]
        assert table["c_2nn"][0] == pytest.approx(1.0)

    def test_gap_closes(self):
        rows = c_table_rows(100)
        assert rows[-1]["gap_to_2_over_pi"] < 1e-3
        assert all(row["gap_to_2_over_pi"] > 0 for row in rows)
        assert rows[2]["c_2nn"] == pytest.approx(2.0)

    def test_invalid_n_max(self):
        assert main(["c-table", "--n-max", "0", "--out", self.out("t.csv")]) == EXIT_USAGE


class TestVerifyCommand(CliTestCase):
    """verify subcommand"""

    def test_single_suite(self):
        code, report = self.run_json(["verify", "--suite", "minkowski", "--count", "2"], "v.json")
        assert code == EXIT_OK
        assert report["passed"]
        assert list(report["suites"]) == ["minkowski"]

    def test_all_suites(self):
        code, report = self.run_json(["verify", "--suite", "all", "--count", "1", "--seed", "4"], "all.json")
        assert code == EXIT_OK
        assert report["seed"] == 4
        assert len(report["suites"]) == 4

    def test_invalid_count(self):
        assert main(["verify", "--count", "0", "--out", self.out("v.json")]) == EXIT_USAGE

    def test_unknown_suite(self):
        assert main(["verify", "--suite", "nonsense", "--out", self.out("v.json")]) == EXIT_USAGE

    def test_violation_exit_code(self, monkeypatch):
        fixture_dir = os.path.join(self.temp_dir, "fixtures")
        shutil.copytree(get_settings().fixture_dir, fixture_dir)
        with open(os.path.join(fixture_dir, "figure_left.json")) as f:
            data = json.load(f)
        data["expected"]["equality"] = False
        with open(os.path.join(fixture_dir, "figure_left.json"), "w") as f:
            json.dump(data, f)

        monkeypatch.setenv("LAB_FIXTURE_DIR", fixture_dir)
        get_settings.cache_clear()
        try:
            code, report = self.run_json(["verify", "--suite", "minkowski", "--count", "1"], "v.json")
        finally:
            get_settings.cache_clear()
        assert code == EXIT_VIOLATION
        assert not report["passed"]
        assert report["violations"][0]["context"]


class TestOptimizeCommand(CliTestCase):
    """optimize subcommand"""

    def test_single_term(self):
        code, report = self.run_json(
            ["optimize", "--d", "2", "--n", "3", "--k", "1", "--restarts", "10", "--seed", "7"], "o.json"
        )
        assert code == EXIT_OK
        assert report["estimate"]["best_value"] == pytest.approx(1.0, abs=1e-12)
        assert report["sandwich_ok"]

    def test_recovers_regular_pentagon_value(self):
        code, report = self.run_json(
            ["optimize", "--d", "2", "--n", "5", "--k", "5", "--restarts", "100", "--seed", "42"], "o.json"
        )
        assert code == EXIT_OK
        assert abs(report["estimate"]["best_value"] - 1.0 / math.sin(math.pi / 10)) <= 1e-4
        assert report["c_value"]["kind"] == "estimate"

    def test_replay_is_byte_identical(self):
        argv = ["optimize", "--d", "2", "--n", "4", "--k", "3", "--restarts", "6", "--seed", "9"]
        assert main(argv + ["--out", self.out("a.json")]) == EXIT_OK
        assert main(argv + ["--out", self.out("b.json")]) == EXIT_OK
        with open(self.out("a.json"), "rb") as a, open(self.out("b.json"), "rb") as b:
            assert a.read() == b.read()

    def test_settings_file(self):
        path = self.write_input("settings.json", {"restarts": 3, "polish": False})
        code, report = self.run_json(["optimize", "--n", "3", "--k", "2", "--settings", path], "o.json")
        assert code == EXIT_OK
        assert report["settings"]["restarts"] == 3
        assert report["settings"]["polish"] is False
        assert report["estimate"]["restarts_used"] == 3

    def test_enumeration_guard(self):
        code, report = self.run_json(
            ["optimize", "--d", "3", "--n", "30", "--k", "15", "--restarts", "1"], "o.json"
        )
        assert code == EXIT_USAGE
        assert report is None

    @pytest.mark.parametrize("d, n, k", [(4, 3, 3), (2, 3, 5), (2, 0, 1)])
    def test_invalid_ranges(self, d, n, k):
        argv = ["optimize", "--d", str(d), "--n", str(n), "--k", str(k), "--restarts", "1"]
        assert main(argv + ["--out", self.out("o.json")]) == EXIT_USAGE


class TestReplayCommand(CliTestCase):
    """replay subcommand"""

    def read_bytes(self, name):
        with open(self.out(name), "rb") as f:
            return f.read()

    def test_optimize_replay_is_byte_identical(self):
        argv = ["optimize", "--d", "2", "--n", "4", "--k", "2", "--restarts", "5", "--seed", "3"]
        assert main(argv + ["--out", self.out("first.json")]) == EXIT_OK
        manifest = manifest_path(self.out("first.json"))
        assert main(["replay", "--manifest", manifest, "--out", self.out("again.json")]) == EXIT_OK
        assert self.read_bytes("first.json") == self.read_bytes("again.json")

    def test_csv_replay(self):
        assert main(["c-table", "--n-max", "7", "--out", self.out("t.csv")]) == EXIT_OK
        assert main(["replay", "--manifest", manifest_path(self.out("t.csv")), "--out", self.out("u.csv")]) == EXIT_OK
        assert self.read_bytes("t.csv") == self.read_bytes("u.csv")

    def test_verify_replay_reuses_seed(self):
        code, first = self.run_json(["verify", "--suite", "zonotope", "--count", "3"], "v.json")
        assert code == EXIT_OK
        code, again = self.run_json(["replay", "--manifest", manifest_path(self.out("v.json"))], "w.json")
        assert code == EXIT_OK
        assert again["seed"] == first["seed"]
        assert again["suites"] == first["suites"]
        assert RunManifest.load(manifest_path(self.out("w.json"))).command == "verify"

    def test_missing_manifest(self):
        assert main(["replay", "--manifest", self.out("nothing.manifest.json")]) == EXIT_USAGE

    def test_invalid_manifest(self):
        path = self.write_input("bad.manifest.json", {"command": "frobnicate", "parameters": {}})
        assert main(["replay", "--manifest", path, "--out", self.out("x.json")]) == EXIT_USAGE
        path = self.write_input("worse.manifest.json", {"parameters": {}})
        assert main(["replay", "--manifest", path]) == EXIT_USAGE


class TestLabSettings:
    """Environment configuration"""

    def teardown_method(self):
        get_settings.cache_clear()

    def test_defaults(self):
        settings = LabSettings()
        assert settings.tolerance == 1e-9
        assert settings.enumeration_limit == 10_000_000
        assert os.path.isdir(settings.fixture_dir)

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("LAB_SEED", "17")
        monkeypatch.setenv("LAB_TOLERANCE", "1e-6")
        get_settings.cache_clear()
        settings = get_settings()
        assert settings.seed == 17
        assert settings.tolerance == 1e-6

    def test_settings_are_frozen(self):
        with pytest.raises(Exception):
            LabSettings().seed = 3
