"""
Unit Tests for report persistence
"""

import sys
import os
import json
import tempfile
import shutil

import pandas as pd
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from report_storage import ReportStore, RunManifest, manifest_path


class TestReportStore:
    """Atomic JSON/CSV writes and manifests"""

    def setup_method(self):
        self.temp_dir = tempfile.mkdtemp()
        self.store = ReportStore(output_dir=self.temp_dir)

    def teardown_method(self):
        shutil.rmtree(self.temp_dir)

    def read_json(self, name):
        with open(os.path.join(self.temp_dir, name)) as f:
            return json.load(f)

    def test_json_full_precision(self):
        path = self.store.write_json("report.json", {"value": 1.0 / 3.0})
        assert path == os.path.join(self.temp_dir, "report.json")
        with open(path) as f:
            assert json.load(f)["value"] == 1.0 / 3.0

    def test_csv_twelve_significant_digits(self):
        path = self.store.write_csv("table.csv", [{"n": 1, "value": 1.0 / 3.0}, {"n": 2, "value": 2.0}])
        with open(path) as f:
            lines = f.read().splitlines()
        assert lines == ["n,value", "1,0.333333333333", "2,2"]

    def test_csv_from_dataframe(self):
        frame = pd.DataFrame({"a": [0.1, 0.2]})
        self.store.write_csv("frame.csv", frame)
        assert list(pd.read_csv(os.path.join(self.temp_dir, "frame.csv"))["a"]) == [0.1, 0.2]

    def test_nested_directories_created(self):
        path = self.store.write_json(os.path.join("a", "b", "c.json"), [])
        assert os.path.exists(path)

    def test_no_temp_files_left(self):
        self.store.write_json("x.json", {"a": 1})
        self.store.write_json("x.json", {"a": 2})
        assert os.listdir(self.temp_dir) == ["x.json"]
        assert self.read_json("x.json") == {"a": 2}

    def test_failed_write_keeps_previous_file(self):
        self.store.write_json("keep.json", {"a": 1})
        with pytest.raises(TypeError):
            self.store.write_json("keep.json", {"a": object()})
        assert self.read_json("keep.json") == {"a": 1}
        assert os.listdir(self.temp_dir) == ["keep.json"]

    def test_write_dispatch(self):
        self.store.write("r.csv", {"rows": [{"x": 1}]}, fmt="csv")
        assert os.path.exists(os.path.join(self.temp_dir, "r.csv"))
        with pytest.raises(ValueError):
            self.store.write("r.txt", {}, fmt="txt")

    def test_manifest_round_trip(self):
        report = self.store.write_json("run.json", {"ok": True})
        manifest = RunManifest(command="verify", parameters={"count": 3}, seed=7, outputs=[report])
        path = self.store.write_manifest(report, manifest)
        assert path == manifest_path(report)
        loaded = RunManifest.load(path)
        assert loaded == manifest
        assert loaded.timestamp
