"""
Unit Tests for the verification suites
"""

import sys
import os
import json
import tempfile
import shutil

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from lab_config import get_settings
from verification_suites import SUITES, InequalityVerifier, expand_suites


class TestSuites:
    """Each suite passes on fixtures plus random instances"""

    def setup_method(self):
        self.verifier = InequalityVerifier(seed=0)

    @pytest.mark.parametrize("suite", SUITES)
    def test_suite_passes(self, suite):
        report = self.verifier.run([suite], count=5)
        assert report["passed"], report["violations"]
        assert report["suites"][suite]["checked"] > 5
        assert report["suites"][suite]["violations"] == 0

    def test_minkowski_includes_figure_fixtures(self):
        stats = self.verifier.run_minkowski(1)
        assert "figure_left" in stats["fixtures"]
        assert "figure_right" in stats["fixtures"]
        assert stats["equalities"] >= 1

    def test_dowker_large_batch(self):
        report = self.verifier.run(["dowker"], count=1000)
        assert report["passed"]
        assert report["suites"]["dowker"]["checked"] >= 1000

    def test_all_runs_every_suite(self):
        report = self.verifier.run(expand_suites("all"), count=1)
        assert set(report["suites"]) == set(SUITES)
        assert report["passed"]

    def test_report_is_json_serializable(self):
        report = self.verifier.run(["zonotope"], count=2)
        json.dumps(report)

    def test_same_seed_same_report(self):
        first = InequalityVerifier(seed=3).run(["minkowski"], count=4)
        second = InequalityVerifier(seed=3).run(["minkowski"], count=4)
        assert first["suites"] == second["suites"]

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            self.verifier.run(["dowker"], count=0)
        with pytest.raises(ValueError):
            self.verifier.run(["nonsense"], count=1)


class TestViolations:
    """Broken expectations are reported with the offending instance"""

    def setup_method(self):
        self.fixture_dir = tempfile.mkdtemp()
        source = get_settings().fixture_dir
        for name in os.listdir(source):
            shutil.copy(os.path.join(source, name), self.fixture_dir)

    def teardown_method(self):
        shutil.rmtree(self.fixture_dir)

    def _edit_fixture(self, name, update):
        path = os.path.join(self.fixture_dir, f"{name}.json")
        with open(path) as f:
            data = json.load(f)
        update(data)
        with open(path, "w") as f:
            json.dump(data, f)

    def test_wrong_equality_expectation(self):
        self._edit_fixture("figure_right", lambda d: d["expected"].update(equality=True))
        verifier = InequalityVerifier(seed=0, fixture_dir=self.fixture_dir)
        report = verifier.run(["minkowski"], count=1)
        assert not report["passed"]
        violation = report["violations"][0]
        assert violation["kind"] == "equality verdict"
        assert violation["suite"] == "minkowski"
        assert len(violation["instance"]["bodies"]) == 2

    def test_wrong_fixture_value(self):
        self._edit_fixture("hexagonal_generators", lambda d: d["expected"].update(value=2.5))
        verifier = InequalityVerifier(seed=0, fixture_dir=self.fixture_dir)
        report = verifier.run(["zonotope"], count=1)
        assert [v["kind"] for v in report["violations"]] == ["fixture mismatch"]
