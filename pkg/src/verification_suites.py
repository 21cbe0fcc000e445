"""
Verification Suites
Batch checks of the circumradius/perimeter bound, the signed-sum bound, the
Minkowski circumradius bound and the quermassintegral chain, on the fixed
fixtures plus seeded random instances
"""

import math
import time
import logging
from typing import Any, Dict, List, Optional, Sequence

from tqdm import tqdm

from geom2d import perimeter, regular_polygon
from circumball import BoundReport, circumradius, dowker_check
from zonotope import (
    GeneratorSet,
    build_zonotope,
    equality_case_check,
    max_signed_sum_brute,
    max_signed_sum_sweep,
    regular_generators,
    signed_sum_lower_bound,
)
from bounds import (
    SymmetricBodySet,
    c_exact_2nn,
    direction_condition_check,
    minkowski_chain_check,
    minkowski_circumradius_check,
    regular_segment_configuration,
    remark_chain_check,
    remark_constant,
    zonoid_disc_ratio,
)
from instances import InstanceGenerator, dented_regular, load_body_set, load_fixture, load_generators

logger = logging.getLogger(__name__)

SUITES = ("dowker", "zonotope", "minkowski", "remark")

MAX_POLYGON_N = 12
MAX_GENERATORS = 14
ORACLE_REL_TOL = 1e-12
STRICT_MARGIN = 1e-7
# Largest n of the zonoid ratio sequence checked for monotonicity in a suite run
ZONOID_CHECK_N = 200


class InequalityVerifier:
    """Run verification suites and collect every violated check"""

    def __init__(self, seed: int = 0, verbose: bool = False, fixture_dir: Optional[str] = None):
        """
        Initialize verifier

        Args:
            seed: Base seed; each suite draws from its own stream [seed, suite index]
            verbose: Print per-suite summaries and show progress bars
            fixture_dir: Fixture directory override
        """
        self.seed = seed
        self.verbose = verbose
        self.fixture_dir = fixture_dir
        self.results: Dict[str, Dict[str, Any]] = {}
        self.violations: List[Dict[str, Any]] = []

    def _instances(self, suite: str) -> InstanceGenerator:
        return InstanceGenerator([self.seed, SUITES.index(suite)])

    def _stats(self, suite: str) -> Dict[str, Any]:
        return self.results.setdefault(suite, {"checked": 0, "equalities": 0, "fixtures": [], "violations": 0})

    def _violation(self, suite: str, kind: str, context: str, instance: Any, detail: Any = None) -> None:
        self._stats(suite)["violations"] += 1
        entry = {"suite": suite, "kind": kind, "context": context, "instance": instance}
        if detail is not None:
            entry["detail"] = detail
        self.violations.append(entry)
        logger.error("%s violation in %s (%s)", kind, suite, context)

    def _record(
        self,
        suite: str,
        report: BoundReport,
        instance: Any,
        expect_equality: Optional[bool] = None,
    ) -> bool:
        """Count one inequality check; a failed check or an unexpected equality verdict is a violation"""
        stats = self._stats(suite)
        stats["checked"] += 1
        if report.equality:
            stats["equalities"] += 1

        ok = True
        if not report.holds():
            self._violation(suite, "inequality", report.context, instance, report.to_json())
            ok = False
        if expect_equality is not None and report.equality != expect_equality:
            self._violation(suite, "equality verdict", report.context, instance, report.to_json())
            ok = False
        return ok

    def _check(self, suite: str, condition: bool, kind: str, context: str, instance: Any, detail: Any = None) -> bool:
        self._stats(suite)["checked"] += 1
        if not condition:
            self._violation(suite, kind, context, instance, detail)
        return condition

    def _progress(self, count: int, suite: str):
        return tqdm(range(count), desc=suite, disable=not self.verbose)

    def run_dowker(self, count: int) -> Dict[str, Any]:
        """
        2 n sin(pi/n) R(P) >= per(P) for m-gons with m <= n

        Fixtures: every regular polygon listed in regular_polygons.json attains
        equality, and a regular hexagon with one vertex dented by 1e-3 is strict
        by more than STRICT_MARGIN.
        """
        suite = "dowker"
        stats = self._stats(suite)

        for entry in load_fixture("regular_polygons", self.fixture_dir)["polygons"]:
            P = regular_polygon(entry["n"], entry["rho"], entry["phase"])
            self._record(suite, dowker_check(P, entry["n"]), P.to_json(), expect_equality=True)
        stats["fixtures"].append("regular_polygons")

        dented = dented_regular(6, 1e-3)
        report = dowker_check(dented, 6)
        self._record(suite, report, dented.to_json(), expect_equality=False)
        self._check(suite, report.slack >= STRICT_MARGIN, "strictness", "dented hexagon", dented.to_json(), report.to_json())
        stats["fixtures"].append("dented_hexagon")

        gen = self._instances(suite)
        for _ in self._progress(count, suite):
            P = gen.polygon(MAX_POLYGON_N)
            n = int(gen.rng.integers(P.vertex_count, MAX_POLYGON_N + 1))
            circle = circumradius(P)
            self._check(
                suite,
                all(circle.contains(v) for v in P.vertices),
                "enclosing circle",
                "circumcircle contains every vertex",
                P.to_json(),
                circle.model_dump(),
            )
            self._record(suite, dowker_check(P, n), {"polygon": P.to_json(), "n": n})

        return self._summarize(suite)

    def _zonotope_instance(self, suite: str, G: GeneratorSet) -> None:
        sweep = max_signed_sum_sweep(G)
        brute = max_signed_sum_brute(G)
        instance = G.to_json()
        self._check(
            suite,
            abs(sweep.value - brute.value) <= ORACLE_REL_TOL * max(1.0, brute.value),
            "oracle disagreement",
            "sweep vs brute force",
            instance,
            {"sweep": sweep.to_json(), "brute": brute.to_json()},
        )

        Z = build_zonotope(G)
        total = float(G.norms().sum())
        self._record(suite, BoundReport.build(perimeter(Z), 4.0 * total, "per(Z) = 4 sum ||u||"), instance, True)
        self._record(suite, BoundReport.build(circumradius(Z).radius, sweep.value, "R(Z) = max signed sum"), instance, True)
        self._record(
            suite,
            BoundReport.build(sweep.value, signed_sum_lower_bound(G), "max signed sum >= sum ||u|| / (n sin(pi/2n))"),
            instance,
        )

    def run_zonotope(self, count: int) -> Dict[str, Any]:
        """
        Largest signed sums against the bound sum ||u^i|| / (n sin(pi/2n))

        Every instance is solved by the sweep and the brute-force oracle, and
        the zonotope identities for perimeter and circumradius are checked.
        """
        suite = "zonotope"
        stats = self._stats(suite)

        for name in ("hexagonal_generators", "zero_generator"):
            data = load_fixture(name, self.fixture_dir)
            G = load_generators(name, self.fixture_dir)
            result = max_signed_sum_sweep(G)
            expected = data["expected"]
            self._check(
                suite,
                abs(result.value - expected["value"]) <= 1e-9 and equality_case_check(G) == expected["equality"],
                "fixture mismatch",
                name,
                G.to_json(),
                result.to_json(),
            )
            self._zonotope_instance(suite, G)
            stats["fixtures"].append(name)

        for n in range(1, MAX_POLYGON_N + 1):
            G = regular_generators(n)
            value = max_signed_sum_sweep(G).value
            self._record(suite, BoundReport.build(value, c_exact_2nn(n).value, f"regular n={n}"), G.to_json(), True)
        stats["fixtures"].append("regular_generators")

        gen = self._instances(suite)
        for _ in self._progress(count, suite):
            self._zonotope_instance(suite, gen.generators(MAX_GENERATORS))

        return self._summarize(suite)

    def run_minkowski(self, count: int) -> Dict[str, Any]:
        """
        R(C^1 + ... + C^n) >= sum R(C^i) / (n sin(pi/2n)) for symmetric bodies

        The two rhombus fixtures share their longest segments: the first
        attains equality, the second is strict although the direction
        condition holds for it as well.
        """
        suite = "minkowski"
        stats = self._stats(suite)

        for name in ("figure_left", "figure_right"):
            data = load_fixture(name, self.fixture_dir)
            S = load_body_set(name, self.fixture_dir)
            report = minkowski_circumradius_check(S)
            self._record(suite, report, S.to_json(), expect_equality=data["expected"]["equality"])
            self._check(
                suite,
                abs(report.lhs - data["expected"]["sum_circumradius"]) <= 1e-9,
                "fixture mismatch",
                name,
                S.to_json(),
                report.to_json(),
            )
            self._check(suite, direction_condition_check(S), "direction condition", name, S.to_json())
            stats["fixtures"].append(name)

        for entry in load_fixture("regular_segments", self.fixture_dir)["configurations"]:
            S = regular_segment_configuration(entry["n"], entry["rho"], entry["phi"])
            self._record(suite, minkowski_circumradius_check(S), S.to_json(), expect_equality=True)
        stats["fixtures"].append("regular_segments")

        gen = self._instances(suite)
        for _ in self._progress(count, suite):
            S = gen.symmetric_bodies()
            self._record(suite, minkowski_circumradius_check(S), S.to_json())
            for report in minkowski_chain_check(S):
                self._record(suite, report, S.to_json())

        return self._summarize(suite)

    def run_remark(self, count: int) -> Dict[str, Any]:
        """
        The dimension-dependent constant 2 kappa_{d-1} / (d kappa_d) in the plane

        Checks the constant 2/pi, the monotone decay of the segment-to-disc
        ratio, and the quermassintegral chain on random symmetric and general
        bodies.
        """
        suite = "remark"
        stats = self._stats(suite)

        constant = remark_constant(2)
        self._check(suite, abs(constant - 2.0 / math.pi) <= 1e-12, "constant", "remark_constant(2) = 2/pi", {"d": 2}, constant)

        ratios = [zonoid_disc_ratio(n) for n in range(1, ZONOID_CHECK_N + 1)]
        decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
        self._check(suite, decreasing, "monotonicity", "zonoid ratio decreasing", {"n_max": ZONOID_CHECK_N})
        self._check(suite, ratios[-1] > constant, "limit", "zonoid ratio above 2/pi", {"n": ZONOID_CHECK_N}, ratios[-1])
        stats["fixtures"].append("zonoid_ratio")

        for name in ("figure_left", "figure_right"):
            S = load_body_set(name, self.fixture_dir)
            for report in remark_chain_check(S):
                self._record(suite, report, S.to_json())
            stats["fixtures"].append(name)

        gen = self._instances(suite)
        for _ in self._progress(count, suite):
            S = gen.symmetric_bodies()
            for report in remark_chain_check(S):
                self._record(suite, report, S.to_json())
            bodies = [gen.polygon(8) for _ in range(int(gen.rng.integers(1, 5)))]
            for report in remark_chain_check(bodies):
                self._record(suite, report, {"bodies": [K.to_json() for K in bodies]})

        return self._summarize(suite)

    def _summarize(self, suite: str) -> Dict[str, Any]:
        stats = self._stats(suite)
        if self.verbose:
            status = "✓" if stats["violations"] == 0 else "✗"
            print(f"  {status} {suite}: {stats['checked']} checks, {stats['equalities']} equalities, "
                  f"{stats['violations']} violations")
        return stats

    def run(self, suites: Sequence[str] = SUITES, count: int = 100) -> Dict[str, Any]:
        """
        Run the selected suites

        Args:
            suites: Suite names from SUITES
            count: Random instances per suite, at least 1

        Returns:
            The report from generate_report
        """
        if count < 1:
            raise ValueError(f"count must be at least 1, got {count}")
        unknown = [s for s in suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s): {', '.join(unknown)}")

        runners = {
            "dowker": self.run_dowker,
            "zonotope": self.run_zonotope,
            "minkowski": self.run_minkowski,
            "remark": self.run_remark,
        }
        for suite in suites:
            logger.info("running suite %s with %d random instances", suite, count)
            runners[suite](count)
        return self.generate_report(count)

    def generate_report(self, count: Optional[int] = None) -> Dict[str, Any]:
        """Summary of every suite run so far plus the full violation list"""
        return {
            "timestamp": time.strftime("%Y-%m-%d %H:%M:%S"),
            "seed": self.seed,
            "count": count,
            "suites": self.results,
            "violations": self.violations,
            "passed": not self.violations,
        }


def expand_suites(name: str) -> List[str]:
    """'all' expands to every suite"""
    return list(SUITES) if name == "all" else [name]


def main():
    """Run every suite with a small batch"""
    print("=" * 70)
    print("  SIGNED SUM / CIRCUMRADIUS VERIFICATION")
    print("=" * 70)

    verifier = InequalityVerifier(seed=0, verbose=True)
    report = verifier.run(SUITES, count=50)

    print("\n" + "=" * 70)
    print("  ALL CHECKS PASSED" if report["passed"] else f"  {len(report['violations'])} VIOLATIONS")
    print("=" * 70)


if __name__ == "__main__":
    main()
