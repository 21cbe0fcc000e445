#!/usr/bin/env python3
"""
Simple Demo - Walks through the fixed instances behind every bound
Run: python src/run_demo.py
"""

import sys
import os
import math

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from geom2d import minkowski_sum_all, perimeter, regular_polygon
from circumball import circumradius, dowker_check
from zonotope import build_zonotope, equality_case_check, max_signed_sum_sweep, regular_generators
from bounds import (
    c_exact_2nn,
    c_lower_bound,
    c_upper_bound,
    direction_condition_check,
    minkowski_circumradius_check,
    remark_chain_check,
    remark_constant,
    zonoid_disc_ratio,
)
from instances import dented_regular, load_body_set
from optimizer import OptimizerSettings, estimate_c, sandwich_ok


def print_header(text):
    """Print a formatted header"""
    print("\n" + "=" * 70)
    print(f"  {text}")
    print("=" * 70)


def print_report(label, report):
    """Print one inequality check"""
    status = "= equality" if report.equality else "> strict"
    print(f"  {label}")
    print(f"     lhs {report.lhs:.12g}   rhs {report.rhs:.12g}   slack {report.slack:.3e}   {status}")


def demo_dowker():
    print_header("CIRCUMRADIUS VS PERIMETER OF n-GONS")
    for n in (3, 4, 6):
        P = regular_polygon(n, 1.0)
        print_report(f"regular {n}-gon, n={n}", dowker_check(P, n))
    dented = dented_regular(6, 1e-3)
    print_report("hexagon with one vertex pulled in by 1e-3, n=6", dowker_check(dented, 6))
    triangle = regular_polygon(3, 1.0)
    print_report("regular triangle counted as a 6-gon", dowker_check(triangle, 6))


def demo_zonotope():
    print_header("LARGEST SIGNED SUMS OF n VECTORS")
    for n in (1, 2, 3, 6):
        G = regular_generators(n)
        result = max_signed_sum_sweep(G)
        Z = build_zonotope(G)
        print(f"  n={n}: max {result.value:.12f}   1/sin(pi/2n) {c_exact_2nn(n).value:.12f}"
              f"   equality case: {equality_case_check(G)}")
        print(f"        zonotope: {Z.vertex_count} vertices, R = {circumradius(Z).radius:.12f},"
              f" per = {perimeter(Z):.12f} (4n = {4 * n})")


def demo_minkowski():
    print_header("CIRCUMRADIUS OF MINKOWSKI SUMS")
    for name in ("figure_left", "figure_right"):
        S = load_body_set(name)
        total = minkowski_sum_all(S.bodies)
        print(f"\n  {name}: sum has {total.vertex_count} vertices, R = {circumradius(total).radius:.12f}")
        print(f"     direction condition holds: {direction_condition_check(S)}")
        print_report("R(C1 + C2) >= (R(C1) + R(C2)) / (2 sin(pi/4))", minkowski_circumradius_check(S))

    print("\n  Quermassintegral chain on figure_right:")
    for report in remark_chain_check(load_body_set("figure_right")):
        print_report(report.context, report)

    print(f"\n  2 kappa_1 / (2 kappa_2) = {remark_constant(2):.12f}   2/pi = {2 / math.pi:.12f}")
    for n in (1, 10, 100, 1000):
        print(f"     segment-to-disc ratio n={n}: {zonoid_disc_ratio(n):.12f}")


def demo_optimizer():
    print_header("NUMERICAL ESTIMATES OF c(d,n,k)")
    settings = OptimizerSettings(restarts=20, seed=0)
    for d, n, k in ((2, 4, 4), (2, 4, 2), (2, 5, 1), (3, 4, 4)):
        estimate = estimate_c(d, n, k, settings)
        lower = c_lower_bound(k).value if d == 2 else math.sqrt(k)
        upper = c_upper_bound(n, d=d, k=k).value
        status = "✓" if sandwich_ok(estimate) else "✗"
        print(f"  {status} c({d},{n},{k}) ~ {estimate.best_value:.9f}   in [{lower:.6f}, {upper:.6f}]")


def run_demo():
    """Run the complete demo"""
    print_header("SIGNED SUMS AND CIRCUMRADII - DEMO")
    demo_dowker()
    demo_zonotope()
    demo_minkowski()
    demo_optimizer()
    print_header("DEMO COMPLETE")


if __name__ == "__main__":
    run_demo()
