"""Randomized checks of the symmetric-matrix stability inequalities.

Each suite samples matrices (or eigenvalue tuples) under the stated
constraints and reports the smallest slack of the corresponding
inequality; a negative slack beyond roundoff would be a counterexample.
"""

from collections import defaultdict

from spectra_lab import matrix_stability

rows = matrix_stability.run_all_suites(ns=(2, 3, 4, 5), count=20000, seed=7)
by_suite = defaultdict(list)
for row in rows:
    by_suite[row["suite"]].append(row)
for name, group in by_suite.items():
    worst = min(r["min_residual"] for r in group)
    total = sum(r["violations"] for r in group)
    samples = sum(r["samples"] for r in group)
    print(f"{name:<12} min slack {worst:+.3e}  violations {total}  samples {samples}")
