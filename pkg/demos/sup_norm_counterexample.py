"""Sup-norm comparison fails on round spheres.

The zonal function u = (x1^2 - 1/2)/2 on S^n has sup |u| = 1/2 while
sup |Laplacian u| = 2n, so the ratio 4n beats 2(n+1) in every dimension
n >= 2.  The L^{2k} ratios climb toward the sup ratio as k grows; the
report records the first k where the ratio already exceeds 2(n+1).
"""

from spectra_lab import sphere_check

print(f"{'n':>3} {'sup ratio':>10} {'L2 ratio':>10} {'2(n+1)':>8} {'first k':>8}")
for n in range(2, 11):
    rep = sphere_check.counterexample_report(n)
    print(f"{n:>3} {rep['sup_ratio']:>10.2f} {rep['l2_ratio']:>10.4f} "
          f"{2 * (n + 1):>8d} {rep['first_exceeding_k']:>8d}")
