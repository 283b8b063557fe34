import math

from spectra_lab.sphere_check import (counterexample_report,
                                      laplacian_on_sphere, lp_norm,
                                      u_counterexample)


def test_exact_sup_norms():
    for n in range(2, 11):
        u = u_counterexample(n)
        du = laplacian_on_sphere(u)
        assert abs(lp_norm(u, math.inf) - 0.5) < 1e-12
        assert abs(lp_norm(du, math.inf) - 2.0 * n) < 1e-12


def test_sup_ratio_exceeds_eigenvalue():
    for n in range(2, 11):
        rep = counterexample_report(n, k_max=4)
        assert abs(rep["sup_ratio"] - 4.0 * n) < 1e-12
        assert rep["sup_ratio"] > rep["eigenvalue"]
        assert rep["eigenvalue"] == 2.0 * (n + 1.0)


def test_l2_ratio_below_eigenvalue():
    # on the eigenspace the L2 ratio equals the eigenvalue; u has a mean-free
    # quadratic part plus nothing else, so the ratio stays at most lambda
    for n in (2, 5, 10):
        rep = counterexample_report(n, k_max=2)
        assert rep["l2_ratio"] <= rep["eigenvalue"] + 1e-12


def test_lp_ratios_increase_to_sup():
    rep = counterexample_report(3, k_max=64)
    r = rep["lp_ratios"]
    assert all(b >= a - 1e-10 for a, b in zip(r, r[1:]))
    assert r[-1] <= rep["sup_ratio"] + 1e-12
    k = rep["first_exceeding_k"]
    assert k is not None and r[k - 1] > rep["eigenvalue"]


def test_lp_norm_interpolates():
    u = u_counterexample(4)
    assert lp_norm(u, 2) <= lp_norm(u, 8) <= lp_norm(u, math.inf) + 1e-12
