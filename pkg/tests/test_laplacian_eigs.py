import math

import numpy as np
import pytest
import scipy.linalg

from spectra_lab.mesh import (cotan_laplacian, dense_eigs_oracle, flat_torus,
                              icosphere, rayleigh, smallest_eigs)


def test_stiffness_basics():
    ops = cotan_laplacian(icosphere(1))
    s = ops.stiffness
    assert abs((s - s.T).max()) < 1e-14
    # rows sum to zero: constants are in the kernel
    ones = np.ones(s.shape[0])
    assert np.abs(s @ ones).max() < 1e-12
    assert np.all(ops.mass > 0)
    assert abs(ops.mass.sum() - icosphere(1).area()) < 1e-12


def test_rayleigh_constant_zero():
    mesh = flat_torus(6, 6)
    ops = cotan_laplacian(mesh)
    assert abs(rayleigh(ops, np.ones(mesh.n_vertices))) < 1e-14


def test_iterative_matches_scipy_pencil():
    # cross-check against an entirely independent dense generalized solve
    mesh = flat_torus(7, 5)
    ops = cotan_laplacian(mesh)
    res = smallest_eigs(ops, 8, tol=1e-10)
    ref = np.sort(scipy.linalg.eigh(ops.stiffness.toarray(),
                                    np.diag(ops.mass), eigvals_only=True))
    assert np.max(np.abs(res.eigenvalues - ref[:8])) < 1e-9


def test_iterative_matches_jacobi_oracle():
    for mesh in (icosphere(1), flat_torus(8, 6)):
        a = smallest_eigs(mesh, 10, tol=1e-9)
        b = dense_eigs_oracle(mesh, 10)
        num = np.abs(a.eigenvalues - b.eigenvalues)
        den = np.maximum(np.abs(b.eigenvalues), 1.0)
        assert np.max(num / den) < 1e-8
        assert a.method == "subspace-shift-invert"
        assert b.method == "dense-jacobi"


def test_degenerate_cluster_full_multiplicity():
    res = smallest_eigs(icosphere(2), 9, tol=1e-9)
    lam = res.eigenvalues
    assert abs(lam[0]) < 1e-10
    assert np.ptp(lam[1:4]) < 1e-9       # three copies near 2
    assert np.ptp(lam[4:9]) < 1e-9       # five copies near 6


def test_torus_analytic_spectrum():
    res = smallest_eigs(flat_torus(32, 32), 5, tol=1e-9)
    assert abs(res.eigenvalues[0]) < 1e-10
    assert np.allclose(res.eigenvalues[1:5], 1.0, rtol=5e-3)


def test_residuals_reported():
    res = smallest_eigs(icosphere(1), 4, tol=1e-10)
    assert np.all(res.residuals <= 1e-10)


def test_count_validation():
    with pytest.raises(ValueError):
        smallest_eigs(icosphere(0), 0)
    with pytest.raises(ValueError):
        smallest_eigs(icosphere(0), 11)   # more than n/4 of 12 vertices


def test_oracle_size_cap():
    with pytest.raises(ValueError):
        dense_eigs_oracle(icosphere(3))
