import numpy as np
import pytest

from spectra_lab.matrix_stability import (SampleRejected, jacobi_eigh,
                                          lemma_a2_residuals,
                                          lemma_a3_residual, prop_a1_residual,
                                          quasi_isometry_check, run_suite,
                                          sample_constrained_matrix,
                                          sym_eigenvalues)


def random_sym(n, rng, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return 0.5 * (a + a.T)


def test_jacobi_matches_lapack():
    rng = np.random.default_rng(3)
    for n in (2, 5, 12):
        a = random_sym(n, rng)
        w, v = jacobi_eigh(a)
        ref = np.linalg.eigvalsh(a)
        assert np.max(np.abs(w - ref)) < 1e-12 * max(1.0, np.abs(ref).max())
        # eigenvector residuals
        assert np.max(np.abs(a @ v - v * w[None, :])) < 1e-12 * np.abs(a).max() * n


def test_jacobi_requires_symmetry():
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_sym_eigenvalues_sorted():
    rng = np.random.default_rng(0)
    w = sym_eigenvalues(random_sym(6, rng))
    assert np.all(np.diff(w) >= 0)


def test_prop_a1_identity():
    res = prop_a1_residual(np.eye(4), 0.01)
    # ||A - Id|| = 0, so the residual is the full bound
    assert res > 0


def test_lemma_a2_two_point_equality():
    # n = 2, x = (-a, a): prod = 1 - a^2 equals the one-term bound exactly
    r1, r2 = lemma_a2_residuals(np.array([-0.3, 0.3]))
    assert abs(r1) < 1e-15
    assert r2 >= -1e-15


def test_lemma_a2_input_validation():
    with pytest.raises(SampleRejected):
        lemma_a2_residuals(np.array([0.3, -0.3]))       # not ascending
    with pytest.raises(SampleRejected):
        lemma_a2_residuals(np.array([-0.2, 0.3]))       # not zero sum
    with pytest.raises(SampleRejected):
        lemma_a2_residuals(np.array([-1.0, 0.5, 0.5]))  # factor hits zero


def test_lemma_a2_hand_case_n3():
    x = np.array([-0.4, 0.1, 0.3])
    r1, r2 = lemma_a2_residuals(x)
    n = 3
    mid = 1 - n / (2 * (n - 1)) * x[0] ** 2
    assert abs(r1 - (mid - np.prod(1 + x))) < 1e-15
    assert r1 >= -1e-12 and r2 >= -1e-12


def test_lemma_a3_identity_and_scale():
    assert lemma_a3_residual(np.eye(3), 0.5) > 0
    # residual statement is scale-invariant up to (tr/n)^2 factors
    a = np.diag([1.0, 1.1, 0.9])
    eta_p = 1.0 - np.prod(np.diag(a)) / 1.0**3 + 1e-9
    assert lemma_a3_residual(a, eta_p) >= -1e-12


def test_quasi_isometry_identityish():
    assert quasi_isometry_check(np.eye(3), 0.01)


def test_sampler_respects_constraints():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a, w, eta = sample_constrained_matrix(4, rng)
        assert np.linalg.det(a) >= (1 - np.sqrt(eta)) ** 2 - 1e-10
        assert np.trace(a) <= 4 * (1 + eta) ** 0.5 + 1e-10
        assert 0 < eta <= 0.25


@pytest.mark.parametrize("name", ["prop_a1", "lemma_a2", "lemma_a3",
                                  "quasi_isometry"])
def test_suites_clean_small(name):
    for n in (2, 3, 4):
        rep = run_suite(name, n, 2000, seed=11)
        assert rep["violations"] == 0
        assert rep["samples"] >= 2000
