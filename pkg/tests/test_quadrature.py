import math

import numpy as np
import pytest

from spectra_lab.quadrature import adaptive_gauss_legendre, adaptive_simpson


def test_polynomial_exact():
    # degree-9 polynomial is inside the Gauss panel's exactness range
    f = lambda x: 3 * x**9 - x**4 + 2.0
    val, err = adaptive_gauss_legendre(f, -1.0, 2.0)
    exact = (3 / 10) * (2.0**10 - 1.0) - (2.0**5 + 1.0) / 5 + 2.0 * 3.0
    assert abs(val - exact) < 1e-12
    assert err < 1e-11


def test_certified_error_sin():
    val, err = adaptive_gauss_legendre(np.sin, 0.0, math.pi, tol=1e-13)
    assert abs(val - 2.0) <= max(err, 5e-14)


def test_schemes_agree():
    f = lambda x: np.exp(-x) * np.cos(3 * x)
    a, _ = adaptive_gauss_legendre(f, 0.0, 5.0, tol=1e-12)
    b, _ = adaptive_simpson(f, 0.0, 5.0, tol=1e-12)
    assert abs(a - b) < 1e-10


def test_reversed_interval():
    val, _ = adaptive_gauss_legendre(np.exp, 1.0, 0.0)
    ref, _ = adaptive_gauss_legendre(np.exp, 0.0, 1.0)
    assert abs(val + ref) < 1e-13


def test_tolerance_respected():
    f = lambda x: 1.0 / (1e-3 + x**2)
    loose, el = adaptive_gauss_legendre(f, -1.0, 1.0, tol=1e-6)
    tight, et = adaptive_gauss_legendre(f, -1.0, 1.0, tol=1e-12)
    assert abs(loose - tight) < 1e-5
    assert et <= 1e-11
