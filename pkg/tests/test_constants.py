import math

import numpy as np
import pytest

from spectra_lab import constants


def gamma_zero(p):
    return ((0.5 + 1.0 / p) ** p - 2.0 ** (-p)) ** (-1.0 / p)


def test_h_at_zero_exact():
    for p in (3.0, 4.0, 6.0):
        v, err = constants.h_alpha(p, 0.0)
        assert v == 2.0 and err == 0.0


def test_gamma_at_zero_closed_form():
    for p in (3.0, 4.0, 6.0):
        v, _ = constants.gamma_alpha(p, 0.0)
        assert abs(v - gamma_zero(p)) < 1e-14


def test_small_alpha_limits():
    for p in (3.0, 4.0, 6.0):
        h, _ = constants.h_alpha(p, 1e-4)
        g, _ = constants.gamma_alpha(p, 1e-4)
        assert abs(h - 2.0) < 1e-5
        assert abs(g - gamma_zero(p)) < 1e-5


def test_dual_quadrature_schemes_agree():
    for alpha in np.linspace(0.0, 5.0, 11):
        for fn in (constants.h_alpha, constants.gamma_alpha, constants.b_alpha):
            a, _ = fn(4.0, float(alpha), scheme="gauss")
            b, _ = fn(4.0, float(alpha), scheme="simpson")
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


def test_b_alpha_consistency():
    h, _ = constants.h_alpha(5.0, 0.7)
    g, _ = constants.gamma_alpha(5.0, 0.7)
    b, _ = constants.b_alpha(5.0, 0.7)
    assert abs(b - (2 * 4.0 / (3.0 * g) + 2.0 / h)) < 1e-13


def test_sobolev_exponent_dimension_two_needs_surrogate():
    assert constants.sobolev_exponent(3) == 3.0
    assert constants.sobolev_exponent(2, 4.0) == 4.0
    assert constants.sobolev_exponent(2) == 3.0
    with pytest.raises(ValueError):
        constants.sobolev_exponent(2, 2.0)
    with pytest.raises(ValueError):
        constants.sobolev_exponent(4, 5.0)


def test_c1_value():
    assert constants.c1(3) == 14.0 * 2.0 * 2.0


def test_epsilon_one_branches():
    e = constants.epsilon_one(3, 0.0, 1e-3)
    assert e.value == 1e-3 and e.kappa_degenerate
    e = constants.epsilon_one(3, 1.0, math.inf)
    branch = (((10 / 9) ** (2 / 3) - 1) / (20 * 4)) ** 4
    assert abs(e.value - branch) < 1e-25
    assert not e.kappa_degenerate


def test_eta_zero_and_monotone():
    assert constants.eta_of_epsilon(3, 1.0, 0.0) == 0.0
    grid = [constants.eta_of_epsilon(3, 1.0, e) for e in np.linspace(0, 1e-3, 20)]
    assert all(b >= a for a, b in zip(grid, grid[1:]))


def test_multiplier_one_at_zero_epsilon():
    inputs = constants.BoundInputs(n=3, kappa=1.0, diameter=1.0, epsilon=0.0,
                                   epsilon0=1e-3)
    out = constants.theorem_bound(inputs, 10.0)
    assert out.multiplier == 1.0
    assert out.lambda_bound == 10.0


def test_multiplier_monotone_in_epsilon():
    vals = []
    for eps in np.geomspace(1e-18, 1e-6, 13):
        inputs = constants.BoundInputs(n=3, kappa=1.0, diameter=1.0,
                                       epsilon=float(eps), epsilon0=1e-3)
        vals.append(constants.theorem_bound(inputs, 10.0).multiplier)
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_multiplier_homothety_invariant():
    # scaling the metric by s^2 maps (kappa, D, eps, lam) ->
    # (kappa/s, s D, s eps, lam/s^2) and must leave the factor unchanged
    base = constants.BoundInputs(n=3, kappa=1.0, diameter=2.0, epsilon=1e-15,
                                 epsilon0=1e-3)
    ref = constants.theorem_bound(base, 7.0).multiplier
    for s in (0.1, 3.0, 10.0):
        scaled = constants.BoundInputs(n=3, kappa=1.0 / s, diameter=2.0 * s,
                                       epsilon=1e-15 * s, epsilon0=1e-3 * s)
        m = constants.theorem_bound(scaled, 7.0 / s**2).multiplier
        assert abs(m - ref) <= 1e-12 * ref


def test_feasibility_flags():
    ok = constants.BoundInputs(n=3, kappa=1.0, diameter=1.0, epsilon=1e-16,
                               epsilon0=1e-3, vol_x=1.0, vol_y=1.0)
    assert constants.theorem_bound(ok, 1.0).feasible
    big = constants.BoundInputs(n=3, kappa=1.0, diameter=1.0, epsilon=1e-3,
                                epsilon0=1e-3)
    assert not constants.theorem_bound(big, 1.0).feasible
    # volume hypothesis: (1 - 10 n (n+1) (kappa eps)^(1/4)) vol_y < vol_x
    lopsided = constants.BoundInputs(n=3, kappa=1.0, diameter=1.0,
                                     epsilon=1e-16, epsilon0=1e-3,
                                     vol_x=1e-9, vol_y=1e9)
    assert constants.theorem_bound(lopsided, 1.0).volume_ok is False


def test_prop13_domain():
    with pytest.raises(ValueError):
        constants.prop13_bound(3, 0.5, 1.0, 0.2, 1.0)
    bound, mult = constants.prop13_bound(3, 0.5, 1.0, 1.0 / 9.0, 2.0)
    assert mult > 1.0 and abs(bound - mult * 2.0) < 1e-12


def test_weyl_formula():
    v = constants.unit_ball_volume(2)
    assert abs(v - math.pi) < 1e-14
    w = constants.weyl_estimate(2, 4 * math.pi, 9)
    assert abs(w - (2 * math.pi) ** 2 * (math.pi * 4 * math.pi) ** (-1.0) * 9.0) < 1e-12
