import math

import numpy as np
import pytest

from spectra_lab import moser


def test_beta_ratio():
    assert moser.beta_ratio(4.0) == 2.0
    assert abs(moser.beta_ratio(3.0) - 3.0) < 1e-15


def test_xi_at_zero_is_one():
    for p in (3.0, 4.0, 6.0):
        ev = moser.xi(p, 0.0)
        assert ev.value == 1.0 and ev.tail_factor == 1.0


def test_partial_products_increase_to_value():
    p, x = 4.0, 2.5
    parts = moser.moser_partial_products(p, x, 30)
    assert all(b >= a for a, b in zip(parts, parts[1:]))
    ev = moser.xi(p, x)
    assert parts[-1] <= ev.value * ev.tail_factor
    assert ev.value >= parts[-1] * (1 - 1e-12)


def test_tail_is_certified():
    ev = moser.xi(4.0, 10.0, rel_tol=1e-6)
    tight = moser.xi(4.0, 10.0, rel_tol=1e-13)
    assert ev.value <= tight.value * (1 + 1e-12)
    assert tight.value <= ev.value * ev.tail_factor * (1 + 1e-12)


def test_closed_majorants_on_grid():
    xs = np.linspace(0.0, 1000.0, 200)
    for p in (3.0, 4.0, 6.0):
        for x in xs:
            ev = moser.xi(p, float(x))
            up = ev.value * ev.tail_factor
            assert up <= moser.xi_upper_closed(p, float(x)) * (1 + 1e-12)
            if x >= 1.0:
                assert up <= moser.xi_upper_power(p, float(x)) * (1 + 1e-12)


def test_power_majorant_domain():
    with pytest.raises(ValueError):
        moser.xi_upper_power(4.0, 0.5)


def test_sup_bounds_monotone_in_lambda():
    vals = [moser.sup_bound_function(4.0, 3.0, 1.0, lam) for lam in (0.5, 1.0, 2.0)]
    assert vals[0] < vals[1] < vals[2]
    v0 = moser.sup_bound_oneform(4.0, 3.0, 1.0, 1.0, 0.0)
    v1 = moser.sup_bound_oneform(4.0, 3.0, 1.0, 1.0, 2.0)
    assert v1 >= v0
