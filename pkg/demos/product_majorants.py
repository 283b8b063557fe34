"""The iteration product xi and its two closed-form majorants.

xi(p, x) is an infinite product of factors (1 + x * beta^{-j})^{beta^{-j}}
with beta = p/(p-2); it controls how sup-norm estimates accumulate over a
geometric sequence of exponents.  Both closed upper bounds should dominate
it on the whole half-line.
"""

import numpy as np

from spectra_lab import moser

xs = np.logspace(-2, 3, 11)
for p in (3.0, 4.0, 6.0):
    print(f"p = {p}, beta = {moser.beta_ratio(p):.4f}")
    print(f"  {'x':>10} {'xi':>12} {'closed bound':>12} {'power bound':>12}")
    for x in xs:
        val = moser.xi(p, x).value
        up_c = moser.xi_upper_closed(p, x)
        assert val <= up_c * (1 + 1e-12)
        if x >= 1.0:
            up_p = moser.xi_upper_power(p, x)
            assert val <= up_p * (1 + 1e-12)
            print(f"  {x:>10.3g} {val:>12.5g} {up_c:>12.5g} {up_p:>12.5g}")
        else:
            print(f"  {x:>10.3g} {val:>12.5g} {up_c:>12.5g} {'-':>12}")
print("xi(0) =", moser.xi(4.0, 0.0).value, "(exact)")
