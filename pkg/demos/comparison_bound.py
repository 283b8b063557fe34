"""End-to-end eigenvalue comparison factor for a pair of close spaces.

Given dimension, a curvature scale kappa, a diameter bound and the
spectral closeness parameter epsilon, the engine evaluates the Sobolev
constants H, Gamma, B at alpha = kappa * diameter and assembles the
multiplier (1 + eta(epsilon)) such that lambda_i(Y) <= multiplier *
lambda_i(X) whenever the hypotheses hold.  The feasibility flag records
whether epsilon actually sits below the admissible threshold epsilon_1.
"""

from spectra_lab import constants

n, kappa, diameter = 3, 0.5, 2.0
alpha = kappa * diameter
sc = constants.sobolev_constants(n, alpha)
print(f"alpha = {alpha}:  H = {sc.h:.6f}  Gamma = {sc.gamma:.6f}  "
      f"B = {sc.b:.6f}  (quad err {sc.quad_error:.1e})")

for eps in (1e-16, 1e-13, 1e-2):
    inputs = constants.BoundInputs(n=n, kappa=kappa, diameter=diameter,
                                   epsilon=eps, epsilon0=1e-3)
    factor = constants.theorem_bound(inputs, lam_x=1.0)
    print(f"eps = {eps:8.0e}  multiplier = {factor.multiplier:.12f}  "
          f"feasible = {factor.feasible}  eps_1 = {factor.epsilon_one:.3e}")
