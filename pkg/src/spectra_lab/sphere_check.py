"""Exact eigenfunction computations on the round sphere.

Works with zonal polynomial functions f(x) = q(x_1) restricted to the unit
sphere S^n in R^(n+1).  On the span of {1, x_1, x_1^2 - 1/(n+1)} the
Laplacian acts diagonally with eigenvalues {0, n, 2(n+1)}, which makes the
classical sup-norm counterexample u = x_1^2 - 1/2 fully computable: the
sup-norm ratio ||Delta u||_inf / ||u||_inf equals 4n and exceeds the
eigenvalue 2(n+1), while the L^2 ratio never does.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

__all__ = [
    "ZonalFunction",
    "u_counterexample",
    "laplacian_on_sphere",
    "lp_norm",
    "counterexample_report",
]


@dataclass(frozen=True)
class ZonalFunction:
    """Polynomial in x_1 restricted to S^n; coeffs ascending by degree."""
    coeffs: tuple
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("sphere dimension must be >= 2")
        if len(self.coeffs) == 0 or len(self.coeffs) > 9:
            raise ValueError("degree must be between 0 and 8")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def degree(self):
        c = np.trim_zeros(np.asarray(self.coeffs), "b")
        return max(0, len(c) - 1)

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(np.asarray(t, dtype=float),
                                                np.asarray(self.coeffs))


def u_counterexample(n):
    """u = x_1^2 - 1/2 on S^n."""
    return ZonalFunction(coeffs=(-0.5, 0.0, 1.0), n=n)


def laplacian_on_sphere(f: ZonalFunction) -> ZonalFunction:
    """Laplace-Beltrami image of a zonal polynomial of degree <= 2.

    Decomposes a_0 + a_1 t + a_2 t^2 against {1, t, t^2 - 1/(n+1)} and scales
    by the eigenvalues {0, n, 2(n+1)} (geometer's sign: Delta = -div grad,
    so eigenfunctions satisfy Delta f = lambda f with lambda >= 0).
    """
    if f.degree > 2:
        raise ValueError("laplacian only implemented on the degree <= 2 span")
    n = f.n
    a = list(f.coeffs) + [0.0] * (3 - len(f.coeffs))
    a0, a1, a2 = a[0], a[1], a[2]
    # a0 + a1 t + a2 t^2 = (a0 + a2/(n+1)) * 1 + a1 * t + a2 * (t^2 - 1/(n+1))
    lam2 = 2.0 * (n + 1.0)
    return ZonalFunction(coeffs=(-lam2 * a2 / (n + 1.0), n * a1, lam2 * a2), n=n)


def _poly_roots_in_interval(coeffs):
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if len(c) <= 1:
        return np.array([])
    r = np.roots(c[::-1])
    r = r[np.abs(r.imag) < 1e-10].real
    return r[(r >= -1.0) & (r <= 1.0)]


def lp_norm(f: ZonalFunction, p):
    """Normalized L^p norm of f over S^n (total measure 1); p in [1, inf].

    Zonal reduction: the norm is a 1-d integral against the weight
    (1 - t^2)^((n-2)/2) on [-1, 1].  Even integer p is integrated exactly with
    Gauss-Jacobi nodes; other finite p uses a dense Gauss-Jacobi rule; p = inf
    enumerates critical points of the polynomial.
    """
    n = f.n
    if p == math.inf or p == "inf":
        cand = np.concatenate([[-1.0, 1.0], _poly_roots_in_interval(
            np.polynomial.polynomial.polyder(f.coeffs))])
        return float(np.abs(f(cand)).max())
    p = float(p)
    if p < 1:
        raise ValueError("p must be >= 1")
    a = 0.5 * (n - 2.0)
    if p == int(p) and int(p) % 2 == 0:
        m = (f.degree * int(p)) // 2 + 1
    else:
        m = 600
    x, w = roots_jacobi(max(m, 4), a, a)
    vals = np.abs(f(x)) ** p
    return float((np.dot(w, vals) / w.sum()) ** (1.0 / p))


def counterexample_report(n, k_max=64):
    """Sup-norm amplification data for u = x_1^2 - 1/2 on S^n.

    Returns a dict with the eigenvalue lam = 2(n+1), the exact sup-norm ratio
    ||Delta u||_inf / ||u||_inf = 4n, the L^2 ratio (always <= lam), the list
    of L^(2k) ratios for k = 1..k_max, and the smallest k whose ratio exceeds
    lam (None if no such k <= k_max exists).
    """
    u = u_counterexample(n)
    du = laplacian_on_sphere(u)
    lam = 2.0 * (n + 1.0)
    sup_ratio = lp_norm(du, math.inf) / lp_norm(u, math.inf)
    ratios = []
    first_k = None
    for k in range(1, k_max + 1):
        r = lp_norm(du, 2 * k) / lp_norm(u, 2 * k)
        ratios.append(r)
        if first_k is None and r > lam:
            first_k = k
    return {
        "n": n,
        "eigenvalue": lam,
        "sup_ratio": sup_ratio,
        "l2_ratio": ratios[0],
        "lp_ratios": ratios,
        "first_exceeding_k": first_k,
    }
