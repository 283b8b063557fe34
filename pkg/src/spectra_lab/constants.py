"""Closed-form constants and eigenvalue comparison factors.

Everything here is scale-aware: with alpha = kappa * D and Lambda = D^2 * lambda
the derived constants depend on the geometry only through homothety-invariant
combinations.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .quadrature import adaptive_gauss_legendre, adaptive_simpson

__all__ = [
    "BoundInputs",
    "SobolevConstants",
    "ComparisonFactor",
    "EpsilonOne",
    "sobolev_exponent",
    "h_alpha",
    "gamma_alpha",
    "b_alpha",
    "sobolev_constants",
    "c1",
    "c2",
    "epsilon_one",
    "eta_of_epsilon",
    "theorem_bound",
    "prop13_bound",
    "unit_ball_volume",
    "weyl_estimate",
]

_QUADS = {
    "gauss": adaptive_gauss_legendre,
    "simpson": adaptive_simpson,
}


def sobolev_exponent(n, p=None):
    """Exponent fed to the Sobolev-constant integrals.

    In dimension n >= 3 this is n itself; in dimension 2 a surrogate exponent
    p > 2 (default 3) is used inside H, Gamma, B and the iteration ratio,
    while dimension-explicit prefactors keep the literal n.
    """
    if n < 2:
        raise ValueError("dimension must be >= 2")
    if n == 2:
        p = 3.0 if p is None else float(p)
        if p <= 2.0:
            raise ValueError("surrogate exponent must exceed 2")
        return p
    if p is not None and float(p) != float(n):
        raise ValueError("custom exponent only supported at n = 2")
    return float(n)


def _sinhc(x):
    # sinh(x)/x, stable near 0
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-8
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 + x * x / 6.0, np.sinh(safe) / safe)


def h_alpha(p, alpha, tol=1e-12, scheme="gauss"):
    """H(alpha) = alpha / int_0^{alpha/2} cosh(t)^(p-1) dt, with H(0) = 2.

    Computed as 2 / int_0^1 cosh(alpha*s/2)^(p-1) ds so the alpha -> 0 limit
    needs no special scaling.  Returns (value, quad_error_estimate).
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha == 0.0:
        return 2.0, 0.0
    quad = _QUADS[scheme]
    g = lambda s: np.cosh(0.5 * alpha * s) ** (p - 1.0)
    # the integrand peaks at s = 1 and can be huge for large alpha; scale the
    # absolute tolerance so the requested tol acts relatively
    scale = max(1.0, float(g(1.0)))
    integral, qerr = quad(g, 0.0, 1.0, tol=tol * scale)
    value = 2.0 / integral
    # first-order propagation through the reciprocal
    return value, 2.0 * qerr / integral**2


def gamma_alpha(p, alpha, tol=1e-12, scheme="gauss"):
    """Gamma(alpha) from the generalized isoperimetric profile.

    Gamma(alpha) = alpha * (int_0^alpha ((alpha/H) cosh t + sinh(t)/p)^(p-1) dt)^(-1/p).
    Substituting t = alpha*s pulls out alpha^p, so the computed integral is O(1)
    even for tiny alpha and Gamma(0) = ((1/2 + 1/p)^p - 2^-p)^(-1/p) exactly.
    Returns (value, quad_error_estimate).
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if alpha == 0.0:
        j = (0.5 + 1.0 / p) ** p - 2.0 ** (-p)
        return j ** (-1.0 / p), 0.0
    h, h_err = h_alpha(p, alpha, tol=tol, scheme=scheme)
    quad = _QUADS[scheme]

    def g(s):
        s = np.asarray(s, dtype=float)
        return (np.cosh(alpha * s) / h + s * _sinhc(alpha * s) / p) ** (p - 1.0)

    scale = max(1.0, float(g(1.0)))
    j, qerr = quad(g, 0.0, 1.0, tol=tol * scale)
    value = j ** (-1.0 / p)
    # sensitivity to the inner H value: dJ/d(1/h) <= (p-1) * J * h / min-term; keep
    # a crude first-order bound via finite proportions
    dj = qerr + (p - 1.0) * j * (h_err / h)
    return value, (1.0 / p) * j ** (-1.0 / p - 1.0) * dj


def b_alpha(p, alpha, tol=1e-12, scheme="gauss"):
    """B(alpha) = 2(p-1)/((p-2) Gamma(alpha)) + 2/H(alpha); returns (value, err)."""
    if p <= 2:
        raise ValueError("requires exponent > 2")
    h, h_err = h_alpha(p, alpha, tol=tol, scheme=scheme)
    g, g_err = gamma_alpha(p, alpha, tol=tol, scheme=scheme)
    value = 2.0 * (p - 1.0) / ((p - 2.0) * g) + 2.0 / h
    err = 2.0 * (p - 1.0) / (p - 2.0) * g_err / g**2 + 2.0 * h_err / h**2
    return value, err


@dataclass
class SobolevConstants:
    alpha: float
    p: float
    h: float
    gamma: float
    b: float
    quad_error: float


def sobolev_constants(n, alpha, p=None, tol=1e-12, scheme="gauss"):
    """Bundle H, Gamma, B at alpha for dimension n (surrogate exponent at n=2)."""
    pp = sobolev_exponent(n, p)
    h, he = h_alpha(pp, alpha, tol=tol, scheme=scheme)
    g, ge = gamma_alpha(pp, alpha, tol=tol, scheme=scheme)
    b, be = b_alpha(pp, alpha, tol=tol, scheme=scheme)
    return SobolevConstants(alpha=alpha, p=pp, h=h, gamma=g, b=b,
                            quad_error=he + ge + be)


def c1(n):
    """Dimensional constant of the 1/16-power correction term."""
    if n < 2:
        raise ValueError("dimension must be >= 2")
    return 14.0 * (n - 1.0) * math.sqrt(n + 1.0)


def c2(n, alpha, lam_d2, p=None, tol=1e-12):
    """Dimensional constant of the 1/8-power correction term.

    alpha = kappa * D, lam_d2 = D^2 * lambda.  Uses the literal dimension in
    the prefactors and the (possibly surrogate) exponent only inside B(alpha).
    """
    if alpha < 0 or lam_d2 < 0:
        raise ValueError("alpha and D^2*lambda must be >= 0")
    b, _ = b_alpha(sobolev_exponent(n, p), alpha, tol=tol)
    inner = 1.0 + b * math.sqrt(lam_d2 + (n - 1.0) * alpha**2)
    return 4.0 * (n + 1.0) * ((2.0 * n + 1.0) * math.exp(n) * inner**n + 2.0)


@dataclass
class BoundInputs:
    """Geometric data for a spectra-comparison bound.

    n: dimension (>= 2); kappa: lower Ricci bound scale (Ric >= -(n-1) kappa^2);
    diameter D; epsilon: distance scale of the approximation; epsilon0: externally
    supplied first admissibility threshold; vol_x / vol_y: optional volumes used
    by the feasibility test; p: surrogate exponent for n = 2.
    """
    n: int
    kappa: float
    diameter: float
    epsilon: float
    epsilon0: float = math.inf
    vol_x: Optional[float] = None
    vol_y: Optional[float] = None
    p: Optional[float] = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("dimension must be >= 2")
        if self.kappa < 0:
            raise ValueError("kappa must be >= 0")
        if self.diameter <= 0:
            raise ValueError("diameter must be > 0")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.epsilon0 <= 0:
            raise ValueError("epsilon0 must be > 0")
        sobolev_exponent(self.n, self.p)

    @property
    def alpha(self):
        return self.kappa * self.diameter


@dataclass
class EpsilonOne:
    value: float
    kappa_degenerate: bool


def epsilon_one(n, kappa, epsilon0):
    """Admissibility threshold: min of epsilon0 and the curvature-scale branch.

    The second branch is ((10/9)^(2/n) - 1)^4 / (20(n+1))^4 / kappa.  At
    kappa = 0 that branch is infinite; the threshold degenerates to epsilon0
    and the flag records it.
    """
    if n < 2:
        raise ValueError("dimension must be >= 2")
    if epsilon0 <= 0:
        raise ValueError("epsilon0 must be > 0")
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    if kappa == 0.0:
        return EpsilonOne(value=epsilon0, kappa_degenerate=True)
    branch = (((10.0 / 9.0) ** (2.0 / n) - 1.0) / (20.0 * (n + 1.0))) ** 4 / kappa
    return EpsilonOne(value=min(epsilon0, branch), kappa_degenerate=False)


def eta_of_epsilon(n, kappa, epsilon):
    """eta(eps) = (1 + 20(n+1)(kappa*eps)^(1/4))^(n/2) - 1."""
    if epsilon < 0 or kappa < 0:
        raise ValueError("kappa and epsilon must be >= 0")
    ke = kappa * epsilon
    return (1.0 + 20.0 * (n + 1.0) * ke**0.25) ** (0.5 * n) - 1.0


@dataclass
class ComparisonFactor:
    c1: float
    c2: float
    eta: float
    multiplier: float
    feasible: bool
    epsilon_one: float = math.nan
    kappa_degenerate: bool = False
    volume_ok: Optional[bool] = None
    lambda_bound: float = math.nan


def theorem_bound(inputs: BoundInputs, lam_x: float) -> ComparisonFactor:
    """Eigenvalue comparison multiplier and feasibility report.

    multiplier = (1 + C1(n) (kappa eps)^{1/16}) (1 + C2(n, alpha, D^2 lam) (kappa eps)^{1/8}).
    Feasibility requires eps < eps_1 and (1 - 10 n (n+1) (kappa eps)^{1/4}) Vol(Y) < Vol(X)
    (volume test only evaluated when both volumes are supplied).
    """
    if lam_x < 0:
        raise ValueError("lambda must be >= 0")
    n = inputs.n
    ke = inputs.kappa * inputs.epsilon
    cc1 = c1(n)
    cc2 = c2(n, inputs.alpha, inputs.diameter**2 * lam_x, p=inputs.p)
    mult = (1.0 + cc1 * ke ** (1.0 / 16.0)) * (1.0 + cc2 * ke ** 0.125)
    eps1 = epsilon_one(n, inputs.kappa, inputs.epsilon0)
    size_ok = inputs.epsilon < eps1.value
    volume_ok = None
    if inputs.vol_x is not None and inputs.vol_y is not None:
        volume_ok = (1.0 - 10.0 * n * (n + 1.0) * ke**0.25) * inputs.vol_y < inputs.vol_x
    feasible = bool(size_ok and (volume_ok is not False))
    return ComparisonFactor(
        c1=cc1, c2=cc2, eta=eta_of_epsilon(n, inputs.kappa, inputs.epsilon),
        multiplier=mult, feasible=feasible, epsilon_one=eps1.value,
        kappa_degenerate=eps1.kappa_degenerate, volume_ok=volume_ok,
        lambda_bound=mult * lam_x)


def prop13_bound(n, alpha, diameter, eta, lam_x, p=None):
    """Eigenvalue bound driven directly by the distortion parameter eta.

    Requires 0 < eta <= 1/9.  Returns (bound_on_lambda_y, multiplier).
    """
    if not 0.0 < eta <= 1.0 / 9.0:
        raise ValueError("eta must lie in (0, 1/9]")
    if lam_x < 0 or diameter <= 0 or alpha < 0:
        raise ValueError("invalid geometric data")
    b, _ = b_alpha(sobolev_exponent(n, p), alpha)
    c = (2.0 * n + 1.0) * math.exp(n) * (
        1.0 + b * math.sqrt(lam_x * diameter**2 + (n - 1.0) * alpha**2)
    ) ** n + 2.0
    mult = (1.0 + 7.0 * (n - 1.0) * eta**0.25) * (1.0 + c * math.sqrt(eta))
    return mult * lam_x, mult


def unit_ball_volume(n):
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def weyl_estimate(n, volume, k):
    """Leading-order eigenvalue growth (2pi)^2 (Vol(B^n) V)^(-2/n) k^(2/n)."""
    if volume <= 0:
        raise ValueError("volume must be > 0")
    if k < 0:
        raise ValueError("index must be >= 0")
    return (2.0 * math.pi) ** 2 / (unit_ball_volume(n) * volume) ** (2.0 / n) * k ** (2.0 / n)
