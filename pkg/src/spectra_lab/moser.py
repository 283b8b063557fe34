"""Infinite-product sup-norm machinery.

The central object is

    xi(x) = prod_{i>=0} (1 + beta^i / sqrt(2 beta^i - 1) * x)^(beta^-i),
    beta = p / (p - 2),

which converts an L^2 bound into a sup bound for eigenfunctions.  The product
is evaluated in log space with a certified geometric tail bound, plus two
closed-form majorants used as independent upper envelopes.
"""

import math
from dataclasses import dataclass

__all__ = [
    "beta_ratio",
    "XiEvaluation",
    "xi",
    "xi_upper_closed",
    "xi_upper_power",
    "moser_partial_products",
    "sup_bound_function",
    "sup_bound_oneform",
]


def beta_ratio(p):
    if p <= 2:
        raise ValueError("exponent must exceed 2")
    return p / (p - 2.0)


@dataclass
class XiEvaluation:
    p: float
    x: float
    value: float          # truncated product (lower bound of the true value)
    tail_factor: float    # certified multiplicative tail: value <= xi <= value*tail_factor
    terms: int
    upper_closed: float   # closed-form majorant, always >= xi


def xi(p, x, rel_tol=1e-10, max_terms=10**6):
    """Evaluate xi(p, x) with a certified truncation tail.

    Each factor satisfies log(1 + a_i x)^(beta^-i) <= x / sqrt(2 beta^i - 1)
    <= x beta^(-i/2), so the tail beyond m terms is bounded by the geometric
    sum x beta^(-m/2) / (1 - beta^(-1/2)).
    """
    if x < 0:
        raise ValueError("argument must be >= 0")
    b = beta_ratio(p)
    if x == 0.0:
        return XiEvaluation(p=p, x=0.0, value=1.0, tail_factor=1.0, terms=0,
                            upper_closed=xi_upper_closed(p, 0.0))
    target = math.log1p(rel_tol)
    sqrt_b = math.sqrt(b)
    log_sum = 0.0
    bi = 1.0          # beta^i
    bi_inv = 1.0      # beta^-i
    i = 0
    while True:
        tail = x * (bi_inv ** 0.5) / (1.0 - 1.0 / sqrt_b)
        if tail <= target:
            break
        a_i = bi / math.sqrt(2.0 * bi - 1.0)
        log_sum += bi_inv * math.log1p(a_i * x)
        bi *= b
        bi_inv /= b
        i += 1
        if i > max_terms:
            raise RuntimeError("xi: series truncation did not certify")
    return XiEvaluation(p=p, x=x, value=math.exp(log_sum),
                        tail_factor=math.exp(tail), terms=i,
                        upper_closed=xi_upper_closed(p, x))


def xi_upper_closed(p, x):
    """Majorant xi(x) <= exp((p/2) x/(1+x)) (1+x)^(p/2), valid for all x >= 0."""
    if x < 0:
        raise ValueError("argument must be >= 0")
    return math.exp(0.5 * p * x / (1.0 + x)) * (1.0 + x) ** (0.5 * p)


def xi_upper_power(p, x):
    """Majorant xi(x) <= (4e)^(p/4) x^(p/2), valid for x >= 1."""
    if x < 1:
        raise ValueError("power majorant only valid for x >= 1")
    return (4.0 * math.e) ** (0.25 * p) * x ** (0.5 * p)


def moser_partial_products(p, x, m):
    """First m partial products of the xi product (m >= 1); non-decreasing in m."""
    if m < 1:
        raise ValueError("need at least one factor")
    if x < 0:
        raise ValueError("argument must be >= 0")
    b = beta_ratio(p)
    out = []
    log_sum = 0.0
    for i in range(m):
        bi = b**i
        a_i = bi / math.sqrt(2.0 * bi - 1.0)
        log_sum += math.log1p(a_i * x) / bi
        out.append(math.exp(log_sum))
    return out


def sup_bound_function(p, b_alpha_value, diameter, lam, rel_tol=1e-10):
    """Sup/L2 ratio bound for an eigenfunction: xi(B(alpha) D sqrt(lambda)).

    Returns the certified upper value (truncation x tail)."""
    if lam < 0 or diameter <= 0 or b_alpha_value <= 0:
        raise ValueError("invalid inputs")
    ev = xi(p, b_alpha_value * diameter * math.sqrt(lam), rel_tol=rel_tol)
    return ev.value * ev.tail_factor


def sup_bound_oneform(p, b_alpha_value, diameter, lam, alpha, rel_tol=1e-10):
    """Sup/L2 ratio bound for the differential: xi(B sqrt(lam D^2 + (p-1) alpha^2))."""
    if lam < 0 or diameter <= 0 or b_alpha_value <= 0 or alpha < 0:
        raise ValueError("invalid inputs")
    arg = b_alpha_value * math.sqrt(lam * diameter**2 + (p - 1.0) * alpha**2)
    ev = xi(p, arg, rel_tol=rel_tol)
    return ev.value * ev.tail_factor
