r"""Modified Bessel functions of the first kind for real order and argument.

Two independent routes are provided so that each can check the other:

.. math::
    I_\alpha(x) = \sum_{l\ge 0} \frac{(x/2)^{2l+\alpha}}{l!\,\Gamma(l+\alpha+1)}
                = \frac{(x/2)^\alpha}{\Gamma(1/2)\Gamma(\alpha+1/2)}
                  \int_{-1}^{1} (1-v^2)^{\alpha-1/2} e^{-xv}\,dv

The integral is done with a Gauss-Jacobi rule whose weight is exactly
:math:`(1-v)^{\alpha-1/2}(1+v)^{\alpha-1/2}`, so the endpoint singularity for
:math:`\alpha < 1/2` never has to be sampled.

The vectorised helpers :func:`hyp0f1` and :func:`i0_kernel_jets` work with
:math:`{}_0F_1(;c;w) = \sum w^l/((c)_l\, l!)`, which for :math:`w>0` is
:math:`\Gamma(c)\, w^{(1-c)/2} I_{c-1}(2\sqrt{w})` and stays real for
:math:`w<0`.  They are what the quadrature module evaluates at every node.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "bessel_i_series",
    "bessel_i_integral",
    "hyp0f1",
    "hyp0f1_euler_jets",
    "i0_kernel_jets",
    "bessel_product_form",
]

_EPS = float(np.finfo(float).eps)
_MAX_TERMS = 10_000


def bessel_i_series(alpha: float, x: float) -> float:
    """I_alpha(x) from its power series.

    The leading term is formed through log-gamma; each further term follows
    from the ratio (x/2)^2 / (l (l + alpha)).  Summation stops once a term
    drops below one ulp of the running sum.
    """
    if alpha <= -1:
        raise ValueError(f"order must exceed -1, got {alpha}")
    if x < 0:
        raise ValueError(f"argument must be nonnegative (real branch only), got {x}")
    if x == 0:
        if alpha == 0:
            return 1.0
        return 0.0 if alpha > 0 else math.inf
    half = 0.5 * x
    term = math.exp(alpha * math.log(half) - math.lgamma(alpha + 1.0))
    q = half * half
    terms = [term]
    total = term
    for l in range(1, _MAX_TERMS):
        term *= q / (l * (l + alpha))
        terms.append(term)
        total += term
        if term <= _EPS * total:
            break
    return math.fsum(terms)


@lru_cache(maxsize=64)
def _gegenbauer_rule(alpha: float, n: int):
    # Gauss-Jacobi on [-1, 1] with weight (1-v^2)^(alpha-1/2) (Golub-Welsch)
    from .quadrature import jacobi_golub_welsch

    a = alpha - 0.5
    return jacobi_golub_welsch(n, a, a)


def bessel_i_integral(alpha: float, x: float, n_nodes: int = 64) -> float:
    """I_alpha(x) from the Poisson-type integral, valid for alpha > -1/2."""
    if alpha <= -0.5:
        raise ValueError(f"the integral form needs alpha > -1/2 (integrable weight), got {alpha}")
    if x < 0:
        raise ValueError(f"argument must be nonnegative (real branch only), got {x}")
    if x == 0:
        return 1.0 if alpha == 0 else 0.0
    v, w = _gegenbauer_rule(float(alpha), int(n_nodes))
    integral = math.fsum(w * np.exp(-x * v))
    log_pref = alpha * math.log(0.5 * x) - math.lgamma(0.5) - math.lgamma(alpha + 0.5)
    return math.exp(log_pref) * integral


def bessel_product_form(alpha: float, eta: float) -> float:
    """Gamma(alpha+1) * eta^(-alpha/2) * I_alpha(2 sqrt(eta)).

    This is the Bessel-function closed form of the 0F1 series
    sum eta^i / ((1)_i (alpha+1)_i).  The eta = 0 corner is its limit, 1.
    """
    if eta < 0:
        raise ValueError("the Bessel product form is only real for eta >= 0; use hyp0f1")
    if eta == 0:
        return 1.0
    return math.gamma(alpha + 1.0) * eta ** (-0.5 * alpha) * bessel_i_series(alpha, 2.0 * math.sqrt(eta))


def _series_terms_needed(c: float, amax: float, order: int) -> int:
    # stop once l^order * |w|^l / ((c)_l l!) is below 1e-17 of the l = 1 term
    if amax == 0.0:
        return 1
    first = amax / c
    t = first
    l = 1
    while l < _MAX_TERMS:
        l += 1
        t *= amax / (l * (c + l - 1.0))
        if t * l**order < 1e-17 * first:
            return l + 1
    return l


def hyp0f1_euler_jets(c: float, w, order: int) -> np.ndarray:
    """Values of theta^k 0F1(;c;w), k = 0..order, with theta = w d/dw.

    Computed termwise as sum l^k w^l / ((c)_l l!).  Returns an array of
    shape ``(order + 1,) + np.shape(w)``.
    """
    w = np.asarray(w, dtype=float)
    amax = float(np.max(np.abs(w))) if w.size else 0.0
    nterms = _series_terms_needed(c, amax, order)
    out = np.zeros((order + 1,) + w.shape)
    term = np.ones_like(w)
    out[0] += term
    for l in range(1, nterms):
        term = term * w / (l * (c + l - 1.0))
        lk = 1.0
        for k in range(order + 1):
            out[k] += lk * term
            lk *= l
    return out


def hyp0f1(c: float, w):
    """0F1(;c;w) for real c > 0, vectorised over w."""
    return hyp0f1_euler_jets(c, w, 0)[0]


def i0_kernel_jets(v, order: int) -> np.ndarray:
    """theta^k of Phi(v) = I_0(2 sqrt(v)) for k = 0..order.

    Phi is the kernel sum [v]^l / (l! (1)_l) left after the beta-integral
    substitution; it is continued to v < 0 through the same series.
    """
    return hyp0f1_euler_jets(1.0, v, order)
