"""Closed-form nested-sum (3TRF) series for the Mathieu functions.

The solution is split into sub-series y_n(x), where y_n collects every
product of the recurrence that contains exactly n A-type factors:

    y_n(x) = x^(nu+n) * sum_{i_0 <= i_1 <= ... <= i_n}
                 prod_{k<n} a_k(i_k) * R_k(i_{k-1} -> i_k) * eta^(i_n)

with eta = q x^2 / 4, the A-type factor

    a_k(i) = ((i + k/2 + nu/2)^2 - (lambda + 2q)/16)
             / ((i + k/2 + 1/2 + nu/2) (i + k/2 + 1/4 + nu/2))

and the Pochhammer ratios R_k(i -> m) = (alpha_k)_i (beta_k)_i /
((alpha_k)_m (beta_k)_m), alpha_k = 1 + k/2 + nu/2, beta_k = 3/4 + k/2 + nu/2
(for k = 0 the ratio starts from i = 0).  Layer n contributes to the x-degrees
2 i_n + n only.

The A-type factors are written out here directly instead of going through
:func:`mathieu3trf.core.coeff_A`, so that comparing against the Frobenius
recurrence is a real cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    EvalPoint,
    EvalReport,
    IndicialRoot,
    MathieuOverflowError,
    MathieuParams,
    PowerSeries,
    Truncation,
    _check_x,
    eta_of,
    series_tail_estimate,
)

__all__ = [
    "LayerTerm",
    "pochhammer_ratio",
    "a_factor",
    "layer_weights",
    "sub_series_y",
    "mathieu_first_kind",
    "mathieu_second_kind",
    "mathieu_series",
    "collect_coefficients_3trf",
]


@dataclass(frozen=True)
class LayerTerm:
    """One summand of layer ``n``: an index chain and its value (eta^(i_n) included)."""

    n: int
    indices: tuple
    value: float

    def __post_init__(self):
        if len(self.indices) != self.n + 1:
            raise ValueError("layer n needs n + 1 indices i_0 .. i_n")
        if any(b < a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError(f"index chain must be nondecreasing, got {self.indices}")

    @property
    def degree(self) -> int:
        return 2 * self.indices[-1] + self.n


def pochhammer_ratio(a: float, i_from: int, i_to: int) -> float:
    """(a)_{i_from} / (a)_{i_to} for 0 <= i_from <= i_to."""
    if not 0 <= i_from <= i_to:
        raise ValueError(f"need 0 <= i_from <= i_to, got {i_from}, {i_to}")
    r = 1.0
    for k in range(i_from, i_to):
        d = a + k
        if d == 0:
            raise ZeroDivisionError(f"Pochhammer pole: a + k = 0 at a={a}, k={k}")
        r /= d
    return r


def _bases(k: int, nu: float):
    return 1.0 + 0.5 * k + 0.5 * nu, 0.75 + 0.5 * k + 0.5 * nu


def a_factor(i: int, k: int, nu, p: MathieuParams) -> float:
    """A-type factor attached to index i_k in the k-th position of a chain."""
    nu = IndicialRoot.coerce(nu).nu
    s = i + 0.5 * k + 0.5 * nu
    return (s * s - p.shift) / ((s + 0.5) * (s + 0.25))


def layer_weights(p: MathieuParams, nu, eta: float, layers: int, cap: int) -> list:
    """Inner sums of every layer resolved by the top index.

    Returns ``V`` with ``V[n][m]`` the sum over all chains of layer n whose
    top index is i_n = m, eta^m included.  So y_n = x^(nu+n) * sum_m V[n][m].

    The chains are summed forward: V[k][m] = V[k][m-1] * eta / ((alpha_k+m-1)
    (beta_k+m-1)) + V[k-1][m] * a_{k-1}(m), which costs O(layers * cap)
    instead of enumerating the nested sums.
    """
    nu = IndicialRoot.coerce(nu)
    a0, b0 = _bases(0, nu.nu)
    v = [1.0]
    for m in range(1, cap + 1):
        v.append(v[-1] * eta / ((a0 + m - 1) * (b0 + m - 1)))
    out = [v]
    for k in range(1, layers + 1):
        ak, bk = _bases(k, nu.nu)
        prev = out[-1]
        cur = [prev[0] * a_factor(0, k - 1, nu, p)]
        for m in range(1, cap + 1):
            cur.append(cur[-1] * eta / ((ak + m - 1) * (bk + m - 1)) + prev[m] * a_factor(m, k - 1, nu, p))
        out.append(cur)
    return out


def _xpow(x: float, nu: float, n: int) -> float:
    return (math.sqrt(x) if nu == 0.5 else 1.0) * x**n


def sub_series_y(n: int, p: MathieuParams, nu, pt, cap: int = 40) -> float:
    """Layer y_n(x) of the nested-sum series, every index capped at ``cap``."""
    if n < 0:
        raise ValueError(f"layer index must be nonnegative, got {n}")
    x = _check_x(pt.x if isinstance(pt, EvalPoint) else pt)
    nu = IndicialRoot.coerce(nu)
    V = layer_weights(p, nu, eta_of(p, x), n, cap)
    return _xpow(x, nu.nu, n) * math.fsum(V[n])


def mathieu_series(p: MathieuParams, nu, pt, t: Truncation = Truncation()) -> EvalReport:
    """Sum of the layers y_0 .. y_{t.layers} for either indicial root."""
    x = _check_x(pt.x if isinstance(pt, EvalPoint) else pt)
    nu = IndicialRoot.coerce(nu)
    V = layer_weights(p, nu, eta_of(p, x), t.layers, t.cap)
    layers = []
    cap_tail = 0.0
    for n, vn in enumerate(V):
        xp = _xpow(x, nu.nu, n)
        try:
            y = xp * math.fsum(vn)
        except (OverflowError, ValueError):
            y = math.nan
        if not math.isfinite(y):
            raise MathieuOverflowError(f"layer y_{n} is not finite (q={p.q}, lambda={p.lam}, x={x})", layer=n)
        layers.append(y)
        cap_tail += abs(xp * vn[-1])
    value = math.fsum(layers)
    tail = cap_tail
    if len(layers) > 1:
        tail += series_tail_estimate(layers[1:], ratio_floor=x)
    return EvalReport(value=value, tail_estimate=tail, layers_used=t.layers, cap_used=t.cap)


def mathieu_first_kind(p: MathieuParams, pt, t: Truncation = Truncation()) -> EvalReport:
    """MF(q, lambda; x): nu = 0, c_0 = 1."""
    return mathieu_series(p, 0.0, pt, t)


def mathieu_second_kind(p: MathieuParams, pt, t: Truncation = Truncation()) -> EvalReport:
    """MS(q, lambda; x): nu = 1/2, c_0 = 1, carries the x^(1/2) prefactor."""
    return mathieu_series(p, 0.5, pt, t)


def collect_coefficients_3trf(p: MathieuParams, nu, t: Truncation = Truncation()) -> PowerSeries:
    """Expand the layers into plain power-series coefficients c_0 .. c_{2 cap}.

    Layer n with top index m lands on degree 2m + n with weight
    V[n][m] evaluated at eta -> q/4.  Degrees up to ``t.complete_degree``
    receive every contribution and equal the Frobenius coefficients.
    """
    nu = IndicialRoot.coerce(nu)
    V = layer_weights(p, nu, 0.25 * p.q, t.layers, t.cap)
    max_degree = 2 * t.cap
    buckets = [[] for _ in range(max_degree + 1)]
    for n, vn in enumerate(V):
        for m, w in enumerate(vn):
            d = 2 * m + n
            if d <= max_degree:
                buckets[d].append(w)
    coeffs = [math.fsum(b) for b in buckets]
    return PowerSeries(nu, coeffs)
