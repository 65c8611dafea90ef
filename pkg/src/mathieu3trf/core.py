"""Domain types, recurrence coefficients and the Frobenius reference series.

The algebraic Mathieu equation

    4x(1-x) y'' + 2(1-2x) y' + (lambda + 2q - 4qx) y = 0,    x = cos^2 z,

has a regular singular point at x = 0 with indicial roots nu = 0 and
nu = 1/2.  Plugging y = sum c_n x^(n+nu) into it gives the three-term
recurrence c_{n+1} = A_n c_n + B_n c_{n-1} implemented here.  The
coefficients produced by :func:`frobenius_coeffs` are the ground truth every
other representation in the package is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

__all__ = [
    "MathieuDomainError",
    "MathieuOverflowError",
    "MathieuParams",
    "IndicialRoot",
    "FIRST_KIND",
    "SECOND_KIND",
    "EvalPoint",
    "PowerSeries",
    "Truncation",
    "EvalReport",
    "coeff_A",
    "coeff_B",
    "frobenius_coeffs",
    "eval_series",
    "series_tail_estimate",
    "eta_of",
]

# Largest term ratio used when extrapolating a geometric tail.
TAIL_RATIO_CLIP = 0.999


class MathieuDomainError(ValueError):
    """Argument outside the convergence domain 0 <= x < 1."""


class MathieuOverflowError(OverflowError):
    """A non-finite value appeared while summing a series.

    ``layer`` holds the index of the offending sub-series when known.
    """

    def __init__(self, message: str, layer: Optional[int] = None):
        super().__init__(message)
        self.layer = layer


@dataclass(frozen=True)
class MathieuParams:
    """Mathieu parameters ``q`` (coupling) and ``lam`` (characteristic value)."""

    q: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.lam)):
            raise ValueError(f"Mathieu parameters must be finite, got q={self.q}, lambda={self.lam}")

    @property
    def shift(self) -> float:
        """The combination (lambda + 2q)/16 appearing in every A-type factor."""
        return (self.lam + 2.0 * self.q) / 16.0


@dataclass(frozen=True)
class IndicialRoot:
    nu: float

    def __post_init__(self):
        if self.nu not in (0.0, 0.5):
            raise ValueError(f"indicial root must be 0 or 1/2, got {self.nu!r}")

    @classmethod
    def coerce(cls, value) -> "IndicialRoot":
        if isinstance(value, IndicialRoot):
            return value
        return cls(float(value))


FIRST_KIND = IndicialRoot(0.0)
SECOND_KIND = IndicialRoot(0.5)


def _check_x(x: float) -> float:
    x = float(x)
    if not (0.0 <= x < 1.0):
        raise MathieuDomainError(
            f"x = {x!r} is outside [0, 1); the series in x = cos^2 z only converges for 0 <= x < 1"
        )
    return x


@dataclass(frozen=True)
class EvalPoint:
    """Evaluation point in the algebraic variable ``x``.

    ``z`` is the optional angle with ``x = cos(z)**2``; use
    :meth:`from_angle` to build a point from an angle.
    """

    x: float
    z: Optional[float] = None

    def __post_init__(self):
        _check_x(self.x)
        if self.z is not None:
            c = math.cos(self.z)
            if abs(self.x - c * c) > 8 * 2.220446049250313e-16:
                raise ValueError(f"x = {self.x!r} does not match cos^2(z) for z = {self.z!r}")

    @classmethod
    def from_angle(cls, z: float) -> "EvalPoint":
        c = math.cos(z)
        return cls(c * c, z)


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients of ``sum_n c_n x**(n + nu)`` with ``c_0 = 1``."""

    nu: IndicialRoot
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "nu", IndicialRoot.coerce(self.nu))
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a power series needs at least one coefficient")
        if coeffs[0] != 1.0:
            raise ValueError(f"c_0 must be 1, got {coeffs[0]!r}")
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self):
        return len(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def truncated(self, degree: int) -> "PowerSeries":
        return PowerSeries(self.nu, self.coeffs[: degree + 1])


@dataclass(frozen=True)
class Truncation:
    """How far the infinite 3TRF sums are carried.

    ``layers`` is the highest sub-series index y_n kept, ``cap`` the upper
    bound used for every summation index i_k.
    """

    layers: int = 20
    cap: int = 40

    def __post_init__(self):
        if int(self.layers) != self.layers or self.layers < 0:
            raise ValueError(f"layers must be a nonnegative integer, got {self.layers!r}")
        if int(self.cap) != self.cap or self.cap < 1:
            raise ValueError(f"cap must be a positive integer, got {self.cap!r}")

    @property
    def complete_degree(self) -> int:
        """Highest x-degree whose coefficient receives every contribution."""
        return min(self.layers, 2 * self.cap + 1)


@dataclass(frozen=True)
class EvalReport:
    value: float
    tail_estimate: float
    layers_used: int
    cap_used: int


def coeff_A(n: int, nu, p: MathieuParams) -> float:
    """Recurrence coefficient multiplying c_n in c_{n+1}."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    m = n + IndicialRoot.coerce(nu).nu
    return (4.0 * m * m - (p.lam + 2.0 * p.q)) / (2.0 * (m + 1.0) * (2.0 * m + 1.0))


def coeff_B(n: int, nu, p: MathieuParams) -> float:
    """Recurrence coefficient multiplying c_{n-1} in c_{n+1}; only defined for n >= 1."""
    if n < 1:
        raise ValueError(f"B_n is only used for n >= 1, got n={n}")
    m = n + IndicialRoot.coerce(nu).nu
    return 4.0 * p.q / (2.0 * (m + 1.0) * (2.0 * m + 1.0))


def frobenius_coeffs(p: MathieuParams, nu, N: int) -> PowerSeries:
    """Run the three-term recurrence for c_0 .. c_N with c_0 = 1."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    nu = IndicialRoot.coerce(nu)
    c = [1.0, coeff_A(0, nu, p)]
    for n in range(1, N):
        c.append(coeff_A(n, nu, p) * c[n] + coeff_B(n, nu, p) * c[n - 1])
    return PowerSeries(nu, c)


def _terms(s: PowerSeries, x: float) -> list:
    terms = []
    xn = 1.0
    for c in s.coeffs:
        terms.append(c * xn)
        xn *= x
    return terms


def series_tail_estimate(terms: Sequence[float], ratio_floor: float = 0.0, window: int = 8) -> float:
    """Geometric extrapolation of the neglected part of a series.

    ``terms`` are the magnitudes (or signed values) of the included terms in
    order.  The ratio is the largest |t_{k+1}/t_k| over the last ``window``
    pairs with nonzero denominator, never below ``ratio_floor`` and clipped
    at :data:`TAIL_RATIO_CLIP`.  The estimate is ``M / (1 - r)`` where ``M``
    is the larger of the last two magnitudes.
    """
    mags = [abs(t) for t in terms]
    if not mags:
        return 0.0
    last = mags[-2:]
    M = max(last)
    if M == 0.0:
        return 0.0
    ratios = [
        mags[k + 1] / mags[k]
        for k in range(max(0, len(mags) - 1 - window), len(mags) - 1)
        if mags[k] != 0.0
    ]
    r = max(ratios + [ratio_floor]) if ratios else ratio_floor
    r = min(r, TAIL_RATIO_CLIP)
    return M / (1.0 - r)


def eval_series(s: PowerSeries, pt, with_tail: bool = False):
    """Evaluate ``x**nu * sum c_n x**n`` lowest degree first.

    The partial sum is accumulated with :func:`math.fsum`, so the result is
    independent of term magnitudes and bit-reproducible.  With
    ``with_tail=True`` a ``(value, tail_estimate)`` pair is returned.
    """
    x = _check_x(pt.x if isinstance(pt, EvalPoint) else pt)
    terms = _terms(s, x)
    total = math.fsum(terms)
    prefactor = math.sqrt(x) if s.nu.nu == 0.5 else 1.0
    value = prefactor * total
    if not math.isfinite(value):
        raise MathieuOverflowError(f"series value is not finite at x={x!r}")
    if not with_tail:
        return value
    tail = prefactor * series_tail_estimate(terms[1:], ratio_floor=x) if len(terms) > 1 else 0.0
    return value, tail


def eta_of(p: MathieuParams, pt) -> float:
    """The rescaled variable eta = q x^2 / 4."""
    x = pt.x if isinstance(pt, EvalPoint) else float(pt)
    return 0.25 * p.q * x * x
