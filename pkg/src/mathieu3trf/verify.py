"""Validation battery: ODE residuals, asymptotic probes, three-way equivalence.

All derivatives are taken termwise from the power series, never by finite
differences, so a residual measures truncation (plus rounding) only.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    TAIL_RATIO_CLIP,
    IndicialRoot,
    MathieuParams,
    PowerSeries,
    Truncation,
    coeff_A,
    coeff_B,
    eval_series,
    frobenius_coeffs,
)
from .quadrature import QuadratureGrid, default_grid, kj_integral, kj_series, mathieu_integral
from .series3trf import collect_coefficients_3trf, mathieu_series

__all__ = [
    "ResidualReport",
    "Check",
    "ProbeTable",
    "series_derivatives",
    "residual_bound",
    "ode_residual_algebraic",
    "ode_residual_trig",
    "asymptotic_ratio_probe",
    "tail_geometry_probe",
    "frobenius_value",
    "equivalence_report",
    "kj_battery",
    "run_verification",
]

_EPS = float(np.finfo(float).eps)
# rounding allowance, in ulps of the absolute termwise sum
_ROUNDING_ULPS = 16.0
_TAIL_WINDOW = 8


@dataclass
class ResidualReport:
    """Residuals on a grid together with the bound each one is judged against."""

    points: list
    residuals: list
    bounds: list
    max_abs_residual: float = field(init=False)
    tail_bound: float = field(init=False)

    def __post_init__(self):
        self.max_abs_residual = max(abs(r) for r in self.residuals)
        self.tail_bound = max(self.bounds)

    def passes(self, factor: float = 100.0) -> bool:
        return all(abs(r) <= factor * b for r, b in zip(self.residuals, self.bounds))


@dataclass
class Check:
    name: str
    lhs: Optional[float]
    rhs: Optional[float]
    rel_diff: Optional[float]
    tol: float
    passed: bool
    error: Optional[str] = None

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        if d["error"] is None:
            del d["error"]
        return d


def _rel_diff(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def make_check(name: str, lhs, rhs, tol: float, error: Optional[str] = None) -> Check:
    if error is not None or lhs is None or rhs is None:
        return Check(name, lhs, rhs, None, tol, False, error or "missing value")
    rd = _rel_diff(lhs, rhs)
    return Check(name, float(lhs), float(rhs), rd, tol, bool(rd <= tol))


@dataclass
class ProbeTable:
    columns: tuple
    rows: list
    degenerate: bool = False


def _check_grid(xs) -> list:
    xs = [float(x) for x in xs]
    if not xs:
        raise ValueError("empty grid")
    for x in xs:
        if not 0.0 < x < 1.0:
            raise ValueError(f"grid point x={x!r} must lie strictly inside (0, 1)")
    return xs


def series_derivatives(s: PowerSeries, x: float):
    """(Y, Y', Y'') of sum c_n x^(n+nu), each summed termwise with fsum."""
    nu = s.nu.nu
    y, d1, d2 = [], [], []
    for n, c in enumerate(s.coeffs):
        if c == 0.0:
            continue
        e = n + nu
        xe = x**e
        y.append(c * xe)
        if e != 0:
            d1.append(c * e * xe / x)
            if e != 1:
                d2.append(c * e * (e - 1) * xe / (x * x))
    return math.fsum(y), math.fsum(d1), math.fsum(d2)


def _operator_weight(m: np.ndarray, x: float, p: MathieuParams) -> np.ndarray:
    # triangle-inequality bound on |L[x^m]| / x^(m-1)
    return 4.0 * (1 - x) * m * np.abs(m - 1) + 2.0 * abs(1 - 2 * x) * m + x * abs(p.lam + 2 * p.q - 4 * p.q * x)


def residual_bound(s: PowerSeries, p: MathieuParams, x: float) -> float:
    """Bound for |L[y_trunc](x)|: extrapolated tail plus rounding allowance.

    The neglected coefficients are modelled as M * rho^(m-N), with M the
    largest of the last few |c_n| and rho their largest ratio (at least 1,
    following c_{n+1} ~ c_n for large n).  Each is weighted by the operator
    acting on x^(m+nu) and the geometric sum is carried to convergence.
    """
    nu = s.nu.nu
    c = np.abs(np.array(s.coeffs))
    N = len(c) - 1
    m_in = np.arange(N + 1) + nu
    with np.errstate(divide="ignore", invalid="ignore"):
        inc = c * _operator_weight(m_in, x, p) * x ** (m_in - 1)
    inc = inc[np.isfinite(inc)]
    rounding = _ROUNDING_ULPS * _EPS * float(inc.sum())
    window = c[max(0, N - _TAIL_WINDOW) :]
    M = float(window.max())
    if M == 0.0:
        return rounding
    ratios = [window[k + 1] / window[k] for k in range(len(window) - 1) if window[k] != 0]
    rho = max(ratios + [1.0])
    r = min(rho * x, TAIL_RATIO_CLIP)
    K = int(min(200_000, max(64, math.ceil((math.log(1e-20) - 4 * math.log(N + 10)) / math.log(r)))))
    k = np.arange(1, K + 1)
    m = N + k + nu
    tail = M * np.sum(r ** k.astype(float) * _operator_weight(m, x, p)) * x ** (N + nu - 1)
    return rounding + float(tail)


def ode_residual_algebraic(s: PowerSeries, p: MathieuParams, x_grid: Sequence[float]) -> ResidualReport:
    """4x(1-x)y'' + 2(1-2x)y' + (lambda+2q-4qx)y at each grid point."""
    xs = _check_grid(x_grid)
    res, bounds = [], []
    for x in xs:
        y, d1, d2 = series_derivatives(s, x)
        res.append(math.fsum([4 * x * (1 - x) * d2, 2 * (1 - 2 * x) * d1, (p.lam + 2 * p.q - 4 * p.q * x) * y]))
        bounds.append(residual_bound(s, p, x))
    return ResidualReport(xs, res, bounds)


def ode_residual_trig(evaluator, p: MathieuParams, z_grid: Sequence[float]) -> ResidualReport:
    """y''(z) + (lambda - 2q cos 2z) y with y(z) = Y(cos^2 z).

    ``evaluator`` is a :class:`PowerSeries` or a callable returning
    (Y, Y', Y'') at x.  The z-derivatives come from the chain rule:
    y'' = sin^2(2z) Y'' - 2 cos(2z) Y'.
    """
    if isinstance(evaluator, PowerSeries):
        series = evaluator
        derivs: Callable = lambda x: series_derivatives(series, x)
    else:
        series = None
        derivs = evaluator
    zs = [float(z) for z in z_grid]
    if not zs:
        raise ValueError("empty grid")
    res, bounds = [], []
    for z in zs:
        x = math.cos(z) ** 2
        if not 0.0 < x < 1.0:
            raise ValueError(f"z={z!r} maps to x={x!r}; need 0 < cos^2 z < 1")
        y, d1, d2 = derivs(x)
        s2, c2 = math.sin(2 * z), math.cos(2 * z)
        res.append(math.fsum([s2 * s2 * d2, -2.0 * c2 * d1, (p.lam - 2 * p.q * c2) * y]))
        bounds.append(residual_bound(series, p, x) if series is not None else 0.0)
    return ResidualReport(zs, res, bounds)


def asymptotic_ratio_probe(p: MathieuParams, nu, n_range: Sequence[int]) -> ProbeTable:
    """Rows (n, A_n, n^2 B_n) for large n."""
    rows = []
    for n in n_range:
        if not 10 <= n <= 10**6:
            raise ValueError(f"n={n} outside the probe range [10, 1e6]")
        rows.append((int(n), coeff_A(n, nu, p), n * n * coeff_B(n, nu, p)))
    return ProbeTable(("n", "A_n", "n2_B_n"), rows)


def tail_geometry_probe(p: MathieuParams, nu, x: float, N: int) -> ProbeTable:
    """Rows (n, |c_{n+1} x^(n+1) / (c_n x^n)|) from the Frobenius coefficients.

    Indices where c_n vanishes are skipped; if every coefficient past c_0 is
    zero the series is reported as degenerate with no rows.
    """
    if not 0.0 < x < 1.0:
        raise ValueError(f"x={x!r} must lie in (0, 1)")
    c = frobenius_coeffs(p, nu, N + 1).coeffs
    if all(v == 0.0 for v in c[1:]):
        return ProbeTable(("n", "ratio"), [], degenerate=True)
    rows = [(n, abs(c[n + 1] * x / c[n])) for n in range(N + 1) if c[n] != 0.0]
    return ProbeTable(("n", "ratio"), rows)


def frobenius_value(p: MathieuParams, nu, x: float, rtol: float = 1e-16, n_start: int = 64, n_limit: int = 1 << 16) -> float:
    """Reference value from the recurrence, doubling the length until the tail is negligible."""
    N = n_start
    while True:
        v, tail = eval_series(frobenius_coeffs(p, nu, N), x, with_tail=True)
        if tail <= rtol * max(abs(v), 1e-300) or N >= n_limit:
            return v
        N *= 2


def _guard(fn):
    try:
        return fn(), None
    except Exception as exc:  # each path reports on its own
        return None, f"{type(exc).__name__}: {exc}"


def equivalence_report(
    p: MathieuParams,
    nu,
    x: float,
    t: Truncation = Truncation(),
    grid: Optional[QuadratureGrid] = None,
    n_max_integral: int = 2,
    tol: float = 1e-6,
) -> dict:
    """Frobenius recurrence, nested series and integral form at one point.

    The integral form only reaches layer ``n_max_integral``; it is compared
    with the series truncated to the same layers, and (completed with the
    higher series layers) with the Frobenius value.
    """
    nu = IndicialRoot.coerce(nu)
    frob, e_f = _guard(lambda: frobenius_value(p, nu, x))
    full, e_s = _guard(lambda: mathieu_series(p, nu, x, t))
    short, e_t = _guard(lambda: mathieu_series(p, nu, x, Truncation(n_max_integral, t.cap)))
    integ, e_i = _guard(lambda: mathieu_integral(p, nu, x, n_max_integral, grid, t.cap))
    series_val = full.value if full is not None else None
    layer_tol = tol if n_max_integral <= 2 else max(tol, 1e-4)
    tol_full = tol
    if full is not None and series_val:
        tol_full = max(tol, 10.0 * full.tail_estimate / abs(series_val))
    hybrid = None
    if integ is not None and full is not None and short is not None:
        hybrid = integ + (full.value - short.value)
    checks = [
        make_check("frobenius_vs_series3trf", frob, series_val, tol_full, e_f or e_s),
        make_check(
            "integral_vs_series3trf_layers",
            integ,
            short.value if short is not None else None,
            layer_tol,
            e_i or e_t,
        ),
        make_check("frobenius_vs_integral_completed", frob, hybrid, max(tol_full, layer_tol), e_f or e_i or e_s),
    ]
    return {
        "q": p.q,
        "lambda": p.lam,
        "nu": nu.nu,
        "x": x,
        "frobenius_value": frob,
        "series3trf_value": series_val,
        "integral_value": integ,
        "checks": [c.as_dict() for c in checks],
        "pass": all(c.passed for c in checks),
    }


def kj_battery(grid: QuadratureGrid = QuadratureGrid(), tol: float = 1e-8, cap: int = 40) -> list:
    checks = []
    for nu in (0.0, 0.5):
        for j in (1, 2, 3):
            for i_prev in (0, 1, 2):
                for eta in (0.05, 0.2):
                    s = kj_series(j, nu, i_prev, eta, cap)
                    v = kj_integral(j, nu, i_prev, eta, grid)
                    checks.append(make_check(f"kj[j={j},nu={nu},i={i_prev},eta={eta}]", s, v, tol))
    return checks


def _residual_checks(p: MathieuParams, t: Truncation, factor: float = 100.0) -> list:
    xs = list(np.linspace(0.05, 0.8, 20))
    checks = []
    for nu in (0.0, 0.5):
        s = collect_coefficients_3trf(p, nu, t).truncated(t.complete_degree)
        rep = ode_residual_algebraic(s, p, xs)
        ok = rep.passes(factor)
        worst = max(abs(r) / (factor * b) if b > 0 else (0.0 if r == 0 else math.inf) for r, b in zip(rep.residuals, rep.bounds))
        checks.append(Check(f"ode_residual[nu={nu}]", rep.max_abs_residual, factor * rep.tail_bound, worst, 1.0, ok))
    return checks


def run_verification(
    p: MathieuParams = MathieuParams(1.0, 1.0),
    xs: Sequence[float] = (0.3,),
    t: Truncation = Truncation(),
    quad_nodes: Optional[int] = None,
    n_max_integral: int = 2,
) -> dict:
    """The full battery used by ``mathieu3trf verify``."""
    grid = QuadratureGrid(quad_nodes) if quad_nodes else None
    reports = [
        equivalence_report(p, nu, x, t, grid, n_max_integral)
        for nu in (0.0, 0.5)
        for x in xs
    ]
    checks = []
    for rep in reports:
        for c in rep["checks"]:
            c = dict(c)
            c["name"] = f"{c['name']}[nu={rep['nu']},x={rep['x']}]"
            checks.append(c)
    checks += [c.as_dict() for c in kj_battery(grid or default_grid(1), cap=t.cap)]
    checks += [c.as_dict() for c in _residual_checks(p, t)]
    return {
        "params": {"q": p.q, "lambda": p.lam},
        "truncation": {"layers": t.layers, "cap": t.cap},
        "quad_nodes": quad_nodes,
        "n_max_integral": n_max_integral,
        "reports": reports,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }
