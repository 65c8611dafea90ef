"""Integral representation of the sub-series y_n (n <= 3).

Each layer is a nested double integral.  With theta = w d/dw and the kernel
Phi(v) = I_0(2 sqrt(v)), define for j >= 1

    F_j(w) = int_0^1 int_0^1 t^(a_j) u^(b_j) Phi(w (1-t)(1-u))
                 Psi_j(w t u) dt du,
    Psi_j  = (theta + s_j)^2 F_{j-1} - (lambda + 2q)/16 * F_{j-1},

with a_j = -5/4 + (j+nu)/2, b_j = -1 + (j+nu)/2, s_j = (j-1+nu)/2 and
F_0(w) = sum_i w^i / ((1+nu/2)_i (3/4+nu/2)_i).  Then
y_n(x) = x^(nu+n) F_n(eta).

The algebraic weights t^(a_j), u^(b_j) are absorbed by Gauss-Jacobi rules.
Because the radial operator differentiates the inner integral, each level is
carried as a jet (theta^0 F, theta^1 F, ...) at the quadrature nodes; the
product rule spreads theta over the kernel and the inner function, and
theta commutes with the rescaling w -> w t u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .bessel import bessel_product_form, hyp0f1, i0_kernel_jets
from .core import EvalPoint, IndicialRoot, MathieuParams, _check_x, eta_of

__all__ = [
    "JacobiRule",
    "QuadratureGrid",
    "jacobi_golub_welsch",
    "gauss_jacobi_grid",
    "w_chain",
    "kj_series",
    "kj_integral",
    "apply_radial_operator",
    "integral_sub_y",
    "mathieu_first_kind_integral",
    "mathieu_second_kind_integral",
    "mathieu_integral",
    "layer_exponents",
]

MAX_INTEGRAL_LAYER = 3
# points per chunk when contracting one (t, u) pair
_CHUNK_POINTS = 400_000


def jacobi_golub_welsch(n: int, a: float, b: float):
    """Gauss-Jacobi nodes and weights on [-1, 1] for (1-x)^a (1+x)^b."""
    if n < 1:
        raise ValueError("need at least one node")
    if a <= -1 or b <= -1:
        raise ValueError(f"Jacobi exponents must exceed -1, got a={a}, b={b}")
    k = np.arange(n, dtype=float)
    ab = a + b
    diag = np.empty(n)
    diag[0] = (b - a) / (ab + 2.0)
    kk = k[1:]
    diag[1:] = (b * b - a * a) / ((2 * kk + ab) * (2 * kk + ab + 2.0))
    off = np.empty(max(n - 1, 0))
    if n > 1:
        off[0] = 4.0 * (1 + a) * (1 + b) / ((2 + ab) ** 2 * (3 + ab))
        kk = np.arange(2, n, dtype=float)
        s = 2 * kk + ab
        off[1:] = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1) * (s - 1))
    nodes, vecs = eigh_tridiagonal(diag, np.sqrt(off))
    log_mu0 = (ab + 1) * math.log(2.0) + math.lgamma(a + 1) + math.lgamma(b + 1) - math.lgamma(ab + 2)
    weights = math.exp(log_mu0) * vecs[0, :] ** 2
    return nodes, weights


@dataclass(frozen=True)
class JacobiRule:
    """Gauss rule on (0, 1) for the weight t^alpha."""

    alpha: float
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@lru_cache(maxsize=256)
def _rule(n_nodes: int, alpha: float) -> JacobiRule:
    x, w = jacobi_golub_welsch(n_nodes, 0.0, alpha)
    nodes = 0.5 * (1.0 + x)
    weights = w * 2.0 ** (-alpha - 1.0)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return JacobiRule(alpha, nodes, weights)


def gauss_jacobi_grid(n_nodes: int, alpha: float) -> JacobiRule:
    """Nodes/weights exact for polynomials of degree <= 2 n_nodes - 1 against t^alpha on (0, 1)."""
    if n_nodes < 2:
        raise ValueError(f"need at least 2 nodes, got {n_nodes}")
    if alpha <= -1:
        raise ValueError(f"weight t^{alpha} is not integrable on (0, 1)")
    return _rule(int(n_nodes), float(alpha))


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor-product Gauss-Jacobi grid with ``nodes_per_dim`` nodes per variable."""

    nodes_per_dim: int = 32

    def __post_init__(self):
        if self.nodes_per_dim < 2:
            raise ValueError("nodes_per_dim must be at least 2")

    def pair(self, alpha_t: float, alpha_u: float):
        return gauss_jacobi_grid(self.nodes_per_dim, alpha_t), gauss_jacobi_grid(self.nodes_per_dim, alpha_u)


def layer_exponents(j: int, nu) -> tuple:
    """Weight exponents (alpha_t, alpha_u) of the j-th (t, u) pair."""
    nu = IndicialRoot.coerce(nu).nu
    return -1.25 + 0.5 * (j + nu), -1.0 + 0.5 * (j + nu)


def w_chain(eta: float, ts, us, a: int, b: int) -> float:
    """w_{a,b} = eta * prod_{l=a}^{b} t_l u_l, or eta when a > b.

    ``ts`` and ``us`` are indexed from 1 through mappings or sequences with a
    dummy entry at 0.
    """
    w = eta
    for l in range(a, b + 1):
        w *= ts[l] * us[l]
    return w


def kj_series(j: int, nu, i_prev: int, eta: float, cap: int = 40) -> float:
    """Series side of the K_j transform.

    1/((i-1/4+j/2+nu/2)(i+j/2+nu/2)) * sum_{m >= i} R_j(i -> m) eta^m with
    i = i_prev, summed over m = i .. i + cap.
    """
    nu = IndicialRoot.coerce(nu).nu
    if i_prev < 0:
        raise ValueError("i_prev must be nonnegative")
    c1 = i_prev - 0.25 + 0.5 * j + 0.5 * nu
    c2 = i_prev + 0.5 * j + 0.5 * nu
    alpha, beta = 1.0 + 0.5 * j + 0.5 * nu, 0.75 + 0.5 * j + 0.5 * nu
    term = eta**i_prev
    terms = [term]
    for m in range(i_prev + 1, i_prev + cap + 1):
        term *= eta / ((alpha + m - 1) * (beta + m - 1))
        terms.append(term)
    return math.fsum(terms) / (c1 * c2)


def kj_integral(j: int, nu, i_prev: int, eta: float, grid: QuadratureGrid = QuadratureGrid()) -> float:
    """Integral side of the K_j transform on a tensor Gauss-Jacobi grid."""
    at, au = layer_exponents(j, nu)
    if at <= -1 or au <= -1:
        raise ValueError(f"non-integrable exponents ({at}, {au}) for j={j}")
    rt, ru = grid.pair(at, au)
    t = rt.nodes[:, None]
    u = ru.nodes[None, :]
    f = i0_kernel_jets(eta * (1 - t) * (1 - u), 0)[0] * (eta * t * u) ** i_prev
    return float(rt.weights @ f @ ru.weights)


def apply_radial_operator(coeffs, s: float, p: MathieuParams) -> list:
    """Apply w^-s (w d/dw)^2 w^s - (lambda+2q)/16 to sum a_i w^i, termwise."""
    L = p.shift
    return [((i + s) ** 2 - L) * a for i, a in enumerate(coeffs)]


def _inner_coefficients(p: MathieuParams, nu: float, cap: int) -> np.ndarray:
    a0, b0 = 1.0 + 0.5 * nu, 0.75 + 0.5 * nu
    f = [1.0]
    for i in range(1, cap + 1):
        f.append(f[-1] / ((a0 + i - 1) * (b0 + i - 1)))
    return np.array(apply_radial_operator(f, 0.5 * nu, p))


def _poly_jets(g: np.ndarray, w: np.ndarray, order: int) -> np.ndarray:
    """theta^k sum g_i w^i for k = 0..order (Horner per k)."""
    wmax = float(np.max(np.abs(w))) if w.size else 0.0
    idx = np.arange(len(g), dtype=float)
    # drop the tail that cannot reach double precision
    mags = np.abs(g) * np.power(max(wmax, 1e-300), idx) * np.maximum(idx, 1.0) ** order
    keep = np.nonzero(mags > 1e-19 * max(mags.max(), 1e-300))[0]
    top = int(keep[-1]) + 1 if keep.size else 1
    g, idx = g[:top], idx[:top]
    out = np.empty((order + 1,) + w.shape)
    for k in range(order + 1):
        c = g * idx**k
        acc = np.full(w.shape, c[-1])
        for ci in c[-2::-1]:
            acc = acc * w + ci
        out[k] = acc
    return out


class _LayerIntegrator:
    def __init__(self, p: MathieuParams, nu: float, grid: QuadratureGrid, cap: int):
        self.p = p
        self.nu = nu
        self.grid = grid
        self.g = _inner_coefficients(p, nu, cap)

    def psi_jets(self, j: int, w: np.ndarray, order: int) -> np.ndarray:
        if j == 1:
            return _poly_jets(self.g, w, order)
        F = self.F_jets(j - 1, w, order + 2)
        s = 0.5 * (j - 1 + self.nu)
        c0 = s * s - self.p.shift
        return F[2:] + 2.0 * s * F[1:-1] + c0 * F[:-2]

    def F_jets(self, j: int, w: np.ndarray, order: int) -> np.ndarray:
        rt, ru = self.grid.pair(*layer_exponents(j, self.nu))
        t, u = rt.nodes, ru.nodes
        tu = np.outer(t, u)
        om = np.outer(1.0 - t, 1.0 - u)
        W = np.outer(rt.weights, ru.weights)
        binom = [[math.comb(k, m) for m in range(k + 1)] for k in range(order + 1)]
        out = np.empty((order + 1, w.size))
        step = max(1, _CHUNK_POINTS // tu.size)
        for lo in range(0, w.size, step):
            wc = w[lo : lo + step]
            P = wc[:, None, None] * tu
            V = wc[:, None, None] * om
            psi = self.psi_jets(j, P.ravel(), order).reshape((order + 1,) + P.shape)
            phi = i0_kernel_jets(V, order)
            for k in range(order + 1):
                acc = np.zeros(P.shape)
                for m in range(k + 1):
                    acc += binom[k][m] * phi[m] * psi[k - m]
                out[k, lo : lo + step] = np.einsum("mab,ab->m", acc, W)
        return out


def integral_sub_y(
    n: int,
    p: MathieuParams,
    nu,
    pt,
    grid: QuadratureGrid = QuadratureGrid(),
    cap: int = 40,
) -> float:
    """Layer y_n from its 2n-dimensional integral form, 1 <= n <= 3."""
    if not 1 <= n <= MAX_INTEGRAL_LAYER:
        raise ValueError(f"integral layers are supported for 1 <= n <= {MAX_INTEGRAL_LAYER}, got {n}")
    x = _check_x(pt.x if isinstance(pt, EvalPoint) else pt)
    nu = IndicialRoot.coerce(nu).nu
    eta = eta_of(p, x)
    F = _LayerIntegrator(p, nu, grid, cap).F_jets(n, np.array([eta]), 0)
    return (math.sqrt(x) if nu == 0.5 else 1.0) * x**n * float(F[0, 0])


def _leading_term(nu: float, eta: float) -> float:
    # Gamma(3/4) eta^(1/8) I_{-1/4}(2 sqrt eta)  or  Gamma(5/4) eta^(-1/8) I_{1/4}(2 sqrt eta)
    alpha = -0.25 if nu == 0.0 else 0.25
    if eta >= 0:
        return bessel_product_form(alpha, eta)
    return float(hyp0f1(alpha + 1.0, eta))


def mathieu_integral(p: MathieuParams, nu, pt, n_max: int = 2, grid: QuadratureGrid | None = None, cap: int = 40) -> float:
    """Bessel leading term plus the integral layers y_1 .. y_{n_max}."""
    if not 0 <= n_max <= MAX_INTEGRAL_LAYER:
        raise ValueError(f"n_max must be in 0..{MAX_INTEGRAL_LAYER}, got {n_max}")
    x = _check_x(pt.x if isinstance(pt, EvalPoint) else pt)
    nu = IndicialRoot.coerce(nu).nu
    total = [(math.sqrt(x) if nu == 0.5 else 1.0) * _leading_term(nu, eta_of(p, x))]
    for n in range(1, n_max + 1):
        g = grid or default_grid(n)
        total.append(integral_sub_y(n, p, nu, x, g, cap))
    return math.fsum(total)


def default_grid(n: int) -> QuadratureGrid:
    """32 nodes per variable up to two layers, 12 for the six-dimensional third layer."""
    return QuadratureGrid(32 if n <= 2 else 12)


def mathieu_first_kind_integral(p: MathieuParams, pt, n_max: int = 2, grid: QuadratureGrid | None = None, cap: int = 40) -> float:
    return mathieu_integral(p, 0.0, pt, n_max, grid, cap)


def mathieu_second_kind_integral(p: MathieuParams, pt, n_max: int = 2, grid: QuadratureGrid | None = None, cap: int = 40) -> float:
    return mathieu_integral(p, 0.5, pt, n_max, grid, cap)
