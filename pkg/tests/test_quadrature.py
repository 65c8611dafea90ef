import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from mathieu3trf.core import MathieuParams, Truncation
from mathieu3trf.quadrature import (
    QuadratureGrid,
    apply_radial_operator,
    gauss_jacobi_grid,
    integral_sub_y,
    jacobi_golub_welsch,
    kj_integral,
    kj_series,
    layer_exponents,
    mathieu_integral,
    w_chain,
)
from mathieu3trf.series3trf import mathieu_series, sub_series_y


@pytest.mark.parametrize("alpha", [-0.75, -0.5, 0.0, 0.25, 1.5])
@pytest.mark.parametrize("n", [2, 5, 16])
def test_gauss_exactness(alpha, n):
    rule = gauss_jacobi_grid(n, alpha)
    for k in range(2 * n):
        exact = 1.0 / (k + alpha + 1)
        assert rule.integrate(lambda t: t**k) == pytest.approx(exact, rel=1e-12)


def test_quarter_power_weight():
    assert gauss_jacobi_grid(8, -0.75).integrate(lambda t: np.ones_like(t)) == pytest.approx(4.0, rel=1e-14)


def test_nodes_inside_interval():
    rule = gauss_jacobi_grid(32, -0.75)
    assert np.all((rule.nodes > 0) & (rule.nodes < 1))
    assert np.all(rule.weights > 0)


def test_golub_welsch_legendre_matches_numpy():
    x, w = jacobi_golub_welsch(10, 0.0, 0.0)
    xr, wr = np.polynomial.legendre.leggauss(10)
    assert np.sort(x) == pytest.approx(xr, abs=1e-14)
    assert w[np.argsort(x)] == pytest.approx(wr, rel=1e-12)


@pytest.mark.parametrize("alpha", [-0.75, -0.25, 0.5])
def test_against_adaptive_quadrature(alpha):
    f = lambda t: math.exp(-t) * math.cos(3 * t)
    ref, _ = integrate.quad(f, 0, 1, weight="alg", wvar=(alpha, 0), epsabs=1e-14, epsrel=1e-13)
    got = gauss_jacobi_grid(24, alpha).integrate(lambda t: np.exp(-t) * np.cos(3 * t))
    assert got == pytest.approx(ref, rel=1e-12)


def test_grid_validation():
    with pytest.raises(ValueError):
        gauss_jacobi_grid(1, 0.0)
    with pytest.raises(ValueError):
        gauss_jacobi_grid(4, -1.0)
    with pytest.raises(ValueError):
        QuadratureGrid(1)


def test_layer_exponents():
    assert layer_exponents(1, 0) == (-0.75, -0.5)
    assert layer_exponents(2, 0.5) == (0.0, 0.25)


@pytest.mark.parametrize("nu", [0.0, 0.5])
@pytest.mark.parametrize("j", [1, 2, 3])
@pytest.mark.parametrize("i_prev", [0, 1, 2])
def test_kj_identity(nu, j, i_prev):
    for eta in (0.05, 0.2, 1.0):
        assert kj_integral(j, nu, i_prev, eta) == pytest.approx(kj_series(j, nu, i_prev, eta), rel=1e-10)


def test_kj_single_term():
    # eta -> 0 leaves the i = 0 term: 1 / ((j/2 - 1/4)(j/2)) at j = 1, nu = 0
    assert kj_series(1, 0, 0, 0.0) == pytest.approx(8.0)
    assert kj_integral(1, 0, 0, 0.0) == pytest.approx(8.0, rel=1e-13)


def test_kj_coarse_grid_is_inaccurate():
    err = abs(kj_integral(1, 0, 2, 0.2, QuadratureGrid(2)) / kj_series(1, 0, 2, 0.2) - 1)
    assert err > 1e-8


def test_w_chain():
    ts = [None, 0.5, 0.2]
    us = [None, 0.4, 1.0]
    assert w_chain(2.0, ts, us, 1, 0) == 2.0
    assert w_chain(2.0, ts, us, 1, 2) == pytest.approx(2.0 * 0.5 * 0.4 * 0.2)


@given(st.floats(0, 10), st.lists(st.floats(0, 1), min_size=4, max_size=4))
def test_w_chain_bounded(eta, vals):
    ts = [None, vals[0], vals[1]]
    us = [None, vals[2], vals[3]]
    assert w_chain(eta, ts, us, 1, 2) <= eta


def test_radial_operator_examples():
    p = MathieuParams(0.0, 0.0)
    assert apply_radial_operator([1.0, 1.0, 1.0], 0.0, p) == [0.0, 1.0, 4.0]
    p = MathieuParams(2.0, 4.0)  # L = 1/2
    assert apply_radial_operator([2.0], 0.5, p) == [2.0 * (0.25 - 0.5)]


@given(
    st.lists(st.floats(-5, 5), min_size=1, max_size=8),
    st.lists(st.floats(-5, 5), min_size=1, max_size=8),
    st.floats(-3, 3),
    st.floats(0, 2),
)
def test_radial_operator_linear(a, b, c, s):
    n = min(len(a), len(b))
    a, b = a[:n], b[:n]
    p = MathieuParams(1.0, 1.0)
    lhs = apply_radial_operator([x + c * y for x, y in zip(a, b)], s, p)
    ra, rb = apply_radial_operator(a, s, p), apply_radial_operator(b, s, p)
    assert lhs == pytest.approx([x + c * y for x, y in zip(ra, rb)], abs=1e-9)


@pytest.mark.parametrize("nu", [0.0, 0.5])
@pytest.mark.parametrize("n", [1, 2])
def test_integral_layers(nu, n):
    p = MathieuParams(1.0, 1.0)
    for x in (0.2, 0.6):
        assert integral_sub_y(n, p, nu, x) == pytest.approx(sub_series_y(n, p, nu, x), rel=1e-9)


def test_integral_layer_negative_q():
    p = MathieuParams(-2.0, 3.0)
    assert integral_sub_y(2, p, 0, 0.4) == pytest.approx(sub_series_y(2, p, 0, 0.4), rel=1e-9)


def test_grid_refinement_converges():
    p = MathieuParams(2.0, 3.0)
    ref = sub_series_y(2, p, 0, 0.3)
    errs = [abs(integral_sub_y(2, p, 0, 0.3, QuadratureGrid(k)) - ref) for k in (3, 6, 12)]
    assert errs[0] > errs[1] > errs[2] or errs[2] < 1e-14 * abs(ref)


def test_integral_value_matches_truncated_series():
    p = MathieuParams(1.0, 1.0)
    v = mathieu_integral(p, 0, 0.3, n_max=2)
    assert v == pytest.approx(mathieu_series(p, 0, 0.3, Truncation(2, 40)).value, rel=1e-10)


def test_integral_layer_bounds():
    with pytest.raises(ValueError):
        integral_sub_y(4, MathieuParams(1, 1), 0, 0.3)
    with pytest.raises(ValueError):
        mathieu_integral(MathieuParams(1, 1), 0, 0.3, n_max=4)
