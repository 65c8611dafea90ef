import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mathieu3trf.core import (
    EvalPoint,
    IndicialRoot,
    MathieuDomainError,
    MathieuParams,
    PowerSeries,
    Truncation,
    coeff_A,
    coeff_B,
    eta_of,
    eval_series,
    frobenius_coeffs,
)


def exact_coeffs(q, lam, nu, N):
    """Recurrence in rational arithmetic, written from the ODE directly."""
    q, lam, nu = Fraction(q), Fraction(lam), Fraction(nu)
    c = [Fraction(1)]
    for n in range(N):
        m = n + nu
        d = 2 * (m + 1) * (2 * m + 1)
        prev = c[n - 1] if n >= 1 else 0
        c.append(((4 * m * m - (lam + 2 * q)) * c[n] + 4 * q * prev) / d)
    return c


params = st.builds(
    MathieuParams,
    st.floats(-10, 10, allow_subnormal=False),
    st.floats(-10, 10, allow_subnormal=False),
)
roots = st.sampled_from([0.0, 0.5])


def test_coeff_A_examples():
    p = MathieuParams(0.0, 4.0)
    assert coeff_A(0, 0, p) == -2.0
    assert coeff_A(1, 0, p) == 0.0
    assert coeff_A(1000, 0, MathieuParams(0, 0)) == pytest.approx(4000000 / 4006002, rel=1e-15)


def test_coeff_B_examples():
    assert coeff_B(1, 0, MathieuParams(0.0, 7.0)) == 0.0
    assert coeff_B(1, 0, MathieuParams(1.0, 0.0)) == pytest.approx(1 / 3, rel=1e-15)
    assert 1000**2 * coeff_B(1000, 0, MathieuParams(1.0, 0.0)) == pytest.approx(1.0, rel=5e-3)


def test_coeff_B_rejects_zero_index():
    with pytest.raises(ValueError):
        coeff_B(0, 0, MathieuParams(1, 1))


@given(params, roots, st.integers(1, 500))
def test_B_vanishes_iff_q_zero(p, nu, n):
    assert (coeff_B(n, nu, p) == 0.0) == (p.q == 0.0)


@given(params, roots, st.sampled_from([100, 1000, 10_000, 123_456]))
def test_large_n_limits(p, nu, n):
    assert abs(coeff_A(n, nu, p) - 1) <= 3 / n
    assert abs(n * n * coeff_B(n, nu, p) - p.q) <= 3 * abs(p.q) / n


@pytest.mark.parametrize(
    "q, lam, nu, N, expected",
    [
        (0, 4, 0, 4, [1, -2, 0, 0, 0]),
        (1, 1, 0, 2, [1, Fraction(-3, 2), Fraction(5, 24)]),
        (0, 4, Fraction(1, 2), 2, [1, Fraction(-1, 2), Fraction(-1, 8)]),
    ],
)
def test_frobenius_hand_values(q, lam, nu, N, expected):
    assert exact_coeffs(q, lam, nu, N) == expected
    s = frobenius_coeffs(MathieuParams(q, lam), float(nu), N)
    assert s.coeffs == pytest.approx([float(e) for e in expected], rel=1e-15, abs=0)


@pytest.mark.parametrize("q, lam", [(1, 1), (-3.5, 2.25), (4, -1)])
@pytest.mark.parametrize("nu", [0, Fraction(1, 2)])
def test_frobenius_against_exact_recurrence(q, lam, nu):
    ex = exact_coeffs(Fraction(q), Fraction(lam), nu, 30)
    got = frobenius_coeffs(MathieuParams(q, lam), float(nu), 30).coeffs
    for e, g in zip(ex, got):
        assert g == pytest.approx(float(e), rel=1e-12, abs=1e-300)


@given(st.floats(-10, 10), roots)
def test_q_zero_ratio_is_gauss_ratio(lam, nu):
    s = frobenius_coeffs(MathieuParams(0.0, lam), nu, 25).coeffs
    for n in range(25):
        m = n + nu
        assert s[n + 1] == s[n] * (4 * m * m - lam) / (2 * (m + 1) * (2 * m + 1)) or math.isclose(
            s[n + 1], s[n] * (4 * m * m - lam) / (2 * (m + 1) * (2 * m + 1)), rel_tol=1e-14
        )


def test_eval_series_examples():
    assert eval_series(PowerSeries(0, [1, -2]), EvalPoint(0.25)) == 0.5
    assert eval_series(PowerSeries(0.5, [1]), EvalPoint(0.25)) == 0.5


@pytest.mark.parametrize("x", [1.0, 1.5, -0.1])
def test_eval_series_domain(x):
    with pytest.raises(MathieuDomainError):
        eval_series(PowerSeries(0, [1, 2]), x)
    with pytest.raises(MathieuDomainError):
        EvalPoint(x)


def test_eval_series_tail_estimate_bounds_extension():
    p = MathieuParams(1.0, 1.0)
    for x in (0.3, 0.6):
        v, tail = eval_series(frobenius_coeffs(p, 0, 30), x, with_tail=True)
        longer = eval_series(frobenius_coeffs(p, 0, 400), x)
        assert 0 <= tail
        assert abs(longer - v) <= tail


def test_eval_series_is_deterministic():
    s = frobenius_coeffs(MathieuParams(2.5, -1.0), 0.5, 60)
    vals = {eval_series(s, 0.7) for _ in range(5)}
    assert len(vals) == 1


def test_eta_of():
    assert eta_of(MathieuParams(2, 0), EvalPoint(0.5)) == 0.125
    assert eta_of(MathieuParams(0, 3), EvalPoint(0.9)) == 0.0
    assert eta_of(MathieuParams(4, 0), EvalPoint(1 - 1e-12)) == pytest.approx(1.0, abs=1e-11)


def test_types_validate():
    with pytest.raises(ValueError):
        IndicialRoot(0.25)
    with pytest.raises(ValueError):
        MathieuParams(math.inf, 0)
    with pytest.raises(ValueError):
        PowerSeries(0, [2.0, 1.0])
    with pytest.raises(ValueError):
        Truncation(-1, 5)
    with pytest.raises(ValueError):
        Truncation(3, 0)
    with pytest.raises(ValueError):
        EvalPoint(0.5, z=0.1)
    pt = EvalPoint.from_angle(1.0)
    assert pt.x == pytest.approx(math.cos(1.0) ** 2)
