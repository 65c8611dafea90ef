"""Mathieu functions of the first and second kind from nested three-term-recurrence series.

The solutions about x = cos^2 z = 0 are built three ways: the plain Frobenius
recurrence, the closed-form nested sums (3TRF layers) and their integral
representation with a Bessel kernel.  The ``verify`` module cross-checks them.
"""

from .bessel import bessel_i_integral, bessel_i_series, bessel_product_form
from .core import (
    FIRST_KIND,
    SECOND_KIND,
    EvalPoint,
    EvalReport,
    IndicialRoot,
    MathieuDomainError,
    MathieuOverflowError,
    MathieuParams,
    PowerSeries,
    Truncation,
    eval_series,
    frobenius_coeffs,
)
from .quadrature import (
    QuadratureGrid,
    integral_sub_y,
    mathieu_first_kind_integral,
    mathieu_integral,
    mathieu_second_kind_integral,
)
from .series3trf import (
    collect_coefficients_3trf,
    mathieu_first_kind,
    mathieu_second_kind,
    mathieu_series,
    sub_series_y,
)
from .verify import equivalence_report, run_verification

__version__ = "0.1.0"

__all__ = [
    "FIRST_KIND",
    "SECOND_KIND",
    "EvalPoint",
    "EvalReport",
    "IndicialRoot",
    "MathieuDomainError",
    "MathieuOverflowError",
    "MathieuParams",
    "PowerSeries",
    "QuadratureGrid",
    "Truncation",
    "bessel_i_integral",
    "bessel_i_series",
    "bessel_product_form",
    "collect_coefficients_3trf",
    "equivalence_report",
    "eval_series",
    "frobenius_coeffs",
    "integral_sub_y",
    "mathieu_first_kind",
    "mathieu_first_kind_integral",
    "mathieu_integral",
    "mathieu_second_kind",
    "mathieu_second_kind_integral",
    "mathieu_series",
    "run_verification",
    "sub_series_y",
]
