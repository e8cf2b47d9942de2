"""Generalized Cesàro means of type (b-1; c): coefficients, positivity of
trigonometric sums, critical exponents and sampled subordination checks."""

__version__ = "0.1.0"

from .sequences import CoefficientTable, Params, ParameterError, coeff_table, pochhammer  # noqa: E402
from .series import PowerSeries, TriangularScheme, cesaro_mean  # noqa: E402
from .verdicts import Status, Verdict  # noqa: E402

__all__ = [
    "CoefficientTable", "Params", "ParameterError", "PowerSeries", "Status", "TriangularScheme",
    "Verdict", "cesaro_mean", "coeff_table", "pochhammer",
]
