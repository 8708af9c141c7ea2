"""Expected signature of Brownian motion stopped at the unit circle.

Exact rational PDE hierarchy for the signature levels, a hyperbolic
3x3 development of the series, a self-contained ball-arithmetic
evaluation of its Bessel-type closed form, and a certified bracket for
the first pole of the development, proving the series has finite
radius of convergence.
"""

__version__ = "0.1.0"

from .balls import ComplexBall, RealBall
from .bessel import abc_closed_form, bessel_j, d_lambda, make_constants
from .development import fold_apply, partial_sum_F
from .hierarchy import HierarchyState, a_coefficients, radius_estimate
from .montecarlo import SimConfig, estimate_expected_sig
from .polefinder import PoleCertificate, locate_pole, verify_sign_change

__all__ = [
    "ComplexBall",
    "RealBall",
    "abc_closed_form",
    "bessel_j",
    "d_lambda",
    "make_constants",
    "fold_apply",
    "partial_sum_F",
    "HierarchyState",
    "a_coefficients",
    "radius_estimate",
    "SimConfig",
    "estimate_expected_sig",
    "PoleCertificate",
    "locate_pole",
    "verify_sign_change",
    "__version__",
]
