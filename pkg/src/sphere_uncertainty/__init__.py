"""Uncertainty products on the n-sphere from hyperspherical-harmonic coefficients.

The series machinery in :mod:`.uncertainty` works directly on Fourier
coefficients; :mod:`.quadrature` is the brute-force oracle it is tested
against; :mod:`.poisson_directional` carries the directional Poisson
wavelet case study and its small-scale asymptotics.
"""
from .poisson_directional import (
    ConvergenceError,
    g_coefficients,
    ratio_curve,
    u_limit,
    uncertainty_G,
)
from .sphere_core import MultiIndex, enumerate_indices, eval_harmonic
from .uncertainty import (
    FormatError,
    FourierExpansion,
    UncertaintyReport,
    ZeroGravityCenterError,
    ZeroNormError,
    gravity_center,
    load_expansion,
    momentum_variance,
    uncertainty_report,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "FormatError",
    "FourierExpansion",
    "MultiIndex",
    "UncertaintyReport",
    "ZeroGravityCenterError",
    "ZeroNormError",
    "enumerate_indices",
    "eval_harmonic",
    "g_coefficients",
    "gravity_center",
    "load_expansion",
    "momentum_variance",
    "ratio_curve",
    "u_limit",
    "uncertainty_G",
    "uncertainty_report",
]
