"""Simulation and verification of fractional tempered stable motion (fTSm).

Submodules
----------
special     gamma, zeta and eta functions
kernel      the Volterra kernel K_{H,alpha}, its L^p constants and inner products
measure     discrete inner measures and the series constants they induce
series      shot-noise series sampler for TS, fTSm, fSm and an fBm approximation
charfn      exponent functions, characteristic functions and codifference
verify      Monte Carlo and closed-form verification reports
cli         command-line front end
"""

from ._backend import BACKEND
from .kernel import KernelParams, Regime, c_norm, kernel_eval, kernel_lp_const, kernel_primitive
from .measure import InnerMeasure, parse_measure, rho1, rho2, series_constants, ts_variance

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "InnerMeasure",
    "KernelParams",
    "Regime",
    "__version__",
    "c_norm",
    "kernel_eval",
    "kernel_lp_const",
    "kernel_primitive",
    "parse_measure",
    "rho1",
    "rho2",
    "series_constants",
    "ts_variance",
]
