"""Numerical wave front set and microlocal Sobolev regularity detection.

The scaled wave packet transform W_{phi_lambda} u(x, lambda xi) with
phi_lambda(x) = lambda^(n/4) phi(lambda^(1/2) x) is evaluated on phase-space
lattices; its decay in lambda classifies (x, xi) as regular or singular and
its energy growth gives the critical Sobolev exponent.
"""

__version__ = "0.1.0"

from .detect import (DecayFit, OracleVerdict, SobolevEstimate, Thresholds, classify,
                     conic_fourier_oracle, decay_statistic, equivalence_check_conic_vs_scaled,
                     estimate_sobolev, hs_inner_integral, window_independence_suite)
from .distributions import (Grid, GroundTruth, SampledSignal, TestDistribution, fourier_analytic,
                            ground_truth, parse_distribution, sample)
from .engine import (LambdaSchedule, PhaseRegion, WptVolume, scaled_volume, wpt_quadrature,
                     wpt_sampled)
from .errors import WavefrontError
from .windows import (ScaledWindow, Window, make_annulus, make_bump, make_gaussian, make_hermite,
                      moment, parse_window, scale)

__all__ = [
    "DecayFit", "Grid", "GroundTruth", "LambdaSchedule", "OracleVerdict", "PhaseRegion",
    "SampledSignal", "ScaledWindow", "SobolevEstimate", "TestDistribution", "Thresholds",
    "WavefrontError", "Window", "WptVolume", "classify", "conic_fourier_oracle",
    "decay_statistic", "equivalence_check_conic_vs_scaled", "estimate_sobolev",
    "fourier_analytic", "ground_truth", "hs_inner_integral", "make_annulus", "make_bump",
    "make_gaussian", "make_hermite", "moment", "parse_distribution", "parse_window", "sample",
    "scale", "scaled_volume", "window_independence_suite", "wpt_quadrature", "wpt_sampled",
]
