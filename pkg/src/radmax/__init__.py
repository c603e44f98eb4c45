"""Numerical laboratory for spherical maximal operators on radial functions."""
from .dyadic import (CoverCount, DilationSet, binary_entropy, block, critical_exponent, entropy_number,
                     generate_set, kappa_estimate, local_width, neighborhood_measure, shell_measure)
from .lorentz import LorentzParams, SimpleFunction, distribution_function, lorentz_norm, rearrangement
from .parsing import parse_profile, parse_set
from .profiles import Piece, RadialProfile
from .quadrature import BACKEND, QuadratureError, QuadratureSpec
from .reports import ConditionReport
from .spherical import kernel_value, maximal_function, spherical_mean

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConditionReport", "CoverCount", "DilationSet", "LorentzParams", "Piece", "QuadratureError",
    "QuadratureSpec", "RadialProfile", "SimpleFunction", "binary_entropy", "block", "critical_exponent",
    "distribution_function", "entropy_number", "generate_set", "kappa_estimate", "kernel_value",
    "local_width", "lorentz_norm", "maximal_function", "neighborhood_measure", "parse_profile",
    "parse_set", "rearrangement", "shell_measure", "spherical_mean",
]
