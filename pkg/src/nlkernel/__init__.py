"""Numerical certification that the bounded kernel of the linearized
n-Laplace Liouville operator is spanned by the scaling and translation
derivatives of the explicit entire solution.

Submodules
----------
bubble          closed forms of the entire solution and its mass
linop           pointwise linearized operator and its regular form
modes           spherical-harmonic modes and their radial ODEs
ode_engine      singular-ODE integration, second solutions, tail fits
verifier        per-mode evidence assembled into a kernel-dimension report
cli             the ``nlk`` command-line front end
"""

from . import bubble, linop, modes, ode_engine, quadrature, testfunctions, verifier
from .errors import (
    QuadratureConvergenceError,
    SingularInputError,
    StepSizeUnderflowError,
)

__version__ = "0.1.0"

__all__ = [
    "bubble",
    "linop",
    "modes",
    "ode_engine",
    "quadrature",
    "testfunctions",
    "verifier",
    "QuadratureConvergenceError",
    "SingularInputError",
    "StepSizeUnderflowError",
    "__version__",
]
