"""Spherical-harmonic bookkeeping and the radial mode ODEs.

Expanding a solution of the linearized equation in spherical harmonics
turns it into one singular ODE per mode k:

    L_k(psi) = psi'' + (1 + n(n-2)/((n-1)(1+rho))) * psi'/r
               - (lambda_k/(n-1)) * psi/r**2
               + (n**3/(n-1)**2) * rho/(1+rho)**2 * psi/r**2 = 0

with rho = r**(n/(n-1)) and lambda_k = k(k+n-2).  The same equation has a
divergence form with weight r**(n-1)*|u'|**(n-2); the two differ exactly
by that weight, which this module exposes and tests rather than assumes.

Modes 0 and 1 have explicit bounded solutions psi0 and psi1 (the radial
parts of the scaling and translation kernel elements).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _radial as rad

__all__ = [
    "ModeSpec",
    "OdeCoefficients",
    "eigenvalue",
    "multiplicity",
    "indicial_exponents",
    "mode_spec",
    "ode_coefficients",
    "psi0",
    "psi1",
    "psi0_derivatives",
    "psi1_derivatives",
    "psi0_root",
    "mode_residual",
    "divergence_residual",
    "divergence_weight",
]


@dataclass(frozen=True)
class ModeSpec:
    """Mode index with its eigenvalue, multiplicity and indicial exponents."""

    k: int
    n: int
    lambda_k: float
    multiplicity: int
    indicial: tuple[float, float]  # (beta_minus, beta_plus)

    @property
    def beta_plus(self) -> float:
        return self.indicial[1]

    @property
    def beta_minus(self) -> float:
        return self.indicial[0]

    @property
    def tail_exponent(self) -> float:
        """Growth rate sqrt(lambda_k/(n-1)) of the unbounded branch at infinity."""
        return math.sqrt(self.lambda_k / (self.n - 1))


def eigenvalue(k: int, n: int) -> float:
    """k-th eigenvalue k(k+n-2) of the sphere Laplacian on S^{n-1}."""
    rad.require_dimension(n)
    if k < 0:
        raise ValueError(f"mode index must be >= 0, got {k}")
    return float(k * (k + n - 2))


def multiplicity(k: int, n: int) -> int:
    """Dimension of the degree-k spherical-harmonic eigenspace."""
    rad.require_dimension(n)
    if k < 0:
        raise ValueError(f"mode index must be >= 0, got {k}")
    if k == 0:
        return 1
    return (2 * k + n - 2) * math.factorial(n + k - 3) // (
        math.factorial(k) * math.factorial(n - 2)
    )


def indicial_exponents(k: int, n: int) -> tuple[float, float]:
    """Roots of beta**2 + beta*n(n-2)/(n-1) - lambda_k/(n-1) = 0."""
    b = n * (n - 2) / (n - 1)
    lam = eigenvalue(k, n) / (n - 1)
    disc = math.sqrt(b * b + 4.0 * lam)
    return (-(b + disc) / 2.0, (-b + disc) / 2.0)


def mode_spec(k: int, n: int) -> ModeSpec:
    return ModeSpec(
        k=int(k),
        n=int(n),
        lambda_k=eigenvalue(k, n),
        multiplicity=multiplicity(k, n),
        indicial=indicial_exponents(k, n),
    )


@dataclass(frozen=True)
class OdeCoefficients:
    """Coefficient functions of the mode ODE.

    ``p(r)`` multiplies psi'/r and tends to (n**2-n-1)/(n-1) at 0 and to 1
    at infinity; ``q_centrifugal`` is the constant -lambda_k/(n-1) on
    psi/r**2; ``q_potential(r)`` is the nonnegative potential factor with
    its maximum at rho = 1.
    """

    k: int
    n: int
    q_centrifugal: float

    def p(self, r):
        n = self.n
        rho = rad.rho_of_r(n, r)
        return 1.0 + n * (n - 2) / ((n - 1) * (1.0 + rho))

    def q_potential(self, r):
        n = self.n
        rho = rad.rho_of_r(n, r)
        return n**3 / (n - 1) ** 2 * rho / (1.0 + rho) ** 2


def ode_coefficients(k: int, n: int) -> OdeCoefficients:
    return OdeCoefficients(k=int(k), n=int(n), q_centrifugal=-eigenvalue(k, n) / (n - 1))


def psi0(n: int, r):
    """Bounded mode-0 solution ((n-1) - rho)/(1 + rho)."""
    rad.require_dimension(n)
    return rad.psi0(n, r)


def psi1(n: int, r):
    """Bounded (decaying) mode-1 solution r**(1/(n-1))/(1 + rho)."""
    rad.require_dimension(n)
    return rad.psi1(n, r)


def psi0_derivatives(n: int, r):
    """(psi0, psi0', psi0'') by closed form."""
    rad.require_dimension(n)
    return rad.psi0(n, r), rad.psi0_d1(n, r), rad.psi0_d2(n, r)


def psi1_derivatives(n: int, r):
    """(psi1, psi1', psi1'') by closed form."""
    rad.require_dimension(n)
    return rad.psi1(n, r), rad.psi1_d1(n, r), rad.psi1_d2(n, r)


def psi0_root(n: int) -> float:
    """The single zero (n-1)**((n-1)/n) of psi0 on (0, infinity)."""
    rad.require_dimension(n)
    return float((n - 1) ** ((n - 1) / n))


def mode_residual(k: int, n: int, r, psi, dpsi, d2psi):
    """L_k applied to the sample (psi, psi', psi'') at radius r."""
    coeff = ode_coefficients(k, n)
    r = np.asarray(r, dtype=float)
    return (
        np.asarray(d2psi, dtype=float)
        + coeff.p(r) * np.asarray(dpsi, dtype=float) / r
        + (coeff.q_centrifugal + coeff.q_potential(r)) * np.asarray(psi, dtype=float) / r**2
    )


def divergence_weight(n: int, r):
    """Proportionality factor r**(n-1)*|u'|**(n-2) between the two forms."""
    rad.require_dimension(n)
    return rad.div_weight(n, r)


def divergence_residual(k: int, n: int, r, psi, dpsi, d2psi):
    """Expanded divergence form of the mode equation.

    Computed term by term from analytic derivatives of the weight
    r**(n-1)*|u'|**(n-2); equals divergence_weight * mode_residual
    pointwise, which the tests verify independently.
    """
    rad.require_dimension(n)
    r = np.asarray(r, dtype=float)
    lam = eigenvalue(k, n)
    psi = np.asarray(psi, dtype=float)
    dpsi = np.asarray(dpsi, dtype=float)
    d2psi = np.asarray(d2psi, dtype=float)
    w = rad.div_weight(n, r)
    dw = rad.div_weight_d1(n, r)
    return (
        w * d2psi
        + dw * dpsi
        - lam / (n - 1) * r ** (n - 3) * rad.grad_pow(n, r, n - 2) * psi
        + rad.exp_u(n, r) / (n - 1) * r ** (n - 1) * psi
    )
