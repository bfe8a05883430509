"""Exact radial closed forms shared by the public modules.

Everything here is an explicit formula in ``r``; no numerical
differentiation happens in this module.  Shorthand used throughout:

    gamma = n/(n-1)        so rho = r**gamma
    s     = 1/(n-1)        = gamma - 1
    kgrad = n**2/(n-1)     gradient magnitude scale of the radial profile

The two scalar profiles

    psi0(r) = ((n-1) - rho) / (1 + rho)
    psi1(r) = r**s / (1 + rho)

carry all derivative information of the profile ``u``:  u' = -kgrad*psi1,
u'' = -kgrad*psi1', u''' = -kgrad*psi1''.

All functions broadcast over array input and follow its floating dtype
(float64 or longdouble); the linearized-operator checks exploit the
extended-precision path, where the rational constants are formed in the
working dtype so that exponents like n/(n-1) cost no accuracy.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "require_dimension",
    "gamma_exp",
    "grad_scale",
    "rho_of_r",
    "c_constant",
    "u_profile",
    "u_d1",
    "u_d2",
    "u_d3",
    "exp_u",
    "psi0",
    "psi0_d1",
    "psi0_d2",
    "psi1",
    "psi1_d1",
    "psi1_d2",
    "grad_pow",
    "grad_pow_d1",
    "div_weight",
    "div_weight_d1",
]


def require_dimension(n: int) -> int:
    """Validate the ambient dimension (an integer >= 2) and return it."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"dimension must be an integer, got {n!r}")
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    return int(n)


def _floating(r) -> np.ndarray:
    r = np.asarray(r)
    if r.dtype.kind != "f":
        r = r.astype(np.float64)
    return r


def gamma_exp(n: int) -> float:
    return n / (n - 1)


def grad_scale(n: int) -> float:
    return n * n / (n - 1)


def c_constant(n: int) -> float:
    return n * (n * n / (n - 1)) ** (n - 1)


def rho_of_r(n: int, r):
    r = _floating(r)
    dt = r.dtype.type
    return r ** (dt(n) / dt(n - 1))


def u_profile(n: int, r):
    """log of the radial profile: log C_n - n*log(1 + rho)."""
    r = _floating(r)
    dt = r.dtype.type
    logc = np.log(dt(n) * (dt(n) * dt(n) / dt(n - 1)) ** (n - 1))
    return logc - n * np.log1p(rho_of_r(n, r))


def exp_u(n: int, r):
    r = _floating(r)
    dt = r.dtype.type
    c = dt(n) * (dt(n) * dt(n) / dt(n - 1)) ** (n - 1)
    return c / (1.0 + rho_of_r(n, r)) ** n


def psi0(n: int, r):
    rho = rho_of_r(n, r)
    return ((n - 1) - rho) / (1.0 + rho)


def psi0_d1(n: int, r):
    r = _floating(r)
    dt = r.dtype.type
    g = dt(n) / dt(n - 1)
    rho = r**g
    return -n * g * r ** (g - 1) / (1.0 + rho) ** 2


def psi0_d2(n: int, r):
    r = _floating(r)
    dt = r.dtype.type
    g = dt(n) / dt(n - 1)
    rho = r**g
    return -n * g * r ** (g - 2) * ((g - 1) - (g + 1) * rho) / (1.0 + rho) ** 3


def psi1(n: int, r):
    r = _floating(r)
    dt = r.dtype.type
    g = dt(n) / dt(n - 1)
    s = dt(1) / dt(n - 1)
    rho = r**g
    return r**s / (1.0 + rho)


def psi1_d1(n: int, r):
    r = _floating(r)
    dt = r.dtype.type
    g = dt(n) / dt(n - 1)
    s = dt(1) / dt(n - 1)
    rho = r**g
    return r ** (s - 1) * (s - rho) / (1.0 + rho) ** 2


def psi1_d2(n: int, r):
    # numerator expanded in powers of rho to avoid cancellation near 0
    r = _floating(r)
    dt = r.dtype.type
    g = dt(n) / dt(n - 1)
    s = g - dt(1)
    rho = r**g
    num = s * (s - 1.0) + ((s - 1.0) ** 2 - g * (1.0 + 2.0 * s)) * rho + 2.0 * rho**2
    return r ** (s - 2) * num / (1.0 + rho) ** 3


def u_d1(n: int, r):
    r = _floating(r)
    dt = r.dtype.type
    return -(dt(n) * dt(n) / dt(n - 1)) * psi1(n, r)


def u_d2(n: int, r):
    r = _floating(r)
    dt = r.dtype.type
    return -(dt(n) * dt(n) / dt(n - 1)) * psi1_d1(n, r)


def u_d3(n: int, r):
    r = _floating(r)
    dt = r.dtype.type
    return -(dt(n) * dt(n) / dt(n - 1)) * psi1_d2(n, r)


def grad_pow(n: int, r, k: int):
    """k-th power of the profile gradient magnitude.

    Equals (kgrad)**k * r**(k/(n-1)) / (1+rho)**k.  Negative k is singular
    at r = 0; the caller guards that case.
    """
    r = _floating(r)
    dt = r.dtype.type
    g = dt(n) / dt(n - 1)
    s = dt(1) / dt(n - 1)
    rho = r**g
    return (dt(n) * dt(n) / dt(n - 1)) ** k * r ** (k * s) / (1.0 + rho) ** k


def grad_pow_d1(n: int, r, k: int):
    """Radial derivative of grad_pow(n, r, k)."""
    r = _floating(r)
    dt = r.dtype.type
    g = dt(n) / dt(n - 1)
    s = dt(1) / dt(n - 1)
    rho = r**g
    return (
        (dt(n) * dt(n) / dt(n - 1)) ** k
        * (dt(k) / dt(n - 1))
        * r ** (k * s - 1)
        * (1.0 + (1 - n) * rho)
        / (1.0 + rho) ** (k + 1)
    )


def div_weight(n: int, r):
    """Divergence-form weight r**(n-1) * |u'|**(n-2)."""
    r = _floating(r)
    return r ** (n - 1) * grad_pow(n, r, n - 2)


def div_weight_d1(n: int, r):
    """Radial derivative of div_weight, by the product rule."""
    r = _floating(r)
    return (n - 1) * r ** (n - 2) * grad_pow(n, r, n - 2) + r ** (n - 1) * grad_pow_d1(
        n, r, n - 2
    )
