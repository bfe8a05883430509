"""Pointwise application of the linearized operator around the entire solution.

For the quasilinear map  M(g) = div(|grad g|**(n-2) grad g) + e^g  the
linearization at the explicit solution u is

    L(phi) = div(|grad u|**(n-2) grad phi)
           + (n-2) div(|grad u|**(n-4) (grad u . grad phi) grad u)
           + e^u phi.

Expanding the divergences splits L into seven terms A..G, each an explicit
closed form in |x| contracted with phi's value, gradient and Hessian.  An
equivalent regular form (``eq31_lhs``) multiplies L by a positive radial
weight and is manifestly finite at the origin:

    |x|^2 lap(phi) + n(n-2) (x.grad phi)/(1+rho)
    + (n-2) sum_ij phi_ij x_i x_j + (n^3/(n-1)) rho/(1+rho)^2 phi.

``weight`` is the exact proportionality factor between the two, and
``directional_derivative_check`` compares L against a central difference
of the nonlinear map, evaluated through analytic derivatives only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _radial as rad
from .errors import SingularInputError
from .testfunctions import TestFunction, bubble_field

__all__ = [
    "TermTag",
    "term",
    "apply_linearized",
    "eq31_lhs",
    "weight",
    "nonlinear_operator",
    "directional_derivative_check",
]


class TermTag(enum.Enum):
    """The seven summands of the expanded linearized operator."""

    A = "A"  # |grad u|^(n-2) lap(phi)
    B = "B"  # grad(|grad u|^(n-2)) . grad phi
    C = "C"  # (n-2) |grad u|^(n-4) (grad u . grad phi) lap_u
    D = "D"  # (n-2) (grad u . grad phi) grad(|grad u|^(n-4)) . grad u
    E = "E"  # (n-2) |grad u|^(n-4) grad(|grad u|^2/2) . grad phi
    F = "F"  # (n-2) |grad u|^(n-4) Hess(phi)(grad u, grad u)
    G = "G"  # e^u phi


_LD = np.longdouble


@dataclass(frozen=True)
class _PointData:
    """Field contractions at one point, held in extended precision."""

    r: np.longdouble
    rho: np.longdouble
    val: np.longdouble
    xdotg: np.longdouble
    lap: np.longdouble
    xhx: np.longdouble


def _point_data(n: int, f: TestFunction, x) -> _PointData:
    # the seven term values can reach ~1e7 while their sum vanishes, so
    # point data and term products are carried in longdouble
    x = np.asarray(x, dtype=_LD)
    r = np.sqrt(x @ x)
    if r == 0.0:
        raise SingularInputError(
            "term formulas carry negative powers of |x|; evaluate eq31_lhs at the origin"
        )
    h = np.asarray(f.hessian(x), dtype=_LD)
    g = np.asarray(f.gradient(x), dtype=_LD)
    return _PointData(
        r=r,
        rho=r ** (_LD(n) / _LD(n - 1)),
        val=_LD(f.value(x)),
        xdotg=x @ g,
        lap=np.trace(h),
        xhx=x @ h @ x,
    )


def _term_value(n: int, tag: TermTag, d: _PointData) -> np.longdouble:
    kg = _LD(n) * _LD(n) / _LD(n - 1)
    pref = kg ** (n - 2)
    s = _LD(1) / _LD(n - 1)
    one = 1.0 + d.rho
    bracket = 1.0 + (1 - n) * d.rho
    if tag is TermTag.A:
        return pref * d.r ** ((n - 2) * s) / one ** (n - 2) * d.lap
    if tag is TermTag.G:
        return _LD(n) * kg ** (n - 1) / one**n * d.val
    if tag is TermTag.F:
        if n == 2:
            return _LD(0.0)
        return (n - 2) * pref * d.r ** (-n * s) / one ** (n - 2) * d.xhx
    # remaining tags all multiply (x . grad phi)
    if tag is TermTag.B:
        coeff = _LD(n - 2) / _LD(n - 1)
        extra = bracket
    elif tag is TermTag.C:
        coeff = _LD(n - 2)
        extra = (_LD(n - 1) + _LD(1) / _LD(n - 1)) + (n - 2) * d.rho
    elif tag is TermTag.D:
        coeff = _LD(n - 2) * _LD(n - 4) / _LD(n - 1)
        extra = bracket
    elif tag is TermTag.E:
        coeff = _LD(n - 2) / _LD(n - 1)
        extra = bracket
    else:  # pragma: no cover
        raise ValueError(f"unknown term tag {tag!r}")
    if coeff == 0:
        return _LD(0.0)
    return coeff * pref * d.r ** (-n * s) / one ** (n - 1) * extra * d.xdotg


def term(n: int, f: TestFunction, x, tag: TermTag) -> float:
    """One named summand of the expanded operator at x (|x| > 0).

    Terms whose scalar prefactor vanishes (all of B..F when n = 2, D when
    n = 4) return exactly 0 without touching the singular radial powers.
    """
    rad.require_dimension(n)
    return float(_term_value(n, tag, _point_data(n, f, x)))


def apply_linearized(n: int, f: TestFunction, x) -> float:
    """L(f) at x as the sum of the seven expanded terms (|x| > 0)."""
    rad.require_dimension(n)
    d = _point_data(n, f, x)
    return float(sum(_term_value(n, tag, d) for tag in TermTag))


def eq31_lhs(n: int, f: TestFunction, x) -> float:
    """Regularized form of the linearized equation; finite everywhere.

    Every summand carries |x|**2 or an x-contraction, so the origin value
    is 0 without any limit-taking.
    """
    rad.require_dimension(n)
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0.0:
        return 0.0
    h = f.hessian(x)
    g = f.gradient(x)
    rho = r ** rad.gamma_exp(n)
    return (
        r * r * float(np.trace(h))
        + n * (n - 2) * float(np.dot(x, g)) / (1.0 + rho)
        + (n - 2) * float(x @ h @ x)
        + n**3 / (n - 1) * rho / (1.0 + rho) ** 2 * float(f.value(x))
    )


def weight(n: int, r: float) -> float:
    """Positive factor with  apply_linearized = weight * eq31_lhs  pointwise."""
    rad.require_dimension(n)
    if not r > 0:
        raise ValueError("weight requires r > 0")
    rho = r ** rad.gamma_exp(n)
    return (
        rad.grad_scale(n) ** (n - 2)
        * r ** ((n - 2) / (n - 1) - 2.0)
        * (1.0 + rho) ** -(n - 2)
    )


def nonlinear_operator(n: int, x, f: TestFunction | None = None, t: float = 0.0) -> float:
    """The quasilinear map  div(|grad g|^(n-2) grad g) + e^g  at x.

    ``g = u + t*f`` where u is the entire-solution profile; ``f=None``
    evaluates the map on u itself (which is an exact zero of it).  The
    n-Laplacian is expanded pointwise as

        |grad g|^(n-2) lap(g) + (n-2) |grad g|^(n-4) Hess(g)(grad g, grad g)

    which for n >= 3 is undefined where grad g vanishes; such points raise
    SingularInputError.
    """
    rad.require_dimension(n)
    x = np.asarray(x, dtype=float)
    if float(np.linalg.norm(x)) == 0.0:
        raise SingularInputError("nonlinear operator is evaluated for |x| > 0 only")
    u = bubble_field(n)
    val = u.value(x)
    grad = u.gradient(x)
    hess = u.hessian(x)
    if f is not None and t != 0.0:
        val = val + t * f.value(x)
        grad = grad + t * f.gradient(x)
        hess = hess + t * f.hessian(x)
    gnorm = float(np.linalg.norm(grad))
    lap = float(np.trace(hess))
    if n == 2:
        return lap + math.exp(val)
    if gnorm == 0.0:
        raise SingularInputError(
            "pointwise n-Laplacian formula is undefined at a critical point of g"
        )
    quad = float(grad @ hess @ grad)
    return (
        gnorm ** (n - 2) * lap
        + (n - 2) * gnorm ** (n - 4) * quad
        + math.exp(val)
    )


def directional_derivative_check(n: int, f: TestFunction, x, t_step: float) -> float:
    """|central difference of the nonlinear map - apply_linearized| at x.

    The central difference (M(u + t f) - M(u - t f)) / (2 t) converges to
    L(f) at second order in ``t_step``; the returned deviation is
    O(t_step**2) plus rounding.
    """
    rad.require_dimension(n)
    if not t_step > 0:
        raise ValueError("t_step must be positive")
    plus = nonlinear_operator(n, x, f, +t_step)
    minus = nonlinear_operator(n, x, f, -t_step)
    return abs((plus - minus) / (2.0 * t_step) - apply_linearized(n, f, x))
