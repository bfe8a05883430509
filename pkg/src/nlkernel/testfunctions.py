"""Smooth fields with closed-form value, gradient and Hessian.

The linearized-operator checks need test inputs whose derivatives are
exact, not differenced.  Four families cover everything used downstream:

* ``PolyGaussian``    polynomial times an optional Gaussian envelope
* ``RadialField``     phi(x) = u(|x|) for a radial profile with two
                      closed-form derivatives
* ``TranslationField``the i-th partial of the entire-solution profile
* ``HarmonicProduct`` phi(x) = g(|x|) * Q(x) with Q a (harmonic)
                      polynomial, used for mode-reduction checks

plus constructors for the kernel elements and the profile itself, and a
seeded generator of random polynomial-Gaussian bumps for property tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _radial as rad
from .errors import SingularInputError

__all__ = [
    "TestFunction",
    "PolyGaussian",
    "RadialField",
    "TranslationField",
    "HarmonicProduct",
    "bubble_field",
    "scaling_field",
    "translation_field",
    "random_bumps",
    "sample_cloud",
]


def _floating_point(x) -> np.ndarray:
    x = np.asarray(x)
    if x.dtype.kind != "f":
        x = x.astype(np.float64)
    return x


def _norm(x: np.ndarray):
    return np.sqrt(x @ x)


class TestFunction:
    """Interface: value(x), gradient(x), hessian(x) at a point x in R^n.

    Implementations follow the floating dtype of ``x`` (float64 or
    longdouble); the operator checks pass longdouble points to keep
    cancellation noise below the certified thresholds.
    """

    n: int

    def value(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def gradient(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def hessian(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x: np.ndarray) -> float:
        return self.value(x)


class PolyGaussian(TestFunction):
    """p(x) * exp(-|x|^2 / sigma^2) with p given by {multi-index: coeff}.

    ``sigma=None`` drops the envelope (plain polynomial).  Multi-indices
    are tuples of length n of nonnegative integers.
    """

    def __init__(self, n: int, coeffs: dict[tuple[int, ...], float], sigma: float | None = None):
        self.n = rad.require_dimension(n)
        for alpha in coeffs:
            if len(alpha) != n or any(a < 0 for a in alpha):
                raise ValueError(f"bad multi-index {alpha} for dimension {n}")
        self.coeffs = {tuple(int(a) for a in alpha): float(c) for alpha, c in coeffs.items()}
        self.sigma = None if sigma is None else float(sigma)

    @staticmethod
    def _mono(x, alpha):
        out = 1.0
        for xi, ai in zip(x, alpha):
            if ai:
                out *= xi**ai
        return out

    def _poly(self, x):
        return sum(c * self._mono(x, a) for a, c in self.coeffs.items())

    def _poly_grad(self, x):
        g = np.zeros(self.n, dtype=x.dtype)
        for alpha, c in self.coeffs.items():
            for i, ai in enumerate(alpha):
                if ai == 0:
                    continue
                shifted = list(alpha)
                shifted[i] -= 1
                g[i] += c * ai * self._mono(x, shifted)
        return g

    def _poly_hess(self, x):
        h = np.zeros((self.n, self.n), dtype=x.dtype)
        for alpha, c in self.coeffs.items():
            for i, ai in enumerate(alpha):
                if ai == 0:
                    continue
                for j, aj in enumerate(alpha):
                    power = list(alpha)
                    power[i] -= 1
                    factor = ai
                    if i == j:
                        if power[j] == 0:
                            continue
                        factor *= power[j]
                    else:
                        if aj == 0:
                            continue
                        factor *= aj
                    power[j] -= 1
                    h[i, j] += c * factor * self._mono(x, power)
        return h

    def _envelope(self, x):
        if self.sigma is None:
            return 1.0
        return np.exp(-np.dot(x, x) / self.sigma**2)

    def value(self, x):
        x = _floating_point(x)
        return self._poly(x) * self._envelope(x)

    def gradient(self, x):
        x = _floating_point(x)
        g = self._poly_grad(x)
        if self.sigma is None:
            return g
        env = self._envelope(x)
        return env * (g - (2.0 / self.sigma**2) * self._poly(x) * x)

    def hessian(self, x):
        x = _floating_point(x)
        h = self._poly_hess(x)
        if self.sigma is None:
            return h
        env = self._envelope(x)
        p = self._poly(x)
        g = self._poly_grad(x)
        c = 2.0 / self.sigma**2
        out = h - c * (np.outer(g, x) + np.outer(x, g))
        out += p * (c * c * np.outer(x, x) - c * np.eye(self.n, dtype=x.dtype))
        return env * out


class RadialField(TestFunction):
    """phi(x) = u(|x|) from closed-form u, u', u''.

    The Hessian formula uses u'/r and is only evaluated for |x| > 0;
    kernel-element profiles here are merely C^1 at the origin.
    """

    def __init__(self, n: int, u: Callable, u1: Callable, u2: Callable):
        self.n = rad.require_dimension(n)
        self.u, self.u1, self.u2 = u, u1, u2

    def value(self, x):
        x = _floating_point(x)
        return self.u(_norm(x))

    def gradient(self, x):
        x = _floating_point(x)
        r = _norm(x)
        if r == 0.0:
            return np.zeros(self.n, dtype=x.dtype)
        return self.u1(r) * x / r

    def hessian(self, x):
        x = _floating_point(x)
        r = _norm(x)
        if r == 0.0:
            raise SingularInputError("radial Hessian is evaluated for |x| > 0 only")
        proj = np.outer(x, x) / (r * r)
        return self.u2(r) * proj + self.u1(r) / r * (np.eye(self.n, dtype=x.dtype) - proj)


class TranslationField(TestFunction):
    """The i-th partial derivative of the entire-solution profile (1-based i).

    Written as w(|x|) * x_i with w = u'/r; w, w', w'' come from the three
    closed-form derivatives of the profile.
    """

    def __init__(self, n: int, i: int):
        self.n = rad.require_dimension(n)
        if not 1 <= i <= n:
            raise ValueError(f"axis index must satisfy 1 <= i <= {n}, got {i}")
        self.i = i

    def _w(self, r):
        u1 = rad.u_d1(self.n, r)
        u2 = rad.u_d2(self.n, r)
        u3 = rad.u_d3(self.n, r)
        w = u1 / r
        w1 = (u2 * r - u1) / r**2
        w2 = (u3 * r**2 - 2.0 * u2 * r + 2.0 * u1) / r**3
        return w, w1, w2

    def value(self, x):
        x = _floating_point(x)
        r = _norm(x)
        if r == 0.0:
            return 0.0
        w, _, _ = self._w(r)
        return w * x[self.i - 1]

    def gradient(self, x):
        x = _floating_point(x)
        r = _norm(x)
        if r == 0.0:
            raise SingularInputError("gradient of a translation field needs |x| > 0")
        w, w1, _ = self._w(r)
        g = (w1 / r) * x[self.i - 1] * x
        g[self.i - 1] += w
        return g

    def hessian(self, x):
        x = _floating_point(x)
        r = _norm(x)
        if r == 0.0:
            raise SingularInputError("Hessian of a translation field needs |x| > 0")
        w, w1, w2 = self._w(r)
        xi = x[self.i - 1]
        h = (w2 / r**2 - w1 / r**3) * xi * np.outer(x, x)
        h += (w1 / r) * xi * np.eye(self.n, dtype=x.dtype)
        ei = np.zeros(self.n, dtype=x.dtype)
        ei[self.i - 1] = 1.0
        h += (w1 / r) * (np.outer(ei, x) + np.outer(x, ei))
        return h


class HarmonicProduct(TestFunction):
    """phi(x) = g(|x|) * Q(x) with radial g (two derivatives) and polynomial Q."""

    def __init__(self, n: int, g: Callable, g1: Callable, g2: Callable, poly: PolyGaussian):
        self.n = rad.require_dimension(n)
        if poly.sigma is not None:
            raise ValueError("angular factor must be a plain polynomial")
        self.g, self.g1, self.g2 = g, g1, g2
        self.poly = poly

    def value(self, x):
        x = _floating_point(x)
        return self.g(_norm(x)) * self.poly.value(x)

    def gradient(self, x):
        x = _floating_point(x)
        r = _norm(x)
        if r == 0.0:
            raise SingularInputError("harmonic-product gradient needs |x| > 0")
        xhat = x / r
        return self.g1(r) * self.poly.value(x) * xhat + self.g(r) * self.poly.gradient(x)

    def hessian(self, x):
        x = _floating_point(x)
        r = _norm(x)
        if r == 0.0:
            raise SingularInputError("harmonic-product Hessian needs |x| > 0")
        xhat = x / r
        proj = np.outer(xhat, xhat)
        q = self.poly.value(x)
        qg = self.poly.gradient(x)
        h = q * (self.g2(r) * proj + self.g1(r) / r * (np.eye(self.n, dtype=x.dtype) - proj))
        h += self.g1(r) * (np.outer(xhat, qg) + np.outer(qg, xhat))
        h += self.g(r) * self.poly.hessian(x)
        return h


def bubble_field(n: int) -> RadialField:
    """The entire-solution profile itself, with exact first two derivatives."""
    return RadialField(
        n,
        lambda r: rad.u_profile(n, r),
        lambda r: rad.u_d1(n, r),
        lambda r: rad.u_d2(n, r),
    )


def scaling_field(n: int) -> RadialField:
    """The scaling kernel element (n/(n-1)) * psi0(|x|) as a field."""
    c = n / (n - 1)
    return RadialField(
        n,
        lambda r: c * rad.psi0(n, r),
        lambda r: c * rad.psi0_d1(n, r),
        lambda r: c * rad.psi0_d2(n, r),
    )


def translation_field(n: int, i: int) -> TranslationField:
    """The i-th translation kernel element as a field (1-based i)."""
    return TranslationField(n, i)


def random_bumps(n: int, count: int, rng: np.random.Generator) -> list[PolyGaussian]:
    """Seeded family for randomized checks.

    Each member is a polynomial of total degree <= 3 (coefficients uniform
    in [-1, 1]) times exp(-|x|^2/sigma^2) with sigma in {1, 3}.
    """
    rad.require_dimension(n)
    alphas = _multi_indices(n, 3)
    out = []
    for _ in range(count):
        picked = rng.choice(len(alphas), size=min(5, len(alphas)), replace=False)
        coeffs = {alphas[j]: float(rng.uniform(-1.0, 1.0)) for j in picked}
        sigma = float(rng.choice([1.0, 3.0]))
        out.append(PolyGaussian(n, coeffs, sigma=sigma))
    return out


def sample_cloud(
    n: int,
    count: int,
    rng: np.random.Generator,
    r_lo: float = 1e-2,
    r_hi: float = 1e2,
) -> np.ndarray:
    """Points with log-uniform radii in [r_lo, r_hi] and uniform directions."""
    rad.require_dimension(n)
    radii = 10.0 ** rng.uniform(np.log10(r_lo), np.log10(r_hi), size=count)
    dirs = rng.normal(size=(count, n))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return radii[:, None] * dirs


def _multi_indices(n: int, max_total: int) -> list[tuple[int, ...]]:
    out = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            out.append(tuple(prefix))
            return
        for a in range(remaining + 1):
            rec(prefix + [a], remaining - a, slots - 1)

    rec([], max_total, n)
    return out
