"""Numerical machinery for the singular radial mode ODEs.

The mode equation has a regular singular point at r = 0 and an
Euler-type limit at infinity.  Everything here works in t = log r, where
the coefficients are smooth and bounded:

    psi_tt + (p(r) - 1) psi_t + (q_pot(r) + q_centrifugal) psi = 0,

with p, q from :mod:`nlkernel.modes`.  The integrator is an embedded
Cash-Karp 5(4) pair with proportional step control; trajectories are
sampled on a uniform t-grid dense enough for cubic Hermite interpolation
to reproduce the solution between samples.

Launches:

* ``integrate_regular``  starts the solution that is regular at 0 with a
  two-term series r**beta * (1 + c1 * rho) from the indicial exponent.
* ``second_solution``    produces a linearly independent partner for
  modes 0 and 1, either by prescribing data at a finite anchor radius so
  the divergence-form Wronskian equals 1 (default), or by the
  reduction-of-order formula away from the zero of the mode-0 profile.

``growth_exponent`` classifies tail behaviour (power law or logarithmic),
and ``lagrange_identity_residual`` checks the integrated cross-product
identity between two different modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, TextIO

import numpy as np

from . import _radial as rad
from . import modes
from .errors import StepSizeUnderflowError

__all__ = [
    "SolutionTrajectory",
    "GrowthEstimate",
    "integrate_regular",
    "second_solution",
    "growth_exponent",
    "lagrange_identity_residual",
    "lagrange_identity_parts",
    "divergence_wronskian",
    "export_csv",
    "K_MAX",
]

K_MAX = 64  # larger eigenvalues push the fit windows out of safe float range

# Cash-Karp 5(4) tableau
_CK_C = (0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8)
_CK_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
)
_CK_B5 = (37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771)
_CK_B4 = (2825 / 27648, 0.0, 18575 / 48384, 13525 / 55296, 277 / 14336, 1 / 4)


@dataclass(frozen=True)
class SolutionTrajectory:
    """Samples (r, psi, psi') of one mode-ODE solution on an increasing grid."""

    r: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    k: int
    n: int
    launch: str  # regular-at-zero | prescribed-at-R | reduction-of-order
    tol: float
    strictly_positive: bool

    @property
    def t(self) -> np.ndarray:
        return np.log(self.r)

    @property
    def r_range(self) -> tuple[float, float]:
        return float(self.r[0]), float(self.r[-1])

    def psi_at(self, r_query):
        """Cubic Hermite interpolation of psi in log r."""
        return _hermite(np.log(np.asarray(r_query, dtype=float)), self.t, self.psi, self.r * self.dpsi)

    def dpsi_at(self, r_query):
        """Cubic Hermite interpolation of psi'.

        Slopes for the interpolant come from the ODE itself: d(psi')/dt =
        r * psi'' with psi'' eliminated through the mode equation.
        """
        coeff = modes.ode_coefficients(self.k, self.n)
        d2 = -(coeff.p(self.r) * self.dpsi / self.r) - (
            coeff.q_centrifugal + coeff.q_potential(self.r)
        ) * self.psi / self.r**2
        return _hermite(np.log(np.asarray(r_query, dtype=float)), self.t, self.dpsi, self.r * d2)


@dataclass(frozen=True)
class GrowthEstimate:
    """Tail-behaviour fit over a radius window.

    ``exponent`` is the least-squares slope of log|psi| against log r.
    When the tail is classified as logarithmic, ``log_coefficient`` holds
    the slope A of the fit psi ~ A log r + B and ``residual`` refers to
    that fit (relative RMS); otherwise ``residual`` is the RMS of the
    power fit in log units.  ``conclusive`` is False when psi vanishes in
    the window or the fit residual exceeds the declared threshold.
    """

    exponent: float
    log_coefficient: float | None
    fit_window: tuple[float, float]
    residual: float
    model: str  # "power" | "log"
    conclusive: bool


def _mode_rhs(k: int, n: int) -> Callable[[float, float, float], tuple[float, float]]:
    g = rad.gamma_exp(n)
    b = n * (n - 2) / (n - 1)
    lam_tilde = modes.eigenvalue(k, n) / (n - 1)
    e_pot = n**3 / (n - 1) ** 2

    def rhs(t: float, psi: float, v: float) -> tuple[float, float]:
        rho = math.exp(g * t)
        one = 1.0 + rho
        return v, -(b / one) * v + (lam_tilde - e_pot * rho / (one * one)) * psi

    return rhs


def _step(rhs, t, psi, v, h):
    """One Cash-Karp step; returns (psi5, v5, err_psi, err_v)."""
    k_psi = [0.0] * 6
    k_v = [0.0] * 6
    k_psi[0], k_v[0] = rhs(t, psi, v)
    for i in range(1, 6):
        ai = _CK_A[i]
        dp = 0.0
        dv = 0.0
        for j, a in enumerate(ai):
            dp += a * k_psi[j]
            dv += a * k_v[j]
        k_psi[i], k_v[i] = rhs(t + _CK_C[i] * h, psi + h * dp, v + h * dv)
    p5 = v5 = p4 = v4 = 0.0
    for i in range(6):
        p5 += _CK_B5[i] * k_psi[i]
        v5 += _CK_B5[i] * k_v[i]
        p4 += _CK_B4[i] * k_psi[i]
        v4 += _CK_B4[i] * k_v[i]
    return (
        psi + h * p5,
        v + h * v5,
        h * (p5 - p4),
        h * (v5 - v4),
    )


def _drive(rhs, ts, psi0, v0, rtol, atol):
    """Integrate through every node of ``ts`` (monotone, either direction).

    Returns (psi array, v array, sign_ok) where sign_ok records whether
    psi kept the sign of its first nonzero value at every accepted step.
    """
    m = len(ts)
    psis = np.empty(m)
    vs = np.empty(m)
    psis[0], vs[0] = psi0, v0
    t, psi, v = float(ts[0]), float(psi0), float(v0)
    direction = 1.0 if ts[-1] >= ts[0] else -1.0
    span = abs(ts[-1] - ts[0])
    h_ctrl = min(0.1, span / max(1, m - 1)) * direction
    ref_sign = math.copysign(1.0, psi0) if psi0 != 0.0 else 0.0
    sign_ok = True

    for idx in range(1, m):
        target = float(ts[idx])
        while (target - t) * direction > 1e-14 * max(1.0, abs(t)):
            h = h_ctrl
            clipped = abs(h) >= abs(target - t)
            if clipped:
                h = target - t
            p_new, v_new, e_p, e_v = _step(rhs, t, psi, v, h)
            scale_p = atol + rtol * max(abs(psi), abs(p_new))
            scale_v = atol + rtol * max(abs(v), abs(v_new))
            err = math.sqrt(0.5 * ((e_p / scale_p) ** 2 + (e_v / scale_v) ** 2))
            if not math.isfinite(err):
                err = 10.0
            if err <= 1.0:
                t = target if clipped else t + h
                psi, v = p_new, v_new
                if ref_sign == 0.0 and psi != 0.0:
                    ref_sign = math.copysign(1.0, psi)
                if ref_sign != 0.0 and psi * ref_sign <= 0.0:
                    sign_ok = False
                if not clipped:
                    h_ctrl = h * min(5.0, 0.9 * err ** -0.2 if err > 0 else 5.0)
            else:
                h_ctrl = h * max(0.1, 0.9 * err**-0.25)
                if abs(h_ctrl) < 1e-13 * max(1.0, abs(t)):
                    raise StepSizeUnderflowError(
                        f"step size underflow at t = {t:.6g} (r = {math.exp(t):.6g})",
                        last_r=math.exp(t),
                    )
        psis[idx] = psi
        vs[idx] = v
    return psis, vs, sign_ok


def _uniform_nodes(t_lo: float, t_hi: float, points_per_unit: float) -> np.ndarray:
    n_int = max(8, int(math.ceil(abs(t_hi - t_lo) * points_per_unit)))
    return np.linspace(t_lo, t_hi, n_int + 1)


def _density(k: int, n: int, points_per_unit: float | None, include_minus: bool = False) -> float:
    if points_per_unit is not None:
        return float(points_per_unit)
    spec = modes.mode_spec(k, n)
    beta_ref = max(1.0, spec.beta_plus, spec.tail_exponent)
    if include_minus:
        beta_ref = max(beta_ref, abs(spec.beta_minus))
    return max(48.0, 64.0 * beta_ref)


def _check_mode(k: int, n: int) -> modes.ModeSpec:
    rad.require_dimension(n)
    if not 0 <= k <= K_MAX:
        raise ValueError(f"mode index must lie in [0, {K_MAX}], got {k}")
    return modes.mode_spec(k, n)


def integrate_regular(
    k: int,
    n: int,
    r_start: float = 1e-5,
    r_end: float = 1e4,
    tol: float = 1e-10,
    points_per_unit: float | None = None,
) -> SolutionTrajectory:
    """Solution regular at the origin, normalized to r_start**beta_plus there.

    The launch uses the two-term series psi = r**beta * (1 + c1 * rho)
    with c1 fixed by the next order of the equation.  ``tol`` bounds the
    local error per step (relative; absolute floor tol * 1e-2).  For very
    steep modes r_start is raised just enough to keep the launch value in
    normalized float range.
    """
    spec = _check_mode(k, n)
    if not (0.0 < r_start < 1.0 < r_end):
        raise ValueError("need 0 < r_start < 1 < r_end")
    if not tol > 0:
        raise ValueError("tol must be positive")
    beta = spec.beta_plus
    if beta > 0:
        r_floor = 10.0 ** (-260.0 / beta)
        r_start = max(r_start, r_floor)
    g = rad.gamma_exp(n)
    b = n * (n - 2) / (n - 1)
    e_pot = n**3 / (n - 1) ** 2
    c1 = (b * beta - e_pot) / (g * (2.0 * beta + g + b))
    rho0 = r_start**g
    psi0 = r_start**beta * (1.0 + c1 * rho0)
    v0 = r_start**beta * (beta + c1 * (beta + g) * rho0)

    ts = _uniform_nodes(math.log(r_start), math.log(r_end), _density(k, n, points_per_unit))
    psis, vs, sign_ok = _drive(_mode_rhs(k, n), ts, psi0, v0, rtol=tol, atol=tol * 1e-2)
    r = np.exp(ts)
    return SolutionTrajectory(
        r=r,
        psi=psis,
        dpsi=vs / r,
        k=k,
        n=n,
        launch="regular-at-zero",
        tol=tol,
        strictly_positive=sign_ok and psis[0] > 0,
    )


def _wronskian_anchor(k: int, n: int) -> float:
    return modes.psi0_root(n) + 1.0 if k == 0 else 1.0


def _base_profile(k: int, n: int):
    if k == 0:
        return (
            lambda r: rad.psi0(n, r),
            lambda r: rad.psi0_d1(n, r),
        )
    return (
        lambda r: rad.psi1(n, r),
        lambda r: rad.psi1_d1(n, r),
    )


def second_solution(
    k: int,
    n: int,
    method: str = "wronskian_launch",
    r_range: tuple[float, float] | None = None,
    tol: float = 1e-10,
    points_per_unit: float | None = None,
) -> SolutionTrajectory:
    """Linearly independent partner of the bounded mode-k solution (k in {0, 1}).

    Both methods normalize so the divergence-form Wronskian against the
    closed-form base solution equals 1, with the partner vanishing at the
    anchor radius (one past the zero of the mode-0 profile for k = 0,
    r = 1 for k = 1).

    ``wronskian_launch`` integrates the ODE from the anchor with data read
    off that normalization; it is global.  ``reduction`` evaluates the
    quadrature formula for the order-reduction factor and is only valid on
    ranges that avoid a +-10% band around the zero of the base solution;
    ranges that intersect the band raise ValueError.  When the anchor is
    not inside the requested range the reduction factor is anchored at the
    range edge nearer the anchor instead (same solution up to a multiple
    of the base).
    """
    spec = _check_mode(k, n)
    if k not in (0, 1):
        raise ValueError("second_solution is defined for modes 0 and 1 only")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if r_range is None:
        r_range = (_wronskian_anchor(k, n), 1e4)
    r_lo, r_hi = float(r_range[0]), float(r_range[1])
    if not 0.0 < r_lo < r_hi:
        raise ValueError(f"bad range {r_range}")
    base, base_d1 = _base_profile(k, n)
    anchor = _wronskian_anchor(k, n)
    ppu = _density(k, n, points_per_unit, include_minus=True)

    if method == "wronskian_launch":
        return _second_by_launch(spec, base, anchor, r_lo, r_hi, tol, ppu)
    if method == "reduction":
        return _second_by_reduction(spec, base, base_d1, anchor, r_lo, r_hi, ppu)
    raise ValueError(f"unknown method {method!r}")


def _second_by_launch(spec, base, anchor, r_lo, r_hi, tol, ppu):
    k, n = spec.k, spec.n
    rhs = _mode_rhs(k, n)
    t_a = math.log(anchor)
    w_fac = float(rad.div_weight(n, anchor))
    psi_a = 0.0
    v_a = anchor / (w_fac * float(base(anchor)))  # v = r * psi'
    pieces = []
    if r_hi > anchor:
        ts = _uniform_nodes(t_a, math.log(r_hi), ppu)
        psis, vs, _ = _drive(rhs, ts, psi_a, v_a, rtol=tol, atol=tol * 1e-2)
        pieces.append((ts, psis, vs))
    if r_lo < anchor:
        ts = _uniform_nodes(t_a, math.log(r_lo), ppu)
        psis, vs, _ = _drive(rhs, ts, psi_a, v_a, rtol=tol, atol=tol * 1e-2)
        pieces.append((ts[::-1], psis[::-1], vs[::-1]))
    ts, psis, vs = _merge_pieces(pieces)
    r = np.exp(ts)
    return SolutionTrajectory(
        r=r,
        psi=psis,
        dpsi=vs / r,
        k=k,
        n=n,
        launch="prescribed-at-R",
        tol=tol,
        strictly_positive=False,
    )


def _second_by_reduction(spec, base, base_d1, anchor, r_lo, r_hi, ppu):
    k, n = spec.k, spec.n
    if k == 0:
        rstar = modes.psi0_root(n)
        if r_lo < 1.1 * rstar and r_hi > 0.9 * rstar:
            raise ValueError(
                "reduction range must avoid the band [0.9, 1.1] * r_zero of the "
                f"mode-0 profile (r_zero = {rstar:.6g})"
            )
    b = n * (n - 2) / (n - 1)
    amp = rad.grad_scale(n) ** -(n - 2)

    def c_prime(r):
        r = np.asarray(r, dtype=float)
        rho = rad.rho_of_r(n, r)
        return amp * (1.0 + rho) ** (n - 2) / (np.asarray(base(r)) ** 2 * r ** (1.0 + b))

    t_lo, t_hi = math.log(r_lo), math.log(r_hi)
    t_anchor = math.log(anchor)
    if t_lo <= t_anchor <= t_hi:
        ts = np.unique(
            np.concatenate(
                [_uniform_nodes(t_anchor, t_lo, ppu)[::-1], _uniform_nodes(t_anchor, t_hi, ppu)]
            )
        )
        i_anchor = int(np.searchsorted(ts, t_anchor))
    else:
        ts = _uniform_nodes(t_lo, t_hi, ppu)
        i_anchor = 0 if t_anchor < t_lo else len(ts) - 1
    c = _cumulative_gauss(lambda t: c_prime(np.exp(t)) * np.exp(t), ts, i_anchor)
    r = np.exp(ts)
    psi = c * base(r)
    dpsi = c_prime(r) * base(r) + c * base_d1(r)
    return SolutionTrajectory(
        r=r,
        psi=psi,
        dpsi=dpsi,
        k=k,
        n=n,
        launch="reduction-of-order",
        tol=0.0,
        strictly_positive=False,
    )


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(6)


def _cumulative_gauss(f, ts: np.ndarray, i_zero: int) -> np.ndarray:
    """Cumulative integral of f over the grid ts, zero at index i_zero."""
    mids = 0.5 * (ts[1:] + ts[:-1])
    halfs = 0.5 * (ts[1:] - ts[:-1])
    nodes = mids[:, None] + halfs[:, None] * _GL_NODES[None, :]
    panel = halfs * (f(nodes.ravel()).reshape(nodes.shape) @ _GL_WEIGHTS)
    out = np.zeros(len(ts))
    out[1:] = np.cumsum(panel)
    return out - out[i_zero]


def _merge_pieces(pieces):
    if len(pieces) == 1:
        return pieces[0]
    ts_f, ps_f, vs_f = pieces[0]  # ascending from the anchor
    ts_b, ps_b, vs_b = pieces[1]  # ascending up to the anchor
    # the anchor node appears at the end of the backward piece and the
    # start of the forward piece; keep one copy
    return (
        np.concatenate([ts_b[:-1], ts_f]),
        np.concatenate([ps_b[:-1], ps_f]),
        np.concatenate([vs_b[:-1], vs_f]),
    )


def growth_exponent(
    traj: SolutionTrajectory,
    window: tuple[float, float],
    model: str = "auto",
    power_residual_max: float = 0.05,
    log_residual_max: float = 0.02,
    log_detect_threshold: float = 0.05,
) -> GrowthEstimate:
    """Fit the tail behaviour of a trajectory over ``window`` (>= 1 decade).

    The primary fit is log|psi| against log r.  With ``model="auto"`` an
    almost-flat slope (|slope| below ``log_detect_threshold``) triggers a
    refit of psi against log r, reported as logarithmic growth with slope
    ``log_coefficient``.  ``model="power"`` or ``model="log"`` force one
    branch.  A zero of psi inside the window makes the power fit
    inconclusive (flagged, not raised).
    """
    r_lo, r_hi = float(window[0]), float(window[1])
    if r_hi < 10.0 * r_lo:
        raise ValueError("fit window must span at least one decade")
    lo, hi = traj.r_range
    if r_lo < lo * (1 - 1e-12) or r_hi > hi * (1 + 1e-12):
        raise ValueError(f"window {window} outside trajectory range {(lo, hi)}")
    mask = (traj.r >= r_lo) & (traj.r <= r_hi)
    t = traj.t[mask]
    psi = traj.psi[mask]
    if len(t) < 8:
        raise ValueError("window contains too few samples")

    has_zero = bool(np.any(psi == 0.0) or np.any(psi[1:] * psi[:-1] < 0.0))
    nz = psi != 0.0
    slope, intercept = np.polyfit(t[nz], np.log(np.abs(psi[nz])), 1)
    power_res = float(
        np.sqrt(np.mean((np.log(np.abs(psi[nz])) - (slope * t[nz] + intercept)) ** 2))
    )

    use_log = model == "log" or (model == "auto" and abs(slope) < log_detect_threshold)
    if model == "power":
        use_log = False
    if use_log:
        a, b = np.polyfit(t, psi, 1)
        resid = psi - (a * t + b)
        rms_psi = float(np.sqrt(np.mean(psi**2)))
        log_res = float(np.sqrt(np.mean(resid**2)) / rms_psi) if rms_psi > 0 else 0.0
        return GrowthEstimate(
            exponent=float(slope),
            log_coefficient=float(a),
            fit_window=(r_lo, r_hi),
            residual=log_res,
            model="log",
            conclusive=log_res <= log_residual_max,
        )
    return GrowthEstimate(
        exponent=float(slope),
        log_coefficient=None,
        fit_window=(r_lo, r_hi),
        residual=power_res,
        model="power",
        conclusive=(not has_zero) and power_res <= power_residual_max,
    )


def _simpson_uniform(y: np.ndarray, h: float) -> float:
    """Composite Simpson on a uniform grid; 3/8 patch when intervals are odd."""
    m = len(y) - 1
    if m < 1:
        return 0.0
    if m == 1:
        return 0.5 * h * (y[0] + y[1])
    total = 0.0
    if m % 2 == 1:
        total += 3.0 * h / 8.0 * (y[m - 3] + 3.0 * y[m - 2] + 3.0 * y[m - 1] + y[m])
        y = y[: m - 2]
        m -= 3
        if m == 0:
            return total
    total += h / 3.0 * (y[0] + y[-1] + 4.0 * np.sum(y[1:-1:2]) + 2.0 * np.sum(y[2:-1:2]))
    return float(total)


def lagrange_identity_parts(
    traj_k: SolutionTrajectory,
    traj_j: SolutionTrajectory,
    r_lo: float,
    r_hi: float,
) -> tuple[float, float, float]:
    """(boundary difference, eigenvalue-weighted integral, |difference|).

    The identity equates the divergence-form cross-Wronskian evaluated at
    the window ends with ((lam_k - lam_j)/(n-1)) times the weighted
    integral of the product of the two solutions.  Quadrature runs on the
    sample grid of ``traj_k`` (composite Simpson in log r); ``traj_j`` is
    interpolated onto that grid when the grids differ.
    """
    if traj_k.n != traj_j.n:
        raise ValueError("trajectories live in different dimensions")
    if traj_k.k == traj_j.k:
        raise ValueError("identity needs two distinct modes")
    n = traj_k.n
    mask = (traj_k.r >= r_lo) & (traj_k.r <= r_hi)
    if int(np.count_nonzero(mask)) < 8:
        raise ValueError("window contains too few samples")
    r = traj_k.r[mask]
    t = traj_k.t[mask]
    if not (traj_j.r_range[0] <= r[0] and r[-1] <= traj_j.r_range[1]):
        raise ValueError("second trajectory does not cover the window")
    psi_k = traj_k.psi[mask]
    dpsi_k = traj_k.dpsi[mask]
    same_grid = (
        len(traj_j.r) == len(traj_k.r)
        and np.allclose(traj_j.r, traj_k.r, rtol=1e-12, atol=0.0)
    )
    if same_grid:
        psi_j = traj_j.psi[mask]
        dpsi_j = traj_j.dpsi[mask]
    else:
        psi_j = traj_j.psi_at(r)
        dpsi_j = traj_j.dpsi_at(r)

    w_fac = rad.div_weight(n, r)
    cross = w_fac * (dpsi_k * psi_j - dpsi_j * psi_k)
    boundary = float(cross[-1] - cross[0])

    h = float(np.mean(np.diff(t)))
    if np.max(np.abs(np.diff(t) - h)) > 1e-9 * max(abs(h), 1e-30):
        raise ValueError("quadrature expects a uniform log-radius grid")
    integrand = r ** (n - 2) * rad.grad_pow(n, r, n - 2) * psi_k * psi_j
    lam_k = modes.eigenvalue(traj_k.k, n)
    lam_j = modes.eigenvalue(traj_j.k, n)
    integral = (lam_k - lam_j) / (n - 1) * _simpson_uniform(integrand, h)
    return boundary, integral, abs(boundary - integral)


def lagrange_identity_residual(
    k: int,
    j: int,
    n: int,
    traj_k: SolutionTrajectory,
    traj_j: SolutionTrajectory,
    r_lo: float,
    r_hi: float,
) -> float:
    """Absolute defect of the cross-mode integral identity on [r_lo, r_hi]."""
    if (traj_k.k, traj_k.n) != (k, n) or (traj_j.k, traj_j.n) != (j, n):
        raise ValueError("trajectory metadata does not match the requested modes")
    return lagrange_identity_parts(traj_k, traj_j, r_lo, r_hi)[2]


def divergence_wronskian(traj_a: SolutionTrajectory, traj_b: SolutionTrajectory, r) -> np.ndarray:
    """r^(n-1) |u'|^(n-2) (psi_a' psi_b - psi_b' psi_a) at the given radii.

    Exactly conserved when both trajectories solve the same mode equation.
    """
    if (traj_a.k, traj_a.n) != (traj_b.k, traj_b.n):
        raise ValueError("Wronskian conservation needs two solutions of one mode")
    r = np.asarray(r, dtype=float)
    pa, da = traj_a.psi_at(r), traj_a.dpsi_at(r)
    pb, db = traj_b.psi_at(r), traj_b.dpsi_at(r)
    return rad.div_weight(traj_a.n, r) * (da * pb - db * pa)


def _hermite(tq: np.ndarray, t: np.ndarray, y: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Piecewise cubic Hermite evaluation; dy holds dy/dt at the samples."""
    tq = np.atleast_1d(tq)
    if np.any(tq < t[0] - 1e-12) or np.any(tq > t[-1] + 1e-12):
        raise ValueError("interpolation query outside the sampled range")
    idx = np.clip(np.searchsorted(t, tq, side="right") - 1, 0, len(t) - 2)
    h = t[idx + 1] - t[idx]
    tau = np.clip((tq - t[idx]) / h, 0.0, 1.0)
    tau2 = tau * tau
    tau3 = tau2 * tau
    h00 = 1.0 - 3.0 * tau2 + 2.0 * tau3
    h10 = tau - 2.0 * tau2 + tau3
    h01 = 3.0 * tau2 - 2.0 * tau3
    h11 = tau3 - tau2
    out = h00 * y[idx] + h10 * h * dy[idx] + h01 * y[idx + 1] + h11 * h * dy[idx + 1]
    return out if out.ndim else out[()]


def export_csv(traj: SolutionTrajectory, dest: str | TextIO) -> None:
    """Write the trajectory as CSV with header ``r,psi,dpsi`` (17 digits)."""
    own = isinstance(dest, str)
    fh = open(dest, "w", newline="") if own else dest
    try:
        fh.write("r,psi,dpsi\n")
        for r, p, d in zip(traj.r, traj.psi, traj.dpsi):
            fh.write(f"{r:.17g},{p:.17g},{d:.17g}\n")
    finally:
        if own:
            fh.close()
