"""Per-mode evidence assembled into a kernel-dimension certificate.

The bounded kernel of the linearized operator decomposes over
spherical-harmonic modes.  Three kinds of evidence are collected:

* mode 0:  the closed-form profile psi0 solves the mode ODE, the regular
  numerical solution reproduces it, and the independent second solution
  grows like A log r + B (hence is unbounded);
* mode 1:  same with psi1 (decay exponent -1), second solution growing
  like r;
* modes k >= 2:  the regular solution stays strictly positive, grows like
  r**sqrt(lambda_k/(n-1)), and satisfies the cross-mode integral identity
  with a strictly positive integral side, so no bounded solution exists.

When every check passes, the bounded kernel collects exactly the
multiplicities of modes 0 and 1: dimension 1 + n.

A failed numerical run (integration breakdown) marks the mode
``inconclusive`` rather than ``fail``; an inconclusive mode withholds the
kernel dimension for the whole report.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _radial as rad
from . import modes, ode_engine
from .errors import StepSizeUnderflowError

__all__ = [
    "Tolerances",
    "CheckResult",
    "ModeReport",
    "VerificationReport",
    "verify_mode0",
    "verify_mode1",
    "verify_higher_mode",
    "full_report",
    "report_to_document",
    "reports_to_document",
]

# evaluation grid for closed-form residual checks
_GRID_LO, _GRID_HI, _GRID_POINTS = 1e-3, 1e3, 200
# tail windows for growth fits
_TAIL_WINDOW = (1e2, 1e4)
_TAIL_DECADES = ((1e2, 1e3), (1e3, 1e4))
# window for the cross-mode integral identity
_LAGRANGE_WINDOW = (1e-3, 10.0)


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used by the per-mode checks.

    ``residual`` bounds closed-form ODE residuals on the evaluation grid;
    ``exponent`` is the allowed deviation of fitted growth exponents;
    ``match`` bounds the relative deviation between a numerical solution
    and its closed form; ``log_fit`` bounds the relative residual of the
    logarithmic tail fit; ``lagrange`` bounds the relative defect of the
    integral identity; ``bounded_exponent`` is the boundedness cutoff for
    fitted exponents.
    """

    residual: float = 1e-8
    exponent: float = 0.01
    match: float = 1e-7
    log_fit: float = 0.02
    lagrange: float = 1e-6
    bounded_exponent: float = 0.05

    def as_dict(self) -> dict:
        return {
            "residual": self.residual,
            "exponent": self.exponent,
            "match": self.match,
            "log_fit": self.log_fit,
            "lagrange": self.lagrange,
            "bounded_exponent": self.bounded_exponent,
        }


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float
    op: str  # "le" (value <= threshold) or "gt" (value > threshold)
    passed: bool

    @staticmethod
    def le(name: str, value: float, threshold: float) -> "CheckResult":
        return CheckResult(name, float(value), float(threshold), "le", bool(value <= threshold))

    @staticmethod
    def gt(name: str, value: float, threshold: float) -> "CheckResult":
        return CheckResult(name, float(value), float(threshold), "gt", bool(value > threshold))


@dataclass(frozen=True)
class ModeReport:
    k: int
    lambda_k: float
    multiplicity: int
    bounded_solution_found: bool
    bounded_solution_matches: str  # "psi0" | "psi1" | "none"
    second_solution_growth: ode_engine.GrowthEstimate | None
    checks: tuple[CheckResult, ...]
    verdict: str  # "pass" | "fail" | "inconclusive"
    note: str = ""

    @property
    def residual_norms(self) -> dict:
        return {c.name: c.value for c in self.checks}


@dataclass(frozen=True)
class VerificationReport:
    dimension: int
    k_max: int
    tolerances: Tolerances
    mode_reports: tuple[ModeReport, ...]
    kernel_dimension: int | None
    verdict: str
    wall_time_s: float


def _grid() -> np.ndarray:
    return np.geomspace(_GRID_LO, _GRID_HI, _GRID_POINTS)


def _match_error(traj: ode_engine.SolutionTrajectory, reference) -> float:
    """Max deviation from the scaled closed form, relative to its sup norm."""
    ref = np.asarray(reference(traj.r), dtype=float)
    scale = ref[0] / traj.psi[0]
    return float(np.max(np.abs(traj.psi * scale - ref)) / np.max(np.abs(ref)))


def _bounded_exponent_value(traj: ode_engine.SolutionTrajectory) -> float:
    """Largest fitted tail exponent over the full window and each decade."""
    fits = [ode_engine.growth_exponent(traj, _TAIL_WINDOW, model="power")]
    fits += [ode_engine.growth_exponent(traj, w, model="power") for w in _TAIL_DECADES]
    return max(f.exponent for f in fits)


def _closed_form_residual(k: int, n: int, derivatives) -> float:
    r = _grid()
    psi, dpsi, d2psi = derivatives(n, r)
    return float(np.max(np.abs(modes.mode_residual(k, n, r, psi, dpsi, d2psi))))


def _inconclusive(k: int, n: int, exc: Exception, checks: list) -> ModeReport:
    spec = modes.mode_spec(k, n)
    return ModeReport(
        k=k,
        lambda_k=spec.lambda_k,
        multiplicity=spec.multiplicity,
        bounded_solution_found=k in (0, 1),
        bounded_solution_matches="none",
        second_solution_growth=None,
        checks=tuple(checks),
        verdict="inconclusive",
        note=f"integration failed: {exc}",
    )


def verify_mode0(n: int, tolerances: Tolerances | None = None) -> ModeReport:
    """Evidence for mode 0: psi0 spans the bounded solutions."""
    tol = tolerances or Tolerances()
    rad.require_dimension(n)
    spec = modes.mode_spec(0, n)
    checks: list[CheckResult] = [
        CheckResult.le(
            "closed_form_residual", _closed_form_residual(0, n, modes.psi0_derivatives), tol.residual
        )
    ]
    try:
        regular = ode_engine.integrate_regular(0, n)
        checks.append(
            CheckResult.le(
                "regular_matches_closed_form",
                _match_error(regular, lambda r: modes.psi0(n, r)),
                tol.match,
            )
        )
        checks.append(
            CheckResult.le("regular_bounded_exponent", _bounded_exponent_value(regular), tol.bounded_exponent)
        )
        second = ode_engine.second_solution(0, n)
        growth = ode_engine.growth_exponent(
            second, _TAIL_WINDOW, model="log", log_residual_max=tol.log_fit
        )
        checks.append(CheckResult.le("second_solution_log_fit_residual", growth.residual, tol.log_fit))
        # the log slope must carry a real share of the signal, not noise
        span = math.log(_TAIL_WINDOW[1] / _TAIL_WINDOW[0])
        mask = (second.r >= _TAIL_WINDOW[0]) & (second.r <= _TAIL_WINDOW[1])
        rms = float(np.sqrt(np.mean(second.psi[mask] ** 2)))
        significance = abs(growth.log_coefficient) * span / rms if rms > 0 else 0.0
        checks.append(CheckResult.gt("second_solution_log_slope_significance", significance, 0.5))
        checks.append(
            CheckResult.gt("second_solution_unbounded_exponent", growth.exponent, tol.bounded_exponent)
        )
    except (StepSizeUnderflowError, ValueError, OverflowError) as exc:
        return _inconclusive(0, n, exc, checks)
    verdict = "pass" if all(c.passed for c in checks) else "fail"
    return ModeReport(
        k=0,
        lambda_k=spec.lambda_k,
        multiplicity=spec.multiplicity,
        bounded_solution_found=True,
        bounded_solution_matches="psi0",
        second_solution_growth=growth,
        checks=tuple(checks),
        verdict=verdict,
    )


def verify_mode1(n: int, tolerances: Tolerances | None = None) -> ModeReport:
    """Evidence for mode 1: psi1 spans the bounded solutions."""
    tol = tolerances or Tolerances()
    rad.require_dimension(n)
    spec = modes.mode_spec(1, n)
    checks: list[CheckResult] = [
        CheckResult.le(
            "closed_form_residual", _closed_form_residual(1, n, modes.psi1_derivatives), tol.residual
        )
    ]
    try:
        regular = ode_engine.integrate_regular(1, n)
        checks.append(
            CheckResult.le(
                "regular_matches_closed_form",
                _match_error(regular, lambda r: modes.psi1(n, r)),
                tol.match,
            )
        )
        decay = ode_engine.growth_exponent(regular, _TAIL_WINDOW, model="power")
        checks.append(CheckResult.le("regular_decay_exponent_error", abs(decay.exponent + 1.0), tol.exponent))
        second = ode_engine.second_solution(1, n)
        growth = ode_engine.growth_exponent(second, _TAIL_WINDOW, model="power")
        checks.append(
            CheckResult.le("second_solution_growth_exponent_error", abs(growth.exponent - 1.0), tol.exponent)
        )
    except (StepSizeUnderflowError, ValueError, OverflowError) as exc:
        return _inconclusive(1, n, exc, checks)
    verdict = "pass" if all(c.passed for c in checks) else "fail"
    return ModeReport(
        k=1,
        lambda_k=spec.lambda_k,
        multiplicity=spec.multiplicity,
        bounded_solution_found=True,
        bounded_solution_matches="psi1",
        second_solution_growth=growth,
        checks=tuple(checks),
        verdict=verdict,
    )


def verify_higher_mode(
    k: int,
    n: int,
    tolerances: Tolerances | None = None,
    mode1_regular: ode_engine.SolutionTrajectory | None = None,
) -> ModeReport:
    """Evidence that mode k >= 2 admits no bounded solution.

    ``mode1_regular`` lets callers reuse the mode-1 partner trajectory for
    the integral identity across many k.
    """
    tol = tolerances or Tolerances()
    rad.require_dimension(n)
    if k < 2:
        raise ValueError("verify_higher_mode requires k >= 2")
    spec = modes.mode_spec(k, n)
    checks: list[CheckResult] = []
    try:
        regular = ode_engine.integrate_regular(k, n)
        floor = float(np.min(regular.psi) / np.max(np.abs(regular.psi)))
        if not regular.strictly_positive:
            floor = min(floor, 0.0)
        checks.append(CheckResult.gt("regular_positive_floor", floor, 0.0))
        fit = ode_engine.growth_exponent(regular, _TAIL_WINDOW, model="power")
        checks.append(
            CheckResult.le(
                "tail_exponent_relative_error",
                abs(fit.exponent / spec.tail_exponent - 1.0),
                tol.exponent,
            )
        )
        partner = mode1_regular
        if partner is None or partner.n != n:
            partner = ode_engine.integrate_regular(1, n)
        boundary, integral, defect = ode_engine.lagrange_identity_parts(
            regular, partner, *_LAGRANGE_WINDOW
        )
        scale = max(abs(boundary), abs(integral))
        checks.append(CheckResult.le("lagrange_identity_relative_defect", defect / scale, tol.lagrange))
        checks.append(CheckResult.gt("lagrange_integral_side", integral, 0.0))
    except (StepSizeUnderflowError, ValueError, OverflowError) as exc:
        return _inconclusive(k, n, exc, checks)
    verdict = "pass" if all(c.passed for c in checks) else "fail"
    return ModeReport(
        k=k,
        lambda_k=spec.lambda_k,
        multiplicity=spec.multiplicity,
        bounded_solution_found=False,
        bounded_solution_matches="none",
        second_solution_growth=fit,
        checks=tuple(checks),
        verdict=verdict,
    )


def full_report(
    n: int,
    k_max: int = 10,
    tolerances: Tolerances | None = None,
    max_workers: int = 1,
) -> VerificationReport:
    """Run modes 0..k_max and assemble the kernel-dimension certificate.

    Mode verifications are independent; ``max_workers > 1`` runs them in a
    thread pool.  Assembly is a deterministic reduction ordered by k.
    """
    rad.require_dimension(n)
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    tol = tolerances or Tolerances()
    t0 = time.perf_counter()
    partner = ode_engine.integrate_regular(1, n)

    def run(k: int) -> ModeReport:
        if k == 0:
            return verify_mode0(n, tol)
        if k == 1:
            return verify_mode1(n, tol)
        return verify_higher_mode(k, n, tol, mode1_regular=partner)

    ks = list(range(k_max + 1))
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            reports = list(pool.map(run, ks))
    else:
        reports = [run(k) for k in ks]
    reports.sort(key=lambda m: m.k)

    if any(m.verdict == "inconclusive" for m in reports):
        verdict = "inconclusive"
        kernel_dimension = None
    else:
        verdict = "pass" if all(m.verdict == "pass" for m in reports) else "fail"
        kernel_dimension = sum(m.multiplicity for m in reports if m.bounded_solution_found)
    return VerificationReport(
        dimension=n,
        k_max=k_max,
        tolerances=tol,
        mode_reports=tuple(reports),
        kernel_dimension=kernel_dimension,
        verdict=verdict,
        wall_time_s=time.perf_counter() - t0,
    )


def _growth_to_dict(g: ode_engine.GrowthEstimate | None) -> dict | None:
    if g is None:
        return None
    return {
        "exponent": g.exponent,
        "log_coefficient": g.log_coefficient,
        "fit_window": list(g.fit_window),
        "residual": g.residual,
        "model": g.model,
        "conclusive": g.conclusive,
    }


def report_to_document(report: VerificationReport) -> dict:
    """Serialize one report; deterministic, excludes wall time."""
    return {
        "dimension": report.dimension,
        "k_max": report.k_max,
        "tolerances": report.tolerances.as_dict(),
        "modes": [
            {
                "k": m.k,
                "lambda": m.lambda_k,
                "multiplicity": m.multiplicity,
                "bounded_solution_found": m.bounded_solution_found,
                "bounded_solution_matches": m.bounded_solution_matches,
                "second_solution_growth": _growth_to_dict(m.second_solution_growth),
                "checks": [
                    {
                        "name": c.name,
                        "value": c.value,
                        "threshold": c.threshold,
                        "op": c.op,
                        "pass": c.passed,
                    }
                    for c in m.checks
                ],
                "verdict": m.verdict,
                **({"note": m.note} if m.note else {}),
            }
            for m in report.mode_reports
        ],
        "kernel_dimension": report.kernel_dimension,
        "verdict": report.verdict,
    }


def reports_to_document(reports: list[VerificationReport], config: dict) -> dict:
    """Combine the per-dimension reports into one document."""
    if any(r.verdict == "fail" for r in reports):
        verdict = "fail"
    elif any(r.verdict == "inconclusive" for r in reports):
        verdict = "inconclusive"
    else:
        verdict = "pass"
    return {
        "config": config,
        "reports": [report_to_document(r) for r in reports],
        "verdict": verdict,
    }
