"""Command-line front end.

Three subcommands:

* ``nlk verify``  runs the kernel certificate for one or more dimensions
  and writes the report (JSON canonical, CSV as a flat projection);
* ``nlk modes``   exports trajectory CSVs for a chosen mode;
* ``nlk bubble``  tabulates the entire solution and its mass check.

Exit codes: 0 all verdicts pass, 1 usage error, 2 any verdict fails,
3 any verdict inconclusive.  Machine-readable output goes to --out or
stdout; diagnostics go to stderr only.  The env var NLK_THREADS caps
parallelism across modes.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bubble, modes, ode_engine, verifier
from . import _radial as rad

__all__ = ["main", "RunConfig"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default; usage errors here are exit 1
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters with documented defaults."""

    dims: tuple[int, ...] = (2, 3, 4, 5, 6)
    k_max: int = 10
    tol_residual: float = 1e-8
    tol_exponent: float = 0.01
    out: str | None = None
    fmt: str = "json"
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if not self.dims:
            raise UsageError("at least one --dim is required")
        for n in self.dims:
            if n < 2:
                raise UsageError(f"--dim must be >= 2, got {n}")
        if self.k_max < 2:
            raise UsageError(f"--kmax must be >= 2, got {self.k_max}")
        if not self.tol_residual > 0:
            raise UsageError("--tol-residual must be positive")
        if not self.tol_exponent > 0:
            raise UsageError("--tol-exponent must be positive")
        if self.fmt not in ("json", "csv"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.threads < 1:
            raise UsageError("NLK_THREADS must be a positive integer")

    def tolerances(self) -> verifier.Tolerances:
        return verifier.Tolerances(residual=self.tol_residual, exponent=self.tol_exponent)

    def as_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "k_max": self.k_max,
            "tol_residual": self.tol_residual,
            "tol_exponent": self.tol_exponent,
            "format": self.fmt,
            "seed": self.seed,
        }


def _threads_from_env() -> int:
    raw = os.environ.get("NLK_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"NLK_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise UsageError(f"NLK_THREADS must be >= 1, got {value}")
    return value


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, action="append", metavar="N", help="dimension (repeatable)")
    p.add_argument("--kmax", type=int, default=10, help="largest mode to verify (default 10)")
    p.add_argument("--tol-residual", type=float, default=1e-8, help="residual threshold (default 1e-8)")
    p.add_argument("--tol-exponent", type=float, default=0.01, help="exponent threshold (default 0.01)")
    p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    p.add_argument("--seed", type=int, default=0, help="seed recorded in the report (default 0)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="nlk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_verify = sub.add_parser("verify", help="run the kernel-dimension certificate")
    _add_common(p_verify)
    p_modes = sub.add_parser("modes", help="export trajectory CSVs for one mode")
    _add_common(p_modes)
    p_modes.add_argument("--k", type=int, required=True, help="mode index")
    p_bubble = sub.add_parser("bubble", help="tabulate the entire solution and its mass")
    _add_common(p_bubble)
    return parser


def _config_from_args(args, single_dim: bool) -> RunConfig:
    dims = tuple(args.dim) if args.dim else ((3,) if single_dim else (2, 3, 4, 5, 6))
    if single_dim and len(dims) != 1:
        raise UsageError("this subcommand takes exactly one --dim")
    return RunConfig(
        dims=dims,
        k_max=args.kmax,
        tol_residual=args.tol_residual,
        tol_exponent=args.tol_exponent,
        out=args.out,
        fmt=args.fmt,
        seed=args.seed,
        threads=_threads_from_env(),
    )


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        path = Path(out)
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out!r}: {exc}")


def _json_dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _verify_csv(doc: dict) -> str:
    lines = ["dimension,k,check,value,threshold,op,pass"]
    for rep in doc["reports"]:
        n = rep["dimension"]
        for mode in rep["modes"]:
            for c in mode["checks"]:
                lines.append(
                    f"{n},{mode['k']},{c['name']},{c['value']:.17g},"
                    f"{c['threshold']:.17g},{c['op']},{str(c['pass']).lower()}"
                )
        kd = rep["kernel_dimension"]
        lines.append(f"{n},,kernel_dimension,{'' if kd is None else kd},,,{rep['verdict']}")
    return "\n".join(lines) + "\n"


def cmd_verify(config: RunConfig) -> int:
    reports = [
        verifier.full_report(n, config.k_max, config.tolerances(), max_workers=config.threads)
        for n in config.dims
    ]
    doc = verifier.reports_to_document(reports, config.as_dict())
    text = _json_dumps(doc) if config.fmt == "json" else _verify_csv(doc)
    _write_output(text, config.out)
    for rep in reports:
        print(
            f"dimension {rep.dimension}: verdict={rep.verdict} "
            f"kernel_dimension={rep.kernel_dimension} ({rep.wall_time_s:.1f}s)",
            file=sys.stderr,
        )
    if doc["verdict"] == "fail":
        return EXIT_FAIL
    if doc["verdict"] == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _second_out_path(out: str) -> str:
    path = Path(out)
    return str(path.with_name(path.stem + ".second" + path.suffix))


def cmd_modes(config: RunConfig, k: int) -> int:
    if not 0 <= k <= config.k_max:
        raise UsageError(f"--k must lie in [0, {config.k_max}], got {k}")
    n = config.dims[0]
    regular = ode_engine.integrate_regular(k, n)
    buf = io.StringIO()
    ode_engine.export_csv(regular, buf)
    if k in (0, 1):
        second = ode_engine.second_solution(k, n)
        buf2 = io.StringIO()
        ode_engine.export_csv(second, buf2)
        if config.out is None:
            sys.stdout.write(buf.getvalue())
            sys.stdout.write(buf2.getvalue())
        else:
            _write_output(buf.getvalue(), config.out)
            _write_output(buf2.getvalue(), _second_out_path(config.out))
            print(
                f"wrote {config.out} and {_second_out_path(config.out)}", file=sys.stderr
            )
    else:
        _write_output(buf.getvalue(), config.out)
    return EXIT_OK


def _bubble_rows(n: int) -> tuple[list[str], np.ndarray]:
    header = ["r", "u", "du_dr", "exp_u", "z0", "psi0", "psi1", "mass_quadrature", "mass_closed_form"]
    r = np.geomspace(1e-3, 1e3, 61)
    params = bubble.BubbleParams()
    mass_q = bubble.mass_integral(n, tol=1e-12)
    mass_c = bubble.mass_closed_form(n)
    x = np.zeros((len(r), n))
    x[:, 0] = r
    cols = np.column_stack(
        [
            r,
            bubble.u_value(n, params, x),
            bubble.u_radial_derivative(n, r),
            np.exp(bubble.u_value(n, params, x)),
            bubble.z0(n, x),
            modes.psi0(n, r),
            modes.psi1(n, r),
            np.full_like(r, mass_q),
            np.full_like(r, mass_c),
        ]
    )
    return header, cols


def cmd_bubble(config: RunConfig) -> int:
    n = config.dims[0]
    header, cols = _bubble_rows(n)
    if config.fmt == "csv":
        lines = [",".join(header)]
        for row in cols:
            lines.append(",".join(f"{v:.17g}" for v in row))
        text = "\n".join(lines) + "\n"
    else:
        doc = {
            "dimension": n,
            "columns": header,
            "rows": [[float(v) for v in row] for row in cols],
            "mass": {
                "quadrature": float(cols[0][-2]),
                "closed_form": float(cols[0][-1]),
            },
        }
        text = _json_dumps(doc)
    _write_output(text, config.out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            return cmd_verify(_config_from_args(args, single_dim=False))
        if args.command == "modes":
            config = _config_from_args(args, single_dim=True)
            rad.require_dimension(config.dims[0])
            return cmd_modes(config, args.k)
        if args.command == "bubble":
            return cmd_bubble(_config_from_args(args, single_dim=True))
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"nlk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        print(f"nlk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
