"""Batch command-line interface.

Reads sampled signals from CSV, runs the transforms and verification suites,
and writes CSV fields plus JSON report envelopes.

Exit codes: 0 all checks passed, 1 checks failed, 2 usage/parse error,
3 precondition violation.  Output files are written atomically and all
numbers use 17 significant digits with a period decimal separator, so runs
are byte-reproducible and locale-independent.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import heisenberg as hg
from . import su11 as su
from .checks import run_suite
from .errors import CovariantLabError, PreconditionError, SignalFormatError
from .numerics import GridFunction1D, RealGrid
from .uncertainty import uncertainty_report

SCHEMA = "covariant-lab/1"

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3


@dataclass
class RunConfig:
    hbar: float = 1.0
    c: float = 2.0 * math.pi
    grid_n: int = 2048
    domain_half_width: float = 8.0
    rho_max: float = 0.95
    tolerance_overrides: dict = field(default_factory=dict)
    output_path: str = ""
    format: str = "json"

    def validate(self) -> None:
        if self.hbar == 0.0:
            raise SignalFormatError("hbar must be nonzero")
        if self.c <= 0.0:
            raise SignalFormatError("c must be positive")
        if self.grid_n < 64:
            raise SignalFormatError("grid_n must be at least 64")
        if not (0.0 < self.rho_max < 1.0):
            raise SignalFormatError("rho-max must lie in (0, 1)")
        if self.format not in ("csv", "json"):
            raise SignalFormatError(f"unknown format {self.format!r}")


@dataclass
class ReportEnvelope:
    command: str
    config: dict
    results: dict
    passed: bool
    wall_time_ms: int
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "pass": self.passed,
            "wall_time_ms": self.wall_time_ms,
            "notes": self.notes,
        }


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-covariant-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_rows(path: str, expected_header: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SignalFormatError(f"cannot read {path}: {exc}") from exc
    lines = [ln.strip() for ln in lines if ln.strip()]
    if not lines:
        raise SignalFormatError(f"{path}: empty file")
    header = [h.strip().lower() for h in lines[0].split(",")]
    if header != expected_header.split(","):
        raise SignalFormatError(
            f"{path}: line 1: expected header '{expected_header}', got '{lines[0]}'"
        )
    rows = []
    for idx, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 3:
            raise SignalFormatError(f"{path}: line {idx}: expected 3 columns")
        try:
            rows.append(tuple(float(x) for x in parts))
        except ValueError:
            raise SignalFormatError(f"{path}: line {idx}: non-numeric value") from None
    if len(rows) < 8:
        raise SignalFormatError(f"{path}: need at least 8 samples, got {len(rows)}")
    return np.asarray(rows)


def read_line_signal(path: str) -> GridFunction1D:
    """CSV with header ``q,re,im``: ascending, uniformly spaced samples."""
    rows = _parse_rows(path, "q,re,im")
    q = rows[:, 0]
    dq = np.diff(q)
    if np.any(dq <= 0.0):
        bad = int(np.argmax(dq <= 0.0)) + 3
        raise SignalFormatError(f"{path}: line {bad}: q values must increase")
    spread = float(np.max(dq) - np.min(dq))
    if spread > 1e-9 * float(np.mean(dq)):
        raise SignalFormatError(
            f"{path}: spacing is not uniform (relative spread {spread / float(np.mean(dq)):.2e})"
        )
    grid = RealGrid(float(q[0]), float(q[-1]), len(q))
    return GridFunction1D(grid, rows[:, 1] + 1j * rows[:, 2])


def read_circle_signal(path: str) -> su.CircleFunction:
    """CSV with header ``theta,re,im``: theta_j = 2*pi*j/N, N a power of two."""
    rows = _parse_rows(path, "theta,re,im")
    n = rows.shape[0]
    if n & (n - 1) != 0:
        raise SignalFormatError(f"{path}: sample count {n} is not a power of two")
    expected = 2.0 * np.pi * np.arange(n) / n
    if float(np.max(np.abs(rows[:, 0] - expected))) > 1e-9:
        raise SignalFormatError(f"{path}: theta values must equal 2*pi*j/N")
    return su.CircleFunction(rows[:, 1] + 1j * rows[:, 2])


def write_plane_csv(path: str, F) -> None:
    lines = ["x,y,re,im"]
    xs, ys = F.xgrid.points, F.ygrid.points
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            z = F.values[i, j]
            lines.append(f"{_fmt(x)},{_fmt(y)},{_fmt(z.real)},{_fmt(z.imag)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_disk_csv(path: str, F) -> None:
    lines = ["rho,theta,re,im"]
    for i, r in enumerate(F.geometry.rho):
        for j, t in enumerate(F.geometry.theta):
            z = F.values[i, j]
            lines.append(f"{_fmt(r)},{_fmt(t)},{_fmt(z.real)},{_fmt(z.imag)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_line_csv(path: str, f: GridFunction1D) -> None:
    lines = ["q,re,im"]
    for q, z in zip(f.grid.points, f.values):
        lines.append(f"{_fmt(q)},{_fmt(z.real)},{_fmt(z.imag)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_circle_csv(path: str, f: su.CircleFunction) -> None:
    lines = ["theta,re,im"]
    for t, z in zip(f.thetas, f.samples):
        lines.append(f"{_fmt(t)},{_fmt(z.real)},{_fmt(z.imag)}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def _emit(envelope: ReportEnvelope, config: RunConfig) -> None:
    payload = envelope.as_dict()
    if config.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("key,value")
        for key, value in _flatten(payload):
            print(f"{key},{value}")


def _flatten(obj, prefix=""):
    items = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            items.extend(_flatten(obj[key], f"{prefix}{key}." if prefix else f"{key}."))
    elif isinstance(obj, (list, tuple)):
        for idx, val in enumerate(obj):
            items.extend(_flatten(val, f"{prefix}{idx}."))
    else:
        items.append((prefix.rstrip("."), obj))
    return items


def _tolerance(config: RunConfig, key: str, default: float) -> float:
    return float(config.tolerance_overrides.get(key, default))


def _envelope(command, config, results, passed, t0, notes=()) -> ReportEnvelope:
    return ReportEnvelope(
        command=command,
        config=asdict(config),
        results=results,
        passed=bool(passed),
        wall_time_ms=int(round(1000.0 * (time.monotonic() - t0))),
        notes=list(notes),
    )


def cmd_fsb(args, config: RunConfig) -> int:
    t0 = time.monotonic()
    v = read_line_signal(args.input)
    hg.check_signal_decay(v)  # PreconditionError -> exit 3
    p = hg.PlanckParams(config.hbar, config.c)
    xg, yg = hg.default_plane_grids()
    F = hg.fsb_transform(v, p, xg, yg)
    cr = hg.cr_residual(F, p)
    wgrid = RealGrid(-2.0, 2.0, 257)
    V = hg.weighted_image(hg.fsb_transform(v, p, wgrid, wgrid))
    holo = hg.holomorphy_residual(V)
    out_path = config.output_path or "fsb_field.csv"
    write_plane_csv(out_path, F)
    cr_tol = _tolerance(config, "cr_residual", 1e-4)
    holo_tol = _tolerance(config, "weighted_cr", 1e-4)
    passed = cr < cr_tol and holo < holo_tol
    env = _envelope(
        "fsb",
        config,
        {
            "field_csv": out_path,
            "plane": {"half_width": xg.hi, "n": xg.n},
            "cr_residual": cr,
            "cr_tolerance": cr_tol,
            "weighted_cr_residual": holo,
            "weighted_cr_tolerance": holo_tol,
        },
        passed,
        t0,
    )
    _emit(env, config)
    return EXIT_OK if passed else EXIT_CHECKS_FAILED


def cmd_uncertainty(args, config: RunConfig) -> int:
    t0 = time.monotonic()
    notes: list[str] = []
    if args.pair == "MD":
        v = read_line_signal(args.input)
        hg.check_signal_decay(v)
        p = hg.PlanckParams(config.hbar, config.c)
        report = uncertainty_report(hg.observable_M(), hg.observable_D(p), v)
    elif args.pair == "su11AB":
        v = read_circle_signal(args.input)
        report = uncertainty_report(
            su.observable_generator("A"), su.observable_generator("B"), v
        )
        if abs(report.product - 0.25) < 1e-8:
            notes.extend(su.F_PLUS_NOTES)
    else:
        raise SignalFormatError(f"unknown pair {args.pair!r}")
    ineq_tol = _tolerance(config, "inequality", 1e-9)
    passed = report.gap >= -ineq_tol
    env = _envelope(
        "uncertainty",
        config,
        {"pair": args.pair, "report": report.as_dict(), "inequality_tolerance": ineq_tol},
        passed,
        t0,
        notes,
    )
    _emit(env, config)
    return EXIT_OK if passed else EXIT_CHECKS_FAILED


def cmd_hardy(args, config: RunConfig) -> int:
    t0 = time.monotonic()
    v = read_circle_signal(args.input)
    geom = su.default_disk_geometry(rho_max=config.rho_max)
    F = su.hardy_transform(v, geom)
    V = su.weighted_disk_image(F)
    holo = su.disk_holomorphy_residual(V)
    peak = float(np.max(np.abs(F.values)))
    out_path = config.output_path or "hardy_field.csv"
    write_disk_csv(out_path, F)
    tol = _tolerance(config, "disk_weighted", 1e-4)
    passed = holo < tol or peak < 1e-12
    env = _envelope(
        "hardy",
        config,
        {
            "field_csv": out_path,
            "disk": {"rho_max": geom.rho_max, "n_rho": geom.rho.size, "n_theta": geom.theta.size},
            "weighted_holomorphy_residual": holo,
            "weighted_holomorphy_tolerance": tol,
            "max_abs_field": peak,
        },
        passed,
        t0,
    )
    _emit(env, config)
    return EXIT_OK if passed else EXIT_CHECKS_FAILED


def cmd_verify(args, config: RunConfig) -> int:
    t0 = time.monotonic()
    try:
        checks = run_suite(args.suite, config.tolerance_overrides)
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name:<{width}}  {c.value:.3e} {c.direction} {c.tolerance:.3e}")
    passed = all(c.passed for c in checks)
    notes = [c.note for c in checks if c.note]
    env = _envelope(
        "verify",
        config,
        {"suite": args.suite, "checks": [c.as_dict() for c in checks]},
        passed,
        t0,
        notes,
    )
    _emit(env, config)
    return EXIT_OK if passed else EXIT_CHECKS_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covariant-lab",
        description="Covariant transforms and uncertainty verification, batch mode.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--hbar", type=float, default=1.0)
        p.add_argument("--c", type=float, default=2.0 * math.pi)
        p.add_argument("--grid-n", type=int, default=2048)
        p.add_argument("--half-width", type=float, default=8.0)
        p.add_argument("--rho-max", type=float, default=0.95)
        p.add_argument(
            "--tolerance",
            action="append",
            default=[],
            metavar="KEY=VAL",
            help="override a named tolerance (repeatable)",
        )
        p.add_argument("--output", default="", help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default="json")

    p_fsb = sub.add_parser("fsb", help="plane transform of a line signal")
    p_fsb.add_argument("input")
    common(p_fsb)

    p_unc = sub.add_parser("uncertainty", help="dispersion report for a signal")
    p_unc.add_argument("input")
    p_unc.add_argument("--pair", choices=("MD", "su11AB"), default="MD")
    common(p_unc)

    p_hardy = sub.add_parser("hardy", help="disk transform of a circle signal")
    p_hardy.add_argument("input")
    common(p_hardy)

    p_verify = sub.add_parser("verify", help="run a named verification suite")
    p_verify.add_argument(
        "--suite", choices=("heisenberg", "su11", "equivalence", "all"), default="all"
    )
    common(p_verify)
    return parser


def _config_from_args(args) -> RunConfig:
    overrides = {}
    for item in args.tolerance:
        if "=" not in item:
            raise SignalFormatError(f"bad --tolerance {item!r}; expected KEY=VAL")
        key, _, val = item.partition("=")
        try:
            overrides[key.strip()] = float(val)
        except ValueError:
            raise SignalFormatError(f"bad --tolerance value {val!r}") from None
    config = RunConfig(
        hbar=args.hbar,
        c=args.c,
        grid_n=args.grid_n,
        domain_half_width=args.half_width,
        rho_max=args.rho_max,
        tolerance_overrides=overrides,
        output_path=args.output,
        format=args.format,
    )
    config.validate()
    return config


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        config = _config_from_args(args)
        handler = {
            "fsb": cmd_fsb,
            "uncertainty": cmd_uncertainty,
            "hardy": cmd_hardy,
            "verify": cmd_verify,
        }[args.command]
        return handler(args, config)
    except SignalFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CovariantLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
