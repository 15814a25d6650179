"""Named verification suites shared by the CLI and the acceptance tests.

Each check returns a :class:`CheckResult` with the measured value, the
tolerance it is held to, and the direction of the comparison.  Suites are
deterministic: random elements and signals come from fixed seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import heisenberg as hg
from . import su11 as su
from .covariant import (
    Kernel,
    check_left_intertwining,
    check_right_covariance,
    heisenberg_handle,
    su11_handle,
    wavelet_transform,
)
from .numerics import RealGrid
from .uncertainty import equivalence_report

TOLERANCES = {
    "commutator": 1e-7,
    "unitarity": 1e-10,
    "rep_property": 1e-8,
    "intertwining": 1e-6,
    "covariance": 1e-6,
    "generic_agreement": 1e-10,
    "cr_residual": 1e-4,
    "cr_negative_min": 0.1,
    "weighted_cr": 1e-4,
    "det_drift": 1e-10,
    "su11_unitarity": 1e-8,
    "derived_fd": 1e-6,
    "derived_commutators": 1e-10,
    "hardy_modes": 1e-8,
    "hardy_negative": 1e-12,
    "hardy_two_path": 1e-10,
    "disk_residual": 1e-4,
    "disk_negative_min": 0.1,
    "disk_weighted": 1e-4,
    "base_state_gap": 1e-10,
    "gap": 1e-6,
    "transform_residual": 1e-4,
    "negative_gap_min": 0.5,
    "negative_residual_min": 0.1,
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    direction: str = "<"  # "<" value must stay below, ">" must stay above
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "tolerance": self.tolerance,
            "direction": self.direction,
            "passed": self.passed,
            "note": self.note,
        }


def _below(name: str, value: float, tol: float, note: str = "") -> CheckResult:
    return CheckResult(name, float(value), tol, bool(value < tol), "<", note)


def _above(name: str, value: float, tol: float, note: str = "") -> CheckResult:
    return CheckResult(name, float(value), tol, bool(value > tol), ">", note)


def _tol(overrides: dict | None, key: str) -> float:
    if overrides and key in overrides:
        return float(overrides[key])
    return TOLERANCES[key]


def suite_heisenberg(
    p: hg.PlanckParams | None = None,
    n_random: int = 50,
    tolerances: dict | None = None,
) -> list[CheckResult]:
    p = p or hg.PlanckParams()
    grid = hg.default_state_grid()
    handle = heisenberg_handle(p, grid)
    rng = np.random.default_rng(42)
    results: list[CheckResult] = []

    battery = hg.line_signal_battery(grid, count=10)

    dev = 0.0
    for f in battery[:4]:
        comm = hg.op_M(hg.op_D(f, p)) - hg.op_D(hg.op_M(f), p)
        target = (1j * p.hbar) * f
        dev = max(dev, (comm - target).norm() / target.norm())
    results.append(_below("commutator [M,D]=i*hbar", dev, _tol(tolerances, "commutator")))

    dev = 0.0
    for _ in range(100):
        g = handle.random_element(rng)
        f = battery[int(rng.integers(len(battery)))]
        dev = max(dev, abs(hg.schrodinger_apply(g, f, p).norm() - f.norm()) / f.norm())
    results.append(_below("unitarity (100 random)", dev, _tol(tolerances, "unitarity")))

    dev = 0.0
    f = battery[5]
    for _ in range(n_random):
        g1 = handle.random_element(rng)
        g2 = handle.random_element(rng)
        lhs = hg.schrodinger_apply(g1, hg.schrodinger_apply(g2, f, p), p)
        rhs = hg.schrodinger_apply(hg.h_mul(g1, g2), f, p)
        dev = max(dev, float(np.max(np.abs(lhs.values - rhs.values))))
    results.append(_below("representation property", dev, _tol(tolerances, "rep_property")))

    vac = hg.vacuum_window(p, grid)
    v = battery[6]
    devL = devR = 0.0
    for _ in range(n_random):
        g = handle.random_element(rng)
        devL = max(devL, check_left_intertwining(v, vac, g, handle))
        devR = max(devR, check_right_covariance(v, vac, g, handle))
    results.append(_below("left intertwining", devL, _tol(tolerances, "intertwining")))
    results.append(_below("right covariance", devR, _tol(tolerances, "covariance")))

    sub = RealGrid(-2.0, 2.0, 9)
    pts = [(float(x), float(y)) for x in sub.points for y in sub.points]
    gen = wavelet_transform(v, vac, handle, points=pts)
    fast = hg.fsb_transform(v, p, sub, sub).values.reshape(-1)
    results.append(
        _below(
            "generic/specialized agreement",
            float(np.max(np.abs(gen - fast))),
            _tol(tolerances, "generic_agreement"),
        )
    )

    xg, yg = hg.default_plane_grids()
    worst = 0.0
    for sig in battery:
        F = hg.fsb_transform(sig, p, xg, yg)
        worst = max(worst, hg.cr_residual(F, p))
    results.append(
        _below("transform annihilation (10 signals)", worst, _tol(tolerances, "cr_residual"))
    )

    hermite_window = lambda u: u * np.exp(-0.5 * p.c * u * u)
    least = math.inf
    for sig in battery[:3]:
        F = hg.fsb_transform(sig, p, xg, yg, window_fn=hermite_window)
        least = min(least, hg.cr_residual(F, p))
    results.append(
        _above(
            "hermite-window control stays non-holomorphic",
            least,
            _tol(tolerances, "cr_negative_min"),
        )
    )

    wgrid = RealGrid(-2.0, 2.0, 257)
    worst = 0.0
    for sig in battery[:3]:
        V = hg.weighted_image(hg.fsb_transform(sig, p, wgrid, wgrid))
        worst = max(worst, hg.holomorphy_residual(V))
    results.append(
        _below("weighted image holomorphy", worst, _tol(tolerances, "weighted_cr"))
    )
    return results


def suite_su11(n_random: int = 50, tolerances: dict | None = None) -> list[CheckResult]:
    rng = np.random.default_rng(43)
    handle = su11_handle()
    results: list[CheckResult] = []

    comm = su.su11_commutators_check()
    results.append(
        CheckResult(
            "matrix commutators exact",
            0.0 if comm["all"] else 1.0,
            0.5,
            comm["all"],
            "<",
        )
    )

    dev = 0.0
    for name in ("A", "B", "Z"):
        t1, t2 = 0.37, -0.51
        lhs = su.su11_mul(su.one_parameter(name, t1), su.one_parameter(name, t2)).matrix
        rhs = su.one_parameter(name, t1 + t2).matrix
        dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    results.append(_below("one-parameter subgroups", dev, 1e-12))

    drift = 0.0
    for _ in range(40):  # 40 chains x 25 products
        g = su.SU11_IDENTITY
        for _ in range(25):
            h = su.random_element(rng, scale=0.2)
            alpha = g.alpha * h.alpha + g.beta * np.conj(h.beta)
            beta = g.alpha * h.beta + g.beta * np.conj(h.alpha)
            drift = max(drift, abs(abs(alpha) ** 2 - abs(beta) ** 2 - 1.0))
            g = su.su11_mul(g, h)
    results.append(_below("determinant drift (1000 products)", drift, _tol(tolerances, "det_drift")))

    battery = su.circle_signal_battery(count=6)
    f = battery[4]
    dev = 0.0
    for _ in range(100):
        g = su.random_element(rng)
        dev = max(dev, abs(su.mock_rep_apply(g, f).norm() - f.norm()) / f.norm())
    results.append(_below("mock unitarity (100 random)", dev, _tol(tolerances, "su11_unitarity")))

    dev = 0.0
    for _ in range(n_random):
        g1 = su.random_element(rng)
        g2 = su.random_element(rng)
        lhs = su.mock_rep_apply(g1, su.mock_rep_apply(g2, f))
        rhs = su.mock_rep_apply(su.su11_mul(g1, g2), f)
        dev = max(dev, float(np.max(np.abs(lhs.samples - rhs.samples))))
    results.append(_below("mock representation property", dev, _tol(tolerances, "rep_property")))

    narrow = su.CircleFunction.from_modes(
        {n: math.exp(-abs(n)) for n in range(-8, 9)}
    )
    tau = 1e-4
    dev = 0.0
    for name in ("A", "B", "Z"):
        fd = (
            su.mock_rep_apply(su.one_parameter(name, tau), narrow)
            - su.mock_rep_apply(su.one_parameter(name, -tau), narrow)
        ) * (1.0 / (2.0 * tau))
        ex = su.derived_rep_apply(name, narrow)
        dev = max(dev, (fd - ex).norm() / ex.norm())
    results.append(_below("derived vs one-parameter slope", dev, _tol(tolerances, "derived_fd")))

    dev = 0.0
    pairs = (("A", "B", "Z", -0.5), ("Z", "A", "B", 2.0), ("Z", "B", "A", -2.0))
    for x, y, z, coef in pairs:
        comm_f = su.derived_rep_apply(x, su.derived_rep_apply(y, f)) - su.derived_rep_apply(
            y, su.derived_rep_apply(x, f)
        )
        target = coef * su.derived_rep_apply(z, f)
        dev = max(dev, (comm_f - target).norm() / max(target.norm(), 1.0))
    results.append(
        _below("derived commutator closure", dev, _tol(tolerances, "derived_commutators"))
    )

    geom = su.default_disk_geometry()
    w = geom.w_points()
    mask = geom.rho <= 0.9
    dev = 0.0
    for n in range(9):
        F = su.hardy_transform(su.circle_mode(n), geom)
        expect = w**n / np.sqrt(1.0 - np.abs(w) ** 2)
        dev = max(dev, float(np.max(np.abs(F.values[mask] - expect[mask]))))
    results.append(_below("disk transform mode map (n=0..8)", dev, _tol(tolerances, "hardy_modes")))

    neg = su.hardy_transform(su.circle_mode(-1), geom)
    results.append(
        _below(
            "negative modes map to zero",
            float(np.max(np.abs(neg.values))),
            _tol(tolerances, "hardy_negative"),
        )
    )

    v = battery[5]
    two_path = float(
        np.max(
            np.abs(
                su.hardy_transform(v, geom, "fourier").values
                - su.hardy_transform(v, geom, "quadrature").values
            )
        )
    )
    results.append(_below("fourier/quadrature agreement", two_path, _tol(tolerances, "hardy_two_path")))

    worst = 0.0
    least = math.inf
    for sig in battery[:4]:
        F = su.hardy_transform(sig, geom)
        worst = max(worst, su.disk_relative_residual(su.disk_annihilator(F), F))
        C = su.hardy_transform_conjugate(su.circle_mode(-2) + sig, geom)
        if float(np.linalg.norm(C.values)) > 1e-12:
            least = min(least, su.disk_relative_residual(su.disk_annihilator(C), C))
    results.append(_below("disk annihilation", worst, _tol(tolerances, "disk_residual")))
    results.append(
        _above("conjugate-kernel control", least, _tol(tolerances, "disk_negative_min"))
    )

    worst = 0.0
    for sig in battery[:4]:
        V = su.weighted_disk_image(su.hardy_transform(sig, geom))
        worst = max(worst, su.disk_holomorphy_residual(V))
    results.append(_below("weighted disk holomorphy", worst, _tol(tolerances, "disk_weighted")))

    base = su.f_plus_dispersion_report()
    results.append(
        _below(
            "base state saturates the bound",
            abs(base.report.gap),
            _tol(tolerances, "base_state_gap"),
            note=f"product {base.report.product:.6f}",
        )
    )
    results.append(
        CheckResult(
            "base state minimizes over rotation eigenstates",
            float(base.minimizer_mode),
            0.5,
            base.minimizer_mode == 0,
            "<",
        )
    )

    fp = su.f_plus()
    dev = 0.0
    devR = 0.0
    vv = battery[3]
    for _ in range(n_random):
        g = su.random_element(rng)
        dev = max(dev, check_left_intertwining(vv, fp, g, handle))
        devR = max(devR, check_right_covariance(vv, fp, g, handle))
    results.append(_below("left intertwining", dev, _tol(tolerances, "intertwining")))
    results.append(_below("right covariance", devR, _tol(tolerances, "covariance")))
    return results


def suite_equivalence(
    p: hg.PlanckParams | None = None, tolerances: dict | None = None
) -> list[CheckResult]:
    p = p or hg.PlanckParams()
    grid = hg.default_state_grid()
    handle = heisenberg_handle(p, grid)
    k1 = Kernel("delta_derivative_x")
    k2 = Kernel("delta_derivative_y")
    gap_tol = _tol(tolerances, "gap")
    res_tol = _tol(tolerances, "transform_residual")

    results: list[CheckResult] = []
    pos = equivalence_report(k1, k2, hg.vacuum_window(p, grid), handle, gap_tol, res_tol)
    results.append(_below("gaussian control: gap", pos.report.gap, gap_tol))
    results.append(
        _below("gaussian control: image residual", pos.transform_residual, res_tol)
    )
    neg = equivalence_report(k1, k2, hg.hermite1_window(p, grid), handle, gap_tol, res_tol)
    results.append(
        _above("hermite control: gap", neg.report.gap, _tol(tolerances, "negative_gap_min"))
    )
    results.append(
        _above(
            "hermite control: image residual",
            neg.transform_residual,
            _tol(tolerances, "negative_residual_min"),
        )
    )
    agree = pos.verdicts_agree and neg.verdicts_agree
    results.append(
        CheckResult("verdicts agree on both controls", 0.0 if agree else 1.0, 0.5, agree, "<")
    )

    srep = equivalence_report(k1, k2, su.f_plus(), su11_handle(), gap_tol, res_tol)
    results.append(_below("constant-state control: gap", srep.report.gap, gap_tol))
    results.append(
        _below(
            "constant-state control: image residual", srep.transform_residual, res_tol
        )
    )
    return results


SUITES = {
    "heisenberg": lambda tolerances=None: suite_heisenberg(tolerances=tolerances),
    "su11": lambda tolerances=None: suite_su11(tolerances=tolerances),
    "equivalence": lambda tolerances=None: suite_equivalence(tolerances=tolerances),
}


def run_suite(name: str, tolerances: dict | None = None) -> list[CheckResult]:
    if name == "all":
        out: list[CheckResult] = []
        for key in ("heisenberg", "su11", "equivalence"):
            out.extend(run_suite(key, tolerances))
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; pick from {sorted(SUITES)} or 'all'")
    return SUITES[name](tolerances=tolerances)
