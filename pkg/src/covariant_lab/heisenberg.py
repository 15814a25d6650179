"""The Heisenberg group H^1 and its action on line states.

Provides the group operations, the Schroedinger representation, the coordinate
and momentum generators M and D, the Gaussian-window coherent-state transform
into the (x, y) plane, and the first-order operator that annihilates every
transform image.

Convention note.  The one-parameter phases of the representation are fixed so
that (a) composition matches the group product exactly and (b) the transform
image of any signal is killed by :func:`cr_operator`, equivalently its
weighted image is holomorphic in z = x + iy.  Both requirements pin the two
sign choices below; flipping either one breaks one of the two properties.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainOverflowError, PreconditionError
from .numerics import (
    GridFunction1D,
    PlaneField,
    RealGrid,
    fd_partial_2d,
    fourier_shift,
    interior,
    spectral_core_matrix,
    spectral_derivative,
)
from .uncertainty import Observable

TWO_PI = 2.0 * math.pi

DEFAULT_HBAR = 1.0
DEFAULT_C = TWO_PI


@dataclass(frozen=True)
class HeisenbergElement:
    """Group element (s, x, y) in R^3 with the twisted addition law."""

    s: float
    x: float
    y: float

    def __post_init__(self) -> None:
        if not all(map(math.isfinite, (self.s, self.x, self.y))):
            raise ValueError("group coordinates must be finite")


H_IDENTITY = HeisenbergElement(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class PlanckParams:
    """Scale parameters: hbar != 0 and the Gaussian window width c > 0."""

    hbar: float = DEFAULT_HBAR
    c: float = DEFAULT_C

    def __post_init__(self) -> None:
        if self.hbar == 0.0 or not math.isfinite(self.hbar):
            raise ValueError("hbar must be finite and nonzero")
        if not (self.c > 0.0 and math.isfinite(self.c)):
            raise ValueError("c must be finite and positive")


def h_mul(g: HeisenbergElement, h: HeisenbergElement) -> HeisenbergElement:
    """Group product (s,x,y)*(s',x',y') = (s+s'+(xy'-x'y)/2, x+x', y+y')."""
    return HeisenbergElement(
        g.s + h.s + 0.5 * (g.x * h.y - h.x * g.y),
        g.x + h.x,
        g.y + h.y,
    )


def h_inv(g: HeisenbergElement) -> HeisenbergElement:
    return HeisenbergElement(-g.s, -g.x, -g.y)


def default_state_grid(n: int = 2048, half_width: float = 8.0) -> RealGrid:
    return RealGrid(-half_width, half_width, n)


def default_plane_grids(n: int = 257, half_width: float = 4.0) -> tuple[RealGrid, RealGrid]:
    g = RealGrid(-half_width, half_width, n)
    return g, g


def schrodinger_apply(
    g: HeisenbergElement,
    f: GridFunction1D,
    p: PlanckParams,
    decay_tol: float = 1e-6,
) -> GridFunction1D:
    """Unitary action of a group element on a line state.

    Returns q -> exp(-2*pi*i*hbar*(s - x*y/2) + 2*pi*i*x*q) * f(q + hbar*y).
    The off-grid shift is evaluated by band-limited (Fourier) interpolation,
    which requires f to decay at the grid ends; a shift that moves significant
    mass across the periodic seam raises :class:`DomainOverflowError`.
    """
    delta = p.hbar * g.y
    span = f.grid.hi - f.grid.lo
    if abs(delta) > 0.25 * span:
        raise DomainOverflowError(
            f"shift {delta:.3g} exceeds a quarter of the grid span {span:.3g}"
        )
    shifted = fourier_shift(f, delta)
    peak = float(np.max(np.abs(shifted.values)))
    edge = max(abs(shifted.values[0]), abs(shifted.values[-1]))
    if peak > 0.0 and edge > decay_tol * peak:
        raise DomainOverflowError(
            f"shifted state no longer decays at the ends (edge/max = {edge / peak:.3g})"
        )
    q = f.grid.points
    phase = np.exp(
        1j * (-TWO_PI * p.hbar * (g.s - 0.5 * g.x * g.y) + TWO_PI * g.x * q)
    )
    return GridFunction1D(f.grid, phase * shifted.values, meta=dict(f.meta))


def op_M(f: GridFunction1D) -> GridFunction1D:
    """Coordinate generator: (M f)(q) = -i q f(q)."""
    return GridFunction1D(f.grid, -1j * f.grid.points * f.values)


def op_D(f: GridFunction1D, p: PlanckParams) -> GridFunction1D:
    """Momentum generator: (D f)(q) = hbar f'(q)."""
    df = spectral_derivative(f)
    return GridFunction1D(f.grid, p.hbar * df.values, meta=dict(df.meta))


def _core_state_builder(grid: RealGrid, vec: np.ndarray) -> GridFunction1D:
    # dense solvers work on the n-1 periodic samples; restore the duplicate end
    return GridFunction1D(grid, np.concatenate([vec, vec[:1]]))


def observable_M(scale: float = 1.0) -> Observable:
    return Observable(
        apply=lambda f: scale * op_M(f),
        label="M" if scale == 1.0 else f"{scale:g}*M",
        hermiticity="anti_hermitian",
        matrix=lambda grid: np.diag(-1j * scale * grid.points[: grid.n - 1]),
        state_builder=_core_state_builder,
    )


def observable_D(p: PlanckParams) -> Observable:
    return Observable(
        apply=lambda f: op_D(f, p),
        label="D",
        hermiticity="anti_hermitian",
        matrix=lambda grid: p.hbar * spectral_core_matrix(grid),
        state_builder=_core_state_builder,
    )


# --------------------------------------------------------------------------
# Reference states.  Two Gaussian width conventions coexist:
#   * transform windows use exp(-c q^2 / 2)   (width parameter of the kernel),
#   * uncertainty-minimizing states use exp(-c q^2); the two are related by
#     c_window = 2 * c_state.
# --------------------------------------------------------------------------


def vacuum_window(p: PlanckParams, grid: RealGrid) -> GridFunction1D:
    q = grid.points
    return GridFunction1D(grid, np.exp(-0.5 * p.c * q * q))


def hermite1_window(p: PlanckParams, grid: RealGrid) -> GridFunction1D:
    q = grid.points
    return GridFunction1D(grid, q * np.exp(-0.5 * p.c * q * q))


def gaussian_state(c: float, grid: RealGrid) -> GridFunction1D:
    q = grid.points
    return GridFunction1D(grid, np.exp(-c * q * q))


def hermite1_state(c: float, grid: RealGrid) -> GridFunction1D:
    q = grid.points
    return GridFunction1D(grid, q * np.exp(-c * q * q))


def hermite_polynomial(n: int, x: np.ndarray) -> np.ndarray:
    """Physicists' Hermite polynomial H_n by the three-term recurrence."""
    h0 = np.ones_like(x)
    if n == 0:
        return h0
    h1 = 2.0 * x
    for k in range(1, n):
        h0, h1 = h1, 2.0 * x * h1 - 2.0 * k * h0
    return h1


def line_signal_battery(
    grid: RealGrid, count: int = 10, seed: int = 2024
) -> list[GridFunction1D]:
    """Deterministic battery of smooth rapidly-decaying test signals."""
    q = grid.points
    rng = np.random.default_rng(seed)
    signals: list[GridFunction1D] = []
    for a, q0 in ((0.5 * math.pi, 0.0), (math.pi, 0.4), (TWO_PI, -0.3), (math.pi, 0.0)):
        signals.append(GridFunction1D(grid, np.exp(-a * (q - q0) ** 2)))
    for n in (1, 2, 3):
        signals.append(
            GridFunction1D(grid, hermite_polynomial(n, q) * np.exp(-math.pi * q * q))
        )
    while len(signals) < count:
        coef = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        vals = np.zeros_like(q, dtype=complex)
        for n, cn in enumerate(coef):
            vals += cn * hermite_polynomial(n, q) * np.exp(-math.pi * q * q)
        signals.append(GridFunction1D(grid, vals))
    return signals[:count]


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("COVARIANT_LAB_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def fsb_transform(
    v: GridFunction1D,
    p: PlanckParams,
    xgrid: RealGrid,
    ygrid: RealGrid,
    window_fn: Callable[[np.ndarray], np.ndarray] | None = None,
    workers: int | None = None,
) -> PlaneField:
    """Coherent-state transform of a line signal into the (x, y) plane.

    Evaluates, by trapezoidal quadrature per target point,

        F(x, y) = integral v(q) * exp(i*pi*hbar*x*y + 2*pi*i*x*q)
                               * conj(w(q + hbar*y)) dq,

    where the window ``w`` defaults to the Gaussian exp(-c u^2 / 2).  A custom
    ``window_fn`` (values at the shifted argument) supports e.g. the
    first-Hermite control window.  Chunks of y-columns are independent; the
    fixed chunking keeps results identical for any worker count
    (``COVARIANT_LAB_THREADS`` caps the default).
    """
    hbar, c = p.hbar, p.c
    if window_fn is None:
        window_fn = lambda u: np.exp(-0.5 * c * u * u)
    q = v.grid.points
    span = v.grid.hi - v.grid.lo
    ymax = float(np.max(np.abs(ygrid.points)))
    if abs(hbar) * ymax > 0.5 * span:
        raise DomainOverflowError(
            f"hbar*|y| = {abs(hbar) * ymax:.3g} pushes the window outside the grid"
        )
    base = v.values * v.grid.trapezoid_weights()
    x = xgrid.points
    kernel_x = np.exp(1j * TWO_PI * np.outer(x, q))
    out = np.empty((xgrid.n, ygrid.n), dtype=np.complex128)

    chunk = 32
    starts = range(0, ygrid.n, chunk)

    def fill(j0: int) -> None:
        js = slice(j0, min(j0 + chunk, ygrid.n))
        ys = ygrid.points[js]
        windows = np.conj(window_fn(q[None, :] + hbar * ys[:, None]))
        out[:, js] = kernel_x @ (base[None, :] * windows).T

    nworkers = _worker_count(workers)
    if nworkers == 1:
        for j0 in starts:
            fill(j0)
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            list(pool.map(fill, starts))
    phase = np.exp(1j * math.pi * hbar * np.outer(x, ygrid.points))
    return PlaneField(xgrid, ygrid, phase * out, meta={"transform": "fsb"})


def transform_with_mother(
    v: GridFunction1D,
    f: GridFunction1D,
    p: PlanckParams,
    xgrid: RealGrid,
    ygrid: RealGrid,
) -> PlaneField:
    """Coherent-state transform with an arbitrary sampled mother state.

    Same kernel as :func:`fsb_transform` but the shifted window values come
    from band-limited interpolation of ``f`` instead of a closed form.
    """
    q = v.grid.points
    base = v.values * v.grid.trapezoid_weights()
    kernel_x = np.exp(1j * TWO_PI * np.outer(xgrid.points, q))
    cols = np.empty((ygrid.n, v.grid.n), dtype=np.complex128)
    for j, y in enumerate(ygrid.points):
        cols[j] = np.conj(fourier_shift(f, p.hbar * y).values)
    out = kernel_x @ (base[None, :] * cols).T
    phase = np.exp(1j * math.pi * p.hbar * np.outer(xgrid.points, ygrid.points))
    return PlaneField(xgrid, ygrid, phase * out, meta={"transform": "fsb-generic"})


def cr_zeroth_coefficient(F: PlaneField, p: PlanckParams) -> np.ndarray:
    X, Y = F.meshes()
    return 0.5 * p.hbar * (TWO_PI * X + 1j * p.hbar * p.c * Y)


def cr_operator(F: PlaneField, p: PlanckParams) -> PlaneField:
    """First-order operator annihilating every transform image.

    Returns (hbar/2)(2*pi*x + i*hbar*c*y) F + (hbar*c / 2*pi) dF/dx + i dF/dy,
    with both partials by 4th-order finite differences.  At hbar=1, c=2*pi
    this is pi*z*F + 2*d/dzbar F; its kernel is exactly the fields whose
    weighted image exp(pi*|z|^2/2)*F is holomorphic.
    """
    dFdx = fd_partial_2d(F, "x", 4)
    dFdy = fd_partial_2d(F, "y", 4)
    vals = (
        cr_zeroth_coefficient(F, p) * F.values
        + (p.hbar * p.c / TWO_PI) * dFdx.values
        + 1j * dFdy.values
    )
    return F.with_values(vals, edge_margin=2)


def cr_residual(F: PlaneField, p: PlanckParams, margin: int = 2) -> float:
    """Relative size of cr_operator(F) against the zeroth-order term scale."""
    R = cr_operator(F, p)
    scale = PlaneField(F.xgrid, F.ygrid, cr_zeroth_coefficient(F, p) * F.values)
    rn = float(np.linalg.norm(interior(R.values, margin)))
    fn = float(np.linalg.norm(interior(F.values, margin)))
    sn = float(np.linalg.norm(interior(scale.values, margin)))
    denom = max(sn, fn / max(F.xgrid.hi - F.xgrid.lo, 1.0))
    if denom == 0.0:
        return float("inf") if rn > 0 else 0.0
    return rn / denom


def weighted_image(F: PlaneField) -> PlaneField:
    """Gaussian-weight removal V(x,y) = exp(pi*(x^2+y^2)/2) * F(x,y).

    Intended for hbar=1, c=2*pi fields; the grid radius is capped so the
    weight stays below 1e300.
    """
    X, Y = F.meshes()
    r2max = float(np.max(X * X) + np.max(Y * Y))
    if 0.5 * math.pi * r2max > 690.0:
        raise PreconditionError(
            f"grid radius too large for the weight (pi*r^2/2 = {0.5 * math.pi * r2max:.1f})"
        )
    return F.with_values(np.exp(0.5 * math.pi * (X * X + Y * Y)) * F.values)


def dz(F: PlaneField) -> PlaneField:
    """Holomorphic derivative (dF/dx - i dF/dy) / 2, 4th-order stencils."""
    vals = 0.5 * (fd_partial_2d(F, "x", 4).values - 1j * fd_partial_2d(F, "y", 4).values)
    return F.with_values(vals, edge_margin=2)


def dzbar(F: PlaneField) -> PlaneField:
    """Anti-holomorphic derivative (dF/dx + i dF/dy) / 2, 4th-order stencils."""
    vals = 0.5 * (fd_partial_2d(F, "x", 4).values + 1j * fd_partial_2d(F, "y", 4).values)
    return F.with_values(vals, edge_margin=2)


def holomorphy_residual(V: PlaneField, margin: int = 2) -> float:
    """||dV/dzbar|| relative to the holomorphic variation ||dV/dz||.

    For nearly constant V (where both derivatives vanish) the denominator
    falls back to ||V|| divided by the domain width, keeping the ratio finite
    and scale-free.
    """
    num = float(np.linalg.norm(interior(dzbar(V).values, margin)))
    den = float(np.linalg.norm(interior(dz(V).values, margin)))
    vn = float(np.linalg.norm(interior(V.values, margin)))
    den = max(den, vn / max(V.xgrid.hi - V.xgrid.lo, 1.0))
    if den == 0.0:
        return float("inf") if num > 0 else 0.0
    return num / den


def check_signal_decay(v: GridFunction1D, tol: float = 1e-6) -> None:
    peak = float(np.max(np.abs(v.values)))
    if peak == 0.0:
        return
    edge = max(abs(v.values[0]), abs(v.values[-1]))
    if edge > tol * peak:
        raise PreconditionError(
            f"signal does not decay at the grid ends (edge/max = {edge / peak:.3g}, tol {tol:g})"
        )
