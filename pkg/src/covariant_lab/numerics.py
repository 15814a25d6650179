"""Shared numerical substrate.

Uniform real grids, trapezoidal quadrature, spectral (FFT) and finite-difference
differentiation, complex field containers and residual norms.

Containers are immutable after construction and every operation is a pure
function of its inputs.  All reductions go through numpy, whose pairwise
summation makes serial and chunked evaluation agree to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from .errors import GridMismatchError, GridTooSmallError, ZeroStateError

DEFAULT_DECAY_TOL = 1e-8


@dataclass(frozen=True)
class RealGrid:
    """Uniform grid of ``n`` points on the closed interval [lo, hi]."""

    lo: float
    hi: float
    n: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError("grid endpoints must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if self.n < 8:
            raise GridTooSmallError(f"need n >= 8, got n={self.n}")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.n, self.spacing)
        w[0] *= 0.5
        w[-1] *= 0.5
        return w


def _as_complex_readonly(values, n: int) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.shape != (n,):
        raise ValueError(f"expected {n} values, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError("values must be finite (no NaN/Inf)")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GridFunction1D:
    """Complex-valued function sampled on a :class:`RealGrid`."""

    grid: RealGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_complex_readonly(self.values, self.grid.n))

    def norm(self) -> float:
        return float(np.sqrt(np.real(inner_product(self, self))))

    def normalized(self) -> "GridFunction1D":
        nrm = self.norm()
        if nrm == 0.0:
            raise ZeroStateError("cannot normalize the zero state")
        return GridFunction1D(self.grid, self.values / nrm)

    def inner(self, other: "GridFunction1D") -> complex:
        return inner_product(self, other)

    def __add__(self, other: "GridFunction1D") -> "GridFunction1D":
        _require_same_grid(self, other)
        return GridFunction1D(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction1D") -> "GridFunction1D":
        _require_same_grid(self, other)
        return GridFunction1D(self.grid, self.values - other.values)

    def __mul__(self, scalar: complex) -> "GridFunction1D":
        return GridFunction1D(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class PlaneField:
    """Complex field on a rectangular (x, y) grid; values[i, j] = F(x_i, y_j)."""

    xgrid: RealGrid
    ygrid: RealGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.complex128)
        if arr.shape != (self.xgrid.n, self.ygrid.n):
            raise ValueError(
                f"expected shape {(self.xgrid.n, self.ygrid.n)}, got {arr.shape}"
            )
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("field values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def with_values(self, values: np.ndarray, **meta) -> "PlaneField":
        merged = dict(self.meta)
        merged.update(meta)
        return replace(self, values=values, meta=merged)

    def meshes(self) -> tuple[np.ndarray, np.ndarray]:
        return (self.xgrid.points[:, None], self.ygrid.points[None, :])


def _require_same_grid(f: GridFunction1D, g: GridFunction1D) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(f"grids differ: {f.grid} vs {g.grid}")


def inner_product(f: GridFunction1D, g: GridFunction1D) -> complex:
    """Trapezoidal approximation of the pairing integral f(q) conj(g(q)) dq.

    Conjugate-linear in the second argument.  Spectrally accurate for smooth
    integrands that decay at the grid ends, and exact for constants.
    """
    _require_same_grid(f, g)
    w = f.grid.trapezoid_weights()
    return complex(np.sum(f.values * np.conj(g.values) * w))


def _endpoints_decay(values: np.ndarray, tol: float) -> bool:
    peak = float(np.max(np.abs(values)))
    if peak == 0.0:
        return True
    return max(abs(values[0]), abs(values[-1])) < tol * peak


def _periodic_wavenumbers(m: int, spacing: float) -> np.ndarray:
    return 2.0 * np.pi * np.fft.fftfreq(m, d=spacing)


def spectral_derivative(
    f: GridFunction1D, decay_tol: float = DEFAULT_DECAY_TOL
) -> GridFunction1D:
    """Derivative df/dq by Fourier differentiation on the periodic extension.

    The grid stores both interval endpoints; the periodic extension identifies
    them, so the FFT runs on the first n-1 samples with period hi-lo.  When the
    decay precondition fails (|endpoint| >= decay_tol * max|f|) the routine
    falls back to 4th-order central differences; the choice is recorded under
    ``meta["derivative_method"]``.
    """
    n = f.grid.n
    if n < 8:
        raise GridTooSmallError(f"need n >= 8 for differentiation, got {n}")
    if not _endpoints_decay(f.values, decay_tol):
        out = _fd_derivative_1d(f.values, f.grid.spacing, order=4)
        return GridFunction1D(f.grid, out, meta={"derivative_method": "fd4"})
    m = n - 1
    k = _periodic_wavenumbers(m, f.grid.spacing)
    mult = 1j * k
    if m % 2 == 0:
        mult[m // 2] = 0.0  # unpaired Nyquist mode carries no derivative information
    head = np.fft.ifft(mult * np.fft.fft(f.values[:m]))
    out = np.concatenate([head, head[:1]])
    return GridFunction1D(f.grid, out, meta={"derivative_method": "spectral"})


def fourier_shift(f: GridFunction1D, delta: float) -> GridFunction1D:
    """Band-limited evaluation of q -> f(q + delta) on the same grid.

    Uses the Fourier shift theorem on the periodic extension; exact for
    band-limited data and spectrally accurate for smooth decaying samples.
    """
    m = f.grid.n - 1
    k = _periodic_wavenumbers(m, f.grid.spacing)
    head = np.fft.ifft(np.exp(1j * k * delta) * np.fft.fft(f.values[:m]))
    out = np.concatenate([head, head[:1]])
    return GridFunction1D(f.grid, out, meta=dict(f.meta))


def spectral_core_matrix(grid: RealGrid) -> np.ndarray:
    """Circulant spectral differentiation matrix on the n-1 periodic samples.

    The grid stores both interval endpoints; identifying them leaves n-1
    independent samples, and this matrix differentiates exactly those.  Dense
    solvers should work on this core to avoid a spurious mode supported on
    the duplicated endpoint.
    """
    m = grid.n - 1
    k = _periodic_wavenumbers(m, grid.spacing)
    mult = 1j * k
    if m % 2 == 0:
        mult[m // 2] = 0.0
    return np.fft.ifft(mult[:, None] * np.fft.fft(np.eye(m), axis=0), axis=0)


def spectral_derivative_matrix(grid: RealGrid) -> np.ndarray:
    """Dense matrix realizing :func:`spectral_derivative` on the decaying branch.

    The last grid point is identified with the first (periodic extension), so
    column n-1 is zero and row n-1 repeats row 0.
    """
    n = grid.n
    m = n - 1
    core = spectral_core_matrix(grid)
    full = np.zeros((n, n), dtype=np.complex128)
    full[:m, :m] = core
    full[m, :m] = core[0]
    return full


# One-sided stencils matching the interior order at the edges.
_EDGE4_ROWS = (
    np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0,
    np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0,
)
_EDGE2_ROW = np.array([-3.0, 4.0, -1.0]) / 2.0


def _fd_derivative_1d(values: np.ndarray, h: float, order: Literal[2, 4]) -> np.ndarray:
    v = values
    n = v.shape[0]
    out = np.empty_like(v)
    if order == 2:
        if n < 3:
            raise GridTooSmallError("2nd-order stencil needs at least 3 points")
        out[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
        out[0] = np.dot(_EDGE2_ROW, v[:3]) / h
        out[-1] = -np.dot(_EDGE2_ROW, v[-3:][::-1]) / h
    elif order == 4:
        if n < 5:
            raise GridTooSmallError("4th-order stencil needs at least 5 points")
        out[2:-2] = (-v[4:] + 8.0 * v[3:-1] - 8.0 * v[1:-3] + v[:-4]) / (12.0 * h)
        out[0] = np.dot(_EDGE4_ROWS[0], v[:5]) / h
        out[1] = np.dot(_EDGE4_ROWS[1], v[:5]) / h
        out[-1] = -np.dot(_EDGE4_ROWS[0], v[-5:][::-1]) / h
        out[-2] = -np.dot(_EDGE4_ROWS[1], v[-5:][::-1]) / h
    else:
        raise ValueError(f"unsupported order {order}")
    return out


def fd_partial_2d(
    F: PlaneField, axis: Literal["x", "y"], order: Literal[2, 4] = 4
) -> PlaneField:
    """Partial derivative of a plane field by central differences.

    One-sided stencils of the same formal order handle the edges; their larger
    error constants are why ``meta["edge_margin"]`` (the stencil half-width) is
    attached for downstream norms to exclude.
    """
    if axis == "x":
        vals = _fd_derivative_1d(F.values, F.xgrid.spacing, order)
    elif axis == "y":
        vals = _fd_derivative_1d(F.values.T, F.ygrid.spacing, order).T
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return F.with_values(vals, edge_margin=order // 2, derivative_axis=axis)


def interior(values: np.ndarray, margin: int) -> np.ndarray:
    if margin < 0:
        raise ValueError("margin must be >= 0")
    if margin == 0:
        return values
    if 2 * margin >= min(values.shape):
        raise GridTooSmallError("margin leaves no interior points")
    return values[margin:-margin, margin:-margin]


def relative_residual_norm(R: PlaneField, V: PlaneField, exclude_margin: int) -> float:
    """||R||_2 / ||V||_2 over interior points; +inf when V vanishes there."""
    if R.xgrid != V.xgrid or R.ygrid != V.ygrid:
        raise GridMismatchError("residual and reference fields live on different grids")
    rn = float(np.linalg.norm(interior(R.values, exclude_margin)))
    vn = float(np.linalg.norm(interior(V.values, exclude_margin)))
    if vn == 0.0:
        return float("inf")
    return rn / vn
