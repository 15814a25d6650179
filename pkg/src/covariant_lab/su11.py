"""SU(1,1): circle states, the mock discrete representation, and disk images.

The group acts unitarily on functions on the unit circle by Moebius
substitution with a conformal cocycle.  Its derived generators act exactly on
Fourier coefficients (z shifts the mode index up by one, d/dz multiplies by
the index and shifts down), so all generator algebra here is exact to
roundoff rather than discretization error.

Circle signals map into the open unit disk through a Cauchy-kernel transform;
non-negative modes e^{i n theta} land on w^n / sqrt(1 - |w|^2) and the
weighted image sqrt(1 - |w|^2) * F is holomorphic.  The conjugated kernel
picks out strictly negative modes and produces anti-holomorphic images.  The
first-order operator

    -w/2 + (1 - |w|^2) d/dwbar

annihilates exactly the images of the direct transform; the ell_* operators
below are its two generator components on the same induced picture.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import (
    GeometryError,
    NearPoleError,
    SpectrumOverflowError,
    ZeroStateError,
)
from .uncertainty import Observable, UncertaintyReport, uncertainty_report

logger = logging.getLogger(__name__)

DEFAULT_CIRCLE_N = 256

# su(1,1) basis in the defining 2x2 representation.
LIE_A = 0.5 * np.array([[0.0, -1j], [1j, 0.0]])
LIE_B = 0.5 * np.array([[0.0, 1.0], [1.0, 0.0]])
LIE_Z = np.array([[1j, 0.0], [0.0, -1j]])

_DET_TOL = 1e-12


@dataclass(frozen=True)
class SU11Element:
    """Matrix [[alpha, beta], [conj(beta), conj(alpha)]] with unit determinant."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        abs2 = abs(self.alpha) ** 2
        drift = abs(abs2 - abs(self.beta) ** 2 - 1.0)
        # tolerance scales with |alpha|^2: the constraint is a difference of
        # two large squares for far-from-identity elements
        if drift > _DET_TOL * max(1.0, abs2):
            raise ValueError(f"determinant constraint violated by {drift:.3e}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.alpha, self.beta], [np.conj(self.beta), np.conj(self.alpha)]]
        )


SU11_IDENTITY = SU11Element(1.0 + 0.0j, 0.0j)


def su11_mul(g: SU11Element, h: SU11Element) -> SU11Element:
    """Matrix product, renormalized to the constraint surface if it drifts."""
    alpha = g.alpha * h.alpha + g.beta * np.conj(h.beta)
    beta = g.alpha * h.beta + g.beta * np.conj(h.alpha)
    drift = abs(alpha) ** 2 - abs(beta) ** 2 - 1.0
    if abs(drift) > 0.25 * _DET_TOL * max(1.0, abs(alpha) ** 2):
        scale = 1.0 / math.sqrt(1.0 + drift)
        logger.debug("renormalizing SU(1,1) product, drift %.3e", drift)
        alpha *= scale
        beta *= scale
    return SU11Element(complex(alpha), complex(beta))


def su11_inv(g: SU11Element) -> SU11Element:
    return SU11Element(complex(np.conj(g.alpha)), complex(-g.beta))


def exp_A(t: float) -> SU11Element:
    return SU11Element(math.cosh(t / 2), -1j * math.sinh(t / 2))


def exp_B(t: float) -> SU11Element:
    return SU11Element(math.cosh(t / 2), math.sinh(t / 2))


def exp_Z(t: float) -> SU11Element:
    return SU11Element(complex(math.cos(t), math.sin(t)), 0.0j)


def one_parameter(which: str, t: float) -> SU11Element:
    try:
        return {"A": exp_A, "B": exp_B, "Z": exp_Z}[which](t)
    except KeyError:
        raise ValueError(f"unknown generator {which!r}") from None


def random_element(rng: np.random.Generator, scale: float = 0.4) -> SU11Element:
    a, b, c = rng.uniform(-scale, scale, size=3)
    return su11_mul(su11_mul(exp_A(a), exp_B(b)), exp_Z(c))


def su11_commutators_check() -> dict:
    """Verify [Z,A] = 2B, [Z,B] = -2A, [A,B] = -Z/2 in exact matrix arithmetic."""

    def comm(x, y):
        return x @ y - y @ x

    results = {
        "[Z,A]=2B": bool(np.array_equal(comm(LIE_Z, LIE_A), 2.0 * LIE_B)),
        "[Z,B]=-2A": bool(np.array_equal(comm(LIE_Z, LIE_B), -2.0 * LIE_A)),
        "[A,B]=-Z/2": bool(np.array_equal(comm(LIE_A, LIE_B), -0.5 * LIE_Z)),
        "[A,A]=0": bool(np.array_equal(comm(LIE_A, LIE_A), np.zeros((2, 2)))),
    }
    results["all"] = all(results.values())
    return results


# --------------------------------------------------------------------------
# Circle states
# --------------------------------------------------------------------------


class CircleFunction:
    """Complex function on the unit circle, sampled at theta_j = 2*pi*j/N.

    N must be a power of two.  The dual Fourier view (coefficients of e^{i n
    theta}, n in [-N/2, N/2)) is cached; samples and coefficients round-trip
    exactly and the normalized-measure norm satisfies Parseval.
    """

    def __init__(self, samples) -> None:
        arr = np.array(samples, dtype=np.complex128)
        n = arr.shape[0]
        if arr.ndim != 1 or n < 8 or (n & (n - 1)) != 0:
            raise ValueError(f"need a power-of-two sample count >= 8, got {arr.shape}")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("samples must be finite")
        arr.setflags(write=False)
        self.samples = arr
        self.n = n

    @cached_property
    def coeffs(self) -> np.ndarray:
        c = np.fft.fft(self.samples) / self.n
        c.setflags(write=False)
        return c

    @cached_property
    def modes(self) -> np.ndarray:
        return (np.fft.fftfreq(self.n) * self.n).astype(int)

    @property
    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n) / self.n

    @classmethod
    def from_coeffs(cls, coeffs) -> "CircleFunction":
        c = np.asarray(coeffs, dtype=np.complex128)
        return cls(np.fft.ifft(c) * c.shape[0])

    @classmethod
    def from_modes(cls, mode_map: dict[int, complex], n: int = DEFAULT_CIRCLE_N) -> "CircleFunction":
        c = np.zeros(n, dtype=np.complex128)
        for mode, value in mode_map.items():
            if not -n // 2 <= mode < n // 2:
                raise SpectrumOverflowError(f"mode {mode} outside the resolved band")
            c[mode % n] = value
        return cls.from_coeffs(c)

    def evaluate_at(self, angles: np.ndarray) -> np.ndarray:
        """Band-limited evaluation sum_n c_n e^{i n angle} at arbitrary angles."""
        nz = np.flatnonzero(np.abs(self.coeffs) > 0.0)  # skip exact-zero modes
        if nz.size == 0:
            return np.zeros(np.shape(angles), dtype=np.complex128)
        return np.exp(1j * np.outer(angles, self.modes[nz])) @ self.coeffs[nz]

    def resample(self, n: int) -> "CircleFunction":
        if n < self.n:
            raise ValueError("resample only upsamples")
        if n == self.n:
            return self
        c = np.zeros(n, dtype=np.complex128)
        half = self.n // 2
        c[:half] = self.coeffs[:half]
        c[n - half :] = self.coeffs[half:]
        return CircleFunction.from_coeffs(c)

    # -- algebra used by the uncertainty machinery --------------------------

    def inner(self, other: "CircleFunction") -> complex:
        if self.n != other.n:
            raise ValueError("sample counts differ")
        return complex(np.mean(self.samples * np.conj(other.samples)))

    def norm(self) -> float:
        return float(np.sqrt(np.mean(np.abs(self.samples) ** 2)))

    def normalized(self) -> "CircleFunction":
        nrm = self.norm()
        if nrm == 0.0:
            raise ZeroStateError("cannot normalize the zero circle state")
        return CircleFunction(self.samples / nrm)

    def __add__(self, other: "CircleFunction") -> "CircleFunction":
        return CircleFunction(self.samples + other.samples)

    def __sub__(self, other: "CircleFunction") -> "CircleFunction":
        return CircleFunction(self.samples - other.samples)

    def __mul__(self, scalar: complex) -> "CircleFunction":
        return CircleFunction(self.samples * scalar)

    __rmul__ = __mul__


def f_plus(n: int = DEFAULT_CIRCLE_N) -> CircleFunction:
    return CircleFunction.from_modes({0: 1.0}, n)


def f_minus(n: int = DEFAULT_CIRCLE_N) -> CircleFunction:
    return CircleFunction.from_modes({-1: 1.0}, n)


def circle_mode(mode: int, n: int = DEFAULT_CIRCLE_N) -> CircleFunction:
    return CircleFunction.from_modes({mode: 1.0}, n)


def circle_signal_battery(
    count: int = 6, n: int = DEFAULT_CIRCLE_N, max_mode: int = 32, seed: int = 77
) -> list[CircleFunction]:
    rng = np.random.default_rng(seed)
    out = [f_plus(n), circle_mode(1, n), circle_mode(3, n)]
    while len(out) < count:
        c = np.zeros(n, dtype=np.complex128)
        modes = np.arange(-max_mode, max_mode + 1)
        vals = (rng.standard_normal(modes.size) + 1j * rng.standard_normal(modes.size))
        vals *= np.exp(-np.abs(modes) / 8.0)
        for m, val in zip(modes, vals):
            c[m % n] = val
        out.append(CircleFunction.from_coeffs(c))
    return out[:count]


def mock_rep_apply(g: SU11Element, f: CircleFunction) -> CircleFunction:
    """Unitary Moebius action on circle samples.

    With (alpha, beta) read from the inverse element, returns

        z -> f((alpha z + beta) / (conj(beta) z + conj(alpha)))
                 / (conj(beta) z + conj(alpha)),

    evaluated at the sample points via band-limited interpolation of f.
    """
    ginv = su11_inv(g)
    alpha, beta = ginv.alpha, ginv.beta
    z = np.exp(1j * f.thetas)
    denom = np.conj(beta) * z + np.conj(alpha)
    if float(np.min(np.abs(denom))) < 1e-8:
        raise NearPoleError("Moebius denominator nearly vanishes on the circle")
    w = (alpha * z + beta) / denom
    angles = np.angle(w)
    return CircleFunction(f.evaluate_at(angles) / denom)


def rep_values_at(g: SU11Element, f: CircleFunction, angles: np.ndarray) -> np.ndarray:
    """Values of the represented state at arbitrary circle angles (no aliasing)."""
    ginv = su11_inv(g)
    alpha, beta = ginv.alpha, ginv.beta
    z = np.exp(1j * angles)
    denom = np.conj(beta) * z + np.conj(alpha)
    if float(np.min(np.abs(denom))) < 1e-8:
        raise NearPoleError("Moebius denominator nearly vanishes on the circle")
    w = (alpha * z + beta) / denom
    return f.evaluate_at(np.angle(w)) / denom


def circle_pair(
    v: CircleFunction, g: SU11Element, f: CircleFunction, quad_n: int = 2048
) -> complex:
    """<v, pi(g) f> over the normalized circle measure, with oversampled quadrature.

    The represented state is smooth but not band-limited (the cocycle has an
    infinite mode tail), so the quadrature grid is refined until aliasing is
    negligible; v itself is upsampled exactly.
    """
    nq = max(quad_n, v.n)
    vq = v.resample(nq)
    pf = rep_values_at(g, f, vq.thetas)
    return complex(np.mean(vq.samples * np.conj(pf)))


# --------------------------------------------------------------------------
# Derived generators: exact action on Fourier coefficients
# --------------------------------------------------------------------------

_GENERATORS = ("A", "B", "Z", "B_plus_iA", "B_minus_iA")


def _mode_coefficients(which: str, n: np.ndarray):
    """(up, down, diag): action c_n -> up_n c_n at n+1, down_n c_n at n-1, diag_n c_n."""
    zero = np.zeros_like(n, dtype=np.complex128)
    if which == "A":
        return 0.5j * (n + 1), 0.5j * n, zero
    if which == "B":
        return 0.5 * (n + 1) + 0j, -0.5 * n + 0j, zero
    if which == "Z":
        return zero, zero, -1j * (1 + 2 * n)
    if which == "B_plus_iA":  # equals -d/dz
        return zero, -n + 0j, zero
    if which == "B_minus_iA":  # equals z + z^2 d/dz
        return (n + 1) + 0j, zero, zero
    raise ValueError(f"unknown generator {which!r}; pick one of {_GENERATORS}")


def _check_band_limited(f: CircleFunction, tol: float = 1e-10) -> None:
    c = np.abs(f.coeffs)
    peak = float(np.max(c))
    if peak == 0.0:
        return
    cutoff = (3 * (f.n // 2)) // 4
    top = c[np.abs(f.modes) >= cutoff]
    if top.size and float(np.max(top)) > tol * peak:
        raise SpectrumOverflowError(
            "state is not band-limited: top quarter of the spectrum carries "
            f"{float(np.max(top)) / peak:.3e} of the peak"
        )


def derived_rep_apply(which: str, f: CircleFunction, tol: float = 1e-10) -> CircleFunction:
    """Exact action of a derived generator on the Fourier coefficients.

    pi_A = (i/2)(z + (z^2+1) d/dz), pi_B = (1/2)(z + (z^2-1) d/dz),
    pi_Z = -i - 2 i z d/dz; the two ladder combinations reduce to -d/dz and
    z + z^2 d/dz.  Raises :class:`SpectrumOverflowError` when a mode shift
    would push non-negligible content outside the resolved band.
    """
    _check_band_limited(f, tol)
    c = f.coeffs
    n = f.modes
    up, down, diag = _mode_coefficients(which, n)
    out = diag * c
    peak = float(np.max(np.abs(c))) or 1.0

    up_c = up * c
    top_idx = int(np.argmax(n))  # n = N/2 - 1 has no slot above it
    if abs(up_c[top_idx]) > tol * peak:
        raise SpectrumOverflowError("mode shift exceeds the resolved band (top)")
    shifted_up = np.zeros_like(c)
    keep = n < np.max(n)
    shifted_up[((n + 1) % f.n)[keep]] = up_c[keep]
    out = out + shifted_up

    down_c = down * c
    bot_idx = int(np.argmin(n))
    if abs(down_c[bot_idx]) > tol * peak:
        raise SpectrumOverflowError("mode shift exceeds the resolved band (bottom)")
    shifted_down = np.zeros_like(c)
    keep = n > np.min(n)
    shifted_down[((n - 1) % f.n)[keep]] = down_c[keep]
    out = out + shifted_down

    return CircleFunction.from_coeffs(out)


def derived_rep_matrix(which: str, n_max: int) -> np.ndarray:
    """Dense matrix of a derived generator on the modes -n_max..n_max.

    Rectangular: columns span the band, rows span the band extended by one
    mode on each side, so edge shifts land in real rows instead of being
    silently truncated (which would fabricate null vectors).
    """
    modes = np.arange(-n_max, n_max + 1)
    size = modes.size
    up, down, diag = _mode_coefficients(which, modes)
    m = np.zeros((size + 2, size), dtype=np.complex128)
    rows = np.arange(1, size + 1)  # column j (mode modes[j]) sits on row j+1
    m[rows, np.arange(size)] = diag
    m[rows + 1, np.arange(size)] += up
    m[rows - 1, np.arange(size)] += down
    return m


def _mode_state_builder(n_max: int, vec: np.ndarray) -> CircleFunction:
    modes = range(-n_max, n_max + 1)
    return CircleFunction.from_modes(dict(zip(modes, vec)))


def observable_generator(which: str) -> Observable:
    """Derived generator packaged for the uncertainty machinery."""
    return Observable(
        apply=lambda f: derived_rep_apply(which, f),
        label=f"pi_{which}",
        hermiticity="unknown",
        matrix=lambda n_max: derived_rep_matrix(which, int(n_max)),
        state_builder=lambda n_max, vec: _mode_state_builder(int(n_max), vec),
    )


# --------------------------------------------------------------------------
# Disk geometry and the Cauchy-kernel transform
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DiskGeometry:
    """Polar grid inside the unit disk: radii in (0, rho_max], uniform angles."""

    rho: np.ndarray
    theta: np.ndarray
    rho_max: float

    def __post_init__(self) -> None:
        if not (0.0 < self.rho_max < 1.0):
            raise GeometryError(f"need 0 < rho_max < 1, got {self.rho_max}")
        rho = np.array(self.rho, dtype=float)
        theta = np.array(self.theta, dtype=float)
        if np.any(rho <= 0.0) or np.any(rho > self.rho_max):
            raise GeometryError("radii must lie in (0, rho_max]")
        if np.any(np.diff(rho) <= 0.0):
            raise GeometryError("radii must be strictly increasing")
        rho.setflags(write=False)
        theta.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "theta", theta)

    def w_points(self) -> np.ndarray:
        return self.rho[:, None] * np.exp(1j * self.theta[None, :])


def default_disk_geometry(
    n_rho: int = 48, n_theta: int = 256, rho_max: float = 0.95
) -> DiskGeometry:
    if not (0.0 < rho_max < 1.0):
        raise GeometryError(f"need 0 < rho_max < 1, got {rho_max}")
    # Chebyshev-roots spacing on [0, rho_max]: clusters near the rim where the
    # conformal factor varies fastest, and avoids both rho = 0 and rho = rho_max.
    k = np.arange(n_rho)
    x = np.cos((2 * k + 1) * np.pi / (2 * n_rho))
    rho = 0.5 * rho_max * (1.0 + x[::-1])
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    return DiskGeometry(rho, theta, rho_max)


@dataclass(frozen=True, eq=False)
class DiskField:
    """Complex field sampled on a polar disk grid; values[i, j] = F(rho_i, theta_j)."""

    geometry: DiskGeometry
    values: np.ndarray
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.complex128)
        expected = (self.geometry.rho.size, self.geometry.theta.size)
        if arr.shape != expected:
            raise ValueError(f"expected shape {expected}, got {arr.shape}")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("disk field values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def with_values(self, values: np.ndarray, **meta) -> "DiskField":
        merged = dict(self.meta)
        merged.update(meta)
        return replace(self, values=values, meta=merged)


def _conformal_factor(geom: DiskGeometry) -> np.ndarray:
    return 1.0 / np.sqrt(1.0 - geom.rho[:, None] ** 2)


def hardy_transform(
    v: CircleFunction,
    geom: DiskGeometry,
    method: str = "fourier",
    quad_n: int = 2048,
) -> DiskField:
    """Cauchy-kernel transform of a circle signal into the disk.

    F(w) = (2*pi*sqrt(1-|w|^2))^{-1} * integral v(e^{i theta}) dtheta
                                              / (1 - w e^{-i theta}),

    i.e. mode n >= 0 maps to w^n / sqrt(1-|w|^2) and negative modes map to
    zero.  ``method="fourier"`` sums the geometric series over modes (exact);
    ``method="quadrature"`` integrates the kernel on an oversampled circle
    grid.  Both paths agree to ~1e-12 for band-limited input.
    """
    fac = _conformal_factor(geom)
    if method == "fourier":
        half = v.n // 2
        npos = np.arange(half)
        cpos = v.coeffs[:half]
        powers = geom.rho[:, None] ** npos[None, :]
        phases = np.exp(1j * np.outer(npos, geom.theta))
        vals = (powers * cpos[None, :]) @ phases
    elif method == "quadrature":
        vq = v.resample(max(quad_n, v.n))
        einv = np.exp(-1j * vq.thetas)
        vals = np.empty((geom.rho.size, geom.theta.size), dtype=np.complex128)
        for i, r in enumerate(geom.rho):
            w_row = r * np.exp(1j * geom.theta)
            kern = 1.0 / (1.0 - w_row[:, None] * einv[None, :])
            vals[i] = kern @ vq.samples / vq.n
    else:
        raise ValueError(f"unknown method {method!r}")
    return DiskField(geom, fac * vals, meta={"transform": "hardy", "method": method})


def hardy_transform_conjugate(
    v: CircleFunction,
    geom: DiskGeometry,
    method: str = "fourier",
    quad_n: int = 2048,
) -> DiskField:
    """Conjugated-kernel transform: strictly negative modes onto conj(w) powers.

    Mode n <= -1 maps to conj(w)^{-n} / sqrt(1-|w|^2); everything else
    (including the constant mode) maps to zero, so the images are
    anti-holomorphic after the same conformal weighting.
    """
    fac = _conformal_factor(geom)
    if method == "fourier":
        half = v.n // 2
        nneg = np.arange(1, half + 1)
        cneg = v.coeffs[(-nneg) % v.n]
        powers = geom.rho[:, None] ** nneg[None, :]
        phases = np.exp(-1j * np.outer(nneg, geom.theta))
        vals = (powers * cneg[None, :]) @ phases
    elif method == "quadrature":
        vq = v.resample(max(quad_n, v.n))
        eplus = np.exp(1j * vq.thetas)
        vals = np.empty((geom.rho.size, geom.theta.size), dtype=np.complex128)
        for i, r in enumerate(geom.rho):
            wbar_row = r * np.exp(-1j * geom.theta)
            x = wbar_row[:, None] * eplus[None, :]
            kern = x / (1.0 - x)
            vals[i] = kern @ vq.samples / vq.n
    else:
        raise ValueError(f"unknown method {method!r}")
    return DiskField(
        geom, fac * vals, meta={"transform": "hardy-conjugate", "method": method}
    )


# --------------------------------------------------------------------------
# Disk calculus
# --------------------------------------------------------------------------


def barycentric_diff_matrix(nodes: np.ndarray) -> np.ndarray:
    """Polynomial differentiation matrix on arbitrary distinct nodes."""
    t = np.asarray(nodes, dtype=float)
    m = t.size
    scale = 4.0 / (t.max() - t.min())  # rescale products to avoid under/overflow
    diff = (t[:, None] - t[None, :]) * scale
    np.fill_diagonal(diff, 1.0)
    w = 1.0 / np.prod(diff, axis=1)
    d = np.empty((m, m))
    tt = t[:, None] - t[None, :]
    np.fill_diagonal(tt, 1.0)
    d[:] = (w[None, :] / w[:, None]) / tt
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -np.sum(d, axis=1))
    return d


def _theta_derivative(geom: DiskGeometry, values: np.ndarray) -> np.ndarray:
    nt = geom.theta.size
    modes = np.fft.fftfreq(nt) * nt
    return np.fft.ifft(1j * modes[None, :] * np.fft.fft(values, axis=1), axis=1)


def _rho_derivative(geom: DiskGeometry, values: np.ndarray) -> np.ndarray:
    return barycentric_diff_matrix(geom.rho) @ values


def disk_dw(F: DiskField) -> DiskField:
    """Holomorphic derivative dF/dw on the polar grid."""
    geom = F.geometry
    dr = _rho_derivative(geom, F.values)
    dt = _theta_derivative(geom, F.values)
    phase = np.exp(-1j * geom.theta)[None, :]
    vals = 0.5 * phase * (dr - 1j * dt / geom.rho[:, None])
    return F.with_values(vals)


def disk_dwbar(F: DiskField) -> DiskField:
    """Anti-holomorphic derivative dF/dwbar on the polar grid."""
    geom = F.geometry
    dr = _rho_derivative(geom, F.values)
    dt = _theta_derivative(geom, F.values)
    phase = np.exp(1j * geom.theta)[None, :]
    vals = 0.5 * phase * (dr + 1j * dt / geom.rho[:, None])
    return F.with_values(vals)


def disk_annihilator(F: DiskField) -> DiskField:
    """(-w/2 + (1 - |w|^2) d/dwbar) F: kills direct-transform images exactly."""
    geom = F.geometry
    w = geom.w_points()
    one_m = 1.0 - (geom.rho**2)[:, None]
    vals = -0.5 * w * F.values + one_m * disk_dwbar(F).values
    return F.with_values(vals)


def ell_apply(which: str, F: DiskField) -> DiskField:
    """Right-derived generator on induced disk images (base-character picture).

    ell_B - i * ell_A reproduces the annihilator -w/2 + (1-|w|^2) d/dwbar; the
    coefficients below follow from differentiating the coset decomposition of
    s(w) * exp(t V) at t = 0 and conjugating by the conformal weight.
    """
    geom = F.geometry
    w = geom.w_points()
    one_m = 1.0 - (geom.rho**2)[:, None]
    if which == "A":
        zeroth = 0.5j * np.real(w) + np.imag(w)
        dw_c = -0.5j * one_m
        dwb_c = 0.5j * one_m
    elif which == "B":
        zeroth = 0.5j * np.imag(w) - np.real(w)
        dw_c = 0.5 * one_m
        dwb_c = 0.5 * one_m
    elif which == "Z":
        return F.with_values(1j * F.values)
    else:
        raise ValueError(f"unknown generator {which!r}")
    vals = (
        zeroth * F.values
        + dw_c * disk_dw(F).values
        + dwb_c * disk_dwbar(F).values
    )
    return F.with_values(vals)


def weighted_disk_image(F: DiskField) -> DiskField:
    """Conformal weighting V(w) = sqrt(1 - |w|^2) * F(w)."""
    geom = F.geometry
    fac = np.sqrt(1.0 - (geom.rho**2)[:, None])
    return F.with_values(fac * F.values)


def disk_relative_residual(
    R: DiskField, F: DiskField, rho_cut: float = 0.9
) -> float:
    """||R|| / scale over rho <= rho_cut; scale ~ |w/2| * ||F|| (floor ||F||/4)."""
    geom = R.geometry
    mask = geom.rho <= rho_cut
    rn = float(np.linalg.norm(R.values[mask]))
    fv = F.values[mask]
    half_w = 0.5 * geom.rho[mask][:, None] * np.ones_like(fv.real)
    sn = float(np.linalg.norm(half_w * np.abs(fv)))
    fn = float(np.linalg.norm(fv))
    denom = max(sn, 0.25 * fn)
    if denom == 0.0:
        return float("inf") if rn > 0 else 0.0
    return rn / denom


def disk_holomorphy_residual(V: DiskField, rho_cut: float = 0.9) -> float:
    """||dV/dwbar|| relative to ||dV/dw|| over rho <= rho_cut (floor ||V||)."""
    geom = V.geometry
    mask = geom.rho <= rho_cut
    num = float(np.linalg.norm(disk_dwbar(V).values[mask]))
    den = float(np.linalg.norm(disk_dw(V).values[mask]))
    vn = float(np.linalg.norm(V.values[mask]))
    den = max(den, vn)
    if den == 0.0:
        return float("inf") if num > 0 else 0.0
    return num / den


def disk_antiholomorphy_residual(V: DiskField, rho_cut: float = 0.9) -> float:
    """||dV/dw|| relative to ||dV/dwbar|| over rho <= rho_cut (floor ||V||)."""
    geom = V.geometry
    mask = geom.rho <= rho_cut
    num = float(np.linalg.norm(disk_dw(V).values[mask]))
    den = float(np.linalg.norm(disk_dwbar(V).values[mask]))
    vn = float(np.linalg.norm(V.values[mask]))
    den = max(den, vn)
    if den == 0.0:
        return float("inf") if num > 0 else 0.0
    return num / den


# --------------------------------------------------------------------------
# Section of the disk into the group, and the base-state report
# --------------------------------------------------------------------------


def section_element(w: complex) -> SU11Element:
    """Coset representative s(w) = (1-|w|^2)^{-1/2} [[1, w], [wbar, 1]]."""
    r2 = abs(w) ** 2
    if r2 >= 1.0:
        raise GeometryError(f"|w| = {math.sqrt(r2):.4f} is not inside the disk")
    fac = 1.0 / math.sqrt(1.0 - r2)
    return SU11Element(fac + 0.0j, fac * w)


def coset_point(g: SU11Element) -> complex:
    """Disk point of the coset g K: w = beta / conj(alpha)."""
    return complex(g.beta / np.conj(g.alpha))


@dataclass(frozen=True)
class BaseStateDispersionReport:
    """Uncertainty report for (pi_A, pi_B) on the constant circle state.

    ``eigen_products`` lists the dispersion products on the rotation
    eigenstates z^n for n = 0..8; the constant state (n = 0) attains the
    minimum and saturates the commutator bound.
    """

    report: UncertaintyReport
    eigen_products: tuple[float, ...]
    minimizer_mode: int
    notes: tuple[str, ...]

    def as_dict(self) -> dict:
        return {
            "report": self.report.as_dict(),
            "eigen_products": list(self.eigen_products),
            "minimizer_mode": self.minimizer_mode,
            "notes": list(self.notes),
        }


F_PLUS_NOTES = (
    "dispersion product on the constant state computes to 0.25 and equals the "
    "commutator bound exactly (gap 0); a factor-2 larger normalization of this "
    "constant is sometimes quoted",
    "the compact rotation subgroup acts on the constant state with eigenvalue "
    "exp(-i t) under the substitution formula used here",
)


def f_plus_dispersion_report(n: int = DEFAULT_CIRCLE_N) -> BaseStateDispersionReport:
    """Exact dispersions of pi_A, pi_B on the constant state, plus the mode sweep."""
    A = observable_generator("A")
    B = observable_generator("B")
    base = uncertainty_report(A, B, f_plus(n), notes=F_PLUS_NOTES)
    products = []
    for mode in range(9):
        state = circle_mode(mode, n)
        rep = uncertainty_report(A, B, state)
        products.append(rep.product)
    minimizer = int(np.argmin(products))
    return BaseStateDispersionReport(
        report=base,
        eigen_products=tuple(products),
        minimizer_mode=minimizer,
        notes=F_PLUS_NOTES,
    )
