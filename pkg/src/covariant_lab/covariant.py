"""Generic induced wavelet-transform engine over a representation handle.

A :class:`RepresentationHandle` bundles the group operations, the unitary
action on states, a section of the homogeneous space into the group, and the
group-specific fast paths (induced transform, right-derived operators on
images, signal battery).  The functions in this module are group-agnostic:
they realize the transform v -> <v, pi(s(x)) f>, the left-shift intertwining
and right-shift covariance identities, and integrated representations of
kernels on the homogeneous space.

Kernel kinds are symbolic.  ``delta_derivative_x`` / ``delta_derivative_y``
mean the derivative-of-delta at the base point along the two chart directions
(for the Heisenberg chart these generate multiplication and differentiation on
states; for SU(1,1) they are the A- and B-generators), ``delta_derivative_z``
is the compact direction of SU(1,1), and ``sampled`` kernels integrate the
section against explicit values and quadrature weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

import numpy as np

from . import heisenberg as hg
from . import su11 as su
from .errors import CoverageError, DomainOverflowError
from .numerics import PlaneField, RealGrid, fd_partial_2d, inner_product
from .uncertainty import Observable

DELTA_KINDS = ("delta_derivative_x", "delta_derivative_y", "delta_derivative_z")


@dataclass(frozen=True)
class Kernel:
    """Symbolic or sampled kernel on the homogeneous space."""

    kind: str
    points: Optional[Sequence[Any]] = None
    values: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        if self.kind in DELTA_KINDS:
            return
        if self.kind != "sampled":
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.points is None or self.values is None or self.weights is None:
            raise ValueError("sampled kernels need points, values and weights")
        vals = np.asarray(self.values)
        wts = np.asarray(self.weights)
        if not (np.all(np.isfinite(vals.view(float))) and np.all(np.isfinite(wts))):
            raise ValueError("sampled kernel data must be finite")


@dataclass(frozen=True)
class RepresentationHandle:
    """Everything the generic engine needs to know about one group."""

    group: str
    identity: Any
    mul: Callable[[Any, Any], Any]
    inv: Callable[[Any], Any]
    apply: Callable[[Any, Any], Any]  # (element, state) -> state
    section: Callable[[Any], Any]  # chart point -> group element
    project: Callable[[Any], Any]  # group element -> chart point
    pair: Callable[[Any, Any, Any], complex]  # <v, pi(g) f>
    space_points: tuple  # sampled chart points for the checks
    image_weight: Callable[[Any], complex]
    transform: Callable[[Any, Any], Any]  # (v, mother) -> induced field
    state_observable: Callable[[Kernel], Observable]
    right_apply: Callable[[Kernel, Any], Any]  # R(k) on an induced field
    field_scale_residual: Callable[[Any, Any], float]  # ||R|| / scale(F)
    battery: Callable[[], list]
    random_element: Callable[[np.random.Generator], Any]

    def annihilator_residual(
        self, k1: Kernel, k2: Kernel, r: float, image, abar: complex, bbar: complex
    ) -> float:
        D = right_integrated_on_image(k1, k2, r, image, self, abar, bbar)
        return self.field_scale_residual(D, image)


def wavelet_transform(v, f, rep: RepresentationHandle, points=None) -> np.ndarray:
    """Induced transform values x -> weight(x) * <v, pi(s(x)) f> at chart points.

    This is the slow reference path; the per-group fast paths
    (``heisenberg.fsb_transform``, ``su11.hardy_transform``) must agree with it
    to ~1e-10 and are what :attr:`RepresentationHandle.transform` dispatches to.
    """
    pts = rep.space_points if points is None else points
    out = np.empty(len(pts), dtype=np.complex128)
    for i, x in enumerate(pts):
        out[i] = rep.image_weight(x) * rep.pair(v, rep.section(x), f)
    return out


def _checked_max_deviation(pairs_fn, points, min_points: int = 4) -> float:
    devs = []
    dropped = []
    for x in points:
        try:
            lhs, rhs = pairs_fn(x)
        except DomainOverflowError:
            dropped.append(x)
            continue
        devs.append(abs(lhs - rhs))
    if len(devs) < max(min_points, len(points) // 2):
        raise CoverageError(
            f"only {len(devs)} of {len(points)} sample points were evaluable",
            dropped=dropped,
        )
    return max(devs)


def check_left_intertwining(v, f, g, rep: RepresentationHandle, points=None) -> float:
    """Max deviation of W_f(pi(g) v) from the left shift of W_f v.

    Both sides are evaluated by direct quadrature at the sampled section
    points: <pi(g) v, pi(s(x)) f> against <v, pi(g^{-1} s(x)) f>.
    """
    pts = rep.space_points if points is None else points
    gv = rep.apply(g, v)
    ginv = rep.inv(g)

    def sides(x):
        lhs = rep.pair(gv, rep.section(x), f)
        rhs = rep.pair(v, rep.mul(ginv, rep.section(x)), f)
        return lhs, rhs

    return _checked_max_deviation(sides, pts)


def check_right_covariance(v, f, g, rep: RepresentationHandle, points=None) -> float:
    """Max deviation of the right shift of W_f v from W_{pi(g) f} v."""
    pts = rep.space_points if points is None else points
    gf = rep.apply(g, f)

    def sides(x):
        lhs = rep.pair(v, rep.mul(rep.section(x), g), f)
        rhs = rep.pair(v, rep.section(x), gf)
        return lhs, rhs

    return _checked_max_deviation(sides, pts)


def integrated_representation(k: Kernel, f, rep: RepresentationHandle):
    """pi(k) f: closed-form derived operator for delta-derivative kernels,
    quadrature over the section for sampled kernels."""
    if k.kind in DELTA_KINDS:
        return rep.state_observable(k).apply(f)
    acc = None
    for point, value, weight in zip(k.points, np.asarray(k.values), np.asarray(k.weights)):
        term = (complex(value) * float(weight)) * rep.apply(rep.section(point), f)
        acc = term if acc is None else acc + term
    if acc is None:
        raise ValueError("sampled kernel has no points")
    return acc


def right_integrated_on_image(
    k1: Kernel,
    k2: Kernel,
    r: float,
    image,
    rep: RepresentationHandle,
    a_shift: complex = 0.0,
    b_shift: complex = 0.0,
):
    """Right-invariant operator of the pair (k1, k2) applied to an image.

    Computes (R(k1) - conj(a)) F + i r (R(k2) - conj(b)) F.  The conjugation
    of the expectation shifts (and the +i r coupling, against the -i r of the
    state-side operator) comes from the conjugate-linear slot of the pairing:
    R(k) on the image of W_f equals the transform against pi(k) f, so scalars
    cross over conjugated.
    """
    r1 = rep.right_apply(k1, image)
    r2 = rep.right_apply(k2, image)
    vals = (
        r1.values
        - np.conj(a_shift) * image.values
        + 1j * r * (r2.values - np.conj(b_shift) * image.values)
    )
    return image.with_values(vals)


# --------------------------------------------------------------------------
# Heisenberg handle
# --------------------------------------------------------------------------


def _heisenberg_right_apply(k: Kernel, F: PlaneField, p: hg.PlanckParams) -> PlaneField:
    """Right-derived operators on induced plane images.

    Along the chart directions (with the central derivative replaced by its
    character weight 2*pi*i*hbar):

        R_x = d/dx + i*pi*hbar*y,    R_y = d/dy - i*pi*hbar*x.
    """
    X, Y = F.meshes()
    if k.kind == "delta_derivative_x":
        vals = fd_partial_2d(F, "x", 4).values + 1j * math.pi * p.hbar * Y * F.values
    elif k.kind == "delta_derivative_y":
        vals = fd_partial_2d(F, "y", 4).values - 1j * math.pi * p.hbar * X * F.values
    else:
        raise ValueError(f"no right-derived operator for kernel kind {k.kind!r}")
    return F.with_values(vals, edge_margin=2)


def _heisenberg_state_observable(k: Kernel, p: hg.PlanckParams) -> Observable:
    two_pi = 2.0 * math.pi
    if k.kind == "delta_derivative_x":
        # d/dt at 0 of pi(section(t, 0)) is -2*pi*i*q, i.e. 2*pi * op_M.
        return hg.observable_M(scale=two_pi)
    if k.kind == "delta_derivative_y":
        return hg.observable_D(p)
    raise ValueError(f"no state observable for kernel kind {k.kind!r}")


def _plane_scale_residual(R: PlaneField, F: PlaneField, margin: int = 2) -> float:
    from .numerics import interior

    rn = float(np.linalg.norm(interior(R.values, margin)))
    X, Y = F.meshes()
    coeff = np.pi * np.sqrt(X * X + Y * Y)  # first-order coefficient scale
    sn = float(np.linalg.norm(interior(coeff * np.abs(F.values), margin)))
    fn = float(np.linalg.norm(interior(F.values, margin)))
    denom = max(sn, fn)
    if denom == 0.0:
        return float("inf") if rn > 0 else 0.0
    return rn / denom


def heisenberg_handle(
    p: hg.PlanckParams | None = None,
    state_grid: RealGrid | None = None,
    plane_xgrid: RealGrid | None = None,
    plane_ygrid: RealGrid | None = None,
    check_points: Sequence[tuple[float, float]] | None = None,
) -> RepresentationHandle:
    """Handle for the Heisenberg group acting on line states.

    The chart point (x, y) is represented by the group element (0, -x, y);
    with this section the induced transform coincides with
    :func:`heisenberg.fsb_transform` and its images are annihilated by
    :func:`heisenberg.cr_operator`.
    """
    p = p or hg.PlanckParams()
    state_grid = state_grid or hg.default_state_grid()
    if plane_xgrid is None or plane_ygrid is None:
        plane_xgrid = RealGrid(-3.5, 3.5, 169)
        plane_ygrid = RealGrid(-3.5, 3.5, 169)
    if check_points is None:
        axis = np.linspace(-2.0, 2.0, 5)
        check_points = tuple((float(x), float(y)) for x in axis for y in axis)

    def section(point):
        x, y = point
        return hg.HeisenbergElement(0.0, -x, y)

    def project(g):
        return (-g.x, g.y)

    def pair(v, g, f):
        return inner_product(v, hg.schrodinger_apply(g, f, p))

    def transform(v, f):
        return hg.transform_with_mother(v, f, p, plane_xgrid, plane_ygrid)

    def random_el(rng):
        s, x, y = rng.uniform(-0.5, 0.5, size=3)
        return hg.HeisenbergElement(float(s), float(x), float(y))

    return RepresentationHandle(
        group="heisenberg",
        identity=hg.H_IDENTITY,
        mul=hg.h_mul,
        inv=hg.h_inv,
        apply=lambda g, f: hg.schrodinger_apply(g, f, p),
        section=section,
        project=project,
        pair=pair,
        space_points=tuple(check_points),
        image_weight=lambda point: 1.0,
        transform=transform,
        state_observable=lambda k: _heisenberg_state_observable(k, p),
        right_apply=lambda k, F: _heisenberg_right_apply(k, F, p),
        field_scale_residual=_plane_scale_residual,
        battery=lambda: hg.line_signal_battery(state_grid, count=4, seed=11),
        random_element=random_el,
    )


# --------------------------------------------------------------------------
# SU(1,1) handle
# --------------------------------------------------------------------------

_SU11_KERNEL_MAP = {
    "delta_derivative_x": "A",
    "delta_derivative_y": "B",
    "delta_derivative_z": "Z",
}


def su11_handle(
    n_circle: int = su.DEFAULT_CIRCLE_N,
    geometry: su.DiskGeometry | None = None,
    check_points: Sequence[complex] | None = None,
    quad_n: int = 2048,
) -> RepresentationHandle:
    """Handle for SU(1,1) acting on circle states.

    The induced transform carries the conformal weight 1/(1 - |w|^2) relative
    to the raw pairing, matching :func:`su11.hardy_transform`; the image-side
    generators are the ``ell_*`` operators of the base-character picture, so
    the induced fast path requires the constant mother state.
    """
    geometry = geometry or su.default_disk_geometry()
    if check_points is None:
        radii = (0.15, 0.45, 0.7)
        angles = np.linspace(0.0, 2.0 * np.pi, 5, endpoint=False)
        check_points = tuple(
            complex(r * np.cos(a), r * np.sin(a)) for r in radii for a in angles
        )

    def transform(v, f):
        base = su.f_plus(f.n)
        if float(np.max(np.abs(f.coeffs - base.coeffs))) > 1e-12:
            raise NotImplementedError(
                "the induced disk machinery is built on the constant mother state"
            )
        return su.hardy_transform(v, geometry)

    def state_observable(k: Kernel) -> Observable:
        try:
            return su.observable_generator(_SU11_KERNEL_MAP[k.kind])
        except KeyError:
            raise ValueError(f"no state observable for kernel kind {k.kind!r}") from None

    def right_apply(k: Kernel, F):
        try:
            return su.ell_apply(_SU11_KERNEL_MAP[k.kind], F)
        except KeyError:
            raise ValueError(
                f"no right-derived operator for kernel kind {k.kind!r}"
            ) from None

    return RepresentationHandle(
        group="su11",
        identity=su.SU11_IDENTITY,
        mul=su.su11_mul,
        inv=su.su11_inv,
        apply=su.mock_rep_apply,
        section=su.section_element,
        project=su.coset_point,
        pair=lambda v, g, f: su.circle_pair(v, g, f, quad_n),
        space_points=tuple(check_points),
        image_weight=lambda w: 1.0 / (1.0 - abs(w) ** 2),
        transform=transform,
        state_observable=state_observable,
        right_apply=right_apply,
        field_scale_residual=lambda R, F: su.disk_relative_residual(R, F, 0.9),
        battery=lambda: su.circle_signal_battery(count=4, n=n_circle),
        random_element=lambda rng: su.random_element(rng),
    )
