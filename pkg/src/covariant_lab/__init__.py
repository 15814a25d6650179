"""Covariant transforms for the Heisenberg group and SU(1,1).

Numerical laboratory for the link between minimal-uncertainty states and
holomorphy of covariant-transform images: coherent-state (FSB) transforms on
the plane, Cauchy-kernel transforms into the unit disk, dispersion reports,
and the annihilation operators that certify both.
"""

from .errors import (
    AmbiguousKernelError,
    CovariantLabError,
    CoverageError,
    DomainOverflowError,
    GeometryError,
    GridMismatchError,
    GridTooSmallError,
    NearPoleError,
    PreconditionError,
    SignalFormatError,
    SpectrumOverflowError,
    ZeroStateError,
)
from .numerics import (
    GridFunction1D,
    PlaneField,
    RealGrid,
    fd_partial_2d,
    fourier_shift,
    inner_product,
    relative_residual_norm,
    spectral_derivative,
)
from .heisenberg import (
    HeisenbergElement,
    PlanckParams,
    cr_operator,
    cr_residual,
    fsb_transform,
    h_inv,
    h_mul,
    holomorphy_residual,
    op_D,
    op_M,
    schrodinger_apply,
    weighted_image,
)
from .su11 import (
    CircleFunction,
    DiskField,
    DiskGeometry,
    SU11Element,
    derived_rep_apply,
    disk_annihilator,
    f_plus_dispersion_report,
    hardy_transform,
    hardy_transform_conjugate,
    mock_rep_apply,
    su11_commutators_check,
    su11_inv,
    su11_mul,
    weighted_disk_image,
)
from .uncertainty import (
    EquivalenceRecord,
    Observable,
    UncertaintyReport,
    dispersion,
    equivalence_report,
    minimal_state_solve,
    uncertainty_bound,
    uncertainty_report,
)
from .covariant import (
    Kernel,
    RepresentationHandle,
    check_left_intertwining,
    check_right_covariance,
    heisenberg_handle,
    integrated_representation,
    right_integrated_on_image,
    su11_handle,
    wavelet_transform,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
