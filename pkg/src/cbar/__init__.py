"""Polynomial approximation in the disc compactification of the plane."""

from .approximation import (
    ApproximationError,
    ApproxReport,
    ConditioningError,
    DDiscontinuityError,
    DegreeCapError,
    HarmonicAngle,
    StarCompact,
    approx_finite_type,
    approx_infinite_type,
    approx_real_segment,
    approx_segment,
    approx_star_compact,
    approx_trig_on_circle,
    approximate,
    sup_d_error,
)
from .classification import (
    ArgTrace,
    FiniteType,
    InfiniteType,
    NotUniformlyCauchy,
    UnderResolvedPath,
    classify_limit,
    continuous_arg,
    is_d_continuous,
)
from .functions import (
    BoundaryTheta,
    FiniteTypeFunction,
    InfiniteTypeFunction,
    evaluate,
    harmonic_conjugate,
    poisson_extend,
    taylor_coeffs,
)
from .geometry import (
    INFINITY,
    CPoint,
    CPointArray,
    Finite,
    Infinite,
    chordal_chi,
    gmap,
    metric_d,
    phi,
    phi_r,
)
from .grids import CircleGrid, DiscGrid, PolarGrid, SegmentGrid
from .polynomials import ChebyshevSeries, Polynomial, TrigPolynomial

__version__ = "0.1.0"
