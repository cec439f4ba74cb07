"""Functions on the closed disc with values in the compactification.

Two kinds of targets are represented:

* :class:`FiniteTypeFunction` wraps a vectorized holomorphic formula that is
  finite inside the disc, together with the boundary nodes where it takes
  an infinite value.
* :class:`InfiniteTypeFunction` is ``inf*exp(i*theta(z))`` where ``theta`` is
  given by a finite Fourier series on the circle and extended harmonically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.fft

from .config import BOUNDARY_TOL, fft_workers
from .geometry import CPoint, CPointArray, Finite, Infinite
from .polynomials import Polynomial

_NODE_HIT = 1e-14


class NonFiniteSampleError(ValueError):
    """A holomorphic evaluator returned inf/nan where it must be finite."""


def _check_in_disc(z: np.ndarray):
    if np.any(np.abs(z) > 1.0 + BOUNDARY_TOL):
        raise ValueError("evaluation point outside the closed unit disc")


@dataclass(frozen=True, eq=False)
class FiniteTypeFunction:
    """Holomorphic on the open disc, continuous into the compactification.

    Parameters
    ----------
    name : str
        Label used in reports.
    func : callable
        Vectorized formula, finite at every point of the closed disc except
        the boundary nodes.
    nodes : tuple of (complex, CPoint)
        Boundary points where the value is infinite, with that value.
    params : dict
        Construction parameters, echoed into reports.
    entire : bool
        The formula is valid on the whole plane, so evaluation is allowed
        outside the disc (used on other compacts).
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    nodes: tuple = ()
    params: dict = field(default_factory=dict)
    entire: bool = False

    @property
    def singular_nodes(self) -> tuple:
        return tuple(z for z, _ in self.nodes)

    def evaluate(self, z) -> CPointArray:
        z = np.asarray(z, dtype=complex)
        if not self.entire:
            _check_in_disc(z)
        with np.errstate(all="ignore"):
            vals = np.asarray(self.func(z), dtype=complex) * np.ones(z.shape)
        inf = np.zeros(z.shape, dtype=bool)
        for node, value in self.nodes:
            hit = np.abs(z - node) <= _NODE_HIT
            if np.any(hit):
                vals = np.where(hit, value.direction, vals)
                inf |= hit
        bad = ~inf & ~np.isfinite(vals)
        if np.any(bad):
            where = z[bad].ravel()[0]
            raise NonFiniteSampleError(f"{self.name}: non-finite value at z={where}")
        return CPointArray(vals, inf)

    def __call__(self, z: complex) -> CPoint:
        return self.evaluate(np.array([z]))[0]


@dataclass(frozen=True, eq=False)
class BoundaryTheta:
    """Real Fourier series ``a0 + sum_m (a_m cos m phi + b_m sin m phi)``.

    ``a`` and ``b`` hold the coefficients for ``m = 1..M``.
    """

    a0: float = 0.0
    a: np.ndarray = field(default_factory=lambda: np.zeros(0))
    b: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        M = max(a.size, b.size)
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a", np.pad(a, (0, M - a.size)))
        object.__setattr__(self, "b", np.pad(b, (0, M - b.size)))

    @property
    def order(self) -> int:
        return int(self.a.size)

    def analytic_polynomial(self) -> Polynomial:
        """``p`` with ``Re p(z)`` the harmonic extension."""
        return Polynomial(np.concatenate([[self.a0], self.a - 1j * self.b]))

    def boundary(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.real(self.analytic_polynomial()(np.exp(1j * phi)))

    @classmethod
    def from_samples(cls, samples, order: int, fejer: bool = True) -> "BoundaryTheta":
        """Fourier data from equispaced samples at ``2*pi*j/n``.

        With ``fejer`` the coefficients carry the Cesaro weights
        ``1 - m/(order+1)``, which keeps the truncation uniformly close to a
        merely continuous boundary function.
        """
        s = np.asarray(samples, dtype=float)
        n = s.size
        if order >= n // 2:
            raise ValueError("need more than 2*order samples")
        c = scipy.fft.rfft(s, workers=fft_workers()) / n
        m = np.arange(1, order + 1)
        w = 1.0 - m / (order + 1.0) if fejer else np.ones(order)
        return cls(c[0].real, 2 * c[1 : order + 1].real * w, -2 * c[1 : order + 1].imag * w)

    @classmethod
    def from_function(cls, theta: Callable, order: int = 64, n_samples: int | None = None,
                      fejer: bool = True) -> "BoundaryTheta":
        """Fourier data of a continuous real function of the boundary angle."""
        n = n_samples or max(8 * order, 512)
        phi = 2 * np.pi * np.arange(n) / n
        return cls.from_samples(theta(phi), order, fejer=fejer)


def poisson_extend(theta: BoundaryTheta, z):
    """Harmonic extension of boundary data into the disc.

    For ``z = r exp(i phi)`` this is ``a0 + sum_m r**m (a_m cos m phi +
    b_m sin m phi)``. Boundary points return the Fourier series itself.
    """
    z = np.asarray(z, dtype=complex)
    _check_in_disc(z)
    out = np.real(theta.analytic_polynomial()(z))
    return float(out) if np.ndim(out) == 0 else out


def harmonic_conjugate(theta: BoundaryTheta) -> Polynomial:
    """Holomorphic ``g`` with ``Im g = poisson_extend(theta)`` and ``Re g(0) = 0``.

    ``g(z) = i a0 + sum_m (b_m + i a_m) z**m``.
    """
    return theta.analytic_polynomial().scaled(1j)


@dataclass(frozen=True, eq=False)
class InfiniteTypeFunction:
    """``f(z) = inf*exp(i*theta(z))`` with harmonic ``theta``."""

    theta: BoundaryTheta
    name: str = "infinite"
    params: dict = field(default_factory=dict)

    def theta_at(self, z):
        return poisson_extend(self.theta, z)

    def evaluate(self, z) -> CPointArray:
        t = np.asarray(self.theta_at(z), dtype=float)
        return CPointArray.from_angles(t)

    def __call__(self, z: complex) -> CPoint:
        return Infinite(float(self.theta_at(complex(z))))

    def conjugate(self) -> Polynomial:
        return harmonic_conjugate(self.theta)


def evaluate(f, z: complex) -> CPoint:
    """Evaluate a target or polynomial at one point of the closed disc."""
    z = complex(z)
    if abs(z) > 1.0 + BOUNDARY_TOL:
        raise ValueError(f"|z| = {abs(z)} exceeds 1")
    if isinstance(f, Polynomial):
        return Finite(f(z))
    if isinstance(f, (FiniteTypeFunction, InfiniteTypeFunction)):
        return f(z)
    raise TypeError(f"cannot evaluate {type(f).__name__}")


# ---------------------------------------------------------------------------
# Taylor coefficients


def cauchy_coefficients(f: Callable, rho: float, n_nodes: int) -> np.ndarray:
    """All ``n_nodes`` trapezoidal Cauchy-integral coefficients at radius ``rho``.

    ``c_k = (1/Q) sum_j f(rho w_j) rho**-k w_j**-k`` with ``w_j = exp(2 pi i j/Q)``.
    """
    if not 0 < rho:
        raise ValueError("radius must be positive")
    w = rho * np.exp(2j * np.pi * np.arange(n_nodes) / n_nodes)
    with np.errstate(all="ignore"):
        samples = np.asarray(f(w), dtype=complex) * np.ones(n_nodes)
    if not np.all(np.isfinite(samples)):
        raise NonFiniteSampleError(f"non-finite samples on the circle of radius {rho}")
    c = scipy.fft.fft(samples, workers=fft_workers()) / n_nodes
    k = np.arange(n_nodes)
    with np.errstate(over="ignore", under="ignore"):
        scale = np.power(rho, -k.astype(float))
    if not np.all(np.isfinite(scale)):
        # rho**-k overflows only for tiny radii; cut where the weight explodes
        scale = np.where(np.isfinite(scale), scale, 0.0)
    return c * scale


def quadrature_nodes(count: int) -> int:
    return max(4 * count, 256)


def taylor_coeffs(f: Callable, rho: float, count: int, n_nodes: int | None = None) -> Polynomial:
    """Taylor partial sum of degree ``count - 1`` from samples on ``|z| = rho``.

    Uses ``max(4*count, 256)`` trapezoidal nodes unless ``n_nodes`` is given.
    Exact for polynomials of degree below ``n_nodes - count``.
    """
    if count < 1:
        raise ValueError("need at least one coefficient")
    Q = n_nodes or quadrature_nodes(count)
    if Q < count:
        raise ValueError("fewer quadrature nodes than coefficients")
    return Polynomial(cauchy_coefficients(f, rho, Q)[:count])


# ---------------------------------------------------------------------------
# boundary mean


@dataclass(frozen=True)
class BoundaryMean:
    mean: complex
    center_value: complex
    exclusion: float
    excluded_nodes: int
    note: str

    @property
    def discrepancy(self) -> float:
        return abs(self.mean - self.center_value)


def _graded_panels(a: float, b: float, exclusion: float, ratio: float = 2.0) -> np.ndarray:
    """Breakpoints on [a, b] refined geometrically toward both ends."""
    lo, hi = a + exclusion, b - exclusion
    mid = 0.5 * (a + b)
    left = [lo]
    x = exclusion
    while a + x * ratio < mid:
        x *= ratio
        left.append(a + x)
    right = [b - (p - a) for p in reversed(left)]
    pts = np.unique(np.concatenate([left, [mid], right]))
    pts = pts[(pts >= lo) & (pts <= hi)]
    return np.unique(np.concatenate([[lo], pts, [hi]]))


def boundary_mean(f: FiniteTypeFunction, exclusion: float = 1e-8, order: int = 20) -> BoundaryMean:
    """``(1/2pi) * integral of f(e^{it}) dt`` by composite Gauss-Legendre.

    Arcs between boundary nodes are integrated with panels refined
    geometrically toward the nodes; an arc of half-width ``exclusion``
    around each node is left out. For logarithmic singularities the
    omitted mass is of order ``exclusion * log(1/exclusion)``.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    node_angles = sorted(float(np.angle(z)) % (2 * math.pi) for z in f.singular_nodes)
    if node_angles:
        cuts = node_angles + [node_angles[0] + 2 * math.pi]
        arcs = list(zip(cuts[:-1], cuts[1:]))
        ex = exclusion
    else:
        arcs = [(0.0, 2 * math.pi)]
        ex = 0.0
    total = 0j
    for a, b in arcs:
        br = _graded_panels(a, b, ex) if ex else np.linspace(a, b, 65)
        lo, hi = br[:-1], br[1:]
        half = 0.5 * (hi - lo)
        t = (0.5 * (hi + lo))[:, None] + half[:, None] * x[None, :]
        vals = np.asarray(f.func(np.exp(1j * t)), dtype=complex)
        total += np.sum(half[:, None] * w[None, :] * vals)
    mean = total / (2 * math.pi)
    center = complex(np.asarray(f.func(np.array([0j])))[0])
    note = ("arcs of half-width %.1e around %d boundary node(s) omitted; "
            "a logarithmic singularity contributes O(h log 1/h) there" % (ex, len(node_angles)))
    return BoundaryMean(complex(mean), center, ex, len(node_angles), note)
