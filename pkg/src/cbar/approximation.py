"""Constructive polynomial approximation in the metric ``d``.

Every driver returns ``(approximant, ApproxReport)`` and raises a subclass
of :class:`ApproximationError` (carrying the partial report) when it
cannot reach the tolerance.

Disc targets follow the dilation argument: pick ``r < 1`` so that
``f(rz)`` is uniformly ``d``-close to ``f(z)``, approximate on the smaller
disc where everything is holomorphic, and pull back with ``Q(z) = P(rz)``.
Infinite-type targets ``inf*exp(i theta)`` go through ``n*exp(g)`` where
``Im g = theta``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
import scipy.fft

from .classification import is_d_continuous
from .config import DEFAULT_DEGREE_CAP, fft_workers
from .functions import (
    FiniteTypeFunction,
    InfiniteTypeFunction,
    cauchy_coefficients,
    quadrature_nodes,
)
from .geometry import CPointArray, chart_of, gmap_array, phi_r_array
from .grids import CircleGrid, DiscGrid, PolarGrid, SegmentGrid
from .polynomials import ChebyshevSeries, Polynomial, TrigPolynomial


class ApproximationError(RuntimeError):
    def __init__(self, message: str, report: "ApproxReport | None" = None):
        super().__init__(message)
        self.report = report


class DegreeCapError(ApproximationError):
    pass


class DDiscontinuityError(ApproximationError):
    pass


class ConditioningError(ApproximationError):
    pass


@dataclass
class ApproxReport:
    """Outcome of one approximation run.

    ``achieved_error`` is the exact maximum of ``d(f, Q)`` over the
    verification grid of ``grid_size`` points.
    """

    kind: str
    target: str
    target_epsilon: float
    dilation_r: float | None = None
    degree: int = 0
    scaling_n: int | None = None
    achieved_error: float = math.inf
    grid_size: int = 0
    success: bool = False
    dilation_error: float | None = None
    euclidean_error: float | None = None
    clamp_R: float | None = None
    delta: float | None = None
    refinements: int = 0
    condition_number: float | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# building blocks


def search_dilation(err_of_r: Callable[[float], float], target: float,
                    width: float = 1e-4, max_digits: float = 15.0) -> tuple[float, float]:
    """Smallest dilation ``r`` (up to bisection width) with ``err(r) < target``.

    The search variable is ``s = -log10(1 - r)`` on ``[0, max_digits]``:
    targets with logarithmic boundary behaviour need ``1 - r`` far below
    any fixed step in ``r``. Returns ``(r, err(r))``.
    """
    r_of = lambda s: -math.expm1(-s * math.log(10.0))
    lo, hi = 0.0, max_digits
    e_hi = err_of_r(r_of(hi))
    if not e_hi < target:
        raise ApproximationError(
            f"dilation stalls: error {e_hi:.3g} at 1-r=1e-{max_digits:g} (target {target:.3g}); "
            "the target looks d-discontinuous on the mesh")
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        e = err_of_r(r_of(mid))
        if e < target:
            hi, e_hi = mid, e
        else:
            lo = mid
    return r_of(hi), e_hi


def taylor_to_tolerance(func: Callable, r: float, tol: float, degree_cap: int) -> tuple[Polynomial, float]:
    """Shortest Taylor partial sum with ``sup_{|w|<=r} |func - P| < tol``.

    The error is bounded by the l1 tail ``sum_{k>=N} |c_k| r**k`` of the
    trapezoidal coefficients; the node count doubles until some ``N`` works.
    Returns ``(P, tail bound)``.
    """
    N = 8
    while True:
        Q = quadrature_nodes(N)
        c = cauchy_coefficients(func, r, Q)
        k = np.arange(Q)
        with np.errstate(under="ignore"):
            w = np.abs(c) * np.power(r, k)
        tail = np.cumsum(w[::-1])[::-1]
        tail = np.append(tail, 0.0)
        ok = np.flatnonzero(tail[: N + 1] < tol)
        if ok.size:
            n = max(int(ok[0]), 1)
            if n - 1 > degree_cap:
                break
            return Polynomial(c[:n]), float(tail[n])
        if N > degree_cap:
            break
        N *= 2
    raise DegreeCapError(f"degree cap {degree_cap} reached before Taylor error < {tol:.3g}")


def _sup_d(target_chart: np.ndarray, values) -> float:
    return float(np.max(np.abs(target_chart - gmap_array(values))))


def _evaluate_target(f, pts) -> CPointArray:
    if isinstance(f, CPointArray):
        return f
    if hasattr(f, "evaluate"):
        return f.evaluate(pts)
    out = f(pts)
    return out if isinstance(out, CPointArray) else CPointArray.from_finite(out)


def sup_d_error(f, Q, grid) -> float:
    """Exact maximum of ``d(f(z), Q(z))`` over the points of ``grid``.

    ``grid`` is one of the mesh classes or a plain array of points. ``f`` is
    a target (anything with ``evaluate``), a callable, or precomputed values.
    """
    pts = grid.points() if hasattr(grid, "points") else np.asarray(grid)
    if np.size(pts) == 0:
        raise ValueError("empty grid")
    target = chart_of(_evaluate_target(f, pts))
    if isinstance(Q, Polynomial) and isinstance(grid, (DiscGrid, PolarGrid)):
        qv = grid.eval_polynomial(Q)
    elif isinstance(Q, TrigPolynomial):
        qv = Q(np.angle(pts))
    elif isinstance(Q, ChebyshevSeries):
        qv = Q(np.real(pts))
    else:
        qv = Q(pts)
    return _sup_d(np.reshape(target, np.shape(qv)), qv)


# ---------------------------------------------------------------------------
# disc, finite type


def approx_finite_type(f: FiniteTypeFunction, eps: float, grid: DiscGrid | None = None,
                       verify_grid: DiscGrid | None = None, degree_cap: int = DEFAULT_DEGREE_CAP,
                       max_refinements: int = 3) -> tuple[Polynomial, ApproxReport]:
    """Polynomial ``Q`` with ``d(f, Q) < eps`` on the verification grid.

    ``r`` is the smallest dilation whose error ``sup d(f(z), f(rz))`` on the
    construction grid is below ``eps/2``; ``P`` is the shortest Taylor
    partial sum within ``eps/2`` of ``f`` on ``|w| <= r``; ``Q(z) = P(rz)``.
    If the independent verification fails, the construction grid is
    refined (twice as many angles) and the run repeated.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    grid = (grid or DiscGrid()).with_nodes(f.singular_nodes)
    vgrid = (verify_grid or DiscGrid.verification()).with_nodes(f.singular_nodes)
    target_v = f.evaluate(vgrid.points()).chart()
    report = ApproxReport("finite", f.name, eps, grid_size=vgrid.size)

    for attempt in range(max_refinements + 1):
        z = grid.points()
        base = f.evaluate(z).chart()
        dil = lambda r: float(np.max(np.abs(base - f.evaluate(r * z).chart())))
        try:
            r, dil_err = search_dilation(dil, eps / 2)
            P, tail = taylor_to_tolerance(f.func, r, eps / 2, degree_cap)
        except ApproximationError as exc:
            exc.report = report
            raise
        Q = P.dilate(r)
        achieved = _sup_d(target_v, vgrid.eval_polynomial(Q))
        report.dilation_r, report.dilation_error = r, dil_err
        report.degree, report.euclidean_error = Q.degree, tail
        report.achieved_error, report.refinements = achieved, attempt
        if achieved < eps:
            report.success = True
            return Q, report
        grid = grid.refined(2)
    raise ApproximationError(f"verification error {report.achieved_error:.3g} >= eps after "
                             f"{max_refinements} refinements", report)


# ---------------------------------------------------------------------------
# disc, infinite type


def scaling_for(delta: float, budget: float) -> int:
    """Smallest integer ``n`` with ``1/(1 + delta*n) < budget``."""
    return int(math.floor((1.0 / budget - 1.0) / delta)) + 1


def approx_infinite_type(f: InfiniteTypeFunction, eps: float, grid: DiscGrid | None = None,
                         verify_grid: DiscGrid | None = None, degree_cap: int = DEFAULT_DEGREE_CAP,
                         max_refinements: int = 3,
                         delta_safety: float = 0.9) -> tuple[Polynomial, ApproxReport]:
    """Polynomial ``Q`` with ``d(inf*exp(i theta), Q) < eps`` on the verification grid.

    Three budgets of ``eps/3``: the dilation (``|theta(z) - theta(rz)|``),
    the blow-up ``1/(1 + delta n)`` of ``n exp(g)`` with ``Im g = theta`` and
    ``delta`` the minimum of ``exp(Re g)`` on ``|w| = r`` (times
    ``delta_safety``), and the Taylor error of ``n exp(g)`` on ``|w| <= r``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    grid = grid or DiscGrid()
    vgrid = verify_grid or DiscGrid.verification()
    g = f.conjugate()
    target_v = np.exp(1j * f.theta_at(vgrid.points()))
    report = ApproxReport("infinite", f.name, eps, grid_size=vgrid.size)

    for attempt in range(max_refinements + 1):
        z = grid.points()
        base = f.theta_at(z)
        dil = lambda r: float(np.max(np.abs(base - f.theta_at(r * z))))
        try:
            r, dil_err = search_dilation(dil, eps / 3)
        except ApproximationError as exc:
            exc.report = report
            raise
        nodes = quadrature_nodes(g.degree + 1)
        w = r * np.exp(2j * np.pi * np.arange(nodes) / nodes)
        delta = delta_safety * float(np.min(np.exp(np.real(g(w)))))
        n = scaling_for(delta, eps / 3)
        h = lambda w, n=n: n * np.exp(g(w))
        try:
            P, tail = taylor_to_tolerance(h, r, eps / 3, degree_cap)
        except ApproximationError as exc:
            exc.report = report
            raise
        Q = P.dilate(r)
        achieved = _sup_d(target_v, vgrid.eval_polynomial(Q))
        report.dilation_r, report.dilation_error = r, dil_err
        report.delta, report.scaling_n = delta, n
        report.degree, report.euclidean_error = Q.degree, tail
        report.achieved_error, report.refinements = achieved, attempt
        if achieved < eps:
            report.success = True
            return Q, report
        grid = grid.refined(2)
    raise ApproximationError(f"verification error {report.achieved_error:.3g} >= eps", report)


def approximate(f, eps: float, **kw):
    """Dispatch a disc target to the finite- or infinite-type driver."""
    if isinstance(f, InfiniteTypeFunction):
        return approx_infinite_type(f, eps, **kw)
    return approx_finite_type(f, eps, **kw)


# ---------------------------------------------------------------------------
# clamping


def _clamp_radius(vals: CPointArray, budget: float, report: ApproxReport, max_doublings: int = 80) -> float:
    """Double ``R`` from 1 until ``sup d(f, Phi_R(f)) < budget``."""
    chart = vals.chart()
    R = 1.0
    for _ in range(max_doublings):
        if float(np.max(np.abs(chart - gmap_array(phi_r_array(vals, R))))) < budget:
            return R
        R *= 2.0
    raise ApproximationError("clamp radius search stalled", report)


# ---------------------------------------------------------------------------
# circle


def _vallee_poussin_weights(m: int, k: np.ndarray) -> np.ndarray:
    a = np.abs(k)
    return np.clip((2 * m - a) / m, 0.0, 1.0)


def approx_trig_on_circle(f, eps: float, n_grid: int = 1024, verify_factor: int = 4,
                          degree_cap: int = DEFAULT_DEGREE_CAP) -> tuple[TrigPolynomial, ApproxReport]:
    """Trigonometric polynomial within ``eps`` of ``f`` in ``d`` on the circle.

    ``f`` maps unit complex numbers to points (``evaluate`` or a callable).
    After an empirical continuity check, ``R`` is doubled until the clamp
    ``Phi_R`` costs less than ``eps/2``, and the clamped function is
    approximated in the Euclidean norm by de la Vallee Poussin means
    ``V_m`` (degree ``2m - 1``, exact on trigonometric polynomials of degree
    ``m``), ``m`` doubling until the error is below ``eps/2``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    name = getattr(f, "name", "circle")
    cgrid = CircleGrid(n_grid, offset=0.0)
    vgrid = CircleGrid(verify_factor * n_grid, offset=0.5)
    report = ApproxReport("circle", name, eps, grid_size=vgrid.size)

    vals = _evaluate_target(f, cgrid.points())
    cont = is_d_continuous(vals, 2 * np.pi / n_grid, closed=True)
    if not cont:
        i = cont.witness[0]
        report.notes.append(f"d-jump {cont.max_jump:.3g} near phi={cgrid.angles()[i % n_grid]:.6g}")
        raise DDiscontinuityError("target is d-discontinuous on the circle", report)
    R = _clamp_radius(vals, eps / 2, report)
    report.clamp_R = R

    vv = _evaluate_target(f, vgrid.points())
    clamped_v = phi_r_array(vv, R)
    m = 1
    while True:
        L = max(n_grid, 8 * m)
        phi = 2 * np.pi * np.arange(L) / L
        s = phi_r_array(_evaluate_target(f, np.exp(1j * phi)), R)
        c = scipy.fft.fft(s, workers=fft_workers()) / L
        M = 2 * m - 1
        k = np.arange(-M, M + 1)
        T = TrigPolynomial(c[k % L] * _vallee_poussin_weights(m, k))
        euc = float(np.max(np.abs(T.eval_equispaced(vgrid.n, 0.5) - clamped_v)))
        if euc < eps / 2:
            break
        m *= 2
        if 2 * m - 1 > degree_cap:
            report.euclidean_error = euc
            raise DegreeCapError(f"degree cap {degree_cap} reached on the circle", report)
    achieved = _sup_d(vv.chart(), T.eval_equispaced(vgrid.n, 0.5))
    report.degree, report.euclidean_error, report.achieved_error = T.degree, euc, achieved
    report.success = achieved < eps
    if not report.success:
        raise ApproximationError(f"verification error {achieved:.3g} >= eps", report)
    return T, report


# ---------------------------------------------------------------------------
# segment


def _chebyshev_interpolant(func: Callable, n: int) -> ChebyshevSeries:
    """Interpolant of degree ``n`` at the ``n+1`` Chebyshev points of the first kind."""
    N = n + 1
    x = np.cos(np.pi * (np.arange(N) + 0.5) / N)
    y = np.asarray(func(x))
    dct = lambda v: scipy.fft.dct(v, type=2, workers=fft_workers())
    a = (dct(y.real) + 1j * dct(y.imag) if np.iscomplexobj(y) else dct(y)) / N
    a[0] *= 0.5
    return ChebyshevSeries(a)


def _segment(f, eps: float, n_grid: int, verify_factor: int, degree_cap: int,
             real: bool) -> tuple[ChebyshevSeries, ApproxReport]:
    if not eps > 0:
        raise ValueError("eps must be positive")
    name = getattr(f, "name", "segment")
    sgrid = SegmentGrid(n_grid)
    vgrid = SegmentGrid(verify_factor * (n_grid - 1) + 1)
    report = ApproxReport("segment-real" if real else "segment", name, eps, grid_size=vgrid.size)

    vals = _evaluate_target(f, sgrid.points())
    if real:
        finite_imag = np.abs(vals.values.imag[~vals.infinite])
        inf_dirs = vals.values[vals.infinite]
        if np.any(finite_imag > 1e-12) or np.any(np.abs(inf_dirs.imag) > 1e-12):
            raise ValueError("segment target must take extended-real values")
        cont = is_d_continuous(vals, sgrid.spacing)
        if not cont:
            x0 = sgrid.points()[list(cont.witness)]
            report.notes.append(f"d-jump {cont.max_jump:.3g} between x={x0[0]:.6g} and x={x0[1]:.6g}")
            raise DDiscontinuityError("target is d-discontinuous: no real polynomial approximants", report)
    R = _clamp_radius(vals, eps / 2, report)
    report.clamp_R = R

    part = np.real if real else (lambda v: v)
    xv = vgrid.points()
    vv = _evaluate_target(f, xv)
    clamped_v = part(phi_r_array(vv, R))
    clamp = lambda x: part(phi_r_array(_evaluate_target(f, x), R))
    n = 1
    while True:
        S = _chebyshev_interpolant(clamp, n)
        euc = float(np.max(np.abs(S(xv) - clamped_v)))
        if euc < eps / 2:
            break
        n *= 2
        if n > degree_cap:
            report.euclidean_error = euc
            raise DegreeCapError(f"degree cap {degree_cap} reached on the segment", report)
    achieved = _sup_d(vv.chart(), S(xv))
    report.degree, report.euclidean_error, report.achieved_error = S.degree, euc, achieved
    report.success = achieved < eps
    if not report.success:
        raise ApproximationError(f"verification error {achieved:.3g} >= eps", report)
    return S, report


def approx_segment(f, eps: float, n_grid: int = 2049, verify_factor: int = 4,
                   degree_cap: int = DEFAULT_DEGREE_CAP) -> tuple[ChebyshevSeries, ApproxReport]:
    """Complex polynomial within ``eps`` of a ``d``-continuous ``f`` on [-1, 1].

    Clamp with ``Phi_R`` (``R`` doubling until the clamp costs ``eps/2``),
    then interpolate real and imaginary parts at Chebyshev points.
    """
    return _segment(f, eps, n_grid, verify_factor, degree_cap, real=False)


def approx_real_segment(f, eps: float, n_grid: int = 2049, verify_factor: int = 4,
                        degree_cap: int = DEFAULT_DEGREE_CAP) -> tuple[ChebyshevSeries, ApproxReport]:
    """Real polynomial within ``eps`` of an extended-real ``f`` on [-1, 1].

    Real approximants exist exactly when ``f`` is ``d``-continuous, which is
    checked on the grid first. Then ``f`` is clamped with ``Phi_R`` and the
    clamp interpolated at Chebyshev points, degree doubling until the
    Euclidean error on the verification grid is below ``eps/2``.
    The result is a :class:`ChebyshevSeries`; ``to_polynomial`` gives the
    monomial form for small degrees.
    """
    return _segment(f, eps, n_grid, verify_factor, degree_cap, real=True)


# ---------------------------------------------------------------------------
# star-shaped compacts


@dataclass(frozen=True, eq=False)
class StarCompact:
    """``{center + t rho(phi) e^{i phi} : 0 <= t <= 1}`` for a positive continuous ``rho``."""

    center: complex
    radial: Callable[[np.ndarray], np.ndarray]
    name: str = "star"

    @classmethod
    def disc(cls, center: complex = 0j, radius: float = 1.0) -> "StarCompact":
        return cls(complex(center), lambda phi: np.full(np.shape(phi), float(radius)), "disc")

    @classmethod
    def square(cls, half_width: float = 1.0) -> "StarCompact":
        """The square ``[-a, a]^2`` seen from its centre."""
        return cls(0j, lambda phi: half_width / np.maximum(np.abs(np.cos(phi)), np.abs(np.sin(phi))), "square")

    def boundary(self, n: int, offset: float = 0.5) -> np.ndarray:
        phi = 2 * np.pi * (np.arange(n) + offset) / n
        return self.center + self.radial(phi) * np.exp(1j * phi)

    def mesh(self, n_boundary: int = 512, n_angular: int = 64, n_radial: int = 32) -> np.ndarray:
        phi = 2 * np.pi * (np.arange(n_angular) + 0.5) / n_angular
        rays = self.radial(phi) * np.exp(1j * phi)
        t = np.arange(n_radial) / n_radial
        inner = self.center + (t[:, None] * rays[None, :]).ravel()
        return np.concatenate([self.boundary(n_boundary), inner])

    def max_radius(self, n: int = 4096) -> float:
        return float(np.max(self.radial(2 * np.pi * np.arange(n) / n)))

    def is_circle(self, n: int = 4096) -> bool:
        rho = self.radial(2 * np.pi * np.arange(n) / n)
        return bool(np.ptp(rho) <= 1e-14 * np.max(rho))


@dataclass(frozen=True, eq=False)
class HarmonicAngle:
    """Infinite-type target ``inf*exp(i theta)`` for a harmonic ``theta`` given in closed form."""

    theta: Callable[[np.ndarray], np.ndarray]
    name: str = "harmonic-angle"

    def theta_at(self, z):
        return np.asarray(self.theta(np.asarray(z, dtype=complex)), dtype=float)

    def evaluate(self, z) -> CPointArray:
        return CPointArray.from_angles(self.theta_at(z))


def _fit_on_boundary(values_at: Callable, L: StarCompact, tol: float, degree_cap: int,
                     n_boundary: int, cond_max: float, report: ApproxReport) -> tuple[Polynomial, float]:
    """Polynomial in ``(z - center)/s`` matching ``values_at`` on the boundary of ``L``.

    Circles use the FFT (the least-squares solution for equispaced samples)
    with the l1 tail as error bound; other shapes use an SVD least-squares
    solve checked on a twice-denser, offset boundary sample.
    """
    s = L.max_radius()
    if L.is_circle():
        N = 8
        while True:
            M = quadrature_nodes(N)
            phi = 2 * np.pi * np.arange(M) / M
            v = np.asarray(values_at(L.center + s * np.exp(1j * phi)), dtype=complex)
            c = scipy.fft.fft(v, workers=fft_workers()) / M
            tail = np.append(np.cumsum(np.abs(c)[::-1])[::-1], 0.0)
            ok = np.flatnonzero(tail[: N + 1] < tol)
            if ok.size:
                n = max(int(ok[0]), 1)
                if n - 1 > degree_cap:
                    break
                report.condition_number = 1.0
                return Polynomial(c[:n], L.center, s), float(tail[n])
            if N > degree_cap:
                break
            N *= 2
        raise DegreeCapError(f"degree cap {degree_cap} reached", report)

    N = 2
    while True:
        M = max(4 * N, n_boundary)
        zb = L.boundary(M, offset=0.0)
        zc = L.boundary(2 * M, offset=0.25)
        A = np.vander((zb - L.center) / s, N, increasing=True)
        U, sv, Vh = np.linalg.svd(A, full_matrices=False)
        cond = float(sv[0] / sv[-1])
        report.condition_number = cond
        if cond > cond_max:
            raise ConditioningError(f"least-squares basis condition {cond:.3g} exceeds {cond_max:.3g} "
                                    f"at degree {N - 1}", report)
        coef = Vh.conj().T @ ((U.conj().T @ values_at(zb)) / sv)
        p = Polynomial(coef, L.center, s)
        err = float(np.max(np.abs(p(zc) - values_at(zc))))
        if err < tol:
            return p, err
        N *= 2
        if N - 1 > degree_cap:
            raise DegreeCapError(f"degree cap {degree_cap} reached", report)


def _fit_harmonic(theta_at: Callable, L: StarCompact, tol: float, degree_cap: int,
                  n_boundary: int, cond_max: float, report: ApproxReport) -> tuple[Polynomial, float]:
    """Holomorphic polynomial ``g`` with ``Im g`` within ``tol`` of ``theta`` on the boundary."""
    s = L.max_radius()
    N = 2
    while True:
        M = max(8 * N, n_boundary)
        zb = L.boundary(M, offset=0.0)
        zc = L.boundary(2 * M, offset=0.25)
        V = np.vander((zb - L.center) / s, N, increasing=True)
        # unknowns: Im c_0, then (Re c_k, Im c_k) for k >= 1
        A = np.column_stack([np.ones(M)] + [col for k in range(1, N) for col in (V[:, k].imag, V[:, k].real)])
        sol, _, _, sv = np.linalg.lstsq(A, theta_at(zb), rcond=None)
        cond = float(sv[0] / sv[-1])
        report.condition_number = cond
        if cond > cond_max:
            raise ConditioningError(f"harmonic fit condition {cond:.3g} exceeds {cond_max:.3g}", report)
        c = np.zeros(N, dtype=complex)
        c[0] = 1j * sol[0]
        c[1:] = sol[1::2] + 1j * sol[2::2]
        g = Polynomial(c, L.center, s)
        err = float(np.max(np.abs(np.imag(g(zc)) - theta_at(zc))))
        if err < tol:
            return g, err
        N *= 2
        if N - 1 > degree_cap:
            raise DegreeCapError(f"degree cap {degree_cap} reached in the harmonic fit", report)


def approx_star_compact(L: StarCompact, f, eps: float, n_boundary: int = 512, n_angular: int = 64,
                        n_radial: int = 32, verify_factor: int = 4, degree_cap: int = DEFAULT_DEGREE_CAP,
                        cond_max: float = 1e12, max_refinements: int = 3) -> tuple[Polynomial, ApproxReport]:
    """Polynomial within ``eps`` of ``f`` in ``d`` on a star-shaped compact ``L``.

    The dilation ``z -> center + r (z - center)`` is chosen on a mesh of
    ``L`` as on the disc. The dilated target is holomorphic on a
    neighbourhood of ``L`` and is fitted on the boundary of ``L`` by least
    squares in a scaled monomial basis, which bounds the interior error by
    the maximum principle. Targets with a ``theta_at`` method are treated as
    infinite type: ``theta`` is fitted by ``Im g`` first, then ``n exp(g)``
    is fitted, with four budgets of ``eps/4``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    name = getattr(f, "name", "star")
    zv = L.mesh(verify_factor * n_boundary, verify_factor * n_angular, n_radial)
    target_v = _evaluate_target(f, zv).chart()
    report = ApproxReport("star-" + L.name, name, eps, grid_size=zv.size)
    c0 = L.center
    infinite = hasattr(f, "theta_at")

    for attempt in range(max_refinements + 1):
        z = L.mesh(n_boundary, n_angular, n_radial)
        try:
            if infinite:
                base = f.theta_at(z)
                dil = lambda r: float(np.max(np.abs(base - f.theta_at(c0 + r * (z - c0)))))
                r, dil_err = search_dilation(dil, eps / 4)
                theta_r = lambda w: f.theta_at(c0 + r * (w - c0))
                g, fit_err = _fit_harmonic(theta_r, L, eps / 4, degree_cap, n_boundary, cond_max, report)
                zb = L.boundary(max(8 * n_boundary, 4096))
                delta = 0.9 * float(np.min(np.exp(np.real(g(zb)))))
                n = scaling_for(delta, eps / 4)
                Q, euc = _fit_on_boundary(lambda w: n * np.exp(g(w)), L, eps / 4, degree_cap,
                                          n_boundary, cond_max, report)
                report.delta, report.scaling_n = delta, n
                report.notes.append(f"harmonic fit error {fit_err:.3g}")
            else:
                base = f.evaluate(z).chart()
                dil = lambda r: float(np.max(np.abs(base - f.evaluate(c0 + r * (z - c0)).chart())))
                r, dil_err = search_dilation(dil, eps / 2)

                def h(w):
                    vals = f.evaluate(c0 + r * (w - c0))
                    if np.any(vals.infinite):
                        raise ApproximationError("dilated target is infinite on the boundary", report)
                    return vals.values

                Q, euc = _fit_on_boundary(h, L, eps / 2, degree_cap, n_boundary, cond_max, report)
        except ApproximationError as exc:
            exc.report = report
            raise

        report.dilation_r, report.dilation_error = r, dil_err
        report.degree, report.euclidean_error = Q.degree, euc
        report.achieved_error, report.refinements = _sup_d(target_v, _chunked(Q, zv)), attempt
        if report.achieved_error < eps:
            report.success = True
            return Q, report
        n_boundary, n_angular = 2 * n_boundary, 2 * n_angular
    raise ApproximationError(f"verification error {report.achieved_error:.3g} >= eps", report)


def _chunked(Q: Polynomial, pts: np.ndarray, step: int = 4096) -> np.ndarray:
    out = np.empty(pts.shape, dtype=complex)
    for i in range(0, pts.size, step):
        out[i : i + step] = Q(pts[i : i + step])
    return out
