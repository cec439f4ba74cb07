"""Classify the ``d``-limit of a sequence of polynomials on the closed disc.

A uniform ``d``-limit of polynomials is either of finite type (finite and
holomorphic inside) or of infinite type ``inf*exp(i theta)`` with harmonic
``theta``. In the second case the approximants blow up uniformly and
``theta`` is recovered as a continuous argument of the last member; the
integer branch offsets between successive members must be constant over
the whole grid.

All thresholds here are finite-sample heuristics for an asymptotic
dichotomy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import CPointArray, as_cpoints, gmap_array
from .grids import PolarGrid
from .polynomials import Polynomial

TWO_PI = 2 * math.pi


class UnderResolvedPath(ValueError):
    """Consecutive samples differ in argument by pi: unwrapping is ambiguous."""


# ---------------------------------------------------------------------------
# continuous argument


@dataclass(frozen=True)
class ArgTrace:
    """Unwrapped argument along a path.

    ``offset`` is the integer ``k`` with ``values[-1] = Arg(last) + 2 pi k``.
    ``ambiguous`` flags steps of at least ``pi/2`` (ratio with nonpositive
    real part), where a coarser path could have been misread.
    """

    values: np.ndarray
    offset: int
    ambiguous: bool

    @property
    def winding(self) -> float:
        """Total change of argument divided by ``2 pi``."""
        return (self.values[-1] - self.values[0]) / TWO_PI


def _steps(v: np.ndarray, axis: int = -1) -> np.ndarray:
    a = np.take(v, np.arange(1, v.shape[axis]), axis=axis)
    b = np.take(v, np.arange(0, v.shape[axis] - 1), axis=axis)
    ratio = a / b
    if np.any((ratio.imag == 0) & (ratio.real < 0)):
        raise UnderResolvedPath("consecutive samples point in opposite directions")
    return ratio


def continuous_arg(values, strict: bool = False) -> ArgTrace:
    """Unwrap the argument of nonzero samples taken along an ordered path.

    The first value is the principal argument of the first sample; every
    later value is the one within ``pi`` of its predecessor.

    Examples
    --------
    >>> continuous_arg([1, 1j, -1, -1j, 1]).values[-1] / np.pi
    2.0
    """
    v = np.asarray(values, dtype=complex).ravel()
    if v.size == 0:
        raise ValueError("empty path")
    if np.any(v == 0):
        raise ValueError("continuous argument of a path through zero")
    ratio = _steps(v)
    ambiguous = bool(np.any(ratio.real <= 0))
    if strict and ambiguous:
        raise UnderResolvedPath("argument step of at least pi/2; refine the path")
    trace = np.concatenate([[np.angle(v[0])], np.angle(v[0]) + np.cumsum(np.angle(ratio))])
    offset = int(round((trace[-1] - np.angle(v[-1])) / TWO_PI))
    return ArgTrace(trace, offset, ambiguous)


# ---------------------------------------------------------------------------
# d-continuity along a path


@dataclass(frozen=True)
class DContinuity:
    continuous: bool
    witness: tuple[int, int]
    max_jump: float
    coarse_jump: float
    ratio: float
    h: float
    levels: int

    def __bool__(self):
        return self.continuous

    def to_json(self) -> dict:
        return {
            "continuous": self.continuous,
            "witness": list(self.witness),
            "max_jump": self.max_jump,
            "coarse_jump": self.coarse_jump,
            "ratio": self.ratio,
            "h": self.h,
            "levels": self.levels,
        }


def is_d_continuous(samples, h: float, closed: bool = False, jump_floor: float = 0.05,
                    persistence: float = 0.9, max_levels: int = 4) -> DContinuity:
    """Empirical ``d``-continuity test for values sampled along a path.

    The largest adjacent ``d``-jump at spacing ``h`` is compared with the
    largest jump at spacing ``2**L h`` (every ``2**L``-th sample). Along a
    continuous path the jump shrinks under refinement; at a jump
    discontinuity it does not. A path is declared discontinuous when its
    finest jump exceeds ``jump_floor`` and keeps at least ``persistence``
    of the coarse jump.

    ``closed`` appends the first sample so the wrap-around pair is tested.
    """
    if not h > 0:
        raise ValueError("mesh scale must be positive")
    c = as_cpoints(samples).chart().ravel()
    if c.size < 3:
        raise ValueError("need at least 3 samples")
    if closed:
        c = np.concatenate([c, c[:1]])
    jumps = np.abs(np.diff(c))
    i = int(np.argmax(jumps))
    fine = float(jumps[i])
    levels = 0
    coarse = fine
    while levels < max_levels and c[:: 2 ** (levels + 1)].size >= 3:
        levels += 1
        sub = c[:: 2**levels]
        coarse = max(coarse, float(np.max(np.abs(np.diff(sub)))))
    ratio = fine / coarse if coarse > 0 else 0.0
    discontinuous = fine > jump_floor and levels > 0 and ratio >= persistence
    return DContinuity(not discontinuous, (i, i + 1), fine, coarse, ratio, float(h), levels)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class NotUniformlyCauchy:
    witness_point: complex
    pair: tuple[int, int]
    gap: float
    diagnostic: str = ""
    kind: str = field(default="NotUniformlyCauchy", init=False)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "witness_point": [self.witness_point.real, self.witness_point.imag],
            "pair": list(self.pair),
            "gap": self.gap,
            "diagnostic": self.diagnostic,
        }


@dataclass(frozen=True, eq=False)
class FiniteType:
    points: np.ndarray
    values: np.ndarray
    cauchy_gap: float
    kind: str = field(default="FiniteType", init=False)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "cauchy_gap": self.cauchy_gap,
            "grid_size": int(self.points.size),
            "max_modulus": float(np.max(np.abs(self.values))),
        }


@dataclass(frozen=True, eq=False)
class InfiniteType:
    """Recovered angle ``theta`` on the polar grid, shape ``(n_angular, n_radial+1)``.

    ``k_offsets[m]`` is the constant integer reconciling member ``m`` of the
    examined tail with the last member; ``k_constant`` records that each of
    them was the same at every grid point.
    """

    points: np.ndarray
    theta: np.ndarray
    k_offsets: tuple
    k_constant: bool
    cauchy_gap: float
    kind: str = field(default="InfiniteType", init=False)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "cauchy_gap": self.cauchy_gap,
            "k_offsets": [int(k) for k in self.k_offsets],
            "k_constant": self.k_constant,
            "theta_min": float(np.min(self.theta)),
            "theta_max": float(np.max(self.theta)),
            "grid_shape": list(self.theta.shape),
        }


LimitVerdict = NotUniformlyCauchy | FiniteType | InfiniteType


def recover_theta(values: np.ndarray, ref_ring: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Continuous argument of nonzero samples on a polar grid.

    Each ray is unwrapped outward from the centre; the rays are then
    reconciled along the interior ring ``ref_ring`` (default: the middle
    one) by integer multiples of ``2 pi``. Returns ``(theta, ray_shifts)``.
    """
    v = np.asarray(values, dtype=complex)
    if np.any(v == 0):
        raise ValueError("zero sample: no continuous argument")
    n_ang, n_r = v.shape
    ratio = _steps(v, axis=1)
    start = np.angle(v[:, :1])
    theta = np.concatenate([start, start + np.cumsum(np.angle(ratio), axis=1)], axis=1)

    j = n_r // 2 if ref_ring is None else ref_ring
    ring = continuous_arg(v[:, j])
    ring_theta = ring.values - ring.values[0] + theta[0, j]
    closure = ring.values[-1] + np.angle(v[0, j] / v[-1, j]) - ring.values[0]
    if abs(closure) > math.pi:
        raise ValueError("argument winds around the reference ring: the samples vanish inside")
    shifts = np.round((ring_theta - theta[:, j]) / TWO_PI).astype(int)
    return theta + TWO_PI * shifts[:, None], shifts


def _witness(points: np.ndarray, gaps: np.ndarray) -> tuple[complex, float]:
    i = int(np.argmax(gaps))
    return complex(points.ravel()[i]), float(gaps.ravel()[i])


def classify_limit(seq, grid: PolarGrid | None = None, tol: float = 1e-6,
                   agreement: float = 0.99) -> LimitVerdict:
    """Decide whether ``seq`` looks uniformly ``d``-Cauchy and classify its limit.

    1. The last ``ceil(len/3)`` members (at least two) are compared
       pairwise; a sup-``d`` gap of ``tol`` or more gives
       :class:`NotUniformlyCauchy` with the worst point as witness.
    2. Points where the last member exceeds ``1/tol`` in modulus are
       "blowing up". If at least ``agreement`` of the grid blows up the
       limit is :class:`InfiniteType`; if at most ``1 - agreement`` does it is
       :class:`FiniteType`; anything in between is a mixed regime, reported
       as :class:`NotUniformlyCauchy`.
    """
    seq = list(seq)
    if not seq:
        raise ValueError("empty sequence")
    if len(seq) < 3:
        raise ValueError("need at least 3 polynomials")
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    grid = grid or PolarGrid()
    pts = grid.points()
    if pts.size < 3 or np.unique(pts).size < 3:
        raise ValueError("degenerate grid")

    n_tail = max(2, math.ceil(len(seq) / 3))
    first = len(seq) - n_tail
    vals = [grid.eval_polynomial(p if isinstance(p, Polynomial) else Polynomial(p)) for p in seq[first:]]
    charts = [gmap_array(v) for v in vals]

    worst = (-1.0, None, None)
    for a in range(n_tail):
        for b in range(a + 1, n_tail):
            gaps = np.abs(charts[a] - charts[b])
            z, g = _witness(pts, gaps)
            if g > worst[0]:
                worst = (g, (first + a, first + b), z)
    gap, pair, z = worst
    if gap >= tol:
        return NotUniformlyCauchy(z, pair, gap, "trailing members differ by at least tol in d")

    last = vals[-1]
    blow = np.abs(last) > 1.0 / tol
    frac = float(np.mean(blow))
    if frac <= 1.0 - agreement:
        return FiniteType(pts, last, gap)
    if frac < agreement:
        idx = np.flatnonzero(blow.ravel())[0]
        return NotUniformlyCauchy(complex(pts.ravel()[idx]), (len(seq) - 1, len(seq) - 1), gap,
                                  f"mixed regime: {frac:.3%} of the grid blows up")

    try:
        theta, _ = recover_theta(last)
        offsets = []
        constant = True
        for v in vals[:-1]:
            th, _ = recover_theta(v)
            k = np.round((theta - th) / TWO_PI)
            offsets.append(int(k.flat[0]))
            if not np.all(k == k.flat[0]):
                constant = False
        offsets.append(0)
    except ValueError as exc:
        return NotUniformlyCauchy(0j, (len(seq) - 1, len(seq) - 1), gap, f"argument recovery failed: {exc}")
    return InfiniteType(pts, theta, tuple(offsets), constant, gap)


def theta_error(verdict: InfiniteType, theta_true) -> float:
    """Max grid error of the recovered angle modulo ``2 pi``."""
    diff = np.angle(np.exp(1j * (verdict.theta - np.asarray(theta_true))))
    return float(np.max(np.abs(diff)))


def circle_coverage(theta, bins: int = 64) -> np.ndarray:
    """Hit counts of ``exp(i theta)`` in ``bins`` equal arcs of the circle."""
    a = np.mod(np.asarray(theta, dtype=float).ravel(), TWO_PI)
    idx = np.minimum((a / (TWO_PI / bins)).astype(int), bins - 1)
    return np.bincount(idx, minlength=bins)
