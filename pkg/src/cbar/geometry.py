"""Points of the disc compactification and the metrics on it.

A point of the compactification is either a finite complex number or a
point at infinity ``inf*exp(i*theta)``. The chart ``G(z) = z / (1 + |z|)``
(extended by ``G(inf*exp(i*theta)) = exp(i*theta)``) maps the whole space
homeomorphically onto the closed unit disc, and the metric ``d`` is the
Euclidean distance of the chart images.

Scalar points are the frozen dataclasses :class:`Finite` and
:class:`Infinite`. Bulk work goes through :class:`CPointArray`, which
stores finite values and unit directions side by side with a mask.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

TWO_PI = 2.0 * math.pi

# beyond this modulus z/(1+|z|) is evaluated in scaled form
_OVERFLOW_GUARD = 1e150


def normalize_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod of a tiny negative number can round back up to 2*pi
    if t >= TWO_PI:
        t = 0.0
    return t


@dataclass(frozen=True)
class Finite:
    """A finite point of the plane."""

    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"finite point must have a finite value, got {v!r}")
        object.__setattr__(self, "value", v)

    def __repr__(self):
        return f"Finite({self.value!r})"


@dataclass(frozen=True)
class Infinite:
    """The point at infinity in direction ``exp(i*angle)``.

    The angle is stored reduced to [0, 2*pi), so equality of two infinite
    points is equality of their reduced angles.
    """

    angle: float

    def __post_init__(self):
        a = float(self.angle)
        if not math.isfinite(a):
            raise ValueError(f"angle must be finite, got {a!r}")
        object.__setattr__(self, "angle", normalize_angle(a))

    @property
    def direction(self) -> complex:
        return complex(math.cos(self.angle), math.sin(self.angle))

    def __repr__(self):
        return f"Infinite({self.angle!r})"


CPoint = Union[Finite, Infinite]


class _ChordalInfinity:
    """The single point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_ChordalInfinity, ())


INFINITY = _ChordalInfinity()
ChordalPoint = Union[Finite, _ChordalInfinity]


def _chart_scalar(z: complex) -> complex:
    a = abs(z)
    if a <= _OVERFLOW_GUARD:
        return z / (1.0 + a)
    m = max(abs(z.real), abs(z.imag))
    u = z / m
    au = abs(u)
    return (u / au) * (1.0 / ((1.0 / m) / au + 1.0))


def gmap(p: CPoint) -> complex:
    """Chart image of a point in the closed unit disc.

    Examples
    --------
    >>> gmap(Finite(1))
    (0.5+0j)
    >>> gmap(Infinite(math.pi))
    (-1+1.2246467991473532e-16j)
    """
    if isinstance(p, Infinite):
        return p.direction
    if isinstance(p, Finite):
        return _chart_scalar(p.value)
    raise TypeError(f"not a compactification point: {p!r}")


def metric_d(p: CPoint, q: CPoint) -> float:
    """Distance ``|G(p) - G(q)|`` between two points."""
    return abs(gmap(p) - gmap(q))


def metric_d_cases(p: CPoint, q: CPoint) -> float:
    """Distance computed case by case with rearranged closed forms.

    Kept as an independent cross-check of :func:`metric_d`. Two finite
    points use ``|z1 - z2 + w| / (1 + |z1| + |z2| + |z1 z2|)`` with
    ``w = z1|z2| - z2|z1|``; a finite point ``|z| e^{ia}`` and ``inf*e^{it}``
    use ``|(|z| (e^{ia} - e^{it}) - e^{it}) / (1 + |z|)|`` with the chord
    written through ``sin((a - t)/2)``; two infinite points use
    ``2|sin(dt/2)|``.
    """
    if isinstance(p, Finite) and isinstance(q, Finite):
        z1, z2 = p.value, q.value
        a1, a2 = abs(z1), abs(z2)
        w = z1 * a2 - z2 * a1
        return abs(z1 - z2 + w) / (1.0 + a1 + a2 + a1 * a2)
    if isinstance(p, Infinite) and isinstance(q, Infinite):
        return abs(2.0 * math.sin(0.5 * (p.angle - q.angle)))
    if isinstance(p, Infinite):
        p, q = q, p
    z = p.value
    a = abs(z)
    alpha = math.atan2(z.imag, z.real) if a > 0 else q.angle
    half = 0.5 * (alpha - q.angle)
    # exp(i alpha) - exp(i theta), free of cancellation
    chord = 2j * math.sin(half) * complex(math.cos(q.angle + half), math.sin(q.angle + half))
    rho = a / (1.0 + a) if a < 1.0 else 1.0 / (1.0 / a + 1.0)
    return abs(chord * rho - q.direction / (1.0 + a))


def chordal_chi(p: ChordalPoint, q: ChordalPoint) -> float:
    """Chordal distance on the one-point compactification."""
    p_inf = p is INFINITY
    q_inf = q is INFINITY
    if p_inf and q_inf:
        return 0.0
    if p_inf or q_inf:
        z = q.value if p_inf else p.value
        return 1.0 / math.sqrt(1.0 + abs(z) ** 2)
    z1, z2 = p.value, q.value
    return abs(z1 - z2) / (math.sqrt(1.0 + abs(z1) ** 2) * math.sqrt(1.0 + abs(z2) ** 2))


def phi(p: CPoint) -> ChordalPoint:
    """Collapse every infinite point to the single point at infinity."""
    if isinstance(p, Infinite):
        return INFINITY
    return p


def phi_r(p: CPoint, R: float) -> complex:
    """Radial clamp onto the closed disc of radius ``R``."""
    if not R > 0:
        raise ValueError(f"clamp radius must be positive, got {R!r}")
    if isinstance(p, Infinite):
        return R * p.direction
    z = p.value
    a = abs(z)
    if a < R:
        return z
    return R * (z / a)


# ---------------------------------------------------------------------------
# array form


@dataclass(frozen=True)
class CPointArray:
    """A flat array of compactification points.

    ``values`` holds the finite value where ``infinite`` is False and the
    unit direction ``exp(i*theta)`` where it is True.
    """

    values: np.ndarray
    infinite: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        m = np.asarray(self.infinite, dtype=bool)
        if v.shape != m.shape:
            raise ValueError("values and infinite mask must have the same shape")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "infinite", m)

    @classmethod
    def from_finite(cls, values) -> "CPointArray":
        v = np.asarray(values, dtype=complex)
        return cls(v, np.zeros(v.shape, dtype=bool))

    @classmethod
    def from_angles(cls, angles) -> "CPointArray":
        a = np.asarray(angles, dtype=float)
        return cls(np.exp(1j * a), np.ones(a.shape, dtype=bool))

    @classmethod
    def from_points(cls, points: Iterable[CPoint]) -> "CPointArray":
        pts = list(points)
        vals = np.empty(len(pts), dtype=complex)
        inf = np.zeros(len(pts), dtype=bool)
        for i, p in enumerate(pts):
            if isinstance(p, Infinite):
                vals[i] = p.direction
                inf[i] = True
            elif isinstance(p, Finite):
                vals[i] = p.value
            else:
                vals[i] = complex(p)
        return cls(vals, inf)

    def __len__(self):
        return self.values.size

    def __getitem__(self, i) -> CPoint:
        v = complex(self.values.flat[i])
        if self.infinite.flat[i]:
            return Infinite(math.atan2(v.imag, v.real))
        return Finite(v)

    @property
    def shape(self):
        return self.values.shape

    def reshape(self, *shape) -> "CPointArray":
        return CPointArray(self.values.reshape(*shape), self.infinite.reshape(*shape))

    def take(self, idx) -> "CPointArray":
        return CPointArray(self.values[idx], self.infinite[idx])

    def chart(self) -> np.ndarray:
        """Chart images ``G(p)`` of all points."""
        return np.where(self.infinite, self.values, gmap_array(self.values))


def gmap_array(z) -> np.ndarray:
    """Vectorized chart ``z / (1 + |z|)`` for finite values."""
    z = np.asarray(z, dtype=complex)
    a = np.abs(z)
    out = z / (1.0 + a)
    big = ~(a <= _OVERFLOW_GUARD)
    if np.any(big):
        zb = z[big]
        m = np.maximum(np.abs(zb.real), np.abs(zb.imag))
        u = zb / m
        au = np.abs(u)
        out[big] = (u / au) / ((1.0 / m) / au + 1.0)
    return out


def chart_of(x) -> np.ndarray:
    """Chart images of a :class:`CPointArray` or of plain finite values."""
    if isinstance(x, CPointArray):
        return x.chart()
    return gmap_array(x)


def metric_d_array(p, q) -> np.ndarray:
    """Elementwise ``d`` between two point arrays (or finite value arrays)."""
    return np.abs(chart_of(p) - chart_of(q))


def metric_d_cases_array(p: CPointArray, q: CPointArray) -> np.ndarray:
    """Vectorized counterpart of :func:`metric_d_cases`."""
    p_inf, q_inf = p.infinite, q.infinite
    out = np.empty(p.values.shape, dtype=float)

    ff = ~p_inf & ~q_inf
    z1, z2 = p.values[ff], q.values[ff]
    a1, a2 = np.abs(z1), np.abs(z2)
    w = z1 * a2 - z2 * a1
    out[ff] = np.abs(z1 - z2 + w) / (1.0 + a1 + a2 + a1 * a2)

    ii = p_inf & q_inf
    t1 = np.angle(p.values[ii])
    t2 = np.angle(q.values[ii])
    out[ii] = np.abs(2.0 * np.sin(0.5 * (t1 - t2)))

    mixed = p_inf ^ q_inf
    z = np.where(p_inf, q.values, p.values)[mixed]
    u = np.where(p_inf, p.values, q.values)[mixed]
    t = np.angle(u)
    a = np.abs(z)
    alpha = np.where(a > 0, np.angle(z), t)
    half = 0.5 * (alpha - t)
    chord = 2j * np.sin(half) * np.exp(1j * (t + half))
    with np.errstate(divide="ignore", over="ignore"):
        rho = 1.0 / (1.0 / a + 1.0)
    out[mixed] = np.abs(chord * rho - u / (1.0 + a))
    return out


def chordal_chi_array(z1, z2, inf1=None, inf2=None) -> np.ndarray:
    """Vectorized chordal distance; ``inf1``/``inf2`` mark the point at infinity."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    inf1 = np.zeros(z1.shape, bool) if inf1 is None else np.asarray(inf1, bool)
    inf2 = np.zeros(z2.shape, bool) if inf2 is None else np.asarray(inf2, bool)
    s1 = np.sqrt(1.0 + np.abs(z1) ** 2)
    s2 = np.sqrt(1.0 + np.abs(z2) ** 2)
    with np.errstate(invalid="ignore", over="ignore"):
        out = np.abs(z1 - z2) / (s1 * s2)
    out = np.where(inf1 & ~inf2, 1.0 / s2, out)
    out = np.where(inf2 & ~inf1, 1.0 / s1, out)
    out = np.where(inf1 & inf2, 0.0, out)
    return out


def chi_of_phi_array(p: CPointArray, q: CPointArray) -> np.ndarray:
    """``chi(Phi(p), Phi(q))`` for two point arrays."""
    return chordal_chi_array(p.values, q.values, p.infinite, q.infinite)


def phi_r_array(p: CPointArray, R: float) -> np.ndarray:
    """Vectorized :func:`phi_r`."""
    if not R > 0:
        raise ValueError(f"clamp radius must be positive, got {R!r}")
    v = p.values
    a = np.abs(v)
    with np.errstate(invalid="ignore", divide="ignore"):
        clamped = np.where(a < R, v, R * v / np.where(a == 0, 1.0, a))
    return np.where(p.infinite, R * v, clamped)


def distance_to_infinity(p) -> np.ndarray:
    """``d``-distance of each point to the circle of infinite points."""
    return 1.0 - np.abs(chart_of(p))


def as_cpoints(values: Sequence[CPoint] | CPointArray) -> CPointArray:
    if isinstance(values, CPointArray):
        return values
    if isinstance(values, np.ndarray) and values.dtype != object:
        return CPointArray.from_finite(values)
    return CPointArray.from_points(values)
