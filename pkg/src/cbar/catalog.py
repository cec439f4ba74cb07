"""Named targets, addressable from the CLI by name plus JSON parameters."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import CPointArray, Infinite
from .functions import BoundaryTheta, FiniteTypeFunction, InfiniteTypeFunction
from .polynomials import Polynomial


@dataclass(frozen=True, eq=False)
class PathFunction:
    """A compactification-valued function on the circle or on [-1, 1].

    ``func`` maps an array of sample points (unit complex numbers for the
    circle, reals for the segment) to a :class:`CPointArray`.
    """

    name: str
    domain: str
    func: Callable[[np.ndarray], CPointArray]
    params: dict = field(default_factory=dict)

    def evaluate(self, x) -> CPointArray:
        return self.func(np.asarray(x))


def _as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace("i", "j"))
    return complex(v)


def _principal_in(theta: float) -> float:
    """Representative of ``theta`` in (-pi, pi]."""
    t = math.remainder(theta, 2 * math.pi)
    return math.pi if t == -math.pi else t


# ---------------------------------------------------------------------------
# finite type


def log1m() -> FiniteTypeFunction:
    """``log(1/(1-z))``; ``+inf`` at ``z = 1``."""
    return FiniteTypeFunction("log1m", lambda z: -np.log(1 - z), ((1 + 0j, Infinite(0.0)),))


def strip() -> FiniteTypeFunction:
    """``log((1+z)/(1-z))``, conformal onto the strip ``|Im w| < pi/2``."""
    nodes = ((1 + 0j, Infinite(0.0)), (-1 + 0j, Infinite(math.pi)))
    return FiniteTypeFunction("strip", lambda z: np.log(1 + z) - np.log(1 - z), nodes)


def logsum(c=(1.0,), theta=(0.0,)) -> FiniteTypeFunction:
    """``sum_k c_k log(1/(exp(i theta_k) - z))`` with distinct ``theta_k``.

    Each term is taken as ``-i t_k - Log(1 - z exp(-i theta_k))`` with
    ``t_k`` the representative of ``theta_k`` in (-pi, pi]; the argument of
    the principal logarithm then stays in the right half-plane on the
    closed disc minus the node, so the branch is continuous there.
    """
    cs = [_as_complex(v) for v in c]
    ts = [float(t) for t in theta]
    if len(cs) != len(ts) or not cs:
        raise ValueError("logsum needs matching non-empty c and theta lists")
    if any(v == 0 for v in cs):
        raise ValueError("logsum coefficients must be nonzero")
    reduced = sorted(t % (2 * math.pi) for t in ts)
    if any(b - a <= 0 for a, b in zip(reduced, reduced[1:])):
        raise ValueError("logsum angles must be distinct modulo 2*pi")
    consts = [_principal_in(t) for t in ts]
    units = [complex(math.cos(t), math.sin(t)) for t in ts]

    def func(z):
        out = np.zeros(np.shape(z), dtype=complex)
        for ck, tk, uk in zip(cs, consts, units):
            out = out + ck * (-1j * tk - np.log(1 - z * uk.conjugate()))
        return out

    nodes = tuple((u, Infinite(math.atan2(ck.imag, ck.real))) for u, ck in zip(units, cs))
    params = {"c": [[v.real, v.imag] for v in cs], "theta": ts}
    return FiniteTypeFunction("logsum", func, nodes, params)


def exp() -> FiniteTypeFunction:
    return FiniteTypeFunction("exp", np.exp, entire=True)


def identity() -> FiniteTypeFunction:
    return FiniteTypeFunction("identity", lambda z: np.asarray(z, dtype=complex), entire=True)


def const(value=0.0) -> FiniteTypeFunction:
    v = _as_complex(value)
    return FiniteTypeFunction("const", lambda z: np.full(np.shape(z), v, dtype=complex), params={"value": [v.real, v.imag]}, entire=True)


def poly(coeffs) -> FiniteTypeFunction:
    p = Polynomial([_as_complex(v) for v in coeffs])
    return FiniteTypeFunction("poly", lambda z: p(z), params={"coeffs": [[c.real, c.imag] for c in p.coeffs]}, entire=True)


# ---------------------------------------------------------------------------
# infinite type


def theta_const(value=0.0) -> InfiniteTypeFunction:
    return InfiniteTypeFunction(BoundaryTheta(float(value)), "theta-const", {"value": float(value)})


def theta_re() -> InfiniteTypeFunction:
    """``theta(z) = Re z``."""
    return InfiniteTypeFunction(BoundaryTheta(0.0, [1.0], [0.0]), "theta-re")


def theta_im() -> InfiniteTypeFunction:
    """``theta(z) = Im z``."""
    return InfiniteTypeFunction(BoundaryTheta(0.0, [0.0], [1.0]), "theta-im")


def theta_karg(k: int = 6, order: int = 64) -> InfiniteTypeFunction:
    """``theta(z) = k * arg(2 + z)``, the angle of ``n*(2+z)**k`` as ``n`` grows.

    ``arg(2 + e^{i phi}) = sum_m (-1)**(m+1) sin(m phi) / (m 2**m)``.
    """
    m = np.arange(1, order + 1)
    b = k * (-1.0) ** (m + 1) / (m * 2.0**m)
    return InfiniteTypeFunction(BoundaryTheta(0.0, np.zeros(order), b), "theta-karg", {"k": k, "order": order})


def theta_fourier(a0=0.0, a=(), b=()) -> InfiniteTypeFunction:
    return InfiniteTypeFunction(BoundaryTheta(a0, list(a), list(b)), "theta-fourier",
                                {"a0": a0, "a": list(a), "b": list(b)})


# ---------------------------------------------------------------------------
# circle and segment targets


def circle_id() -> PathFunction:
    return PathFunction("circle-id", "circle", lambda zeta: CPointArray.from_finite(zeta))


def circle_inf() -> PathFunction:
    """``inf*exp(i phi)`` at ``exp(i phi)``."""
    return PathFunction("circle-inf", "circle", lambda zeta: CPointArray.from_angles(np.angle(zeta)))


def circle_tan(at_pi: float = 0.0) -> PathFunction:
    """``tan(phi/2)`` on the circle, ``inf*exp(i at_pi)`` at ``phi = pi``.

    The one-sided limits at ``phi = pi`` are ``+inf`` and ``-inf``, so no
    choice of ``at_pi`` makes this continuous for ``d``.
    """
    def func(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        hit = np.abs(zeta + 1) < 1e-15
        with np.errstate(all="ignore"):
            vals = np.tan(0.5 * np.angle(zeta)).astype(complex)
        direction = complex(math.cos(at_pi), math.sin(at_pi))
        return CPointArray(np.where(hit, direction, vals), hit)

    return PathFunction("circle-tan", "circle", func, {"at_pi": at_pi})


def _reciprocal_power(power: int, at_zero: float, name: str) -> PathFunction:
    direction = complex(math.cos(at_zero), math.sin(at_zero))

    def func(x):
        x = np.asarray(x, dtype=float)
        zero = x == 0
        with np.errstate(divide="ignore"):
            vals = 1.0 / np.where(zero, 1.0, x) ** power
        return CPointArray(np.where(zero, direction, vals + 0j), zero)

    return PathFunction(name, "segment", func, {"at_zero": at_zero})


def seg_x2() -> PathFunction:
    return PathFunction("x2", "segment", lambda x: CPointArray.from_finite(np.asarray(x, float) ** 2))


def seg_invx2() -> PathFunction:
    """``1/x**2`` with ``+inf`` at 0."""
    return _reciprocal_power(2, 0.0, "invx2")


def seg_invx(at_zero: float = 0.0) -> PathFunction:
    """``1/x`` with ``inf*exp(i at_zero)`` at 0; never continuous for ``d``."""
    return _reciprocal_power(1, at_zero, "invx")


def seg_poly(coeffs) -> PathFunction:
    p = np.polynomial.Polynomial([float(v) for v in coeffs])
    return PathFunction("segpoly", "segment", lambda x: CPointArray.from_finite(p(np.asarray(x, float))))


# ---------------------------------------------------------------------------
# registry

DISC_FINITE = {
    "log1m": log1m,
    "strip": strip,
    "logsum": logsum,
    "exp": exp,
    "identity": identity,
    "const": const,
}
DISC_INFINITE = {
    "theta-const": theta_const,
    "theta-re": theta_re,
    "theta-im": theta_im,
    "theta-karg": theta_karg,
    "theta-fourier": theta_fourier,
}
CIRCLE = {"circle-id": circle_id, "circle-inf": circle_inf, "circle-tan": circle_tan}
SEGMENT = {"x2": seg_x2, "invx2": seg_invx2, "invx": seg_invx}

NAMES = sorted([*DISC_FINITE, *DISC_INFINITE, *CIRCLE, *SEGMENT, "poly", "segpoly"])


def resolve(name: str, params: dict | None = None):
    """Build a target from its name and parameters.

    ``poly:[c0, c1, ...]`` and ``segpoly:[...]`` carry their coefficients
    inline (JSON); complex coefficients are ``[re, im]`` pairs.
    """
    params = dict(params or {})
    if ":" in name:
        head, _, tail = name.partition(":")
        try:
            coeffs = json.loads(tail)
        except json.JSONDecodeError as exc:
            raise ValueError(f"bad coefficient list in {name!r}: {exc}") from None
        if head == "poly":
            return poly(coeffs)
        if head == "segpoly":
            return seg_poly(coeffs)
        raise ValueError(f"unknown target family {head!r}")
    for table in (DISC_FINITE, DISC_INFINITE, CIRCLE, SEGMENT):
        if name in table:
            return table[name](**params)
    raise ValueError(f"unknown target {name!r}; known: {', '.join(NAMES)}")


def domain_of(target) -> str:
    if isinstance(target, PathFunction):
        return target.domain
    return "disc"
