"""Polynomial containers: algebraic, trigonometric and Chebyshev.

Approximants in this package can reach degrees in the hundreds of
thousands, so besides Horner evaluation at arbitrary points each class
offers an FFT path for equispaced samples on a circle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P

from .config import fft_workers


def _trim_degree(c: np.ndarray) -> int:
    nz = np.flatnonzero(c)
    return int(nz[-1]) if nz.size else 0


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Complex polynomial ``sum_k c_k ((z - center) / scale)**k``.

    ``center=0, scale=1`` gives the plain monomial form. The shifted and
    scaled form is what least-squares fits on non-disc compacts produce;
    re-expanding those around the origin would be badly conditioned.
    """

    coeffs: np.ndarray
    center: complex = 0.0
    scale: float = 1.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "scale", float(self.scale))
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @property
    def degree(self) -> int:
        """Highest index with a nonzero coefficient (0 for the zero polynomial)."""
        return _trim_degree(self.coeffs)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        u = (z - self.center) / self.scale if (self.center != 0 or self.scale != 1) else z
        out = P.polyval(u, self.coeffs)
        return complex(out) if np.ndim(out) == 0 else out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        n = max(a.size, b.size)
        a = np.pad(a, (0, n - a.size))
        b = np.pad(b, (0, n - b.size))
        return bool(np.array_equal(a, b)) and self.center == other.center and self.scale == other.scale

    __hash__ = None

    def trimmed(self) -> "Polynomial":
        return Polynomial(self.coeffs[: self.degree + 1], self.center, self.scale)

    def dilate(self, r: float) -> "Polynomial":
        """The polynomial ``z -> self(center + r (z - center))``."""
        k = np.arange(self.coeffs.size)
        with np.errstate(under="ignore"):
            w = np.power(float(r), k)
        return Polynomial(self.coeffs * w, self.center, self.scale)

    def scaled(self, factor: complex) -> "Polynomial":
        return Polynomial(self.coeffs * factor, self.center, self.scale)

    def eval_ring(self, radius: float, n: int, offset: float = 0.0) -> np.ndarray:
        """Values at ``center + radius * exp(2j*pi*(j + offset)/n)``, j < n.

        Coefficients are folded modulo ``n`` and a single length-``n`` FFT
        finishes the job, so the cost is ``O(degree + n log n)``.
        """
        c = self.coeffs[: self.degree + 1]
        k = np.arange(c.size)
        rho = float(radius) / self.scale
        with np.errstate(under="ignore"):
            w = c * np.power(rho, k)
        if offset:
            w = w * np.exp(2j * np.pi * offset * k / n)
        pad = (-w.size) % n
        folded = np.pad(w, (0, pad)).reshape(-1, n).sum(axis=0)
        return scipy.fft.ifft(folded, workers=fft_workers()) * n

    @classmethod
    def constant(cls, c: complex) -> "Polynomial":
        return cls(np.array([c], dtype=complex))

    def __repr__(self):
        head = np.array2string(self.coeffs[:6], precision=6, separator=", ")
        more = "" if self.coeffs.size <= 6 else f" ... ({self.coeffs.size} coeffs)"
        extra = "" if (self.center == 0 and self.scale == 1) else f", center={self.center}, scale={self.scale}"
        return f"Polynomial({head}{more}{extra})"


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """``sum_{k=-M}^{M} c_k exp(i k phi)``; ``coeffs[j]`` holds ``c_{j-M}``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError("trigonometric coefficients need odd length 2M+1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return (self.coeffs.size - 1) // 2

    @property
    def degree(self) -> int:
        M = self.order
        nz = np.flatnonzero(self.coeffs)
        if nz.size == 0:
            return 0
        return int(np.max(np.abs(nz - M)))

    def coefficient(self, k: int) -> complex:
        M = self.order
        if abs(k) > M:
            return 0j
        return complex(self.coeffs[k + M])

    def __call__(self, phi):
        """Evaluate at angles ``phi`` (radians)."""
        phi = np.asarray(phi, dtype=float)
        e = np.exp(1j * phi)
        out = P.polyval(e, self.coeffs) * np.exp(-1j * self.order * phi)
        return complex(out) if np.ndim(out) == 0 else out

    def eval_equispaced(self, n: int, offset: float = 0.0) -> np.ndarray:
        """Values at ``phi_j = 2*pi*(j + offset)/n``."""
        M = self.order
        k = np.arange(-M, M + 1)
        w = self.coeffs * np.exp(2j * np.pi * offset * k / n)
        folded = np.zeros(n, dtype=complex)
        np.add.at(folded, k % n, w)
        return scipy.fft.ifft(folded, workers=fft_workers()) * n


@dataclass(frozen=True, eq=False)
class ChebyshevSeries:
    """Chebyshev series ``sum_k a_k T_k(x)`` on [-1, 1].

    Coefficients are stored as floats when all of them are real.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs))
        c = c.real.astype(float) if not np.iscomplexobj(c) or not np.any(c.imag) else c.astype(complex)
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return _trim_degree(self.coeffs)

    def __call__(self, x):
        out = C.chebval(np.asarray(x, dtype=float), self.coeffs[: self.degree + 1])
        if np.ndim(out) == 0:
            return complex(out) if np.iscomplexobj(out) else float(out)
        return out

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.coeffs)

    def to_polynomial(self) -> Polynomial:
        """Monomial form. Only sensible for small degrees."""
        return Polynomial(C.cheb2poly(self.coeffs[: self.degree + 1]))
