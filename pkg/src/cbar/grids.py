"""Sampling meshes for sup-norm estimates on the disc, circle and segment."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .config import DEFAULT_EXCLUSION
from .polynomials import Polynomial


def _nudge_angles(angles: np.ndarray, node_angles, exclusion: float) -> tuple[np.ndarray, np.ndarray]:
    """Push angles lying within ``exclusion`` of a node out to that distance."""
    out = angles.copy()
    moved = np.zeros(angles.shape, dtype=bool)
    for a in node_angles:
        delta = np.angle(np.exp(1j * (out - a)))
        close = np.abs(delta) < exclusion
        if np.any(close):
            out[close] = a + np.where(delta[close] >= 0, exclusion, -exclusion)
            moved |= close
    return out, moved


@dataclass(frozen=True)
class DiscGrid:
    """Boundary ring plus an interior polar mesh of the closed unit disc.

    Boundary angles are ``2*pi*(j + 1/2)/n_boundary``; interior rings sit at
    radii ``j/n_radial`` (``j < n_radial``, the centre included) with
    ``n_angular`` half-offset angles each. Points closer than ``exclusion``
    to a boundary node in ``nodes`` are moved out to that distance.
    """

    n_boundary: int = 512
    n_angular: int = 64
    n_radial: int = 128
    nodes: tuple = field(default=())
    exclusion: float = DEFAULT_EXCLUSION

    def __post_init__(self):
        if self.n_boundary < 1 or self.n_angular < 1 or self.n_radial < 1:
            raise ValueError("grid counts must be positive")

    @classmethod
    def verification(cls) -> "DiscGrid":
        """The default independent verification mesh: 2048 + 256x64."""
        return cls(n_boundary=2048, n_angular=256, n_radial=64)

    def with_nodes(self, nodes) -> "DiscGrid":
        return replace(self, nodes=tuple(complex(z) for z in nodes))

    def refined(self, factor: int = 2) -> "DiscGrid":
        return replace(self, n_boundary=self.n_boundary * factor, n_angular=self.n_angular * factor)

    @property
    def size(self) -> int:
        return self.n_boundary + self.n_angular * self.n_radial

    def boundary_angles(self) -> tuple[np.ndarray, np.ndarray]:
        base = 2 * np.pi * (np.arange(self.n_boundary) + 0.5) / self.n_boundary
        return _nudge_angles(base, [np.angle(z) for z in self.nodes], self.exclusion)

    def boundary_points(self) -> np.ndarray:
        return np.exp(1j * self.boundary_angles()[0])

    def ring_radii(self) -> np.ndarray:
        return np.arange(self.n_radial) / self.n_radial

    def interior_points(self) -> np.ndarray:
        ang = 2 * np.pi * (np.arange(self.n_angular) + 0.5) / self.n_angular
        pts = self.ring_radii()[:, None] * np.exp(1j * ang)[None, :]
        return pts.ravel()

    def points(self) -> np.ndarray:
        return np.concatenate([self.boundary_points(), self.interior_points()])

    def eval_polynomial(self, p: Polynomial) -> np.ndarray:
        """``p`` at :meth:`points`, via ring FFTs when ``p`` is centred at 0."""
        if p.center != 0:
            return p(self.points())
        angles, moved = self.boundary_angles()
        bvals = p.eval_ring(1.0, self.n_boundary, 0.5)
        if np.any(moved):
            bvals[moved] = p(np.exp(1j * angles[moved]))
        rings = [p.eval_ring(rho, self.n_angular, 0.5) for rho in self.ring_radii()]
        return np.concatenate([bvals] + rings)


@dataclass(frozen=True)
class PolarGrid:
    """Rays from the origin: ``n_angular`` half-offset angles times radii
    ``j/n_radial`` for ``j = 0..n_radial`` (centre and boundary included).

    Point arrays have shape ``(n_angular, n_radial + 1)``.
    """

    n_angular: int = 256
    n_radial: int = 64

    def __post_init__(self):
        if self.n_angular < 3 or self.n_radial < 2:
            raise ValueError("degenerate polar grid")

    @property
    def size(self) -> int:
        return self.n_angular * (self.n_radial + 1)

    def angles(self) -> np.ndarray:
        return 2 * np.pi * (np.arange(self.n_angular) + 0.5) / self.n_angular

    def radii(self) -> np.ndarray:
        return np.arange(self.n_radial + 1) / self.n_radial

    def points(self) -> np.ndarray:
        return self.radii()[None, :] * np.exp(1j * self.angles())[:, None]

    def eval_polynomial(self, p: Polynomial) -> np.ndarray:
        if p.center != 0:
            return p(self.points())
        rings = [p.eval_ring(rho, self.n_angular, 0.5) for rho in self.radii()]
        return np.stack(rings, axis=1)


@dataclass(frozen=True)
class CircleGrid:
    """Equispaced angles ``2*pi*(j + offset)/n`` on the unit circle."""

    n: int = 2048
    offset: float = 0.5

    def angles(self) -> np.ndarray:
        return 2 * np.pi * (np.arange(self.n) + self.offset) / self.n

    def points(self) -> np.ndarray:
        return np.exp(1j * self.angles())

    @property
    def size(self) -> int:
        return self.n


@dataclass(frozen=True)
class SegmentGrid:
    """``n`` equispaced points on [-1, 1]; odd ``n`` includes 0."""

    n: int = 4097

    def points(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.n)

    @property
    def spacing(self) -> float:
        return 2.0 / (self.n - 1)

    @property
    def size(self) -> int:
        return self.n
