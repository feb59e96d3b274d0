"""Product Gauss-Legendre x uniform-azimuth rules on the sphere."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .scene import Direction


@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    """Nodes as unit vectors (``directions``, shape (n, 3)) with weights in steradians.

    ``hemisphere`` rules cover only z >= 0.
    """

    directions: np.ndarray
    weights: np.ndarray
    n_polar: int
    n_azimuth: int
    hemisphere: bool = False

    @property
    def nodes(self):
        return [(Direction.from_vector(u), float(w)) for u, w in zip(self.directions, self.weights)]

    @property
    def total_weight(self) -> float:
        return math.fsum(self.weights)

    def integrate(self, values) -> float:
        values = np.asarray(values, dtype=np.float64)
        return math.fsum(self.weights * values)

    def integrate_function(self, f) -> float:
        """Integrate ``f(theta, phi)`` (vectorised over node arrays)."""
        u = self.directions
        theta = np.arccos(np.clip(u[:, 2], -1.0, 1.0))
        phi = np.mod(np.arctan2(u[:, 1], u[:, 0]), 2.0 * math.pi)
        return self.integrate(f(theta, phi))


@lru_cache(maxsize=32)
def sphere_quadrature(n_polar: int, n_azimuth: int, hemisphere: bool = False) -> SphereQuadrature:
    """Gauss-Legendre in cos(theta) crossed with ``n_azimuth`` equal azimuth steps.

    The full-sphere rule puts the polar nodes on [-1, 1]; the hemisphere rule
    maps them onto [0, 1]. Weights sum to 4 pi (2 pi for a hemisphere).
    """
    if n_polar < 2 or n_azimuth < 2:
        raise ValueError(f"quadrature needs n_polar, n_azimuth >= 2, got {n_polar}, {n_azimuth}")
    mu, w = np.polynomial.legendre.leggauss(n_polar)
    if hemisphere:
        mu = 0.5 * (mu + 1.0)
        w = 0.5 * w
    phi = 2.0 * math.pi * np.arange(n_azimuth) / n_azimuth
    mu_n = np.repeat(mu, n_azimuth)
    phi_n = np.tile(phi, n_polar)
    s = np.sqrt(np.clip(1.0 - mu_n * mu_n, 0.0, None))
    dirs = np.column_stack([s * np.cos(phi_n), s * np.sin(phi_n), mu_n])
    weights = np.repeat(w, n_azimuth) * (2.0 * math.pi / n_azimuth)
    dirs.flags.writeable = False
    weights.flags.writeable = False
    return SphereQuadrature(dirs, weights, n_polar, n_azimuth, hemisphere)
