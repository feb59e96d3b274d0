"""Targets, illuminating waves, directions and the scatterer lattice.

Frame convention: the plate lies in the z = 0 plane, centred on the origin,
with its normal along +z. A :class:`Direction` is a *propagation* direction,
so a wave arriving from above the plate has a negative z component.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GridTooDenseError

DEFAULT_SCATTERER_CAP = 10_000_000


@dataclass(frozen=True)
class PlateTarget:
    """Flat rectangular plate, ``width_a`` along local x and ``height_b`` along y (m)."""

    width_a: float
    height_b: float

    def __post_init__(self):
        if not (self.width_a > 0 and self.height_b > 0):
            raise ValueError(f"plate dimensions must be positive, got {self.width_a} x {self.height_b}")

    @property
    def area(self) -> float:
        return self.width_a * self.height_b


@dataclass(frozen=True)
class Wave:
    wavelength: float

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength


@dataclass(frozen=True)
class Direction:
    """Unit propagation direction in spherical angles (radians).

    ``theta`` is measured from +z and normalised to [0, pi]; ``phi`` to
    [0, 2 pi). A negative polar angle is folded onto the opposite azimuth.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = math.remainder(self.theta, 2.0 * math.pi)
        phi = self.phi
        if theta < 0.0:
            theta, phi = -theta, phi + math.pi
        phi = phi % (2.0 * math.pi)
        if phi >= 2.0 * math.pi:  # tiny negative inputs round up to 2 pi
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_vector(cls, v) -> "Direction":
        x, y, z = (float(c) for c in v)
        rho = math.hypot(x, y)
        if rho == 0.0 and z == 0.0:
            raise ValueError("zero vector has no direction")
        theta = math.atan2(rho, z)
        phi = math.atan2(y, x) if (x or y) else 0.0
        return cls(theta, phi)

    def unit(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def reversed(self) -> "Direction":
        return Direction.from_vector(-self.unit())


@dataclass(frozen=True, eq=False)
class ScattererGrid:
    """Cell-centred lattice of isotropic point scatterers covering a plate.

    ``x`` and ``y`` are read-only coordinate arrays (m) in row-major lattice
    order; every scatterer carries the same ``cell_area`` (m^2).
    """

    x: np.ndarray
    y: np.ndarray
    cell_area: float
    samples_per_wavelength: int = 0
    shape: tuple = field(default=(0, 0))

    @property
    def count(self) -> int:
        return int(self.x.shape[0])

    @property
    def positions(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])

    @classmethod
    def from_points(cls, points, cell_area: float) -> "ScattererGrid":
        """Grid from explicit (x, y) positions, mainly for tests and custom targets."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if pts.shape[0] == 0:
            raise ValueError("grid must contain at least one scatterer")
        x = np.ascontiguousarray(pts[:, 0])
        y = np.ascontiguousarray(pts[:, 1])
        x.flags.writeable = False
        y.flags.writeable = False
        return cls(x, y, float(cell_area), 0, (pts.shape[0], 1))


def make_grid(plate: PlateTarget, wave: Wave, samples_per_wavelength: int,
              scatterer_cap: int = DEFAULT_SCATTERER_CAP) -> ScattererGrid:
    """Discretise the plate into a uniform cell-centred lattice.

    The cell count along each side is the smallest integer giving a spacing
    of at most ``wavelength / samples_per_wavelength``.

    Raises:
        ValueError: if ``samples_per_wavelength`` < 2.
        GridTooDenseError: if the lattice would exceed ``scatterer_cap`` points.
    """
    if int(samples_per_wavelength) != samples_per_wavelength or samples_per_wavelength < 2:
        raise ValueError(f"samples_per_wavelength must be an integer >= 2, got {samples_per_wavelength}")
    spw = int(samples_per_wavelength)
    # small slack so that e.g. 4 m / 0.1 m gives 40 cells, not 41
    nx = max(1, math.ceil(plate.width_a * spw / wave.wavelength - 1e-9))
    ny = max(1, math.ceil(plate.height_b * spw / wave.wavelength - 1e-9))
    if nx * ny > scatterer_cap:
        raise GridTooDenseError(f"grid too dense: {nx}x{ny} scatterers exceeds cap {scatterer_cap}")
    dx = plate.width_a / nx
    dy = plate.height_b / ny
    xs = -0.5 * plate.width_a + dx * (np.arange(nx) + 0.5)
    ys = -0.5 * plate.height_b + dy * (np.arange(ny) + 0.5)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    x = np.ascontiguousarray(gx.ravel())
    y = np.ascontiguousarray(gy.ravel())
    x.flags.writeable = False
    y.flags.writeable = False
    return ScattererGrid(x, y, dx * dy, spw, (nx, ny))


def projected_area(plate: PlateTarget, theta: float) -> float:
    """Plate area seen from polar angle ``theta``: ``a*b*|cos(theta)|``."""
    return plate.area * abs(math.cos(theta))


def scattering_vector(wave: Wave, incident: Direction, detected: Direction) -> np.ndarray:
    """Return ``k (u_incident - u_detected)`` in rad/m."""
    return wave.wavenumber * (incident.unit() - detected.unit())
