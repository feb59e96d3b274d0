"""QRCS from first principles: interference of isotropic point scatterers.

The plate is replaced by a lattice of point scatterers. The scattered
amplitude toward a detector is the coherent sum ``F(q) = sum_j exp(i q.x_j) dS``
and the cross section is

    sigma_Q = 4 pi A_perp |F(q_detected)|^2 / integral |F(q)|^2 dOmega

where the integral runs over detection directions for a fixed incidence.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .analytic import CrossSection, Method, Mode, aperture_transform_rect
from .errors import DenominatorUnderflowError
from .quadrature import SphereQuadrature, sphere_quadrature
from .scene import (DEFAULT_SCATTERER_CAP, Direction, PlateTarget, ScattererGrid, Wave,
                    make_grid, projected_area, scattering_vector)

DENOMINATOR_METHODS = ("numeric", "analytic")
DOMAINS = ("hemisphere", "sphere")
NORMALIZATIONS = ("incident", "reference")

_NORMAL_INCIDENCE = Direction(math.pi, 0.0)


@dataclass(frozen=True)
class QrcsConfig:
    """Settings for the numeric engine.

    Attributes:
        samples_per_wavelength: lattice density along each plate side.
        n_polar, n_azimuth: quadrature size for the denominator integral.
        denominator_method: ``"numeric"`` sums the lattice at every quadrature
            node; ``"analytic"`` uses the closed-form plate transform there.
        scatterer_cap: refuse lattices larger than this.
        denominator_floor: smallest acceptable denominator (m^4 sr).
        domain: ``"hemisphere"`` integrates the reflection half-space only
            (opaque plate); ``"sphere"`` integrates all directions.
        normalization: ``"incident"`` evaluates the denominator at the actual
            incidence; ``"reference"`` always uses normal incidence, which makes
            the normalisation a function of plate size and wavelength only.
        threads: kernel thread count; ``None`` uses every core. Results do
            not depend on it.
    """

    samples_per_wavelength: int = 10
    n_polar: int = 64
    n_azimuth: int = 128
    denominator_method: str = "numeric"
    scatterer_cap: int = DEFAULT_SCATTERER_CAP
    denominator_floor: float = 1e-30
    domain: str = "hemisphere"
    normalization: str = "incident"
    threads: int | None = None

    def __post_init__(self):
        for name in ("samples_per_wavelength", "n_polar", "n_azimuth", "scatterer_cap"):
            value = getattr(self, name)
            if int(value) != value or value < 2:
                raise ValueError(f"{name} must be an integer >= 2, got {value}")
        if self.denominator_method not in DENOMINATOR_METHODS:
            raise ValueError(f"denominator_method must be one of {DENOMINATOR_METHODS}")
        if self.domain not in DOMAINS:
            raise ValueError(f"domain must be one of {DOMAINS}")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        if not self.denominator_floor >= 0:
            raise ValueError("denominator_floor must be >= 0")
        if self.threads is not None and self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def kernel_threads(self) -> int:
        return self.threads or kernels.default_threads()

    @property
    def quadrature(self) -> SphereQuadrature:
        return sphere_quadrature(self.n_polar, self.n_azimuth, self.domain == "hemisphere")

    def fingerprint(self) -> str:
        """Short stable hash of every setting that can change a result."""
        fields = asdict(self)
        fields.pop("threads")
        text = ";".join(f"{k}={fields[k]!r}" for k in sorted(fields))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


@lru_cache(maxsize=16)
def _cached_grid(plate: PlateTarget, wave: Wave, spw: int, cap: int) -> ScattererGrid:
    return make_grid(plate, wave, spw, cap)


def grid_for(plate: PlateTarget, wave: Wave, config: QrcsConfig) -> ScattererGrid:
    return _cached_grid(plate, wave, config.samples_per_wavelength, config.scatterer_cap)


def interference_intensity(grid: ScattererGrid, q, threads: int = 1):
    """``|sum_j exp(i (qx x_j + qy y_j)) dS|^2`` in m^4.

    ``q`` is one wave vector (length 2 or 3, only the in-plane part is used)
    or an array of them with shape (n, 2) or (n, 3); the result is a float or
    an array of length n.
    """
    q = np.asarray(q, dtype=np.float64)
    single = q.ndim == 1
    q2 = np.atleast_2d(q)
    out = kernels.interference_batch(grid.x, grid.y, grid.cell_area,
                                     np.ascontiguousarray(q2[:, 0]),
                                     np.ascontiguousarray(q2[:, 1]), threads)
    return float(out[0]) if single else np.asarray(out)


def _pattern(plate, wave, config, u_incident, u_detected):
    """|F|^2 toward each row of ``u_detected`` for propagation ``u_incident``."""
    q = wave.wavenumber * (u_incident[None, :] - u_detected)
    if config.denominator_method == "analytic":
        return np.square(aperture_transform_rect(plate, q[:, 0], q[:, 1]))
    return interference_intensity(grid_for(plate, wave, config), q, config.kernel_threads)


def denominator(plate: PlateTarget, wave: Wave, incident: Direction, config: QrcsConfig) -> float:
    """Integral of |F|^2 over detection directions for a fixed incidence (m^4 sr).

    Raises:
        DenominatorUnderflowError: if the integral falls below ``config.denominator_floor``.
    """
    quad = config.quadrature
    values = _pattern(plate, wave, config, incident.unit(), quad.directions)
    total = quad.integrate(values)
    if not total > config.denominator_floor:
        raise DenominatorUnderflowError(
            f"denominator underflow: {total:.3e} <= floor {config.denominator_floor:.3e}")
    return total


@lru_cache(maxsize=64)
def _reference_denominator(plate: PlateTarget, wave: Wave, config: QrcsConfig) -> float:
    return denominator(plate, wave, _NORMAL_INCIDENCE, config)


def _normalising_denominator(plate, wave, incident, config):
    if config.normalization == "reference":
        return _reference_denominator(plate, wave, config)
    return denominator(plate, wave, incident, config)


def _check_incident(incident: Direction) -> np.ndarray:
    u = incident.unit()
    if u[2] > 1e-15:
        raise ValueError("incident direction must point toward the plate (negative z component)")
    return u


def qrcs_bistatic_values(plate: PlateTarget, wave: Wave, incident: Direction, detected,
                         config: QrcsConfig) -> np.ndarray:
    """Vectorised :func:`qrcs_full` over detection unit vectors ``detected`` (shape (n, 3))."""
    u_i = _check_incident(incident)
    u_d = np.atleast_2d(np.asarray(detected, dtype=np.float64))
    grid = grid_for(plate, wave, config)
    q = wave.wavenumber * (u_i[None, :] - u_d)
    numer = interference_intensity(grid, q, config.kernel_threads)
    denom = _normalising_denominator(plate, wave, incident, config)
    sigma = 4.0 * math.pi * projected_area(plate, incident.theta) * numer / denom
    if config.domain == "hemisphere":
        sigma = np.where(u_d[:, 2] < 0.0, 0.0, sigma)
    return sigma


def qrcs_full(plate: PlateTarget, wave: Wave, incident: Direction, detected: Direction,
              config: QrcsConfig | None = None) -> CrossSection:
    """Numeric QRCS for one incidence/detection pair.

    With a hemisphere domain, detection directions behind the plate
    (negative z) return 0.

    Raises:
        ValueError: if ``incident`` does not travel toward the plate.
        DenominatorUnderflowError, GridTooDenseError: from the engine.
    """
    config = config or QrcsConfig()
    _check_incident(incident)
    u_d = detected.unit()
    if config.domain == "hemisphere" and u_d[2] < 0.0:
        return CrossSection(0.0, Mode.QUANTUM, Method.NUMERIC)
    grid = grid_for(plate, wave, config)
    numer = interference_intensity(grid, scattering_vector(wave, incident, detected))
    denom = _normalising_denominator(plate, wave, incident, config)
    value = 4.0 * math.pi * projected_area(plate, incident.theta) * numer / denom
    return CrossSection(value, Mode.QUANTUM, Method.NUMERIC)


def monostatic_directions(theta: float) -> tuple[Direction, Direction]:
    """(incident, detected) for a radar at polar angle ``theta`` in the phi = 0 plane."""
    radar = np.array([math.sin(theta), 0.0, math.cos(theta)])
    return Direction.from_vector(-radar), Direction.from_vector(radar)


def qrcs_monostatic(plate: PlateTarget, wave: Wave, theta: float,
                    config: QrcsConfig | None = None) -> CrossSection:
    """Numeric backscatter QRCS with the radar at ``theta`` (radians, |theta| <= pi/2)."""
    if not abs(theta) <= math.pi / 2 + 1e-12:
        raise ValueError(f"monostatic angle must satisfy |theta| <= pi/2, got {theta}")
    incident, detected = monostatic_directions(theta)
    return qrcs_full(plate, wave, incident, detected, config)


def qrcs_monostatic_values(plate: PlateTarget, wave: Wave, thetas,
                           config: QrcsConfig | None = None) -> np.ndarray:
    config = config or QrcsConfig()
    return np.array([qrcs_monostatic(plate, wave, float(t), config).value
                     for t in np.asarray(thetas, dtype=np.float64)])


def chi_factor(plate: PlateTarget, wave: Wave, config: QrcsConfig | None = None) -> float:
    """High-frequency validity factor.

    Ratio of the normal-incidence denominator to its large-plate limit
    ``lambda^2 a b`` per integrated hemisphere. It tends to 1 for plates many
    wavelengths across and to ``2 pi a b / lambda^2`` for small ones. At
    normal incidence with the hemisphere domain,
    ``qrcs_full = qrcs_plate_highfreq / chi``.
    """
    config = config or QrcsConfig()
    hemispheres = 1 if config.domain == "hemisphere" else 2
    d = denominator(plate, wave, _NORMAL_INCIDENCE, config)
    return d / (hemispheres * wave.wavelength ** 2 * plate.area)
