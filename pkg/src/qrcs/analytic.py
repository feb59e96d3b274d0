"""Closed-form high-frequency cross sections of a flat rectangular plate."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .scene import PlateTarget, Wave

_SERIES_CUTOFF = 1e-4


class Mode(str, enum.Enum):
    QUANTUM = "quantum"
    CLASSICAL = "classical"


class Method(str, enum.Enum):
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class CrossSection:
    value: float
    mode: Mode
    method: Method

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError(f"cross section must be non-negative, got {self.value}")

    def __float__(self):
        return float(self.value)


def sinc(x):
    """Unnormalised sinc, ``sin(x)/x`` with ``sinc(0) = 1``.

    Works on scalars and arrays. Small arguments use the Taylor series;
    a sine that is zero to within the rounding of its argument is returned
    as an exact 0 so that nulls land on 0.0.
    """
    xa = np.asarray(x, dtype=np.float64)
    s = np.sin(xa)
    s = np.where(np.abs(s) <= 4.0 * np.spacing(np.abs(xa)), 0.0, s)
    small = np.abs(xa) < _SERIES_CUTOFF
    x2 = xa * xa
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, s / np.where(small, 1.0, xa))
    return float(out) if out.ndim == 0 else out


def aperture_transform_rect(plate: PlateTarget, qx, qy):
    """Fourier transform of the uniform plate indicator at in-plane wave vector (qx, qy).

    Returns ``a*b*sinc(qx*a/2)*sinc(qy*b/2)`` in m^2 (scalar or array).
    """
    return plate.area * sinc(np.multiply(qx, 0.5 * plate.width_a)) * sinc(np.multiply(qy, 0.5 * plate.height_b))


def _peak(plate: PlateTarget, wave: Wave) -> float:
    return 4.0 * math.pi * plate.area ** 2 / wave.wavelength ** 2


def qrcs_highfreq_values(plate: PlateTarget, wave: Wave, theta):
    """Vectorised high-frequency QRCS, ``4 pi (ab)^2/lambda^2 |cos t| sinc^2(k a sin t)``."""
    theta = np.asarray(theta, dtype=np.float64)
    lobe = sinc(wave.wavenumber * plate.width_a * np.sin(theta))
    return _peak(plate, wave) * np.abs(np.cos(theta)) * np.square(lobe)


def crcs_values(plate: PlateTarget, wave: Wave, theta):
    """Vectorised classical RCS; the obliquity factor is ``cos^2`` instead of ``|cos|``."""
    theta = np.asarray(theta, dtype=np.float64)
    lobe = sinc(wave.wavenumber * plate.width_a * np.sin(theta))
    return _peak(plate, wave) * np.square(np.cos(theta)) * np.square(lobe)


def qrcs_plate_highfreq(plate: PlateTarget, wave: Wave, theta: float) -> CrossSection:
    """Monostatic QRCS of the plate in the phi = 0 plane, valid when the plate is large in wavelengths."""
    return CrossSection(float(qrcs_highfreq_values(plate, wave, theta)), Mode.QUANTUM, Method.ANALYTIC)


def crcs_plate(plate: PlateTarget, wave: Wave, theta: float) -> CrossSection:
    return CrossSection(float(crcs_values(plate, wave, theta)), Mode.CLASSICAL, Method.ANALYTIC)


def sidelobe_ratio(theta: float) -> float:
    """QRCS/CRCS ratio at ``theta``, i.e. ``1/|cos(theta)|``.

    Raises:
        ValueError: at or beyond grazing, where both cross sections vanish.
    """
    if not abs(theta) < math.pi / 2:
        raise ValueError("grazing angle: ratio undefined")
    return 1.0 / abs(math.cos(theta))
