"""Quantum radar range equation and phase-sensitivity limits."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import TargetInvisibleError

_FOUR_PI_SQ = (4.0 * math.pi) ** 2


@dataclass(frozen=True)
class QuantumLink:
    """Range-equation inputs.

    Attributes:
        transmit_power: transmitted power (W).
        receive_aperture: receiver collecting area (m^2).
        sigma_q: target quantum radar cross section (m^2).
        range: target distance (m); may be ``None`` when solving for range.
        amplitude_norm: photon field amplitude normalisation (dimensionless).
    """

    transmit_power: float
    receive_aperture: float
    sigma_q: float
    range: float | None = None
    amplitude_norm: float = 1.0

    def __post_init__(self):
        if not self.transmit_power > 0:
            raise ValueError("transmit_power must be > 0")
        if not self.receive_aperture > 0:
            raise ValueError("receive_aperture must be > 0")
        if not self.sigma_q >= 0:
            raise ValueError("sigma_q must be >= 0")
        if self.range is not None and not self.range > 0:
            raise ValueError("range must be > 0")


@dataclass(frozen=True)
class PhaseLimits:
    photon_count: int
    heisenberg: float
    shot_noise: float


def received_power(link: QuantumLink) -> float:
    """``P_t A_r sigma_Q / ((4 pi)^2 R^4)`` in watts."""
    if link.range is None:
        raise ValueError("received_power needs a range")
    return link.transmit_power * link.receive_aperture * link.sigma_q / (_FOUR_PI_SQ * link.range ** 4)


def received_intensity(amplitude_norm: float, sigma_q: float, range: float) -> float:
    """Expected scattered intensity at the receiver, ``4 pi eps^2 sigma_Q / ((4 pi)^2 R^4)``.

    Multiplying by the receive aperture gives :func:`received_power` for a
    transmitter of power ``4 pi eps^2``.
    """
    if not range > 0:
        raise ValueError("range must be > 0")
    return transmit_power_equivalent(amplitude_norm) * sigma_q / (_FOUR_PI_SQ * range ** 4)


def transmit_power_equivalent(amplitude_norm: float) -> float:
    return 4.0 * math.pi * amplitude_norm ** 2


def max_range(link: QuantumLink, min_detectable_power: float) -> float:
    """Largest range at which the received power still reaches ``min_detectable_power``.

    Raises:
        ValueError: for a non-positive power threshold.
        TargetInvisibleError: when ``sigma_q`` is zero.
    """
    if not min_detectable_power > 0:
        raise ValueError("min_detectable_power must be > 0")
    if link.sigma_q == 0:
        raise TargetInvisibleError("target invisible: no finite range")
    return (link.transmit_power * link.receive_aperture * link.sigma_q
            / (_FOUR_PI_SQ * min_detectable_power)) ** 0.25


def _check_count(photon_count) -> int:
    if isinstance(photon_count, bool) or int(photon_count) != photon_count or photon_count < 1:
        raise ValueError(f"photon count must be an integer >= 1, got {photon_count}")
    return int(photon_count)


def phase_limits(photon_count: int) -> PhaseLimits:
    """Heisenberg (1/N) and shot-noise (1/sqrt N) phase floors in radians."""
    n = _check_count(photon_count)
    return PhaseLimits(n, 1.0 / n, 1.0 / math.sqrt(n))


def is_supersensitive(measured_phase_resolution: float, photon_count: int) -> bool:
    """True when the resolution strictly beats the shot-noise limit."""
    if not measured_phase_resolution > 0:
        raise ValueError("phase resolution must be > 0")
    return measured_phase_resolution < phase_limits(photon_count).shot_noise


def phase_regime(measured_phase_resolution: float, photon_count: int) -> str:
    """Classify a phase resolution: ``"classical"``, ``"supersensitive"`` or ``"unphysical"``.

    Anything below the Heisenberg floor cannot be reached by any strategy.
    """
    limits = phase_limits(photon_count)
    if not measured_phase_resolution > 0:
        raise ValueError("phase resolution must be > 0")
    if measured_phase_resolution < limits.heisenberg:
        return "unphysical"
    if measured_phase_resolution < limits.shot_noise:
        return "supersensitive"
    return "classical"


def qi_snr_gain(entanglement_bits: int, reading: str = "exponential") -> float:
    """Quantum-illumination SNR gain for ``m`` entangled bits.

    ``reading="exponential"`` gives ``2**m``; ``"linear"`` gives ``2*m``
    (with m = 0 mapped to a gain of 1, i.e. no advantage).
    """
    if isinstance(entanglement_bits, bool) or int(entanglement_bits) != entanglement_bits or entanglement_bits < 0:
        raise ValueError(f"entanglement bits must be an integer >= 0, got {entanglement_bits}")
    m = int(entanglement_bits)
    if reading == "exponential":
        return float(2 ** m)
    if reading == "linear":
        return float(max(1, 2 * m))
    raise ValueError(f"unknown reading {reading!r}")
