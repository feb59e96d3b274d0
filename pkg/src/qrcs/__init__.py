"""Quantum and classical radar cross sections of flat rectangular plates.

Closed-form high-frequency expressions live in :mod:`qrcs.analytic`, the
point-scatterer interference engine in :mod:`qrcs.numeric`, the range
equation and sensitivity limits in :mod:`qrcs.link`.
"""
from .analytic import (CrossSection, Method, Mode, aperture_transform_rect, crcs_plate,
                       qrcs_plate_highfreq, sidelobe_ratio, sinc)
from .errors import DenominatorUnderflowError, GridTooDenseError, QrcsError, TargetInvisibleError
from .kernels import BACKEND
from .link import (PhaseLimits, QuantumLink, is_supersensitive, max_range, phase_limits,
                   qi_snr_gain, received_intensity, received_power)
from .numeric import (QrcsConfig, chi_factor, denominator, interference_intensity,
                      qrcs_full, qrcs_monostatic)
from .quadrature import SphereQuadrature, sphere_quadrature
from .report import SweepResult, read_csv, run_angle_sweep, run_chi_sweep, to_csv, to_svg
from .scene import (Direction, PlateTarget, ScattererGrid, Wave, make_grid, projected_area,
                    scattering_vector)

__version__ = "0.1.0"
