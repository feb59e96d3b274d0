"""Angle and plate-size sweeps with CSV and SVG serialisation."""
from __future__ import annotations

import datetime as _dt
import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from . import analytic
from .numeric import QrcsConfig, chi_factor, qrcs_monostatic_values
from .scene import PlateTarget, Wave

PINNED_TIMESTAMP = "1970-01-01T00:00:00Z"
DEFAULT_DB_FLOOR = -80.0
RATIO_FLOOR = 1e-12  # relative to the classical peak


@dataclass
class SweepResult:
    """Sweep output: an increasing axis plus named columns of equal length.

    ``axis_name`` is the CSV header of the first column (``theta_deg`` for
    angle sweeps). Missing values are NaN and serialise as empty cells.
    """

    angles: np.ndarray
    series: dict
    metadata: dict = field(default_factory=dict)
    axis_name: str = "theta_deg"

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=np.float64)
        if self.angles.ndim != 1 or self.angles.size == 0:
            raise ValueError("sweep axis must be a nonempty 1-D sequence")
        if np.any(np.diff(self.angles) <= 0):
            raise ValueError("sweep axis must be strictly increasing")
        cols = {}
        for name, values in self.series.items():
            if not isinstance(name, str) or not name.strip():
                raise ValueError("series names must be nonempty strings")
            if "," in name or "\n" in name:
                raise ValueError(f"series name {name!r} contains a separator")
            arr = np.asarray(values, dtype=np.float64)
            if arr.shape != self.angles.shape:
                raise ValueError(f"series {name!r} has length {arr.size}, expected {self.angles.size}")
            cols[name] = arr
        if not cols:
            raise ValueError("sweep needs at least one series")
        self.series = cols
        self.metadata = {str(k): str(v) for k, v in self.metadata.items()}

    def __len__(self):
        return int(self.angles.size)


def _timestamp(timestamp):
    if timestamp is not None:
        return timestamp
    return _dt.datetime.now(_dt.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _axis(start, end, step, what):
    if not step > 0:
        raise ValueError(f"{what} step must be > 0")
    if start > end:
        raise ValueError(f"empty sweep range: {what} start {start} > end {end}")
    n = int(math.floor((end - start) / step + 1e-9)) + 1
    # rounding keeps 0.5-degree grids free of accumulated drift
    return np.round(start + step * np.arange(n), 12)


def run_angle_sweep(plate: PlateTarget, wave: Wave, theta_start: float, theta_end: float,
                    step: float, modes=("quantum", "classical"), methods=("analytic",),
                    config: QrcsConfig | None = None, timestamp: str | None = None) -> SweepResult:
    """Monostatic sweep over polar angle (degrees, within [-90, 90]).

    Columns are ``qrcs_analytic``, ``crcs_analytic`` and ``qrcs_numeric`` as
    requested, plus ``ratio`` (quantum over classical) when both modes are
    present. There is no numeric classical engine, so that pair is skipped.
    """
    modes = {analytic.Mode(m).value for m in modes}
    methods = {analytic.Method(m).value for m in methods}
    if not modes or not methods:
        raise ValueError("at least one mode and one method are required")
    if theta_start < -90 or theta_end > 90:
        raise ValueError("sweep must stay within [-90, 90] degrees")
    if modes == {"classical"} and methods == {"numeric"}:
        raise ValueError("classical cross section has no numeric method")
    config = config or QrcsConfig()
    angles = _axis(theta_start, theta_end, step, "theta")
    theta = np.radians(angles)

    series = {}
    if "analytic" in methods:
        if "quantum" in modes:
            series["qrcs_analytic"] = analytic.qrcs_highfreq_values(plate, wave, theta)
        if "classical" in modes:
            series["crcs_analytic"] = analytic.crcs_values(plate, wave, theta)
    if "numeric" in methods and "quantum" in modes:
        series["qrcs_numeric"] = qrcs_monostatic_values(plate, wave, theta, config)
    if modes == {"quantum", "classical"}:
        classical = analytic.crcs_values(plate, wave, theta)
        quantum = series.get("qrcs_analytic", series.get("qrcs_numeric"))
        floor = RATIO_FLOOR * float(np.max(classical))
        with np.errstate(divide="ignore", invalid="ignore"):
            series["ratio"] = np.where(classical > floor, quantum / classical, np.nan)

    metadata = {
        "kind": "angle_sweep",
        "width_a_m": repr(plate.width_a),
        "height_b_m": repr(plate.height_b),
        "wavelength_m": repr(wave.wavelength),
        "modes": "+".join(sorted(modes)),
        "methods": "+".join(sorted(methods)),
        "units": "m^2",
        "config": config.fingerprint(),
        "generated": _timestamp(timestamp),
    }
    if "numeric" in methods:
        metadata["normalization"] = config.normalization
        metadata["domain"] = config.domain
    return SweepResult(angles, series, metadata)


def run_chi_sweep(wave: Wave, dim_start: float, dim_end: float, step: float,
                  config: QrcsConfig | None = None, timestamp: str | None = None) -> SweepResult:
    """chi for square plates whose side runs from ``dim_start`` to ``dim_end`` wavelengths."""
    if not dim_start > 0:
        raise ValueError("dim_start must be > 0")
    config = config or QrcsConfig()
    dims = _axis(dim_start, dim_end, step, "dimension")
    chis = [chi_factor(PlateTarget(d * wave.wavelength, d * wave.wavelength), wave, config)
            for d in dims]
    metadata = {
        "kind": "chi_sweep",
        "wavelength_m": repr(wave.wavelength),
        "units": "dimensionless",
        "config": config.fingerprint(),
        "generated": _timestamp(timestamp),
    }
    return SweepResult(dims, {"chi": np.array(chis)}, metadata, axis_name="dim_lambda")


def _fmt(v: float) -> str:
    return "" if math.isnan(v) else format(v, ".17g")


def to_csv(result: SweepResult) -> str:
    lines = [f"# {k}={v}" for k, v in result.metadata.items()]
    names = list(result.series)
    lines.append(",".join([result.axis_name] + names))
    cols = [result.series[n] for n in names]
    for i, a in enumerate(result.angles):
        lines.append(",".join([_fmt(a)] + [_fmt(c[i]) for c in cols]))
    return "\n".join(lines) + "\n"


def read_csv(text: str) -> SweepResult:
    """Parse :func:`to_csv` output back into a :class:`SweepResult`."""
    metadata = {}
    rows = []
    header = None
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            metadata[key] = value
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(c) if c else math.nan for c in line.split(",")])
    if header is None:
        raise ValueError("CSV has no header row")
    data = np.array(rows, dtype=np.float64).reshape(len(rows), len(header))
    series = {name: data[:, i + 1] for i, name in enumerate(header[1:])}
    return SweepResult(data[:, 0], series, metadata, axis_name=header[0])


def to_dbsm(sigma, floor_db: float = DEFAULT_DB_FLOOR):
    """``10 log10(sigma / 1 m^2)``, clipped from below at ``floor_db``."""
    s = np.asarray(sigma, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        db = 10.0 * np.log10(s)
    db = np.where(np.isnan(s), np.nan, np.maximum(np.nan_to_num(db, nan=floor_db, neginf=floor_db), floor_db))
    return float(db) if db.ndim == 0 else db


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo, hi, n=6):
    span = hi - lo
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=mag * 10)
    first = math.ceil(lo / step) * step
    return [first + i * step for i in range(int((hi - first) / step + 1e-9) + 1)]


def to_svg(result: SweepResult, y_scale: str = "linear", db_floor: float = DEFAULT_DB_FLOOR,
           title: str | None = None) -> str:
    """Render every series as one polyline in a standalone SVG chart.

    ``y_scale="dbsm"`` plots ``10 log10(value)`` with zeros clipped to ``db_floor``.
    NaN cells are left out of the polyline.
    """
    if len(result) < 2:
        raise ValueError("an SVG chart needs at least 2 rows")
    if y_scale not in ("linear", "dbsm"):
        raise ValueError("y_scale must be 'linear' or 'dbsm'")
    width, height = 800, 500
    left, right, top, bottom = 80, 170, 40, 60
    pw, ph = width - left - right, height - top - bottom

    ys = {n: (to_dbsm(v, db_floor) if y_scale == "dbsm" else v) for n, v in result.series.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()] or [np.zeros(1)])
    if finite.size == 0:
        finite = np.zeros(1)
    y_lo, y_hi = float(finite.min()), float(finite.max())
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    x_lo, x_hi = float(result.angles[0]), float(result.angles[-1])

    def sx(x):
        return left + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return top + (y_hi - y) / (y_hi - y_lo) * ph

    x_label = {"theta_deg": "theta (deg)", "dim_lambda": "plate side (wavelengths)"}.get(
        result.axis_name, result.axis_name)
    units = result.metadata.get("units", "")
    if y_scale == "dbsm":
        y_label = "cross section (dBsm)"
    elif units == "m^2":
        y_label = "cross section (m^2)"
    else:
        y_label = f"value ({units})" if units else "value"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{left + pw / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>')
    for t in _ticks(x_lo, x_hi):
        x = sx(t)
        out.append(f'<line x1="{x:.2f}" y1="{top + ph}" x2="{x:.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{top + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y_lo, y_hi):
        y = sy(t)
        out.append(f'<line x1="{left - 5}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end">{t:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 15}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {top + ph / 2:.1f})">{escape(y_label)}</text>')

    for i, (name, values) in enumerate(ys.items()):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{sx(a):.2f},{sy(v):.2f}" for a, v in zip(result.angles, values) if np.isfinite(v))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 15 + 18 * i
        lx = left + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
