"""Command-line front end.

Subcommands: ``sweep``, ``compare`` (``sweep --mode both``), ``chi``,
``link`` and ``limits``. Exit codes: 0 success, 1 computation failure,
2 usage or validation error (one diagnostic line on stderr, no files).

Settings may also come from a TOML file passed with ``--config``. Top-level
keys apply to every subcommand, a table named after the subcommand
overrides them, and command-line flags override both.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import link as qlink
from .errors import QrcsError
from .numeric import QrcsConfig
from .report import PINNED_TIMESTAMP, run_angle_sweep, run_chi_sweep, to_csv, to_svg
from .scene import PlateTarget, Wave

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

PROG = "qrcs"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# defaults applied after the config file has been merged
_DEFAULTS = {
    "theta_start": -90.0, "theta_end": 90.0, "step": 0.5,
    "mode": "both", "method": "analytic",
    "spw": 10, "n_polar": 64, "n_azimuth": 128, "denominator": "numeric",
    "domain": "hemisphere", "normalization": "incident", "scatterer_cap": 10_000_000,
    "y_scale": "linear", "deterministic": False, "eps": 1.0, "qi_reading": "exponential",
}


def _engine_flags(p):
    g = p.add_argument_group("numeric engine")
    g.add_argument("--spw", type=int, help="scatterers per wavelength along each side (default 10)")
    g.add_argument("--n-polar", type=int, help="Gauss-Legendre polar nodes (default 64)")
    g.add_argument("--n-azimuth", type=int, help="azimuth nodes (default 128)")
    g.add_argument("--denominator", choices=("numeric", "analytic"), help="denominator evaluation")
    g.add_argument("--domain", choices=("hemisphere", "sphere"), help="detection-direction domain")
    g.add_argument("--normalization", choices=("incident", "reference"),
                   help="denominator at the actual incidence or fixed at normal incidence")
    g.add_argument("--scatterer-cap", type=int, help="maximum lattice size")
    g.add_argument("--threads", type=int, help="kernel threads (default: all cores)")


def _output_flags(p):
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--svg", help="optional SVG output path")
    p.add_argument("--y-scale", choices=("linear", "dbsm"), help="SVG y axis")
    p.add_argument("--deterministic", action="store_true", default=None,
                   help="pin the metadata timestamp")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Quantum radar cross section toolkit")
    parser.add_argument("--config", help="TOML file with default settings")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("sweep", "compare"):
        p = sub.add_parser(name, help="monostatic angle sweep" if name == "sweep"
                           else "quantum vs classical sweep (sweep --mode both)")
        p.add_argument("--config", help="TOML file with default settings")
        p.add_argument("--a", type=float, help="plate width (m)")
        p.add_argument("--b", type=float, help="plate height (m)")
        p.add_argument("--lambda", dest="wavelength", type=float, help="wavelength (m)")
        p.add_argument("--theta-start", type=float, help="first angle, degrees (default -90)")
        p.add_argument("--theta-end", type=float, help="last angle, degrees (default 90)")
        p.add_argument("--step", type=float, help="angle step, degrees (default 0.5)")
        if name == "sweep":
            p.add_argument("--mode", choices=("quantum", "classical", "both"))
        p.add_argument("--method", choices=("analytic", "numeric", "both"))
        _output_flags(p)
        _engine_flags(p)

    p = sub.add_parser("chi", help="validity factor versus square plate size")
    p.add_argument("--config", help="TOML file with default settings")
    p.add_argument("--lambda", dest="wavelength", type=float, help="wavelength (m)")
    p.add_argument("--dim-start", type=float, help="first side length, wavelengths")
    p.add_argument("--dim-end", type=float, help="last side length, wavelengths")
    p.add_argument("--dim-step", type=float, help="side length step, wavelengths")
    _output_flags(p)
    _engine_flags(p)

    p = sub.add_parser("link", help="quantum radar range equation")
    p.add_argument("--config", help="TOML file with default settings")
    p.add_argument("--pt", type=float, help="transmit power (W)")
    p.add_argument("--ar", type=float, help="receive aperture (m^2)")
    p.add_argument("--sigma", type=float, help="quantum radar cross section (m^2)")
    p.add_argument("--range", type=float, help="target range (m); reports received power")
    p.add_argument("--pr-min", type=float, help="minimum detectable power (W); reports max range")
    p.add_argument("--eps", type=float, help="field amplitude normalisation (default 1)")

    p = sub.add_parser("limits", help="phase-sensitivity limits and QI gain")
    p.add_argument("--config", help="TOML file with default settings")
    p.add_argument("--photons", type=int, help="photon number N")
    p.add_argument("--qi-bits", type=int, help="entangled bits m")
    p.add_argument("--resolution", type=float, help="measured phase resolution (rad) to classify")
    p.add_argument("--qi-reading", choices=("exponential", "linear"),
                   help="gain 2**m (default) or 2*m")
    return parser


def _load_config(path: str, command: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"invalid config {path}: {exc}") from None
    merged = {k: v for k, v in data.items() if not isinstance(v, dict)}
    for table in ("qrcs", command):
        if isinstance(data.get(table), dict):
            merged.update(data[table])
    out = {}
    for key, value in merged.items():
        key = key.replace("-", "_")
        out["wavelength" if key == "lambda" else key] = value
    return out


def _resolve(args) -> argparse.Namespace:
    file_values = _load_config(args.config, args.command) if args.config else {}
    ns = vars(args)
    known = set(ns) - {"command", "config"}
    unknown = set(file_values) - known
    if unknown:
        raise UsageError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    for key in known:
        if ns[key] is None:
            ns[key] = file_values.get(key, _DEFAULTS.get(key))
    if args.command == "compare":
        ns["mode"] = "both"
    return args


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            flag = "--lambda" if name == "wavelength" else "--" + name.replace("_", "-")
            raise UsageError(f"missing required option {flag}")


def _qrcs_config(args) -> QrcsConfig:
    return QrcsConfig(samples_per_wavelength=args.spw, n_polar=args.n_polar,
                      n_azimuth=args.n_azimuth, denominator_method=args.denominator,
                      scatterer_cap=args.scatterer_cap, domain=args.domain,
                      normalization=args.normalization, threads=args.threads)


def _both(choice):
    return ("quantum", "classical") if choice == "both" else (choice,)


def _methods(choice):
    return ("analytic", "numeric") if choice == "both" else (choice,)


def _write(args, result, title):
    csv_text = to_csv(result)
    svg_text = to_svg(result, args.y_scale, title=title) if args.svg else None
    Path(args.out).write_text(csv_text, encoding="utf-8", newline="\n")
    if svg_text is not None:
        Path(args.svg).write_text(svg_text, encoding="utf-8", newline="\n")


def _validate_outputs(args, rows):
    _require(args, "out")
    if args.svg and rows < 2:
        raise UsageError("an SVG chart needs at least 2 rows")


def cmd_sweep(args) -> int:
    _require(args, "a", "b", "wavelength")
    if args.theta_start > args.theta_end:
        raise UsageError("empty sweep range")
    if not args.step > 0:
        raise UsageError("--step must be > 0")
    if args.theta_start < -90 or args.theta_end > 90:
        raise UsageError("sweep must stay within [-90, 90] degrees")
    if args.mode == "classical" and args.method == "numeric":
        raise UsageError("classical cross section has no numeric method")
    try:
        plate = PlateTarget(args.a, args.b)
        wave = Wave(args.wavelength)
        config = _qrcs_config(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = int(math.floor((args.theta_end - args.theta_start) / args.step + 1e-9)) + 1
    _validate_outputs(args, rows)
    result = run_angle_sweep(plate, wave, args.theta_start, args.theta_end, args.step,
                             _both(args.mode), _methods(args.method), config,
                             timestamp=PINNED_TIMESTAMP if args.deterministic else None)
    _write(args, result, f"{args.a:g} m x {args.b:g} m plate, wavelength {args.wavelength:g} m")
    return 0


def cmd_chi(args) -> int:
    _require(args, "wavelength", "dim_start", "dim_end", "dim_step")
    if not args.dim_start > 0:
        raise UsageError("--dim-start must be > 0")
    if not args.dim_step > 0:
        raise UsageError("--dim-step must be > 0")
    if args.dim_start > args.dim_end:
        raise UsageError("empty dimension range")
    try:
        wave = Wave(args.wavelength)
        config = _qrcs_config(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = int(math.floor((args.dim_end - args.dim_start) / args.dim_step + 1e-9)) + 1
    _validate_outputs(args, rows)
    result = run_chi_sweep(wave, args.dim_start, args.dim_end, args.dim_step, config,
                           timestamp=PINNED_TIMESTAMP if args.deterministic else None)
    _write(args, result, f"chi versus plate size, wavelength {args.wavelength:g} m")
    return 0


def _sci(x: float) -> str:
    mantissa, exp = f"{x:.6e}".split("e")
    return f"{mantissa}e{int(exp)}"


def cmd_link(args) -> int:
    _require(args, "pt", "ar", "sigma")
    if (args.range is None) == (args.pr_min is None):
        raise UsageError("give exactly one of --range or --pr-min")
    if args.pr_min is not None and not args.pr_min > 0:
        raise UsageError("--pr-min must be > 0")
    try:
        link = qlink.QuantumLink(args.pt, args.ar, args.sigma, args.range, args.eps)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = [f"pt_watts={_sci(args.pt)}", f"ar_m2={_sci(args.ar)}", f"sigma_m2={_sci(args.sigma)}"]
    if args.range is not None:
        lines.append(f"range_m={_sci(args.range)}")
        lines.append(f"pr_watts={_sci(qlink.received_power(link))}")
    else:
        lines.append(f"pr_min_watts={_sci(args.pr_min)}")
        lines.append(f"rmax_meters={qlink.max_range(link, args.pr_min):.6f}")
    print("\n".join(lines))
    return 0


def cmd_limits(args) -> int:
    if args.photons is None and args.qi_bits is None:
        raise UsageError("give --photons and/or --qi-bits")
    if args.photons is not None and args.photons < 1:
        raise UsageError("--photons must be >= 1")
    if args.qi_bits is not None and args.qi_bits < 0:
        raise UsageError("--qi-bits must be >= 0")
    if args.resolution is not None:
        if args.photons is None:
            raise UsageError("--resolution needs --photons")
        if not args.resolution > 0:
            raise UsageError("--resolution must be > 0")
    lines = []
    if args.photons is not None:
        lim = qlink.phase_limits(args.photons)
        lines.append(f"photons={lim.photon_count}")
        lines.append(f"heisenberg_rad={lim.heisenberg:.15g}")
        lines.append(f"shot_noise_rad={lim.shot_noise:.15g}")
        if args.resolution is not None:
            lines.append(f"supersensitive={str(qlink.is_supersensitive(args.resolution, args.photons)).lower()}")
            lines.append(f"regime={qlink.phase_regime(args.resolution, args.photons)}")
    if args.qi_bits is not None:
        lines.append(f"qi_gain={qlink.qi_snr_gain(args.qi_bits, args.qi_reading):.15g}")
    print("\n".join(lines))
    return 0


_COMMANDS = {"sweep": cmd_sweep, "compare": cmd_sweep, "chi": cmd_chi,
             "link": cmd_link, "limits": cmd_limits}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _resolve(parser.parse_args(argv))
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except (QrcsError, ValueError, OSError) as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
