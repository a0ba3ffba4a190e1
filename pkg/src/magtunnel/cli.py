"""Command-line front end: ``magtunnel <subcommand> [options]``.

Tables go to standard output (or ``--out``) as CSV or JSON; diagnostics go
to standard error. Exit status is 0 on success, 1 for usage or
configuration errors and 2 when the physics has no answer (no well, no
resonance, no periodic orbit, unreachable accuracy).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .errors import DomainError, MagTunnelError
from .potential import FAMILIES, effective_potential, even_polynomial, turning_point, well_exists
from .resonance import (
    ROOT_TOL,
    VALIDITY_THRESHOLD,
    discrete_fields,
    find_resonance,
    probability_curve,
)
from .trajectory import extend_orbit, integrate_cycle
from .units import PhysicalParams


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    energy_depth: float = 1e-3
    well_scale: float = 140.0
    well_strength: float = 1e-3
    barrier_length: float = 3000.0
    mass: float = 1.0
    family: str = "quartic"
    coeffs: str = ""  # "k:c,k:c" for a custom even polynomial
    tol_quad: float = 1e-12
    tol_ode: float = 1e-12
    tol_root: float = ROOT_TOL
    format: str = "csv"
    out: str = ""

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")
        if self.family not in FAMILIES and self.family != "polynomial":
            raise UsageError(f"unknown family {self.family!r}; choose from {', '.join([*FAMILIES, 'polynomial'])}")
        if self.family == "polynomial" and not self.coeffs:
            raise UsageError("family 'polynomial' needs coeffs, e.g. coeffs = 1:1,2:1")
        for name in ("tol_quad", "tol_ode", "tol_root"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise UsageError(f"{name} must be a positive number, got {value!r}")
        self.params()
        self.potential_family()

    def params(self) -> PhysicalParams:
        try:
            return PhysicalParams(self.energy_depth, self.well_scale, self.well_strength, self.barrier_length, self.mass)
        except DomainError as exc:
            raise UsageError(str(exc)) from exc

    def potential_family(self):
        if not self.coeffs:
            return FAMILIES[self.family]
        try:
            terms = [(int(k), float(c)) for k, c in (item.split(":") for item in self.coeffs.split(","))]
            return even_polynomial(terms)
        except (ValueError, DomainError) as exc:
            raise UsageError(f"bad coeffs {self.coeffs!r}: expected 'k:c,k:c' with integer k >= 1") from exc

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            lines.append(f"{f.name} = {value!r}" if isinstance(value, float) else f"{f.name} = {value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, base: "RunConfig | None" = None) -> "RunConfig":
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for number, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = (part.strip() for part in line.partition("="))
            key = key.replace("-", "_")
            if not sep or key not in types:
                raise UsageError(f"config line {number}: expected 'key = value' with a known key, got {raw!r}")
            if types[key] == "float":
                try:
                    values[key] = float(value)
                except ValueError:
                    raise UsageError(f"config line {number}: {key} needs a number, got {value!r}") from None
            else:
                values[key] = value
        return replace(base or cls(), **values)


# flags that override RunConfig fields
_CONFIG_FLAGS = {
    "energy_depth": ("--energy-depth", float, "bound-state depth |E| in eV"),
    "well_scale": ("--well-scale", float, "transverse length a in angstrom"),
    "well_strength": ("--well-strength", float, "transverse potential strength u0 in eV"),
    "barrier_length": ("--barrier-length", float, "barrier length R in angstrom"),
    "mass": ("--mass", float, "particle mass in electron masses"),
    "family": ("--family", str, "potential family: quartic, quadratic, cosine, cosine2 or polynomial"),
    "coeffs": ("--coeffs", str, "custom even polynomial as 'k:c,k:c'"),
    "tol_quad": ("--tol-quad", float, "quadrature tolerance"),
    "tol_ode": ("--tol-ode", float, "ODE tolerance"),
    "tol_root": ("--tol-root", float, "root-finding tolerance in p"),
    "format": ("--format", str, "output format: csv or json"),
    "out": ("--out", str, "output file (default: standard output)"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value configuration file")
    for name, (flag, kind, text) in _CONFIG_FLAGS.items():
        extra = {"choices": ("csv", "json")} if name == "format" else {}
        common.add_argument(flag, dest=name, type=kind, default=None, help=text, **extra)

    parser = _Parser(prog="magtunnel", description="Euclidean resonance calculator for tunneling in a magnetic field.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("resonance", parents=[common], help="locate the resonance field and action slopes")

    scan = sub.add_parser("scan", parents=[common], help="discrete fields h_N for N cycles")
    scan.add_argument("--n-min", type=int, default=1)
    scan.add_argument("--n-max", type=int, default=10)
    scan.add_argument("--branch", choices=("upper", "lower"), default="upper")
    scan.add_argument("--threshold", type=float, default=VALIDITY_THRESHOLD, help="minimum action for 'valid'")

    traj = sub.add_parser("trajectory", parents=[common], help="instanton orbit samples")
    traj.add_argument("--p", type=float, required=True, help="dimensionless field parameter")
    traj.add_argument("--cycles", type=int, default=3)
    traj.add_argument("--samples", type=int, default=200, help="samples per cycle")

    curve = sub.add_parser("curve", parents=[common], help="tunneling probability against field")
    curve.add_argument("--h-min", type=float, default=0.0, help="lowest field in tesla")
    curve.add_argument("--h-max", type=float, default=None, help="highest field in tesla (default 1.2 H_R)")
    curve.add_argument("--steps", type=int, default=61)
    curve.add_argument("--threshold", type=float, default=VALIDITY_THRESHOLD, help="minimum action for 'valid'")

    check = sub.add_parser("check-potential", parents=[common], help="which families form a well")
    check.add_argument("--p", type=float, default=1.76, help="dimensionless field parameter")
    return parser


def _resolve_config(args) -> RunConfig:
    config = RunConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = RunConfig.from_text(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
    overrides = {name: getattr(args, name) for name in _CONFIG_FLAGS if getattr(args, name) is not None}
    if "coeffs" in overrides and "family" not in overrides:
        overrides["family"] = "polynomial"
    return replace(config, **overrides)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _render(header, rows, fmt) -> str:
    if fmt == "json":
        records = [dict(zip(header, (float(v) if isinstance(v, np.floating) else v for v in row))) for row in rows]
        return json.dumps(records, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def cmd_resonance(config: RunConfig, args) -> str:
    params = config.params()
    report = find_resonance(params.ratio, params, config.potential_family(), config.tol_quad,
                            root_tol=config.tol_root)
    doc = report.as_dict()
    if config.format == "json":
        return json.dumps(doc, indent=1) + "\n"
    return _render(("key", "value"), doc.items(), "csv")


def cmd_scan(config: RunConfig, args) -> str:
    if not 1 <= args.n_min <= args.n_max:
        raise UsageError(f"need 1 <= n-min <= n-max, got {args.n_min}..{args.n_max}")
    params = config.params()
    rows = discrete_fields(params, params.ratio, (args.n_min, args.n_max), config.potential_family(),
                           config.tol_quad, branch=args.branch, threshold=args.threshold, root_tol=config.tol_root)
    table = [(row.N, row.p_N, row.h_N, row.A_N, row.w_N, row.validity) for row in rows]
    return _render(("N", "p_N", "h_N_tesla", "A_N", "w_N", "validity"), table, config.format)


def cmd_trajectory(config: RunConfig, args) -> str:
    if not args.p > 0:
        raise UsageError(f"--p must be > 0, got {args.p!r}")
    if args.cycles < 1 or args.samples < 2:
        raise UsageError("--cycles must be >= 1 and --samples >= 2")
    params = config.params()
    eff = effective_potential(args.p, params.ratio, config.potential_family())
    orbit = extend_orbit(integrate_cycle(eff, config.tol_ode, args.samples), args.cycles)
    return _render(("s", "z", "dzds", "x_over_a"), orbit.rows(), config.format)


def cmd_curve(config: RunConfig, args) -> str:
    params = config.params()
    family = config.potential_family()
    report = find_resonance(params.ratio, params, family, config.tol_quad, root_tol=config.tol_root)
    h_max = 1.2 * report.H_R if args.h_max is None else args.h_max
    if not 0 <= args.h_min < h_max:
        raise UsageError(f"need 0 <= h-min < h-max, got {args.h_min}..{h_max}")
    if args.steps < 2:
        raise UsageError(f"--steps must be >= 2, got {args.steps}")
    grid = np.linspace(args.h_min, h_max, args.steps)
    points = probability_curve(params, params.ratio, grid, family, config.tol_quad, report, args.threshold)
    table = [(pt.H, pt.p, pt.A, pt.w, pt.validity) for pt in points]
    return _render(("H_tesla", "p", "A", "w", "validity"), table, config.format)


def cmd_check_potential(config: RunConfig, args) -> str:
    if not args.p >= 0:
        raise UsageError(f"--p must be >= 0, got {args.p!r}")
    r = config.params().ratio
    families = dict(FAMILIES)
    if config.coeffs:
        families[config.potential_family().name] = config.potential_family()
    table = []
    for name, family in families.items():
        eff = effective_potential(args.p, r, family)
        check = well_exists(eff)
        z0 = turning_point(eff) if check else None
        table.append((name, bool(check), z0, check.reason))
    return _render(("family", "well", "turning_point", "diagnostic"), table, config.format)


COMMANDS = {
    "resonance": cmd_resonance,
    "scan": cmd_scan,
    "trajectory": cmd_trajectory,
    "curve": cmd_curve,
    "check-potential": cmd_check_potential,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = _resolve_config(args)
        text = COMMANDS[args.command](config, args)
    except UsageError as exc:
        print(f"magtunnel: error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"magtunnel: error: {exc}", file=sys.stderr)
        return 1
    except MagTunnelError as exc:
        print(f"magtunnel: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
