#!/usr/bin/env python3
"""
Command-line entry point

Usage:
    python main.py solve-harmonic --alpha 0.1 --beta 0.1
    python main.py solve --potential "x^4" --alpha 0.05 --beta 0.05
    python main.py linearize --n 2 --v0 1
    python main.py oracle --potential "3*x^4 + 0.5*x^2" --alpha 0.05 --beta 0.05
    python main.py scan-region --n 10 --v0 1 --region-points 200
    python main.py beta-limit --n 2 --n 10 --n 100 --v0 1
    python main.py box-energy --beta-prime 1e-8 --k 1
    python main.py solve --config run.cfg --alpha 0.2

Exit codes: 0 success, 1 usage or validation error, 2 no bound state.
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Set

import numpy as np

from boundary_oracle import oracle_min
from config import (
    BETA_LIMIT_TOLERANCE,
    DEFAULT_HBAR,
    DEFAULT_MASS,
    ORACLE_GRID_MAX,
    ORACLE_GRID_MIN,
    ORACLE_POINTS,
    OUTPUT_FORMATS,
    REGION_MAX,
    REGION_POINTS,
    ROOT_TOLERANCE,
    SCAN_GRID_MAX,
    SCAN_GRID_MIN,
    SCAN_GRID_POINTS,
    SCAN_WORKERS,
    SOLVE_GRID_MAX,
    SOLVE_GRID_MIN,
    SOLVE_GRID_POINTS,
)
from deformed_space import (
    DeformationParams,
    PhysicalContext,
    nondimensionalize,
    to_nondim,
    to_physical,
)
from errors import ConfigurationError, GUPError, NoBoundStateError, UsageError
from existence_scanner import ScanSpec, beta_limit_curve, box_energy, region_scan
from general_solver import linear_coefficients, linear_energy, linear_solution, solve_full
from harmonic_oscillator import harmonic_energy_physical, harmonic_linear, harmonic_minimum
from logger_config import get_logger
from potentials import PotentialSpec, evaluator, format_potential, parse_potential
from result_writer import ResultWriter, beta_limit_csv, dict_csv, region_csv

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_BOUND_STATE = 2

DEFAULT_FORMATS = {"scan-region": "csv", "beta-limit": "csv"}
OUTPUT_KEYS = ("format", "out", "config")


class CLIArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    parameters: Dict[str, object] = field(default_factory=dict)
    output_format: str = "json"
    output_path: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        parameters = {
            key: value for key, value in vars(args).items()
            if key not in OUTPUT_KEYS + ("command", "handler") and value is not None
        }
        return cls(
            command=args.command,
            parameters=parameters,
            output_format=args.format or DEFAULT_FORMATS.get(args.command, "json"),
            output_path=args.out,
        )

    def get(self, key: str, default=None):
        return self.parameters.get(key, default)


# Flags accepted by each subcommand, used to validate --config keys
COMMAND_FLAGS: Dict[str, Set[str]] = {}


def _flag(sub: argparse.ArgumentParser, command: str, name: str, **kwargs):
    COMMAND_FLAGS.setdefault(command, set()).add(name)
    sub.add_argument(f"--{name}", default=None, **kwargs)


def _add_output_flags(sub, command):
    _flag(sub, command, "format", choices=OUTPUT_FORMATS, help="output format")
    _flag(sub, command, "out", help="output file (default stdout)")
    _flag(sub, command, "config", help="key = value file supplying any flag")


def _add_deformation_flags(sub, command):
    _flag(sub, command, "alpha", type=float, help="nondimensional alpha")
    _flag(sub, command, "beta", type=float, help="nondimensional beta")
    _flag(sub, command, "alpha-prime", type=float, help="physical alpha' (1/length^2)")
    _flag(sub, command, "beta-prime", type=float, help="physical beta' (1/momentum^2)")
    _flag(sub, command, "hbar", type=float, help=f"reduced Planck constant (default {DEFAULT_HBAR})")
    _flag(sub, command, "mass", type=float, help=f"particle mass (default {DEFAULT_MASS})")


def _add_potential_flags(sub, command):
    _flag(sub, command, "potential", help='potential expression, e.g. "3*x^4 + 0.5*x^2" or "power(3, 2)"')
    _flag(sub, command, "n", type=int, help="power-law index: V = v0 * xi^(2n)")
    _flag(sub, command, "v0", type=float, help="power-law strength (default 1)")
    _flag(sub, command, "a", type=float, help="unit length of the potential (default 1)")


def _add_grid_flags(sub, command, with_tol=True):
    _flag(sub, command, "grid-min", type=float, help="xi grid start")
    _flag(sub, command, "grid-max", type=float, help="xi grid end")
    _flag(sub, command, "grid-points", type=int, help="xi grid points")
    if with_tol:
        _flag(sub, command, "tol", type=float, help="tolerance")


def build_parser() -> CLIArgumentParser:
    parser = CLIArgumentParser(prog="main.py", description="Ground-state lower bounds in deformed space")
    subparsers = parser.add_subparsers(dest="command", parser_class=CLIArgumentParser)
    subparsers.required = True

    sub = subparsers.add_parser("solve-harmonic", help="closed-form harmonic oscillator bound")
    _add_deformation_flags(sub, "solve-harmonic")
    _flag(sub, "solve-harmonic", "omega", type=float, help="oscillator frequency (default 1)")
    _add_output_flags(sub, "solve-harmonic")
    sub.set_defaults(handler=cmd_solve_harmonic)

    sub = subparsers.add_parser("solve", help="full numerical solution for a potential")
    _add_deformation_flags(sub, "solve")
    _add_potential_flags(sub, "solve")
    _add_grid_flags(sub, "solve")
    _add_output_flags(sub, "solve")
    sub.set_defaults(handler=cmd_solve)

    sub = subparsers.add_parser("linearize", help="linear approximation coefficients and energy")
    _add_deformation_flags(sub, "linearize")
    _add_potential_flags(sub, "linearize")
    _add_output_flags(sub, "linearize")
    sub.set_defaults(handler=cmd_linearize)

    sub = subparsers.add_parser("oracle", help="direct minimization along the uncertainty boundary")
    _add_deformation_flags(sub, "oracle")
    _add_potential_flags(sub, "oracle")
    _add_grid_flags(sub, "oracle", with_tol=False)
    _add_output_flags(sub, "oracle")
    sub.set_defaults(handler=cmd_oracle)

    sub = subparsers.add_parser("scan-region", help="existence region over (alpha, beta)")
    _flag(sub, "scan-region", "n", type=int, help="power-law index")
    _flag(sub, "scan-region", "v0", type=float, help="power-law strength (default 1)")
    _flag(sub, "scan-region", "region-points", type=int, help=f"grid points per axis (default {REGION_POINTS})")
    _flag(sub, "scan-region", "region-max", type=float, help=f"largest alpha and beta (default {REGION_MAX})")
    _flag(sub, "scan-region", "workers", type=int, help=f"row threads (default {SCAN_WORKERS})")
    _add_grid_flags(sub, "scan-region", with_tol=False)
    _add_output_flags(sub, "scan-region")
    sub.set_defaults(handler=cmd_scan_region)

    sub = subparsers.add_parser("beta-limit", help="largest beta with a bound state, per n")
    COMMAND_FLAGS.setdefault("beta-limit", set()).add("n")
    sub.add_argument("--n", type=int, action="append", default=None, help="power-law index (repeatable)")
    _flag(sub, "beta-limit", "v0", type=float, help="power-law strength (default 1)")
    _flag(sub, "beta-limit", "alpha", type=float, help="fixed alpha (default 0)")
    _add_grid_flags(sub, "beta-limit")
    _add_output_flags(sub, "beta-limit")
    sub.set_defaults(handler=cmd_beta_limit)

    sub = subparsers.add_parser("box-energy", help="particle in a box of width 2a")
    _flag(sub, "box-energy", "beta-prime", type=float, help="physical beta'")
    _flag(sub, "box-energy", "k", type=int, help="level index (default 1)")
    _flag(sub, "box-energy", "a", type=float, help="box half-width (default 1)")
    _flag(sub, "box-energy", "hbar", type=float, help=f"reduced Planck constant (default {DEFAULT_HBAR})")
    _flag(sub, "box-energy", "mass", type=float, help=f"particle mass (default {DEFAULT_MASS})")
    _add_output_flags(sub, "box-energy")
    sub.set_defaults(handler=cmd_box_energy)

    return parser


def read_config_file(path: str, command: str) -> List[str]:
    """
    Turn a `key = value` file into flag arguments for one subcommand

    Raises:
        ConfigurationError: unreadable file, malformed line or unknown key
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.readlines()
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e}") from e

    known = COMMAND_FLAGS.get(command, set())
    argv = []
    for number, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigurationError(f"{path}:{number}: expected 'key = value'")
        key, value = (part.strip() for part in text.split("=", 1))
        flag = key.lstrip("-").replace("_", "-")
        if flag not in known or flag == "config":
            raise ConfigurationError(f"{path}:{number}: unknown key {key!r} for {command}")
        argv += [f"--{flag}", value]
    return argv


def _explicit_flags(argv: List[str]) -> set:
    return {token[2:].split("=", 1)[0] for token in argv if token.startswith("--")}


def parse_arguments(argv: List[str]) -> argparse.Namespace:
    """Parse argv, merging --config values underneath the explicit flags"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return args

    explicit = _explicit_flags(argv)
    config_argv = read_config_file(args.config, args.command)
    # Drop config values for flags given explicitly so repeatable flags are not merged
    merged = []
    for i in range(0, len(config_argv), 2):
        if config_argv[i][2:] not in explicit:
            merged += config_argv[i:i + 2]
    return parser.parse_args([args.command] + merged + argv[argv.index(args.command) + 1:])


def _physical_context(config: RunConfig, harmonic: bool) -> PhysicalContext:
    hbar = config.get("hbar", DEFAULT_HBAR)
    mass = config.get("mass", DEFAULT_MASS)
    if harmonic:
        return PhysicalContext(hbar=hbar, mass=mass, omega=config.get("omega", 1.0))
    return PhysicalContext(hbar=hbar, mass=mass, a=config.get("a", 1.0))


def _deformation(config: RunConfig, nd) -> DeformationParams:
    physical = config.get("alpha_prime") is not None or config.get("beta_prime") is not None
    nondim = config.get("alpha") is not None or config.get("beta") is not None
    if physical and nondim:
        raise ConfigurationError("give either --alpha/--beta or --alpha-prime/--beta-prime, not both")
    if physical:
        return to_nondim(config.get("alpha_prime", 0.0), config.get("beta_prime", 0.0), nd)
    return to_physical(DeformationParams.nondim(config.get("alpha", 0.0), config.get("beta", 0.0)), nd)


def _potential(config: RunConfig) -> PotentialSpec:
    text = config.get("potential")
    n = config.get("n")
    if text is not None and n is not None:
        raise ConfigurationError("give either --potential or --n/--v0, not both")
    if text is not None:
        return parse_potential(text)
    if n is not None:
        return parse_potential(f"power({n}, {config.get('v0', 1.0)!r})")
    raise ConfigurationError("a potential is required (--potential or --n)")


def _require(config: RunConfig, *keys: str):
    missing = [key for key in keys if config.get(key) is None]
    if missing:
        raise ConfigurationError(f"missing required parameter(s): {', '.join('--' + k.replace('_', '-') for k in missing)}")


def _payload(config: RunConfig, **data) -> Dict:
    return {"command": config.command, "metadata": dict(config.parameters), **data}


def _flatten(prefix: str, data, rows: Dict[str, object]):
    if isinstance(data, dict):
        for key, value in data.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), value, rows)
    elif isinstance(data, (list, tuple)):
        for i, value in enumerate(data):
            _flatten(f"{prefix}.{i}", value, rows)
    else:
        rows[prefix] = data


def emit(config: RunConfig, payload: Dict, csv_text: Optional[str] = None):
    """Write the payload in the configured format"""
    writer = ResultWriter(config.output_path)
    if config.output_format == "json":
        writer.write_json(payload)
        return
    if csv_text is None:
        rows: Dict[str, object] = {}
        _flatten("", {key: value for key, value in payload.items() if key != "command"}, rows)
        csv_text = dict_csv(rows)
    writer.write_csv(csv_text)


def cmd_solve_harmonic(config: RunConfig):
    ctx = _physical_context(config, harmonic=True)
    nd = nondimensionalize(ctx)
    dp = _deformation(config, nd)
    result = harmonic_minimum(dp.alpha, dp.beta, nd=nd)
    emit(config, _payload(
        config,
        result=result.to_dict(),
        deformation={"alpha": dp.alpha, "beta": dp.beta,
                     "alpha_prime": dp.alpha_prime, "beta_prime": dp.beta_prime},
        energy_physical_closed_form=harmonic_energy_physical(ctx, dp.alpha_prime, dp.beta_prime),
        linear_energy_physical=harmonic_linear(ctx, dp.alpha_prime, dp.beta_prime),
    ))


def _general_setup(config: RunConfig):
    spec = _potential(config)
    pot = evaluator(spec)
    nd = nondimensionalize(_physical_context(config, harmonic=False))
    return spec, pot, nd, _deformation(config, nd)


def cmd_solve(config: RunConfig):
    spec, pot, nd, dp = _general_setup(config)
    result = solve_full(
        pot, dp.alpha, dp.beta,
        tol=config.get("tol", ROOT_TOLERANCE),
        grid_min=config.get("grid_min", SOLVE_GRID_MIN),
        grid_max=config.get("grid_max", SOLVE_GRID_MAX),
        grid_points=config.get("grid_points", SOLVE_GRID_POINTS),
        nd=nd,
    )
    linear = linear_solution(pot, dp.alpha, dp.beta, nd=nd)
    emit(config, _payload(
        config,
        potential=format_potential(spec),
        result=result.to_dict(),
        linear=linear.to_dict(),
        linear_gap=result.energy_nd - linear.energy_nd,
    ))


def cmd_linearize(config: RunConfig):
    spec, pot, nd, dp = _general_setup(config)
    coefficients = linear_coefficients(pot)
    linear = linear_solution(pot, dp.alpha, dp.beta, nd=nd)
    emit(config, _payload(
        config,
        potential=format_potential(spec),
        coefficients=asdict(coefficients),
        energy_nd=linear_energy(pot, dp.alpha, dp.beta, coefficients),
        result=linear.to_dict(),
    ))


def cmd_oracle(config: RunConfig):
    spec, pot, nd, dp = _general_setup(config)
    result = oracle_min(
        pot, dp.alpha, dp.beta,
        points=config.get("grid_points", ORACLE_POINTS),
        grid_min=config.get("grid_min", ORACLE_GRID_MIN),
        grid_max=config.get("grid_max", ORACLE_GRID_MAX),
        nd=nd,
    )
    emit(config, _payload(config, potential=format_potential(spec), result=result.to_dict()))


def _scan_spec(config: RunConfig) -> ScanSpec:
    return ScanSpec(
        grid_min=config.get("grid_min", SCAN_GRID_MIN),
        grid_max=config.get("grid_max", SCAN_GRID_MAX),
        grid_points=config.get("grid_points", SCAN_GRID_POINTS),
    )


def cmd_scan_region(config: RunConfig):
    _require(config, "n")
    points = config.get("region_points", REGION_POINTS)
    region_max = config.get("region_max", REGION_MAX)
    if points < 1 or not region_max > 0:
        raise ConfigurationError("--region-points must be >= 1 and --region-max positive")
    grid = np.linspace(region_max / points, region_max, points)
    scan = region_scan(config.get("n"), config.get("v0", 1.0), grid, grid, _scan_spec(config),
                       workers=config.get("workers", SCAN_WORKERS))
    emit(config, _payload(
        config,
        n=scan.n,
        v0=scan.v0,
        alpha_grid=scan.alpha_grid,
        beta_grid=scan.beta_grid,
        exists=scan.exists.astype(int),
        reference_curve=scan.reference_curve,
    ), csv_text=region_csv(scan))


def cmd_beta_limit(config: RunConfig):
    _require(config, "n")
    curve = beta_limit_curve(
        config.get("n"),
        v0=config.get("v0", 1.0),
        alpha=config.get("alpha", 0.0),
        tol=config.get("tol", BETA_LIMIT_TOLERANCE),
        scan=_scan_spec(config),
    )
    emit(config, _payload(
        config,
        v0=curve.v0,
        alpha=curve.alpha,
        n_values=curve.n_values,
        beta_limit=curve.beta_limit,
    ), csv_text=beta_limit_csv(curve))


def cmd_box_energy(config: RunConfig):
    _require(config, "beta_prime")
    ctx = _physical_context(config, harmonic=False)
    k = config.get("k", 1)
    energy = box_energy(ctx, config.get("beta_prime"), k)
    emit(config, _payload(config, k=k, energy=energy))


def _error_record(error: Exception) -> str:
    return json.dumps({"error": type(error).__name__, "message": str(error)}, sort_keys=True)


def run(argv: List[str]) -> int:
    """
    Run one command

    Returns:
        Exit code (0 success, 1 usage/validation error, 2 no bound state)
    """
    try:
        args = parse_arguments(list(argv))
        config = RunConfig.from_args(args)
        logger.debug(f"Running {config.command} with {config.parameters}")
        args.handler(config)
        return EXIT_OK
    except NoBoundStateError as e:
        sys.stderr.write(_error_record(e) + "\n")
        return EXIT_NO_BOUND_STATE
    except (GUPError, ValueError, OSError) as e:
        sys.stderr.write(_error_record(e) + "\n")
        return EXIT_ERROR
    except SystemExit as e:
        # --help
        return int(e.code or 0)


if __name__ == "__main__":
    raise SystemExit(run(sys.argv[1:]))
