"""
Command-line interface for delayed-CSIT interference alignment.

Usage:
    delayed-ia bounds --K 3 --rho-min 0.5 --rho-max 3 --steps 200 --out bounds.csv
    delayed-ia params --scheme ria --M 4 --N 7 --K 3
    delayed-ia simulate --scheme tg --M 2 --N 1 --K 3 --trials 100
    delayed-ia tradeoff --scheme ria --M 4 --N 7 --K 3 --Bmax 28
    delayed-ia constant-lab --case ria-siso --seed 1
"""

import argparse
import logging
import sys
from fractions import Fraction
from typing import Optional

from .bounds import DomainError, bounds_table, select_G, select_L
from .channel import lift_params
from .config import OUTPUT_FORMATS, ConfigError, RunConfig, default_format
from .constant_lab import ConstantCase, UnsupportedCaseError, run_case
from .decoding import monte_carlo
from .model import ChannelMode, Scheme, SchemeParams
from .optimizer import InfeasibleError, solve_p1, solve_p2, solve_p3
from .render import (
    bounds_csv,
    constant_lab_payload,
    format_bounds_table,
    format_constant_lab,
    format_params,
    format_simulation,
    format_tradeoff_table,
    infeasible_payload,
    params_payload,
    simulation_payload,
    to_json,
    tradeoff_csv,
    write_output,
)
from .schemes import DegenerateEnsembleError, signal_space_rows
from .tradeoff import sweep_curve

logger = logging.getLogger("delayed_ia")

SCHEMES = [s.value for s in Scheme]
CHANNELS = [ChannelMode.TIME_VARYING.value, ChannelMode.CONSTANT.value]


def _add_setting(parser: argparse.ArgumentParser) -> None:
    """Flags selecting a scheme and an antenna setting."""
    parser.add_argument("--scheme", choices=SCHEMES, required=True,
                        help="Precoding scheme")
    parser.add_argument("--M", type=int, required=True, help="Transmit antennas per user")
    parser.add_argument("--N", type=int, required=True, help="Receive antennas per user")
    parser.add_argument("--K", type=int, default=3, help="Number of users (default: 3)")
    parser.add_argument("--L", default=None, metavar="L|auto",
                        help="RIA group size (default: auto)")
    parser.add_argument("--G", default=None, metavar="G|auto",
                        help="TG group size (default: auto)")


def _add_output(parser: argparse.ArgumentParser, command: str) -> None:
    default = default_format(command)
    parser.add_argument("--out", default=None, help="Output file (default: stdout)")
    parser.add_argument("--format", choices=OUTPUT_FORMATS[command], default=default,
                        help=f"Output format (default: {default})")


def _add_tolerance(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None,
                        help="Relative rank tolerance (default: $IA_RANK_TOL or 1e-10)")


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog="delayed-ia",
        description="DoF bounds, system parameters and feasibility of interference "
                    "alignment with delayed CSIT (RIA, TG and PSR schemes).",
        epilog="Example: delayed-ia params --scheme tg --M 4 --N 1 --K 6 --G auto",
    )

    parser.add_argument(
        "-q", "--quiet",
        action="store_true",
        help="Suppress informational logging and tracebacks",
    )

    parser.add_argument(
        "--verbose",
        action="store_true",
        help="Enable debug logging",
    )

    parser.add_argument(
        "-v", "--version",
        action="store_true",
        help="Show version and exit",
    )

    sub = parser.add_subparsers(dest="command", metavar="command")

    bounds = sub.add_parser("bounds", help="Outer/inner DoF bounds over a range of M/N")
    bounds.add_argument("--K", type=int, default=3, help="Number of users (default: 3)")
    bounds.add_argument("--rho-min", type=Fraction, required=True, help="Smallest M/N")
    bounds.add_argument("--rho-max", type=Fraction, required=True, help="Largest M/N")
    bounds.add_argument("--steps", type=int, default=200, help="Grid points (default: 200)")
    _add_output(bounds, "bounds")

    params = sub.add_parser("params", help="Optimal system parameters of a scheme")
    _add_setting(params)
    params.add_argument("--B", type=int, default=None, help="Budget on symbols per user")
    _add_output(params, "params")

    simulate = sub.add_parser("simulate", help="Monte-Carlo decodability of a scheme")
    _add_setting(simulate)
    simulate.add_argument("--B", type=int, default=None, help="Budget on symbols per user")
    simulate.add_argument("--trials", type=int, default=100, help="Channel draws (default: 100)")
    simulate.add_argument("--seed", type=int, default=None, help="Seed of the first draw (default: 1)")
    simulate.add_argument("--channel", choices=CHANNELS, default=ChannelMode.TIME_VARYING.value,
                          help="Channel evolution (default: time-varying)")
    simulate.add_argument("--acs", action="store_true", help="Lift to the real domain (ACS)")
    simulate.add_argument("--max-rows", type=int, default=None,
                          help="Largest signal-space matrix (default: $IA_MAX_ROWS or 4096)")
    _add_tolerance(simulate)
    _add_output(simulate, "simulate")

    tradeoff = sub.add_parser("tradeoff", help="DoF versus frame length over a symbol budget")
    _add_setting(tradeoff)
    tradeoff.add_argument("--Bmax", type=int, required=True, help="Largest symbol budget")
    _add_output(tradeoff, "tradeoff")

    lab = sub.add_parser("constant-lab", help="Preset experiments over constant channels")
    lab.add_argument("--case", choices=[c.value for c in ConstantCase], required=True,
                     help="Preset setting")
    lab.add_argument("--seed", type=int, default=None, help="Channel seed (default: 1)")
    lab.add_argument("--channel", choices=CHANNELS, default=ChannelMode.CONSTANT.value,
                     help="Channel evolution (default: constant)")
    lab.add_argument("--acs", action="store_true", help="Lift to the real domain (ACS)")
    _add_tolerance(lab)
    _add_output(lab, "constant-lab")

    return parser


def _require_setting(config: RunConfig) -> tuple[int, int]:
    if config.M is None or config.N is None or config.scheme is None:
        raise ConfigError(f"{config.command} needs --scheme, --M and --N")
    return config.M, config.N


def resolve_params(config: RunConfig) -> SchemeParams:
    """
    Solve the system-parameter problem selected by a configuration.

    Group sizes left on auto are chosen by select_L / select_G.
    """
    M, N = _require_setting(config)
    rho = Fraction(M, N)
    if config.scheme is Scheme.RIA:
        L = config.group or select_L(config.K, rho)
        return solve_p1(M, N, config.K, L, config.B)
    if config.scheme is Scheme.TG:
        G = config.group or select_G(config.K, rho)
        return solve_p2(M, N, config.K, G, config.B)
    return solve_p3(M, N, config.B, config.K)


def cmd_bounds(config: RunConfig) -> str:
    """Bounds table as CSV or text."""
    if config.rho_min is None or config.rho_max is None:
        raise ConfigError("bounds needs --rho-min and --rho-max")
    rows = bounds_table(config.K, config.rho_min, config.rho_max, config.steps)
    if config.fmt == "text":
        return format_bounds_table(rows, config.K)
    return bounds_csv(rows)


def cmd_params(config: RunConfig) -> str:
    """Parameter table entry as JSON or text."""
    params = resolve_params(config)
    if config.fmt == "text":
        return format_params(params)
    return to_json(params_payload(params))


def cmd_simulate(config: RunConfig) -> str:
    """Monte-Carlo feasibility report as JSON or text."""
    params = resolve_params(config)
    rows = signal_space_rows(lift_params(params) if config.acs else params)
    if rows > config.max_rows:
        raise ConfigError(f"signal space has {rows} rows per receiver, "
                          f"above the limit of {config.max_rows} (see --max-rows)")
    summary = monte_carlo(params, config.trials, config.seed, config.channel,
                          acs=config.acs, tol=config.tol)
    if config.fmt == "text":
        return format_simulation(summary)
    return to_json(simulation_payload(summary))


def cmd_tradeoff(config: RunConfig) -> str:
    """Trade-off sweep as CSV or text."""
    M, N = _require_setting(config)
    if config.B_max is None:
        raise ConfigError("tradeoff needs --Bmax")
    curve = sweep_curve(config.scheme, M, N, config.K, config.B_max)
    if config.fmt == "text":
        return format_tradeoff_table(curve)
    return tradeoff_csv(curve)


def cmd_constant_lab(config: RunConfig) -> str:
    """Constant-channel experiment as JSON or text."""
    if config.case is None:
        raise ConfigError("constant-lab needs --case")
    result = run_case(config.case, config.seed, config.channel, config.acs, config.tol)
    if config.fmt == "text":
        return format_constant_lab(result)
    return to_json(constant_lab_payload(result))


COMMANDS = {
    "bounds": cmd_bounds,
    "params": cmd_params,
    "simulate": cmd_simulate,
    "tradeoff": cmd_tradeoff,
    "constant-lab": cmd_constant_lab,
}


def main(argv: Optional[list[str]] = None) -> int:
    """Main entry point."""
    parser = create_parser()
    args = parser.parse_args(argv)

    if args.version:
        from . import __version__
        print(f"delayed-ia {__version__}")
        return 0

    if not args.command:
        parser.print_usage(sys.stderr)
        print("Error: No command given.", file=sys.stderr)
        return 1

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s [%(levelname)s] %(name)s: %(message)s")

    try:
        config = RunConfig.from_args(args)
    except (ConfigError, ValueError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1

    try:
        output = COMMANDS[config.command](config)
    except InfeasibleError as e:
        payload = infeasible_payload(e.reason, command=config.command,
                                     scheme=config.scheme.value if config.scheme else None,
                                     M=config.M, N=config.N, K=config.K)
        write_output(to_json(payload), config.out)
        return 0
    except (ConfigError, DomainError, DegenerateEnsembleError, UnsupportedCaseError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    except Exception as e:
        print(f"Error: {e}", file=sys.stderr)
        if not args.quiet:
            import traceback
            traceback.print_exc()
        return 1

    try:
        write_output(output, config.out)
    except OSError as e:
        print(f"Error writing output: {e}", file=sys.stderr)
        return 1

    if config.out is not None:
        logger.info("wrote %s", config.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
