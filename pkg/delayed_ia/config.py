"""
Run configuration.

Resolves command-line flags, environment variables and defaults into one
immutable RunConfig. Precedence is flag, then environment, then default.
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional

from .constant_lab import ConstantCase
from .model import ChannelMode, Scheme
from .subspace import DEFAULT_REL_EPS, Tolerance

ENV_RANK_TOL = "IA_RANK_TOL"
ENV_MAX_ROWS = "IA_MAX_ROWS"
DEFAULT_MAX_ROWS = 4096
DEFAULT_SEED = 1
DEFAULT_TRIALS = 100
DEFAULT_STEPS = 200

# first entry is the default
OUTPUT_FORMATS = {
    "bounds": ("csv", "text"),
    "params": ("json", "text"),
    "simulate": ("json", "text"),
    "tradeoff": ("csv", "text"),
    "constant-lab": ("json", "text"),
}


class ConfigError(Exception):
    """Exception raised for invalid or inconsistent settings."""
    pass


def _parse_float(name: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {text!r}") from None


def _parse_int(name: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {text!r}") from None


def default_format(command: Optional[str]) -> str:
    """Output format a command uses when --format is not given."""
    return OUTPUT_FORMATS.get(command, ("text",))[0]


def resolve_tolerance(flag: Optional[float], env: Mapping[str, str]) -> Tolerance:
    """Rank tolerance from --tol, IA_RANK_TOL or the default."""
    if flag is not None:
        value = flag
    elif env.get(ENV_RANK_TOL):
        value = _parse_float(ENV_RANK_TOL, env[ENV_RANK_TOL])
    else:
        value = DEFAULT_REL_EPS
    try:
        return Tolerance(value)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def resolve_max_rows(flag: Optional[int], env: Mapping[str, str]) -> int:
    """Signal-space row guard from --max-rows, IA_MAX_ROWS or the default."""
    if flag is not None:
        value = flag
    elif env.get(ENV_MAX_ROWS):
        value = _parse_int(ENV_MAX_ROWS, env[ENV_MAX_ROWS])
    else:
        value = DEFAULT_MAX_ROWS
    if value < 1:
        raise ConfigError(f"row guard must be positive, got {value}")
    return value


@dataclass(frozen=True)
class RunConfig:
    """Settings of one CLI invocation."""
    command: str
    scheme: Optional[Scheme] = None
    M: Optional[int] = None
    N: Optional[int] = None
    K: int = 3
    group: Optional[int] = None  # None selects the group size automatically
    B: Optional[int] = None
    B_max: Optional[int] = None
    seed: int = DEFAULT_SEED
    trials: int = DEFAULT_TRIALS
    channel: ChannelMode = ChannelMode.TIME_VARYING
    acs: bool = False
    tol: Tolerance = Tolerance()
    max_rows: int = DEFAULT_MAX_ROWS
    rho_min: Optional[Fraction] = None
    rho_max: Optional[Fraction] = None
    steps: int = DEFAULT_STEPS
    case: Optional[ConstantCase] = None
    out: Optional[Path] = None
    fmt: str = "text"

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be positive, got {self.trials}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        for name in ("M", "N"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.K < 2:
            raise ConfigError(f"K must be at least 2, got {self.K}")
        if self.scheme is Scheme.PSR3 and self.K != 3:
            raise ConfigError(f"PSR is a 3-user scheme, got K={self.K}")
        if self.steps < 1:
            raise ConfigError(f"steps must be positive, got {self.steps}")
        if self.channel is ChannelMode.ACS_REAL:
            raise ConfigError("select ACS with --acs on top of a constant or time-varying channel")

    @classmethod
    def from_args(cls, args, env: Optional[Mapping[str, str]] = None) -> "RunConfig":
        """
        Build a configuration from parsed arguments.

        Args:
            args: argparse namespace of any subcommand
            env: Environment mapping (defaults to os.environ)

        Returns:
            RunConfig

        Raises:
            ConfigError: On invalid values
        """
        env = os.environ if env is None else env

        def arg(name: str, default=None):
            value = getattr(args, name, None)
            return default if value is None else value

        scheme = arg("scheme")
        group = {"ria": arg("L"), "tg": arg("G")}.get(scheme) or "auto"
        case = arg("case")
        out = arg("out")
        return cls(
            command=args.command,
            scheme=Scheme(scheme) if scheme else None,
            M=arg("M"),
            N=arg("N"),
            K=arg("K", 3),
            group=None if group == "auto" else _parse_int("group size", group),
            B=arg("B"),
            B_max=arg("Bmax"),
            seed=arg("seed", DEFAULT_SEED),
            trials=arg("trials", DEFAULT_TRIALS),
            channel=ChannelMode(arg("channel", ChannelMode.TIME_VARYING.value)),
            acs=bool(arg("acs", False)),
            tol=resolve_tolerance(arg("tol"), env),
            max_rows=resolve_max_rows(arg("max_rows"), env),
            rho_min=arg("rho_min"),
            rho_max=arg("rho_max"),
            steps=arg("steps", DEFAULT_STEPS),
            case=ConstantCase(case) if case else None,
            out=Path(out) if out else None,
            fmt=arg("format", default_format(args.command)),
        )
