"""
Delayed-CSIT Interference Alignment

DoF bounds, system-parameter optimization, transmission-plan construction
and Monte-Carlo decodability checks for the RIA, TG and 3-user PSR
precoding schemes on the K-user MIMO interference channel with delayed
channel state information at the transmitters.
"""

__version__ = "0.1.0"

from .model import (
    ChannelMode,
    DecodeReport,
    Dims,
    FrameLayout,
    LayoutError,
    Regime,
    Scheme,
    SchemeParams,
)
from .subspace import (
    DimensionMismatchError,
    Subspace,
    Tolerance,
    contains,
    intersect,
    left_null_space,
    null_space,
    rank_tol,
    row_space,
)
from .channel import (
    AlreadyLiftedError,
    ChannelEnsemble,
    acs_lift,
    generate_ensemble,
    lift_params,
    realstack,
    round_channel,
)
from .bounds import (
    BoundParams,
    DomainError,
    InnerBound,
    inner_bound_3user,
    inner_bound_kuser,
    outer_bound,
    relative_gap,
    select_G,
    select_L,
    tdma_baseline,
    time_share,
)
from .optimizer import (
    InfeasibleError,
    brute_force_params,
    check_p1,
    check_p2,
    check_p3,
    solve_p1,
    solve_p2,
    solve_p3,
)
from .schemes import (
    DegenerateEnsembleError,
    PlanMismatchError,
    TransmissionPlan,
    build_plan,
    signal_space_rows,
)
from .decoding import (
    MonteCarloSummary,
    SignalSpaceMatrix,
    assemble_signal_space,
    decode_user,
    monte_carlo,
    verify_alignment,
)
from .constant_lab import (
    CollinearityReport,
    ConstantCase,
    UnsupportedCaseError,
    acs_feasibility,
    constant_failure_report,
    collinearity_check,
)
from .tradeoff import (
    TradeoffCurve,
    TradeoffPoint,
    bounded_dof,
    pareto_front,
    sweep_curve,
)

__all__ = [
    # Model
    "ChannelMode",
    "DecodeReport",
    "Dims",
    "FrameLayout",
    "LayoutError",
    "Regime",
    "Scheme",
    "SchemeParams",
    # Subspace algebra
    "DimensionMismatchError",
    "Subspace",
    "Tolerance",
    "contains",
    "intersect",
    "left_null_space",
    "null_space",
    "rank_tol",
    "row_space",
    # Channels
    "AlreadyLiftedError",
    "ChannelEnsemble",
    "acs_lift",
    "generate_ensemble",
    "lift_params",
    "realstack",
    "round_channel",
    # Bounds
    "BoundParams",
    "DomainError",
    "InnerBound",
    "inner_bound_3user",
    "inner_bound_kuser",
    "outer_bound",
    "relative_gap",
    "select_G",
    "select_L",
    "tdma_baseline",
    "time_share",
    # Optimizer
    "InfeasibleError",
    "brute_force_params",
    "check_p1",
    "check_p2",
    "check_p3",
    "solve_p1",
    "solve_p2",
    "solve_p3",
    # Schemes and decoding
    "DegenerateEnsembleError",
    "PlanMismatchError",
    "TransmissionPlan",
    "build_plan",
    "signal_space_rows",
    "MonteCarloSummary",
    "SignalSpaceMatrix",
    "assemble_signal_space",
    "decode_user",
    "monte_carlo",
    "verify_alignment",
    # Constant channels
    "CollinearityReport",
    "ConstantCase",
    "UnsupportedCaseError",
    "acs_feasibility",
    "constant_failure_report",
    "collinearity_check",
    # Trade-off
    "TradeoffCurve",
    "TradeoffPoint",
    "bounded_dof",
    "pareto_front",
    "sweep_curve",
]
