"""
Zero-forcing decoding and Monte-Carlo feasibility of transmission plans.

For receiver j the signal-space matrix stacks, per receive step, the
filtered received signal of every transmitter; columns are grouped by
transmitter. Decoding removes every interfering column block with the left
nullspace W of the interference and checks the rank of the effective
channel W * desired against the number of symbols b.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .channel import ChannelEnsemble, acs_lift, generate_ensemble, lift_params, round_channel
from .model import ChannelMode, DecodeReport, SchemeParams
from .schemes import ReceiveStep, TransmissionPlan, build_plan, check_compatible
from .subspace import Tolerance, column_space, contains, left_null_space, rank_tol, row_space

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RowBlock:
    """Rows contributed by one receive step."""
    phase: int
    round: int
    label: str
    start: int
    stop: int


@dataclass(eq=False)
class SignalSpaceMatrix:
    """Signal space of one receiver, column blocks ordered by transmitter."""
    owner: int
    matrix: np.ndarray
    row_blocks: list[RowBlock]
    users: int
    b: int

    @property
    def rows(self) -> int:
        """Total number of stacked rows."""
        return int(self.matrix.shape[0])

    def columns(self, i: int) -> slice:
        """Column block of transmitter i."""
        return slice(i * self.b, (i + 1) * self.b)

    @property
    def desired(self) -> np.ndarray:
        """Columns of the receiver's own symbols."""
        return self.matrix[:, self.columns(self.owner)]

    @property
    def interference(self) -> np.ndarray:
        """Columns of every other transmitter."""
        keep = [c for i in range(self.users) if i != self.owner
                for c in range(i * self.b, (i + 1) * self.b)]
        return self.matrix[:, keep]


def _observe(plan: TransmissionPlan, ens: ChannelEnsemble, j: int,
             step: ReceiveStep, i: int) -> np.ndarray:
    """Filtered signal of transmitter i at receiver j in one receive step."""
    signal = round_channel(ens, step.phase, step.round, j, i) @ plan.precoder(step.phase, step.round, i)
    if step.filter is None:
        return signal
    return step.filter @ signal


def assemble_signal_space(plan: TransmissionPlan, ens: ChannelEnsemble, j: int,
                          phases: Optional[int] = None) -> SignalSpaceMatrix:
    """
    Stack the receive steps of receiver j.

    Args:
        plan: Transmission plan
        ens: Channel ensemble the signals travel through
        j: Receiver (0-based)
        phases: Only use steps of the first `phases` phases

    Returns:
        SignalSpaceMatrix with its row-block boundaries
    """
    check_compatible(plan.params, ens)
    limit = plan.params.layout.phases if phases is None else phases
    blocks, row_blocks, start = [], [], 0
    for step in plan.steps(j):
        if step.phase >= limit:
            continue
        block = np.hstack([_observe(plan, ens, j, step, i) for i in range(plan.users)])
        blocks.append(block)
        row_blocks.append(RowBlock(step.phase, step.round, step.label, start, start + block.shape[0]))
        start += block.shape[0]
    if blocks:
        matrix = np.vstack(blocks)
    else:
        matrix = np.zeros((0, plan.users * plan.params.b))
    return SignalSpaceMatrix(owner=j, matrix=matrix, row_blocks=row_blocks,
                             users=plan.users, b=plan.params.b)


def decode_user(plan: TransmissionPlan, ens: ChannelEnsemble, j: int,
                tol: Optional[Tolerance] = None, phases: Optional[int] = None) -> DecodeReport:
    """
    Zero-force interference at receiver j and measure the decodable rank.

    Args:
        plan: Transmission plan
        ens: Channel ensemble
        j: Receiver (0-based)
        tol: Rank tolerance (defaults to the plan's)
        phases: Decode after only the first `phases` phases

    Returns:
        DecodeReport; the dof field is heq_rank/(N tau) with the
        time-sharing factor, so a feasible user reproduces params.dof
    """
    tol = tol or plan.tol
    omega = assemble_signal_space(plan, ens, j, phases)
    # W has orthonormal rows and the desired block orthonormal columns
    w = left_null_space(column_space(omega.interference, tol), tol).basis
    heq = w @ column_space(omega.desired, tol)
    heq_rank = rank_tol(heq, tol)
    params = plan.params
    dof = params.share_factor * Fraction(heq_rank, params.dims.N * params.tau)
    return DecodeReport(user=j, zf_filter_rank=int(w.shape[0]), heq_rank=heq_rank,
                        b=params.b, dof=dof)


def verify_alignment(plan: TransmissionPlan, ens: ChannelEnsemble,
                     tol: Optional[Tolerance] = None) -> bool:
    """
    Check every later-phase signal lies in what its receiver overheard.

    Overheard subspaces are recomputed from the supplied ensemble with the
    plan's precoders and filters, so an ensemble other than the one the plan
    was built on fails the check with probability one.
    """
    tol = tol or plan.tol
    aligned = True
    for check in plan.alignment:
        k, i = check.receiver, check.transmitter
        target = round_channel(ens, check.phase, check.round, k, i) @ plan.precoder(check.phase, check.round, i)
        steps = plan.steps(k)
        reference = np.vstack([_observe(plan, ens, k, steps[s], i) for s in check.references])
        if not contains(row_space(reference, tol), row_space(target, tol), tol):
            logger.debug("alignment fails at receiver %d for transmitter %d in round (%d, %d)",
                         k + 1, i + 1, check.phase + 1, check.round + 1)
            aligned = False
    return aligned


@dataclass
class TrialResult:
    """Decode reports of every receiver in one Monte-Carlo trial."""
    trial: int
    seed: int
    reports: list[DecodeReport]
    aligned: bool

    @property
    def feasible(self) -> bool:
        """True when every receiver decodes all of its symbols."""
        return all(r.feasible for r in self.reports)


@dataclass
class MonteCarloSummary:
    """Aggregate of a Monte-Carlo feasibility run."""
    params: SchemeParams
    mode: ChannelMode
    acs: bool
    trials: list[TrialResult] = field(default_factory=list)

    @property
    def feasible_fraction(self) -> float:
        """Fraction of trials in which every user is decodable."""
        if not self.trials:
            return 0.0
        return sum(t.feasible for t in self.trials) / len(self.trials)

    @property
    def min_rank(self) -> int:
        """Smallest effective-channel rank over all users and trials."""
        return min(r.heq_rank for t in self.trials for r in t.reports)

    @property
    def max_rank(self) -> int:
        """Largest effective-channel rank over all users and trials."""
        return max(r.heq_rank for t in self.trials for r in t.reports)

    @property
    def predicted_dof(self) -> Fraction:
        """DoF of the parameter table."""
        return self.params.dof

    @property
    def measured_dof(self) -> Optional[Fraction]:
        """Smallest per-user DoF measured in feasible trials."""
        values = [r.dof for t in self.trials if t.feasible for r in t.reports]
        return min(values) if values else None


def run_trial(params: SchemeParams, seed: int, mode: ChannelMode, acs: bool = False,
              tol: Tolerance = Tolerance()) -> tuple[TransmissionPlan, ChannelEnsemble, TrialResult]:
    """
    Draw one ensemble, build the plan and decode every receiver.

    Args:
        params: Unlifted scheme parameters
        seed: Channel seed (the precoder dictionary uses a separate stream)
        mode: Channel mode; ACS_REAL draws a constant ensemble and lifts it
        acs: Lift the drawn ensemble to the real domain
        tol: Rank tolerance

    Returns:
        (plan, ensemble, trial result)
    """
    ens = generate_ensemble(params.dims, params.layout, mode, seed)
    if acs and not ens.is_real:
        ens = acs_lift(ens)
    sim_params = lift_params(params) if ens.is_real else params
    plan = build_plan(sim_params, ens, tol=tol)
    reports = [decode_user(plan, ens, j, tol) for j in range(plan.users)]
    result = TrialResult(trial=0, seed=seed, reports=reports,
                         aligned=verify_alignment(plan, ens, tol))
    return plan, ens, result


def monte_carlo(params: SchemeParams, trials: int, seed_base: int,
                mode: ChannelMode = ChannelMode.TIME_VARYING, acs: bool = False,
                tol: Tolerance = Tolerance()) -> MonteCarloSummary:
    """
    Estimate linear decodability over independent channel draws.

    Trial t uses seed seed_base + t.

    Args:
        params: Unlifted scheme parameters
        trials: Number of trials (>= 1)
        seed_base: Seed of the first trial
        mode: Channel mode
        acs: Lift every ensemble to the real domain
        tol: Rank tolerance

    Returns:
        MonteCarloSummary over all trials
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    lifted = acs or mode is ChannelMode.ACS_REAL
    summary = MonteCarloSummary(params=lift_params(params) if lifted else params,
                                mode=mode, acs=lifted)
    for t in range(trials):
        _, _, result = run_trial(params, seed_base + t, mode, acs, tol)
        result.trial = t
        summary.trials.append(result)
        logger.debug("trial %d seed %d: ranks %s", t, result.seed,
                     [r.heq_rank for r in result.reports])
    logger.info("%s %s: %d trials, feasible fraction %.3f",
                params.scheme.value, params.dims, trials, summary.feasible_fraction)
    return summary
