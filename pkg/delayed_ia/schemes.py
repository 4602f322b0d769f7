"""
Transmission plans for the RIA, TG and 3-user PSR schemes.

A plan holds the precoder of every transmitter in every round and, for every
receiver, the ordered list of receive steps (round plus optional
zero-forcing filter) whose outputs are stacked into the receiver's signal
space. Later-phase precoders are random combinations (mixing matrices) of
interference the unintended receivers already overheard, so they align with
what those receivers know and can be subtracted there.

Users are 0-based internally.
"""

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .channel import ChannelEnsemble, round_channel
from .model import PSR_PAIRS, Scheme, SchemeParams
from .subspace import (
    Subspace,
    Tolerance,
    intersect,
    left_null_space,
    random_isometry,
    rank_tol,
    row_space,
)

logger = logging.getLogger(__name__)

DICTIONARY_STREAM = 2


class DegenerateEnsembleError(Exception):
    """Exception raised when a channel realization leaves a filter or intersection too small."""
    pass


class PlanMismatchError(Exception):
    """Exception raised when parameters and channel ensemble disagree."""
    pass


@dataclass(frozen=True, eq=False)
class ReceiveStep:
    """One block row of a receiver's signal space."""
    phase: int
    round: int
    label: str
    filter: Optional[np.ndarray] = None  # None keeps every received dimension


@dataclass(frozen=True)
class AlignmentCheck:
    """
    Required inclusion at one receiver.

    The signal of the transmitter in (phase, round), as seen by the receiver,
    must lie in the span of what the receiver got from the same transmitter
    in the referenced receive steps.
    """
    receiver: int
    transmitter: int
    phase: int
    round: int
    references: tuple[int, ...]


@dataclass(eq=False)
class TransmissionPlan:
    """Precoders, receive filters and alignment bookkeeping of one frame."""
    params: SchemeParams
    tol: Tolerance
    precoders: dict[tuple[int, int, int], np.ndarray] = field(default_factory=dict)
    receive_steps: dict[int, list[ReceiveStep]] = field(default_factory=dict)
    filters: dict[tuple[int, int, int, int], np.ndarray] = field(default_factory=dict)
    overheard: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)
    intersections: dict[tuple[int, int, int], Subspace] = field(default_factory=dict)
    mixing: dict[tuple[int, int, int], np.ndarray] = field(default_factory=dict)
    hybrid: dict[tuple[int, int, int], np.ndarray] = field(default_factory=dict)
    alignment: list[AlignmentCheck] = field(default_factory=list)
    is_real: bool = False

    @property
    def users(self) -> int:
        """Users of the simulated instance."""
        return self.params.simulated_users

    def precoder(self, p: int, r: int, i: int) -> np.ndarray:
        """V_i^(p,r); all-zero when user i is silent in that round."""
        if (p, r, i) in self.precoders:
            return self.precoders[(p, r, i)]
        rows = self.params.dims.M * self.params.slots[p]
        return np.zeros((rows, self.params.b), dtype=float if self.is_real else complex)

    def steps(self, j: int) -> list[ReceiveStep]:
        """Receive steps of receiver j in frame order."""
        return self.receive_steps[j]


class _PlanBuilder:
    """Shared state while constructing a plan over one ensemble."""

    def __init__(self, params: SchemeParams, ens: ChannelEnsemble,
                 rng: np.random.Generator, tol: Tolerance):
        self.params = params
        self.ens = ens
        self.rng = rng
        self.tol = tol
        self.plan = TransmissionPlan(params=params, tol=tol, is_real=ens.is_real,
                                     receive_steps={j: [] for j in range(ens.users)})

    @property
    def M(self) -> int:
        return self.params.dims.M

    @property
    def N(self) -> int:
        return self.params.dims.N

    @property
    def b(self) -> int:
        return self.params.b

    def generic(self, rows: int, cols: int) -> np.ndarray:
        """Random isometry over the ensemble's field."""
        return random_isometry(self.rng, rows, cols, real=self.ens.is_real)

    def mixing(self, rows: int, cols: int) -> np.ndarray:
        """Random mixing matrix with unit-norm columns."""
        sigma = self.generic(rows, cols)
        return sigma / np.linalg.norm(sigma, axis=0, keepdims=True)

    def received(self, p: int, r: int, j: int, i: int) -> np.ndarray:
        """H_{j,i}^(p,r) V_i^(p,r)."""
        return round_channel(self.ens, p, r, j, i) @ self.plan.precoder(p, r, i)

    def zf_filter(self, interference: np.ndarray, expected: int, label: str) -> np.ndarray:
        """
        Rows annihilating the interference, truncated to the generic count.

        Raises:
            DegenerateEnsembleError: If fewer than `expected` rows exist
        """
        space = left_null_space(interference, self.tol)
        if space.dim < expected:
            raise DegenerateEnsembleError(
                f"{label}: zero-forcing filter has {space.dim} rows, {expected} expected")
        if space.dim > expected:
            logger.warning("%s: truncating filter from %d to %d rows", label, space.dim, expected)
        return space.basis[:expected]

    def intersection(self, blocks: list[np.ndarray], expected: int, label: str) -> Subspace:
        """
        Intersection of row spaces, at least `expected`-dimensional.

        Raises:
            DegenerateEnsembleError: If the intersection is too small
        """
        space = intersect([row_space(block, self.tol) for block in blocks], self.tol)
        if space.dim < expected:
            raise DegenerateEnsembleError(
                f"{label}: intersection has dimension {space.dim}, {expected} expected")
        return space

    def add_step(self, j: int, step: ReceiveStep) -> int:
        """Append a receive step and return its index."""
        steps = self.plan.receive_steps[j]
        steps.append(step)
        return len(steps) - 1

    def set_precoder(self, p: int, r: int, i: int, v: np.ndarray) -> None:
        self.plan.precoders[(p, r, i)] = v

    def fresh_precoder(self, p: int, r: int, i: int) -> None:
        """Generic full-rank first-phase precoder."""
        self.set_precoder(p, r, i, self.generic(self.M * self.params.slots[p], self.b))

    def mixed_precoder(self, p: int, r: int, i: int, basis: np.ndarray) -> None:
        """Precoder whose rows are random combinations of the span of the given rows."""
        basis = row_space(basis, self.tol).basis
        sigma = self.mixing(self.M * self.params.slots[p], basis.shape[0])
        self.plan.mixing[(p, r, i)] = sigma
        self.set_precoder(p, r, i, sigma @ basis)


def _build_ria(builder: _PlanBuilder) -> None:
    """Joint first phase with per-interferer filters, then aligned retransmission."""
    plan, b = builder.plan, builder.b
    L = builder.params.group_size
    users = range(L)
    phi1 = builder.params.phis[0]
    phase1_step: dict[tuple[int, int], int] = {}

    for i in users:
        builder.fresh_precoder(0, 0, i)

    for j in users:
        for i in users:
            if i == j:
                continue
            others = [k for k in users if k not in (i, j)]
            interference = np.hstack([builder.received(0, 0, j, k) for k in others])
            u = builder.zf_filter(interference, phi1, f"U{j + 1},{i + 1}")
            plan.filters[(0, 0, j, i)] = u
            plan.overheard[(j, i)] = u @ builder.received(0, 0, j, i)
            phase1_step[(j, i)] = builder.add_step(j, ReceiveStep(0, 0, f"U{j + 1},{i + 1}", u))

    expected = min(b, (L - 1) * min(phi1, b) - (L - 2) * b)
    for i in users:
        blocks = [plan.overheard[(k, i)] for k in users if k != i]
        space = builder.intersection(blocks, expected, f"T{i + 1}")
        plan.intersections[(1, 0, i)] = space
        builder.mixed_precoder(1, 0, i, space.basis)

    for j in users:
        builder.add_step(j, ReceiveStep(1, 0, "phase 2"))
        for i in users:
            if i != j:
                plan.alignment.append(AlignmentCheck(j, i, 1, 0, (phase1_step[(j, i)],)))


def _build_tg(builder: _PlanBuilder) -> None:
    """Orthogonal first phase, then one aligned round per group of G users."""
    plan, b = builder.plan, builder.b
    K, G = builder.params.dims.K, builder.params.group_size
    users = range(K)
    ns1 = builder.N * builder.params.S1

    for r in users:
        builder.fresh_precoder(0, r, r)
    for j in users:
        for r in users:
            builder.add_step(j, ReceiveStep(0, r, f"round {r + 1}"))
            if r != j:
                plan.overheard[(j, r)] = builder.received(0, r, j, r)

    expected = min(b, (G - 1) * min(ns1, b) - (G - 2) * b)
    for r, group in enumerate(combinations(users, G)):
        for i in group:
            blocks = [plan.overheard[(k, i)] for k in group if k != i]
            space = builder.intersection(blocks, expected, f"T{i + 1} round {r + 1}")
            plan.intersections[(1, r, i)] = space
            builder.mixed_precoder(1, r, i, space.basis)
        label = "group " + ",".join(str(u + 1) for u in group)
        for j in group:
            builder.add_step(j, ReceiveStep(1, r, label))
            for i in group:
                if i != j:
                    # phase-1 step index at receiver j equals the round of transmitter i
                    plan.alignment.append(AlignmentCheck(j, i, 1, r, (i,)))


def _build_psr(builder: _PlanBuilder) -> None:
    """Joint phase, pairwise hybrid rounds, joint final phase."""
    plan = builder.plan
    phi1, phi2, phi3 = builder.params.phis
    users = range(3)
    phase1_step: dict[tuple[int, int], int] = {}
    hybrid_step: dict[tuple[int, int, int], int] = {}

    def third(x: int, y: int) -> int:
        return 3 - x - y

    for i in users:
        builder.fresh_precoder(0, 0, i)
    for j in users:
        for i in users:
            if i == j:
                continue
            k = third(i, j)
            u = builder.zf_filter(builder.received(0, 0, j, k), phi1, f"U{j + 1},{i + 1}")
            plan.filters[(0, 0, j, i)] = u
            plan.overheard[(j, i)] = u @ builder.received(0, 0, j, i)
            phase1_step[(j, i)] = builder.add_step(j, ReceiveStep(0, 0, f"U{j + 1},{i + 1}", u))

    for r, (i, j) in enumerate(PSR_PAIRS):
        builder.mixed_precoder(1, r, i, plan.overheard[(j, i)])
        builder.mixed_precoder(1, r, j, plan.overheard[(i, j)])
        k = third(i, j)
        for a, c in ((i, j), (j, i)):
            builder.add_step(a, ReceiveStep(1, r, f"pair {i + 1},{j + 1}"))
            plan.alignment.append(AlignmentCheck(a, c, 1, r, (phase1_step[(a, c)],)))
        # the idle receiver keeps one transmitter at a time
        for a, c in ((i, j), (j, i)):
            label = f"F({k + 1}) {c + 1},{a + 1}"
            u = builder.zf_filter(builder.received(1, r, k, c), phi2, label)
            plan.filters[(1, r, k, a)] = u
            plan.hybrid[(k, c, a)] = u @ builder.received(1, r, k, a)
            hybrid_step[(k, c, a)] = builder.add_step(k, ReceiveStep(1, r, label, u))

    for i in users:
        j, k = (u for u in users if u != i)
        stacked = np.vstack([plan.hybrid[(k, j, i)], plan.hybrid[(j, k, i)]])
        builder.mixed_precoder(2, 0, i, stacked)
    for j in users:
        for i in users:
            if i == j:
                continue
            k = third(i, j)
            label = f"U3 {j + 1},{i + 1}"
            u = builder.zf_filter(builder.received(2, 0, j, k), phi3, label)
            plan.filters[(2, 0, j, i)] = u
            builder.add_step(j, ReceiveStep(2, 0, label, u))
            refs = (phase1_step[(j, i)], hybrid_step[(j, k, i)])
            plan.alignment.append(AlignmentCheck(j, i, 2, 0, refs))


_BUILDERS = {
    Scheme.RIA: _build_ria,
    Scheme.TG: _build_tg,
    Scheme.PSR3: _build_psr,
}


def check_compatible(params: SchemeParams, ens: ChannelEnsemble) -> None:
    """
    Verify a parameter set can be simulated over an ensemble.

    Raises:
        PlanMismatchError: On antenna, layout or field disagreement
    """
    if params.lifted != ens.is_real:
        raise PlanMismatchError(
            f"parameters are {'lifted' if params.lifted else 'complex'} "
            f"but the ensemble is {'real' if ens.is_real else 'complex'}")
    if (params.dims.M, params.dims.N) != (ens.tx_dim, ens.rx_dim):
        raise PlanMismatchError(
            f"parameters use {params.dims.N}x{params.dims.M} channels, "
            f"ensemble holds {ens.rx_dim}x{ens.tx_dim}")
    layout = params.layout
    if layout.slots != ens.layout.slots or layout.groups != ens.layout.groups:
        raise PlanMismatchError("ensemble layout does not match the scheme parameters")


def build_plan(params: SchemeParams, ens: ChannelEnsemble,
               dictionary_seed: Optional[int] = None,
               tol: Tolerance = Tolerance()) -> TransmissionPlan:
    """
    Construct precoders and receive filters of a scheme over an ensemble.

    Args:
        params: Scheme parameters (lifted when the ensemble is real)
        ens: Channel ensemble matching params.layout
        dictionary_seed: Seed of the generic precoders and mixing matrices;
            defaults to the ensemble seed, drawn from a separate stream
        tol: Rank tolerance

    Returns:
        TransmissionPlan with alignment checks for verify_alignment

    Raises:
        PlanMismatchError: If params and ensemble disagree
        DegenerateEnsembleError: If a filter or intersection is smaller than generic
    """
    check_compatible(params, ens)
    seed = ens.seed if dictionary_seed is None else dictionary_seed
    rng = np.random.default_rng(None if seed is None else [DICTIONARY_STREAM, seed])
    builder = _PlanBuilder(params, ens, rng, tol)
    _BUILDERS[params.scheme](builder)
    plan = builder.plan
    logger.debug("built %s plan for %s: %d precoders, %d alignment checks",
                 params.scheme.value, params.dims, len(plan.precoders), len(plan.alignment))
    return plan


def signal_space_rows(params: SchemeParams) -> int:
    """Rows of one receiver's signal-space matrix."""
    N, K, G = params.dims.N, params.dims.K, params.group_size
    phis = params.phis
    if params.scheme is Scheme.RIA:
        return (G - 1) * phis[0] + N * params.S2
    if params.scheme is Scheme.TG:
        return K * N * params.S1 + math.comb(K - 1, G - 1) * N * params.S2
    return 2 * phis[0] + 2 * N * params.S2 + 2 * phis[1] + 2 * phis[2]


def precoder_ranks(plan: TransmissionPlan) -> dict[tuple[int, int, int], int]:
    """Numerical rank of every active precoder."""
    return {key: rank_tol(v, plan.tol) for key, v in plan.precoders.items()}
