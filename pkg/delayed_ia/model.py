"""
Data model for delayed-CSIT interference alignment.

This module defines the dataclasses shared by the optimizer, the scheme
builders and the trade-off analyzer: antenna settings, transmission frame
layouts, scheme parameters and per-user decode reports.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterator


class Scheme(Enum):
    """Precoding scheme identifier."""
    RIA = "ria"
    TG = "tg"
    PSR3 = "psr"


class Regime(Enum):
    """Antenna-ratio regime of a parameter table row."""
    A_I = "A.I"
    A_II = "A.II"
    B_I = "B.I"
    B_II = "B.II"
    C_I = "C.I"
    C_II = "C.II"
    C_III = "C.III"
    C_IV = "C.IV"


class ChannelMode(Enum):
    """How channel matrices evolve over the frame."""
    TIME_VARYING = "time-varying"
    CONSTANT = "constant"
    ACS_REAL = "acs-real"


class LayoutError(Exception):
    """Exception raised when a frame layout or frame index is inconsistent."""
    pass


@dataclass(frozen=True)
class Dims:
    """Number of users and antennas per node."""
    K: int
    M: int
    N: int

    def __post_init__(self):
        if self.K < 2:
            raise LayoutError(f"at least two users are required, got K={self.K}")
        if self.M < 1 or self.N < 1:
            raise LayoutError(f"antenna counts must be positive, got M={self.M}, N={self.N}")

    @property
    def rho(self) -> Fraction:
        """Antenna ratio M/N as an exact rational."""
        return Fraction(self.M, self.N)

    def __str__(self) -> str:
        return f"(M,N,K)=({self.M},{self.N},{self.K})"


@dataclass(frozen=True)
class FrameLayout:
    """
    Phase/round/slot structure of one transmission frame.

    Phase p has len(groups[p]) rounds of slots[p] slots each; groups[p][r] is
    the set of active users (0-based) of round r in phase p.
    """
    users: int
    slots: tuple[int, ...]
    groups: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if not 1 <= len(self.slots) <= 3:
            raise LayoutError(f"a frame has one to three phases, got {len(self.slots)}")
        if len(self.slots) != len(self.groups):
            raise LayoutError("slots and groups disagree on the number of phases")
        for p, (count, rounds) in enumerate(zip(self.slots, self.groups)):
            if count < 1:
                raise LayoutError(f"phase {p + 1} has {count} slots per round")
            if not rounds:
                raise LayoutError(f"phase {p + 1} has no rounds")
            sizes = {len(group) for group in rounds}
            if len(sizes) != 1:
                raise LayoutError(f"phase {p + 1} mixes group sizes {sorted(sizes)}")
            for group in rounds:
                if tuple(sorted(set(group))) != tuple(group):
                    raise LayoutError(f"group {group} must be sorted and duplicate-free")
                if group[0] < 0 or group[-1] >= self.users:
                    raise LayoutError(f"group {group} outside users 0..{self.users - 1}")

    @property
    def phases(self) -> int:
        """Number of phases P."""
        return len(self.slots)

    @property
    def rounds_per_phase(self) -> tuple[int, ...]:
        """Rounds R_p of every phase."""
        return tuple(len(rounds) for rounds in self.groups)

    @property
    def group_sizes(self) -> tuple[int, ...]:
        """Served-user count G_p of every phase."""
        return tuple(len(rounds[0]) for rounds in self.groups)

    @property
    def phase_slots(self) -> tuple[int, ...]:
        """Duration tau_p = R_p * S_p of every phase."""
        return tuple(r * s for r, s in zip(self.rounds_per_phase, self.slots))

    @property
    def tau(self) -> int:
        """Total number of slots in the frame."""
        return sum(self.phase_slots)

    def rounds(self) -> Iterator[tuple[int, int, tuple[int, ...]]]:
        """Iterate over (phase, round, group) in transmission order."""
        for p, rounds in enumerate(self.groups):
            for r, group in enumerate(rounds):
                yield p, r, group

    def is_active(self, p: int, r: int, user: int) -> bool:
        """Check whether a user transmits/receives in a round."""
        self.check_round(p, r)
        return user in self.groups[p][r]

    def check_round(self, p: int, r: int) -> None:
        """Raise LayoutError if (p, r) is not a round of this frame."""
        if not 0 <= p < self.phases or not 0 <= r < len(self.groups[p]):
            raise LayoutError(f"round ({p}, {r}) is not part of this frame")


def ria_layout(L: int, S1: int, S2: int) -> FrameLayout:
    """Two single-round phases with all L users of the group active."""
    everyone = tuple(range(L))
    return FrameLayout(users=L, slots=(S1, S2), groups=((everyone,), (everyone,)))


def tg_layout(K: int, G: int, S1: int, S2: int) -> FrameLayout:
    """K orthogonal first-phase rounds, then one round per group of G users."""
    first = tuple((r,) for r in range(K))
    second = tuple(combinations(range(K), G))
    return FrameLayout(users=K, slots=(S1, S2), groups=(first, second))


PSR_PAIRS: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (1, 2))


def psr_layout(S1: int, S2: int, S3: int) -> FrameLayout:
    """Three users: joint phase, one round per pair, joint final phase."""
    everyone = (0, 1, 2)
    return FrameLayout(users=3, slots=(S1, S2, S3),
                       groups=((everyone,), PSR_PAIRS, (everyone,)))


@dataclass(frozen=True)
class SchemeParams:
    """Solution of the system-parameter problem of one scheme."""
    scheme: Scheme
    dims: Dims
    group_size: int
    b: int
    S1: int
    S2: int
    S3: int = 0
    regime: Regime = Regime.A_I
    lifted: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def layout(self) -> FrameLayout:
        """Frame layout implied by the scheme and the slot counts."""
        if self.scheme is Scheme.RIA:
            return ria_layout(self.group_size, self.S1, self.S2)
        if self.scheme is Scheme.TG:
            return tg_layout(self.dims.K, self.group_size, self.S1, self.S2)
        return psr_layout(self.S1, self.S2, self.S3)

    @property
    def slots(self) -> tuple[int, ...]:
        """Slots per round of every phase."""
        if self.scheme is Scheme.PSR3:
            return (self.S1, self.S2, self.S3)
        return (self.S1, self.S2)

    @property
    def tau(self) -> int:
        """Frame length of one scheme instance."""
        if self.scheme is Scheme.RIA:
            return self.S1 + self.S2
        if self.scheme is Scheme.TG:
            return self.dims.K * self.S1 + comb(self.dims.K, self.group_size) * self.S2
        return self.S1 + 3 * self.S2 + self.S3

    @property
    def share_factor(self) -> Fraction:
        """Per-user DoF factor of time-sharing over all groups (L/K for RIA)."""
        if self.scheme is Scheme.RIA:
            return Fraction(self.group_size, self.dims.K)
        if self.scheme is Scheme.PSR3:
            return Fraction(3, self.dims.K)
        return Fraction(1)

    @property
    def total_slots(self) -> int:
        """Slots needed to serve every group once."""
        if self.scheme is Scheme.RIA:
            return comb(self.dims.K, self.group_size) * self.tau
        if self.scheme is Scheme.PSR3:
            return comb(self.dims.K, 3) * self.tau
        return self.tau

    @property
    def simulated_users(self) -> int:
        """Users present in one simulated instance of the scheme."""
        return self.layout.users

    @property
    def dof(self) -> Fraction:
        """Normalized DoF per user, b/(N tau) with the time-sharing factor."""
        return self.share_factor * Fraction(self.b, self.dims.N * self.tau)

    @property
    def phis(self) -> tuple[int, ...]:
        """Filter dimensions phi_p of the scheme."""
        N, b = self.dims.N, self.b
        if self.scheme is Scheme.RIA:
            L = self.group_size
            return (N * self.S1 - (L - 2) * b,
                    (L - 1) * N * self.S1 - L * (L - 2) * b)
        if self.scheme is Scheme.TG:
            G = self.group_size
            return (N * self.S1, (G - 1) * N * self.S1 - (G - 2) * b)
        phi1 = N * self.S1 - b
        phi2 = N * self.S2 - phi1
        phi3 = N * self.S3 - 2 * phi2
        return (phi1, phi2, phi3)


@dataclass
class DecodeReport:
    """Zero-forcing decode outcome for one receiver."""
    user: int
    zf_filter_rank: int
    heq_rank: int
    b: int
    dof: Fraction

    @property
    def feasible(self) -> bool:
        """True when every desired symbol is linearly decodable."""
        return self.heq_rank == self.b
