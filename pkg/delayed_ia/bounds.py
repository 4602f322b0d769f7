"""
DoF bounds for the K-user MIMO interference channel with delayed CSIT.

Outer bound, the DoF achieved by each precoding scheme, the regime
thresholds between parameter-table rows, the group-size selectors and the
comparison baselines. Formulas accept exact rationals (fractions.Fraction)
and return exact values when given them; the few irrational thresholds are
floats.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .model import Regime, Scheme

Number = Union[Fraction, float, int]

RHO_X = math.sqrt(249) - 15
# Both cube-root arguments are positive.
RHO_BSR1 = (10 + 5 ** (2 / 3) * ((2 * (3 * math.sqrt(6) + 2)) ** (1 / 3)
                                 - (2 * (3 * math.sqrt(6) - 2)) ** (1 / 3))) / 15
RHO_BSR2 = (5 - math.sqrt(7)) / 3
PSR_CEILING = Fraction(12, 31)


class DomainError(Exception):
    """Exception raised when an antenna ratio or user count lies outside a formula's domain."""
    pass


def _check_rho(rho: Number) -> Number:
    if isinstance(rho, int):
        rho = Fraction(rho)
    if not rho > 0:
        raise DomainError(f"antenna ratio must be positive, got {rho}")
    return rho


def alpha(K: int, G: int) -> int:
    """Number of G-user groups containing a given user, C(K-1, G-1)."""
    return math.comb(K - 1, G - 1)


def rho_A(L: int) -> Fraction:
    """Boundary between the A.I and A.II regimes of RIA with L users."""
    return Fraction(L, L * L - L - 1)


def rho_B(K: int, G: int) -> Fraction:
    """Boundary between the B.I and B.II regimes of TG with group size G."""
    a = alpha(K, G)
    return Fraction(1 + a * (G - 1), 1 + a * (G - 2))


def rho_y(K: int) -> Fraction:
    """Upper end of the ratio interval served by PSR in the K-user inner bound."""
    return Fraction(36 * (K - 1), 31 * K - 36)


@dataclass(frozen=True)
class BoundParams:
    """Thresholds of the outer and inner bounds for K users."""
    K: int
    alpha_out: Fraction   # (K-2)/(K^2-3K+1)
    beta_out: Fraction    # sum_{k=2..K} 1/k
    rho_x: float
    rho_y: Fraction
    rho_bsr1: float
    rho_bsr2: float

    @classmethod
    def for_users(cls, K: int) -> "BoundParams":
        """Compute every threshold for K users."""
        if K < 3:
            raise DomainError(f"bounds are defined for K >= 3 users, got K={K}")
        return cls(
            K=K,
            alpha_out=Fraction(K - 2, K * K - 3 * K + 1),
            beta_out=sum((Fraction(1, k) for k in range(2, K + 1)), Fraction(0)),
            rho_x=RHO_X,
            rho_y=rho_y(K),
            rho_bsr1=RHO_BSR1,
            rho_bsr2=RHO_BSR2,
        )


@dataclass(frozen=True)
class InnerBound:
    """Value of the inner bound and the scheme/regime achieving it."""
    value: Number
    scheme: Scheme
    regime: Regime
    group: int


def outer_bound(K: int, rho: Number) -> Number:
    """
    Outer bound on the normalized DoF per user.

    Args:
        K: Number of users (K >= 3)
        rho: Antenna ratio M/N, at least 1/(K-1)

    Returns:
        Piecewise bound; linear, then rho/(rho+1), then flat at 1/(beta+1)
    """
    rho = _check_rho(rho)
    bp = BoundParams.for_users(K)
    if rho < Fraction(1, K - 1):
        raise DomainError(f"outer bound needs rho >= 1/(K-1), got {rho}")
    if rho < bp.alpha_out:
        return Fraction(K - 1, K) * rho
    if rho < 1 / bp.beta_out:
        return rho / (rho + 1)
    return 1 / (bp.beta_out + 1)


def psr_regime(rho: Number) -> Regime:
    """Row of the 3-user PSR table for an antenna ratio."""
    if rho <= RHO_BSR1:
        return Regime.C_I
    if rho <= RHO_BSR2:
        return Regime.C_II
    if rho < Fraction(4, 5):
        return Regime.C_III
    return Regime.C_IV


def psr_dof(rho: Number) -> Number:
    """DoF per user achieved by PSR with 3 users."""
    rho = _check_rho(rho)
    if rho <= Fraction(1, 2):
        raise DomainError(f"PSR needs rho > 1/2, got {rho}")
    regime = psr_regime(rho)
    if regime is Regime.C_I:
        return rho ** 3 / (2 - rho)
    if regime is Regime.C_II:
        return 2 * rho ** 2 / (5 * rho ** 2 - 10 * rho + 8)
    if regime is Regime.C_III:
        return 6 * rho / (3 * rho + 10)
    return PSR_CEILING


def inner_bound_3user(rho: Number) -> InnerBound:
    """
    Inner bound for three users, achieved by PSR.

    Args:
        rho: Antenna ratio, > 1/2

    Returns:
        InnerBound with the regime of the table row used
    """
    value = psr_dof(rho)
    return InnerBound(value=value, scheme=Scheme.PSR3, regime=psr_regime(rho), group=3)


def ria_dof(L: int, K: int, rho: Number) -> Number:
    """DoF per user of RIA over groups of L users, time-shared among K users."""
    rho = _check_rho(rho)
    if not 3 <= L <= K:
        raise DomainError(f"RIA needs 3 <= L <= K, got L={L}, K={K}")
    return Fraction(L, K) * min(rho / (rho + 1), Fraction(L, L * L - 1))


def ria_regime(L: int, rho: Number) -> Regime:
    """A.I below rho_A(L), A.II above."""
    return Regime.A_I if rho <= rho_A(L) else Regime.A_II


def tg_dof(G: int, K: int, rho: Number) -> Number:
    """DoF per user of TG with groups of G users among K."""
    rho = _check_rho(rho)
    if not 2 <= G <= K:
        raise DomainError(f"TG needs 2 <= G <= K, got G={G}, K={K}")
    a = alpha(K, G)
    unsaturated = Fraction(G, K) * rho / (rho + G - 1)
    saturated = Fraction(1 + a * (G - 1), K + (G - 1) ** 2 * math.comb(K, G))
    return min(unsaturated, saturated)


def tg_regime(K: int, G: int, rho: Number) -> Regime:
    """B.I up to rho_B(K, G), B.II above."""
    return Regime.B_I if rho <= rho_B(K, G) else Regime.B_II


def regime_for(scheme: Scheme, K: int, group: int, rho: Number) -> Regime:
    """Regime of a scheme's parameter table for an antenna ratio."""
    if scheme is Scheme.RIA:
        return ria_regime(group, rho)
    if scheme is Scheme.TG:
        return tg_regime(K, group, rho)
    return psr_regime(rho)


def _best(candidates: Sequence[int], value) -> int:
    """Argmax over candidates, ties resolved towards the first (smallest)."""
    return max(sorted(set(candidates)), key=value)


def select_L(K: int, rho: Number) -> int:
    """
    RIA group size maximizing the DoF.

    The unconstrained optimum lies next to the positive root x of
    x^2 - (1 + 1/rho) x - 1 = 0; the integer argmax is floor(x) or
    ceil(x), clamped to [3, K]. Ties go to the smaller L.

    Args:
        K: Number of users (K >= 3)
        rho: Antenna ratio in (1/K, 1]

    Returns:
        Group size L
    """
    rho = _check_rho(rho)
    if K < 3:
        raise DomainError(f"RIA needs K >= 3, got K={K}")
    if rho <= Fraction(1, K) or rho > 1:
        raise DomainError(f"RIA group selection needs 1/K < rho <= 1, got {rho}")
    c = 1 + 1 / float(rho)
    x = (c + math.sqrt(c * c + 4)) / 2
    candidates = [min(max(n, 3), K) for n in (math.floor(x), math.ceil(x))]
    return _best(candidates, lambda L: ria_dof(L, K, rho))


def select_G(K: int, rho: Number) -> int:
    """
    TG group size maximizing the DoF.

    Returns 2 when rho >= K and K when rho < rho_B(K, K); otherwise the
    argmax is x or x-1 where rho_B(K, x) <= rho < rho_B(K, x-1).

    Args:
        K: Number of users (K >= 2)
        rho: Antenna ratio, > 1

    Returns:
        Group size G
    """
    rho = _check_rho(rho)
    if K < 2:
        raise DomainError(f"TG needs K >= 2, got K={K}")
    if rho <= 1:
        raise DomainError(f"TG group selection needs rho > 1, got {rho}")
    if rho >= rho_B(K, 2):
        return 2
    if rho < rho_B(K, K):
        return K
    for x in range(3, K + 1):
        if rho_B(K, x) <= rho < rho_B(K, x - 1):
            return _best([x - 1, x], lambda G: tg_dof(G, K, rho))
    raise DomainError(f"no TG threshold interval contains rho={rho}")  # pragma: no cover


def psr_share_dof(K: int, rho: Number) -> Number:
    """DoF per user when 3-user PSR is time-shared among K users."""
    return Fraction(3, K) * psr_dof(rho)


def inner_bound_kuser(K: int, rho: Number) -> InnerBound:
    """
    Inner bound for K users, piecewise over RIA, PSR and TG.

    RIA serves (1/K, rho_x], PSR time-shared over triples serves
    (rho_x, rho_y(K)], and TG serves everything above.

    Args:
        K: Number of users (K >= 3)
        rho: Antenna ratio, > 1/K

    Returns:
        InnerBound with the scheme, regime and group size achieving it
    """
    rho = _check_rho(rho)
    bp = BoundParams.for_users(K)
    if rho <= Fraction(1, K):
        raise DomainError(f"inner bound needs rho > 1/K, got {rho}")
    if rho <= bp.rho_x:
        L = _best(range(3, K + 1), lambda n: ria_dof(n, K, rho))
        return InnerBound(ria_dof(L, K, rho), Scheme.RIA, ria_regime(L, rho), L)
    if rho <= bp.rho_y:
        return InnerBound(psr_share_dof(K, rho), Scheme.PSR3, psr_regime(rho), 3)
    G = _best(range(2, K + 1), lambda n: tg_dof(n, K, rho))
    return InnerBound(tg_dof(G, K, rho), Scheme.TG, tg_regime(K, G, rho), G)


def time_share(d: Number, L: int, K: int, tau: int) -> tuple[Number, int]:
    """
    Time-share an L-user scheme among K users.

    Args:
        d: DoF per user of the L-user scheme
        L: Users per scheme instance
        K: Total number of users
        tau: Slots of one instance

    Returns:
        (DoF per user over K users, slots to serve every L-subset once)
    """
    if not 1 <= L <= K:
        raise DomainError(f"time sharing needs 1 <= L <= K, got L={L}, K={K}")
    return Fraction(L, K) * d, math.comb(K, L) * tau


def tdma_baseline(K: int, rho: Number) -> Number:
    """DoF per user of TDMA, min(M, N)/(K N)."""
    rho = _check_rho(rho)
    return min(rho, Fraction(1)) / K


def tdma_flat(K: int) -> Fraction:
    """Flat 1/K TDMA reference."""
    return Fraction(1, K)


def relative_gap(K: int, rho: Number) -> Number:
    """
    Relative gap between the outer bound and the inner bound.

    Returns 0 where both coincide with the trivial (K-1)/K * rho region,
    i.e. for rho <= 1/(K-1).
    """
    rho = _check_rho(rho)
    if rho <= Fraction(1, K - 1):
        return Fraction(0)
    outer = outer_bound(K, rho)
    inner = inner_bound_kuser(K, rho).value
    return (outer - inner) / outer


@dataclass(frozen=True)
class BoundsRow:
    """One row of a bounds table."""
    rho: Number
    outer: Number
    inner: InnerBound
    tdma: Number
    tdma_flat: Fraction
    gap: Number


def bounds_table(K: int, rho_min: Number, rho_max: Number, steps: int) -> list[BoundsRow]:
    """
    Evaluate every bound on an evenly spaced grid of antenna ratios.

    Args:
        K: Number of users (K >= 3)
        rho_min: First ratio, at least 1/(K-1)
        rho_max: Last ratio
        steps: Number of grid points (>= 1)

    Returns:
        List of BoundsRow in increasing rho
    """
    if steps < 1:
        raise DomainError(f"steps must be positive, got {steps}")
    if rho_max < rho_min:
        raise DomainError(f"empty ratio range [{rho_min}, {rho_max}]")
    if rho_min < Fraction(1, K - 1):
        raise DomainError(f"ratio range must start at 1/(K-1) or above, got {rho_min}")
    if steps == 1:
        grid = [rho_min]
    else:
        step = (rho_max - rho_min) / (steps - 1)
        grid = [rho_min + k * step for k in range(steps)]

    rows = []
    for rho in grid:
        rows.append(BoundsRow(
            rho=rho,
            outer=outer_bound(K, rho),
            inner=inner_bound_kuser(K, rho),
            tdma=tdma_baseline(K, rho),
            tdma_flat=tdma_flat(K),
            gap=relative_gap(K, rho),
        ))
    return rows
