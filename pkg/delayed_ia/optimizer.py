"""
System-parameter optimization for the RIA, TG and 3-user PSR schemes.

Each scheme's symbols-per-user b and slots-per-round S_p solve a small
integer program. The unbounded optimum has a closed form: every ratio S_p/b
sits at its smallest feasible value, and b is the least common denominator
of those ratios. With a symbol budget B the solvers enumerate b = 1..B and
pick the smallest feasible slot counts for each b, all in exact integer
arithmetic. Independent constraint checkers and a brute-force oracle are
provided for validation.
"""

import logging
import math
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional

from .bounds import DomainError, alpha, regime_for
from .model import Dims, Scheme, SchemeParams

logger = logging.getLogger(__name__)

CONTROL_NOTE = "control constraint 2(phi1+phi2) < b does not hold; the third phase is not needed"


class InfeasibleError(Exception):
    """Exception raised when no parameter set satisfies the constraints."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _ceil_div(a: int, b: int) -> int:
    """Integer ceiling of a/b for b > 0."""
    return -(-a // b)


def _common_scale(ratios: list[Fraction]) -> int:
    """Smallest b making every b * ratio an integer."""
    return math.lcm(*(r.denominator for r in ratios))


def rank_key(params: SchemeParams) -> tuple:
    """Sort key: highest DoF, then fewest slots over all groups, then fewest symbols."""
    return (-params.dof, params.total_slots, params.b)


def _pick(candidates: Iterator[SchemeParams]) -> Optional[SchemeParams]:
    best = None
    for candidate in candidates:
        if best is None or rank_key(candidate) < rank_key(best):
            best = candidate
    return best


def _make(scheme: Scheme, M: int, N: int, K: int, group: int, b: int,
          S1: int, S2: int, S3: int = 0, notes: tuple[str, ...] = ()) -> SchemeParams:
    return SchemeParams(
        scheme=scheme, dims=Dims(K=K, M=M, N=N), group_size=group,
        b=b, S1=S1, S2=S2, S3=S3,
        regime=regime_for(scheme, K, group, Fraction(M, N)),
        notes=notes,
    )


# Constraint checkers

def check_p1(M: int, N: int, L: int, b: int, S1: int, S2: int) -> list[str]:
    """
    Evaluate the RIA constraints.

    Returns:
        Names of the violated constraints (empty when feasible)
    """
    violated = []
    if min(b, S1, S2) < 1:
        violated.append("positive integers")
    if M * S1 < b:
        violated.append("transmit rank during the first phase")
    if N * S1 < (L - 2) * b + 1:
        violated.append("first-phase redundancy")
    if N * S2 < b:
        violated.append("receiver space-time dimensions")
    if L * M * S2 < b:
        violated.append("second-phase transmit rank")
    phi2 = (L - 1) * N * S1 - L * (L - 2) * b
    if L * phi2 < b:
        violated.append("rank of desired signals after zero-forcing")
    return violated


def check_p2(M: int, N: int, K: int, G: int, b: int, S1: int, S2: int) -> list[str]:
    """
    Evaluate the TG constraints.

    Returns:
        Names of the violated constraints (empty when feasible)
    """
    a = alpha(K, G)
    violated = []
    if min(b, S1, S2) < 1:
        violated.append("positive integers")
    if M * S1 < b:
        violated.append("transmit rank during the first phase")
    if N * S1 >= b:
        violated.append("need of second phase")
    if N * S2 > (G - 1) * N * S1 - (G - 2) * b:
        violated.append("non-redundant second phase")
    if N * (S1 + a * S2) < b:
        violated.append("linear combinations at the end of the transmission")
    return violated


def psr_phis(N: int, b: int, S1: int, S2: int, S3: int) -> tuple[int, int, int]:
    """Filter dimensions (phi1, phi2, phi3) of PSR."""
    phi1 = N * S1 - b
    phi2 = N * S2 - phi1
    phi3 = N * S3 - 2 * phi2
    return phi1, phi2, phi3


def check_p3(M: int, N: int, b: int, S1: int, S2: int, S3: int,
             control: bool = False) -> list[str]:
    """
    Evaluate the PSR constraints.

    Args:
        control: Also check 2(phi1+phi2) < b, which only states that the
            third phase is needed and is not required for decodability

    Returns:
        Names of the violated constraints (empty when feasible)
    """
    phi1, phi2, phi3 = psr_phis(N, b, S1, S2, S3)
    violated = []
    if min(b, phi1, phi2, phi3) < 1:
        violated.append("positive filter dimensions")
    if M * S1 < b:
        violated.append("transmit rank during the first phase")
    if 4 * phi1 < b:
        violated.append("first-phase overheard dimension")
    if M * S2 < phi1:
        violated.append("transmit rank during the second phase")
    if phi2 > phi1:
        violated.append("non-redundant second phase")
    if M * S3 < 2 * phi2:
        violated.append("transmit rank during the third phase")
    if phi3 > 2 * phi2:
        violated.append("non-redundant third phase")
    if 2 * (phi1 + phi2 + phi3) < b:
        violated.append("linear combinations at the end of the transmission")
    if control and 2 * (phi1 + phi2) >= b:
        violated.append("need of third phase")
    return violated


# RIA

def _check_ria_domain(M: int, N: int, K: int, L: int) -> None:
    if not 3 <= L <= K:
        raise DomainError(f"RIA needs 3 <= L <= K, got L={L}, K={K}")
    if M > N:
        raise DomainError(f"RIA needs M <= N, got M={M}, N={N}")


def _ria_at(M: int, N: int, K: int, L: int, b: int) -> Optional[SchemeParams]:
    """Smallest feasible RIA slot counts for exactly b symbols."""
    S2 = max(_ceil_div(b, N), _ceil_div(b, L * M))
    S1 = max(_ceil_div(b, M), (L - 2) * b // N + 1,
             _ceil_div(b * (L * L - L - 1), L * N))
    if check_p1(M, N, L, b, S1, S2):
        return None
    return _make(Scheme.RIA, M, N, K, L, b, S1, S2)


def solve_p1(M: int, N: int, K: int, L: int, B: Optional[int] = None) -> SchemeParams:
    """
    Optimal RIA parameters for groups of L users.

    Args:
        M, N: Transmit and receive antennas (M <= N)
        K: Total number of users
        L: Users per RIA instance, 3 <= L <= K
        B: Optional budget on symbols per user

    Returns:
        SchemeParams maximizing (L/K) b/(N(S1+S2))

    Raises:
        DomainError: If (M, N, K, L) is outside the scheme's domain
        InfeasibleError: If no b <= B is feasible
    """
    _check_ria_domain(M, N, K, L)
    if B is None:
        c1 = max(Fraction(1, M), Fraction(L * L - L - 1, N * L))
        c2 = max(Fraction(1, N), Fraction(1, L * M))
        b = _common_scale([c1, c2])
        S1, S2 = int(b * c1), int(b * c2)
        violated = check_p1(M, N, L, b, S1, S2)
        if violated:
            raise InfeasibleError(f"RIA closed form violates: {', '.join(violated)}")
        params = _make(Scheme.RIA, M, N, K, L, b, S1, S2)
    else:
        if B < 1:
            raise DomainError(f"symbol budget must be positive, got B={B}")
        params = _pick(p for p in (_ria_at(M, N, K, L, b) for b in range(1, B + 1)) if p)
        if params is None:
            raise InfeasibleError(f"no RIA parameters with b <= {B}")
    logger.debug("RIA %s L=%d -> b=%d S=(%d,%d) dof=%s",
                 params.dims, L, params.b, params.S1, params.S2, params.dof)
    return params


# TG

def _check_tg_domain(M: int, N: int, K: int, G: int) -> None:
    if not 2 <= G <= K:
        raise DomainError(f"TG needs 2 <= G <= K, got G={G}, K={K}")
    if M <= N:
        raise DomainError(f"TG needs M > N, got M={M}, N={N}")


def _tg_at(M: int, N: int, K: int, G: int, b: int) -> Optional[SchemeParams]:
    """Best feasible TG slot counts for exactly b symbols."""
    a = alpha(K, G)

    def candidates():
        for S1 in range(_ceil_div(b, M), (b - 1) // N + 1):
            S2 = max(1, _ceil_div(b - N * S1, N * a))
            if not check_p2(M, N, K, G, b, S1, S2):
                yield _make(Scheme.TG, M, N, K, G, b, S1, S2)

    return _pick(candidates())


def solve_p2(M: int, N: int, K: int, G: int, B: Optional[int] = None) -> SchemeParams:
    """
    Optimal TG parameters for groups of G users.

    Args:
        M, N: Transmit and receive antennas (M > N)
        K: Total number of users
        G: Users served per second-phase round, 2 <= G <= K
        B: Optional budget on symbols per user

    Returns:
        SchemeParams maximizing b/(N(K S1 + C(K,G) S2))

    Raises:
        DomainError: If (M, N, K, G) is outside the scheme's domain
        InfeasibleError: If no b <= B is feasible
    """
    _check_tg_domain(M, N, K, G)
    a = alpha(K, G)
    if B is None:
        c1 = max(Fraction(1, M), Fraction(1 + a * (G - 2), N * (1 + a * (G - 1))))
        c2 = (Fraction(1, N) - c1) / a
        if c2 <= 0:
            raise InfeasibleError("TG first phase already delivers every symbol")
        b = _common_scale([c1, c2])
        S1, S2 = int(b * c1), int(b * c2)
        violated = check_p2(M, N, K, G, b, S1, S2)
        if violated:
            raise InfeasibleError(f"TG closed form violates: {', '.join(violated)}")
        params = _make(Scheme.TG, M, N, K, G, b, S1, S2)
    else:
        if B < 1:
            raise DomainError(f"symbol budget must be positive, got B={B}")
        params = _pick(p for p in (_tg_at(M, N, K, G, b) for b in range(1, B + 1)) if p)
        if params is None:
            raise InfeasibleError(f"no TG parameters with b <= {B}")
    logger.debug("TG %s G=%d -> b=%d S=(%d,%d) tau=%d dof=%s",
                 params.dims, G, params.b, params.S1, params.S2, params.tau, params.dof)
    return params


# PSR

def _check_psr_domain(M: int, N: int, K: int) -> None:
    if K != 3:
        raise DomainError(f"PSR is a 3-user scheme, got K={K}")
    if Fraction(M, N) <= Fraction(1, 2):
        raise DomainError(f"PSR needs M/N > 1/2, got {M}/{N}")


def _psr_notes(M: int, N: int, b: int, S1: int, S2: int, S3: int) -> tuple[str, ...]:
    if check_p3(M, N, b, S1, S2, S3, control=True):
        logger.warning("PSR (M,N)=(%d,%d) b=%d: %s", M, N, b, CONTROL_NOTE)
        return (CONTROL_NOTE,)
    return ()


def _psr_at(M: int, N: int, b: int) -> Optional[SchemeParams]:
    """Best feasible PSR slot counts for exactly b symbols."""

    def candidates():
        for phi1 in range(max(1, _ceil_div(b, 4)), b + 1):
            if (phi1 + b) % N:
                continue
            S1 = (phi1 + b) // N
            if M * S1 < b:
                continue
            for phi2 in range(1, phi1 + 1):
                if (phi1 + phi2) % N:
                    continue
                S2 = (phi1 + phi2) // N
                if M * S2 < phi1:
                    continue
                phi3 = max(1, _ceil_div(b - 2 * phi1 - 2 * phi2, 2))
                S3 = max(_ceil_div(2 * phi2 + phi3, N), _ceil_div(2 * phi2, M))
                if not check_p3(M, N, b, S1, S2, S3):
                    yield _make(Scheme.PSR3, M, N, 3, 3, b, S1, S2, S3)

    return _pick(candidates())


def solve_p3(M: int, N: int, B: Optional[int] = None, K: int = 3) -> SchemeParams:
    """
    Optimal parameters of the 3-user PSR scheme.

    The unbounded solution fixes phi1/b, phi2/b and phi3/b at their smallest
    feasible values, eliminating one variable at a time. The control
    constraint 2(phi1+phi2) < b is reported in notes but not enforced.

    Args:
        M, N: Transmit and receive antennas (M/N > 1/2)
        B: Optional budget on symbols per user
        K: Number of users, must be 3

    Returns:
        SchemeParams maximizing b/(N(S1 + 3 S2 + S3))

    Raises:
        DomainError: If (M, N, K) is outside the scheme's domain
        InfeasibleError: If no b <= B is feasible
    """
    _check_psr_domain(M, N, K)
    if B is None:
        rho = Fraction(M, N)
        t = (1 - rho) / rho
        f1 = max(Fraction(1, 4), t)
        f2 = max(f1 * t, (1 - 2 * f1) / 6)
        f3 = max(2 * f2 * t, Fraction(1, 2) - f1 - f2)
        c1, c2, c3 = (f1 + 1) / N, (f1 + f2) / N, (2 * f2 + f3) / N
        b = _common_scale([c1, c2, c3])
        S1, S2, S3 = int(b * c1), int(b * c2), int(b * c3)
        violated = check_p3(M, N, b, S1, S2, S3)
        if violated:
            raise InfeasibleError(f"PSR closed form violates: {', '.join(violated)}")
    else:
        if B < 1:
            raise DomainError(f"symbol budget must be positive, got B={B}")
        best = _pick(p for p in (_psr_at(M, N, b) for b in range(1, B + 1)) if p)
        if best is None:
            raise InfeasibleError(f"no PSR parameters with b <= {B}")
        b, S1, S2, S3 = best.b, best.S1, best.S2, best.S3
    params = _make(Scheme.PSR3, M, N, 3, 3, b, S1, S2, S3,
                   notes=_psr_notes(M, N, b, S1, S2, S3))
    logger.debug("PSR %s -> b=%d S=(%d,%d,%d) tau=%d dof=%s",
                 params.dims, b, S1, S2, S3, params.tau, params.dof)
    return params


def best_at(scheme: Scheme, M: int, N: int, K: int, group: int, b: int) -> Optional[SchemeParams]:
    """
    Best parameters of a scheme for exactly b symbols per user.

    Returns:
        SchemeParams, or None when b admits no feasible slot counts
    """
    if scheme is Scheme.RIA:
        _check_ria_domain(M, N, K, group)
        return _ria_at(M, N, K, group, b)
    if scheme is Scheme.TG:
        _check_tg_domain(M, N, K, group)
        return _tg_at(M, N, K, group, b)
    _check_psr_domain(M, N, K)
    return _psr_at(M, N, b)


def brute_force_params(scheme: Scheme, M: int, N: int, K: int, group_size: int,
                       b_max: int, s_max: int) -> SchemeParams:
    """
    Exhaustive search over (b, S1, S2[, S3]) within caps.

    Independent of the closed forms: every integer point is checked against
    the scheme's constraint evaluator and the best objective wins, with the
    same tie-breaking as the solvers.

    Args:
        scheme: Scheme to optimize
        M, N, K: Antenna setting and number of users
        group_size: L for RIA, G for TG, 3 for PSR
        b_max: Largest b tried
        s_max: Largest slot count tried per phase

    Returns:
        Best SchemeParams found

    Raises:
        InfeasibleError: If nothing within the caps is feasible
    """
    slots = range(1, s_max + 1)

    def candidates():
        for b in range(1, b_max + 1):
            if scheme is Scheme.RIA:
                for S1, S2 in product(slots, slots):
                    if not check_p1(M, N, group_size, b, S1, S2):
                        yield _make(scheme, M, N, K, group_size, b, S1, S2)
            elif scheme is Scheme.TG:
                for S1, S2 in product(slots, slots):
                    if not check_p2(M, N, K, group_size, b, S1, S2):
                        yield _make(scheme, M, N, K, group_size, b, S1, S2)
            else:
                for S1, S2, S3 in product(slots, slots, slots):
                    if not check_p3(M, N, b, S1, S2, S3):
                        yield _make(scheme, M, N, 3, 3, b, S1, S2, S3)

    best = _pick(candidates())
    if best is None:
        raise InfeasibleError(f"no {scheme.value} parameters with b <= {b_max}, S <= {s_max}")
    return best
