"""
DoF versus transmission-length trade-off.

Capping the symbols per user at B shortens the frame at the price of some
DoF. For every budget the best scheme instance over the admissible group
sizes is chosen, and the sweep over B = 1..B_max yields a non-decreasing
DoF curve together with its Pareto front in the (tau, DoF) plane, where tau
counts the slots of every group served by time-sharing.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bounds import DomainError
from .model import Dims, Scheme, SchemeParams
from .optimizer import InfeasibleError, best_at, rank_key

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TradeoffPoint:
    """Best operating point for a symbol budget."""
    B: int
    params: SchemeParams

    @property
    def group(self) -> int:
        return self.params.group_size

    @property
    def b(self) -> int:
        return self.params.b

    @property
    def tau(self) -> int:
        """Total slots to serve every group once, the delay axis of the curve."""
        return self.params.total_slots

    @property
    def frame(self) -> int:
        """Frame length of one scheme instance."""
        return self.params.tau

    @property
    def dof(self) -> Fraction:
        return self.params.dof


@dataclass
class TradeoffCurve:
    """Sweep of the best operating point over B = 1..B_max."""
    scheme: Scheme
    dims: Dims
    points: list[TradeoffPoint] = field(default_factory=list)
    pareto: list[TradeoffPoint] = field(default_factory=list)

    def is_pareto(self, point: TradeoffPoint) -> bool:
        """Check whether a point belongs to the Pareto front."""
        return any(p is point for p in self.pareto)


def group_sizes(scheme: Scheme, K: int) -> range:
    """Admissible group sizes of a scheme with K users."""
    if scheme is Scheme.RIA:
        return range(3, K + 1)
    if scheme is Scheme.TG:
        return range(2, K + 1)
    return range(3, 4)


def _best_for_b(scheme: Scheme, M: int, N: int, K: int, b: int) -> Optional[SchemeParams]:
    """Best parameters with exactly b symbols over every group size."""
    best = None
    for group in group_sizes(scheme, K):
        candidate = best_at(scheme, M, N, K, group, b)
        if candidate is not None and (best is None or rank_key(candidate) < rank_key(best)):
            best = candidate
    return best


def bounded_dof(scheme: Scheme, M: int, N: int, K: int, B: int) -> TradeoffPoint:
    """
    Best operating point of a scheme with at most B symbols per user.

    Args:
        scheme: Scheme to evaluate
        M, N, K: Antenna setting and number of users
        B: Symbol budget (>= 1)

    Returns:
        TradeoffPoint with the maximal DoF, then the shortest frame

    Raises:
        InfeasibleError: If no b <= B is feasible
    """
    if B < 1:
        raise DomainError(f"symbol budget must be positive, got B={B}")
    best = None
    for b in range(1, B + 1):
        candidate = _best_for_b(scheme, M, N, K, b)
        if candidate is not None and (best is None or rank_key(candidate) < rank_key(best)):
            best = candidate
    if best is None:
        raise InfeasibleError(f"no {scheme.value} parameters with b <= {B}")
    return TradeoffPoint(B=B, params=best)


def pareto_front(points: list[TradeoffPoint]) -> list[TradeoffPoint]:
    """
    Points not dominated in (shorter tau, higher DoF).

    Returns:
        Points in increasing tau with strictly increasing DoF
    """
    front: list[TradeoffPoint] = []
    for point in sorted(points, key=lambda p: (p.tau, -p.dof, p.B)):
        if not front or point.dof > front[-1].dof:
            front.append(point)
    return front


def sweep_curve(scheme: Scheme, M: int, N: int, K: int, B_max: int) -> TradeoffCurve:
    """
    Sweep the symbol budget from 1 to B_max.

    Budgets that admit no parameters are skipped.

    Args:
        scheme: Scheme to evaluate
        M, N, K: Antenna setting and number of users
        B_max: Largest budget (>= 1)

    Returns:
        TradeoffCurve with non-decreasing DoF and its Pareto front

    Raises:
        InfeasibleError: If no budget up to B_max is feasible
    """
    if B_max < 1:
        raise DomainError(f"symbol budget must be positive, got B_max={B_max}")
    curve = TradeoffCurve(scheme=scheme, dims=Dims(K=K, M=M, N=N))
    best = None
    for b in range(1, B_max + 1):
        candidate = _best_for_b(scheme, M, N, K, b)
        if candidate is not None and (best is None or rank_key(candidate) < rank_key(best)):
            best = candidate
        if best is not None:
            curve.points.append(TradeoffPoint(B=b, params=best))
    if not curve.points:
        raise InfeasibleError(f"no {scheme.value} parameters with b <= {B_max}")
    curve.pareto = pareto_front(curve.points)
    logger.info("%s %s: %d budgets, %d Pareto points", scheme.value, curve.dims,
                len(curve.points), len(curve.pareto))
    return curve
