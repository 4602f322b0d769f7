"""
Constant-channel experiments.

When the channel does not change over the frame, the SISO RIA and PSR plans
lose all but a fraction of their decodable dimensions: the combining vectors
two receivers use to build the intersected interference become collinear,
so the overheard equations repeat. MIMO settings with enough antennas, and
any setting lifted to the real domain with asymmetric complex signaling,
keep full rank.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import scipy.linalg

from .decoding import TrialResult, run_trial
from .model import ChannelMode, DecodeReport, Scheme, SchemeParams
from .optimizer import solve_p1, solve_p2, solve_p3
from .schemes import TransmissionPlan
from .subspace import Tolerance, principal_angle, row_space

logger = logging.getLogger(__name__)

# angles below this are collinear up to rounding
COLLINEAR_THRESHOLD = 1e-8
# angles above this are generically apart; the band in between is undecided
SEPARATION_MARGIN = 1e-3


class UnsupportedCaseError(Exception):
    """Exception raised for a plan or case the constant-channel lab cannot analyze."""
    pass


class ConstantCase(Enum):
    """Preset settings of the constant-channel experiments."""
    RIA_SISO = "ria-siso"
    PSR_SISO = "psr-siso"
    TG_MIMO = "tg-mimo"
    RIA_MIMO = "ria-mimo"


def case_params(case: ConstantCase) -> SchemeParams:
    """Unbounded parameter table entry of a preset case."""
    if case is ConstantCase.RIA_SISO:
        return solve_p1(1, 1, 3, 3)
    if case is ConstantCase.PSR_SISO:
        return solve_p3(1, 1)
    if case is ConstantCase.TG_MIMO:
        return solve_p2(2, 1, 3, 2)
    if case is ConstantCase.RIA_MIMO:
        return solve_p1(2, 3, 3, 3)
    raise UnsupportedCaseError(f"unknown case {case}")


@dataclass
class CollinearPair:
    """Combining vectors of user i at receivers i+1 and i-1 compared."""
    user: int
    theta: np.ndarray
    vartheta: np.ndarray
    angle: float
    collinear: bool


@dataclass
class CollinearityReport:
    """Outcome of the collinearity check over the three users."""
    threshold: float
    pairs: list[CollinearPair] = field(default_factory=list)
    margin: float = SEPARATION_MARGIN

    @property
    def all_collinear(self) -> bool:
        """True when every pair is collinear."""
        return all(p.collinear for p in self.pairs)

    @property
    def all_separated(self) -> bool:
        """True when every pair is further apart than the separation margin."""
        return all(p.angle > self.margin for p in self.pairs)

    @property
    def max_angle(self) -> float:
        """Largest principal angle over all pairs."""
        return max(p.angle for p in self.pairs)


def _combining(plan: TransmissionPlan, j: int, i: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Coefficients expressing user i's intersection in what receiver j overheard.

    Returns:
        (coefficients, combining rows in receiver j's first-phase slot space)
    """
    t = plan.intersections[(1, 0, i)].basis
    overheard = plan.overheard[(j, i)]
    coeffs, *_ = scipy.linalg.lstsq(overheard.T, t.T)
    return coeffs, coeffs.T @ plan.filters[(0, 0, j, i)]


def collinearity_check(plan: TransmissionPlan, tol: Optional[Tolerance] = None,
                        threshold: float = COLLINEAR_THRESHOLD,
                        margin: float = SEPARATION_MARGIN) -> CollinearityReport:
    """
    Test whether the combining vectors of neighbouring receivers coincide.

    For user i the intersection t_i is rebuilt from receiver i+1 through
    theta_i and from receiver i-1 through vartheta_i. Collinearity of
    theta_i and vartheta_{i+1}, mapped through the first-phase filters into
    the common slot space, is measured by the principal angle between the
    two combining rows.

    Args:
        plan: 3-user SISO RIA plan (complex or lifted)
        tol: Rank tolerance (defaults to the plan's)
        threshold: Angles below this count as collinear
        margin: Angles above this count as generically separated

    Returns:
        CollinearityReport for i = 1, 2, 3

    Raises:
        UnsupportedCaseError: For anything but a 3-user SISO RIA plan
    """
    params = plan.params
    antennas = 2 if params.lifted else 1
    if params.scheme is not Scheme.RIA or params.group_size != 3 \
            or (params.dims.M, params.dims.N) != (antennas, antennas):
        raise UnsupportedCaseError("collinearity check needs a 3-user SISO RIA plan")
    tol = tol or plan.tol
    report = CollinearityReport(threshold=threshold, margin=margin)
    for i in range(3):
        nxt = (i + 1) % 3
        theta, g = _combining(plan, nxt, i)
        vartheta, g_prime = _combining(plan, i, nxt)
        angle = principal_angle(row_space(g, tol), row_space(g_prime, tol))
        report.pairs.append(CollinearPair(user=i, theta=theta, vartheta=vartheta,
                                          angle=angle, collinear=angle < threshold))
    logger.debug("collinearity angles: %s", [p.angle for p in report.pairs])
    return report


@dataclass
class CaseResult:
    """One constant-channel experiment."""
    case: ConstantCase
    params: SchemeParams
    mode: ChannelMode
    acs: bool
    result: TrialResult
    collinearity: Optional[CollinearityReport] = None

    @property
    def reports(self) -> list[DecodeReport]:
        """Per-user decode reports."""
        return self.result.reports

    @property
    def feasible(self) -> bool:
        """True when every user decodes all of its symbols."""
        return self.result.feasible


def run_case(case: ConstantCase, seed: int, mode: ChannelMode = ChannelMode.CONSTANT,
             acs: bool = False, tol: Tolerance = Tolerance()) -> CaseResult:
    """
    Simulate a preset case over one ensemble.

    Args:
        case: Preset setting
        seed: Channel seed
        mode: Channel mode; time-varying serves as control
        acs: Lift to the real domain
        tol: Rank tolerance

    Returns:
        CaseResult, with a collinearity report for RIA SISO
    """
    params = case_params(case)
    plan, _, result = run_trial(params, seed, mode, acs, tol)
    collinearity = collinearity_check(plan, tol) if case is ConstantCase.RIA_SISO else None
    logger.info("%s (%s%s) seed %d: ranks %s", case.value, mode.value,
                ", acs" if acs else "", seed, [r.heq_rank for r in result.reports])
    return CaseResult(case=case, params=plan.params, mode=mode, acs=acs,
                      result=result, collinearity=collinearity)


def constant_failure_report(case: ConstantCase, seed: int,
                            tol: Tolerance = Tolerance()) -> list[DecodeReport]:
    """Decode reports of a preset case over a constant channel."""
    return run_case(case, seed, ChannelMode.CONSTANT, tol=tol).reports


def acs_feasibility(case: ConstantCase, seed: int,
                    tol: Tolerance = Tolerance()) -> list[DecodeReport]:
    """Decode reports of a preset case over a constant channel lifted by ACS."""
    return run_case(case, seed, ChannelMode.CONSTANT, acs=True, tol=tol).reports
