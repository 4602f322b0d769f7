"""
Report generation.

Renders bounds, parameter tables, trade-off sweeps, Monte-Carlo summaries
and constant-channel experiments as CSV, JSON or human-readable ASCII
tables, and writes results atomically.
"""

import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .bounds import BoundsRow
from .constant_lab import CaseResult
from .decoding import MonteCarloSummary
from .model import SchemeParams
from .tradeoff import TradeoffCurve

BOUNDS_HEADER = ["rho", "outer", "inner", "scheme", "regime", "tdma", "tdma_flat", "gap"]
TRADEOFF_HEADER = ["B", "b", "S1", "S2", "S3", "group", "tau", "dof", "pareto"]


def decimal(x) -> float:
    """Round to 12 significant digits."""
    return float(f"{float(x):.12g}")


def rational(x) -> Optional[str]:
    """Exact rational string such as '12/31', or None for irrational values."""
    if isinstance(x, (Fraction, int)):
        return str(Fraction(x))
    return None


def _cell(x) -> str:
    return f"{float(x):.12g}"


def to_csv(header: list[str], rows: list[list[Any]]) -> str:
    """CSV text with ',' separators and LF line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def to_json(payload: dict) -> str:
    """Indented JSON text with a trailing newline."""
    return json.dumps(payload, indent=2) + "\n"


def write_output(text: str, path: Optional[Path] = None) -> None:
    """
    Write text to a file atomically, or to stdout when no path is given.

    The file is written next to its destination and renamed into place.
    """
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# Bounds

def bounds_csv(rows: list[BoundsRow]) -> str:
    """CSV of a bounds table."""
    return to_csv(BOUNDS_HEADER, [
        [_cell(r.rho), _cell(r.outer), _cell(r.inner.value), r.inner.scheme.value,
         r.inner.regime.value, _cell(r.tdma), _cell(r.tdma_flat), _cell(r.gap)]
        for r in rows
    ])


def format_bounds_table(rows: list[BoundsRow], K: int) -> str:
    """ASCII table of a bounds sweep."""
    lines = []
    lines.append("=" * 85)
    lines.append(f"DOF BOUNDS PER USER (K={K})")
    lines.append("=" * 85)
    lines.append("")
    lines.append(f"{'rho':>8} | {'outer':>9} | {'inner':>9} | {'scheme':<6} | {'regime':<6} | "
                 f"{'tdma':>9} | {'gap':>8}")
    lines.append("-" * 85)
    for r in rows:
        lines.append(f"{float(r.rho):>8.4f} | {float(r.outer):>9.6f} | {float(r.inner.value):>9.6f} | "
                     f"{r.inner.scheme.value:<6} | {r.inner.regime.value:<6} | "
                     f"{float(r.tdma):>9.6f} | {float(r.gap):>8.4f}")
    return "\n".join(lines) + "\n"


# Parameters

def params_payload(params: SchemeParams) -> dict:
    """JSON payload of a parameter table entry."""
    return {
        "scheme": params.scheme.value,
        "M": params.dims.M,
        "N": params.dims.N,
        "K": params.dims.K,
        "group": params.group_size,
        "regime": params.regime.value,
        "b": params.b,
        "S1": params.S1,
        "S2": params.S2,
        "S3": params.S3,
        "tau": params.tau,
        "total_slots": params.total_slots,
        "dof": decimal(params.dof),
        "dof_exact_rational": rational(params.dof),
        "feasible": True,
        "lifted": params.lifted,
        "notes": list(params.notes),
    }


def infeasible_payload(reason: str, **context: Any) -> dict:
    """JSON payload of an infeasible request."""
    payload = dict(context)
    payload["feasible"] = False
    payload["reason"] = reason
    return payload


def format_params(params: SchemeParams) -> str:
    """Human-readable parameter table entry."""
    lines = []
    lines.append("=" * 60)
    lines.append(f"{params.scheme.value.upper()} SYSTEM PARAMETERS {params.dims}")
    lines.append("=" * 60)
    group_name = {"ria": "L", "tg": "G", "psr": "users"}[params.scheme.value]
    lines.append(f"  {group_name + ':':<14} {params.group_size}")
    lines.append(f"  {'Regime:':<14} {params.regime.value}")
    lines.append(f"  {'Symbols b:':<14} {params.b}")
    slots = "/".join(str(s) for s in params.slots)
    lines.append(f"  {'Slots S_p:':<14} {slots}")
    lines.append(f"  {'Frame tau:':<14} {params.tau}")
    if params.total_slots != params.tau:
        lines.append(f"  {'All groups:':<14} {params.total_slots} slots")
    lines.append(f"  {'DoF per user:':<14} {params.dof} ({float(params.dof):.6f})")
    for note in params.notes:
        lines.append(f"  Note: {note}")
    return "\n".join(lines) + "\n"


# Trade-off

def tradeoff_csv(curve: TradeoffCurve) -> str:
    """CSV of a trade-off sweep with the Pareto flag."""
    return to_csv(TRADEOFF_HEADER, [
        [p.B, p.b, p.params.S1, p.params.S2, p.params.S3, p.group, p.tau,
         _cell(p.dof), int(curve.is_pareto(p))]
        for p in curve.points
    ])


def format_tradeoff_table(curve: TradeoffCurve) -> str:
    """ASCII table of a trade-off sweep."""
    lines = []
    lines.append("=" * 85)
    lines.append(f"DOF VS TRANSMISSION LENGTH: {curve.scheme.value.upper()} {curve.dims}")
    lines.append("=" * 85)
    lines.append("")
    lines.append(f"{'B':>5} | {'b':>5} | {'S':<14} | {'group':>5} | {'frame':>5} | {'tau':>6} | {'dof':<10} | Pareto")
    lines.append("-" * 85)
    for p in curve.points:
        slots = "/".join(str(s) for s in p.params.slots)
        mark = "*" if curve.is_pareto(p) else ""
        lines.append(f"{p.B:>5} | {p.b:>5} | {slots:<14} | {p.group:>5} | {p.frame:>5} | {p.tau:>6} | "
                     f"{float(p.dof):<10.6f} | {mark}")
    return "\n".join(lines) + "\n"


# Simulation

def simulation_payload(summary: MonteCarloSummary) -> dict:
    """JSON payload of a Monte-Carlo run."""
    measured = summary.measured_dof
    return {
        "params": params_payload(summary.params),
        "channel": summary.mode.value,
        "acs": summary.acs,
        "trials": len(summary.trials),
        "per_trial": [
            {
                "trial": t.trial,
                "seed": t.seed,
                "feasible": t.feasible,
                "aligned": t.aligned,
                "users": [
                    {"user": r.user + 1, "zf_filter_rank": r.zf_filter_rank,
                     "heq_rank": r.heq_rank, "feasible": r.feasible}
                    for r in t.reports
                ],
            }
            for t in summary.trials
        ],
        "feasible_fraction": summary.feasible_fraction,
        "min_rank": summary.min_rank,
        "max_rank": summary.max_rank,
        "predicted_dof": decimal(summary.predicted_dof),
        "predicted_dof_exact_rational": rational(summary.predicted_dof),
        "measured_dof": decimal(measured) if measured is not None else None,
        "measured_dof_exact_rational": rational(measured) if measured is not None else None,
    }


def format_simulation(summary: MonteCarloSummary) -> str:
    """Human-readable Monte-Carlo summary."""
    params = summary.params
    lines = []
    lines.append("=" * 60)
    lines.append(f"MONTE-CARLO FEASIBILITY: {params.scheme.value.upper()} {params.dims}")
    lines.append("=" * 60)
    lines.append(f"  Channel:           {summary.mode.value}{' + ACS' if summary.acs else ''}")
    lines.append(f"  Trials:            {len(summary.trials)}")
    lines.append(f"  Feasible fraction: {summary.feasible_fraction:.3f}")
    lines.append(f"  Rank of H_eq:      {summary.min_rank}..{summary.max_rank} (b={params.b})")
    lines.append(f"  Predicted DoF:     {summary.predicted_dof}")
    measured = summary.measured_dof
    lines.append(f"  Measured DoF:      {measured if measured is not None else '-'}")
    return "\n".join(lines) + "\n"


# Constant-channel lab

def _complex_list(values) -> list[list[float]]:
    return [[decimal(v.real), decimal(v.imag)] for v in values.ravel()]


def constant_lab_payload(case: CaseResult) -> dict:
    """JSON payload of a constant-channel experiment."""
    payload = {
        "case": case.case.value,
        "M": case.params.dims.M,
        "N": case.params.dims.N,
        "K": case.params.dims.K,
        "channel": case.mode.value,
        "acs": case.acs,
        "seed": case.result.seed,
        "b": case.params.b,
        "users": [
            {"user": r.user + 1, "zf_filter_rank": r.zf_filter_rank,
             "heq_rank": r.heq_rank, "feasible": r.feasible}
            for r in case.reports
        ],
        "feasible": case.feasible,
        "collinearity": None,
    }
    if case.collinearity is not None:
        payload["collinearity"] = {
            "threshold": case.collinearity.threshold,
            "all_collinear": case.collinearity.all_collinear,
            "margin": case.collinearity.margin,
            "all_separated": case.collinearity.all_separated,
            "pairs": [
                {"user": p.user + 1, "angle": p.angle, "collinear": p.collinear,
                 "theta": _complex_list(p.theta), "vartheta": _complex_list(p.vartheta)}
                for p in case.collinearity.pairs
            ],
        }
    return payload


def format_constant_lab(case: CaseResult) -> str:
    """Human-readable constant-channel experiment."""
    lines = []
    lines.append("=" * 60)
    lines.append(f"CONSTANT-CHANNEL LAB: {case.case.value} {case.params.dims}")
    lines.append("=" * 60)
    lines.append(f"  Channel: {case.mode.value}{' + ACS' if case.acs else ''}, seed {case.result.seed}")
    for r in case.reports:
        status = "decodable" if r.feasible else "NOT decodable"
        lines.append(f"  User {r.user + 1}: rank {r.heq_rank}/{r.b} {status}")
    if case.collinearity is not None:
        for p in case.collinearity.pairs:
            lines.append(f"  Combining vectors of user {p.user + 1}: angle {p.angle:.3e} "
                         f"({'collinear' if p.collinear else 'independent'})")
    return "\n".join(lines) + "\n"
