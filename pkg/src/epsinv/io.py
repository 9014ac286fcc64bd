"""JSON and CSV artifacts.

Exact scalars are written as ``"p/q"`` strings so that exactness survives a
round trip; floats are written with 17 significant digits.  Output is
canonical (sorted keys, fixed separators) so equal inputs give byte-identical
files.
"""
from __future__ import annotations

import json
import math
from numbers import Rational
from pathlib import Path

from .attractor import AttractorTrace
from .branches import AffineBranch, BranchSystem, build_full_affine
from .errors import InvalidInput
from .intervals import IntervalSet
from .measures import CylinderMeasure, SetCheckReport
from .scalars import RATIONAL, format_scalar, parse_scalar
from .solvers import SolveResult
from .stepfun import StepFunction


def _emit(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps(str(obj))
        text = format(obj, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, Rational):
        return json.dumps(format_scalar(obj))
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_emit(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON text (trailing newline included)."""
    return _emit(obj) + "\n"


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def load_json(path):
    # decimal literals are kept as text so rational mode can read them exactly
    return json.loads(Path(path).read_text(), parse_float=lambda s: s, parse_int=int)


def _scalar(value, mode):
    try:
        return parse_scalar(value, mode)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc


# -- interval sets -------------------------------------------------------


def intervalset_to_json(A: IntervalSet) -> dict:
    return {"parts": [[p.lo, p.hi] for p in A.parts]}


def intervalset_from_json(data: dict, mode: str = RATIONAL) -> IntervalSet:
    try:
        return IntervalSet([(_scalar(lo, mode), _scalar(hi, mode)) for lo, hi in data["parts"]])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed interval set: {exc}") from exc


# -- step functions ------------------------------------------------------


def stepfun_to_json(f: StepFunction) -> dict:
    return {"breakpoints": list(f.breakpoints), "values": list(f.values)}


def stepfun_from_json(data: dict, mode: str = RATIONAL) -> StepFunction:
    try:
        bps = tuple(_scalar(b, mode) for b in data["breakpoints"])
        vals = tuple(_scalar(v, mode) for v in data["values"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed step function: {exc}") from exc
    return StepFunction(bps, vals)


# -- branch systems ------------------------------------------------------


def system_to_json(system: BranchSystem) -> dict:
    if not system.is_affine:
        return {"general": True}
    return {"branches": [{"alpha": b.alpha, "beta": b.beta} for b in system.branches]}


def system_from_json(data: dict, mode: str = RATIONAL) -> BranchSystem:
    """Read ``{"branches": [{"alpha":.., "beta":..}, ..]}`` or ``{"alphas": [..]}``.

    The second form builds the full affine system for the given slopes.
    """
    if data.get("general"):
        raise InvalidInput("general branches can only be built through the library API")
    if "alphas" in data:
        return build_full_affine([_scalar(a, mode) for a in data["alphas"]])
    try:
        branches = [
            AffineBranch(_scalar(b["alpha"], mode), _scalar(b["beta"], mode))
            for b in data["branches"]
        ]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed system: {exc}") from exc
    return BranchSystem(tuple(branches))


# -- results and reports -------------------------------------------------


def solve_result_to_json(res: SolveResult) -> dict:
    out = {
        "phi": stepfun_to_json(res.phi),
        "status": res.status,
        "residual": res.residual,
        "iterations": res.iterations,
        "family": res.family,
    }
    if res.tail_bound is not None:
        out["tail_bound"] = res.tail_bound
    if res.metadata:
        out["metadata"] = res.metadata
    return out


def solve_result_from_json(data: dict, mode: str = RATIONAL) -> SolveResult:
    return SolveResult(
        phi=stepfun_from_json(data["phi"], mode),
        status=data["status"],
        residual=_scalar(data["residual"], mode),
        iterations=int(data["iterations"]),
        family=bool(data["family"]),
        tail_bound=None if data.get("tail_bound") is None else float(data["tail_bound"]),
        metadata=data.get("metadata", {}),
    )


def cylinder_spec_from_json(data: dict, mode: str = RATIONAL) -> CylinderMeasure:
    try:
        return CylinderMeasure(
            alphas=tuple(_scalar(a, mode) for a in data["alphas"]),
            epsilon=_scalar(data["epsilon"], mode),
            p=int(data["p"]),
            q=int(data["q"]),
        )
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed cylinder measure spec: {exc}") from exc


def cylinder_spec_to_json(m: CylinderMeasure) -> dict:
    return {"alphas": list(m.alphas), "epsilon": m.epsilon, "p": m.p, "q": m.q}


def set_report_to_json(report: SetCheckReport) -> dict:
    return {
        "epsilon": report.epsilon,
        "ok": report.ok,
        "n_sets": len(report.rows),
        "worst_ratio": report.worst_ratio,
        "witness": None if report.witness is None else intervalset_to_json(report.witness),
    }


def trace_to_json(trace: AttractorTrace) -> dict:
    return {
        "levels": [
            {"m": m, "measure": mu, "n_parts": n}
            for m, (mu, n) in enumerate(zip(trace.measures, trace.part_counts))
        ],
        "ratios": trace.ratio_estimates,
    }
