"""Parameter sweeps over the bounds with equality recipes (table output)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bounds as B
from .errors import InputError
from .extremal import RECIPE_BOUNDS, solve_equality_params
from .scenario import Scenario, extremal_scenario, run

#: Sweepable parameters per recipe bound.
SWEEP_PARAMS = {
    B.THM_2_1: ("k",),
    B.COR_2_2: ("rho",),
    B.COR_2_3: ("m", "M"),
    B.COR_2_4: ("r",),
    B.COR_2_5: ("m", "M"),
}

_BASE_DEFAULTS = {
    B.THM_2_1: {"k": 0.5, "alpha": 1.0},
    B.COR_2_2: {"rho": 0.6},
    B.COR_2_3: {"m": 1.0, "M": 4.0},
    B.COR_2_4: {"r": 0.5},
    B.COR_2_5: {"m": 1.0, "M": 4.0},
}

CSV_HEADER = "parameter,value,lhs,rhs,margin,extremal_gap"


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float
    lhs: float
    rhs: float
    margin: float
    extremal_gap: float | None
    verdict: str


def _base_params(bound_id: str, base: Scenario | None) -> dict:
    params = dict(_BASE_DEFAULTS[bound_id])
    if base is None:
        return params
    for entry in base.bounds:
        if entry.bound_id != bound_id:
            continue
        bp = entry.params
        if bound_id == B.COR_2_2:
            params["rho"] = bp.rho
        elif bound_id in (B.COR_2_3,):
            params.update(m=bp.m, M=bp.M)
        elif bound_id == B.COR_2_5:
            params.update(m=float(bp.m_profile.values[0]), M=float(bp.M_profile.values[0]))
        elif bound_id == B.COR_2_4:
            params["r"] = float(bp.r.values[0])
        else:
            params["k"] = float(bp.k.values[0])
    return params


def sweep(bound_id: str, parameter: str, start: float, stop: float, steps: int,
          base: Scenario | None = None) -> tuple[list[SweepRow], list[str]]:
    """One row per step over ``parameter``; infeasible values are skipped.

    Without a base scenario each row evaluates the bound on its own extremal
    function, so margin and gap coincide; with a base scenario the margin
    columns come from the base function re-run at the swept parameter while
    the gap still comes from the extremal recipe.  Returns (rows, warnings).
    """
    if bound_id not in RECIPE_BOUNDS:
        raise InputError(f"sweep supports bounds with equality recipes, not {bound_id!r}")
    if parameter not in SWEEP_PARAMS[bound_id]:
        raise InputError(
            f"{bound_id} sweeps over {SWEEP_PARAMS[bound_id]}, not {parameter!r}")
    if steps < 1:
        raise InputError("steps must be >= 1")
    values = [float(v) for v in np.linspace(start, stop, steps)]
    interval = (base.grid.a, base.grid.b) if base is not None else (0.0, 1.0)
    n_panels = base.grid.n_panels if base is not None else None
    rows: list[SweepRow] = []
    warnings: list[str] = []
    for value in values:
        params = _base_params(bound_id, base)
        params[parameter] = value
        try:
            solve_equality_params(bound_id, params, interval)
            ext = extremal_scenario(bound_id, params, interval=interval, n_panels=n_panels,
                                    scenario_id=f"sweep-{bound_id.lower()}-{parameter}")
        except InputError as exc:
            warnings.append(f"{parameter}={value!r} skipped: {exc}")
            continue
        ext_result = run(ext).results[0]
        gap = ext_result.margin
        if base is None:
            rows.append(SweepRow(parameter, value, ext_result.lhs, ext_result.rhs,
                                 ext_result.margin, gap, ext_result.verdict))
            continue
        entries = tuple(
            ext.bounds[0] if entry.bound_id == bound_id else entry
            for entry in base.bounds
        )
        if all(entry.bound_id != bound_id for entry in base.bounds):
            entries = entries + (ext.bounds[0],)
        swept = Scenario(base.id, base.field, base.d, base.grid, base.function,
                         base.reference, entries, base.tolerances)
        result = next(r for r in run(swept).results if r.bound_id == bound_id)
        rows.append(SweepRow(parameter, value, result.lhs, result.rhs, result.margin,
                             gap, result.verdict))
    return rows, warnings


def sweep_to_csv(rows: list[SweepRow]) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        gap = "" if row.extremal_gap is None else repr(row.extremal_gap)
        lines.append(f"{row.parameter},{row.value!r},{row.lhs!r},{row.rhs!r},"
                     f"{row.margin!r},{gap}")
    return "\n".join(lines) + "\n"
