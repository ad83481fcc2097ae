"""Seeded hypothesis-by-construction fuzzing of every certified bound.

Each trial draws a scenario whose hypothesis holds at every grid node by
construction, so the trial tests the bound itself rather than the checker.
Randomness is counter-based (Philox keyed by the seed, counter set from
the trial index), so trials are order-independent and each one can be
reproduced in isolation.  Random functions are band-limited trigonometric
node data (at most 8 harmonics), keeping quadrature error well below the
bound margins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import bounds as B
from .bounds import BoundParams, VIOLATED
from .errors import InputError
from .gridfn import FunctionSpec, Grid, ScalarProfile
from .hilbert import COMPLEX, REAL, HVector, OrthonormalFamily, orthonormalize
from .quadrature import DEFAULT_RULE
from .scenario import (
    BoundEntry,
    REF_DIRECTION,
    REF_FAMILY,
    REF_UNIT,
    Reference,
    RunReport,
    Scenario,
    Tolerances,
    run,
    scenario_to_dict,
)

MAX_HARMONICS = 8
MAX_COUNTEREXAMPLE_DUMPS = 5

#: Numerical-noise separator: margins below -slack are treated as genuine
#: counterexamples and dumped with a reproducing scenario.
def _slack(tolerances: Tolerances, err_budget: float) -> float:
    return tolerances.slack_for(err_budget)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent, order-free stream for one trial (Philox counter block)."""
    counter = np.array([0, 0, 0, trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=np.uint64(seed), counter=counter))


# --------------------------------------------------------------------------
# random building blocks

def _coeffs(rng, shape, field):
    if field == COMPLEX:
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return rng.standard_normal(shape)


def _trig_path(rng, grid: Grid, d: int, field: str, harmonics: int = MAX_HARMONICS):
    """Band-limited path (N+1, d): random drift plus <= ``harmonics`` modes."""
    t = (grid.nodes() - grid.a) / grid.length
    n_modes = int(rng.integers(1, harmonics + 1))
    ks = np.arange(1, n_modes + 1)
    decay = 1.0 / ks
    a = _coeffs(rng, (n_modes, d), field) * decay[:, None]
    b = _coeffs(rng, (n_modes, d), field) * decay[:, None]
    c0 = _coeffs(rng, (d,), field)
    phases = 2.0 * math.pi * np.outer(t, ks)
    return c0[None, :] + np.cos(phases) @ a + np.sin(phases) @ b


def _bounded_path(rng, grid: Grid, d: int, field: str):
    """Path with max node norm exactly 1 (zero path cannot occur)."""
    path = _trig_path(rng, grid, d, field)
    top = float(np.max(np.linalg.norm(path, axis=1)))
    return path / top


def _smooth_scalar(rng, grid: Grid, lo: float, hi: float):
    """Smooth real samples ranging inside [lo, hi]."""
    raw = _trig_path(rng, grid, 1, REAL)[:, 0]
    top = float(np.max(np.abs(raw)))
    if top == 0.0:
        raw = np.zeros(grid.n_nodes)
    else:
        raw = raw / top
    return lo + (hi - lo) * (raw + 1.0) / 2.0


def _unit_vector(rng, field: str, d: int) -> HVector:
    v = _coeffs(rng, (d,), field)
    return HVector(field, v / np.linalg.norm(v))


def _orthofamily(rng, field: str, d: int, n: int) -> OrthonormalFamily:
    mat = _coeffs(rng, (n, d), field)
    return orthonormalize(tuple(HVector(field, row) for row in mat))


def _direction(rng) -> tuple[float, float]:
    psi = rng.uniform(0.1, math.pi / 2.0 - 0.1)
    return math.cos(psi), math.sin(psi)


def _samples_profile(grid: Grid, values) -> ScalarProfile:
    return ScalarProfile(grid, np.maximum(np.asarray(values, dtype=np.float64), 0.0))


# --------------------------------------------------------------------------
# per-bound generators; each returns (values, reference, params)

def _gen_dominance(rng, grid, field, d, n_family):
    e = _unit_vector(rng, field, d)
    values = rng.uniform(0.5, 2.0) * _trig_path(rng, grid, d, field)
    gap = np.linalg.norm(values, axis=1) - (values @ np.conjugate(e.coords)).real
    slack = rng.uniform(0.0, 0.5)
    k = _samples_profile(grid, np.maximum(gap, 0.0) + slack)
    return values, Reference(REF_UNIT, e=e), BoundParams(k=k)


def _ball_values(rng, grid, field, d, e, rho_max=0.95):
    rho = rng.uniform(0.05, rho_max)
    eta = rng.uniform(0.2, 0.98)
    w = _bounded_path(rng, grid, d, field)
    return e.coords[None, :] + rho * eta * w, rho


def _gen_ball(rng, grid, field, d, n_family):
    e = _unit_vector(rng, field, d)
    values, rho = _ball_values(rng, grid, field, d, e)
    return values, Reference(REF_UNIT, e=e), BoundParams(rho=rho)


def _gen_ball_profile(rng, grid, field, d, n_family):
    e = _unit_vector(rng, field, d)
    amp = rng.uniform(0.1, 1.4)
    w = _bounded_path(rng, grid, d, field)
    values = e.coords[None, :] + amp * w
    dist = np.linalg.norm(values - e.coords[None, :], axis=1)
    r = _samples_profile(grid, dist + rng.uniform(0.01, 0.3))
    return values, Reference(REF_UNIT, e=e), BoundParams(r=r)


def _band_constants(rng, values, e_coords):
    """(m, M) with the band condition holding at every node of ``values``."""
    p = (values @ np.conjugate(e_coords)).real
    q = np.linalg.norm(values, axis=1) ** 2
    M = (1.0 + rng.uniform(0.05, 0.5)) * float(np.max(q / p))
    cap = float(np.min((M * p - q) / (M - p)))
    m = rng.uniform(0.1, 0.9) * cap
    return m, M


def _disk_values(rng, grid, field, d, e, m, M):
    """Node values sampled inside the band disk around ((M+m)/2) e."""
    center = 0.5 * (M + m)
    radius = 0.5 * (M - m)
    eta = rng.uniform(0.2, 0.98)
    w = _bounded_path(rng, grid, d, field)
    return center * e.coords[None, :] + radius * eta * w


def _gen_band(rng, grid, field, d, n_family):
    e = _unit_vector(rng, field, d)
    m = rng.uniform(0.05, 1.5)
    M = m + rng.uniform(0.01, 3.0)
    values = _disk_values(rng, grid, field, d, e, m, M)
    return values, Reference(REF_UNIT, e=e), BoundParams(m=m, M=M)


def _gen_band_profiles(rng, grid, field, d, n_family):
    e = _unit_vector(rng, field, d)
    c0 = _smooth_scalar(rng, grid, 0.6, 1.6)
    xi = _smooth_scalar(rng, grid, 0.1, 0.9)
    R = c0 * xi
    eta = rng.uniform(0.2, 0.98)
    w = _bounded_path(rng, grid, d, field)
    values = c0[:, None] * e.coords[None, :] + (R * eta)[:, None] * w
    m = _samples_profile(grid, c0 - R)
    M = _samples_profile(grid, c0 + R)
    return values, Reference(REF_UNIT, e=e), BoundParams(m_profile=m, M_profile=M)


def _gen_scaled_dominance(rng, grid, field, d, n_family):
    e = _unit_vector(rng, field, d)
    values, _ = _ball_values(rng, grid, field, d, e, rho_max=0.9)
    p = (values @ np.conjugate(e.coords)).real
    ratio = np.linalg.norm(values, axis=1) / p
    K = float(np.max(ratio)) * (1.0 + rng.uniform(0.0, 0.5))
    return values, Reference(REF_UNIT, e=e), BoundParams(K=max(K, 1.0))


def _gen_arg_cone(rng, grid, field, d, n_family):
    theta = rng.uniform(0.15, math.pi / 2.0 - 0.05)
    r = _smooth_scalar(rng, grid, 0.2, 2.0)
    raw = _trig_path(rng, grid, 1, REAL)[:, 0]
    top = float(np.max(np.abs(raw))) or 1.0
    phi = theta * rng.uniform(0.2, 0.95) * raw / top
    values = (r * np.exp(1j * phi))[:, None]
    alpha, beta = _direction(rng)
    return values, Reference(REF_DIRECTION, alpha=alpha, beta=beta), BoundParams(theta=theta)


def _symmetric_base(rng, grid, field, d, family, c_lo, c_hi, amp):
    s_unit = family.sum_vector().coords / math.sqrt(family.n)
    c = _smooth_scalar(rng, grid, c_lo, c_hi)
    w = _bounded_path(rng, grid, d, field)
    return c[:, None] * s_unit[None, :] + amp * w


def _gen_family_dominance(rng, grid, field, d, n_family):
    family = _orthofamily(rng, field, d, n_family)
    values = _symmetric_base(rng, grid, field, d, family,
                             0.5, 1.5, rng.uniform(0.0, 0.5))
    norms = np.linalg.norm(values, axis=1)
    proj = (values @ np.conjugate(family.matrix().T)).real
    profiles = tuple(
        _samples_profile(grid, np.maximum(norms - proj[:, i], 0.0) + rng.uniform(0.0, 0.4))
        for i in range(n_family)
    )
    return values, Reference(REF_FAMILY, family=family), BoundParams(dominance_profiles=profiles)


def _gen_family_ball(rng, grid, field, d, n_family):
    family = _orthofamily(rng, field, d, n_family)
    n = family.n
    center_dist = math.sqrt(1.0 - 1.0 / n)
    room = 1.0 - center_dist
    s_unit = family.sum_vector().coords / math.sqrt(n)
    gamma = rng.uniform(0.0, 0.25 * room) * _smooth_scalar(rng, grid, -1.0, 1.0)
    eps = rng.uniform(0.0, 0.25 * room)
    w = _bounded_path(rng, grid, d, field)
    values = (1.0 / math.sqrt(n) + gamma)[:, None] * s_unit[None, :] + eps * w
    rhos = []
    for i in range(n):
        dist = np.linalg.norm(values - family.members[i].coords[None, :], axis=1)
        top = float(np.max(dist))
        rhos.append(top + rng.uniform(0.05, 0.9) * (1.0 - top))
    return values, Reference(REF_FAMILY, family=family), BoundParams(rhos=tuple(rhos))


def _gen_family_band(rng, grid, field, d, n_family):
    family = _orthofamily(rng, field, d, n_family)
    amp = rng.uniform(0.02, 0.4 * 0.8 / math.sqrt(n_family))
    values = _symmetric_base(rng, grid, field, d, family, 0.8, 1.5, amp)
    ms, Ms = [], []
    for i in range(n_family):
        m, M = _band_constants(rng, values, family.members[i].coords)
        ms.append(m)
        Ms.append(M)
    return values, Reference(REF_FAMILY, family=family), BoundParams(ms=tuple(ms), Ms=tuple(Ms))


def _gen_family_ball_profiles(rng, grid, field, d, n_family):
    family = _orthofamily(rng, field, d, n_family)
    values = _symmetric_base(rng, grid, field, d, family,
                             0.5, 1.5, rng.uniform(0.0, 0.5))
    profiles = []
    for i in range(n_family):
        dist = np.linalg.norm(values - family.members[i].coords[None, :], axis=1)
        profiles.append(_samples_profile(grid, dist + rng.uniform(0.01, 0.5)))
    return values, Reference(REF_FAMILY, family=family), BoundParams(r_profiles=tuple(profiles))


def _gen_family_band_profiles(rng, grid, field, d, n_family):
    family = _orthofamily(rng, field, d, n_family)
    amp = rng.uniform(0.02, 0.4 * 0.8 / math.sqrt(n_family))
    values = _symmetric_base(rng, grid, field, d, family, 0.8, 1.5, amp)
    q = np.linalg.norm(values, axis=1) ** 2
    m_profiles, M_profiles = [], []
    for i in range(n_family):
        p = (values @ np.conjugate(family.members[i].coords)).real
        c0 = (1.0 + rng.uniform(0.05, 0.6)) * q / (2.0 * p)
        dist = np.sqrt(np.maximum(q - 2.0 * c0 * p + c0 * c0, 0.0))
        R = dist + rng.uniform(0.05, 0.9) * (c0 - dist)
        m_profiles.append(_samples_profile(grid, c0 - R))
        M_profiles.append(_samples_profile(grid, c0 + R))
    return values, Reference(REF_FAMILY, family=family), BoundParams(
        m_profiles=tuple(m_profiles), M_profiles=tuple(M_profiles))


def _gen_complex_ball(rng, grid, field, d, n_family):
    alpha, beta = _direction(rng)
    e = HVector(COMPLEX, [complex(alpha, beta)])
    values, rho = _ball_values(rng, grid, COMPLEX, 1, e)
    return values, Reference(REF_DIRECTION, alpha=alpha, beta=beta), BoundParams(rho=rho)


def _gen_complex_band(rng, grid, field, d, n_family):
    alpha, beta = _direction(rng)
    e = HVector(COMPLEX, [complex(alpha, beta)])
    m = rng.uniform(0.05, 1.5)
    M = m + rng.uniform(0.01, 3.0)
    values = _disk_values(rng, grid, COMPLEX, 1, e, m, M)
    return values, Reference(REF_DIRECTION, alpha=alpha, beta=beta), BoundParams(m=m, M=M)


def _gen_complex_box(rng, grid, field, d, n_family):
    alpha, beta = _direction(rng)
    base_re = _smooth_scalar(rng, grid, 0.3, 2.0)
    base_im = _smooth_scalar(rng, grid, 0.3, 2.0)
    values = (alpha * base_re + 1j * beta * base_im)[:, None]
    kappa = rng.uniform(0.02, 0.4)
    k = _samples_profile(grid, np.minimum(base_re, base_im) * (1.0 - kappa))
    K = _samples_profile(grid, np.maximum(base_re, base_im) * (1.0 + kappa))
    return values, Reference(REF_DIRECTION, alpha=alpha, beta=beta), BoundParams(
        m_profile=k, M_profile=K)


GENERATORS = {
    B.THM_2_1: _gen_dominance,
    B.COR_2_2: _gen_ball,
    B.COR_2_3: _gen_band,
    B.COR_2_4: _gen_ball_profile,
    B.COR_2_5: _gen_band_profiles,
    B.MULT_A: _gen_scaled_dominance,
    B.MULT_B: _gen_ball,
    B.MULT_C: _gen_band,
    B.KARAMATA: _gen_arg_cone,
    B.THM_3_1: _gen_family_dominance,
    B.COR_3_2: _gen_family_ball,
    B.COR_3_3: _gen_family_band,
    B.COR_3_4: _gen_family_ball_profiles,
    B.COR_3_5: _gen_family_band_profiles,
    B.PROP_4_1: _gen_complex_ball,
    B.PROP_4_2: _gen_complex_band,
    B.PROP_4_3: _gen_complex_box,
}

_FORCED_COMPLEX_D1 = (B.KARAMATA,) + B.COMPLEX_BOUNDS


def generate_scenario(bound_id: str, seed: int, trial: int, d: int = 4,
                      field: str = REAL, n_family: int = 3,
                      interval: tuple[float, float] = (0.0, 1.0),
                      n_panels: int = 512) -> Scenario:
    """Deterministic hypothesis-satisfying scenario for (seed, trial)."""
    if bound_id not in GENERATORS:
        raise InputError(f"unknown bound id {bound_id!r}")
    if bound_id in _FORCED_COMPLEX_D1:
        field, d = COMPLEX, 1
    if bound_id in B.FAMILY_BOUNDS and n_family > d:
        raise InputError(f"family of {n_family} needs d >= {n_family}")
    rng = trial_rng(seed, trial)
    grid = Grid(interval[0], interval[1], n_panels)
    values, reference, params = GENERATORS[bound_id](rng, grid, field, d, n_family)
    provenance = {
        "generator": f"fuzz:{bound_id}",
        "seed": int(seed),
        "trial": int(trial),
        "d": int(d),
        "field": field,
        "n_family": int(n_family) if bound_id in B.FAMILY_BOUNDS else None,
    }
    return Scenario(
        id=f"fuzz-{bound_id}-s{seed}-t{trial}",
        field=field, d=d, grid=grid,
        function=FunctionSpec.samples(values),
        reference=reference,
        bounds=(BoundEntry(bound_id, params),),
        tolerances=Tolerances(),
        provenance=provenance,
    )


@dataclass
class FuzzSummary:
    """Aggregate of one fuzzing campaign (one bound, many trials)."""

    bound_id: str
    trials: int
    seed: int
    holds: int = 0
    violated: int = 0
    hypothesis_failed: int = 0
    worst_margin: float = math.inf
    worst_margin_trial: int = -1
    min_defect_slack: float = math.inf
    chain_violations: int = 0
    printed_form_margins: list[float] = dc_field(default_factory=list)
    counterexamples: list[dict] = dc_field(default_factory=list)
    reports: list[RunReport] | None = None

    @property
    def clean(self) -> bool:
        return self.violated == 0 and self.hypothesis_failed == 0

    def to_dict(self) -> dict:
        out = {
            "bound_id": self.bound_id,
            "trials": self.trials,
            "seed": self.seed,
            "holds": self.holds,
            "violated": self.violated,
            "hypothesis_failed": self.hypothesis_failed,
            "worst_margin": self.worst_margin,
            "worst_margin_trial": self.worst_margin_trial,
            "min_defect_slack": self.min_defect_slack,
            "chain_violations": self.chain_violations,
            "counterexamples": self.counterexamples,
        }
        if self.printed_form_margins:
            margins = np.asarray(self.printed_form_margins)
            out["printed_form"] = {
                "min_margin": float(margins.min()),
                "max_margin": float(margins.max()),
                "mean_margin": float(margins.mean()),
                "negative_count": int(np.sum(margins < 0.0)),
            }
        return out


def _chain_gap(result) -> float | None:
    weak = result.rhs_terms.get("weak_rhs")
    if weak is None:
        return None
    scale = abs(result.rhs) + abs(weak) + 1.0
    return result.rhs - weak - 1e-12 * scale


def fuzz(bound_id: str, trials: int, seed: int, d: int = 4, field: str = REAL,
         n_family: int = 3, interval: tuple[float, float] = (0.0, 1.0),
         n_panels: int = 512, rule: str = DEFAULT_RULE,
         keep_reports: bool = False) -> FuzzSummary:
    """Run ``trials`` hypothesis-by-construction scenarios against one bound."""
    if trials < 1:
        raise InputError("need at least one trial")
    summary = FuzzSummary(bound_id, trials, seed,
                          reports=[] if keep_reports else None)
    for trial in range(trials):
        scenario = generate_scenario(bound_id, seed, trial, d, field, n_family,
                                     interval, n_panels)
        report = run(scenario, rule)
        result = report.results[0]
        if result.verdict == B.HOLDS:
            summary.holds += 1
        elif result.verdict == VIOLATED:
            summary.violated += 1
        else:
            summary.hypothesis_failed += 1
        if result.margin < summary.worst_margin:
            summary.worst_margin = result.margin
            summary.worst_margin_trial = trial
        defect_slack = report.defect.value + report.defect.err_est
        summary.min_defect_slack = min(summary.min_defect_slack, defect_slack)
        gap = _chain_gap(result)
        if gap is not None and gap > 0.0:
            summary.chain_violations += 1
        if "printed_margin" in result.diagnostics:
            summary.printed_form_margins.append(result.diagnostics["printed_margin"])
        bad = result.verdict == VIOLATED or (
            result.margin < -_slack(scenario.tolerances, result.err_budget))
        if bad and len(summary.counterexamples) < MAX_COUNTEREXAMPLE_DUMPS:
            summary.counterexamples.append({
                "trial": trial,
                "margin": result.margin,
                "err_budget": result.err_budget,
                "scenario": scenario_to_dict(scenario),
            })
        if keep_reports:
            summary.reports.append(report)
    return summary
