"""Hypothesis checkers and evaluators for every certified inequality.

Each bound couples a node-wise hypothesis with an integral inequality.
Evaluation always runs the matching hypothesis checker first; a failed
hypothesis short-circuits judgment (the bound is then neither confirmed
nor refuted).  Margins are judged against a first-order error budget
propagated from the quadrature error estimates plus a roundoff floor.

Bound identifiers (part of the scenario file contract):

  additive, unit reference   THM_2_1 COR_2_2 COR_2_3 COR_2_4 COR_2_5
  multiplicative             MULT_A MULT_B MULT_C KARAMATA
  additive, orthonormal family  THM_3_1 COR_3_2 COR_3_3 COR_3_4 COR_3_5
  complex-plane (d=1)        PROP_4_1 PROP_4_2 PROP_4_3
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DegeneracyError, InputError
from .gridfn import GridFunction, ScalarProfile
from .hilbert import COMPLEX, DEFAULT_ORTHO_TOL, HVector, OrthonormalFamily, inner, norm
from .quadrature import (
    DEFAULT_RULE,
    bochner_integral,
    norm_integral,
    sample_integral,
    scalar_integral,
)

THM_2_1 = "THM_2_1"
COR_2_2 = "COR_2_2"
COR_2_3 = "COR_2_3"
COR_2_4 = "COR_2_4"
COR_2_5 = "COR_2_5"
MULT_A = "MULT_A"
MULT_B = "MULT_B"
MULT_C = "MULT_C"
KARAMATA = "KARAMATA"
THM_3_1 = "THM_3_1"
COR_3_2 = "COR_3_2"
COR_3_3 = "COR_3_3"
COR_3_4 = "COR_3_4"
COR_3_5 = "COR_3_5"
PROP_4_1 = "PROP_4_1"
PROP_4_2 = "PROP_4_2"
PROP_4_3 = "PROP_4_3"

UNIT_ADDITIVE_BOUNDS = (THM_2_1, COR_2_2, COR_2_3, COR_2_4, COR_2_5)
MULT_BOUNDS = (MULT_A, MULT_B, MULT_C)
SCALAR_BOUNDS = (KARAMATA,)
FAMILY_BOUNDS = (THM_3_1, COR_3_2, COR_3_3, COR_3_4, COR_3_5)
COMPLEX_BOUNDS = (PROP_4_1, PROP_4_2, PROP_4_3)
UNIT_BOUNDS = UNIT_ADDITIVE_BOUNDS + MULT_BOUNDS + SCALAR_BOUNDS
ALL_BOUND_IDS = UNIT_BOUNDS + FAMILY_BOUNDS + COMPLEX_BOUNDS

HOLDS = "holds"
VIOLATED = "violated"
HYPOTHESIS_FAILED = "hypothesis_failed"

#: Default absolute tolerance on hypothesis residuals.  Generators satisfy
#: hypotheses exactly up to rounding; a tight tolerance catches construction bugs.
DEFAULT_HYP_TOL = 1e-9

#: Upper guard for ball radii: the coefficient blows up as rho -> 1,
#: so near-degenerate radii are rejected instead of overflowing.
RHO_GUARD = 1.0 - 1e-9

_EPS_FLOOR = 32.0 * float(np.finfo(np.float64).eps)


def ball_coefficient(rho: float) -> float:
    """rho^2 / (sqrt(1-rho^2) * (1 + sqrt(1-rho^2))) for rho in (0, 1)."""
    if not 0.0 < rho < 1.0 or rho >= RHO_GUARD:
        raise InputError(f"rho must lie in (0, 1) and below {RHO_GUARD!r}, got {rho!r}")
    root = math.sqrt(1.0 - rho * rho)
    return rho * rho / (root * (1.0 + root))


def band_coefficient(m: float, M: float) -> float:
    """(sqrt(M) - sqrt(m))^2 / (2 sqrt(mM)) for 0 < m <= M."""
    if not 0.0 < m <= M:
        raise InputError(f"band constants require 0 < m <= M, got m={m!r}, M={M!r}")
    return (math.sqrt(M) - math.sqrt(m)) ** 2 / (2.0 * math.sqrt(m * M))


def band_gap_integrand(m_values: np.ndarray, M_values: np.ndarray) -> np.ndarray:
    """(M - m)^2 / (M + m) node-wise, defined as 0 where M = m = 0."""
    m_values = np.asarray(m_values, dtype=np.float64)
    M_values = np.asarray(M_values, dtype=np.float64)
    if np.any(M_values < m_values):
        j = int(np.argmin(M_values - m_values))
        raise InputError(f"band requires M >= m at every node; violated at node {j}")
    total = M_values + m_values
    out = np.zeros_like(total)
    np.divide((M_values - m_values) ** 2, total, out=out, where=total > 0.0)
    return out


@dataclass(frozen=True)
class HypothesisReport:
    """Node-wise constraint check.

    ``slack_profile`` holds the signed residual at each node (positive means
    violated); ``worst_violation`` is the clamped maximum, 0 when satisfied.
    Family checks aggregate per-index reports in ``sub_reports``.
    """

    condition_id: str
    holds: bool
    worst_violation: float
    worst_node: int
    slack_profile: np.ndarray
    tol: float
    sub_reports: tuple["HypothesisReport", ...] | None = None

    @property
    def failing_indices(self) -> tuple[int, ...]:
        if not self.sub_reports:
            return ()
        return tuple(i for i, r in enumerate(self.sub_reports) if not r.holds)


def _report(condition_id: str, residuals: np.ndarray, tol: float,
            sub_reports=None) -> HypothesisReport:
    residuals = np.asarray(residuals, dtype=np.float64)
    worst_node = int(np.argmax(residuals))
    worst = max(float(residuals[worst_node]), 0.0)
    holds = worst <= tol
    if sub_reports is not None:
        holds = holds and all(r.holds for r in sub_reports)
        sub_reports = tuple(sub_reports)
    return HypothesisReport(condition_id, holds, worst, worst_node, residuals, tol, sub_reports)


def _require_unit_reference(f: GridFunction, e: HVector, tol: float) -> None:
    if e.field != f.field or e.d != f.d:
        raise InputError("reference vector field/dimension mismatch")
    gap = abs(norm(e) - 1.0)
    if gap > tol:
        raise InputError(f"reference vector must be unit (|norm - 1| = {gap:.3e})")


def _profile_on(f: GridFunction, p: ScalarProfile, name: str) -> np.ndarray:
    if p.grid != f.grid:
        raise InputError(f"{name} profile lives on a different grid")
    return p.values


def check_dominance(f: GridFunction, e: HVector, k: ScalarProfile,
                    tau_hyp: float = DEFAULT_HYP_TOL,
                    tau_on: float = DEFAULT_ORTHO_TOL) -> HypothesisReport:
    """||f(t)|| - Re<f(t), e> <= k(t) at every node."""
    _require_unit_reference(f, e, tau_on)
    residuals = f.norms() - f.inner_with(e).real - _profile_on(f, k, "k")
    return _report("dominance", residuals, tau_hyp)


def check_scaled_dominance(f: GridFunction, e: HVector, K: float,
                           tau_hyp: float = DEFAULT_HYP_TOL,
                           tau_on: float = DEFAULT_ORTHO_TOL) -> HypothesisReport:
    """||f(t)|| <= K * Re<f(t), e> at every node (multiplicative hypothesis)."""
    if K < 1.0:
        raise InputError(f"scaling constant must satisfy K >= 1, got {K!r}")
    _require_unit_reference(f, e, tau_on)
    residuals = f.norms() - K * f.inner_with(e).real
    return _report("dominance_scaled", residuals, tau_hyp)


def check_ball(f: GridFunction, e: HVector, radius: ScalarProfile,
               tau_hyp: float = DEFAULT_HYP_TOL,
               tau_on: float = DEFAULT_ORTHO_TOL) -> HypothesisReport:
    """||f(t) - e|| <= radius(t) at every node."""
    _require_unit_reference(f, e, tau_on)
    dist = np.linalg.norm(f.values - e.coords[None, :], axis=1)
    residuals = dist - _profile_on(f, radius, "radius")
    return _report("ball", residuals, tau_hyp)


def check_band(f: GridFunction, e: HVector, m: ScalarProfile, M: ScalarProfile,
               form: str = "inner",
               tau_hyp: float = DEFAULT_HYP_TOL,
               tau_on: float = DEFAULT_ORTHO_TOL) -> HypothesisReport:
    """Band containment around e, in either of its two equivalent forms.

    ``inner``: residual_j = -Re<M(t)e - f(t), f(t) - m(t)e>;
    ``norm``:  residual_j = ||f(t) - (M+m)/2 e|| - (M-m)/2.
    """
    if form not in ("inner", "norm"):
        raise InputError(f"band form must be 'inner' or 'norm', got {form!r}")
    _require_unit_reference(f, e, tau_on)
    m_vals = _profile_on(f, m, "m")
    M_vals = _profile_on(f, M, "M")
    if np.any(M_vals < m_vals):
        j = int(np.argmin(M_vals - m_vals))
        raise InputError(f"band requires M(t) >= m(t) at every node; violated at node {j}")
    p = f.inner_with(e).real
    if form == "inner":
        q = f.norms() ** 2
        residuals = q + m_vals * M_vals - (M_vals + m_vals) * p
        return _report("band_inner", residuals, tau_hyp)
    center = 0.5 * (M_vals + m_vals)
    dist = np.linalg.norm(f.values - center[:, None] * e.coords[None, :], axis=1)
    residuals = dist - 0.5 * (M_vals - m_vals)
    return _report("band_norm", residuals, tau_hyp)


def _complex_samples(f: GridFunction) -> np.ndarray:
    if f.field != COMPLEX or f.d != 1:
        raise InputError("this check needs a d=1 complex grid function")
    return f.values[:, 0]


def check_box_complex(f: GridFunction, alpha: float, beta: float,
                      m: ScalarProfile, M: ScalarProfile,
                      tau_hyp: float = DEFAULT_HYP_TOL) -> HypothesisReport:
    """Rectangle condition m*alpha <= Re f <= M*alpha, m*beta <= Im f <= M*beta.

    A sufficient condition for the band containment around e = alpha + i beta;
    on success the implied band check is also run and attached as a sub-report.
    """
    _validate_direction(alpha, beta)
    z = _complex_samples(f)
    m_vals = _profile_on(f, m, "m")
    M_vals = _profile_on(f, M, "M")
    if np.any(M_vals < m_vals):
        raise InputError("box requires M(t) >= m(t) at every node")
    x, y = z.real, z.imag
    residuals = np.max(
        np.stack([m_vals * alpha - x, x - M_vals * alpha, m_vals * beta - y, y - M_vals * beta]),
        axis=0,
    )
    box = _report("box", residuals, tau_hyp)
    e = HVector(COMPLEX, [complex(alpha, beta)])
    band = check_band(f, e, m, M, form="inner", tau_hyp=tau_hyp)
    return HypothesisReport(
        box.condition_id, box.holds and band.holds, box.worst_violation,
        box.worst_node, box.slack_profile, tau_hyp, sub_reports=(band,),
    )


def check_arg(f: GridFunction, theta: float,
              tau_hyp: float = DEFAULT_HYP_TOL) -> HypothesisReport:
    """|arg f(t)| <= theta at every node, theta in (0, pi/2)."""
    if not 0.0 < theta < math.pi / 2.0:
        raise InputError(f"theta must lie in (0, pi/2), got {theta!r}")
    z = _complex_samples(f)
    if np.any(z == 0.0):
        j = int(np.argmax(z == 0.0))
        raise DegeneracyError(f"argument undefined: f vanishes at node {j}")
    residuals = np.abs(np.angle(z)) - theta
    return _report("arg_cone", residuals, tau_hyp)


def _validate_direction(alpha: float, beta: float) -> None:
    if alpha <= 0.0 or beta <= 0.0:
        raise InputError(f"direction components must be positive, got ({alpha!r}, {beta!r})")
    gap = abs(alpha * alpha + beta * beta - 1.0)
    if gap > 1e-12:
        raise InputError(f"direction must satisfy alpha^2 + beta^2 = 1 (off by {gap:.3e})")


@dataclass(frozen=True)
class BoundParams:
    """Parameters for one bound; only the fields its bound_id reads are set."""

    k: ScalarProfile | None = None
    rho: float | None = None
    m: float | None = None
    M: float | None = None
    r: ScalarProfile | None = None
    m_profile: ScalarProfile | None = None
    M_profile: ScalarProfile | None = None
    K: float | None = None
    theta: float | None = None
    rhos: tuple[float, ...] | None = None
    ms: tuple[float, ...] | None = None
    Ms: tuple[float, ...] | None = None
    r_profiles: tuple[ScalarProfile, ...] | None = None
    m_profiles: tuple[ScalarProfile, ...] | None = None
    M_profiles: tuple[ScalarProfile, ...] | None = None
    dominance_profiles: tuple[ScalarProfile, ...] | None = None
    alpha: float | None = None
    beta: float | None = None

    def require(self, bound_id: str, *names: str) -> list:
        out = []
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise InputError(f"{bound_id} needs parameter {name!r}")
            out.append(value)
        return out


@dataclass(frozen=True)
class BoundResult:
    """One evaluated inequality: lhs <= rhs judged at margin = rhs - lhs."""

    bound_id: str
    lhs: float
    rhs: float
    rhs_terms: dict[str, float]
    margin: float
    hypothesis: HypothesisReport
    err_budget: float
    verdict: str
    diagnostics: dict[str, float] = dc_field(default_factory=dict)


@dataclass(frozen=True)
class _Integrals:
    norm_int: float
    norm_int_err: float
    F: HVector
    F_err: float
    F_norm: float

    @property
    def defect(self) -> float:
        return self.norm_int - self.F_norm


def _integrals(f: GridFunction, rule: str) -> _Integrals:
    ni = norm_integral(f, rule)
    bi = bochner_integral(f, rule)
    return _Integrals(ni.value, ni.err_est, bi.value, bi.err_est,
                      float(np.linalg.norm(bi.value.coords)))


def _finish(bound_id, lhs, rhs, rhs_terms, hyp, err_budget, ints, extra_diags=None):
    lhs, rhs = float(lhs), float(rhs)
    scale = abs(lhs) + abs(rhs) + ints.norm_int + ints.F_norm
    err_budget = float(err_budget) + _EPS_FLOOR * scale
    margin = rhs - lhs
    if not hyp.holds:
        verdict = HYPOTHESIS_FAILED
    elif margin >= -err_budget:
        verdict = HOLDS
    else:
        verdict = VIOLATED
    diagnostics = {
        "defect": ints.defect,
        "defect_err": ints.norm_int_err + ints.F_err,
        "norm_integral": ints.norm_int,
        "integral_norm": ints.F_norm,
    }
    if extra_diags:
        diagnostics.update(extra_diags)
    return BoundResult(
        bound_id, lhs, rhs, {k: float(v) for k, v in rhs_terms.items()},
        float(margin), hyp, err_budget, verdict,
        {k: float(v) for k, v in diagnostics.items()},
    )


def eval_unit_bound(f: GridFunction, e: HVector | None, params: BoundParams, bound_id: str,
                    rule: str = DEFAULT_RULE,
                    tau_hyp: float = DEFAULT_HYP_TOL,
                    tau_on: float = DEFAULT_ORTHO_TOL) -> BoundResult:
    """Evaluate a unit-reference bound (additive, multiplicative, or angle-based).

    ``e`` may be None only for KARAMATA, whose hypothesis is argument-based.
    """
    if bound_id not in UNIT_BOUNDS:
        raise InputError(f"{bound_id!r} is not a unit-reference bound id")
    ints = _integrals(f, rule)
    if bound_id == KARAMATA:
        theta, = params.require(bound_id, "theta")
        hyp = check_arg(f, theta, tau_hyp)
        c = math.cos(theta)
        lhs = c * ints.norm_int
        rhs = ints.F_norm
        err = ints.F_err + c * ints.norm_int_err
        return _finish(bound_id, lhs, rhs, {"cos_theta": c, "norm_integral": ints.norm_int},
                       hyp, err, ints)

    if e is None:
        raise InputError(f"{bound_id} needs a unit reference vector")
    re_proj = float(inner(ints.F, e).real)

    if bound_id == THM_2_1:
        k, = params.require(bound_id, "k")
        hyp = check_dominance(f, e, k, tau_hyp, tau_on)
        ki = scalar_integral(k, rule)
        lhs = ints.defect
        rhs = ki.value
        err = ki.err_est + ints.norm_int_err + ints.F_err
        return _finish(bound_id, lhs, rhs, {"dominance_integral": ki.value}, hyp, err, ints)

    if bound_id in (COR_2_2, COR_2_3):
        if bound_id == COR_2_2:
            rho, = params.require(bound_id, "rho")
            c = ball_coefficient(rho)
            hyp = check_ball(f, e, ScalarProfile.constant(f.grid, rho), tau_hyp, tau_on)
        else:
            m, M = params.require(bound_id, "m", "M")
            c = band_coefficient(m, M)
            hyp = check_band(f, e, ScalarProfile.constant(f.grid, m),
                             ScalarProfile.constant(f.grid, M), "inner", tau_hyp, tau_on)
        lhs = ints.defect
        rhs = c * re_proj
        weak_rhs = c * ints.F_norm
        err = c * ints.F_err + ints.norm_int_err + ints.F_err
        return _finish(bound_id, lhs, rhs,
                       {"coefficient": c, "projection": re_proj, "weak_rhs": weak_rhs},
                       hyp, err, ints, {"weak_margin": weak_rhs - lhs})

    if bound_id == COR_2_4:
        r, = params.require(bound_id, "r")
        hyp = check_ball(f, e, r, tau_hyp, tau_on)
        r2 = sample_integral(f.grid, r.values ** 2, rule)
        lhs = ints.defect
        rhs = 0.5 * r2.value
        err = 0.5 * r2.err_est + ints.norm_int_err + ints.F_err
        return _finish(bound_id, lhs, rhs, {"r_squared_integral": r2.value}, hyp, err, ints)

    if bound_id == COR_2_5:
        m, M = params.require(bound_id, "m_profile", "M_profile")
        hyp = check_band(f, e, m, M, "norm", tau_hyp, tau_on)
        gap = sample_integral(f.grid, band_gap_integrand(m.values, M.values), rule)
        lhs = ints.defect
        rhs = 0.25 * gap.value
        err = 0.25 * gap.err_est + ints.norm_int_err + ints.F_err
        return _finish(bound_id, lhs, rhs, {"band_gap_integral": gap.value}, hyp, err, ints)

    if bound_id == MULT_A:
        K, = params.require(bound_id, "K")
        hyp = check_scaled_dominance(f, e, K, tau_hyp, tau_on)
        lhs = ints.norm_int
        rhs = K * ints.F_norm
        err = K * ints.F_err + ints.norm_int_err
        return _finish(bound_id, lhs, rhs, {"K": K, "integral_norm": ints.F_norm},
                       hyp, err, ints)

    if bound_id == MULT_B:
        rho, = params.require(bound_id, "rho")
        ball_coefficient(rho)  # range validation
        hyp = check_ball(f, e, ScalarProfile.constant(f.grid, rho), tau_hyp, tau_on)
        factor = math.sqrt(1.0 - rho * rho)
        lhs = factor * ints.norm_int
        rhs = ints.F_norm
        err = ints.F_err + factor * ints.norm_int_err
        return _finish(bound_id, lhs, rhs, {"factor": factor, "integral_norm": ints.F_norm},
                       hyp, err, ints)

    # MULT_C: the certified bound is the corrected additive form
    #   defect <= (sqrt(M)-sqrt(m))^2/(M+m) * int ||f|| dt,
    # the only additive form derivable from the multiplicative one; the
    # printed variant with ||int f|| on the right is reported as a
    # diagnostic, never asserted.
    m, M = params.require(bound_id, "m", "M")
    band_coefficient(m, M)  # range validation
    hyp = check_band(f, e, ScalarProfile.constant(f.grid, m),
                     ScalarProfile.constant(f.grid, M), "inner", tau_hyp, tau_on)
    coeff = (math.sqrt(M) - math.sqrt(m)) ** 2 / (M + m)
    mult_factor = 2.0 * math.sqrt(m * M) / (M + m)
    lhs = ints.defect
    rhs = coeff * ints.norm_int
    err = (1.0 + coeff) * ints.norm_int_err + ints.F_err
    printed_rhs = coeff * ints.F_norm
    return _finish(
        bound_id, lhs, rhs, {"coefficient": coeff, "norm_integral": ints.norm_int},
        hyp, err, ints,
        {
            "mult_factor": mult_factor,
            "mult_lhs": mult_factor * ints.norm_int,
            "mult_rhs": ints.F_norm,
            "mult_margin": ints.F_norm - mult_factor * ints.norm_int,
            "printed_rhs": printed_rhs,
            "printed_margin": printed_rhs - lhs,
        },
    )


def _family_check(f: GridFunction, family: OrthonormalFamily, per_index_residuals,
                  condition_id: str, tau_hyp: float) -> HypothesisReport:
    subs = [_report(f"{condition_id}[{i}]", per_index_residuals[i], tau_hyp)
            for i in range(family.n)]
    combined = np.max(np.stack([s.slack_profile for s in subs]), axis=0)
    return _report(condition_id, combined, tau_hyp, sub_reports=subs)


def _family_tuple(params_value, n: int, bound_id: str, name: str) -> tuple:
    value = tuple(params_value)
    if len(value) != n:
        raise InputError(f"{bound_id} needs exactly {n} entries for {name!r}, got {len(value)}")
    return value


def eval_family_bound(f: GridFunction, family: OrthonormalFamily, params: BoundParams,
                      bound_id: str, rule: str = DEFAULT_RULE,
                      tau_hyp: float = DEFAULT_HYP_TOL,
                      tau_on: float = DEFAULT_ORTHO_TOL) -> BoundResult:
    """Evaluate an orthonormal-family bound: int||f|| <= ||int f||/sqrt(n) + extra."""
    if bound_id not in FAMILY_BOUNDS:
        raise InputError(f"{bound_id!r} is not a family bound id")
    if family.field != f.field or family.d != f.d:
        raise InputError("family field/dimension mismatch with the grid function")
    n = family.n
    ints = _integrals(f, rule)
    norms = f.norms()
    proj = (f.values @ np.conjugate(family.matrix().T)).real  # (N+1, n)
    lhs = ints.norm_int
    family_term = ints.F_norm / math.sqrt(n)
    rhs_terms: dict[str, float] = {"family_term": family_term}
    diags: dict[str, float] = {}

    if bound_id == THM_3_1:
        profiles = _family_tuple(params.require(bound_id, "dominance_profiles")[0],
                                 n, bound_id, "dominance_profiles")
        residuals = [norms - proj[:, i] - _profile_on(f, profiles[i], f"M_{i}")
                     for i in range(n)]
        hyp = _family_check(f, family, residuals, "dominance_family", tau_hyp)
        parts = [scalar_integral(p, rule) for p in profiles]
        extra = sum(p.value for p in parts) / n
        extra_err = sum(p.err_est for p in parts) / n
        for i, part in enumerate(parts):
            rhs_terms[f"dominance_integral_{i}"] = part.value
    elif bound_id == COR_3_2:
        rhos = _family_tuple(params.require(bound_id, "rhos")[0], n, bound_id, "rhos")
        coeffs = np.array([ball_coefficient(r) for r in rhos])
        dists = [np.linalg.norm(f.values - family.members[i].coords[None, :], axis=1)
                 for i in range(n)]
        residuals = [dists[i] - rhos[i] for i in range(n)]
        hyp = _family_check(f, family, residuals, "ball_family", tau_hyp)
        direction = (coeffs[:, None] * family.matrix()).sum(axis=0) / n
        extra = float(np.dot(ints.F.coords, np.conjugate(direction)).real)
        extra_err = float(np.linalg.norm(direction)) * ints.F_err
        weak = family_term * (1.0 + math.sqrt(float(np.mean(coeffs ** 2))))
        printed_weak = family_term * (1.0 + math.sqrt(float(np.mean(coeffs))))
        rhs_terms["projection_extra"] = extra
        rhs_terms["weak_rhs"] = weak
        diags["weak_margin"] = weak - lhs
        diags["printed_weak_rhs"] = printed_weak
        for i, c in enumerate(coeffs):
            rhs_terms[f"coefficient_{i}"] = float(c)
    elif bound_id == COR_3_3:
        ms = _family_tuple(params.require(bound_id, "ms")[0], n, bound_id, "ms")
        Ms = _family_tuple(params.require(bound_id, "Ms")[0], n, bound_id, "Ms")
        coeffs = np.array([band_coefficient(ms[i], Ms[i]) for i in range(n)])
        q = norms ** 2
        residuals = [q + ms[i] * Ms[i] - (Ms[i] + ms[i]) * proj[:, i] for i in range(n)]
        hyp = _family_check(f, family, residuals, "band_inner_family", tau_hyp)
        direction = (coeffs[:, None] * family.matrix()).sum(axis=0) / n
        extra = float(np.dot(ints.F.coords, np.conjugate(direction)).real)
        extra_err = float(np.linalg.norm(direction)) * ints.F_err
        weak = family_term * (1.0 + math.sqrt(float(np.mean(coeffs ** 2))))
        rhs_terms["projection_extra"] = extra
        rhs_terms["weak_rhs"] = weak
        diags["weak_margin"] = weak - lhs
        for i, c in enumerate(coeffs):
            rhs_terms[f"coefficient_{i}"] = float(c)
    elif bound_id == COR_3_4:
        profiles = _family_tuple(params.require(bound_id, "r_profiles")[0],
                                 n, bound_id, "r_profiles")
        dists = [np.linalg.norm(f.values - family.members[i].coords[None, :], axis=1)
                 for i in range(n)]
        residuals = [dists[i] - _profile_on(f, profiles[i], f"r_{i}") for i in range(n)]
        hyp = _family_check(f, family, residuals, "ball_family", tau_hyp)
        parts = [sample_integral(f.grid, p.values ** 2, rule) for p in profiles]
        extra = sum(p.value for p in parts) / (2.0 * n)
        extra_err = sum(p.err_est for p in parts) / (2.0 * n)
        for i, part in enumerate(parts):
            rhs_terms[f"r_squared_integral_{i}"] = part.value
    else:  # COR_3_5
        m_profiles = _family_tuple(params.require(bound_id, "m_profiles")[0],
                                   n, bound_id, "m_profiles")
        M_profiles = _family_tuple(params.require(bound_id, "M_profiles")[0],
                                   n, bound_id, "M_profiles")
        residuals = []
        for i in range(n):
            m_vals = _profile_on(f, m_profiles[i], f"m_{i}")
            M_vals = _profile_on(f, M_profiles[i], f"M_{i}")
            if np.any(M_vals < m_vals):
                raise InputError(f"band {i} requires M(t) >= m(t) at every node")
            center = 0.5 * (M_vals + m_vals)
            dist = np.linalg.norm(
                f.values - center[:, None] * family.members[i].coords[None, :], axis=1)
            residuals.append(dist - 0.5 * (M_vals - m_vals))
        hyp = _family_check(f, family, residuals, "band_norm_family", tau_hyp)
        parts = [
            sample_integral(f.grid, band_gap_integrand(m_profiles[i].values,
                                                       M_profiles[i].values), rule)
            for i in range(n)
        ]
        extra = sum(p.value for p in parts) / (4.0 * n)
        extra_err = sum(p.err_est for p in parts) / (4.0 * n)
        for i, part in enumerate(parts):
            rhs_terms[f"band_gap_integral_{i}"] = part.value

    rhs = family_term + extra
    rhs_terms["extra"] = extra
    err = ints.F_err / math.sqrt(n) + extra_err + ints.norm_int_err
    return _finish(bound_id, lhs, rhs, rhs_terms, hyp, err, ints, diags)


def eval_complex_bound(f: GridFunction, alpha: float, beta: float, params: BoundParams,
                       prop_id: str, rule: str = DEFAULT_RULE,
                       tau_hyp: float = DEFAULT_HYP_TOL) -> BoundResult:
    """Evaluate a complex-plane specialization with e = alpha + i beta, d = 1.

    The right-hand side is reported in split form
    ``alpha * int Re f + beta * int Im f`` (equal to Re<int f, e> up to
    roundoff; both appear in the result for cross-checking).
    """
    if prop_id not in COMPLEX_BOUNDS:
        raise InputError(f"{prop_id!r} is not a complex-plane bound id")
    _validate_direction(alpha, beta)
    z = _complex_samples(f)
    e = HVector(COMPLEX, [complex(alpha, beta)])
    ints = _integrals(f, rule)
    re_int = sample_integral(f.grid, z.real, rule)
    im_int = sample_integral(f.grid, z.imag, rule)
    split = alpha * re_int.value + beta * im_int.value
    split_err = alpha * re_int.err_est + beta * im_int.err_est
    proj = float(inner(ints.F, e).real)
    lhs = ints.defect
    diags = {"projection": proj, "split_gap": split - proj}

    if prop_id == PROP_4_1:
        rho, = params.require(prop_id, "rho")
        c = ball_coefficient(rho)
        hyp = check_ball(f, e, ScalarProfile.constant(f.grid, rho), tau_hyp)
        rhs = c * split
        err = c * split_err + ints.norm_int_err + ints.F_err
        return _finish(prop_id, lhs, rhs,
                       {"coefficient": c, "split_projection": split}, hyp, err, ints, diags)

    if prop_id == PROP_4_2:
        m, M = params.require(prop_id, "m", "M")
        c = band_coefficient(m, M)
        hyp = check_band(f, e, ScalarProfile.constant(f.grid, m),
                         ScalarProfile.constant(f.grid, M), "inner", tau_hyp)
        rhs = c * split
        err = c * split_err + ints.norm_int_err + ints.F_err
        return _finish(prop_id, lhs, rhs,
                       {"coefficient": c, "split_projection": split}, hyp, err, ints, diags)

    # PROP_4_3: profile box hypothesis, quarter band-gap bound
    k, K = params.require(prop_id, "m_profile", "M_profile")
    hyp = check_box_complex(f, alpha, beta, k, K, tau_hyp)
    gap = sample_integral(f.grid, band_gap_integrand(k.values, K.values), rule)
    rhs = 0.25 * gap.value
    err = 0.25 * gap.err_est + ints.norm_int_err + ints.F_err
    return _finish(prop_id, lhs, rhs,
                   {"band_gap_integral": gap.value, "split_projection": split},
                   hyp, err, ints, diags)
