"""Euclidean resonance, discrete quantized fields and the probability curve.

For a barrier of length R the action is A = A_WKB (1 - f1/f2). It vanishes
where f1(p) = f2(p), the resonance. A trajectory ends on the physical exit
point only if R = N a f2(p), which singles out discrete fields h_N.

Near the resonance exp(-A) is no longer small and a single instanton stops
being a controlled approximation. Points with A below ``threshold`` are
flagged ``near-resonance``. Fields above the resonance are
``beyond-method``, and no action or probability is given for them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, MagTunnelError, NoResonance, NoWell
from .potential import QUARTIC, PotentialFamily, effective_potential, well_exists
from .quadrature import f1, f2, richardson_derivative
from .units import PhysicalParams, field_from_p, p_from_field, wkb_action

DEFAULT_TOL = 1e-12
ROOT_TOL = 1e-13
SLOPE_STEP = 1e-3  # relative differencing step for the slopes
VALIDITY_THRESHOLD = 3.0
P_RANGE = (1e-3, 1e3)
_BEYOND_RTOL = 1e-9

# values quoted with the quartic well, for side-by-side reporting
REFERENCE_F2_SLOPE = 0.33
REFERENCE_FIELD_COEFFICIENT = 0.43

VALID = "valid"
NEAR_RESONANCE = "near-resonance"
NO_SOLUTION = "no-solution"
BEYOND_METHOD = "beyond-method"


@dataclass(frozen=True)
class ResonanceReport:
    p_R: float
    H_R: float
    f_at_resonance: float
    action_slope_p: float
    action_slope_H: float
    residual: float
    f2_slope: float
    field_coefficient: float  # c in h_N/H_R ~ 1 - c (f(p_R) - R/(N a))
    r: float
    family: str

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["reference_f2_slope"] = REFERENCE_F2_SLOPE
        d["reference_field_coefficient"] = REFERENCE_FIELD_COEFFICIENT
        return d


@dataclass(frozen=True)
class ScanRow:
    N: int
    p_N: float | None
    h_N: float | None
    A_N: float | None
    w_N: float | None
    validity: str


@dataclass(frozen=True)
class CurvePoint:
    H: float
    p: float
    A: float | None
    w: float | None
    validity: str


def action_ratio(p: float, r: float = 1.0, family: PotentialFamily = QUARTIC, tol: float = DEFAULT_TOL) -> float:
    """A / A_WKB = 1 - f1/f2; exactly 1 at zero field where f2 diverges."""
    if not p >= 0:
        raise DomainError(f"p must be >= 0, got {p!r}")
    if p == 0:
        return 1.0
    eff = effective_potential(p, r, family)
    return 1.0 - f1(eff, tol) / f2(eff, tol)


def _gap(p, r, family, tol):
    eff = effective_potential(p, r, family)
    return f1(eff, tol) - f2(eff, tol)


@lru_cache(maxsize=256)
def _locate(r: float, family: PotentialFamily, tol: float, p_range: tuple, root_tol: float):
    grid = np.geomspace(p_range[0], p_range[1], 61)
    prev = None
    for p in grid:
        if not well_exists(effective_potential(float(p), r, family)):
            prev = None
            continue
        try:
            g = _gap(float(p), r, family, tol)
        except MagTunnelError:
            prev = None
            continue
        if prev is not None and np.sign(prev[1]) != np.sign(g):
            return brentq(lambda q: _gap(q, r, family, tol), prev[0], float(p), xtol=root_tol, rtol=1e-15)
        prev = (float(p), g)
    raise NoResonance(
        f"f1 - f2 keeps one sign for p in [{p_range[0]:g}, {p_range[1]:g}] ({family.name}, r={r:g})",
        p_range=p_range,
    )


def find_resonance(r: float = 1.0, params: PhysicalParams | None = None, family: PotentialFamily = QUARTIC,
                   tol: float = DEFAULT_TOL, p_range=P_RANGE, root_tol: float = ROOT_TOL,
                   step: float = SLOPE_STEP) -> ResonanceReport:
    """Locate f1(p) = f2(p) and linearize the action around it.

    Both slopes are measured by differencing: s_p in p, s_H directly in the
    field, so that s_H = 2 p_R s_p is a genuine check. ``step`` is the
    differencing step relative to p_R (and to H_R).
    """
    if not r > 0:
        raise DomainError(f"r must be > 0, got {r!r}")
    params = params or PhysicalParams()
    p_r = _locate(float(r), family, tol, tuple(p_range), root_tol)
    eff = effective_potential(p_r, r, family)
    v1, v2 = f1(eff, tol), f2(eff, tol)
    h_r = field_from_p(p_r, params)

    ratio = lambda p: action_ratio(p, r, family, tol)
    d_ratio, _ = richardson_derivative(ratio, p_r, step * p_r)
    d_ratio_h, _ = richardson_derivative(lambda h: ratio(p_from_field(h, params)), h_r, step * h_r)
    slope, _ = richardson_derivative(lambda p: f2(effective_potential(p, r, family), tol), p_r, step * p_r)
    return ResonanceReport(
        p_R=p_r,
        H_R=h_r,
        f_at_resonance=0.5 * (v1 + v2),
        action_slope_p=-d_ratio,
        action_slope_H=-h_r * d_ratio_h,
        residual=abs(v1 - v2),
        f2_slope=slope,
        field_coefficient=1.0 / (2.0 * p_r * slope),
        r=float(r),
        family=family.name,
    )


def _curve_point(field: float, params, r, family, tol, report, threshold) -> CurvePoint:
    p = p_from_field(field, params)
    if field > report.H_R * (1.0 + _BEYOND_RTOL):
        return CurvePoint(field, p, None, None, BEYOND_METHOD)
    action = wkb_action(params) * action_ratio(p, r, family, tol)
    validity = NEAR_RESONANCE if action < threshold else VALID
    return CurvePoint(field, p, action, math.exp(-action), validity)


def probability_curve(params: PhysicalParams, r: float | None = None, fields=(), family: PotentialFamily = QUARTIC,
                      tol: float = DEFAULT_TOL, report: ResonanceReport | None = None,
                      threshold: float = VALIDITY_THRESHOLD) -> list[CurvePoint]:
    """w = exp(-A) on a grid of fields below the resonance.

    Fields above H_R are returned with validity ``beyond-method`` and no
    numbers.
    """
    r = params.ratio if r is None else r
    report = report or find_resonance(r, params, family, tol)
    out = []
    for field in fields:
        if not field >= 0:
            raise DomainError(f"fields must be >= 0, got {field!r}")
        out.append(_curve_point(float(field), params, r, family, tol, report, threshold))
    return out


def _f2_minimum(r, family, tol, p_hi):
    """(p, f2) at the sampled minimum of f2 on (0, p_hi], refined."""
    from scipy.optimize import minimize_scalar

    g = lambda p: f2(effective_potential(p, r, family), tol)
    grid = np.geomspace(1e-6, p_hi, 80)
    vals = [g(float(p)) for p in grid]
    i = int(np.argmin(vals))
    if 0 < i < len(grid) - 1:
        res = minimize_scalar(g, bracket=(grid[i - 1], grid[i], grid[i + 1]), tol=1e-10)
        return float(res.x), float(res.fun)
    return float(grid[i]), float(vals[i])


def discrete_fields(params: PhysicalParams, r: float | None = None, n_range=(1, 10), family: PotentialFamily = QUARTIC,
                    tol: float = DEFAULT_TOL, report: ResonanceReport | None = None, branch: str = "upper",
                    threshold: float = VALIDITY_THRESHOLD, root_tol: float = ROOT_TOL) -> list[ScanRow]:
    """Solve R/a = N f2(p_N) for each N and evaluate the action there.

    f2 diverges at p -> 0 and grows again at large p, so a target value
    generally has two roots. ``branch="upper"`` takes the root on the rising
    side that passes through the resonance; ``"lower"`` takes the weak-field
    root.
    """
    if branch not in ("upper", "lower"):
        raise DomainError(f"branch must be 'upper' or 'lower', got {branch!r}")
    n_min, n_max = int(n_range[0]), int(n_range[1])
    if n_min < 1 or n_max < n_min:
        raise DomainError(f"need 1 <= N_min <= N_max, got {n_range!r}")
    r = params.ratio if r is None else r
    report = report or find_resonance(r, params, family, tol)
    p_hi = P_RANGE[1]
    p_min, f2_min = _f2_minimum(r, family, tol, report.p_R * 2)
    lo, hi = (p_min, p_hi) if branch == "upper" else (1e-16, p_min)
    g = lambda p: f2(effective_potential(p, r, family), tol)
    grid = np.geomspace(lo, hi, 48)
    values = np.array([g(float(p)) for p in grid])

    rows = []
    for n in range(n_min, n_max + 1):
        target = params.barrier_length / (n * params.well_scale)
        diff = values - target
        cross = np.flatnonzero(np.sign(diff[:-1]) != np.sign(diff[1:]))
        if target < f2_min or cross.size == 0:
            rows.append(ScanRow(n, None, None, None, None, NO_SOLUTION))
            continue
        i = cross[0] if branch == "upper" else cross[-1]
        p_n = brentq(lambda p: g(p) - target, float(grid[i]), float(grid[i + 1]), xtol=root_tol, rtol=1e-15)
        h_n = field_from_p(p_n, params)
        point = _curve_point(h_n, params, r, family, tol, report, threshold)
        rows.append(ScanRow(n, p_n, h_n, point.A, point.w, point.validity))
    return rows


def amplitude_profile(params: PhysicalParams, r: float | None = None, field: float = 0.0, n_cycles: int = 1,
                      family: PotentialFamily = QUARTIC, tol: float = DEFAULT_TOL) -> np.ndarray:
    """|psi(n dx, 0)|^2 for n = 0..N, normalized to 1 at n = 0.

    Decays as exp(-n (kappa dx - dA)); flat where the per-cycle action vanishes.
    """
    if int(n_cycles) != n_cycles or n_cycles < 1:
        raise DomainError(f"number of cycles must be a positive integer, got {n_cycles!r}")
    r = params.ratio if r is None else r
    p = p_from_field(field, params)
    eff = effective_potential(p, r, family)
    if not well_exists(eff):
        raise NoWell(well_exists(eff).reason)
    per_cycle = params.wkb_rate * params.well_scale * (f2(eff, tol) - f1(eff, tol))
    return np.exp(-per_cycle * np.arange(int(n_cycles) + 1))
