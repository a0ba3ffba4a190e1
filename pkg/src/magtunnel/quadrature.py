"""Cycle integrals of the transverse instanton motion.

With z = z0 sin^2(theta) both endpoint singularities of

    f1    = 2 int_0^z0 sqrt(rho) dz
    f2    = 2 int_0^z0 (1 + sqrt(p) z) / sqrt(rho) dz
    f_tau = 2 int_0^z0 dz / sqrt(rho)

disappear (rho has simple zeros at both ends), leaving analytic integrands on
[0, pi/2] that Gauss-Legendre resolves spectrally. The order is doubled until
two successive estimates agree within the requested tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AccuracyNotReached, DivergentIntegral
from .potential import QUARTIC, EffectivePotential, PotentialFamily, effective_potential, turning_point
from .units import PhysicalParams

DEFAULT_TOL = 1e-10
MIN_ORDER = 16
MAX_ORDER = 4096
NAMES = ("f1", "f2", "f_tau")
_ROUNDING = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class CycleIntegrals:
    f1: float
    f2: float
    f_tau: float
    z0: float
    estimated_error: dict


@dataclass(frozen=True)
class CycleObservables:
    delta_x: float  # angstrom
    delta_a: float  # dimensionless action gain per cycle
    delta_tau: float  # scaled imaginary-time period
    delta_tau_seconds: float


def _edges(z0: float, layer: float | None) -> tuple:
    """Panel edges in theta, halving toward 0 until the layer is resolved.

    For weak fields rho ~ 2 sqrt(p) z only for z below ``layer`` and ~ z^2
    above it; one Gauss panel cannot resolve that crossover when it sits at
    theta ~ p^(1/4).
    """
    top = math.pi / 2
    if not layer or layer >= z0:
        return (0.0, top)
    theta_layer = math.asin(math.sqrt(layer / z0))
    k = max(0, math.ceil(math.log2(top / theta_layer)))
    return (0.0,) + tuple(top * 2.0**-j for j in range(k, -1, -1))


@lru_cache(maxsize=None)
def _nodes(n: int, edges: tuple = (0.0, math.pi / 2)):
    x, w = np.polynomial.legendre.leggauss(n)
    theta, weight = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        theta.append(lo + half * (x + 1.0))
        weight.append(half * w)
    theta = np.concatenate(theta)
    return np.sin(theta), np.cos(theta), np.concatenate(weight)


def _sums(rho, rho_end, z0: float, sqrt_p: float, n: int, which, edges) -> dict:
    s, c, w = _nodes(n, edges)
    z = z0 * s * s
    jac = 2.0 * z0 * s * c  # dz/dtheta
    far = s > c
    values = np.empty_like(z)
    values[~far] = rho(z[~far])
    values[far] = rho_end(z0 * c[far] ** 2)
    root = np.sqrt(values)
    out = {}
    if "f1" in which:
        out["f1"] = 2.0 * np.dot(w, root * jac)
    if "f2" in which or "f_tau" in which:
        g = jac / root
        if "f2" in which:
            out["f2"] = 2.0 * np.dot(w, (1.0 + sqrt_p * z) * g)
        if "f_tau" in which:
            out["f_tau"] = 2.0 * np.dot(w, g)
    return out


def cycle_quadrature(rho, z0: float, sqrt_p: float = 0.0, tol: float = DEFAULT_TOL, which=NAMES, rho_end=None,
                     layer: float | None = None):
    """Evaluate the requested cycle integrals of an arbitrary radicand.

    ``rho`` is a vectorized callable with simple zeros at 0 and ``z0`` and
    positive in between. ``rho_end(u)``, if given, returns rho(z0 - u) for
    the far half of the interval; the Gauss nodes there crowd to within
    ~1e-14 of z0 where evaluating rho(z) directly cancels catastrophically.
    ``layer`` is the width of a boundary layer next to z = 0, if any; panels
    are graded toward 0 to resolve it. Orders count nodes per panel.

    Returns ``(values, errors)`` dictionaries keyed by ``which``; each error
    is the difference between the last two orders.
    """
    which = tuple(which)
    if rho_end is None:
        # pin the computed root onto z0 so its rounding residue does not
        # leave an unresolved sqrt(z0 - z - delta) behind
        residue = float(rho(np.array(z0)))
        base = rho
        rho = lambda z: base(z) - residue * (z / z0)
        rho_end = lambda u: rho(z0 - u)
    edges = _edges(z0, layer)
    prev = _sums(rho, rho_end, z0, sqrt_p, MIN_ORDER, which, edges)
    n = MIN_ORDER
    while True:
        n *= 2
        cur = _sums(rho, rho_end, z0, sqrt_p, n, which, edges)
        err = {k: abs(cur[k] - prev[k]) for k in which}
        # an absolute tolerance below the rounding of the value itself cannot be met
        if all(err[k] <= max(tol, _ROUNDING * abs(cur[k])) for k in which):
            return cur, err
        if n >= MAX_ORDER:
            worst = max(which, key=lambda k: err[k])
            raise AccuracyNotReached(
                f"{worst} did not converge to {tol:g} with {n} nodes (last change {err[worst]:.3g})",
                estimate=cur,
                error=err,
            )
        prev = cur


def _layer_width(eff: EffectivePotential, z0: float) -> float:
    """Where the linear start 2 sqrt(p) z of rho hands over to curvature."""
    half = 0.5 * z0
    curvature = abs(float(eff.radicand(half)) - 2.0 * eff.sqrt_p * half) / (half * half)
    return 2.0 * eff.sqrt_p / curvature if curvature > 0 else z0


@lru_cache(maxsize=4096)
def _integrate(eff: EffectivePotential, which: tuple, tol: float):
    if eff.p == 0 and ("f2" in which or "f_tau" in which):
        raise DivergentIntegral("translation and period integrals diverge at p = 0")
    z0 = turning_point(eff)
    values, errors = cycle_quadrature(
        eff.radicand, z0, eff.sqrt_p, tol, which, rho_end=lambda u: eff.radicand_from_end(z0, u),
        layer=_layer_width(eff, z0),
    )
    return z0, values, errors


def cycle_integrals(eff: EffectivePotential, tol: float = DEFAULT_TOL) -> CycleIntegrals:
    """f1, f2 and f_tau for one cycle of the instanton in ``eff``.

    Raises DivergentIntegral at p = 0, NoWell without a turning point and
    AccuracyNotReached if the maximum order is exhausted.
    """
    z0, v, e = _integrate(eff, NAMES, tol)
    return CycleIntegrals(float(v["f1"]), float(v["f2"]), float(v["f_tau"]), z0, dict(e))


def f1(eff: EffectivePotential, tol: float = DEFAULT_TOL) -> float:
    """Action-gain integral; finite also at p = 0."""
    return float(_integrate(eff, ("f1",), tol)[1]["f1"])


def f2(eff: EffectivePotential, tol: float = DEFAULT_TOL) -> float:
    return float(_integrate(eff, ("f2",), tol)[1]["f2"])


def f_tau(eff: EffectivePotential, tol: float = DEFAULT_TOL) -> float:
    return float(_integrate(eff, ("f_tau",), tol)[1]["f_tau"])


def cycle_observables(integrals: CycleIntegrals, params: PhysicalParams) -> CycleObservables:
    """Attach laboratory units: translation a*f2, gain kappa*a*f1, period."""
    a = params.well_scale
    return CycleObservables(
        delta_x=a * integrals.f2,
        delta_a=params.wkb_rate * a * integrals.f1,
        delta_tau=integrals.f_tau,
        delta_tau_seconds=integrals.f_tau * params.time_unit,
    )


def richardson_derivative(g, x: float, h: float):
    """Central differences at h and h/10 combined to cancel the h^2 term.

    Returns ``(derivative, error_estimate)``.
    """
    d1 = (g(x + h) - g(x - h)) / (2 * h)
    hs = h / 10
    d2 = (g(x + hs) - g(x - hs)) / (2 * hs)
    value = (100.0 * d2 - d1) / 99.0
    return value, abs(value - d2)


def f2_slope(p: float, h: float = 1e-3, r: float = 1.0, family: PotentialFamily = QUARTIC, tol: float = 1e-12):
    """df2/dp at ``p``; returns ``(slope, error_estimate)``."""
    slope, err = richardson_derivative(lambda q: f2(effective_potential(q, r, family), tol), p, h)
    return slope, err + 20 * tol / h
