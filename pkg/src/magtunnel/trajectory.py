"""Periodic instanton orbit in scaled imaginary time.

Time is s = tau v / a and lengths are in units of a. The transverse motion
obeys z'' = rho'(z)/2 with (z')^2 = rho(z) on the energy shell, while the
tunneling coordinate follows (x/a)' = -(1 + sqrt(p) z). Starting at
z = z' = 0 is legitimate for p > 0 since rho'(0) = 2 sqrt(p) pushes the
orbit off the turning point.

Only the half cycle up to z0 is integrated; the second half follows by
reflection about the turning time, which selects the even solution exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IntegratorFailure, NoPeriodicOrbit
from .ode import EventNotFound, StepFailure, integrate_to_crossing
from .potential import EffectivePotential, turning_point
from .units import PhysicalParams

DEFAULT_TOL = 1e-12
SAMPLES_PER_CYCLE = 200


@dataclass(frozen=True)
class InstantonOrbit:
    s: np.ndarray
    z: np.ndarray
    dzds: np.ndarray
    x_over_a: np.ndarray
    gain: np.ndarray  # running integral of (dz/ds)^2
    period: float
    translation: float
    action_gain: float
    n_cycles: int
    energy_drift: float
    p: float
    r: float

    def __len__(self):
        return len(self.s)

    def rows(self):
        """Sample tuples (s, z, dz/ds, x/a)."""
        return zip(self.s.tolist(), self.z.tolist(), self.dzds.tolist(), self.x_over_a.tolist())


def _rhs(eff: EffectivePotential):
    sqrt_p = eff.sqrt_p

    def f(y):
        z, v = y[0], y[1]
        return np.array([v, 0.5 * float(eff.radicand_derivative(z)), -(1.0 + sqrt_p * z), v * v])

    return f


def integrate_cycle(eff: EffectivePotential, tol: float = DEFAULT_TOL, samples: int = SAMPLES_PER_CYCLE,
                    s_max: float = 1e3) -> InstantonOrbit:
    """One full cycle of the instanton, with x/a starting at 0."""
    if eff.p <= 0:
        raise DomainError("the orbit needs p > 0; at p = 0 the start is an equilibrium")
    turning_point(eff)  # raises NoWell before any integration
    try:
        sol = integrate_to_crossing(_rhs(eff), np.zeros(4), 1, rtol=tol, atol=tol, t_max=s_max)
    except EventNotFound as exc:
        raise NoPeriodicOrbit(str(exc)) from exc
    except StepFailure as exc:
        raise IntegratorFailure(str(exc)) from exc

    half = sol.t_event
    m = max(samples // 2, 2)
    s_half = np.linspace(0.0, half, m + 1)
    y_half = sol(s_half)
    y_half[0] = sol.y[0]
    y_half[-1] = sol.y_event
    end = y_half[-1]

    mirror = y_half[-2::-1]
    s = np.concatenate([s_half, 2.0 * half - s_half[-2::-1]])
    z = np.concatenate([y_half[:, 0], mirror[:, 0]])
    dzds = np.concatenate([y_half[:, 1], -mirror[:, 1]])
    x = np.concatenate([y_half[:, 2], 2.0 * end[2] - mirror[:, 2]])
    g = np.concatenate([y_half[:, 3], 2.0 * end[3] - mirror[:, 3]])
    dzds[-1] = 0.0  # reflected start

    rho = eff.radicand(z)
    drift = float(np.max(np.abs(dzds**2 - rho)))
    if drift > 1e3 * tol * max(1.0, float(np.max(rho))):
        raise IntegratorFailure(f"energy-shell drift {drift:.3g} exceeds tolerance")
    return InstantonOrbit(
        s=s,
        z=z,
        dzds=dzds,
        x_over_a=x,
        gain=g,
        period=2.0 * half,
        translation=-2.0 * float(end[2]),
        action_gain=2.0 * float(end[3]),
        n_cycles=1,
        energy_drift=drift,
        p=eff.p,
        r=eff.r,
    )


def extend_orbit(cycle: InstantonOrbit, n_cycles: int) -> InstantonOrbit:
    """Chain ``n_cycles`` copies so that x/a runs from N*translation down to 0."""
    if cycle.n_cycles != 1:
        raise DomainError("extend_orbit expects a single-cycle orbit")
    if int(n_cycles) != n_cycles or n_cycles < 1:
        raise DomainError(f"number of cycles must be a positive integer, got {n_cycles!r}")
    n = int(n_cycles)
    x0 = cycle.x_over_a - cycle.x_over_a[0]
    parts = {"s": [], "z": [], "dzds": [], "x": [], "g": []}
    for j in range(n):
        sl = slice(None) if j == 0 else slice(1, None)
        parts["s"].append(cycle.s[sl] + j * cycle.period)
        parts["z"].append(cycle.z[sl])
        parts["dzds"].append(cycle.dzds[sl])
        parts["x"].append(x0[sl] + (n - j) * cycle.translation)
        parts["g"].append(cycle.gain[sl] + j * cycle.action_gain)
    x = np.concatenate(parts["x"])
    x[-1] = 0.0  # x(s_end) = 0 by construction
    return InstantonOrbit(
        s=np.concatenate(parts["s"]),
        z=np.concatenate(parts["z"]),
        dzds=np.concatenate(parts["dzds"]),
        x_over_a=x,
        gain=np.concatenate(parts["g"]),
        period=cycle.period,
        translation=cycle.translation,
        action_gain=cycle.action_gain,
        n_cycles=n,
        energy_drift=cycle.energy_drift,
        p=cycle.p,
        r=cycle.r,
    )


def orbit_action(orbit: InstantonOrbit, params: PhysicalParams) -> float:
    """Euclidean action A = A_WKB(N dx) minus the transverse kinetic term.

    The transverse term is kappa * a * integral of (dz/ds)^2 along the whole
    orbit.
    """
    kappa_a = params.wkb_rate * params.well_scale
    wkb = kappa_a * orbit.n_cycles * orbit.translation
    return wkb - kappa_a * float(orbit.gain[-1] - orbit.gain[0])
