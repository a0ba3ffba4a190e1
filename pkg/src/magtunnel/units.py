"""Laboratory parameters and conversions to the dimensionless (p, r) core.

Inputs are in eV, angstrom and tesla; the cyclotron frequency is taken in SI
form, omega_c = e H / m.

Constants are CODATA 2018 (e and hbar exact in the 2019 SI, hbar truncated to
its published 10 digits)::

    m_e  = 9.1093837015e-31 kg
    e    = 1.602176634e-19  C
    hbar = 1.054571817e-34  J s

With these, sqrt(2 m_e * 1 eV) / (e * 1 angstrom) = 3.3727e4 T.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

ELECTRON_MASS = 9.1093837015e-31  # kg
ELEMENTARY_CHARGE = 1.602176634e-19  # C
HBAR = 1.054571817e-34  # J s
EV = ELEMENTARY_CHARGE  # J per eV
ANGSTROM = 1e-10  # m


@dataclass(frozen=True)
class PhysicalParams:
    """Barrier and particle parameters in laboratory units.

    Defaults are the quantum-wire setup: a 1 meV bound state, a = 140 angstrom,
    u0 = |E|, an electron, and a 3000 angstrom barrier.
    """

    energy_depth: float = 1e-3  # |E|, eV
    well_scale: float = 140.0  # a, angstrom
    well_strength: float = 1e-3  # u0, eV
    barrier_length: float = 3000.0  # R, angstrom
    particle_mass: float = 1.0  # in electron masses

    def __post_init__(self):
        for name in ("energy_depth", "well_scale", "well_strength", "barrier_length", "particle_mass"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")

    @property
    def mass_kg(self) -> float:
        return self.particle_mass * ELECTRON_MASS

    @property
    def energy_joule(self) -> float:
        return self.energy_depth * EV

    @property
    def ratio(self) -> float:
        """Well-strength ratio r = u0 / |E|."""
        return self.well_strength / self.energy_depth

    @property
    def velocity(self) -> float:
        """v = sqrt(2|E|/m) in m/s."""
        return math.sqrt(2.0 * self.energy_joule / self.mass_kg)

    @property
    def wkb_rate(self) -> float:
        """WKB decay rate kappa = 2 sqrt(2 m |E|) / hbar, per angstrom."""
        return 2.0 * math.sqrt(2.0 * self.mass_kg * self.energy_joule) / HBAR * ANGSTROM

    @property
    def time_unit(self) -> float:
        """Seconds per unit of scaled imaginary time, a / v."""
        return self.well_scale * ANGSTROM / self.velocity

    def replace(self, **changes) -> "PhysicalParams":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class DimensionlessProblem:
    """Magnetic parameter p = m omega_c^2 a^2 / (2|E|) and ratio r = u0/|E|."""

    p: float
    r: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p >= 0):
            raise DomainError(f"p must be finite and >= 0, got {self.p!r}")
        if not (math.isfinite(self.r) and self.r > 0):
            raise DomainError(f"r must be finite and > 0, got {self.r!r}")

    @classmethod
    def from_field(cls, field: float, params: PhysicalParams) -> "DimensionlessProblem":
        return cls(p_from_field(field, params), params.ratio)


def _field_scale(params: PhysicalParams) -> float:
    # H = field_scale * sqrt(p)
    return math.sqrt(2.0 * params.mass_kg * params.energy_joule) / (ELEMENTARY_CHARGE * params.well_scale * ANGSTROM)


def field_prefactor() -> float:
    """Tesla per sqrt(p) * sqrt(|E| in eV) / (a in angstrom) for an electron."""
    return math.sqrt(2.0 * ELECTRON_MASS * EV) / (ELEMENTARY_CHARGE * ANGSTROM)


def field_from_p(p: float, params: PhysicalParams) -> float:
    """Magnetic field in tesla for magnetic parameter ``p``."""
    if not p >= 0:
        raise DomainError(f"p must be >= 0, got {p!r}")
    return _field_scale(params) * math.sqrt(p)


def p_from_field(field: float, params: PhysicalParams) -> float:
    """Magnetic parameter for a field in tesla; inverse of :func:`field_from_p`."""
    if not field >= 0:
        raise DomainError(f"field must be >= 0, got {field!r}")
    return (field / _field_scale(params)) ** 2


def wkb_action(params: PhysicalParams) -> float:
    """Zero-field exponent A_WKB = 2 sqrt(2 m |E|) R / hbar."""
    return params.wkb_rate * params.barrier_length


def dissipation_max_length(params: PhysicalParams, level_width_ratio: float) -> float:
    """Longest barrier (angstrom) with A_WKB < |E| / dE.

    Beyond this length the level width dE set by dissipation disturbs the
    coherent under-barrier motion.
    """
    if not 0 < level_width_ratio < 1:
        raise DomainError(f"level width ratio must lie in (0, 1), got {level_width_ratio!r}")
    return 1.0 / (params.wkb_rate * level_width_ratio)
