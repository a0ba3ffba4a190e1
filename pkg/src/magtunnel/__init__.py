"""Tunneling through a long barrier in a magnetic field.

Trajectories in imaginary time, their cycle integrals, the field at which
the Euclidean action vanishes, and the tunneling probability below it.
"""
from .errors import (
    AccuracyNotReached,
    DivergentIntegral,
    DomainError,
    IntegratorFailure,
    MagTunnelError,
    NoPeriodicOrbit,
    NoResonance,
    NoWell,
)
from .potential import (
    COSINE,
    COSINE_SQUARED,
    FAMILIES,
    QUADRATIC,
    QUARTIC,
    EffectivePotential,
    PotentialFamily,
    effective_potential,
    even_polynomial,
    radicand,
    turning_point,
    well_exists,
)
from .quadrature import CycleIntegrals, CycleObservables, cycle_integrals, cycle_observables, f1, f2, f2_slope, f_tau
from .resonance import (
    ResonanceReport,
    ScanRow,
    action_ratio,
    amplitude_profile,
    discrete_fields,
    find_resonance,
    probability_curve,
)
from .trajectory import InstantonOrbit, extend_orbit, integrate_cycle, orbit_action
from .units import (
    DimensionlessProblem,
    PhysicalParams,
    dissipation_max_length,
    field_from_p,
    field_prefactor,
    p_from_field,
    wkb_action,
)

__version__ = "0.1.0"
