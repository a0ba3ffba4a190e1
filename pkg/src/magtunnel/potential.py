"""Transverse potential families and the imaginary-time effective potential.

A family is an even potential u(y) = u0 * U(y/a). Along the imaginary
direction y = -i*eta the scaled profile becomes w(z) = U(-i z), z = eta/a:

    U = sum c_k x^(2k)    ->  w = sum (-1)^k c_k z^(2k)
    U = 1 - cos x         ->  w = 1 - cosh z
    U = (1 - cos x)^2     ->  w = (1 - cosh z)^2

The transverse motion is governed by the radicand

    rho(z) = (E - v(eta)) / |E| = -r w(z) + 2 sqrt(p) z + p z^2,

which vanishes at z = 0 and must turn negative again at some z0 > 0 for a
periodic instanton to exist.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoWell
from .units import DimensionlessProblem

SCAN_MAX = 50.0
_SCAN_GRID = np.geomspace(1e-8, SCAN_MAX, 4001)


@dataclass(frozen=True)
class PotentialFamily:
    """An even transverse potential with a closed-form continuation.

    ``terms`` holds (k, c_k) pairs of the even polynomial sum c_k (y/a)^(2k)
    and is empty for the cosine families.
    """

    kind: str
    terms: tuple = ()

    def __post_init__(self):
        if self.kind not in ("polynomial", "cosine", "cosine2"):
            raise DomainError(f"unknown family kind {self.kind!r}")
        if self.kind == "polynomial":
            if not self.terms:
                raise DomainError("polynomial family needs at least one (k, c_k) term")
            for k, _ in self.terms:
                if int(k) != k or k < 1:
                    raise DomainError(f"polynomial powers must be integers k >= 1, got {k!r}")

    @property
    def name(self) -> str:
        for label, fam in FAMILIES.items():
            if fam == self:
                return label
        return "poly(" + ",".join(f"{k}:{c:g}" for k, c in self.terms) + ")"

    def continued_coefficients(self) -> np.ndarray:
        """Coefficients d_k of w(z) = sum d_k z^(2k), index k from 0."""
        kmax = max(int(k) for k, _ in self.terms)
        d = np.zeros(kmax + 1)
        for k, c in self.terms:
            d[int(k)] += (-1) ** int(k) * c
        return d

    def profile(self, x):
        """U(x) = u(a x) / u0 on the real axis."""
        x = np.asarray(x, dtype=float)
        if self.kind == "polynomial":
            return sum(c * x ** (2 * int(k)) for k, c in self.terms)
        if self.kind == "cosine":
            return 1.0 - np.cos(x)
        return (1.0 - np.cos(x)) ** 2

    def w(self, z):
        """Continued profile w(z) = U(-i z)."""
        z = np.asarray(z, dtype=float)
        if self.kind == "polynomial":
            return np.polynomial.polynomial.polyval(z * z, self.continued_coefficients())
        if self.kind == "cosine":
            return 1.0 - np.cosh(z)
        return (1.0 - np.cosh(z)) ** 2

    def dw(self, z):
        z = np.asarray(z, dtype=float)
        if self.kind == "polynomial":
            d = self.continued_coefficients()
            # d/dz sum d_k z^(2k) = sum 2k d_k z^(2k-1)
            dd = np.array([2 * k * d[k] for k in range(1, len(d))])
            return z * np.polynomial.polynomial.polyval(z * z, dd) if len(dd) else np.zeros_like(z)
        if self.kind == "cosine":
            return -np.sinh(z)
        return -2.0 * (1.0 - np.cosh(z)) * np.sinh(z)

    def w_drop(self, z0: float, u):
        """w(z0) - w(z0 - u), free of cancellation for small u >= 0."""
        u = np.asarray(u, dtype=float)
        if self.kind == "polynomial":
            d = self.continued_coefficients()
            in_z = np.zeros(2 * len(d) - 1)
            in_z[::2] = d
            # w(z0 - u) as a polynomial in u; its constant term is w(z0)
            in_u = np.polynomial.Polynomial(in_z)(np.polynomial.Polynomial([z0, -1.0])).coef.copy()
            in_u[0] = 0.0
            return -np.polynomial.polynomial.polyval(u, in_u)
        # cosh z0 - cosh(z0 - u) = sinh z0 sinh u - 2 cosh z0 sinh^2(u/2)
        dc = math.sinh(z0) * np.sinh(u) - 2.0 * math.cosh(z0) * np.sinh(0.5 * u) ** 2
        if self.kind == "cosine":
            return dc
        c0 = 1.0 - math.cosh(z0)
        # (C(z0) - C(z0 - u)) (C(z0) + C(z0 - u)) with C = 1 - cosh
        return -dc * (2.0 * c0 + dc)


def even_polynomial(terms) -> PotentialFamily:
    """Family sum c_k (y/a)^(2k) from an iterable of (k, c_k) pairs."""
    return PotentialFamily("polynomial", tuple((int(k), float(c)) for k, c in terms))


QUARTIC = even_polynomial([(1, 1.0), (2, 1.0)])
QUADRATIC = even_polynomial([(1, 1.0)])
COSINE = PotentialFamily("cosine")
COSINE_SQUARED = PotentialFamily("cosine2")

FAMILIES = {
    "quartic": QUARTIC,
    "quadratic": QUADRATIC,
    "cosine": COSINE,
    "cosine2": COSINE_SQUARED,
}


@dataclass(frozen=True)
class EffectivePotential:
    problem: DimensionlessProblem
    family: PotentialFamily = field(default=QUARTIC)

    @property
    def p(self) -> float:
        return self.problem.p

    @property
    def r(self) -> float:
        return self.problem.r

    @property
    def sqrt_p(self) -> float:
        return math.sqrt(self.problem.p)

    def radicand(self, z):
        z = np.asarray(z, dtype=float)
        return -self.r * self.family.w(z) + z * (2.0 * self.sqrt_p + self.p * z)

    def radicand_derivative(self, z):
        z = np.asarray(z, dtype=float)
        return -self.r * self.family.dw(z) + 2.0 * self.sqrt_p + 2.0 * self.p * z

    def radicand_from_end(self, z0: float, u):
        """rho(z0 - u) - rho(z0), evaluated without cancellation for small u."""
        u = np.asarray(u, dtype=float)
        return self.r * self.family.w_drop(z0, u) - u * (2.0 * self.sqrt_p + self.p * (2.0 * z0 - u))


def effective_potential(p: float, r: float = 1.0, family: PotentialFamily = QUARTIC) -> EffectivePotential:
    return EffectivePotential(DimensionlessProblem(p, r), family)


def radicand(z, eff: EffectivePotential):
    """Dimensionless energy gap (E - v(a z)) / |E| at scaled coordinate z >= 0."""
    if np.any(np.asarray(z) < 0):
        raise DomainError("radicand is defined for z >= 0")
    return eff.radicand(z)


@dataclass(frozen=True)
class WellCheck:
    """Outcome of the well-formation test.

    ``bracket`` is the first scan interval on which the radicand turns
    negative; ``reason`` explains a negative result.
    """

    exists: bool
    bracket: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.exists


def well_exists(eff: EffectivePotential) -> WellCheck:
    """Classify whether the radicand returns to zero on (0, SCAN_MAX]."""
    with np.errstate(over="ignore", invalid="ignore"):
        values = eff.radicand(_SCAN_GRID)
    if not np.all(np.isfinite(values)):
        bad = _SCAN_GRID[~np.isfinite(values)][0]
        return WellCheck(False, None, f"family undefined or overflowing at z={bad:.6g}")
    if values[0] <= 0:
        return WellCheck(False, None, "radicand not positive next to z=0; no classically forbidden start")
    negative = np.flatnonzero(values <= 0)
    if negative.size == 0:
        return WellCheck(False, None, f"radicand positive on (0, {SCAN_MAX:g}]; effective potential has no well")
    i = negative[0]
    return WellCheck(True, (float(_SCAN_GRID[i - 1]), float(_SCAN_GRID[i])), "")


def turning_point(eff: EffectivePotential) -> float:
    """Smallest z0 > 0 with rho(z0) = 0 and rho > 0 on (0, z0)."""
    check = well_exists(eff)
    if not check:
        raise NoWell(check.reason)
    lo, hi = check.bracket
    f = lambda z: float(eff.radicand(z))
    z0 = brentq(f, lo, hi, xtol=1e-6 * hi, rtol=1e-6)
    # Newton polish inside the bracket
    for _ in range(20):
        d = float(eff.radicand_derivative(z0))
        if d == 0:
            break
        step = f(z0) / d
        z_new = z0 - step
        if not lo <= z_new <= hi:
            return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        z0 = z_new
        if abs(step) <= 1e-13 * z0:
            break
    return z0


def scan_well_range(r: float, family: PotentialFamily = QUARTIC, p_values=None):
    """Smallest and largest sampled p that form a well, or None.

    The admissible p-range is reported from sampling rather than assumed.
    """
    if p_values is None:
        p_values = np.geomspace(1e-6, 1e3, 91)
    ok = [p for p in p_values if well_exists(effective_potential(float(p), r, family))]
    if not ok:
        return None
    return float(min(ok)), float(max(ok))
