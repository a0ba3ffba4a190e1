import numpy as np
import pytest
from scipy.integrate import solve_ivp

from magtunnel.errors import DomainError, NoWell
from magtunnel.potential import COSINE_SQUARED, QUADRATIC, effective_potential
from magtunnel.quadrature import cycle_integrals
from magtunnel.trajectory import extend_orbit, integrate_cycle, orbit_action

from conftest import P_RES, QUARTIC, RATIO_AT_1


@pytest.fixture(scope="module")
def cycles():
    return {p: integrate_cycle(effective_potential(p)) for p in QUARTIC}


@pytest.mark.parametrize("p", sorted(QUARTIC))
def test_matches_quadrature(cycles, p):
    _, f1, f2, ft = QUARTIC[p]
    orbit = cycles[p]
    assert orbit.period == pytest.approx(ft, rel=1e-10)
    assert orbit.translation == pytest.approx(f2, rel=1e-10)
    assert orbit.action_gain == pytest.approx(f1, rel=1e-10)
    assert orbit.energy_drift <= 1e-8


@pytest.mark.parametrize("p", sorted(QUARTIC))
def test_orbit_shape(cycles, p):
    orbit = cycles[p]
    assert len(orbit) >= 200
    assert orbit.z[0] == 0 and orbit.dzds[0] == 0 and orbit.x_over_a[0] == 0
    assert np.all(orbit.z >= -1e-12)
    assert np.all(np.diff(orbit.x_over_a) < 0)
    # reflection about the half period
    np.testing.assert_allclose(orbit.z, orbit.z[::-1], atol=1e-12)
    np.testing.assert_allclose(orbit.s + orbit.s[::-1], orbit.period, atol=1e-12)
    assert abs(orbit.z[-1]) < 1e-10


def test_initial_acceleration():
    eff = effective_potential(1.76)
    assert 0.5 * float(eff.radicand_derivative(0.0)) == np.sqrt(1.76)


def test_full_period_with_scipy_is_even():
    # integrating straight through the turning point lands back on z = 0
    eff = effective_potential(1.76)
    orbit = integrate_cycle(eff)
    rhs = lambda s, y: [y[1], 0.5 * float(eff.radicand_derivative(y[0]))]
    sol = solve_ivp(rhs, (0, orbit.period), [0.0, 0.0], method="DOP853", rtol=1e-12, atol=1e-12, dense_output=True)
    z = sol.sol(orbit.s)[0]
    np.testing.assert_allclose(z, orbit.z, atol=1e-7)
    assert abs(sol.y[0, -1]) < 1e-7


def test_tolerance_convergence():
    _, f1, f2, ft = QUARTIC[1.0]
    eff = effective_potential(1.0)
    coarse = integrate_cycle(eff, tol=1e-6)
    fine = integrate_cycle(eff, tol=1e-9)
    for attr, ref in (("period", ft), ("translation", f2), ("action_gain", f1)):
        assert abs(getattr(fine, attr) - ref) < abs(getattr(coarse, attr) - ref)


def test_other_family():
    eff = effective_potential(1.76, 1.0, COSINE_SQUARED)
    orbit = integrate_cycle(eff)
    ints = cycle_integrals(eff, 1e-12)
    assert orbit.translation == pytest.approx(ints.f2, rel=1e-9)
    assert orbit.action_gain == pytest.approx(ints.f1, rel=1e-9)


def test_errors():
    with pytest.raises(DomainError):
        integrate_cycle(effective_potential(0.0))
    with pytest.raises(NoWell):
        integrate_cycle(effective_potential(1.0, 1.0, QUADRATIC))


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_extend_endpoints(cycles, n):
    cycle = cycles[1.76]
    orbit = extend_orbit(cycle, n)
    assert len(orbit) == 200 * n + 1
    assert orbit.x_over_a[0] == pytest.approx(n * cycle.translation, rel=1e-14)
    assert orbit.x_over_a[-1] == 0.0
    assert abs(orbit.z[-1]) < 1e-10
    assert np.all(np.diff(orbit.x_over_a) < 0)
    assert orbit.s[-1] == pytest.approx(n * cycle.period, rel=1e-14)


def test_three_lobes(cycles):
    orbit = extend_orbit(cycles[1.76], 3)
    z = orbit.z
    peaks = np.flatnonzero((z[1:-1] > z[:-2]) & (z[1:-1] >= z[2:])) + 1
    assert len(peaks) == 3


def test_single_cycle_extension_is_shift(cycles):
    cycle = cycles[0.5]
    one = extend_orbit(cycle, 1)
    np.testing.assert_array_equal(one.z, cycle.z)
    np.testing.assert_allclose(one.x_over_a[:-1], cycle.x_over_a[:-1] + cycle.translation)


def test_extend_rejects_bad_counts(cycles):
    for n in (0, -1, 1.5):
        with pytest.raises(DomainError):
            extend_orbit(cycles[1.0], n)
    with pytest.raises(DomainError):
        extend_orbit(extend_orbit(cycles[1.0], 2), 2)


def test_action_values(cycles, default_params):
    kappa_a = default_params.wkb_rate * default_params.well_scale
    _, f1, f2, _ = QUARTIC[1.0]
    one = orbit_action(extend_orbit(cycles[1.0], 1), default_params)
    assert one == pytest.approx(RATIO_AT_1 * kappa_a * f2, rel=1e-9)
    two = orbit_action(extend_orbit(cycles[1.0], 2), default_params)
    assert two == pytest.approx(2 * one, rel=1e-12)


def test_action_vanishes_at_resonance(default_params):
    cycle = integrate_cycle(effective_potential(P_RES))
    for n in (1, 3):
        assert abs(orbit_action(extend_orbit(cycle, n), default_params)) < 1e-8
