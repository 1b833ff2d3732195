import numpy as np
import numpy.testing as npt
import pytest

from nhsim.catalog import make_particle_in_disk, make_rolling_disk, rolling_disk_exact
from nhsim.errors import BracketError
from nhsim.mechanics import ConstraintSet, MechanicalSystem, energy
from nhsim.oracle import (ContinuousState, integrate_continuous, lda_acceleration,
                          locate_impact, rk4_step)


def arc_state(theta_dot, phi_dot, phi=0.0):
    return ContinuousState(0.0, np.array([0.0, 0.0, 0.0, phi]),
                           np.array([np.cos(phi) * theta_dot, np.sin(phi) * theta_dot,
                                     theta_dot, phi_dot]))


def test_arc_acceleration(open_disk):
    system, cs, _, _ = open_disk
    q = np.array([0.4, -0.3, 1.0, 0.7])
    v = np.array([np.cos(0.7) * 1.5, np.sin(0.7) * 1.5, 1.5, 0.4])
    a, lam = lda_acceleration(system, cs, q, v)
    # centripetal acceleration of the centre, constant rates
    npt.assert_allclose(a, [-np.sin(0.7) * 0.6, np.cos(0.7) * 0.6, 0.0, 0.0], atol=1e-12)
    npt.assert_allclose(lam, a[:2], atol=1e-12)


def test_free_particle_acceleration(particle):
    system, cs, _, _ = particle
    a, lam = lda_acceleration(system, cs, np.zeros(2), np.ones(2))
    npt.assert_array_equal(a, np.zeros(2))
    assert lam.shape == (0,)


def test_arc_accuracy(open_disk):
    system, cs, inequalities, _ = open_disk
    trajectory = integrate_continuous(system, cs, inequalities, arc_state(1.0, 0.5), 1.0, 1e-3)
    final = trajectory.final_state
    assert final.t == pytest.approx(1.0)
    npt.assert_allclose(final.q, rolling_disk_exact(np.zeros(4), 1.0, 0.5, final.t), atol=1e-9)
    assert not trajectory.events

    energies = trajectory.energies(system)
    assert np.max(np.abs(energies - energies[0])) <= 1e-10
    assert trajectory.max_constraint_drift <= 1e-9


def test_rk4_order(open_disk):
    system, cs, inequalities, _ = open_disk
    errors = []
    for h_fine in (0.2, 0.1, 0.05):
        final = integrate_continuous(system, cs, inequalities, arc_state(1.0, 1.0), 2.0,
                                     h_fine).final_state
        errors.append(np.max(np.abs(final.q - rolling_disk_exact(np.zeros(4), 1.0, 1.0,
                                                                  final.t))))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    # error ratio about 16 per halving
    assert np.all((orders > 3.0) & (orders < 5.0))


def test_rk4_step_on_a_parabola():
    system, cs, _, _ = make_particle_in_disk(a=10.0, gravity=2.0)
    q, v = rk4_step(system, cs, np.zeros(2), np.array([1.0, 1.0]), 0.5)
    npt.assert_allclose(q, [0.5, 0.5 - 0.25], atol=1e-14)
    npt.assert_allclose(v, [1.0, 0.0], atol=1e-14)


def test_locate_impact():
    t = locate_impact(lambda s: s * s - 2.0, 1.0, 2.0)
    assert t == pytest.approx(np.sqrt(2.0), abs=1e-12)
    with pytest.raises(BracketError):
        locate_impact(lambda s: s + 1.0, 0.0, 1.0)
    with pytest.raises(BracketError):
        # no strict sign change
        locate_impact(lambda s: s, 0.0, 1.0)


def test_crossing_time_on_the_edge():
    ''' the arc of C+ is a circle: its first exit from the table is known '''
    system, cs, inequalities, _ = make_rolling_disk(R=1.0, a=3.0)
    theta_dot, phi_dot, R, a = 1.0, 0.2, 1.0, 3.0
    rho = R * theta_dot / phi_dot
    # R sin(phi) - rho cos(phi) = K on the edge
    K = (a * a - 2.0 * rho * rho - R * R) / (2.0 * rho)
    phi_star = np.arctan2(rho, R) + np.arcsin(K / np.hypot(R, rho))
    assert phi_star > 0.0

    trajectory = integrate_continuous(system, cs, inequalities,
                                      arc_state(theta_dot, phi_dot), 2.5, 1e-3)
    event = trajectory.events[0]
    assert event.label == "C+"
    assert event.t == pytest.approx(phi_star / phi_dot, abs=1e-9)
    assert event.normal_multiplier >= 0.0
    assert event.energy_after == pytest.approx(event.energy_before, rel=1e-10)
    assert np.all([max(ic.g(q) for ic in inequalities) <= 1e-9 for q in trajectory.points])


def test_billiard_on_the_grid():
    ''' impacts that fall exactly on a sample time '''
    system, cs, inequalities, _ = make_particle_in_disk()
    state = ContinuousState(0.0, np.zeros(2), np.array([1.0, 0.0]))
    trajectory = integrate_continuous(system, cs, inequalities, state, 4.0, 0.01)

    assert [e.label for e in trajectory.events] == ["C", "C"]
    npt.assert_allclose([e.t for e in trajectory.events], [1.0, 3.0], atol=1e-9)
    npt.assert_allclose(trajectory.final_state.q, [0.0, 0.0], atol=1e-9)
    npt.assert_allclose(trajectory.final_state.v, [1.0, 0.0], atol=1e-12)


def test_gravity_parabola():
    system, cs, inequalities, _ = make_particle_in_disk(a=10.0, gravity=1.0)
    v0 = np.array([0.5, 0.3])
    state = ContinuousState(0.0, np.zeros(2), v0)
    final = integrate_continuous(system, cs, inequalities, state, 1.0, 0.1).final_state
    npt.assert_allclose(final.q, [0.5, 0.3 - 0.5], atol=1e-13)
    npt.assert_allclose(final.v, [0.5, 0.3 - 1.0], atol=1e-13)


def test_projection_removes_drift(open_disk):
    system, cs, inequalities, _ = open_disk
    loose = integrate_continuous(system, cs, inequalities, arc_state(1.0, 1.0), 5.0, 0.1)
    projected = integrate_continuous(system, cs, inequalities, arc_state(1.0, 1.0), 5.0, 0.1,
                                     projection=True)
    assert projected.max_constraint_drift <= 1e-12
    assert projected.max_constraint_drift <= loose.max_constraint_drift


def test_step_validation(particle):
    system, cs, inequalities, _ = particle
    with pytest.raises(ValueError):
        integrate_continuous(system, cs, inequalities,
                             ContinuousState(0.0, np.zeros(2), np.ones(2)), 1.0, 0.0)


def test_at_rest(open_disk):
    system, cs, inequalities, _ = open_disk
    q0 = np.array([1.0, 2.0, 0.5, 0.3])
    a, lam = lda_acceleration(system, cs, q0, np.zeros(4))
    npt.assert_allclose(a, np.zeros(4), atol=1e-14)
    npt.assert_allclose(lam, np.zeros(2), atol=1e-14)

    trajectory = integrate_continuous(system, cs, inequalities,
                                      ContinuousState(0.0, q0, np.zeros(4)), 1.0, 0.1)
    npt.assert_allclose(trajectory.final_state.q, q0, atol=1e-14)


def test_straight_line(open_disk):
    ''' without turning the disk rolls along its heading '''
    system, cs, inequalities, _ = open_disk
    final = integrate_continuous(system, cs, inequalities, arc_state(2.0, 0.0, phi=0.4),
                                 1.0, 0.1).final_state
    npt.assert_allclose(final.q, [2.0 * np.cos(0.4), 2.0 * np.sin(0.4), 2.0, 0.4], atol=1e-12)


def stretched_plane(analytic):
    ''' M = diag(1, 1 + r^2) in coordinates (r, theta) '''
    def derivative(q):
        dM = np.zeros((2, 2, 2))
        dM[1, 1, 0] = 2.0 * q[0]
        return dM
    return MechanicalSystem(2, lambda q: np.diag([1.0, 1.0 + q[0] ** 2]),
                            mass_matrix_derivative=derivative if analytic else None)


@pytest.mark.parametrize("analytic,atol", [(True, 1e-12), (False, 1e-6)])
def test_configuration_dependent_mass(analytic, atol):
    system = stretched_plane(analytic)
    r, r_dot, theta_dot = 2.0, 0.5, 0.7
    a, lam = lda_acceleration(system, ConstraintSet.empty(2), [r, 0.3], [r_dot, theta_dot])
    npt.assert_allclose(a, [r * theta_dot ** 2,
                            -2.0 * r * r_dot * theta_dot / (1.0 + r * r)], atol=atol)
    npt.assert_allclose(a, [0.98, -0.28], atol=atol)
    assert lam.shape == (0,)


def test_configuration_dependent_mass_flow():
    ''' theta is cyclic: its momentum and the energy are conserved '''
    system = stretched_plane(True)
    state = ContinuousState(0.0, np.array([1.0, 0.0]), np.array([0.3, 1.0]))
    trajectory = integrate_continuous(system, ConstraintSet.empty(2), [], state, 1.0, 1e-3)
    momenta = (1.0 + trajectory.points[:, 0] ** 2) * trajectory.velocities[:, 1]
    assert np.max(np.abs(momenta - momenta[0])) <= 1e-9
    energies = trajectory.energies(system)
    assert np.max(np.abs(energies - energy(system, state.q, state.v))) <= 1e-9
