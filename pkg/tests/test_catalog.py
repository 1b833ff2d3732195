import numpy as np
import numpy.testing as npt
import pytest

from nhsim.catalog import (CATALOG, list_scenarios, make_particle_half_plane,
                           make_particle_in_disk, make_rolling_disk, make_system,
                           random_boundary_state, rolling_disk_exact,
                           rolling_disk_velocity, scenario_path)
from nhsim.errors import ConfigError
from nhsim.numerics import fd_jacobian


def random_disk_state(rng):
    return np.concatenate([rng.uniform(-2.0, 2.0, 2), rng.uniform(-np.pi, np.pi, 2)])


def test_disk_derivatives(disk, rng):
    cs, Ld = disk.constraints, disk.discrete_lagrangian
    for _ in range(100):
        q0 = random_disk_state(rng)
        q1 = q0 + 0.05 * rng.normal(size=4)
        h = rng.uniform(0.005, 0.1)

        npt.assert_allclose(cs.dmu(q0), fd_jacobian(cs.mu, q0), atol=1e-7)
        J0, J1 = cs.dmu_d(q0, q1)
        npt.assert_allclose(J0, fd_jacobian(lambda x: cs.mu_d(x, q1), q0), atol=1e-7)
        npt.assert_allclose(J1, fd_jacobian(lambda x: cs.mu_d(q0, x), q1), atol=1e-7)
        for ic in disk.inequalities:
            npt.assert_allclose(ic.dg(q0), fd_jacobian(ic.g, q0), atol=1e-6)

        scale = 1.0 / h ** 2
        npt.assert_allclose(Ld.D1(q0, q1, h), fd_jacobian(lambda x: Ld.L(x, q1, h), q0),
                            rtol=1e-6, atol=1e-6 * scale)
        npt.assert_allclose(Ld.D2(q0, q1, h), fd_jacobian(lambda x: Ld.L(q0, x, h), q1),
                            rtol=1e-6, atol=1e-6 * scale)
        npt.assert_allclose(Ld.D3(q0, q1, h),
                            fd_jacobian(lambda x: Ld.L(q0, q1, x[0]), np.array([h]))[0],
                            rtol=1e-6, atol=1e-6 * scale)


def test_discrete_constraints_are_consistent(disk, rng):
    ''' symmetric pairs on a curve that slides sideways: second order '''
    cs = disk.constraints
    for _ in range(20):
        q0 = random_disk_state(rng)
        theta_dot, phi_dot = rng.uniform(0.5, 1.5, 2)
        t = rng.uniform(0.0, 2.0)

        def curve(s):
            slide = np.array([0.3 * np.sin(2.0 * s), 0.2 * np.cos(s), 0.0, 0.0])
            return rolling_disk_exact(q0, theta_dot, phi_dot, s) + slide

        slide_rate = np.array([0.6 * np.cos(2.0 * t), -0.2 * np.sin(t), 0.0, 0.0])
        v = rolling_disk_velocity(curve(t), theta_dot, phi_dot) + slide_rate
        continuous = cs.mu(curve(t)) @ v
        assert np.max(np.abs(continuous)) > 0.01

        errors = [np.max(np.abs(cs.mu_d(curve(t - 0.5 * h), curve(t + 0.5 * h)) / h
                                - continuous))
                  for h in (1e-2, 1e-3)]
        # about 100 per decade
        assert 50.0 < errors[0] / errors[1] < 200.0


def test_disk_gaps():
    disk = make_rolling_disk(R=1.0, a=3.0)
    plus, minus = disk.inequalities
    assert (plus.label, minus.label) == ("C+", "C-")
    q = np.array([2.0, 0.0, 0.0, 0.0])
    assert plus.g(q) == pytest.approx(0.0)
    assert minus.g(q) == pytest.approx(1.0 - 9.0)
    assert plus.g(np.array([0.0, 0.0, 1.0, 0.7])) == pytest.approx(1.0 - 9.0)


def test_exact_arc_stays_in_distribution(open_disk):
    q0 = np.array([0.3, -0.2, 0.1, 0.4])
    for t in (0.0, 0.5, 2.0):
        q = rolling_disk_exact(q0, 1.5, 0.7, t)
        v = fd_jacobian(lambda s: rolling_disk_exact(q0, 1.5, 0.7, s[0]), np.array([t]))[:, 0]
        npt.assert_allclose(open_disk.constraints.mu(q) @ v, np.zeros(2), atol=1e-8)
        npt.assert_allclose(v, rolling_disk_velocity(q, 1.5, 0.7), atol=1e-8)
    straight = rolling_disk_exact(q0, 1.0, 0.0, 2.0)
    npt.assert_allclose(straight[:2], q0[:2] + 2.0 * np.array([np.cos(0.4), np.sin(0.4)]))


@pytest.mark.parametrize("name,label", [("rolling_disk", "C+"), ("rolling_disk", "C-"),
                                        ("particle_in_disk", None),
                                        ("particle_half_plane", None)])
def test_random_boundary_states(name, label, rng):
    for _ in range(20):
        bundle, ic, q, v = random_boundary_state(name, rng, label=label)
        assert abs(ic.g(q)) < 1e-12
        assert ic.dg(q) @ v > 0.0
        npt.assert_allclose(bundle.constraints.mu(q) @ v, 0.0, atol=1e-12)
        for other in bundle.inequalities:
            assert other.g(q) <= 1e-12


def test_registry():
    assert set(CATALOG) == {"rolling_disk", "particle_in_disk", "particle_half_plane"}
    bundle = make_system("rolling_disk", {"a": 10.0})
    assert bundle.system.coordinates == ("x", "y", "theta", "phi")
    assert bundle.inequality("C-").label == "C-"
    with pytest.raises(ConfigError):
        make_system("sleigh")
    with pytest.raises(ConfigError) as info:
        make_system("rolling_disk", {"radius": 1.0})
    assert info.value.field == "system.parameters.radius"
    with pytest.raises(ConfigError):
        make_system("rolling_disk", {"a": 0.5})


def test_particles():
    particle = make_particle_in_disk(mass=2.0, a=1.5, gravity=1.0)
    system = particle.system
    assert system.V(np.array([0.0, 1.0])) == pytest.approx(2.0)
    npt.assert_allclose(system.dV(np.zeros(2)), [0.0, 2.0])
    assert particle.inequalities[0].g(np.array([1.5, 0.0])) == pytest.approx(0.0)
    assert particle.constraints.m == 0

    half = make_particle_half_plane(wall=2.0)
    assert half.inequalities[0].g(np.array([2.0, 5.0])) == 0.0


def test_scenarios():
    assert {"billiard", "disk_arc", "disk_interior", "disk_wall"} <= set(list_scenarios())
    assert scenario_path("billiard").endswith("billiard.yaml")
    with pytest.raises(KeyError):
        scenario_path("nowhere")
