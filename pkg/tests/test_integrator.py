import logging
import time

import numpy as np
import numpy.testing as npt
import pytest

from nhsim.catalog import (SystemBundle, make_particle_half_plane, make_rolling_disk,
                           rolling_disk_exact)
from nhsim.errors import (ChainedImpactError, ImpactError, NHSimError,
                          SimultaneousImpactError)
from nhsim.integrator import integrate, violated_constraints
from nhsim.mechanics import InequalityConstraint
from nhsim.stepper import (CHAINED, IMPACT_POINT, POST_IMPACT, RESUMED, TOUCH_WINDOW,
                           project_to_constraints)
from nhsim.tolerances import Tolerances


@pytest.fixture
def corner():
    ''' free particle in the quadrant x <= 1, y <= 1 '''
    base = make_particle_half_plane()
    walls = [InequalityConstraint(lambda q: q[0] - 1.0, lambda q: np.array([1.0, 0.0]), "X"),
             InequalityConstraint(lambda q: q[1] - 1.0, lambda q: np.array([0.0, 1.0]), "Y")]
    return SystemBundle(base.system, base.constraints, walls, base.discrete_lagrangian)


def test_billiard(particle):
    ''' impacts on the grid: the point before each impact touches the wall '''
    system, cs, inequalities, Ld = particle
    h = 0.01
    start = time.perf_counter()
    trajectory = integrate(system, cs, Ld, inequalities, [0.0, 0.0], [h, 0.0], h, 400)
    assert time.perf_counter() - start < 1.0

    assert trajectory.impact_count == 2
    first, second = trajectory.impacts
    assert first.t_bar == pytest.approx(1.0, abs=1e-9)
    assert second.t_bar == pytest.approx(3.0, abs=1e-9)
    assert first.alpha == pytest.approx(0.5, abs=1e-9)
    assert first.window == pytest.approx(2 * h)
    npt.assert_allclose(first.q_bar, [1.0, 0.0], atol=1e-9)
    npt.assert_allclose(second.q_bar, [-1.0, 0.0], atol=1e-9)

    for record in trajectory.impacts:
        assert record.physical_energy_before == pytest.approx(0.5, abs=1e-9)
        assert record.physical_energy_after == pytest.approx(0.5, abs=1e-9)
    speeds = np.linalg.norm(np.diff(trajectory.points, axis=0), axis=1) / np.diff(trajectory.times)
    npt.assert_allclose(speeds, 1.0, atol=1e-9)
    assert trajectory.energy_drift() <= 1e-9
    assert trajectory.times[-1] == pytest.approx(4.0)
    npt.assert_allclose(trajectory.final_point, [0.0, 0.0], atol=1e-9)

    for k in trajectory.impact_indices():
        assert trajectory.flags[k] & TOUCH_WINDOW
        assert trajectory.flags[k + 1] == POST_IMPACT
        assert trajectory.flags[k + 2] == RESUMED
    assert np.all(trajectory.max_gaps(inequalities) <= 1e-9)


def test_oblique_billiard(particle):
    system, cs, inequalities, Ld = particle
    h = 0.01
    v = np.array([1.0, 0.0])
    q0 = np.array([0.0, -0.5])
    trajectory = integrate(system, cs, Ld, inequalities, q0, q0 + h * v, h, 150)

    assert trajectory.impact_count == 1
    record = trajectory.impacts[0]
    npt.assert_allclose(record.q_bar, [np.sqrt(0.75), -0.5], atol=1e-9)
    assert record.t_bar == pytest.approx(np.sqrt(0.75), abs=1e-9)
    assert not trajectory.flags[trajectory.impact_indices()[0]] & TOUCH_WINDOW

    n = record.q_bar / np.linalg.norm(record.q_bar)
    reflected = v - 2.0 * (v @ n) * n
    npt.assert_allclose((record.q_resume - record.q_post) / h, reflected, atol=1e-8)
    npt.assert_allclose(
            (record.q_post - record.q_bar) / ((1.0 - record.alpha) * record.window),
            reflected, atol=1e-8)


def test_disk_against_the_edge(caplog):
    disk = make_rolling_disk(a=3.0)
    system, cs, inequalities, Ld = disk
    h = 0.01
    q0 = np.array([0.0, 0.0, 0.0, 0.3])
    q1 = project_to_constraints(cs, q0, rolling_disk_exact(q0, 1.3, 0.1, h))
    start = time.perf_counter()
    with caplog.at_level(logging.INFO, logger="nhsim"):
        trajectory = integrate(system, cs, Ld, inequalities, q0, q1, h, 250)
    assert time.perf_counter() - start < 1.0

    logged = [r.getMessage() for r in caplog.records if r.name == "nhsim.impact.resolver"]
    assert any(m.startswith("impact on C+") and "energy change" in m for m in logged)

    assert trajectory.impact_count == 1
    record = trajectory.impacts[0]
    assert record.label == "C+"
    assert record.t_bar == pytest.approx(1.54, abs=0.02)
    assert record.normal_multiplier >= 0.0
    assert max(record.residuals) <= 1e-10
    assert np.isfinite(record.physical_energy_change)
    assert record.discrete_energy_residual <= 1e-10
    record.validate(disk.inequality("C+"), 1e-9, 1e-9)

    assert np.all(trajectory.max_gaps(inequalities) <= 1e-9)
    assert np.max(trajectory.constraint_residuals(cs)) <= 1e-9
    assert np.all(np.diff(trajectory.times) > 0.0)
    assert len(trajectory.impact_indices()) == 1


def test_interior_run(open_disk, disk_pair):
    system, cs, inequalities, Ld = open_disk
    q0, q1 = disk_pair(np.zeros(4), 1.0, 0.5, 0.01)
    trajectory = integrate(system, cs, Ld, inequalities, q0, q1, 0.01, 200)
    assert trajectory.impact_count == 0
    assert len(trajectory) == 201
    assert np.all(np.isnan(trajectory.multipliers[:2]))
    assert not np.any(np.isnan(trajectory.multipliers[2:]))
    assert trajectory.energies[0] == trajectory.energies[1]


def test_chained_impact(corner):
    ''' the step resumed after the X wall crosses the Y wall '''
    system, cs, inequalities, Ld = corner
    h = 0.1
    trajectory = integrate(system, cs, Ld, inequalities, [0.85, 0.76], [0.95, 0.85], h, 5)

    assert [r.label for r in trajectory.impacts] == ["X", "Y"]
    assert trajectory.impacts[0].chained
    assert not trajectory.impacts[1].chained
    assert trajectory.impacts[0].alpha == pytest.approx(0.5, abs=1e-9)
    assert trajectory.impacts[1].alpha == pytest.approx(2.0 / 3.0, abs=1e-9)

    impact_points = trajectory.impact_indices()
    assert len(impact_points) == 2
    assert not trajectory.flags[impact_points[0]] & CHAINED
    assert trajectory.flags[impact_points[1]] == IMPACT_POINT | CHAINED
    npt.assert_allclose(trajectory.points[-1] - trajectory.points[-2], [-0.1, -0.09],
                        atol=1e-10)
    assert np.all(trajectory.max_gaps(inequalities) <= 1e-9)


def test_too_many_chained_impacts(corner):
    system, cs, inequalities, Ld = corner
    with pytest.raises(ChainedImpactError) as info:
        integrate(system, cs, Ld, inequalities, [0.85, 0.76], [0.95, 0.85], 0.1, 5,
                  tolerances=Tolerances(max_chained_impacts=1))
    assert info.value.step == 2


def test_simultaneous_impact(corner):
    system, cs, inequalities, Ld = corner
    q0 = np.array([0.503, 0.503])
    with pytest.raises(SimultaneousImpactError) as info:
        integrate(system, cs, Ld, inequalities, q0, q0 + 0.01, 0.01, 100)
    assert info.value.labels == ["X", "Y"]
    assert info.value.step == 50
    assert str(info.value).startswith("step 50:")


def test_touching_initial_point(particle):
    system, cs, inequalities, Ld = particle
    with pytest.raises(ImpactError) as info:
        integrate(system, cs, Ld, inequalities, [0.99, 0.0], [1.0, 0.0], 0.01, 10)
    assert isinstance(info.value, NHSimError)
    assert info.value.step == 2


def test_initial_pair_validation(particle, disk):
    system, cs, inequalities, Ld = particle
    with pytest.raises(ValueError):
        integrate(system, cs, Ld, inequalities, [1.5, 0.0], [1.4, 0.0], 0.01, 10)
    with pytest.raises(ValueError):
        integrate(system, cs, Ld, inequalities, [0.0, 0.0], [0.01, 0.0], -0.01, 10)
    with pytest.raises(ValueError):
        # sliding sideways is not a discrete rolling step
        integrate(disk.system, disk.constraints, disk.discrete_lagrangian,
                  disk.inequalities, np.zeros(4), [0.0, 0.01, 0.0, 0.0], 0.01, 10)


def test_violated_constraints(corner):
    labels = [ic.label for ic in violated_constraints(corner.inequalities, [1.1, 0.5], 1e-9)]
    assert labels == ["X"]
    assert violated_constraints(corner.inequalities, [1.0, 1.0], 1e-9) == []


def test_at_rest(particle):
    system, cs, inequalities, Ld = particle
    q0 = np.array([0.3, -0.2])
    trajectory = integrate(system, cs, Ld, inequalities, q0, q0, 0.1, 10)
    assert trajectory.impact_count == 0
    npt.assert_allclose(trajectory.points, np.tile(q0, (11, 1)), atol=1e-14)


def test_impact_at_the_end_of_a_step(particle):
    ''' a proposal that overshoots the wall by less than the fraction margin '''
    system, cs, inequalities, Ld = particle
    h, offset = 0.01, 5e-9
    trajectory = integrate(system, cs, Ld, inequalities, [offset, 0.0], [h + offset, 0.0],
                           h, 150)

    assert trajectory.impact_count == 1
    record = trajectory.impacts[0]
    assert record.t_bar == pytest.approx(1.0, abs=1e-8)
    assert record.alpha == pytest.approx(0.5, abs=1e-6)
    npt.assert_allclose(record.q_bar, [1.0, 0.0], atol=1e-9)
    k = trajectory.impact_indices()[0]
    assert trajectory.flags[k] == IMPACT_POINT | TOUCH_WINDOW

    assert np.all(trajectory.max_gaps(inequalities) <= 1e-9)
    assert np.all(np.diff(trajectory.times) > 0.0)
    speeds = np.linalg.norm(np.diff(trajectory.points, axis=0), axis=1) / np.diff(trajectory.times)
    npt.assert_allclose(speeds, 1.0, atol=1e-6)
