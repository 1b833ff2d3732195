import numpy as np
import pytest

from nhsim.catalog import make_rolling_disk, make_particle_in_disk


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def disk():
    return make_rolling_disk()


@pytest.fixture
def open_disk():
    ''' a table too large for the disk to reach the edge '''
    return make_rolling_disk(a=50.0)


@pytest.fixture
def particle():
    return make_particle_in_disk(mass=1.0, a=1.0)


def _disk_pair(q0, theta_dot, phi_dot, h, R=1.0):
    q0 = np.asarray(q0, dtype=float)
    phi_mid = q0[3] + 0.5 * phi_dot * h
    step = np.array([R * np.cos(phi_mid) * theta_dot * h,
                     R * np.sin(phi_mid) * theta_dot * h,
                     theta_dot * h, phi_dot * h])
    return q0, q0 + step


@pytest.fixture
def disk_pair():
    '''
    An initial pair on the discrete rolling arc: constant rates, heading
    at the midpoint of the step.
    '''
    return _disk_pair
