"""
Point particles in the plane: inside a disk of radius a, optionally under
uniform gravity along -y, and against the half-plane x <= wall.
"""

import numpy as np

from ..mechanics import ConstraintSet, InequalityConstraint, MechanicalSystem
from ..stepper import MidpointDiscreteLagrangian
from .bundle import SystemBundle

__all__ = ("make_particle_in_disk", "make_particle_half_plane",
           "PARTICLE_IN_DISK_DEFAULTS", "PARTICLE_HALF_PLANE_DEFAULTS")

PARTICLE_IN_DISK_DEFAULTS = {"mass": 1.0, "a": 1.0, "gravity": 0.0}
PARTICLE_HALF_PLANE_DEFAULTS = {"mass": 1.0, "wall": 1.0}


def _particle(mass, gravity, name):
    if not mass > 0:
        raise ValueError("particle mass must be positive")
    M = mass * np.eye(2)
    if gravity == 0.0:
        return MechanicalSystem(2, lambda q: M, constant_mass=True, name=name,
                                coordinate_names=("x", "y"))
    return MechanicalSystem(2, lambda q: M,
                            potential=lambda q: mass * gravity * q[1],
                            potential_gradient=lambda q: np.array([0.0, mass * gravity]),
                            potential_hessian=lambda q: np.zeros((2, 2)),
                            constant_mass=True, name=name,
                            coordinate_names=("x", "y"))


def make_particle_in_disk(mass=1.0, a=1.0, gravity=0.0):
    """
    A free particle (no velocity constraints) in the disk x^2 + y^2 <= a^2.

    arguments:
    - mass      particle mass
    - a         disk radius
    - gravity   acceleration along -y, 0 for the free particle

    returns: a SystemBundle with the single inequality constraint C.
    """

    if not a > 0:
        raise ValueError("disk radius must be positive")
    system = _particle(mass, gravity, "particle_in_disk")
    wall = InequalityConstraint(lambda q: q[0] * q[0] + q[1] * q[1] - a * a,
                                lambda q: np.array([2.0 * q[0], 2.0 * q[1]]),
                                "C")
    return SystemBundle(system, ConstraintSet.empty(2), [wall],
                        MidpointDiscreteLagrangian(system))


def make_particle_half_plane(mass=1.0, wall=1.0):
    """
    A free particle in the half-plane x <= wall.
    """

    system = _particle(mass, 0.0, "particle_half_plane")
    edge = InequalityConstraint(lambda q: q[0] - wall,
                                lambda q: np.array([1.0, 0.0]),
                                "C")
    return SystemBundle(system, ConstraintSet.empty(2), [edge],
                        MidpointDiscreteLagrangian(system))
