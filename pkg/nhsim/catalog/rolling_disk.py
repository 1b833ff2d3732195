"""
Vertical rolling disk on a circular table.

Coordinates q = (x, y, theta, phi): contact point of the disk centre on
the plane, rolling angle and heading. The disk rolls without slipping,

    dx - R cos(phi) dtheta = 0,    dy - R sin(phi) dtheta = 0,

and both ends of the diameter along the heading must stay inside the
table of radius a:

    g_s(q) = (x + s R cos phi)^2 + (y + s R sin phi)^2 - a^2 <= 0,  s = +1, -1.
"""

import numpy as np

from ..mechanics import ConstraintSet, InequalityConstraint, MechanicalSystem
from ..stepper import MidpointDiscreteLagrangian
from .bundle import SystemBundle

__all__ = ("make_rolling_disk", "rolling_disk_velocity",
           "rolling_disk_exact", "ROLLING_DISK_DEFAULTS")

ROLLING_DISK_DEFAULTS = {"m": 1.0, "I": 1.0, "J": 1.0, "R": 1.0, "a": 3.0}


def _rolling_constraints(R):

    def one_forms(q):
        phi = q[3]
        return np.array([[1.0, 0.0, -R * np.cos(phi), 0.0],
                         [0.0, 1.0, -R * np.sin(phi), 0.0]])

    def one_form_jacobian(q):
        phi = q[3]
        d = np.zeros((2, 4, 4))
        d[0, 2, 3] = R * np.sin(phi)
        d[1, 2, 3] = -R * np.cos(phi)
        return d

    # rolling condition over the step, heading at the midpoint
    def discrete(q0, q1):
        dq = np.asarray(q1) - np.asarray(q0)
        phi = 0.5 * (q0[3] + q1[3])
        return np.array([dq[0] - R * np.cos(phi) * dq[2],
                         dq[1] - R * np.sin(phi) * dq[2]])

    def discrete_jacobians(q0, q1):
        dq = np.asarray(q1) - np.asarray(q0)
        phi = 0.5 * (q0[3] + q1[3])
        c, s = np.cos(phi), np.sin(phi)
        half_x = 0.5 * R * s * dq[2]
        half_y = -0.5 * R * c * dq[2]
        J0 = np.array([[-1.0, 0.0, R * c, half_x],
                       [0.0, -1.0, R * s, half_y]])
        J1 = np.array([[1.0, 0.0, -R * c, half_x],
                       [0.0, 1.0, -R * s, half_y]])
        return J0, J1

    return ConstraintSet(4, 2, one_forms, discrete, one_form_jacobian,
                         discrete_jacobians)


def _edge_constraint(R, a, side, label):

    def gap(q):
        X = q[0] + side * R * np.cos(q[3])
        Y = q[1] + side * R * np.sin(q[3])
        return X * X + Y * Y - a * a

    def gradient(q):
        c, s = np.cos(q[3]), np.sin(q[3])
        X = q[0] + side * R * c
        Y = q[1] + side * R * s
        return np.array([2.0 * X, 2.0 * Y, 0.0,
                         2.0 * side * R * (-X * s + Y * c)])

    return InequalityConstraint(gap, gradient, label)


def make_rolling_disk(m=1.0, I=1.0, J=1.0, R=1.0, a=3.0):
    """
    Build the rolling disk.

    arguments:
    - m    mass
    - I    moment of inertia about the rolling axis
    - J    moment of inertia about the vertical axis
    - R    disk radius
    - a    table radius, larger than R

    returns: a SystemBundle with the inequality constraints C+ and C-.
    """

    for name, value in (("m", m), ("I", I), ("J", J), ("R", R), ("a", a)):
        if not value > 0:
            raise ValueError("rolling disk parameter %s must be positive" % name)
    if not a > R:
        raise ValueError("table radius a=%g must exceed the disk radius R=%g" % (a, R))

    mass = np.diag([m, m, I, J]).astype(float)
    system = MechanicalSystem(4, lambda q: mass, constant_mass=True,
                              name="rolling_disk",
                              coordinate_names=("x", "y", "theta", "phi"))
    return SystemBundle(system,
                        _rolling_constraints(R),
                        [_edge_constraint(R, a, 1.0, "C+"),
                         _edge_constraint(R, a, -1.0, "C-")],
                        MidpointDiscreteLagrangian(system))


def rolling_disk_velocity(q, theta_dot, phi_dot, R=1.0):
    """
    returns: the velocity in D_q with the given rolling and turning rates.
    """

    phi = q[3]
    return np.array([R * np.cos(phi) * theta_dot, R * np.sin(phi) * theta_dot,
                     theta_dot, phi_dot])


def rolling_disk_exact(q0, theta_dot, phi_dot, t, R=1.0):
    """
    Closed-form motion away from the table edge: constant rates, the
    centre on a circle of radius R theta_dot / phi_dot (a line when
    phi_dot = 0).

    returns: q(t).
    """

    x0, y0, theta0, phi0 = q0
    phi = phi0 + phi_dot * t
    theta = theta0 + theta_dot * t
    if phi_dot == 0.0:
        x = x0 + R * theta_dot * np.cos(phi0) * t
        y = y0 + R * theta_dot * np.sin(phi0) * t
    else:
        radius = R * theta_dot / phi_dot
        x = x0 + radius * (np.sin(phi) - np.sin(phi0))
        y = y0 - radius * (np.cos(phi) - np.cos(phi0))
    return np.array([x, y, theta, phi])
