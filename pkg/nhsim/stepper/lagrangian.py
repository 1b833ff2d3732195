"""
Discrete Lagrangians L_d(q0, q1, h) and their slot derivatives.

D1 and D2 are the gradients with respect to q0 and q1, D3 the derivative
with respect to the time step. The Newton systems of the stepper and of
the impact stages also need the derivatives of D1 and D3 with respect to
q1 and of D1 with respect to h; the generic class gets all of them by
central differences, the midpoint class analytically.
"""

import numpy as np

from ..numerics import fd_jacobian

__all__ = ("DiscreteLagrangian", "MidpointDiscreteLagrangian",
           "discrete_momenta", "discrete_energy")


def _fd_in_h(f, h):
    return fd_jacobian(lambda x: f(x[0]), np.array([h]))[..., 0]


class DiscreteLagrangian:
    """
    A discrete Lagrangian given by its value and, optionally, analytic
    slot derivatives.
    """

    def __init__(self, value, d1=None, d2=None, d3=None):
        """
        Constructor

        arguments:
        - value    function (q0, q1, h) -> L_d
        - d1       function (q0, q1, h) -> dL_d/dq0, or None
        - d2       function (q0, q1, h) -> dL_d/dq1, or None
        - d3       function (q0, q1, h) -> dL_d/dh, or None

        Missing derivatives are computed by central differences.
        """

        self._value = value
        self._d1 = d1
        self._d2 = d2
        self._d3 = d3

    def L(self, q0, q1, h):
        return float(self._value(q0, q1, h))

    def D1(self, q0, q1, h):
        if self._d1 is not None:
            return np.asarray(self._d1(q0, q1, h), dtype=float)
        return fd_jacobian(lambda x: self.L(x, q1, h), q0)

    def D2(self, q0, q1, h):
        if self._d2 is not None:
            return np.asarray(self._d2(q0, q1, h), dtype=float)
        return fd_jacobian(lambda x: self.L(q0, x, h), q1)

    def D3(self, q0, q1, h):
        if self._d3 is not None:
            return float(self._d3(q0, q1, h))
        return float(_fd_in_h(lambda s: self.L(q0, q1, s), h))

    def D1_q1(self, q0, q1, h):
        """
        returns: the n x n matrix d(D1)/dq1.
        """

        return fd_jacobian(lambda x: self.D1(q0, x, h), q1)

    def D1_h(self, q0, q1, h):
        """
        returns: the n-vector d(D1)/dh.
        """

        return _fd_in_h(lambda s: self.D1(q0, q1, s), h)

    def D3_q1(self, q0, q1, h):
        """
        returns: the n-vector d(D3)/dq1.
        """

        return fd_jacobian(lambda x: self.D3(q0, x, h), q1)


class MidpointDiscreteLagrangian(DiscreteLagrangian):
    """
    L_d = (1/2h) (q1 - q0)' M (q1 - q0) - h V((q0 + q1)/2)

    for a mechanical system with constant mass matrix. With V = 0 this is
    exactly the quadratic discrete Lagrangian of the catalog systems.
    """

    def __init__(self, system):
        """
        Constructor

        arguments:
        - system    a MechanicalSystem with constant_mass set
        """

        if not system.constant_mass:
            raise ValueError("the midpoint discrete Lagrangian needs a "
                             "constant mass matrix")
        self.system = system
        self.mass = system.M(np.zeros(system.dimension))
        super(MidpointDiscreteLagrangian, self).__init__(self._L)

    @staticmethod
    def _split(q0, q1):
        q0 = np.asarray(q0, dtype=float)
        q1 = np.asarray(q1, dtype=float)
        return q1 - q0, 0.5 * (q0 + q1)

    def _L(self, q0, q1, h):
        dq, mid = self._split(q0, q1)
        return dq @ self.mass @ dq / (2.0 * h) - h * self.system.V(mid)

    def D1(self, q0, q1, h):
        dq, mid = self._split(q0, q1)
        return -self.mass @ dq / h - 0.5 * h * self.system.dV(mid)

    def D2(self, q0, q1, h):
        dq, mid = self._split(q0, q1)
        return self.mass @ dq / h - 0.5 * h * self.system.dV(mid)

    def D3(self, q0, q1, h):
        dq, mid = self._split(q0, q1)
        return float(-dq @ self.mass @ dq / (2.0 * h * h) - self.system.V(mid))

    def D1_q1(self, q0, q1, h):
        _, mid = self._split(q0, q1)
        return -self.mass / h - 0.25 * h * self.system.d2V(mid)

    def D1_h(self, q0, q1, h):
        dq, mid = self._split(q0, q1)
        return self.mass @ dq / (h * h) - 0.5 * self.system.dV(mid)

    def D3_q1(self, q0, q1, h):
        dq, mid = self._split(q0, q1)
        return -self.mass @ dq / (h * h) - 0.5 * self.system.dV(mid)


def discrete_momenta(Ld, q0, q1, h):
    """
    Discrete Legendre transforms of the pair (q0, q1).

    returns: (p0, p1) with p0 = -D1 L_d and p1 = D2 L_d.
    """

    return -Ld.D1(q0, q1, h), Ld.D2(q0, q1, h)


def discrete_energy(Ld, q0, q1, h):
    """
    Discrete energy -D3 L_d(q0, q1, h).
    """

    return -Ld.D3(q0, q1, h)
