"""
Mechanical systems: configuration space dimension, mass matrix and
potential, with the maps derived from L(q, v) = 0.5 v'M(q)v - V(q).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from ..errors import DimensionError, NonFiniteError, MassMatrixError
from ..numerics import fd_jacobian

__all__ = ("MechanicalSystem", "as_vector", "legendre_transform",
           "inverse_legendre_transform", "energy", "lagrangian")

SYMMETRY_TOLERANCE = 1e-12


def as_vector(x, n, what):
    """
    Validate a configuration, velocity or momentum vector.

    arguments:
    - x      anything convertible to a 1-d float array
    - n      the expected length
    - what   name used in error messages

    returns: a new 1-d float array of length n.
    """

    x = np.atleast_1d(np.array(x, dtype=float))
    if x.shape != (n,):
        raise DimensionError(what, (n,), x.shape)
    if not np.all(np.isfinite(x)):
        raise NonFiniteError(what)
    return x


@dataclass(frozen=True)
class MechanicalSystem:
    """
    A regular mechanical Lagrangian system on an n-dimensional
    configuration space.

    Attributes:
        dimension              (int) n
        mass_matrix            (callable) q -> symmetric positive definite
                               n x n matrix
        potential              (callable) q -> V(q), None for V = 0
        potential_gradient     (callable) q -> dV(q), finite differences of
                               potential when None
        potential_hessian      (callable) q -> n x n second derivative,
                               finite differences of the gradient when None
        mass_matrix_derivative (callable) q -> array [i, j, k] = dM_ij/dq_k,
                               finite differences when None
        constant_mass          (bool) M does not depend on q
        name                   (str) label used in logs and output
        coordinate_names       (tuple) names of the coordinates, q0 ... when
                               None
        sample_points          (tuple) configurations where M is checked at
                               construction, q = 0 and q = 1 when None
    """

    dimension: int
    mass_matrix: Callable
    potential: Optional[Callable] = None
    potential_gradient: Optional[Callable] = None
    potential_hessian: Optional[Callable] = None
    mass_matrix_derivative: Optional[Callable] = None
    constant_mass: bool = False
    name: str = "system"
    coordinate_names: Optional[tuple] = None
    sample_points: Optional[tuple] = None

    def __post_init__(self):
        if int(self.dimension) < 1:
            raise ValueError("dimension must be a positive integer")
        samples = self.sample_points
        if samples is None:
            samples = (np.zeros(self.dimension), np.ones(self.dimension))
        for q in samples:
            self.M(q)

    @property
    def coordinates(self):
        if self.coordinate_names is not None:
            return tuple(self.coordinate_names)
        return tuple("q%d" % i for i in range(self.dimension))

    def M(self, q):
        """
        Evaluate the mass matrix and check it is symmetric positive
        definite by attempting a Cholesky factorisation.

        returns: the n x n mass matrix at q.
        """

        q = as_vector(q, self.dimension, "configuration")
        return self._checked_mass(q)[0]

    def _checked_mass(self, q):
        M = np.asarray(self.mass_matrix(q), dtype=float)
        n = self.dimension
        if M.shape != (n, n):
            raise DimensionError("mass matrix", (n, n), M.shape)
        if not np.all(np.isfinite(M)):
            raise NonFiniteError("mass matrix")
        scale = max(1.0, float(np.max(np.abs(M))))
        if np.max(np.abs(M - M.T)) > SYMMETRY_TOLERANCE * scale:
            raise MassMatrixError(q, "not symmetric")
        try:
            factor = scipy.linalg.cho_factor(M)
        except np.linalg.LinAlgError as error:
            raise MassMatrixError(q, str(error))
        return M, factor

    def solve_mass(self, q, rhs):
        """
        Solve M(q) x = rhs with the Cholesky factor of the mass matrix.
        rhs may be a vector or an n x k matrix.
        """

        q = as_vector(q, self.dimension, "configuration")
        _, factor = self._checked_mass(q)
        return scipy.linalg.cho_solve(factor, np.asarray(rhs, dtype=float))

    def V(self, q):
        if self.potential is None:
            return 0.0
        return float(self.potential(q))

    def dV(self, q):
        if self.potential is None:
            return np.zeros(self.dimension)
        if self.potential_gradient is not None:
            return np.asarray(self.potential_gradient(q), dtype=float)
        return fd_jacobian(self.potential, q)

    def d2V(self, q):
        if self.potential is None:
            return np.zeros((self.dimension, self.dimension))
        if self.potential_hessian is not None:
            return np.asarray(self.potential_hessian(q), dtype=float)
        return fd_jacobian(self.dV, q)

    def dM(self, q):
        """
        returns: the array [i, j, k] = dM_ij / dq_k.
        """

        n = self.dimension
        if self.constant_mass:
            return np.zeros((n, n, n))
        if self.mass_matrix_derivative is not None:
            return np.asarray(self.mass_matrix_derivative(q), dtype=float)
        return fd_jacobian(self.mass_matrix, q)


def lagrangian(sys, q, v):
    """
    L(q, v) = 0.5 v'M(q)v - V(q)
    """

    q = as_vector(q, sys.dimension, "configuration")
    v = as_vector(v, sys.dimension, "velocity")
    return 0.5 * v @ sys.M(q) @ v - sys.V(q)


def legendre_transform(sys, q, v):
    """
    Fibre derivative of the mechanical Lagrangian.

    arguments:
    - sys   the MechanicalSystem
    - q     configuration
    - v     velocity at q

    returns: the momentum p = M(q) v.
    """

    q = as_vector(q, sys.dimension, "configuration")
    v = as_vector(v, sys.dimension, "velocity")
    return sys.M(q) @ v


def inverse_legendre_transform(sys, q, p):
    """
    returns: the velocity v solving M(q) v = p.
    """

    q = as_vector(q, sys.dimension, "configuration")
    p = as_vector(p, sys.dimension, "momentum")
    return sys.solve_mass(q, p)


def energy(sys, q, v):
    """
    Energy E_L = 0.5 v'M(q)v + V(q).
    """

    q = as_vector(q, sys.dimension, "configuration")
    v = as_vector(v, sys.dimension, "velocity")
    return float(0.5 * v @ sys.M(q) @ v + sys.V(q))
