"""
Velocity constraints (the distribution D and its discrete counterpart
D_d) and inequality constraints g(q) <= 0.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..errors import ConstraintRankError, BoundaryGradientError, DimensionError
from ..numerics import fd_jacobian
from .system import as_vector

__all__ = ("ConstraintSet", "InequalityConstraint", "constraint_matrix",
           "gap_and_gradient", "project_velocity", "INTERIOR", "BOUNDARY",
           "EXTERIOR")

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"

DIAGONAL_TOLERANCE = 1e-12
GRADIENT_FLOOR = 1e-14


@dataclass(frozen=True)
class ConstraintSet:
    """
    m linear velocity constraints mu^a(q) v = 0 and the m discrete
    constraint functions mu_d^a(q0, q1) whose zero set is D_d.

    Attributes:
        dimension              (int) n
        m                      (int) number of constraints
        one_forms              (callable) q -> m x n matrix, row a is mu^a(q)
        discrete_constraints   (callable) (q0, q1) -> m-vector
        one_form_jacobian      (callable) q -> array [a, i, j] =
                               d mu^a_i / dq_j, finite differences when None
        discrete_jacobians     (callable) (q0, q1) -> (d mu_d/dq0,
                               d mu_d/dq1), both m x n; finite differences
                               when None
    """

    dimension: int
    m: int
    one_forms: Callable
    discrete_constraints: Callable
    one_form_jacobian: Optional[Callable] = None
    discrete_jacobians: Optional[Callable] = None

    def __post_init__(self):
        q = np.zeros(self.dimension)
        if np.max(np.abs(self.mu_d(q, q)), initial=0.0) > DIAGONAL_TOLERANCE:
            raise ValueError("discrete constraints do not vanish on the "
                             "diagonal")

    @classmethod
    def empty(cls, dimension):
        """
        A constraint set with no constraints, D = TQ.
        """

        return cls(dimension, 0,
                   lambda q: np.zeros((0, dimension)),
                   lambda q0, q1: np.zeros(0),
                   lambda q: np.zeros((0, dimension, dimension)),
                   lambda q0, q1: (np.zeros((0, dimension)),
                                   np.zeros((0, dimension))))

    def mu(self, q):
        value = np.asarray(self.one_forms(q), dtype=float).reshape(self.m, self.dimension)
        return value

    def mu_d(self, q0, q1):
        value = np.asarray(self.discrete_constraints(q0, q1), dtype=float)
        if value.shape != (self.m,):
            raise DimensionError("discrete constraints", (self.m,), value.shape)
        return value

    def dmu(self, q):
        """
        returns: the array [a, i, j] = d mu^a_i / dq_j.
        """

        if self.one_form_jacobian is not None:
            return np.asarray(self.one_form_jacobian(q), dtype=float)
        return fd_jacobian(self.mu, q)

    def dmu_d(self, q0, q1):
        """
        returns: the pair (d mu_d / dq0, d mu_d / dq1) of m x n matrices.
        """

        if self.discrete_jacobians is not None:
            J0, J1 = self.discrete_jacobians(q0, q1)
            return np.asarray(J0, dtype=float), np.asarray(J1, dtype=float)
        return (fd_jacobian(lambda x: self.mu_d(x, q1), q0),
                fd_jacobian(lambda x: self.mu_d(q0, x), q1))


def constraint_matrix(cs, q):
    """
    Evaluate the constraint one-forms at q and check their rank.

    arguments:
    - cs    the ConstraintSet
    - q     configuration

    returns: the m x n matrix whose row a is mu^a(q).
    """

    q = as_vector(q, cs.dimension, "configuration")
    mu = cs.mu(q)
    if cs.m:
        rank = np.linalg.matrix_rank(mu)
        if rank < cs.m:
            raise ConstraintRankError(q, rank, cs.m)
    return mu


def project_velocity(sys, cs, q, v):
    """
    M-orthogonal projection of v onto D_q:
    v - M^-1 mu' (mu M^-1 mu')^-1 mu v.
    """

    v = np.asarray(v, dtype=float)
    if cs.m == 0:
        return v.copy()
    mu = constraint_matrix(cs, q)
    Minv_muT = sys.solve_mass(q, mu.T)
    multipliers = np.linalg.solve(mu @ Minv_muT, mu @ v)
    return v - Minv_muT @ multipliers


@dataclass(frozen=True)
class InequalityConstraint:
    """
    A scalar gap function: the admissible set is C = {g <= 0} and the
    boundary is {g = 0}.

    Attributes:
        gap            (callable) q -> g(q)
        gap_gradient   (callable) q -> dg(q), finite differences when None
        label          (str) identifier used in logs and records
    """

    gap: Callable
    gap_gradient: Optional[Callable] = None
    label: str = "C"

    def g(self, q):
        return float(self.gap(q))

    def dg(self, q):
        if self.gap_gradient is not None:
            return np.asarray(self.gap_gradient(q), dtype=float)
        return fd_jacobian(self.gap, q)

    def classify(self, q, tolerance):
        """
        returns: INTERIOR, BOUNDARY or EXTERIOR for the point q, with
                 |g| <= tolerance counted as boundary.
        """

        value = self.g(q)
        if value > tolerance:
            return EXTERIOR
        if value < -tolerance:
            return INTERIOR
        return BOUNDARY

    def normal(self, q):
        """
        The generator dg(q) of the normal cone at a boundary point.
        """

        dg = self.dg(q)
        if not np.linalg.norm(dg) > GRADIENT_FLOOR:
            raise BoundaryGradientError(self.label, q)
        return dg


def gap_and_gradient(ic, q):
    """
    returns: the pair (g(q), dg(q)).
    """

    q = np.asarray(q, dtype=float)
    return ic.g(q), ic.dg(q)
