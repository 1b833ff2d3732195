"""
One step of the discrete Lagrange-d'Alembert flow.

Given the pair (q_prev, q_curr) in D_d, dla_step solves

    D2 L_d(q_prev, q_curr, h_prev) + D1 L_d(q_curr, q_next, h) = mu(q_curr)' lambda
    mu_d(q_curr, q_next) = 0

for (q_next, lambda). h_prev defaults to h; the impact resolver passes the
shortened step (1 - alpha) h when resuming after an impact.
"""

import logging

import numpy as np

from ..errors import NonFiniteError
from ..mechanics import as_vector, constraint_matrix
from ..numerics import NewtonConfig, newton_solve

__all__ = ("dla_step", "dla_residual", "project_to_constraints")

logger = logging.getLogger(__name__)


def dla_residual(cs, Ld, q_prev, q_curr, q_next, lam, h, h_prev):
    """
    returns: the (n + m)-vector of the forced discrete Euler-Lagrange
             equations and the discrete constraints.
    """

    mu = cs.mu(q_curr)
    momentum = (Ld.D2(q_prev, q_curr, h_prev) + Ld.D1(q_curr, q_next, h)
                - mu.T @ lam)
    return np.concatenate([momentum, cs.mu_d(q_curr, q_next)])


def dla_step(sys, cs, Ld, q_prev, q_curr, h, h_prev=None, cfg=None,
             guess=None, full_output=False):
    """
    Advance the discrete flow by one step.

    arguments:
    - sys           the MechanicalSystem
    - cs            the ConstraintSet
    - Ld            the DiscreteLagrangian
    - q_prev        configuration at the previous time
    - q_curr        configuration at the current time
    - h             step to take
    - h_prev        step between q_prev and q_curr, h when None
    - cfg           a NewtonConfig
    - guess         initial guess for q_next, linear extrapolation when None
    - full_output   also return the SolveReport

    returns: (q_next, lambda), or (q_next, lambda, report) when
             full_output is set.
    """

    n, m = sys.dimension, cs.m
    q_prev = as_vector(q_prev, n, "q_prev")
    q_curr = as_vector(q_curr, n, "q_curr")
    if h_prev is None:
        h_prev = h
    if not (h > 0 and h_prev > 0):
        raise ValueError("time steps must be positive, got h=%g, h_prev=%g"
                         % (h, h_prev))
    cfg = cfg or NewtonConfig()

    mu = constraint_matrix(cs, q_curr)
    p_prev = Ld.D2(q_prev, q_curr, h_prev)
    if not np.all(np.isfinite(p_prev)):
        raise NonFiniteError("discrete momentum")

    if guess is None:
        guess = q_curr + (h / h_prev) * (q_curr - q_prev)
    x0 = np.concatenate([as_vector(guess, n, "guess"), np.zeros(m)])

    def residual(x):
        q_next, lam = x[:n], x[n:]
        return np.concatenate([p_prev + Ld.D1(q_curr, q_next, h) - mu.T @ lam,
                               cs.mu_d(q_curr, q_next)])

    def jacobian(x):
        q_next = x[:n]
        _, J1 = cs.dmu_d(q_curr, q_next)
        return np.block([[Ld.D1_q1(q_curr, q_next, h), -mu.T],
                         [J1, np.zeros((m, m))]])

    report = newton_solve(residual, jacobian, x0, cfg)
    q_next, lam = report.solution[:n].copy(), report.solution[n:].copy()
    logger.debug("dla step converged in %d iterations, |F| = %.3e",
                 report.iterations, report.final_residual_norm)

    if full_output:
        return q_next, lam, report
    return q_next, lam


def project_to_constraints(cs, q0, q1, cfg=None):
    """
    Move q1 to the nearest point (in the Euclidean norm) with
    mu_d(q0, q1) = 0, keeping q0 fixed.

    Used to turn a pair obtained from an initial velocity into an initial
    pair in D_d.

    returns: the projected q1.
    """

    n, m = cs.dimension, cs.m
    q0 = as_vector(q0, n, "q0")
    q1 = as_vector(q1, n, "q1")
    if m == 0:
        return q1
    cfg = cfg or NewtonConfig()

    # stationarity of 0.5 |x - q1|^2 subject to mu_d(q0, x) = 0
    def residual(y):
        x, lam = y[:n], y[n:]
        _, J1 = cs.dmu_d(q0, x)
        return np.concatenate([x - q1 + J1.T @ lam, cs.mu_d(q0, x)])

    report = newton_solve(residual, None, np.concatenate([q1, np.zeros(m)]), cfg)
    projected = report.solution[:n].copy()
    logger.debug("projected q1 onto D_d, moved by %.3e",
                 float(np.max(np.abs(projected - q1))))
    return projected
