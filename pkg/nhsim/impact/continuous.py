"""
Velocity jump of the continuous nonholonomic impact.

At a boundary point q with incoming velocity v_minus in D_q the
post-impact velocity v_plus solves

    M(q) (v_plus - v_minus) = -lambda_bar dg(q) + mu(q)' nu
    0.5 v_plus' M v_plus = 0.5 v_minus' M v_minus
    mu(q) v_plus = 0

with lambda_bar >= 0. The system has the closed-form root
v_plus = v_minus - lambda_bar w, w the M-orthogonal projection of
M^-1 dg on D and lambda_bar = 2 dg.v_minus / dg.w, which seeds Newton.
"""

import logging

import numpy as np

from ..errors import GrazingImpactError, ImpactError, InadmissibleImpactError
from ..mechanics import as_vector, constraint_matrix, project_velocity
from ..numerics import newton_solve
from ..tolerances import Tolerances

__all__ = ("continuous_jump", "closed_form_jump")

logger = logging.getLogger(__name__)


def closed_form_jump(sys, cs, ic, q, v_minus):
    """
    returns: (v_plus, lambda_bar) from the projection formula.
    """

    dg = ic.normal(q)
    w = project_velocity(sys, cs, q, sys.solve_mass(q, dg))
    lam_bar = 2.0 * float(dg @ v_minus) / float(dg @ w)
    return v_minus - lam_bar * w, lam_bar


def continuous_jump(sys, cs, ic, q, v_minus, tolerances=None):
    """
    Solve the continuous impact equations.

    arguments:
    - sys          the MechanicalSystem
    - cs           the ConstraintSet
    - ic           the InequalityConstraint whose boundary q lies on
    - q            the impact configuration, |g(q)| within tolerance
    - v_minus      the incoming velocity, in D_q and pointing out of C
    - tolerances   a Tolerances instance

    returns: (v_plus, lambda_bar, nu)
    """

    n, m = sys.dimension, cs.m
    tol = tolerances or Tolerances()
    q = as_vector(q, n, "configuration")
    v_minus = as_vector(v_minus, n, "incoming velocity")

    gap = ic.g(q)
    if abs(gap) > tol.boundary:
        raise ImpactError("configuration not on the boundary of %s, g=%.3e"
                          % (ic.label, gap))
    mu = constraint_matrix(cs, q)
    drift = float(np.max(np.abs(mu @ v_minus), initial=0.0))
    if drift > tol.constraint:
        raise ImpactError("incoming velocity not in D, |mu v| = %.3e" % drift)

    dg = ic.normal(q)
    rate = float(dg @ v_minus)
    if abs(rate) <= tol.grazing * np.linalg.norm(dg) * np.linalg.norm(v_minus):
        raise GrazingImpactError(ic.label, rate)
    if rate < 0.0:
        raise ImpactError("incoming velocity points into the admissible set")

    M = sys.M(q)
    kinetic = 0.5 * v_minus @ M @ v_minus
    v_seed, lam_seed = closed_form_jump(sys, cs, ic, q, v_minus)

    def residual(x):
        v, lam_bar, nu = x[:n], x[n], x[n + 1:]
        return np.concatenate([M @ (v - v_minus) + lam_bar * dg - mu.T @ nu,
                               [0.5 * v @ M @ v - kinetic],
                               mu @ v])

    def jacobian(x):
        v = x[:n]
        return np.block([[M, dg[:, None], -mu.T],
                         [(M @ v)[None, :], np.zeros((1, 1)), np.zeros((1, m))],
                         [mu, np.zeros((m, 1)), np.zeros((m, m))]])

    report = newton_solve(residual, jacobian,
                          np.concatenate([v_seed, [lam_seed], np.zeros(m)]),
                          tol.newton)
    v_plus = report.solution[:n].copy()
    lam_bar = float(report.solution[n])
    nu = report.solution[n + 1:].copy()

    if lam_bar < 0.0:
        raise InadmissibleImpactError("negative normal multiplier %.3e" % lam_bar,
                                      normal_multiplier=lam_bar)
    logger.debug("continuous jump on %s: lambda=%.6e, dg.v %.3e -> %.3e",
                 ic.label, lam_bar, rate, float(dg @ v_plus))
    return v_plus, lam_bar, nu
