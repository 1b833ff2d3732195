"""
Three-stage resolution of an impact detected inside a discrete step.

With q_im2, q_im1 the last two admissible points and h the length of the
window in which the boundary is crossed:

1. localize: find the impact point q_bar on the boundary and the fraction
   alpha of the window spent before reaching it, by a shortened step of
   length alpha h that carries the incoming discrete momentum;
2. jump: find the post-impact point q_i after the remaining (1 - alpha) h,
   the normal impulse and the multipliers of D, by balancing the discrete
   momenta across q_bar against the normal cone and matching the discrete
   energies of the two sub-steps;
3. resume: restart the discrete flow from the pair (q_bar, q_i).

Sign convention: with p_in = D2 L_d(q_im1, q_bar, alpha h) and
p_out = -D1 L_d(q_bar, q_i, (1 - alpha) h) the jump solves
p_out - p_in = -lambda_bar dg(q_bar) + mu(q_bar)' nu, lambda_bar >= 0,
so that an outward incoming velocity is reflected back into C.
"""

import logging

import numpy as np
from scipy.optimize import brentq

from ..errors import DegenerateImpactError, InadmissibleImpactError
from ..mechanics import as_vector, constraint_matrix, energy, project_velocity
from ..stepper import dla_step
from ..tolerances import Tolerances
from ..numerics import newton_solve
from .records import ImpactRecord

__all__ = ("impact_stage_localize", "impact_stage_jump",
           "impact_stage_resume", "resolve_impact")

logger = logging.getLogger(__name__)

# brentq accuracy on the seed fraction
SEED_XTOL = 1e-14


def _seed_fraction(ic, q_im1, ends):
    """
    Fraction along the first segment q_im1 -> end that crosses the
    boundary, or None.
    """

    for end in ends:
        if end is None or not ic.g(end) > 0.0:
            continue
        along = lambda a: ic.g(q_im1 + a * (end - q_im1))
        alpha = brentq(along, 0.0, 1.0, xtol=SEED_XTOL)
        return alpha, q_im1 + alpha * (end - q_im1)
    return None


def impact_stage_localize(sys, cs, Ld, ic, q_im2, q_im1, h, h_prev=None,
                          q_proposed=None, tolerances=None, full_output=False):
    """
    Locate the impact point.

    Solves for (q_bar, alpha, lambda):

        D2 L_d(q_im2, q_im1, h_prev) + D1 L_d(q_im1, q_bar, alpha h)
                                                  = mu(q_im1)' lambda
        g(q_bar) = 0
        mu_d(q_im1, q_bar) = 0

    arguments:
    - sys, cs, Ld    the system, its constraints and discrete Lagrangian
    - ic             the InequalityConstraint crossed in this window
    - q_im2, q_im1   the last two admissible points
    - h              length of the window
    - h_prev         step between q_im2 and q_im1, h when None
    - q_proposed     the violating point proposed by the discrete flow,
                     used to bracket the initial guess
    - tolerances     a Tolerances instance
    - full_output    also return the SolveReport

    returns: (q_bar, alpha, lambda) [, report]
    """

    n, m = sys.dimension, cs.m
    tol = tolerances or Tolerances()
    h_prev = h if h_prev is None else h_prev
    q_im2 = as_vector(q_im2, n, "q_im2")
    q_im1 = as_vector(q_im1, n, "q_im1")

    if ic.g(q_im1) >= -tol.boundary:
        # the impact happened at q_im1 itself
        raise DegenerateImpactError(0.0, tol.alpha_margin)

    mu = constraint_matrix(cs, q_im1)
    p_in = Ld.D2(q_im2, q_im1, h_prev)
    extrapolated = q_im1 + (h / h_prev) * (q_im1 - q_im2)

    seed = _seed_fraction(ic, q_im1, (extrapolated, q_proposed))
    if seed is None:
        g0, g1 = ic.g(q_im1), ic.g(extrapolated)
        alpha0 = g0 / (g0 - g1) if g1 != g0 else 0.5
        alpha0 = float(np.clip(alpha0, 0.01, 0.99))
        seed = alpha0, q_im1 + alpha0 * (extrapolated - q_im1)
    alpha0, q_bar0 = seed
    logger.debug("localize seed alpha=%.6f", alpha0)

    def residual(x):
        q_bar, alpha, lam = x[:n], x[n], x[n + 1:]
        if not alpha > 0.0:
            return np.full(n + 1 + m, np.inf)
        return np.concatenate([p_in + Ld.D1(q_im1, q_bar, alpha * h) - mu.T @ lam,
                               [ic.g(q_bar)],
                               cs.mu_d(q_im1, q_bar)])

    def jacobian(x):
        q_bar, alpha = x[:n], x[n]
        step = alpha * h
        _, J1 = cs.dmu_d(q_im1, q_bar)
        return np.block([
            [Ld.D1_q1(q_im1, q_bar, step), h * Ld.D1_h(q_im1, q_bar, step)[:, None], -mu.T],
            [ic.dg(q_bar)[None, :], np.zeros((1, 1)), np.zeros((1, m))],
            [J1, np.zeros((m, 1)), np.zeros((m, m))]])

    x0 = np.concatenate([q_bar0, [alpha0], np.zeros(m)])
    report = newton_solve(residual, jacobian, x0, tol.newton)
    q_bar = report.solution[:n].copy()
    alpha = float(report.solution[n])
    lam = report.solution[n + 1:].copy()

    if not tol.alpha_margin < alpha < 1.0 - tol.alpha_margin:
        raise DegenerateImpactError(alpha, tol.alpha_margin, q_bar, lam)

    if full_output:
        return q_bar, alpha, lam, report
    return q_bar, alpha, lam


def impact_stage_jump(sys, cs, Ld, ic, q_im1, q_bar, alpha, h,
                      tolerances=None, full_output=False):
    """
    Compute the post-impact point.

    Solves for (q_i, lambda_bar, nu):

        D2 L_d(q_im1, q_bar, alpha h) + D1 L_d(q_bar, q_i, (1 - alpha) h)
                                   = lambda_bar dg(q_bar) - mu(q_bar)' nu
        D3 L_d(q_im1, q_bar, alpha h) = D3 L_d(q_bar, q_i, (1 - alpha) h)
        mu_d(q_bar, q_i) = 0

    The initial guess reflects the incoming velocity, projected on D,
    with the closed-form impulse of the continuous jump. When the normal
    component of the incoming velocity vanishes the contact is grazing:
    lambda_bar is fixed to 0 and the energy equation is dropped.

    returns: (q_i, lambda_bar, nu) [, report, grazing]
    """

    n, m = sys.dimension, cs.m
    tol = tolerances or Tolerances()
    q_im1 = as_vector(q_im1, n, "q_im1")
    q_bar = as_vector(q_bar, n, "q_bar")
    h_in, h_out = alpha * h, (1.0 - alpha) * h

    p_in = Ld.D2(q_im1, q_bar, h_in)
    e_in = Ld.D3(q_im1, q_bar, h_in)
    dg = ic.normal(q_bar)
    mu = constraint_matrix(cs, q_bar)

    v_in = project_velocity(sys, cs, q_bar, sys.solve_mass(q_bar, p_in))
    w = project_velocity(sys, cs, q_bar, sys.solve_mass(q_bar, dg))
    rate = float(dg @ v_in)
    scale = np.linalg.norm(dg) * max(np.linalg.norm(v_in), np.finfo(float).tiny)
    grazing = abs(rate) <= tol.grazing * scale

    if grazing:
        logger.info("grazing contact with %s, dg.v = %.3e", ic.label, rate)

        def residual(x):
            q_i, nu = x[:n], x[n:]
            return np.concatenate([p_in + Ld.D1(q_bar, q_i, h_out) + mu.T @ nu,
                                   cs.mu_d(q_bar, q_i)])

        def jacobian(x):
            q_i = x[:n]
            _, J1 = cs.dmu_d(q_bar, q_i)
            return np.block([[Ld.D1_q1(q_bar, q_i, h_out), mu.T],
                             [J1, np.zeros((m, m))]])

        x0 = np.concatenate([q_bar + h_out * v_in, np.zeros(m)])
        report = newton_solve(residual, jacobian, x0, tol.newton)
        q_i, lam_bar, nu = report.solution[:n].copy(), 0.0, report.solution[n:].copy()
    else:
        if rate < 0.0:
            raise InadmissibleImpactError("incoming velocity points into C")

        def residual(x):
            q_i, lam_bar, nu = x[:n], x[n], x[n + 1:]
            return np.concatenate([p_in + Ld.D1(q_bar, q_i, h_out) - lam_bar * dg + mu.T @ nu,
                                   [e_in - Ld.D3(q_bar, q_i, h_out)],
                                   cs.mu_d(q_bar, q_i)])

        def jacobian(x):
            q_i = x[:n]
            _, J1 = cs.dmu_d(q_bar, q_i)
            return np.block([
                [Ld.D1_q1(q_bar, q_i, h_out), -dg[:, None], mu.T],
                [-Ld.D3_q1(q_bar, q_i, h_out)[None, :], np.zeros((1, 1)), np.zeros((1, m))],
                [J1, np.zeros((m, 1)), np.zeros((m, m))]])

        lam0 = 2.0 * rate / float(dg @ w)
        x0 = np.concatenate([q_bar + h_out * (v_in - lam0 * w), [lam0], np.zeros(m)])
        report = newton_solve(residual, jacobian, x0, tol.newton)
        q_i = report.solution[:n].copy()
        lam_bar = float(report.solution[n])
        nu = report.solution[n + 1:].copy()

    if lam_bar < 0.0:
        raise InadmissibleImpactError("negative normal multiplier %.3e" % lam_bar,
                                      normal_multiplier=lam_bar)
    gap = ic.g(q_i)
    if gap > tol.boundary:
        raise InadmissibleImpactError("post-impact point outside C, g=%.3e" % gap,
                                      normal_multiplier=lam_bar, gap=gap)

    if full_output:
        return q_i, lam_bar, nu, report, grazing
    return q_i, lam_bar, nu


def impact_stage_resume(sys, cs, Ld, q_bar, q_i, alpha, h, h_next=None,
                        tolerances=None, full_output=False):
    """
    First step of the discrete flow after the impact: the discrete
    Euler-Lagrange step from the pair (q_bar, q_i), whose spacing is
    (1 - alpha) h, to the next grid time h_next later (h when None).

    returns: (q_next, lambda) [, report]
    """

    tol = tolerances or Tolerances()
    h_next = h if h_next is None else h_next
    return dla_step(sys, cs, Ld, q_bar, q_i, h_next, h_prev=(1.0 - alpha) * h,
                    cfg=tol.newton, full_output=full_output)


def resolve_impact(sys, cs, Ld, ic, q_im2, q_im1, h_prev, window, h,
                   t_prev=0.0, step=0, q_proposed=None, tolerances=None):
    """
    Run the three stages for one impact.

    arguments:
    - sys, cs, Ld    the system, its constraints and discrete Lagrangian
    - ic             the InequalityConstraint crossed
    - q_im2, q_im1   the last two admissible points
    - h_prev         time between q_im2 and q_im1
    - window         length of the window containing the impact
    - h              nominal step, used for the resumed step
    - t_prev         time of q_im1
    - step           index of the integration step, for the record
    - q_proposed     the violating point proposed by the discrete flow
    - tolerances     a Tolerances instance

    returns: an ImpactRecord.
    """

    tol = tolerances or Tolerances()
    q_im2 = as_vector(q_im2, sys.dimension, "q_im2")
    q_im1 = as_vector(q_im1, sys.dimension, "q_im1")

    q_bar, alpha, lam_localize, r1 = impact_stage_localize(
            sys, cs, Ld, ic, q_im2, q_im1, window, h_prev, q_proposed, tol,
            full_output=True)
    q_i, lam_bar, nu, r2, grazing = impact_stage_jump(
            sys, cs, Ld, ic, q_im1, q_bar, alpha, window, tol, full_output=True)
    q_resume, lam_resume, r3 = impact_stage_resume(
            sys, cs, Ld, q_bar, q_i, alpha, window, h, tol, full_output=True)

    mismatch = abs(Ld.D3(q_im1, q_bar, alpha * window)
                   - Ld.D3(q_bar, q_i, (1.0 - alpha) * window))
    before = energy(sys, 0.5 * (q_im2 + q_im1), (q_im1 - q_im2) / h_prev)
    after = energy(sys, 0.5 * (q_i + q_resume), (q_resume - q_i) / h)

    record = ImpactRecord(label=ic.label, step=step,
                          t_bar=t_prev + alpha * window, alpha=alpha,
                          window=window, q_prev=q_im1, q_bar=q_bar,
                          q_post=q_i, q_resume=q_resume,
                          localize_multipliers=lam_localize,
                          normal_multiplier=lam_bar,
                          tangential_multipliers=nu,
                          resume_multipliers=lam_resume,
                          discrete_energy_residual=mismatch,
                          physical_energy_before=before,
                          physical_energy_after=after,
                          residuals=(r1.final_residual_norm,
                                     r2.final_residual_norm,
                                     r3.final_residual_norm),
                          grazing=grazing)

    logger.info("impact on %s at t=%.12g: alpha=%.6f, normal multiplier "
                "%.6e, energy change %.3e", ic.label, record.t_bar, alpha,
                lam_bar, record.physical_energy_change)
    return record
