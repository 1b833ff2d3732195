"""
Discrete nonholonomic flow with impacts: the driver loop that strings
the discrete steps and the impact resolutions into a trajectory.
"""

import logging
from dataclasses import replace

import numpy as np

from .errors import (NHSimError, ChainedImpactError, DegenerateImpactError,
                     ImpactError, SimultaneousImpactError)
from .mechanics import as_vector
from .impact import resolve_impact
from .stepper import (DiscreteTrajectory, dla_step, discrete_energy,
                      IMPACT_POINT, POST_IMPACT, RESUMED, CHAINED, GRAZING,
                      TOUCH_WINDOW)
from .tolerances import Tolerances

__all__ = ("integrate", "violated_constraints")

logger = logging.getLogger(__name__)


def violated_constraints(inequalities, q, tolerance):
    """
    returns: the inequality constraints with g(q) > tolerance.
    """

    return [ic for ic in inequalities if ic.g(q) > tolerance]


class _TrajectoryBuilder:
    '''
    Growing lists of points and per-point diagnostics.
    '''

    def __init__(self, m):
        self.m = m
        self.times = []
        self.points = []
        self.multipliers = []
        self.residuals = []
        self.flags = []

    def append(self, t, q, multipliers=None, residual=np.nan, flags=0):
        if multipliers is None:
            multipliers = np.full(self.m, np.nan)
        self.times.append(float(t))
        self.points.append(np.array(q, dtype=float))
        self.multipliers.append(np.array(multipliers, dtype=float))
        self.residuals.append(float(residual))
        self.flags.append(int(flags))

    def pop(self):
        return (self.times.pop(), self.points.pop(), self.multipliers.pop(),
                self.residuals.pop(), self.flags.pop())

    def build(self, Ld, impacts, h, t_end):
        keep = [k for k, t in enumerate(self.times) if t <= t_end + 0.5 * h]
        times = np.array([self.times[k] for k in keep])
        points = np.array([self.points[k] for k in keep])

        energies = np.empty(len(keep))
        for k in range(1, len(keep)):
            energies[k] = discrete_energy(Ld, points[k - 1], points[k],
                                          times[k] - times[k - 1])
        energies[0] = energies[1]

        return DiscreteTrajectory(
                times=times,
                points=points,
                multipliers=np.array([self.multipliers[k] for k in keep]).reshape(len(keep), self.m),
                energies=energies,
                residuals=np.array([self.residuals[k] for k in keep]),
                flags=np.array([self.flags[k] for k in keep], dtype=np.int64),
                impacts=impacts,
                step=h)


def integrate(sys, cs, Ld, inequalities, q0, q1, h, N, tolerances=None):
    """
    Integrate the discrete flow with impacts over N steps of length h.

    arguments:
    - sys            the MechanicalSystem
    - cs             the ConstraintSet
    - Ld             the DiscreteLagrangian
    - inequalities   list of InequalityConstraint
    - q0, q1         initial pair, admissible and in D_d
    - h              time step
    - N              number of steps, the trajectory ends at t = N h
    - tolerances     a Tolerances instance

    returns: a DiscreteTrajectory.
    """

    tol = tolerances or Tolerances()
    n, m = sys.dimension, cs.m
    q0 = as_vector(q0, n, "q0")
    q1 = as_vector(q1, n, "q1")
    if not h > 0:
        raise ValueError("time step must be positive, got %g" % h)
    if int(N) < 1:
        raise ValueError("number of steps must be at least 1, got %s" % N)

    for q, name in ((q0, "q0"), (q1, "q1")):
        bad = violated_constraints(inequalities, q, tol.boundary)
        if bad:
            raise ValueError("%s violates %s" % (name, ", ".join(ic.label for ic in bad)))
    drift = float(np.max(np.abs(cs.mu_d(q0, q1)), initial=0.0))
    if drift > tol.constraint:
        raise ValueError("initial pair not in D_d, |mu_d| = %.3e" % drift)

    t_end = N * h
    traj = _TrajectoryBuilder(m)
    traj.append(0.0, q0)
    traj.append(h, q1)
    impacts = []
    step = 1

    logger.info("integrating %s over %d steps of %g", sys.name, N, h)
    while traj.times[-1] < t_end - 0.5 * h:
        step += 1
        q_prev, q_curr = traj.points[-2], traj.points[-1]
        try:
            # the last pair is always one nominal step apart here
            q_next, lam, report = dla_step(sys, cs, Ld, q_prev, q_curr, h,
                                           h, cfg=tol.newton,
                                           full_output=True)
            hit = violated_constraints(inequalities, q_next, tol.boundary)
            if not hit:
                traj.append(traj.times[-1] + h, q_next, lam,
                            report.final_residual_norm)
                continue
            _impact(sys, cs, Ld, inequalities, traj, impacts, hit, q_next,
                    h, step, tol)
        except NHSimError as error:
            raise error.at_step(step)

    logger.info("%s: %d points, %d impacts", sys.name, len(traj.times),
                len(impacts))
    return traj.build(Ld, impacts, h, t_end)


def _impact(sys, cs, Ld, inequalities, traj, impacts, hit, q_proposed, h,
            step, tol):
    for chain in range(tol.max_chained_impacts + 1):
        if len(hit) > 1:
            raise SimultaneousImpactError([ic.label for ic in hit])
        if chain == tol.max_chained_impacts:
            raise ChainedImpactError(chain + 1)
        ic = hit[0]

        flags = IMPACT_POINT | (CHAINED if chain else 0)
        window = h
        if ic.g(traj.points[-1]) >= -tol.boundary:
            # the current point touches the boundary, localise the impact
            # over the window that starts one point earlier
            if len(traj.points) < 3:
                raise ImpactError("impact at the initial point, no earlier "
                                  "pair to localise it from")
            t_touch = traj.pop()[0]
            window = t_touch - traj.times[-1] + h
            flags |= TOUCH_WINDOW
            logger.debug("point at t=%.12g touches %s, doubled window %g",
                         t_touch, ic.label, window)

        t_prev = traj.times[-1]
        try:
            record = resolve_impact(sys, cs, Ld, ic, traj.points[-2],
                                    traj.points[-1],
                                    t_prev - traj.times[-2], window, h,
                                    t_prev=t_prev, step=step,
                                    q_proposed=q_proposed, tolerances=tol)
        except DegenerateImpactError as error:
            if (chain or flags & TOUCH_WINDOW or error.q_bar is None
                    or error.alpha < 1.0 - error.margin):
                raise
            # the proposal overshoots by less than the margin: keep the
            # boundary point as the grid point, the next step localises
            # the impact over the doubled window
            logger.debug("impact on %s at the end of the step, alpha=%.9f",
                         ic.label, error.alpha)
            traj.append(t_prev + h, error.q_bar, error.multipliers,
                        flags=TOUCH_WINDOW)
            return
        if record.grazing:
            flags |= GRAZING

        traj.append(record.t_bar, record.q_bar, record.localize_multipliers,
                    record.residuals[0], flags)
        traj.append(t_prev + window, record.q_post,
                    record.tangential_multipliers, record.residuals[1],
                    POST_IMPACT)

        hit = violated_constraints(inequalities, record.q_resume, tol.boundary)
        if not hit:
            record.validate(ic, tol.boundary, 10.0 * tol.newton.residual_tolerance)
            impacts.append(record)
            traj.append(t_prev + window + h, record.q_resume,
                        record.resume_multipliers, record.residuals[2],
                        RESUMED)
            return

        record = replace(record, chained=True)
        record.validate(ic, tol.boundary, 10.0 * tol.newton.residual_tolerance)
        impacts.append(record)
        q_proposed = record.q_resume
        logger.info("resumed point violates %s, chained impact",
                    ", ".join(c.label for c in hit))
