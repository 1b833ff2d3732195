"""
Reference continuous integrator for the nonholonomic equations with
impacts.

Between impacts the state (q, v) follows the Lagrange-d'Alembert
equations, written as an ODE by differentiating the constraints once:

    [ M    -mu' ] [ a      ]   [ forcing         ]
    [ mu    0   ] [ lambda ] = [ -(dmu . v) v    ]

and is advanced by classical RK4. A sign change of a gap function over a
step is located by bisection on the RK4 substep, the continuous jump is
applied at the located state and the integration resumes.
"""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
import scipy.linalg

from ..errors import BracketError, NHSimError, SingularJacobianError
from ..impact import continuous_jump
from ..mechanics import as_vector, constraint_matrix, energy, project_velocity
from ..tolerances import Tolerances

__all__ = ("ContinuousState", "JumpEvent", "ContinuousTrajectory",
           "lda_acceleration", "rk4_step", "locate_impact",
           "integrate_continuous")

logger = logging.getLogger(__name__)

LOCATE_TOLERANCE = 1e-12
LOCATE_INTERVAL = 1e-14
LOCATE_MAX_ITERATIONS = 200


@dataclass(frozen=True)
class ContinuousState:
    """
    Attributes:
        t   (float) time
        q   (array) configuration
        v   (array) velocity
    """

    t: float
    q: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class JumpEvent:
    """
    A located impact of the continuous flow.
    """

    t: float
    label: str
    q: np.ndarray
    v_minus: np.ndarray
    v_plus: np.ndarray
    normal_multiplier: float
    tangential_multipliers: np.ndarray
    energy_before: float
    energy_after: float


@dataclass
class ContinuousTrajectory:
    """
    Attributes:
        times                  (array) sample times, one per RK4 step and
                               one per located impact
        points                 (array) configurations
        velocities             (array) velocities, post-impact at impacts
        events                 (list) JumpEvent per impact
        max_constraint_drift   (float) max ||mu(q) v||_inf over the samples
    """

    times: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    events: List = field(default_factory=list)
    max_constraint_drift: float = 0.0

    @property
    def final_state(self):
        return ContinuousState(self.times[-1], self.points[-1], self.velocities[-1])

    def energies(self, sys):
        return np.array([energy(sys, q, v) for q, v in zip(self.points, self.velocities)])


def _forcing(sys, q, v):
    force = -sys.dV(q)
    if not sys.constant_mass:
        dM = sys.dM(q)
        force -= np.einsum("ijk,j,k->i", dM, v, v)
        force += 0.5 * np.einsum("jki,j,k->i", dM, v, v)
    return force


def lda_acceleration(sys, cs, q, v):
    """
    Acceleration and multipliers of the Lagrange-d'Alembert equations.

    arguments:
    - sys   the MechanicalSystem
    - cs    the ConstraintSet
    - q     configuration
    - v     velocity, in D_q

    returns: (a, lambda)
    """

    n, m = sys.dimension, cs.m
    q = as_vector(q, n, "configuration")
    v = as_vector(v, n, "velocity")
    M = sys.M(q)
    mu = constraint_matrix(cs, q)

    if m == 0:
        return sys.solve_mass(q, _forcing(sys, q, v)), np.zeros(0)

    saddle = np.block([[M, -mu.T], [mu, np.zeros((m, m))]])
    rhs = np.concatenate([_forcing(sys, q, v),
                          -np.einsum("aij,i,j->a", cs.dmu(q), v, v)])
    try:
        solution = scipy.linalg.solve(saddle, rhs)
    except np.linalg.LinAlgError:
        raise SingularJacobianError(np.inf, 0, [])
    return solution[:n], solution[n:]


def rk4_step(sys, cs, q, v, dt):
    """
    One classical Runge-Kutta step of the first-order system
    (q, v)' = (v, a(q, v)).

    returns: (q, v) after dt.
    """

    def f(q, v):
        return v, lda_acceleration(sys, cs, q, v)[0]

    k1q, k1v = f(q, v)
    k2q, k2v = f(q + 0.5 * dt * k1q, v + 0.5 * dt * k1v)
    k3q, k3v = f(q + 0.5 * dt * k2q, v + 0.5 * dt * k2v)
    k4q, k4v = f(q + dt * k3q, v + dt * k3v)
    return (q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
            v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v))


def locate_impact(gap_of_time, t_lo, t_hi, tolerance=LOCATE_TOLERANCE,
                  interval=LOCATE_INTERVAL):
    """
    Bisection for the crossing time of a gap function.

    arguments:
    - gap_of_time   function t -> g along the flow
    - t_lo, t_hi    bracket with g(t_lo) < 0 < g(t_hi)
    - tolerance     stop when |g| <= tolerance
    - interval      or when the bracket is shorter than this

    returns: the crossing time.
    """

    g_lo, g_hi = gap_of_time(t_lo), gap_of_time(t_hi)
    if not (g_lo < 0.0 < g_hi):
        raise BracketError(t_lo, t_hi, g_lo, g_hi)

    for _ in range(LOCATE_MAX_ITERATIONS):
        t_mid = 0.5 * (t_lo + t_hi)
        g_mid = gap_of_time(t_mid)
        if abs(g_mid) <= tolerance:
            return t_mid
        if g_mid < 0.0:
            t_lo = t_mid
        else:
            t_hi = t_mid
        if t_hi - t_lo <= interval:
            break
    return t_lo


def integrate_continuous(sys, cs, inequalities, state0, t_end, h_fine,
                         tolerances=None, projection=False):
    """
    Integrate the continuous flow with impacts from state0 to t_end.

    arguments:
    - sys            the MechanicalSystem
    - cs             the ConstraintSet
    - inequalities   list of InequalityConstraint
    - state0         the initial ContinuousState, admissible with v in D
    - t_end          final time
    - h_fine         RK4 step
    - tolerances     a Tolerances instance, for the jumps
    - projection     project the velocity back onto D after every step

    returns: a ContinuousTrajectory.
    """

    tol = tolerances or Tolerances()
    n = sys.dimension
    if not h_fine > 0:
        raise ValueError("RK4 step must be positive, got %g" % h_fine)

    t = float(state0.t)
    q = as_vector(state0.q, n, "initial configuration")
    v = as_vector(state0.v, n, "initial velocity")
    times, points, velocities, events = [t], [q], [v], []

    def record(t, q, v):
        nonlocal drift
        times.append(t)
        points.append(q)
        velocities.append(v)
        drift = max(drift, float(np.max(np.abs(cs.mu(q) @ v), initial=0.0)))

    def jump(t_hit, q_hit, v_hit, ic):
        # remove the RK4 drift off D before the jump
        v_hit = project_velocity(sys, cs, q_hit, v_hit)
        try:
            v_plus, lam_bar, nu = continuous_jump(sys, cs, ic, q_hit, v_hit, tol)
        except NHSimError:
            logger.error("continuous jump failed at t=%.12g on %s", t_hit, ic.label)
            raise
        event = JumpEvent(t_hit, ic.label, q_hit, v_hit, v_plus, lam_bar, nu,
                          energy(sys, q_hit, v_hit), energy(sys, q_hit, v_plus))
        events.append(event)
        logger.info("continuous impact on %s at t=%.12g, lambda=%.6e",
                    ic.label, t_hit, lam_bar)
        return v_plus

    drift = float(np.max(np.abs(cs.mu(q) @ v), initial=0.0))
    while t < t_end - 1e-12 * max(1.0, abs(t_end)):
        touching = [ic for ic in inequalities
                    if abs(ic.g(q)) <= tol.boundary and ic.dg(q) @ v > 0.0]
        if touching:
            # the last sample sits on the boundary moving outwards
            v = jump(t, q, v, touching[0])
            velocities[-1] = v

        dt = min(h_fine, t_end - t)
        q_new, v_new = rk4_step(sys, cs, q, v, dt)

        crossings = []
        for ic in inequalities:
            if ic.g(q) < 0.0 < ic.g(q_new):
                tau = locate_impact(lambda s: ic.g(rk4_step(sys, cs, q, v, s)[0]),
                                    0.0, dt)
                crossings.append((tau, ic))

        if crossings:
            tau, ic = min(crossings, key=lambda c: c[0])
            q_hit, v_hit = rk4_step(sys, cs, q, v, tau)
            t, q, v = t + tau, q_hit, jump(t + tau, q_hit, v_hit, ic)
        else:
            t, q, v = t + dt, q_new, v_new

        if projection:
            v = project_velocity(sys, cs, q, v)
        record(t, q, v)

    logger.debug("continuous flow to t=%g: %d samples, %d impacts, drift %.3e",
                 t_end, len(times), len(events), drift)
    return ContinuousTrajectory(np.array(times), np.array(points),
                                np.array(velocities), events, drift)
