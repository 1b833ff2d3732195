"""
Damped Newton solver and finite-difference derivatives.

All the implicit systems of the simulator (the discrete step, the three
impact stages and the continuous jump) are small dense square systems and
are routed through newton_solve.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ..errors import ConvergenceError, SingularJacobianError, NonFiniteError

__all__ = ("NewtonConfig", "SolveReport", "newton_solve", "fd_jacobian",
           "fd_step")

logger = logging.getLogger(__name__)

# Armijo sufficient decrease coefficient on 0.5*||F||^2
ARMIJO_COEFF = 1e-4
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class NewtonConfig:
    """
    Newton iteration parameters.

    Attributes:
        residual_tolerance  (float) stop when ||F||_inf <= this
        max_iterations      (int) iterations before giving up
        damping             (float) backtracking factor in (0, 1)
        min_step            (float) smallest backtracking multiplier
        max_condition       (float) Jacobians above this condition
                            estimate are treated as singular
    """

    residual_tolerance: float = 1e-10
    max_iterations: int = 50
    damping: float = 0.5
    min_step: float = 1e-8
    max_condition: float = MAX_CONDITION

    def __post_init__(self):
        if not self.residual_tolerance > 0:
            raise ValueError("residual_tolerance must be positive")
        if not 0 < self.damping < 1:
            raise ValueError("damping must lie in (0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not 0 < self.min_step <= 1:
            raise ValueError("min_step must lie in (0, 1]")


@dataclass(frozen=True)
class SolveReport:
    """
    Outcome of a Newton solve.

    Attributes:
        solution             (array) last iterate
        final_residual_norm  (float) ||F(solution)||_inf
        iterations           (int) number of Newton steps taken
        converged            (bool) final_residual_norm <= tolerance
        residual_history     (tuple) ||F||_inf of every iterate
    """

    solution: np.ndarray
    final_residual_norm: float
    iterations: int
    converged: bool
    residual_history: tuple = field(default=())


def fd_step(x):
    """
    Central difference step per coordinate: cube root of the machine
    epsilon scaled by the coordinate magnitude.
    """

    return np.cbrt(np.finfo(float).eps) * np.maximum(1.0, np.abs(x))


def fd_jacobian(f, x):
    """
    Central-difference derivative of f at x.

    arguments:
    - f     function of a 1-d array returning a scalar or an array of
            any shape
    - x     the 1-d evaluation point

    returns: an array of shape f(x).shape + (len(x),); entry [..., j] is
             the derivative with respect to x[j].
    """

    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise NonFiniteError("finite difference point")

    steps = fd_step(x)
    columns = []
    for j, step in enumerate(steps):
        forward = x.copy()
        backward = x.copy()
        forward[j] += step
        backward[j] -= step
        # the effectively representable step
        width = forward[j] - backward[j]
        f_plus = np.asarray(f(forward), dtype=float)
        f_minus = np.asarray(f(backward), dtype=float)
        if not (np.all(np.isfinite(f_plus)) and np.all(np.isfinite(f_minus))):
            raise NonFiniteError("function value near x[%d]" % j)
        columns.append((f_plus - f_minus) / width)

    if not columns:
        shape = np.shape(f(x))
        return np.zeros(shape + (0,))
    return np.stack(columns, axis=-1)


def _residual(residual, x):
    value = np.atleast_1d(np.asarray(residual(x), dtype=float))
    return value


def newton_solve(residual, jacobian, x0, cfg=None, raise_on_failure=True):
    """
    Solve residual(x) = 0 by Newton's method with Armijo backtracking.

    arguments:
    - residual          function x -> F(x), 1-d array of size len(x)
    - jacobian          function x -> dF/dx (square matrix) or None for
                        the central-difference fallback
    - x0                initial guess
    - cfg               a NewtonConfig, defaults when None
    - raise_on_failure  raise ConvergenceError instead of returning an
                        unconverged report

    returns: a SolveReport.
    """

    cfg = cfg or NewtonConfig()
    if jacobian is None:
        jacobian = lambda x: fd_jacobian(residual, x)

    x = np.atleast_1d(np.array(x0, dtype=float, copy=True))
    F = _residual(residual, x)
    if F.shape != x.shape:
        raise ValueError("residual has %d components for %d unknowns"
                         % (F.size, x.size))

    history = []
    iterations = 0
    while True:
        if not np.all(np.isfinite(F)):
            raise ConvergenceError("non-finite residual", iterations, history)

        norm = float(np.max(np.abs(F))) if F.size else 0.0
        history.append(norm)
        logger.debug("newton iteration %d: |F| = %.3e", iterations, norm)

        if norm <= cfg.residual_tolerance:
            return SolveReport(x, norm, iterations, True, tuple(history))

        if iterations >= cfg.max_iterations:
            if raise_on_failure:
                raise ConvergenceError("maximum iterations reached",
                                       iterations, history)
            return SolveReport(x, norm, iterations, False, tuple(history))

        J = np.atleast_2d(np.asarray(jacobian(x), dtype=float))
        if J.shape != (x.size, x.size):
            raise ValueError("Jacobian shape %s for %d unknowns"
                             % (J.shape, x.size))
        if not np.all(np.isfinite(J)):
            raise ConvergenceError("non-finite Jacobian", iterations, history)

        condition = np.linalg.cond(J)
        if not np.isfinite(condition) or condition > cfg.max_condition:
            raise SingularJacobianError(condition, iterations, history)

        delta = scipy.linalg.solve(J, -F)

        # Armijo backtracking on 0.5*||F||^2
        merit = float(F @ F)
        t = 1.0
        while True:
            trial = x + t * delta
            F_trial = _residual(residual, trial)
            if (np.all(np.isfinite(F_trial)) and
                    float(F_trial @ F_trial) <= (1.0 - 2.0 * ARMIJO_COEFF * t) * merit):
                break
            t *= cfg.damping
            if t < cfg.min_step:
                raise ConvergenceError("line search stalled", iterations + 1,
                                       history)

        x = trial
        F = F_trial
        iterations += 1
