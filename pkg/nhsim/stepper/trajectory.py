"""
The discrete trajectory produced by the integrator.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .flags import PointFlags, IMPACT_POINT

__all__ = ("DiscreteTrajectory",)


@dataclass
class DiscreteTrajectory:
    """
    Time-ordered points of the discrete flow, impact points spliced in at
    their own times.

    Attributes:
        times         (array) t_k, strictly increasing
        points        (array) q_k, one row per point
        multipliers   (array) constraint multipliers attached to each
                      point, NaN rows for the two initial points
        energies      (array) discrete energy -D3 of the pair ending at
                      each point; the first point reuses the first pair
        residuals     (array) final Newton residual of the solve that
                      produced each point, NaN for the initial points
        flags         (array) PointFlags bitmask per point
        impacts       (list) the ImpactRecord of every impact, in order
        step          (float) nominal time step h
    """

    times: np.ndarray
    points: np.ndarray
    multipliers: np.ndarray
    energies: np.ndarray
    residuals: np.ndarray
    flags: np.ndarray
    impacts: List = field(default_factory=list)
    step: float = 0.0

    def __len__(self):
        return len(self.times)

    @property
    def impact_count(self):
        return len(self.impacts)

    @property
    def final_point(self):
        return self.points[-1]

    def point_flags(self, k):
        return PointFlags(self.flags[k])

    def impact_indices(self):
        """
        returns: the indices of the spliced impact points.
        """

        return np.flatnonzero(self.flags & IMPACT_POINT)

    def constraint_residuals(self, cs):
        """
        returns: ||mu_d(q_k, q_k+1)||_inf for every consecutive pair,
                 including the pairs around impact points.
        """

        residuals = []
        for k in range(len(self.times) - 1):
            value = cs.mu_d(self.points[k], self.points[k + 1])
            residuals.append(float(np.max(np.abs(value), initial=0.0)))
        return np.array(residuals)

    def max_gaps(self, inequalities):
        """
        returns: max over constraints of g(q_k), for every point.
        """

        return np.array([max(ic.g(q) for ic in inequalities)
                         for q in self.points])

    def energy_drift(self):
        """
        returns: max |E_k - E_0| of the discrete energy.
        """

        return float(np.max(np.abs(self.energies - self.energies[0])))
