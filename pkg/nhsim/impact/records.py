"""
Record of one resolved discrete impact.
"""

from dataclasses import dataclass, field, asdict

import numpy as np

from ..errors import InadmissibleImpactError

__all__ = ("ImpactRecord",)


@dataclass(frozen=True)
class ImpactRecord:
    """
    Attributes:
        label                       (str) the inequality constraint hit
        step                        (int) index of the integration step
                                    in which the impact was detected
        t_bar                       (float) impact time
        alpha                       (float) fraction of the window before
                                    the impact
        window                      (float) length of the localisation
                                    window, h or the doubled window
        q_prev                      (array) last point before the impact
        q_bar                       (array) the impact point on the boundary
        q_post                      (array) first point after the impact
        q_resume                    (array) first point of the resumed flow
        localize_multipliers        (array) multipliers of the shortened
                                    step that reaches the boundary
        normal_multiplier           (float) magnitude of the normal impulse
        tangential_multipliers      (array) multipliers of D at q_bar
        resume_multipliers          (array) multipliers of the resumed step
        discrete_energy_residual    (float) |D3 before - D3 after|
        physical_energy_before      (float) E_L from the incoming discrete
                                    velocity
        physical_energy_after       (float) E_L from the outgoing discrete
                                    velocity
        residuals                   (tuple) final Newton residuals of the
                                    three stages
        grazing                     (bool) the normal impulse was fixed to 0
        chained                     (bool) the resumed point violated a
                                    constraint and a further impact followed
    """

    label: str
    step: int
    t_bar: float
    alpha: float
    window: float
    q_prev: np.ndarray
    q_bar: np.ndarray
    q_post: np.ndarray
    q_resume: np.ndarray
    localize_multipliers: np.ndarray
    normal_multiplier: float
    tangential_multipliers: np.ndarray
    resume_multipliers: np.ndarray
    discrete_energy_residual: float
    physical_energy_before: float
    physical_energy_after: float
    residuals: tuple = field(default=(0.0, 0.0, 0.0))
    grazing: bool = False
    chained: bool = False

    @property
    def physical_energy_change(self):
        return self.physical_energy_after - self.physical_energy_before

    def validate(self, ic, boundary_tolerance, residual_tolerance):
        """
        Check the record against the admissibility conditions of an
        impact and raise InadmissibleImpactError on the first failure.

        arguments:
        - ic                    the InequalityConstraint that was hit
        - boundary_tolerance    accepted |g(q_bar)| and g(q_post)
        - residual_tolerance    accepted stage residuals and D3 mismatch
        """

        gap = ic.g(self.q_bar)
        if abs(gap) > boundary_tolerance:
            raise InadmissibleImpactError("impact point off the boundary",
                                          gap=gap)
        if not 0.0 < self.alpha < 1.0:
            raise InadmissibleImpactError("alpha=%g outside (0, 1)" % self.alpha)
        if self.normal_multiplier < 0.0:
            raise InadmissibleImpactError(
                    "negative normal multiplier %.3e" % self.normal_multiplier,
                    normal_multiplier=self.normal_multiplier)
        gap = ic.g(self.q_post)
        if gap > boundary_tolerance:
            raise InadmissibleImpactError("post-impact point outside C", gap=gap)
        if not self.chained:
            gap = ic.g(self.q_resume)
            if gap > boundary_tolerance:
                raise InadmissibleImpactError("resumed point outside C", gap=gap)
        if not self.grazing and self.discrete_energy_residual > residual_tolerance:
            raise InadmissibleImpactError(
                    "discrete energy mismatch %.3e" % self.discrete_energy_residual)
        if max(self.residuals) > residual_tolerance:
            raise InadmissibleImpactError(
                    "stage residuals %s above tolerance" % (self.residuals,))

    def to_dict(self):
        """
        returns: a JSON-friendly dictionary of the record.
        """

        record = {}
        for key, value in asdict(self).items():
            if isinstance(value, np.ndarray):
                value = value.tolist()
            elif isinstance(value, tuple):
                value = [float(v) for v in value]
            elif isinstance(value, (np.floating, np.integer, np.bool_)):
                value = value.item()
            record[key] = value
        record["physical_energy_change"] = float(self.physical_energy_change)
        return record
