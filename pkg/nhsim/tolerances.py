"""
Tolerances shared by the discrete integrator, the impact resolver and
the continuous oracle.
"""

from dataclasses import dataclass, field

from .numerics import NewtonConfig

__all__ = ("Tolerances",)


@dataclass(frozen=True)
class Tolerances:
    """
    Attributes:
        newton               (NewtonConfig) parameters of every implicit
                             solve
        boundary             (float) |g| <= boundary counts as on the
                             boundary, g > boundary as a violation
        constraint           (float) accepted size of mu_d(q0, q1) for an
                             initial pair, and of mu(q) v for a velocity
                             handed to the continuous jump
        alpha_margin         (float) impact fractions must lie in
                             (alpha_margin, 1 - alpha_margin)
        grazing              (float) relative size of dg.v under which a
                             contact is treated as grazing
        max_chained_impacts  (int) impacts allowed within one step
    """

    newton: NewtonConfig = field(default_factory=NewtonConfig)
    boundary: float = 1e-9
    constraint: float = 1e-8
    alpha_margin: float = 1e-6
    grazing: float = 1e-9
    max_chained_impacts: int = 3

    def __post_init__(self):
        if not self.boundary > 0:
            raise ValueError("boundary tolerance must be positive")
        if not 0 < self.alpha_margin < 0.5:
            raise ValueError("alpha_margin must lie in (0, 0.5)")
        if self.max_chained_impacts < 1:
            raise ValueError("max_chained_impacts must be at least 1")
