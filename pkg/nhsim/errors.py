"""
Exceptions raised by the simulator.

Every exception keeps the context it was raised with as attributes, so
that callers (the command line front-end in particular) can report the
step index, the residual history or the offending configuration field
without parsing the message.
"""

__all__ = ("NHSimError", "DimensionError", "NonFiniteError",
           "MassMatrixError", "ConstraintRankError", "BoundaryGradientError",
           "ConvergenceError", "SingularJacobianError", "ImpactError",
           "DegenerateImpactError", "InadmissibleImpactError",
           "GrazingImpactError", "SimultaneousImpactError",
           "ChainedImpactError", "BracketError", "ConfigError",
           "RefusedScenarioError")


class NHSimError(Exception):
    """
    Base class for every error raised by the simulator.
    """

    def __init__(self, message, step=None):
        """
        Constructor

        arguments:
        - message        the human readable description
        - step           the integration step index the error refers to,
                         None when not raised from inside an integration
        """

        self.message = message
        self.step = step

        if step is not None:
            message = "step %d: %s" % (step, message)
        super(NHSimError, self).__init__(message)

    def at_step(self, step):
        """
        Attach a step index to an error raised below the integration
        loop and return the error itself, ready to be re-raised.
        """

        self.step = step
        self.args = ("step %d: %s" % (step, self.message),)
        return self


class DimensionError(NHSimError):
    """
    A vector or matrix does not have the size of the configuration space.
    """

    def __init__(self, what, expected, got):
        self.what = what
        self.expected = expected
        self.got = got
        super(DimensionError, self).__init__(
                "%s: expected shape %s, got %s" % (what, expected, got))


class NonFiniteError(NHSimError):
    """
    A NaN or Inf reached an operation that only admits finite input.
    """

    def __init__(self, what):
        self.what = what
        super(NonFiniteError, self).__init__("%s contains NaN or Inf" % what)


class MassMatrixError(NHSimError):
    """
    The mass matrix is not symmetric positive definite at some q.
    """

    def __init__(self, q, reason):
        self.q = q
        self.reason = reason
        super(MassMatrixError, self).__init__(
                "mass matrix not symmetric positive definite at q=%s: %s"
                % (list(q), reason))


class ConstraintRankError(NHSimError):
    """
    The constraint one-forms are linearly dependent at q.
    """

    def __init__(self, q, rank, m):
        self.q = q
        self.rank = rank
        self.m = m
        super(ConstraintRankError, self).__init__(
                "constraint matrix has rank %d < %d at q=%s"
                % (rank, m, list(q)))


class BoundaryGradientError(NHSimError):
    """
    The gap gradient vanishes on the boundary, the normal cone is
    undefined there.
    """

    def __init__(self, label, q):
        self.label = label
        self.q = q
        super(BoundaryGradientError, self).__init__(
                "gap gradient of %s vanishes on the boundary at q=%s"
                % (label, list(q)))


class ConvergenceError(NHSimError):
    """
    Newton iteration failure.
    """

    def __init__(self, reason, iterations, residual_history, step=None):
        """
        Constructor

        arguments:
        - reason             short description of the failure
        - iterations         number of iterations performed
        - residual_history   list of residual infinity norms, one per
                             iterate, starting from the initial guess
        """

        self.reason = reason
        self.iterations = iterations
        self.residual_history = list(residual_history)

        last = self.residual_history[-1] if self.residual_history else float("nan")
        super(ConvergenceError, self).__init__(
                "Newton failed after %d iterations (%s); last residual %.3e"
                % (iterations, reason, last), step)


class SingularJacobianError(ConvergenceError):
    """
    The Newton Jacobian could not be factorised or is too badly
    conditioned to trust the step.
    """

    def __init__(self, condition, iterations, residual_history, step=None):
        self.condition = condition
        super(SingularJacobianError, self).__init__(
                "singular Jacobian, condition estimate %.3e" % condition,
                iterations, residual_history, step)


class ImpactError(NHSimError):
    """
    Base class for failures of the impact resolution.
    """


class DegenerateImpactError(ImpactError):
    """
    The impact fraction fell outside the open interval the scheme admits.
    q_bar and multipliers hold the located boundary point, when there is one.
    """

    def __init__(self, alpha, margin, q_bar=None, multipliers=None):
        self.alpha = alpha
        self.margin = margin
        self.q_bar = q_bar
        self.multipliers = multipliers
        super(DegenerateImpactError, self).__init__(
                "impact fraction alpha=%.6g outside (%g, 1 - %g)"
                % (alpha, margin, margin))


class InadmissibleImpactError(ImpactError):
    """
    The impact equations converged to a root that is not admissible:
    negative normal multiplier or a post-impact point outside C.
    """

    def __init__(self, reason, normal_multiplier=None, gap=None):
        self.reason = reason
        self.normal_multiplier = normal_multiplier
        self.gap = gap
        super(InadmissibleImpactError, self).__init__(
                "inadmissible impact: %s" % reason)


class GrazingImpactError(ImpactError):
    """
    Boundary contact with vanishing normal velocity.
    """

    def __init__(self, label, normal_velocity):
        self.label = label
        self.normal_velocity = normal_velocity
        super(GrazingImpactError, self).__init__(
                "grazing contact with %s, dg.v = %.3e"
                % (label, normal_velocity))


class SimultaneousImpactError(ImpactError):
    """
    More than one inequality constraint violated in the same step.
    """

    def __init__(self, labels):
        self.labels = list(labels)
        super(SimultaneousImpactError, self).__init__(
                "constraints %s violated in the same step"
                % ", ".join(self.labels))


class ChainedImpactError(ImpactError):
    """
    Too many consecutive impacts without an interior step in between.
    """

    def __init__(self, count):
        self.count = count
        super(ChainedImpactError, self).__init__(
                "%d chained impacts within one step" % count)


class BracketError(NHSimError):
    """
    The bisection interval does not bracket a sign change.
    """

    def __init__(self, t_lo, t_hi, g_lo, g_hi):
        self.t_lo = t_lo
        self.t_hi = t_hi
        super(BracketError, self).__init__(
                "no sign change on [%g, %g]: g=%.3e, %.3e"
                % (t_lo, t_hi, g_lo, g_hi))


class ConfigError(NHSimError):
    """
    Malformed or invalid run configuration.
    """

    def __init__(self, field, message):
        self.field = field
        super(ConfigError, self).__init__("config field '%s': %s"
                                          % (field, message))


class RefusedScenarioError(NHSimError):
    """
    A scenario the requested study does not apply to.
    """
