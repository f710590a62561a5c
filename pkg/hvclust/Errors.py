class DomainError(ValueError):
    """ An argument lies outside the domain of the requested formula. """


class ConstraintError(DomainError):
    """ The cutoff chain ``0 < a*h_min <= a*h_min*b <= 1 <= b`` is violated. """


class QuadratureError(RuntimeError):
    """ Adaptive quadrature stopped before reaching the requested tolerance.

    Attributes:
        estimate (float):
            Best available estimate of the integral.
        error_bound (float):
            Absolute error estimate reported by the integrator.

    """

    def __init__(self, message, estimate=float('nan'), error_bound=float('nan')):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class ConsistencyError(RuntimeError):
    """ Two independent evaluations of the same quantity disagree. """


class NumericalWarning(UserWarning):
    pass


def check_interval(name, value, lo, hi, lo_open=False, hi_open=False):
    """ Raise a ``DomainError`` if ``value`` is outside ``[lo, hi]``.

    Args:
        name (str):
            Parameter name used in the message.
        value (float):
            The value to check.
        lo, hi (float):
            Interval end points.
        lo_open, hi_open (bool, optional):
            Exclude the corresponding end point. Defaults to ``False``.

    Returns:
        float: ``value`` converted to float.

    """

    value = float(value)
    below = value <= lo if lo_open else value < lo
    above = value >= hi if hi_open else value > hi

    if value != value or below or above:
        left = '(' if lo_open else '['
        right = ')' if hi_open else ']'
        raise DomainError(f'Value {name}={value} is outside allowed interval {left}{lo}, {hi}{right}')

    return value
