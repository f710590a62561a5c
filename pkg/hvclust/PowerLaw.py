""" Power-law hidden variables, their mean, cutoffs and extremes.

The hidden-variable density is ``rho(h) ~ h**(-tau)``. Three supports are
used side by side: ``[h_min, N]`` for the mean ``<h>``, ``[h_min, h_c]`` for
graph simulation and the clustering integrals, and ``[h_min, inf)`` for the
expected maximum of ``N`` draws.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from hvclust.Errors import ConstraintError, DomainError, check_interval


TAU_EPS = 1.0e-6
CHAIN_RTOL = 1.0e-12

CUTOFF_CONVENTIONS = ('size-dependent', 'asymptotic')


@dataclass(frozen=True)
class PowerLawModel:
    """ Power-law model with exponent ``tau`` in ``[2, 3]``.

    Attributes:
        tau (float):
            Exponent of the density. Values within ``1e-6`` of 2 or 3 use
            limit forms where a formula has a removable singularity.
        h_min (float):
            Lower end of the support, positive.
        n_vertices (int):
            Number of vertices ``N``. Floats such as ``1e6`` are accepted
            if integral.

    """

    tau: float
    h_min: float
    n_vertices: int

    def __post_init__(self):
        object.__setattr__(self, 'tau', check_interval('tau', self.tau, 2.0, 3.0))

        h_min = float(self.h_min)
        if not (h_min > 0.0 and math.isfinite(h_min)):
            raise DomainError(f'Value h_min={h_min} is outside allowed interval (0, inf)')
        object.__setattr__(self, 'h_min', h_min)

        n = float(self.n_vertices)
        if not math.isfinite(n) or n < 1 or n != round(n):
            raise DomainError(f'Value N={self.n_vertices} must be a positive integer')
        object.__setattr__(self, 'n_vertices', int(round(n)))

    @property
    def near_two(self):
        return self.tau - 2.0 < TAU_EPS

    def with_tau(self, tau):
        return PowerLawModel(tau, self.h_min, self.n_vertices)


@dataclass(frozen=True)
class CutoffScheme:
    """ Structural and natural cutoffs with the rescaled ``a = 1/h_s``, ``b = h_c/h_s``. """

    h_s: float
    h_c: float
    a: float
    b: float

    @classmethod
    def from_cutoffs(cls, h_s, h_c):
        h_s, h_c = float(h_s), float(h_c)
        if not (h_s > 0.0 and h_c > 0.0 and math.isfinite(h_s) and math.isfinite(h_c)):
            raise DomainError(f'Cutoffs must be positive and finite, got h_s={h_s}, h_c={h_c}')
        return cls(h_s, h_c, 1.0 / h_s, h_c / h_s)

    @classmethod
    def from_ab(cls, a, b):
        """ Scheme with prescribed rescaled cutoffs, used for fixed-(a, b) studies. """
        a, b = float(a), float(b)
        if not (a > 0.0 and b > 0.0):
            raise DomainError(f'Rescaled cutoffs must be positive, got a={a}, b={b}')
        return cls(1.0 / a, b / a, a, b)

    def check_chain(self, h_min):
        """ Assert ``0 < a*h_min <= a*h_min*b <= 1 <= b``.

        Raises:
            ConstraintError: naming the first violated inequality.

        """

        lower = self.a * h_min
        upper = lower * self.b

        if not lower > 0.0:
            raise ConstraintError(f'0 < a*h_min violated: a*h_min = {lower}')
        if self.b < 1.0 - CHAIN_RTOL:
            raise ConstraintError(f'a*h_min <= a*h_min*b (b >= 1) violated: b = {self.b}')
        if upper > 1.0 + CHAIN_RTOL:
            raise ConstraintError(f'a*h_min*b <= 1 violated: a*h_min*b = {upper}')

        return self

    def to_dict(self, h_min=None):
        out = {'h_s': self.h_s, 'h_c': self.h_c, 'a': self.a, 'b': self.b}
        if h_min is not None:
            out['a_hmin'] = self.a * h_min
        return out


def truncated_mean(tau, lower, upper):
    """ Mean of ``h**(-tau)`` restricted to ``[lower, upper]``.

    Near ``tau = 2`` the ratio is replaced by its limit
    ``ln(upper/lower) / (1/lower - 1/upper)``.
    """

    if not upper > lower:
        raise DomainError(f'Support [{lower}, {upper}] is empty')

    s = tau - 2.0
    span = math.log(upper / lower)

    if s < TAU_EPS:
        return span / (1.0 / lower - 1.0 / upper)

    numerator = lower ** (-s) * -math.expm1(-s * span)
    denominator = lower ** (1.0 - tau) * -math.expm1(-(tau - 1.0) * span)

    return (tau - 1.0) / s * numerator / denominator


def mean_h(model):
    """ Mean hidden variable ``<h>`` with support ``[h_min, N]``.

    Args:
        model (PowerLawModel):
            Needs ``N > h_min``.

    Returns:
        float

    """

    return truncated_mean(model.tau, model.h_min, float(model.n_vertices))


def mean_h_envelope(model):
    """ ``(m, M)``: ``<h>`` at ``tau = 3`` and in the limit ``tau -> 2`` for the same ``h_min, N``. """
    return mean_h(model.with_tau(3.0)), mean_h(model.with_tau(2.0))


def asymptotic_mean(model):
    """ ``<h_inf> = h_min (tau-1)/(tau-2)``, the mean on ``[h_min, inf)``. """
    if model.near_two:
        raise DomainError(f'Untruncated mean diverges at tau={model.tau}')
    return model.h_min * (model.tau - 1.0) / (model.tau - 2.0)


def default_cutoffs(model, convention='size-dependent'):
    """ Default cutoffs ``h_s = sqrt(N<h>)`` and ``h_c = (N<h>)**(1/(tau-1))``.

    Args:
        model (PowerLawModel):
            The power-law model.
        convention (str, optional):
            ``"size-dependent"`` uses ``<h>`` on ``[h_min, N]``;
            ``"asymptotic"`` uses ``h_min (tau-1)/(tau-2)`` instead.
            Defaults to ``"size-dependent"``.

    Returns:
        CutoffScheme:
            Satisfying the cutoff chain for ``model.h_min``.

    """

    if convention == 'size-dependent':
        mean = mean_h(model)
    elif convention == 'asymptotic':
        mean = asymptotic_mean(model)
    else:
        raise DomainError(f'Unknown cutoff convention "{convention}", choose from {CUTOFF_CONVENTIONS}')

    scale = model.n_vertices * mean
    scheme = CutoffScheme.from_cutoffs(math.sqrt(scale), scale ** (1.0 / (model.tau - 1.0)))

    return scheme.check_chain(model.h_min)


def truncated_cdf(model, upper):
    """ Cumulative distribution function of ``rho`` truncated to ``[h_min, upper]``. """
    exponent = 1.0 - model.tau
    lo = model.h_min ** exponent
    hi = upper ** exponent

    def cdf(h):
        h = np.clip(np.asarray(h, dtype=float), model.h_min, upper)
        return (lo - h ** exponent) / (lo - hi)

    return cdf


def inverse_cdf(model, upper, uniforms):
    """ Map uniforms on ``[0, 1)`` to hidden variables on ``[h_min, upper]``. """
    exponent = 1.0 - model.tau
    lo = model.h_min ** exponent
    hi = upper ** exponent
    h = (lo - np.asarray(uniforms, dtype=float) * (lo - hi)) ** (1.0 / exponent)
    return np.clip(h, model.h_min, upper)


def sample_hidden(model, upper, count, rng):
    """ Draw hidden variables from ``rho`` truncated to ``[h_min, upper]``.

    Args:
        model (PowerLawModel):
            The power-law model.
        upper (float):
            Upper end of the support, greater than ``h_min``.
        count (int):
            Number of draws, at least 1.
        rng (numpy.random.Generator):
            Random stream owned by the caller.

    Returns:
        numpy.ndarray:
            ``count`` independent draws by inverse transform.

    """

    upper = float(upper)
    if not upper > model.h_min:
        raise DomainError(f'Value upper={upper} is outside allowed interval ({model.h_min}, inf)')
    if int(count) < 1:
        raise DomainError(f'Value count={count} is outside allowed interval [1, inf)')

    return inverse_cdf(model, upper, rng.random(int(count)))


def sample_pareto(model, size, rng):
    """ Untruncated draws on ``[h_min, inf)``; ``size`` may be a shape tuple. """
    return model.h_min * (1.0 - rng.random(size)) ** (-1.0 / (model.tau - 1.0))


def _open_tau(model):
    if model.near_two:
        raise DomainError(f'Value tau={model.tau} is outside allowed interval (2, 3]')


def natural_cutoff_exact(model):
    """ Expected maximum of ``N`` untruncated draws.

    ``h_min * Gamma(u) * Gamma(N+1) / Gamma(N+u)`` with ``u = (tau-2)/(tau-1)``,
    evaluated with log-gamma.
    """

    _open_tau(model)
    u = (model.tau - 2.0) / (model.tau - 1.0)
    n = float(model.n_vertices)

    return model.h_min * math.exp(gammaln(u) + gammaln(n + 1.0) - gammaln(n + u))


def natural_cutoff_approx(model):
    """ Large-``N`` form ``h_min * Gamma(u) * N**(1/(tau-1))``. """
    _open_tau(model)
    u = (model.tau - 2.0) / (model.tau - 1.0)
    return model.h_min * math.exp(gammaln(u)) * model.n_vertices ** (1.0 / (model.tau - 1.0))


def natural_cutoff_bounds(model):
    """ Lower and upper bounds on the expected maximum, their ratio is exactly 4/3.

    Returns:
        tuple(float, float):
            ``(lower, upper)`` with
            ``lower = h_min**u * (N<h_inf>)**(1/(tau-1))``.

    """

    _open_tau(model)
    u = (model.tau - 2.0) / (model.tau - 1.0)
    lower = model.h_min ** u * (model.n_vertices * asymptotic_mean(model)) ** (1.0 / (model.tau - 1.0))

    return lower, 4.0 * lower / 3.0


@dataclass
class MonteCarloEstimate:
    mean: float
    stderr: float
    raw_mean: float
    raw_stderr: float
    replicates: int

    def to_dict(self):
        return {
            'mean': self.mean,
            'stderr': self.stderr,
            'raw_mean': self.raw_mean,
            'raw_stderr': self.raw_stderr,
            'replicates': self.replicates,
            'estimator': 'conditional mean of the maximum given the second largest draw',
        }


def natural_cutoff_monte_carlo(model, replicates, rng, max_chunk_values=2_000_000, verbose=False):
    """ Monte Carlo estimate of the expected maximum of ``N`` untruncated draws.

    Each replicate draws ``N`` Pareto values. Given the second largest
    value ``m``, the largest is Pareto above ``m`` with mean
    ``m (tau-1)/(tau-2)``; averaging that conditional mean keeps the estimate
    unbiased with finite variance. The plain mean of the maxima is returned
    too.

    Args:
        model (PowerLawModel):
            Needs ``N >= 2`` and ``tau > 2``.
        replicates (int):
            Number of independent samples of size ``N``.
        rng (numpy.random.Generator):
            Random stream.
        max_chunk_values (int, optional):
            Memory cap on values drawn at once.
        verbose (bool, optional):
            Print progress per chunk.

    Returns:
        MonteCarloEstimate

    """

    _open_tau(model)
    n = model.n_vertices
    replicates = int(replicates)
    if n < 2:
        raise DomainError(f'Value N={n} is outside allowed interval [2, inf)')
    if replicates < 2:
        raise DomainError(f'Value replicates={replicates} is outside allowed interval [2, inf)')

    factor = (model.tau - 1.0) / (model.tau - 2.0)
    rows = max(1, max_chunk_values // n)
    conditional, maxima = [], []

    done = 0
    while done < replicates:
        k = min(rows, replicates - done)
        draws = np.partition(sample_pareto(model, (k, n), rng), n - 2, axis=1)
        conditional.append(factor * draws[:, n - 2])
        maxima.append(draws[:, n - 1:].max(axis=1))
        done += k
        if verbose:
            print(f'Monte Carlo maxima: {done}/{replicates} replicates')

    conditional = np.concatenate(conditional)
    maxima = np.concatenate(maxima)
    root = math.sqrt(replicates)

    return MonteCarloEstimate(
        float(conditional.mean()),
        float(conditional.std(ddof=1) / root),
        float(maxima.mean()),
        float(maxima.std(ddof=1) / root),
        replicates,
    )
