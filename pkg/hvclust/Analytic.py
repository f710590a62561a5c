""" Analytic and numerical clustering of hidden-variable graphs.

Integrals run over the rescaled hidden variables ``x = a*h`` on
``[a*h_min, b]``. The kernel is written as ``r(u) = u*f(u)`` so that the
ratio defining ``c_ab(h)`` reads::

    c_ab(h) = int int (xy)**(2-tau) f(a h x) f(a h y) f(xy) dx dy
              / (int x**(1-tau) f(a h x) dx)**2

which has no 0/0 at ``h = 0``. Quadrature is done in logarithmic variables
with nested adaptive Gauss-Kronrod rules broken at every kernel kink.
"""

import math
import warnings
from dataclasses import asdict, dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import gammainc, gammaln
from scipy.optimize import brentq
from scipy.stats import binom

from hvclust.Errors import ConsistencyError, DomainError, NumericalWarning, QuadratureError, check_interval
from hvclust.PowerLaw import TAU_EPS, CutoffScheme, PowerLawModel, default_cutoffs, mean_h, mean_h_envelope


CONSISTENCY_RTOL = 1.0e-6


@dataclass(frozen=True)
class AnalyticConfig:
    """ Quadrature settings.

    Attributes:
        abs_tol (float):
            Absolute tolerance of each integral.
        rel_tol (float):
            Relative tolerance of the outer integrals; inner integrals of a
            nested rule are run 100 times tighter.
        max_subdivisions (int):
            Cap on adaptive subintervals per integral.

    """

    abs_tol: float = 1.0e-13
    rel_tol: float = 1.0e-8
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise DomainError(f'Value abs_tol={self.abs_tol} is outside allowed interval (0, inf)')
        if not self.rel_tol >= 1.0e-14:
            raise DomainError(f'Value rel_tol={self.rel_tol} is outside allowed interval [1e-14, inf)')
        if int(self.max_subdivisions) < 1:
            raise DomainError(f'Value max_subdivisions={self.max_subdivisions} is outside allowed interval [1, inf)')

    @property
    def inner(self):
        return AnalyticConfig(self.abs_tol, max(self.rel_tol * 1.0e-2, 1.0e-14), self.max_subdivisions)


DEFAULT_CONFIG = AnalyticConfig()


class QuadResult(NamedTuple):
    value: float
    error: float


########################################################################
# Quadrature primitives
########################################################################


def _quad(func, lo, hi, points, cfg, what):
    """ One adaptive integral over ``[lo, hi]`` broken at ``points``. """

    if not hi > lo:
        return QuadResult(0.0, 0.0)

    span = hi - lo
    inside = sorted({p for p in points if lo + 1.0e-12 * span < p < hi - 1.0e-12 * span})
    limit = max(int(cfg.max_subdivisions), 2 * len(inside) + 2)

    result = quad(func, lo, hi, points=inside or None, epsabs=cfg.abs_tol,
                  epsrel=cfg.rel_tol, limit=limit, full_output=1)
    value, error = float(result[0]), float(result[1])

    if len(result) == 4:
        allowed = max(cfg.abs_tol, cfg.rel_tol * abs(value))
        if not error <= 10.0 * allowed:
            raise QuadratureError(f'{what}: {result[3].strip()}', value, error)

    return QuadResult(value, error)


def _log(x):
    return math.log(x) if x > 0.0 else -math.inf


def _ratio(num, den):
    value = num.value / den.value ** 2
    error = abs(value) * (num.error / abs(num.value) + 2.0 * den.error / abs(den.value))
    return QuadResult(value, error)


def _c_ab(kernel, tau, lower, upper, ah, cfg):
    """ ``c_ab`` on ``[lower, upper]`` with ``ah = a*h``, returns a ``QuadResult``. """

    f = kernel.f
    lo, hi = math.log(lower), math.log(upper)
    q = 3.0 - tau
    kinks = [math.log(u) for u in kernel.kinks]

    # kinks of f(a h x) in log x
    line_breaks = [k - _log(ah) for k in kinks] if ah > 0.0 else []

    def weight(t):
        return f(ah * math.exp(t)) if ah > 0.0 else 1.0

    inner_cfg = cfg.inner
    worst_inner = [0.0]

    def inner(s):
        ws = weight(s)
        if ws == 0.0:
            return 0.0

        def integrand(t):
            return math.exp(q * (s + t)) * weight(t) * f(math.exp(s + t))

        res = _quad(integrand, lo, hi, line_breaks + [k - s for k in kinks], inner_cfg, 'c_ab inner integral')
        worst_inner[0] = max(worst_inner[0], res.error)
        return ws * res.value

    outer_breaks = list(line_breaks)
    for k in kinks:
        outer_breaks += [k - hi, k - lo]
        outer_breaks += [k - lb for lb in line_breaks]

    numerator = _quad(inner, lo, hi, outer_breaks, cfg, 'c_ab double integral')
    numerator = QuadResult(numerator.value, numerator.error + (hi - lo) * worst_inner[0])

    denominator = _quad(lambda t: math.exp((q - 1.0) * t) * weight(t), lo, hi, line_breaks, cfg, 'c_ab normalization')

    return _ratio(numerator, denominator)


def _check_h(h):
    h = float(h)
    if not (h >= 0.0 and math.isfinite(h)):
        raise DomainError(f'Value h={h} is outside allowed interval [0, inf)')
    return h


def g_ratio(kernel, tau, a, b, h_min, cfg=DEFAULT_CONFIG):
    """ ``G(tau, a, b)``: the ratio ``c_ab(0)`` for arbitrary rescaled cutoffs.

    Only ``0 < a*h_min < b`` is required, the full cutoff chain is not.

    Returns:
        QuadResult

    """

    check_interval('tau', tau, 2.0, 3.0)
    lower = a * h_min
    if not (0.0 < lower < b):
        raise DomainError(f'Integration range [{lower}, {b}] is empty')
    return _c_ab(kernel, tau, lower, b, 0.0, cfg)


def c_ab_h(kernel, scheme, tau, h_min, h, cfg=DEFAULT_CONFIG):
    """ Probability that two neighbours of a vertex with hidden variable ``h`` are connected.

    Args:
        kernel (Kernel):
            Connection kernel.
        scheme (CutoffScheme):
            Cutoffs, must satisfy the chain for ``h_min``.
        tau (float):
            Power-law exponent in ``[2, 3]``.
        h_min (float):
            Lower end of the hidden-variable support.
        h (float):
            Hidden variable of the vertex, ``h >= 0``.
        cfg (AnalyticConfig, optional):
            Quadrature settings.

    Returns:
        QuadResult:
            Value in ``[0, 1]`` and its error estimate.

    Raises:
        QuadratureError: if an integral does not converge.

    """

    check_interval('tau', tau, 2.0, 3.0)
    scheme.check_chain(h_min)
    h = _check_h(h)

    return _c_ab(kernel, tau, scheme.a * h_min, scheme.b, scheme.a * h, cfg)


def degree_factor(h):
    """ ``P(k >= 2)`` for a Poisson degree with mean ``h``: ``1 - (1+h) e^{-h}``. """
    return float(gammainc(2.0, h)) if h > 0.0 else 0.0


def local_clustering_analytic(kernel, scheme, tau, h_min, h, cfg=DEFAULT_CONFIG):
    """ Expected local clustering ``c(h) = P(k >= 2 | h) * c_ab(h)``.

    Returns:
        QuadResult

    """

    h = _check_h(h)
    factor = degree_factor(h)
    if factor == 0.0:
        return QuadResult(0.0, 0.0)

    cab = c_ab_h(kernel, scheme, tau, h_min, h, cfg)
    return QuadResult(factor * cab.value, factor * cab.error)


def _normalization(tau, lower, upper):
    """ ``int_lower^upper h**(-tau) dh``. """
    return lower ** (1.0 - tau) * -math.expm1(-(tau - 1.0) * math.log(upper / lower)) / (tau - 1.0)


def a_factor(tau, h_min, n_vertices, cfg=DEFAULT_CONFIG):
    """ Fraction ``A(tau)`` of vertices expected to have degree at least two.

    ``A = int rho(h) (1 - (1+h) e^{-h}) dh`` with ``rho`` normalized on
    ``[h_min, N]``.

    Returns:
        QuadResult

    """

    model = PowerLawModel(tau, h_min, n_vertices)
    n = float(model.n_vertices)
    if not n > model.h_min:
        raise DomainError(f'Support [{model.h_min}, {n}] is empty')

    z = _normalization(model.tau, model.h_min, n)
    exponent = 1.0 - model.tau

    def integrand(t):
        h = math.exp(t)
        return math.exp(exponent * t) * gammainc(2.0, h)

    lo, hi = math.log(model.h_min), math.log(n)
    res = _quad(integrand, lo, hi, [0.0, math.log(2.0)], cfg, 'A(tau)')

    return QuadResult(res.value / z, res.error / z)


########################################################################
# Closed forms for the maximally dense kernel
########################################################################


def _psi(x):
    """ ``(e^x - 1 - x)/x**2``, regular at 0. """
    if abs(x) < 1.0e-2:
        return 0.5 + x / 6.0 + x * x / 24.0 + x ** 3 / 120.0 + x ** 4 / 720.0
    return (math.expm1(x) - x) / (x * x)


def _expm1_ratio(x):
    """ ``(e^x - 1)/x``, regular at 0. """
    return math.expm1(x) / x if x != 0.0 else 1.0


def front_factor(scheme, tau, h_min):
    """ ``(tau-2)**2 / ((a h_min)**(2-tau) - b**(2-tau))**2``, continued to ``tau = 2``. """

    s = tau - 2.0
    alpha = math.log(scheme.a * h_min)
    log_b = math.log(scheme.b)
    width = log_b - alpha
    if not width > 0.0:
        raise DomainError(f'Degenerate cutoffs: a*h_min = {scheme.a * h_min}, b = {scheme.b}')

    return math.exp(2.0 * s * log_b) / (width * _expm1_ratio(s * width)) ** 2


def i_max(scheme, tau, h_min):
    """ Double integral of the maximally dense kernel at ``h = 0``.

    Evaluates::

        ln(b^2)/(s q) - (1 - b^{-2s})/s^2 + (1 - 2 (a b)^q + a^{2q})/q^2

    with ``s = tau-2``, ``q = 3-tau`` and ``a`` standing for ``a*h_min``,
    rearranged into terms of ``psi(x) = (e^x-1-x)/x^2`` that stay finite on
    the closed interval ``[2, 3]``.
    """

    s, q = tau - 2.0, 3.0 - tau
    alpha = math.log(scheme.a * h_min)
    log_b = math.log(scheme.b)
    big_l = 2.0 * log_b
    beta = alpha + log_b

    return (big_l ** 2 * _psi(-s * big_l)
            - 2.0 * beta ** 2 * _psi(q * beta)
            + 4.0 * alpha ** 2 * _psi(2.0 * q * alpha))


def c_max_ratio(scheme, tau, h_min):
    """ ``c_ab(0)`` of the maximally dense kernel in closed form. """
    check_interval('tau', tau, 2.0, 3.0)
    return front_factor(scheme, tau, h_min) * i_max(scheme, tau, h_min)


def c_max_closed(scheme, tau, h_min, n_vertices, cfg=DEFAULT_CONFIG):
    """ Average clustering of the maximally dense graph in closed form.

    Args:
        scheme (CutoffScheme):
            Cutoffs obeying the chain.
        tau (float):
            Exponent in ``[2, 3]``; both end points are handled by the
            regular rearrangement of :func:`i_max` and :func:`front_factor`.
        h_min (float):
            Lower end of the support.
        n_vertices (int):
            ``N``, enters through ``A(tau)``.
        cfg (AnalyticConfig, optional):
            Settings for the ``A(tau)`` quadrature.

    Returns:
        float

    """

    scheme.check_chain(h_min)
    return a_factor(tau, h_min, n_vertices, cfg).value * c_max_ratio(scheme, tau, h_min)


def c_max_approx(scheme, tau, h_min, n_vertices, cfg=DEFAULT_CONFIG):
    """ Large-size approximation ``A (s/q) (a h_min)^{2s} ln(b^2)``. """

    if 3.0 - tau < TAU_EPS:
        raise DomainError(f'Value tau={tau} is outside allowed interval [2, 3)')
    s, q = tau - 2.0, 3.0 - tau
    core = s / q * (scheme.a * h_min) ** (2.0 * s) * 2.0 * math.log(scheme.b)

    return a_factor(tau, h_min, n_vertices, cfg).value * core


def c_bounds(kernel, scheme, tau, h_min, n_vertices, u0_grid=(1.0,), cfg=DEFAULT_CONFIG):
    """ Universal lower and upper bounds on the average clustering.

    The upper bound is the maximally dense value at ``(a, b)``. The lower
    bound maximizes ``u0 f(u0) C_max(a/sqrt(u0), b/sqrt(u0))`` over the
    grid; points with ``b/sqrt(u0) < 1`` fall outside the closed form and are
    skipped with a warning.

    Returns:
        tuple(float, float):
            ``(lower, upper)``

    """

    scheme.check_chain(h_min)
    grid = np.atleast_1d(np.asarray(u0_grid, dtype=float))
    if grid.size == 0 or np.any(grid < 1.0):
        raise DomainError(f'u0 grid values must be >= 1, got {grid.tolist()}')

    area = a_factor(tau, h_min, n_vertices, cfg).value
    upper = area * c_max_ratio(scheme, tau, h_min)

    lower = None
    skipped = []
    for u0 in grid:
        root = math.sqrt(u0)
        shrunk = CutoffScheme.from_ab(scheme.a / root, scheme.b / root)
        if shrunk.b < 1.0:
            skipped.append(float(u0))
            continue
        candidate = u0 * float(kernel.f(u0)) * area * c_max_ratio(shrunk, tau, h_min)
        lower = candidate if lower is None else max(lower, candidate)

    if skipped:
        warnings.warn(f'Skipped u0 values {skipped}: b/sqrt(u0) < 1', NumericalWarning)
    if lower is None:
        lower = float(kernel.f(1.0)) * upper

    return lower, upper


########################################################################
# Persistence of clustering near tau = 2
########################################################################


@dataclass
class PersistenceResult:
    value: float
    validity_ratio: float


def persistence_approx(scheme, tau, h_min, n_vertices, cfg=DEFAULT_CONFIG):
    """ Approximation of the maximally dense clustering for ``tau`` close to 2.

    Also reports ``|ln(a b)/ln(b^2)|`` (with ``a*h_min`` for ``a``); the
    approximation is meaningful when this ratio is small.

    Returns:
        PersistenceResult

    """

    scheme.check_chain(h_min)
    s = tau - 2.0
    log_b = math.log(scheme.b)
    log_ab = math.log(scheme.a * h_min * scheme.b)

    area = a_factor(tau, h_min, n_vertices, cfg).value
    numerator = 1.0 - s * 2.0 * log_b / 3.0
    denominator = 2.0 * (1.0 - s * log_ab / 2.0 + s * s * log_b ** 2 / 6.0) ** 2

    ratio = abs(log_ab / (2.0 * log_b)) if log_b > 0.0 else math.inf
    if ratio > 0.5:
        warnings.warn(f'Persistence approximation used with |ln(ab)/ln(b^2)| = {ratio:.3g}', NumericalWarning)

    return PersistenceResult(area * numerator / denominator, ratio)


def persistence_threshold_n(tau, t):
    """ Size ``N`` at which clustering has decayed by the factor ``e^{-t}``.

    Solves ``N ln N = exp((tau-1) t / ((tau-2)(3-tau)))`` in ``x = ln N``.

    Args:
        tau (float):
            Exponent in ``(2, 3)``.
        t (float):
            Threshold in ``(0, 3)``.

    Returns:
        float

    """

    tau = check_interval('tau', tau, 2.0, 3.0, lo_open=True, hi_open=True)
    t = check_interval('t', t, 0.0, 3.0, lo_open=True, hi_open=True)

    target = (tau - 1.0) * t / ((tau - 2.0) * (3.0 - tau))
    x = brentq(lambda x: x + math.log(x) - target, 1.0e-300, max(target, 1.0) + 1.0, xtol=1.0e-13, rtol=1.0e-15)

    return math.exp(x)


########################################################################
# Averages, envelope and supplementary quantities
########################################################################


@dataclass
class AnalyticResult:
    """ Analytic summary of the average clustering for one parameter set. """

    kernel: str
    tau: float
    h_min: float
    n_vertices: int
    h_s: float
    h_c: float
    a: float
    b: float
    a_hmin: float
    c_ab_0: float
    c_ab_0_error: float
    a_factor: float
    c_avg: float
    c_avg_error: float
    bound_low: float
    bound_high: float
    c_max_closed: Optional[float] = None
    approx_main: Optional[float] = None
    approx_persistence: Optional[float] = None
    validity_ratio: Optional[float] = None
    c_closed_form: Optional[float] = None

    def to_dict(self):
        return asdict(self)


def c_average(kernel, scheme, tau, h_min, n_vertices, cfg=DEFAULT_CONFIG, u0_grid=(1.0,)):
    """ Average clustering ``C_ab(tau) = c_ab(0) * A(tau)`` with bounds and approximations.

    For the maximally dense kernel the quadrature value is checked against
    the closed form.

    Returns:
        AnalyticResult

    Raises:
        ConsistencyError: if quadrature and closed form disagree.

    """

    scheme.check_chain(h_min)
    cab = c_ab_h(kernel, scheme, tau, h_min, 0.0, cfg)
    area = a_factor(tau, h_min, n_vertices, cfg)
    c_avg = cab.value * area.value
    c_avg_error = cab.error * area.value + cab.value * area.error

    lower, upper = c_bounds(kernel, scheme, tau, h_min, n_vertices, u0_grid, cfg)

    closed = None
    if kernel.is_max_dense:
        closed = upper
        lower = upper
        if abs(c_avg - closed) > max(CONSISTENCY_RTOL * closed, 10.0 * c_avg_error):
            raise ConsistencyError(f'Quadrature C = {c_avg!r} disagrees with closed form {closed!r}')

    approx = None if 3.0 - tau < TAU_EPS else c_max_approx(scheme, tau, h_min, n_vertices, cfg)

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', NumericalWarning)
        persistence = persistence_approx(scheme, tau, h_min, n_vertices, cfg)

    return AnalyticResult(
        kernel=kernel.name, tau=float(tau), h_min=float(h_min), n_vertices=int(n_vertices),
        h_s=scheme.h_s, h_c=scheme.h_c, a=scheme.a, b=scheme.b, a_hmin=scheme.a * h_min,
        c_ab_0=cab.value, c_ab_0_error=cab.error, a_factor=area.value,
        c_avg=c_avg, c_avg_error=c_avg_error, bound_low=lower, bound_high=upper,
        c_max_closed=closed, approx_main=approx,
        approx_persistence=persistence.value,
        validity_ratio=persistence.validity_ratio if math.isfinite(persistence.validity_ratio) else None,
    )


def c_average_sweep(kernel, tau_grid, h_min, n_vertices, cfg=DEFAULT_CONFIG,
                    convention='size-dependent', u0_grid=(1.0,), verbose=False):
    """ :func:`c_average` along a grid of exponents with default cutoffs. """

    results = []
    for tau in tau_grid:
        model = PowerLawModel(tau, h_min, n_vertices)
        scheme = default_cutoffs(model, convention)
        results.append(c_average(kernel, scheme, model.tau, h_min, n_vertices, cfg, u0_grid))
        if verbose:
            print(f'tau = {model.tau:.4f}: C = {results[-1].c_avg:.6g}')

    return results


def envelope_c(kernel, tau, h_min, n_vertices, cfg=DEFAULT_CONFIG):
    """ Upper envelope ``A(tau) G(tau, a_bar, b_bar(tau))`` of the average clustering.

    ``a_bar = (N m)**(-1/2)`` and ``b_bar = (N M)**((3-tau)/(2(tau-1)))`` where
    ``m`` and ``M`` are ``<h>`` at ``tau = 3`` and ``tau -> 2``.

    Returns:
        QuadResult

    """

    model = PowerLawModel(tau, h_min, n_vertices)
    m, big_m = mean_h_envelope(model)
    n = model.n_vertices

    a_bar = (n * m) ** -0.5
    b_bar = (n * big_m) ** ((3.0 - model.tau) / (2.0 * (model.tau - 1.0)))

    g = g_ratio(kernel, model.tau, a_bar, b_bar, h_min, cfg)
    area = a_factor(model.tau, h_min, n, cfg)

    return QuadResult(g.value * area.value, g.error * area.value + g.value * area.error)


@dataclass
class ScalingFit:
    slope: float
    intercept: float
    sizes: list
    values: list


def scaling_exponent(tau, h_min, n_grid, cfg=DEFAULT_CONFIG):
    """ Slope of ``ln C_max - ln ln(N <h>)`` against ``ln N``; close to ``2 - tau``. """

    sizes, values = [], []
    for n in n_grid:
        model = PowerLawModel(tau, h_min, n)
        scheme = default_cutoffs(model)
        c = c_max_closed(scheme, model.tau, h_min, model.n_vertices, cfg)
        sizes.append(model.n_vertices)
        values.append(c)

    log_n = np.log(np.asarray(sizes, dtype=float))
    scales = np.array([n * mean_h(PowerLawModel(tau, h_min, n)) for n in sizes])
    slope, intercept = np.polyfit(log_n, np.log(values) - np.log(np.log(scales)), 1)

    return ScalingFit(float(slope), float(intercept), sizes, values)


def degree_pmf(model, k, cfg=DEFAULT_CONFIG):
    """ Probability of degree ``k`` in the Poisson mixture over ``rho`` on ``[h_min, N]``. """

    k = int(k)
    if k < 0:
        raise DomainError(f'Value k={k} is outside allowed interval [0, inf)')
    n = float(model.n_vertices)
    z = _normalization(model.tau, model.h_min, n)
    shift = gammaln(k + 1.0)

    def integrand(t):
        return math.exp((k + 1.0 - model.tau) * t - math.exp(t) - shift)

    breaks = [math.log(k)] if k > 0 else []
    res = _quad(integrand, math.log(model.h_min), math.log(n), breaks, cfg, 'degree distribution')

    return res.value / z


def connection_probability(kernel, scheme, tau, h_min, h, cfg=DEFAULT_CONFIG):
    """ Probability that a vertex with hidden variable ``h`` links to a random other vertex.

    The partner's hidden variable follows ``rho`` on ``[h_min, h_c]``.

    Returns:
        QuadResult

    """

    h = _check_h(h)
    lower, upper = scheme.a * h_min, scheme.b
    ah = scheme.a * h
    if ah == 0.0:
        return QuadResult(0.0, 0.0)

    z = _normalization(tau, lower, upper)
    breaks = [math.log(u / ah) for u in kernel.kinks]

    def integrand(t):
        x = math.exp(t)
        return math.exp((1.0 - tau) * t) * ah * x * float(kernel.f(ah * x))

    res = _quad(integrand, math.log(lower), math.log(upper), breaks, cfg, 'connection probability')
    return QuadResult(min(res.value / z, 1.0), res.error / z)


def expected_degree(kernel, scheme, tau, h_min, n_vertices, h, cfg=DEFAULT_CONFIG):
    """ ``(N-1)`` times :func:`connection_probability`. """
    p = connection_probability(kernel, scheme, tau, h_min, h, cfg)
    return (int(n_vertices) - 1) * p.value


def finite_degree_factor(kernel, scheme, tau, h_min, n_vertices, h, cfg=DEFAULT_CONFIG):
    """ ``P(k >= 2)`` with ``k ~ Binomial(N-1, p(h))``, exact for a sampled graph. """
    p = connection_probability(kernel, scheme, tau, h_min, h, cfg).value
    return float(binom.sf(1, int(n_vertices) - 1, p))


def local_clustering_finite(kernel, scheme, tau, h_min, n_vertices, h, cfg=DEFAULT_CONFIG):
    """ Expected ``c_i`` of a vertex with hidden variable ``h`` in a graph of ``N`` vertices.

    Unlike :func:`local_clustering_analytic`, the degree is binomial with
    the exact connection probability instead of Poisson with mean ``h``.

    Returns:
        QuadResult

    """

    scheme.check_chain(h_min)
    factor = finite_degree_factor(kernel, scheme, tau, h_min, n_vertices, h, cfg)
    cab = c_ab_h(kernel, scheme, tau, h_min, h, cfg)
    return QuadResult(factor * cab.value, factor * cab.error)


def bin_average(func, tau, lo, hi, cfg=DEFAULT_CONFIG):
    """ Average of ``func(h)`` over ``[lo, hi]`` weighted by ``h**(-tau)``. """

    if not hi > lo > 0.0:
        raise DomainError(f'Bin [{lo}, {hi}] is empty')
    z = _normalization(tau, lo, hi)
    res = _quad(lambda t: math.exp((1.0 - tau) * t) * func(math.exp(t)),
                math.log(lo), math.log(hi), [], cfg, 'bin average')
    return res.value / z


def bin_clustering(kernel, scheme, tau, h_min, n_vertices, lo, hi, cfg=DEFAULT_CONFIG):
    """ Analytic clustering of the hidden-variable bin ``[lo, hi]``.

    ``c_ab`` is taken at the geometric bin centre, where it is flat for the
    plateau bins, and multiplied by the bin-averaged degree factor, Poisson
    for the first value and binomial for the second.

    Returns:
        tuple(float, float):
            ``(c_analytic, c_finite)``

    """

    centre = math.sqrt(lo * hi)
    cab = c_ab_h(kernel, scheme, tau, h_min, centre, cfg).value
    poisson = bin_average(degree_factor, tau, lo, hi, cfg)
    finite = bin_average(lambda h: finite_degree_factor(kernel, scheme, tau, h_min, n_vertices, h, cfg.inner),
                         tau, lo, hi, cfg)

    return cab * poisson, cab * finite
