""" Lerch transcendent and the closed form of the maximally random graph. """

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from hvclust.Analytic import front_factor
from hvclust.Errors import DomainError, check_interval


DEFAULT_TOL = 1.0e-10
GUARD_BAND = 1.0e-4
BLOCK = 4096

LERCH_METHODS = ('auto', 'direct', 'accelerated')


@dataclass(frozen=True)
class LerchParams:
    """ Arguments of ``Phi(z, s, v) = sum_k z**k / (k + v)**s``.

    The series converges for ``|z| <= 1`` with ``s, v > 0``, except at
    ``z = 1`` where ``s > 1`` is needed.
    """

    z: float
    s: float
    v: float

    def __post_init__(self):
        object.__setattr__(self, 'z', check_interval('z', self.z, -1.0, 1.0))
        object.__setattr__(self, 's', check_interval('s', self.s, 0.0, math.inf, lo_open=True, hi_open=True))
        object.__setattr__(self, 'v', check_interval('v', self.v, 0.0, math.inf, lo_open=True, hi_open=True))
        if self.z == 1.0 and self.s <= 1.0:
            raise DomainError(f'Phi(1, s, v) diverges for s={self.s} <= 1')


def _terms(p, start, count):
    k = np.arange(start, start + count, dtype=float)
    return np.sign(p.z) ** k * np.exp(k * math.log(abs(p.z)) - p.s * np.log(k + p.v))


def lerch_partial_sum(p, n_terms):
    """ Sum of the first ``n_terms`` terms of the series. """
    if p.z == 0.0:
        return p.v ** -p.s
    total, done = 0.0, 0
    while done < n_terms:
        count = min(BLOCK, n_terms - done)
        total += float(np.sum(_terms(p, done, count)))
        done += count
    return total


def _direct(p, tol, max_terms):
    total, k = 0.0, 0
    while k < max_terms:
        terms = _terms(p, k, BLOCK)
        small = np.abs(terms) < tol / 10.0
        small[: max(0, 11 - k)] = False

        if p.z > 0.0:
            # geometric tail bound for positive terms
            small &= np.abs(terms) / (1.0 - p.z) < tol
        hits = np.nonzero(small)[0]

        if hits.size:
            return total + float(np.sum(terms[: hits[0]]))
        total += float(np.sum(terms))
        k += BLOCK

    raise DomainError(f'Lerch series for {p} did not reach tol={tol} within {max_terms} terms')


def _accelerated(p, tol):
    """ Alternating series ``sum (-1)^k |z|^k/(k+v)^s`` by Cohen-Villegas-Zagier. """

    magnitude = abs(p.z)
    first = p.v ** -p.s
    base = 3.0 + math.sqrt(8.0)
    n = max(2, int(math.ceil(math.log(2.0 * first / tol) / math.log(base))) + 1)

    d = base ** n
    d = (d + 1.0 / d) / 2.0
    b, c, total = -1.0, -d, 0.0
    for k in range(n):
        c = b - c
        total += c * magnitude ** k / (k + p.v) ** p.s
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))

    return total / d


def lerch_phi(p, tol=DEFAULT_TOL, method='auto', max_terms=50_000_000):
    """ Evaluate Lerch's transcendent on its convergent domain.

    Args:
        p (LerchParams):
            Arguments ``z, s, v``.
        tol (float, optional):
            Absolute error target. Defaults to ``1e-10``.
        method (str, optional):
            ``"direct"`` sums the series until the terms fall below
            ``tol/10``; ``"accelerated"`` uses alternating-series
            acceleration and needs ``z < 0``; ``"auto"`` picks acceleration
            for ``z < -1/2``. Defaults to ``"auto"``.
        max_terms (int, optional):
            Cap on direct summation.

    Returns:
        float

    """

    if not tol > 0.0:
        raise DomainError(f'Value tol={tol} is outside allowed interval (0, inf)')
    if method not in LERCH_METHODS:
        raise DomainError(f'Unknown method "{method}", choose from {LERCH_METHODS}')

    if p.z == 0.0:
        return p.v ** -p.s
    if p.z == 1.0:
        return float(zeta(p.s, p.v))

    if method == 'accelerated' or (method == 'auto' and p.z < -0.5):
        if p.z > 0.0:
            raise DomainError('Accelerated summation needs z < 0')
        return _accelerated(p, tol)

    return _direct(p, tol, max_terms)


def c_maxrandom_closed(scheme, tau, h_min, tol=DEFAULT_TOL):
    """ ``c_ab(0)`` of the maximally random kernel ``r(u) = u/(1+u)`` in closed form.

    With ``s = tau - 2`` and ``a`` standing for ``a*h_min`` the value is the
    maximally dense front factor times::

        pi ln(b^2)/sin(pi s) - pi^2 cos(pi s)/sin^2(pi s)
        + b^{-2s} Phi(-b^{-2}, 2, s)
        + a^{2(1-s)} Phi(-a^2, 2, 1-s)
        - 2 (a b)^{1-s} Phi(-a b, 2, 1-s)

    Multiply by ``A(tau)`` for the average clustering.

    Args:
        scheme (CutoffScheme):
            Cutoffs obeying the chain, so every Lerch argument lies in
            ``[-1, 0)``.
        tau (float):
            Exponent at least ``1e-4`` away from 2 and 3.
        h_min (float):
            Lower end of the support.
        tol (float, optional):
            Absolute tolerance of each Lerch evaluation.

    Returns:
        float

    """

    check_interval('tau', tau, 2.0 + GUARD_BAND, 3.0 - GUARD_BAND)
    scheme.check_chain(h_min)

    s = tau - 2.0
    ah = scheme.a * h_min
    b = scheme.b
    sine = math.sin(math.pi * s)

    bracket = (math.pi * 2.0 * math.log(b) / sine
               - math.pi ** 2 * math.cos(math.pi * s) / sine ** 2
               + b ** (-2.0 * s) * lerch_phi(LerchParams(-(b ** -2.0), 2.0, s), tol)
               + ah ** (2.0 * (1.0 - s)) * lerch_phi(LerchParams(-ah * ah, 2.0, 1.0 - s), tol)
               - 2.0 * (ah * b) ** (1.0 - s) * lerch_phi(LerchParams(-min(ah * b, 1.0), 2.0, 1.0 - s), tol))

    return front_factor(scheme, tau, h_min) * bracket


def table2_terms(s):
    """ Dominant terms of the maximally random closed form for small ``s = tau - 2``.

    Returns:
        tuple(float, float, float, float):
            ``pi/sin(pi s)``, ``1/(s(1-s))``, ``pi^2 cos(pi s)/sin^2(pi s)``
            and ``1/s^2 - 1/(1-s)^2``.

    """

    s = check_interval('s', s, 0.0, 0.5, lo_open=True)
    sine = math.sin(math.pi * s)

    return (math.pi / sine,
            1.0 / (s * (1.0 - s)),
            math.pi ** 2 * math.cos(math.pi * s) / sine ** 2,
            1.0 / s ** 2 - 1.0 / (1.0 - s) ** 2)
