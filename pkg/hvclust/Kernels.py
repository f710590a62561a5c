""" Connection kernels of the F-class.

Edges between vertices with hidden variables ``h`` and ``h'`` appear with
probability ``r(u) = u*f(u)`` where ``u = h*h'/h_s**2``. A kernel is the
function ``f`` together with the points where its derivative may jump.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Tuple

import numpy as np

from hvclust.Errors import DomainError


SERIES_CUTOFF = 1.0e-4


class KernelId(str, Enum):
    MAX_DENSE = 'max-dense'
    POISSON = 'poisson'
    MAX_RANDOM = 'max-random'
    CUSTOM = 'custom'


def _f_max_dense(u):
    return 1.0 / np.maximum(u, 1.0) if np.ndim(u) else 1.0 / max(float(u), 1.0)


def _f_poisson(u):
    if np.ndim(u) == 0:
        u = float(u)
        if u < SERIES_CUTOFF:
            return 1.0 - u / 2.0 + u * u / 6.0 - u * u * u / 24.0
        return -math.expm1(-u) / u

    u = np.asarray(u, dtype=float)
    small = u < SERIES_CUTOFF
    safe = np.where(small, 1.0, u)
    series = 1.0 - u / 2.0 + u * u / 6.0 - u * u * u / 24.0

    return np.where(small, series, -np.expm1(-safe) / safe)


def _f_max_random(u):
    return 1.0 / (1.0 + u) if np.ndim(u) else 1.0 / (1.0 + float(u))


@dataclass(frozen=True)
class Kernel:
    """ An F-class connection kernel.

    Attributes:
        id (KernelId):
            Built-in tag, or ``KernelId.CUSTOM``.
        f (callable):
            ``f(u)`` for ``u >= 0``; must accept floats and numpy arrays.
        kinks (tuple(float)):
            Increasing positive ``u`` values where ``f'`` may jump.
        name (str):
            Label used in reports.

    """

    id: KernelId
    f: Callable
    kinks: Tuple[float, ...] = field(default_factory=tuple)
    name: str = ''

    def __post_init__(self):
        kinks = tuple(sorted(float(k) for k in self.kinks))
        if any(not (k > 0.0 and math.isfinite(k)) for k in kinks):
            raise DomainError(f'Kernel kinks must be positive and finite, got {kinks}')
        object.__setattr__(self, 'kinks', kinks)
        if not self.name:
            object.__setattr__(self, 'name', self.id.value)

    @property
    def is_max_dense(self):
        return self.id is KernelId.MAX_DENSE


MAX_DENSE = Kernel(KernelId.MAX_DENSE, _f_max_dense, (1.0,))
POISSON = Kernel(KernelId.POISSON, _f_poisson)
MAX_RANDOM = Kernel(KernelId.MAX_RANDOM, _f_max_random)

BUILT_IN_KERNELS = {k.id.value: k for k in (MAX_DENSE, POISSON, MAX_RANDOM)}


def get_kernel(name):
    """ Look up a built-in kernel by its command-line name.

    Args:
        name (str):
            One of ``"max-dense"``, ``"poisson"``, ``"max-random"``.

    Returns:
        Kernel

    """

    try:
        return BUILT_IN_KERNELS[str(name)]
    except KeyError:
        raise DomainError(f'Unknown kernel "{name}", choose from {sorted(BUILT_IN_KERNELS)}') from None


def custom_kernel(f, kinks=(), name='custom'):
    return Kernel(KernelId.CUSTOM, f, tuple(kinks), name)


def _check_u(u):
    if np.ndim(u):
        u = np.asarray(u, dtype=float)
        if not np.all(np.isfinite(u)) or np.any(u < 0.0):
            raise DomainError('Kernel argument u must be finite and nonnegative')
        return u

    u = float(u)
    if not math.isfinite(u) or u < 0.0:
        raise DomainError(f'Value u={u} is outside allowed interval [0, inf)')
    return u


def eval_f(kernel, u):
    """ Evaluate ``f(u)``.

    Args:
        kernel (Kernel):
            The kernel.
        u (float, numpy.ndarray):
            Nonnegative finite argument(s).

    Returns:
        float or numpy.ndarray:
            Values in ``(0, 1]``.

    """

    u = _check_u(u)
    value = kernel.f(u)
    return value if np.ndim(value) else float(value)


def eval_r(kernel, u):
    """ Evaluate the connection probability ``r(u) = u*f(u)``, clipped to ``[0, 1]``. """

    u = _check_u(u)
    r = u * kernel.f(u)

    if np.ndim(r):
        return np.clip(r, 0.0, 1.0)
    return min(max(float(r), 0.0), 1.0)


@dataclass
class ConditionResult:
    name: str
    passed: bool
    first_violation: float = None
    detail: str = ''

    def to_dict(self):
        return {'passed': self.passed, 'first_violation': self.first_violation, 'detail': self.detail}


@dataclass
class FClassReport:
    """ Outcome of :func:`validate_fclass`, one entry per condition. """

    kernel: str
    grid_min: float
    grid_max: float
    grid_points: int
    conditions: dict

    @property
    def passed(self):
        return all(c.passed for c in self.conditions.values())

    def __getitem__(self, key):
        return self.conditions[key]

    def to_dict(self):
        return {
            'kernel': self.kernel,
            'grid': {'min': self.grid_min, 'max': self.grid_max, 'points': self.grid_points},
            'passed': self.passed,
            'conditions': {k: c.to_dict() for k, c in self.conditions.items()},
        }


def _first_increase(grid, values, tol):
    """ First grid point where ``values`` rises by more than ``tol`` relative. """
    for i in range(1, len(values)):
        if values[i] > values[i - 1] + tol * max(1.0, abs(values[i - 1])):
            return float(grid[i])
    return None


def _log_derivative(kernel, u):
    """ ``z(u) = -u f'(u)/f(u)`` by a symmetric difference (forward near 0). """
    step = max(1.0e-6, 1.0e-6 * u)
    fu = float(kernel.f(u))
    if u - step < 0.0:
        slope = (float(kernel.f(u + step)) - fu) / step
    else:
        slope = (float(kernel.f(u + step)) - float(kernel.f(u - step))) / (2.0 * step)
    return -u * slope / fu


def validate_fclass(kernel, grid, tol=1.0e-9, tail_tol=1.0e-2):
    """ Check the F-class conditions of ``kernel`` on a grid.

    F1 asks ``f(0) = 1`` and ``f`` nonincreasing, F2 asks ``r`` nondecreasing
    in ``[0, 1]`` and close to 1 at the end of the grid, F4 asks
    ``z(u) = -u f'(u)/f(u)`` nondecreasing. F3 is carried by
    ``kernel.kinks`` and not checked. The ``envelope`` entry checks
    ``r(u) <= min(1, u)``. Violations are reported, never raised.

    Args:
        kernel (Kernel):
            Kernel to validate.
        grid (array_like):
            Increasing positive ``u`` values.
        tol (float, optional):
            Relative slack on monotonicity. Defaults to ``1e-9``.
        tail_tol (float, optional):
            Allowed gap ``1 - r(u_max)``. Defaults to ``1e-2``.

    Returns:
        FClassReport

    """

    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(grid <= 0.0) or np.any(np.diff(grid) <= 0.0):
        raise DomainError('validate_fclass needs an increasing grid of at least two positive values')

    f_values = np.array([float(kernel.f(u)) for u in grid])
    r_values = grid * f_values
    conditions = {}

    f0 = float(kernel.f(0.0))
    first = None if abs(f0 - 1.0) <= 1.0e-12 else 0.0
    if first is None:
        first = _first_increase(grid, f_values, tol)
    conditions['F1'] = ConditionResult('F1', first is None, first, f'f(0) = {f0!r}')

    first = None
    bad_range = np.nonzero((r_values < -tol) | (r_values > 1.0 + tol))[0]
    if bad_range.size:
        first = float(grid[bad_range[0]])
    rise = _first_increase(grid, -r_values, tol)
    if rise is not None and (first is None or rise < first):
        first = rise
    tail_gap = 1.0 - r_values[-1]
    if first is None and tail_gap > tail_tol:
        first = float(grid[-1])
    conditions['F2'] = ConditionResult('F2', first is None, first, f'1 - r(u_max) = {tail_gap!r}')

    smooth = [u for u in grid if all(abs(u - k) > max(1.0e-6, 1.0e-6 * u) for k in kernel.kinks)]
    z_values = np.array([_log_derivative(kernel, u) for u in smooth])
    first = _first_increase(smooth, -z_values, tol) if len(smooth) > 1 else None
    conditions['F4'] = ConditionResult('F4', first is None, first, f'{grid.size - len(smooth)} grid points skipped at kinks')

    over = np.nonzero(r_values > np.minimum(1.0, grid) * (1.0 + 1.0e-12))[0]
    first = float(grid[over[0]]) if over.size else None
    conditions['envelope'] = ConditionResult('envelope', first is None, first)

    return FClassReport(kernel.name, float(grid[0]), float(grid[-1]), int(grid.size), conditions)
