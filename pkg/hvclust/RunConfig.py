import yaml

from hvclust.Errors import DomainError
from hvclust.GraphGenerators import GENERATORS
from hvclust.Kernels import BUILT_IN_KERNELS
from hvclust.PowerLaw import CUTOFF_CONVENTIONS
from hvclust.Utilities import dict_to_yaml, print_dict, yaml_to_dict


SUBCOMMANDS = ('analytic', 'simulate', 'compare', 'persistence', 'natural-cutoff', 'table2', 'validate-kernel')

DEFAULTS = {
    'subcommand': 'analytic',
    'kernel': 'max-dense',
    'tau': 2.5,
    'h_min': 1.0,
    'n': 10000,
    'cutoffs': 'size-dependent',
    'replicas': 10,
    'seed': 0,
    'generator': 'fast',
    'threads': 1,
    'bins': 20,
    'export_edges': None,
    'h': None,
    'h_grid': None,
    'tau_grid': None,
    'u0_grid': '1',
    'closed_form': False,
    'abs_tol': 1.0e-13,
    'rel_tol': 1.0e-8,
    'max_subdivisions': 200,
    't': 2.0,
    'at_n': None,
    'mc_replicates': 0,
    's_grid': '0.1,0.2,0.3,0.4,0.5',
    'grid': 'geom:1e-3:1e3:61',
    'output_dir': None,
    'verbose': False,
}


def _choice(name, value, options):
    if value not in options:
        raise DomainError(f'Value {name}={value!r} is not one of {list(options)}')
    return value


def _integer(name, value, lowest):
    # exact for Python ints, so 64-bit seeds survive
    number = value if isinstance(value, int) else float(value)
    if number != round(number) or number < lowest:
        raise DomainError(f'Value {name}={value} is outside allowed interval [{lowest}, inf) of integers')
    return int(round(number))


class RunConfig(object):
    """ All parameters of one command-line run.

    Values come from the defaults, then an optional YAML file, then explicit
    command-line flags; every assignment is validated as it happens.
    """

    def __init__(self, **kwargs):
        for key, value in DEFAULTS.items():
            setattr(self, key, value)
        self.update(kwargs)

    def update(self, values):
        for key, value in values.items():
            if key not in DEFAULTS:
                raise DomainError(f'Unknown configuration key "{key}"')
            setattr(self, key, value)
        return self

    @property
    def subcommand(self):
        return self._subcommand

    @subcommand.setter
    def subcommand(self, a):
        self._subcommand = _choice('subcommand', a, SUBCOMMANDS)

    @property
    def kernel(self):
        return self._kernel

    @kernel.setter
    def kernel(self, a):
        self._kernel = _choice('kernel', a, tuple(BUILT_IN_KERNELS))

    @property
    def tau(self):
        return self._tau

    @tau.setter
    def tau(self, a):
        if not 2.0 <= float(a) <= 3.0:
            raise DomainError(f'Value tau={a} is outside allowed interval [2, 3]')
        self._tau = float(a)

    @property
    def h_min(self):
        return self._h_min

    @h_min.setter
    def h_min(self, a):
        if not float(a) > 0.0:
            raise DomainError(f'Value h_min={a} is outside allowed interval (0, inf)')
        self._h_min = float(a)

    @property
    def n(self):
        return self._n

    @n.setter
    def n(self, a):
        self._n = _integer('n', a, 1)

    @property
    def cutoffs(self):
        return self._cutoffs

    @cutoffs.setter
    def cutoffs(self, a):
        self._cutoffs = _choice('cutoffs', a, CUTOFF_CONVENTIONS)

    @property
    def replicas(self):
        return self._replicas

    @replicas.setter
    def replicas(self, a):
        self._replicas = _integer('replicas', a, 1)

    @property
    def seed(self):
        return self._seed

    @seed.setter
    def seed(self, a):
        seed = _integer('seed', a, 0)
        if seed >= 2 ** 64:
            raise DomainError(f'Value seed={a} is outside allowed interval [0, 2**64)')
        self._seed = seed

    @property
    def generator(self):
        return self._generator

    @generator.setter
    def generator(self, a):
        self._generator = _choice('generator', a, GENERATORS)

    @property
    def threads(self):
        return self._threads

    @threads.setter
    def threads(self, a):
        threads = int(a)
        if threads == 0 or threads < -1:
            raise DomainError(f'Value threads={a} must be positive or -1 for all cores')
        self._threads = threads

    @property
    def bins(self):
        return self._bins

    @bins.setter
    def bins(self, a):
        self._bins = _integer('bins', a, 1)

    @property
    def t(self):
        return self._t

    @t.setter
    def t(self, a):
        if not 0.0 < float(a) < 3.0:
            raise DomainError(f'Value t={a} is outside allowed interval (0, 3)')
        self._t = float(a)

    @property
    def mc_replicates(self):
        return self._mc_replicates

    @mc_replicates.setter
    def mc_replicates(self, a):
        self._mc_replicates = _integer('mc_replicates', a, 0)

    def to_dict(self):
        return {key: getattr(self, key) for key in DEFAULTS}

    @classmethod
    def load_from_file(cls, yaml_filename, verbose=False):
        return cls(**yaml_to_dict(yaml_filename, verbose))

    def write_to_file(self, yaml_filename, verbose=False):
        dict_to_yaml(self.to_dict(), yaml_filename, verbose=verbose)

    def __str__(self):
        return yaml.dump(self.to_dict(), sort_keys=False)

    def show(self):
        print_dict(self.to_dict())
