import numpy as np
import pytest

from hvclust.Analytic import AnalyticConfig
from hvclust.Kernels import MAX_DENSE, MAX_RANDOM, POISSON
from hvclust.PowerLaw import CutoffScheme, PowerLawModel, default_cutoffs


@pytest.fixture
def max_dense():
    return MAX_DENSE


@pytest.fixture
def max_random():
    return MAX_RANDOM


@pytest.fixture
def poisson():
    return POISSON


@pytest.fixture
def tight_cfg():
    return AnalyticConfig(abs_tol=1.0e-14, rel_tol=1.0e-10, max_subdivisions=400)


@pytest.fixture
def model_25():
    return PowerLawModel(2.5, 1.0, 10 ** 6)


@pytest.fixture
def scheme_25(model_25):
    return default_cutoffs(model_25)


@pytest.fixture
def fixed_scheme():
    # a*h_min = 0.01, b = 10
    return CutoffScheme.from_ab(0.01, 10.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
