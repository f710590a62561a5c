import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from hvclust.Errors import ConstraintError, DomainError
from hvclust.PowerLaw import (CutoffScheme, PowerLawModel, asymptotic_mean, default_cutoffs, mean_h,
                              mean_h_envelope, natural_cutoff_approx, natural_cutoff_bounds, natural_cutoff_exact,
                              natural_cutoff_monte_carlo, sample_hidden, truncated_cdf, truncated_mean)


@pytest.mark.unit
def test_model_validation():
    assert PowerLawModel(2.0, 1.0, 1e6).n_vertices == 1000000
    assert PowerLawModel(3.0, 0.5, 10).tau == 3.0
    with pytest.raises(DomainError, match='outside allowed interval'):
        PowerLawModel(3.5, 1.0, 100)
    with pytest.raises(DomainError):
        PowerLawModel(2.5, 0.0, 100)
    with pytest.raises(DomainError):
        PowerLawModel(2.5, 1.0, 10.5)


@pytest.mark.unit
def test_mean_h_known_value():
    # tau = 3 on [1, N]: 2 (1 - 1/N) / (1 - 1/N**2) = 2 N / (N + 1)
    model = PowerLawModel(3.0, 1.0, 100)
    assert mean_h(model) == pytest.approx(200.0 / 101.0, rel=1e-14)


@pytest.mark.unit
def test_mean_h_limit_at_two_is_continuous():
    model = PowerLawModel(2.0, 1.0, 10 ** 4)
    limit = mean_h(model)
    assert limit == pytest.approx(math.log(1e4) / (1.0 - 1e-4), rel=1e-14)
    assert mean_h(model.with_tau(2.0 + 2e-6)) == pytest.approx(limit, rel=1e-4)


@pytest.mark.unit
def test_mean_envelope_orders():
    model = PowerLawModel(2.4, 1.0, 10 ** 5)
    low, high = mean_h_envelope(model)
    assert low < mean_h(model) < high


@pytest.mark.unit
def test_truncated_mean_empty_support():
    with pytest.raises(DomainError):
        truncated_mean(2.5, 3.0, 3.0)


@pytest.mark.unit
def test_default_cutoffs_formula(model_25):
    scheme = default_cutoffs(model_25)
    scale = model_25.n_vertices * mean_h(model_25)
    assert scheme.h_s == pytest.approx(math.sqrt(scale), rel=1e-14)
    assert scheme.h_c == pytest.approx(scale ** (1.0 / 1.5), rel=1e-14)
    assert scheme.a == pytest.approx(1.0 / scheme.h_s, rel=1e-14)
    assert scheme.b == pytest.approx(scheme.h_c / scheme.h_s, rel=1e-14)


@pytest.mark.unit
@pytest.mark.parametrize('tau', [2.0, 2.05, 2.3, 2.7, 3.0])
@pytest.mark.parametrize('n', [10, 1000, 10 ** 7])
def test_default_cutoffs_obey_chain(tau, n):
    model = PowerLawModel(tau, 1.0, n)
    scheme = default_cutoffs(model)
    lower = scheme.a * model.h_min
    assert 0.0 < lower <= lower * scheme.b <= 1.0 + 1e-12
    assert scheme.b >= 1.0 - 1e-12


@pytest.mark.unit
def test_asymptotic_convention(model_25):
    scheme = default_cutoffs(model_25, 'asymptotic')
    assert scheme.h_s == pytest.approx(math.sqrt(model_25.n_vertices * 3.0), rel=1e-14)
    with pytest.raises(DomainError, match='diverges'):
        asymptotic_mean(model_25.with_tau(2.0))
    with pytest.raises(DomainError, match='Unknown cutoff convention'):
        default_cutoffs(model_25, 'natural')


@pytest.mark.unit
def test_chain_violation_names_inequality():
    with pytest.raises(ConstraintError, match=r'a\*h_min\*b <= 1'):
        CutoffScheme.from_ab(0.5, 4.0).check_chain(1.0)
    with pytest.raises(ConstraintError, match='b >= 1'):
        CutoffScheme.from_ab(0.1, 0.5).check_chain(1.0)


@pytest.mark.regression
def test_sampling_matches_truncated_cdf(rng):
    model = PowerLawModel(2.5, 1.0, 10 ** 6)
    upper = 1.0e4
    draws = sample_hidden(model, upper, 10 ** 5, rng)
    assert draws.min() >= 1.0 and draws.max() <= upper

    statistic, p_value = stats.kstest(draws, truncated_cdf(model, upper))
    # 1% critical value for 1e5 samples
    assert statistic < 1.628 / math.sqrt(1e5)


@pytest.mark.unit
@settings(max_examples=50, deadline=None)
@given(tau=st.floats(min_value=2.0, max_value=3.0), upper=st.floats(min_value=1.5, max_value=1e9),
       seed=st.integers(min_value=0, max_value=2 ** 32))
def test_samples_stay_in_support(tau, upper, seed):
    model = PowerLawModel(tau, 1.0, 100)
    draws = sample_hidden(model, upper, 500, np.random.default_rng(seed))
    assert np.all(draws >= 1.0)
    assert np.all(draws <= upper)


@pytest.mark.unit
def test_sampler_rejects_bad_arguments(model_25, rng):
    with pytest.raises(DomainError):
        sample_hidden(model_25, 0.5, 10, rng)
    with pytest.raises(DomainError):
        sample_hidden(model_25, 100.0, 0, rng)


@pytest.mark.unit
def test_natural_cutoff_at_one_vertex():
    # E[max] of a single draw is the mean h_min (tau-1)/(tau-2)
    model = PowerLawModel(2.5, 1.0, 1)
    assert natural_cutoff_exact(model) == pytest.approx(3.0, rel=1e-12)


@pytest.mark.unit
@pytest.mark.parametrize('tau', [2.1, 2.5, 2.9, 3.0])
@pytest.mark.parametrize('n', [10, 100, 10 ** 4, 10 ** 8])
def test_natural_cutoff_sandwich(tau, n):
    model = PowerLawModel(tau, 1.0, n)
    lower, upper = natural_cutoff_bounds(model)
    assert upper == pytest.approx(4.0 * lower / 3.0, rel=1e-15)
    assert lower <= natural_cutoff_exact(model) <= upper


@pytest.mark.unit
def test_natural_cutoff_approx_is_large_n_limit():
    model = PowerLawModel(2.5, 1.0, 10 ** 7)
    assert natural_cutoff_approx(model) == pytest.approx(natural_cutoff_exact(model), rel=1e-5)


@pytest.mark.unit
def test_natural_cutoff_needs_open_interval():
    with pytest.raises(DomainError):
        natural_cutoff_exact(PowerLawModel(2.0, 1.0, 100))


@pytest.mark.regression
def test_monte_carlo_maximum_within_three_percent(rng):
    model = PowerLawModel(2.5, 1.0, 10 ** 4)
    estimate = natural_cutoff_monte_carlo(model, 10 ** 4, rng)
    exact = natural_cutoff_exact(model)
    assert estimate.mean == pytest.approx(exact, rel=0.03)
    assert abs(estimate.mean - exact) < 5.0 * estimate.stderr
    assert estimate.replicates == 10 ** 4


@pytest.mark.unit
def test_mean_and_cutoffs_at_one_million():
    model = PowerLawModel(2.5, 1.0, 10 ** 6)
    assert mean_h(model) == pytest.approx(3.0 * (1.0 - 1e-3) / (1.0 - 1e-9), rel=1e-14)
    assert mean_h(model.with_tau(3.0 - 1e-9)) == pytest.approx(2.0, rel=1e-5)
    assert mean_h(model.with_tau(2.0)) == pytest.approx(math.log(1e6), rel=1e-5)

    scheme = default_cutoffs(model)
    assert scheme.h_s == pytest.approx(1731.2, rel=1e-4)
    assert scheme.h_c == pytest.approx(2.077e4, rel=1e-3)
    assert scheme.b == pytest.approx(12.0, rel=1e-3)


@pytest.mark.unit
def test_mean_decreases_in_tau():
    model = PowerLawModel(2.5, 1.0, 10 ** 6)
    values = [mean_h(model.with_tau(tau)) for tau in np.arange(2.05, 2.96, 0.05)]
    assert all(x > y for x, y in zip(values, values[1:]))


@pytest.mark.unit
def test_b_is_one_at_tau_three():
    scheme = default_cutoffs(PowerLawModel(3.0, 1.0, 10 ** 5))
    assert scheme.b == pytest.approx(1.0, rel=1e-12)


@pytest.mark.regression
def test_sample_mean_matches_truncated_mean(rng):
    model = PowerLawModel(2.5, 1.0, 10 ** 6)
    draws = sample_hidden(model, 1.0e4, 10 ** 6, rng)
    stderr = draws.std(ddof=1) / math.sqrt(draws.size)
    assert abs(draws.mean() - truncated_mean(2.5, 1.0, 1.0e4)) < 4.0 * stderr
