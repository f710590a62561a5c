import math
import warnings

import numpy as np
import pytest

from hvclust.Analytic import (AnalyticConfig, a_factor, bin_clustering, c_ab_h, c_average, c_average_sweep, c_bounds,
                              c_max_approx, c_max_closed, c_max_ratio, degree_factor, degree_pmf, envelope_c,
                              expected_degree, front_factor, g_ratio, local_clustering_analytic,
                              local_clustering_finite, persistence_approx, persistence_threshold_n, scaling_exponent)
from hvclust.Errors import ConstraintError, DomainError, NumericalWarning
from hvclust.Kernels import BUILT_IN_KERNELS, MAX_DENSE, MAX_RANDOM, POISSON
from hvclust.PowerLaw import CutoffScheme, PowerLawModel, default_cutoffs, truncated_mean


TAU_GRID = [2.1, 2.2, 2.3, 2.4, 2.5, 2.6, 2.7, 2.8, 2.9]
H_GRID = [0.0] + np.geomspace(1.0, 1.0e4, 19).tolist()


def _defaults(tau, n, h_min=1.0):
    model = PowerLawModel(tau, h_min, n)
    return model, default_cutoffs(model)


@pytest.mark.unit
def test_config_validation():
    with pytest.raises(DomainError):
        AnalyticConfig(abs_tol=0.0)
    with pytest.raises(DomainError):
        AnalyticConfig(rel_tol=1e-16)
    assert AnalyticConfig(rel_tol=1e-8).inner.rel_tol == pytest.approx(1e-10)


@pytest.mark.unit
@pytest.mark.parametrize('tau, t, expected', [
    (2.3, 2.0, 2.37e4),
    (2.2, 2.0, 2.62e5),
    (2.1, 2.0, 1.93e9),
    (2.05, 2.0, 3.92e17),
])
def test_persistence_threshold_table(tau, t, expected):
    assert persistence_threshold_n(tau, t) == pytest.approx(expected, rel=5e-3)


@pytest.mark.unit
def test_persistence_threshold_solves_equation():
    n = persistence_threshold_n(2.4, 1.0)
    assert n * math.log(n) == pytest.approx(math.exp(1.4 / (0.4 * 0.6)), rel=1e-10)


@pytest.mark.unit
@pytest.mark.parametrize('tau, t', [(2.0, 1.0), (3.0, 1.0), (2.5, 0.0), (2.5, 3.0)])
def test_persistence_threshold_domain(tau, t):
    with pytest.raises(DomainError, match='outside allowed interval'):
        persistence_threshold_n(tau, t)


@pytest.mark.unit
def test_degree_factor():
    assert degree_factor(0.0) == 0.0
    assert degree_factor(2.0) == pytest.approx(1.0 - 3.0 * math.exp(-2.0), rel=1e-14)
    assert degree_factor(50.0) == pytest.approx(1.0, abs=1e-18)


@pytest.mark.regression
def test_a_factor_limits_and_order():
    assert a_factor(2.5, 20.0, 10 ** 6).value == pytest.approx(1.0, abs=1e-6)

    values = [a_factor(tau, 1.0, 10 ** 6).value for tau in TAU_GRID]
    assert all(0.0 < v < 1.0 for v in values)
    assert all(x > y for x, y in zip(values, values[1:]))


@pytest.mark.regression
def test_degree_distribution_complements_a_factor():
    model = PowerLawModel(2.5, 1.0, 10 ** 4)
    low_degrees = degree_pmf(model, 0) + degree_pmf(model, 1)
    assert low_degrees + a_factor(2.5, 1.0, 10 ** 4).value == pytest.approx(1.0, abs=1e-7)
    assert degree_pmf(model, 3) > degree_pmf(model, 30) > 0.0


@pytest.mark.regression
@pytest.mark.parametrize('n', [10 ** 4, 10 ** 6])
@pytest.mark.parametrize('tau', TAU_GRID)
def test_closed_form_matches_quadrature(tau, n, tight_cfg):
    model, scheme = _defaults(tau, n)
    quadrature = c_ab_h(MAX_DENSE, scheme, tau, 1.0, 0.0, tight_cfg)
    assert quadrature.value == pytest.approx(c_max_ratio(scheme, tau, 1.0), rel=1e-6)


@pytest.mark.unit
def test_closed_form_is_continuous_at_end_points():
    scheme = CutoffScheme.from_ab(0.01, 10.0)
    for end, inside in [(2.0, 2.0 + 1e-7), (3.0, 3.0 - 1e-7)]:
        assert c_max_ratio(scheme, end, 1.0) == pytest.approx(c_max_ratio(scheme, inside, 1.0), rel=1e-5)
        assert math.isfinite(front_factor(scheme, end, 1.0))


@pytest.mark.regression
def test_closed_form_at_end_points_matches_quadrature(fixed_scheme, tight_cfg):
    for tau in (2.0, 3.0):
        quadrature = c_ab_h(MAX_DENSE, fixed_scheme, tau, 1.0, 0.0, tight_cfg)
        assert quadrature.value == pytest.approx(c_max_ratio(fixed_scheme, tau, 1.0), rel=1e-6)


@pytest.mark.regression
def test_c_average_max_dense(scheme_25):
    result = c_average(MAX_DENSE, scheme_25, 2.5, 1.0, 10 ** 6)
    closed = c_max_closed(scheme_25, 2.5, 1.0, 10 ** 6)
    assert result.c_avg == pytest.approx(closed, rel=1e-6)
    assert result.c_max_closed == pytest.approx(closed, rel=1e-14)
    assert result.bound_low == result.bound_high == result.c_max_closed
    assert result.c_avg_error < 1e-5 * result.c_avg
    assert result.to_dict()['kernel'] == 'max-dense'


@pytest.mark.regression
def test_c_average_max_random_sandwich(scheme_25):
    result = c_average(MAX_RANDOM, scheme_25, 2.5, 1.0, 10 ** 6)
    assert result.bound_low == pytest.approx(0.5 * result.bound_high, rel=1e-14)
    assert result.bound_low <= result.c_avg <= result.bound_high
    assert result.c_max_closed is None


@pytest.mark.regression
@pytest.mark.parametrize('n', [10 ** 4, 10 ** 6])
@pytest.mark.parametrize('tau', TAU_GRID)
@pytest.mark.parametrize('kernel', [POISSON, MAX_RANDOM], ids=['poisson', 'max-random'])
def test_bounds_sandwich_is_strict(kernel, tau, n):
    model, scheme = _defaults(tau, n)
    result = c_average(kernel, scheme, tau, 1.0, n, u0_grid=(1.0, 2.0, 4.0))
    slack = 10.0 * result.c_avg_error
    assert result.bound_low + slack < result.c_avg < result.bound_high - slack


@pytest.mark.regression
@pytest.mark.parametrize('tau', [2.1, 2.5, 2.9])
def test_bounds_collapse_for_max_dense(tau):
    model, scheme = _defaults(tau, 10 ** 4)
    result = c_average(MAX_DENSE, scheme, tau, 1.0, 10 ** 4, u0_grid=(1.0, 2.0, 4.0))
    assert result.bound_low == result.bound_high
    assert result.c_avg == pytest.approx(result.bound_high, rel=1e-6)


@pytest.mark.regression
def test_bound_grid_skips_points_outside_closed_form(scheme_25):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        lower, upper = c_bounds(POISSON, scheme_25, 2.5, 1.0, 10 ** 6, (1.0, 4.0, 1.0e3))
    assert any(issubclass(w.category, NumericalWarning) for w in caught)
    assert 0.0 < lower < upper

    with pytest.raises(DomainError):
        c_bounds(POISSON, scheme_25, 2.5, 1.0, 10 ** 6, (0.5,))


@pytest.mark.regression
@pytest.mark.parametrize('name', sorted(BUILT_IN_KERNELS))
def test_c_ab_nonincreasing_in_h(name, scheme_25):
    kernel = BUILT_IN_KERNELS[name]
    cfg = AnalyticConfig(rel_tol=1e-8)
    values = [c_ab_h(kernel, scheme_25, 2.5, 1.0, h, cfg) for h in H_GRID]
    for x, y in zip(values, values[1:]):
        assert y.value <= x.value + 10.0 * (x.error + y.error)


@pytest.mark.regression
def test_plateau_below_structural_cutoff(scheme_25):
    zero = c_ab_h(MAX_DENSE, scheme_25, 2.5, 1.0, 0.0).value
    assert c_ab_h(MAX_DENSE, scheme_25, 2.5, 1.0, 1.0).value == pytest.approx(zero, rel=1e-3)


@pytest.mark.regression
@pytest.mark.parametrize('name', sorted(BUILT_IN_KERNELS))
def test_c_ab_nonincreasing_in_tau_for_fixed_cutoffs(name, fixed_scheme):
    values = [c_ab_h(BUILT_IN_KERNELS[name], fixed_scheme, tau, 1.0, 0.0) for tau in TAU_GRID]
    for x, y in zip(values, values[1:]):
        assert y.value <= x.value + 10.0 * (x.error + y.error)


@pytest.mark.regression
@pytest.mark.parametrize('name', sorted(BUILT_IN_KERNELS))
def test_g_ratio_nondecreasing_in_a_and_b(name):
    kernel = BUILT_IN_KERNELS[name]
    by_a = [g_ratio(kernel, 2.5, a, 10.0, 1.0).value for a in (1e-4, 1e-3, 1e-2, 5e-2, 1e-1)]
    by_b = [g_ratio(kernel, 2.5, 1e-3, b, 1.0).value for b in (2.0, 5.0, 10.0, 50.0, 100.0)]
    assert all(y >= x * (1.0 - 1e-7) for x, y in zip(by_a, by_a[1:]))
    assert all(y >= x * (1.0 - 1e-7) for x, y in zip(by_b, by_b[1:]))

    with pytest.raises(DomainError, match='empty'):
        g_ratio(MAX_RANDOM, 2.5, 1.0, 0.5, 1.0)


@pytest.mark.unit
def test_chain_is_enforced():
    with pytest.raises(ConstraintError):
        c_ab_h(MAX_DENSE, CutoffScheme.from_ab(0.5, 4.0), 2.5, 1.0, 0.0)
    with pytest.raises(DomainError):
        c_ab_h(MAX_DENSE, CutoffScheme.from_ab(0.01, 10.0), 2.5, 1.0, -1.0)


@pytest.mark.regression
def test_local_clustering_limits(scheme_25):
    assert local_clustering_analytic(POISSON, scheme_25, 2.5, 1.0, 0.0).value == 0.0

    h = 200.0
    c = local_clustering_analytic(POISSON, scheme_25, 2.5, 1.0, h).value
    assert c == pytest.approx(c_ab_h(POISSON, scheme_25, 2.5, 1.0, h).value, rel=1e-12)


@pytest.mark.regression
def test_large_size_approximation(scheme_25):
    closed = c_max_closed(scheme_25, 2.5, 1.0, 10 ** 6)
    approx = c_max_approx(scheme_25, 2.5, 1.0, 10 ** 6)
    assert closed / approx == pytest.approx(1.0, abs=0.1)

    with pytest.raises(DomainError):
        c_max_approx(scheme_25, 3.0, 1.0, 10 ** 6)


@pytest.mark.regression
def test_scaling_exponent():
    fit = scaling_exponent(2.5, 1.0, [10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7, 10 ** 8])
    assert fit.slope == pytest.approx(2.0 - 2.5, abs=0.025)
    assert len(fit.values) == 5


@pytest.mark.regression
def test_persistence_at_two_is_half_a_factor():
    model, scheme = _defaults(2.0, 10 ** 6)
    result = persistence_approx(scheme, 2.0, 1.0, 10 ** 6)
    assert result.value == pytest.approx(a_factor(2.0, 1.0, 10 ** 6).value / 2.0, rel=1e-14)


@pytest.mark.regression
def test_persistence_close_to_closed_form():
    model, scheme = _defaults(2.05, 10 ** 6)
    result = persistence_approx(scheme, 2.05, 1.0, 10 ** 6)
    assert result.value == pytest.approx(c_max_closed(scheme, 2.05, 1.0, 10 ** 6), rel=0.15)
    assert result.validity_ratio == pytest.approx(0.05 / 0.95, rel=1e-9)


@pytest.mark.regression
def test_persistence_warns_outside_validity():
    model, scheme = _defaults(2.8, 10 ** 6)
    with pytest.warns(NumericalWarning):
        result = persistence_approx(scheme, 2.8, 1.0, 10 ** 6)
    assert result.validity_ratio == pytest.approx(0.8 / 0.2, rel=1e-9)


@pytest.mark.regression
def test_envelope_bounds_and_decreases():
    n = 10 ** 6
    envelopes = [envelope_c(MAX_DENSE, tau, 1.0, n).value for tau in TAU_GRID]
    assert all(x > y for x, y in zip(envelopes, envelopes[1:]))

    for tau, bound in zip(TAU_GRID, envelopes):
        model, scheme = _defaults(tau, n)
        assert c_max_closed(scheme, tau, 1.0, n) <= bound * (1.0 + 1e-7)


@pytest.mark.regression
def test_sweep_uses_default_cutoffs():
    results = c_average_sweep(MAX_DENSE, [2.2, 2.6], 1.0, 10 ** 4)
    assert [r.tau for r in results] == [2.2, 2.6]
    for r in results:
        model, scheme = _defaults(r.tau, 10 ** 4)
        assert r.h_s == pytest.approx(scheme.h_s, rel=1e-14)
        assert r.approx_main is not None


@pytest.mark.regression
def test_expected_degree_in_uncorrelated_regime(scheme_25):
    # r(u) = u for every partner, so the degree is h <h>_c / <h> up to N-1 over N
    n = 10 ** 6
    h = 10.0
    ratio = truncated_mean(2.5, 1.0, scheme_25.h_c) / truncated_mean(2.5, 1.0, float(n))
    expected = (n - 1) * h * ratio / n
    assert expected_degree(MAX_DENSE, scheme_25, 2.5, 1.0, n, h) == pytest.approx(expected, rel=1e-7)


@pytest.mark.regression
def test_finite_size_clustering(scheme_25):
    n = 10 ** 6
    for h in (2.0, 50.0):
        finite = local_clustering_finite(MAX_DENSE, scheme_25, 2.5, 1.0, n, h).value
        poisson = local_clustering_analytic(MAX_DENSE, scheme_25, 2.5, 1.0, h).value
        assert finite == pytest.approx(poisson, rel=0.05)

    c_analytic, c_finite = bin_clustering(MAX_DENSE, scheme_25, 2.5, 1.0, n, 30.0, 40.0)
    assert c_finite == pytest.approx(c_analytic, rel=1e-3)
    assert 0.0 < c_finite <= c_ab_h(MAX_DENSE, scheme_25, 2.5, 1.0, 0.0).value
