import math
import os

import numpy as np
import pytest

from hvclust.Analytic import c_average, expected_degree
from hvclust.Errors import ConstraintError, DomainError
from hvclust.Kernels import MAX_DENSE, POISSON
from hvclust.PowerLaw import CutoffScheme, PowerLawModel, default_cutoffs
from hvclust.Simulation import (SimulationSetup, compare_bins, replica_rng, run_replicas, simulate_graph)


def _setup(tau=2.5, n=300, kernel=MAX_DENSE, **kwargs):
    model = PowerLawModel(tau, 1.0, n)
    return SimulationSetup(kernel, model, default_cutoffs(model), **kwargs)


@pytest.mark.unit
def test_replica_streams():
    first = replica_rng(5, 0).random(4)
    assert np.array_equal(first, replica_rng(5, 0).random(4))
    assert not np.array_equal(first, replica_rng(5, 1).random(4))
    assert not np.array_equal(first, replica_rng(6, 0).random(4))
    replica_rng(2 ** 64 - 1, 3)


@pytest.mark.unit
@pytest.mark.parametrize('seed', [-1, 2 ** 64])
def test_seed_range(seed):
    with pytest.raises(DomainError, match='seed'):
        replica_rng(seed, 0)


@pytest.mark.unit
def test_setup_validation():
    with pytest.raises(DomainError, match='Unknown generator'):
        _setup(generator='chung-lu')
    with pytest.raises(DomainError):
        _setup(n_bins=0)
    model = PowerLawModel(2.5, 1.0, 100)
    with pytest.raises(ConstraintError):
        SimulationSetup(MAX_DENSE, model, CutoffScheme.from_ab(0.5, 4.0))


@pytest.mark.unit
def test_graph_of_replica_is_reproducible():
    setup = _setup()
    graph = simulate_graph(setup, 99, 3)
    assert graph.n == 300
    assert graph.hidden.min() >= 1.0 and graph.hidden.max() <= setup.scheme.h_c
    assert graph.same_as(simulate_graph(setup, 99, 3))
    assert not graph.same_as(simulate_graph(setup, 99, 4))


@pytest.mark.unit
def test_pooled_result_does_not_depend_on_threads():
    setup = _setup(kernel=POISSON)
    serial = run_replicas(setup, 2024, 6, threads=1)
    parallel = run_replicas(setup, 2024, 6, threads=2)

    assert serial.c_global_values == parallel.c_global_values
    assert serial.to_dict() == parallel.to_dict()
    assert [b.to_dict() for b in serial.bins_k] == [b.to_dict() for b in parallel.bins_k]


@pytest.mark.unit
def test_replica_count_is_checked():
    with pytest.raises(DomainError, match='replicas'):
        run_replicas(_setup(), 1, 0)


@pytest.mark.unit
def test_edge_lists_are_exported(tmp_path):
    setup = _setup(n=100)
    export = tmp_path / 'edges'
    run_replicas(setup, 7, 3, export_dir=str(export))

    assert sorted(os.listdir(export)) == ['edges_r0000.txt', 'edges_r0001.txt', 'edges_r0002.txt']
    pairs = np.loadtxt(export / 'edges_r0001.txt', dtype=np.int64, ndmin=2)
    graph = simulate_graph(setup, 7, 1)
    assert pairs.reshape(-1, 2).tolist() == graph.edges().tolist()


@pytest.mark.unit
def test_compare_rows():
    setup = _setup(n=200, n_bins=5)
    pooled = run_replicas(setup, 3, 4)
    rows = compare_bins(setup, pooled, min_count=10 ** 9)

    assert len(rows) == 5
    assert list(rows[0]) == ['h_bin_center', 'c_empirical', 'stderr', 'c_analytic', 'c_finite', 'count']
    assert sum(row['count'] for row in rows) == 4 * 200
    assert all(math.isnan(row['c_analytic']) for row in rows)


@pytest.mark.regression
@pytest.mark.parametrize('tau', [2.1, 2.5, 2.9])
def test_average_clustering_matches_analytic(tau):
    setup = _setup(tau, 10 ** 4)
    pooled = run_replicas(setup, 1234, 200, threads=-1)
    analytic = c_average(MAX_DENSE, setup.scheme, tau, 1.0, 10 ** 4)
    assert pooled.c_global_mean == pytest.approx(analytic.c_avg, rel=0.1)


@pytest.mark.regression
def test_plateau_bins_match_analytic_curves():
    setup = _setup(2.5, 10 ** 4)
    pooled = run_replicas(setup, 4321, 200, threads=-1)
    plateau = setup.scheme.h_s ** 2 / setup.scheme.h_c

    rows = compare_bins(setup, pooled, min_count=500)
    checked = 0
    for row, hbin in zip(rows, pooled.bins_h):
        if hbin.hi > plateau or row['count'] < 500:
            continue
        assert abs(row['c_empirical'] - row['c_finite']) <= 3.0 * row['stderr']
        assert abs(row['c_empirical'] - row['c_analytic']) <= 3.0 * row['stderr']
        assert row['c_analytic'] == pytest.approx(row['c_finite'], rel=0.1)
        checked += 1
    assert checked >= 3


@pytest.mark.regression
def test_mean_degree_tracks_hidden_variable():
    setup = _setup(2.5, 2000)
    scheme, model = setup.scheme, setup.model
    plateau = scheme.h_s ** 2 / scheme.h_c
    edges = np.geomspace(model.h_min, plateau, 6)

    # r(u) = u whenever h*h' <= h_s**2, so the expected degree is linear in h here
    slope = expected_degree(MAX_DENSE, scheme, model.tau, model.h_min, model.n_vertices, 1.0)
    assert slope == pytest.approx(1.0, rel=0.05)

    residuals = []
    for replica in range(100):
        graph = simulate_graph(setup, 555, replica)
        index = np.searchsorted(edges, graph.hidden, side='right') - 1
        excess = graph.degrees() - slope * graph.hidden
        residuals.append([excess[index == i].mean() for i in range(len(edges) - 1)])

    residuals = np.array(residuals)
    means = residuals.mean(axis=0)
    stderr = residuals.std(axis=0, ddof=1) / math.sqrt(residuals.shape[0])
    assert np.all(np.abs(means) <= 3.0 * stderr)
