""" Replicated graph simulations and their comparison with the analytic curves. """

import os
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from hvclust.Analytic import DEFAULT_CONFIG, bin_clustering
from hvclust.Clustering import DEFAULT_BINS, pool_reports, report
from hvclust.Errors import DomainError
from hvclust.GraphGenerators import GENERATORS, generate
from hvclust.PowerLaw import sample_hidden


SEED_DERIVATION = 'numpy.random.SeedSequence(entropy=seed, spawn_key=(replica,))'
MAX_SEED = 2 ** 64


def check_seed(seed):
    seed = int(seed)
    if not 0 <= seed < MAX_SEED:
        raise DomainError(f'Value seed={seed} is outside allowed interval [0, 2**64)')
    return seed


def replica_rng(seed, replica):
    """ Independent random stream of replica ``replica`` under master seed ``seed``. """
    sequence = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=(int(replica),))
    return np.random.default_rng(sequence)


@dataclass(frozen=True)
class SimulationSetup:
    """ Everything a replica needs besides its seed. """

    kernel: object
    model: object
    scheme: object
    generator: str = 'fast'
    n_bins: int = DEFAULT_BINS

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise DomainError(f'Unknown generator "{self.generator}", choose from {GENERATORS}')
        if int(self.n_bins) < 1:
            raise DomainError(f'Value bins={self.n_bins} is outside allowed interval [1, inf)')
        self.scheme.check_chain(self.model.h_min)

    @property
    def h_range(self):
        return self.model.h_min, self.scheme.h_c


def simulate_graph(setup, seed, replica):
    """ Hidden variables on ``[h_min, h_c]`` and one graph for a replica. """
    rng = replica_rng(seed, replica)
    hidden = sample_hidden(setup.model, setup.scheme.h_c, setup.model.n_vertices, rng)
    return generate(setup.kernel, hidden, setup.scheme, rng, setup.generator)


def simulate_replica(setup, seed, replica, export_dir=None):
    graph = simulate_graph(setup, seed, replica)

    if export_dir:
        graph.write_edge_list(os.path.join(export_dir, f'edges_r{replica:04d}.txt'))

    return report(graph, setup.n_bins, setup.h_range, warn_empty=False)


def run_replicas(setup, seed, replicas, threads=1, export_dir=None, verbose=False):
    """ Simulate ``replicas`` graphs in parallel and pool their reports.

    Every replica draws from its own stream, so the pooled result does not
    depend on ``threads``.

    Args:
        setup (SimulationSetup):
            Kernel, model, cutoffs, generator and binning.
        seed (int):
            Master seed in ``[0, 2**64)``.
        replicas (int):
            Number of independent graphs.
        threads (int, optional):
            Worker processes, ``-1`` for all cores. Defaults to 1.
        export_dir (str, optional):
            Write each replica's edge list into this directory.
        verbose (bool, optional):
            Report progress.

    Returns:
        PooledReport

    """

    seed = check_seed(seed)
    replicas = int(replicas)
    if replicas < 1:
        raise DomainError(f'Value replicas={replicas} is outside allowed interval [1, inf)')
    if export_dir:
        os.makedirs(export_dir, exist_ok=True)

    if verbose:
        print(f'Simulating {replicas} replicas of N = {setup.model.n_vertices} '
              f'({setup.kernel.name}, tau = {setup.model.tau}) on {threads} worker(s)')

    reports = Parallel(n_jobs=threads, verbose=10 if verbose else 0)(
        delayed(simulate_replica)(setup, seed, r, export_dir) for r in range(replicas))

    return pool_reports(reports)


def compare_bins(setup, pooled, cfg=DEFAULT_CONFIG, min_count=1, verbose=False):
    """ Join pooled hidden-variable bins with their analytic counterparts.

    Returns:
        list(dict):
            Rows with ``h_bin_center``, ``c_empirical``, ``stderr``,
            ``c_analytic``, ``c_finite`` and ``count``; bins with fewer than
            ``min_count`` vertices have no analytic values.

    """

    model, scheme = setup.model, setup.scheme
    rows = []
    for hbin in pooled.bins_h:
        c_analytic = c_finite = float('nan')
        if hbin.count >= min_count:
            c_analytic, c_finite = bin_clustering(setup.kernel, scheme, model.tau, model.h_min,
                                                  model.n_vertices, hbin.lo, hbin.hi, cfg)
        rows.append({
            'h_bin_center': hbin.center,
            'c_empirical': hbin.mean,
            'stderr': hbin.stderr,
            'c_analytic': c_analytic,
            'c_finite': c_finite,
            'count': hbin.count,
        })
        if verbose:
            print(f'h = {hbin.center:.4g}: empirical {hbin.mean:.5g}, analytic {c_analytic:.5g}')

    return rows
