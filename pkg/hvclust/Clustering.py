""" Exact triangle counts and empirical clustering statistics. """

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import List

import numpy as np

from hvclust.Errors import DomainError, NumericalWarning


BRUTE_FORCE_MAX_VERTICES = 200
DEFAULT_BINS = 20


def _intersect_sorted(first, second):
    """ Common elements of two increasing lists. """
    common = []
    i, j = 0, 0
    n1, n2 = len(first), len(second)
    while i < n1 and j < n2:
        x, y = first[i], second[j]
        if x == y:
            common.append(x)
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return common


def count_triangles(graph):
    """ Number of triangles through every vertex.

    Edges are oriented from lower to higher rank, rank being
    ``(degree, index)``; every triangle is then found once as the
    intersection of two forward lists.

    Args:
        graph (Graph):
            The graph.

    Returns:
        numpy.ndarray:
            Integer counts ``T_i``.

    """

    n = graph.n
    degrees = graph.degrees()
    order = np.lexsort((np.arange(n), degrees))
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)

    edges = graph.edges()
    ri, rj = rank[edges[:, 0]], rank[edges[:, 1]]
    lo, hi = np.minimum(ri, rj), np.maximum(ri, rj)
    arrange = np.lexsort((hi, lo))
    targets = hi[arrange].tolist()
    ptr = np.concatenate([[0], np.cumsum(np.bincount(lo, minlength=n))]).tolist()
    forward = [targets[ptr[r]:ptr[r + 1]] for r in range(n)]

    counts = [0] * n
    for r in range(n):
        mine = forward[r]
        for s in mine:
            theirs = forward[s]
            if not theirs:
                continue
            for t in _intersect_sorted(mine, theirs):
                counts[r] += 1
                counts[s] += 1
                counts[t] += 1

    triangles = np.zeros(n, dtype=np.int64)
    triangles[order] = counts
    return triangles


def count_triangles_brute(graph):
    """ Triangle counts by enumerating every vertex triple; small graphs only. """

    if graph.n > BRUTE_FORCE_MAX_VERTICES:
        raise DomainError(f'Brute-force counting is capped at {BRUTE_FORCE_MAX_VERTICES} vertices')

    adjacency = [set(graph.neighbors(i).tolist()) for i in range(graph.n)]
    triangles = np.zeros(graph.n, dtype=np.int64)

    for i, j, k in combinations(range(graph.n), 3):
        if j in adjacency[i] and k in adjacency[i] and k in adjacency[j]:
            triangles[[i, j, k]] += 1

    return triangles


def local_clustering(graph, triangles=None):
    """ ``c_i = 2 T_i / (k_i (k_i - 1))``, zero for degree below two. """

    if triangles is None:
        triangles = count_triangles(graph)

    degrees = graph.degrees().astype(float)
    pairs = degrees * (degrees - 1.0)
    clustering = np.zeros(graph.n, dtype=float)
    mask = degrees >= 2
    clustering[mask] = 2.0 * triangles[mask] / pairs[mask]

    return clustering


def transitivity(graph, triangles):
    """ Fraction of connected triples that close into triangles. """
    degrees = graph.degrees().astype(float)
    triples = float(np.sum(degrees * (degrees - 1.0) / 2.0))
    return float(np.sum(triangles)) / triples if triples > 0 else 0.0


@dataclass
class HBin:
    """ Clustering of the vertices whose hidden variable falls in ``[lo, hi)``.

    Besides the vertex sums, the bin keeps sums over the graphs it was
    pooled from: ``sum_s2`` of ``S_r**2``, ``sum_sn`` of ``S_r*n_r`` and
    ``sum_n2`` of ``n_r**2``, where graph ``r`` put ``n_r`` vertices with
    clustering sum ``S_r`` into the bin. Vertices of one graph share their
    hubs, so the standard error of a pooled bin is taken across graphs.
    """

    lo: float
    hi: float
    count: int = 0
    sum_c: float = 0.0
    sum_c2: float = 0.0
    replicas: int = 0
    sum_s2: float = 0.0
    sum_sn: float = 0.0
    sum_n2: float = 0.0

    @classmethod
    def of_graph(cls, lo, hi, count, sum_c, sum_c2):
        """ A bin filled from a single graph. """
        if count == 0:
            return cls(lo, hi)
        return cls(lo, hi, count, sum_c, sum_c2, 1, sum_c ** 2, sum_c * count, float(count) ** 2)

    @property
    def center(self):
        return math.sqrt(self.lo * self.hi)

    @property
    def mean(self):
        return self.sum_c / self.count if self.count else math.nan

    @property
    def vertex_stderr(self):
        """ Standard error treating the vertices as independent. """
        if self.count < 2:
            return math.nan
        variance = (self.sum_c2 - self.count * self.mean ** 2) / (self.count - 1)
        return math.sqrt(max(variance, 0.0) / self.count)

    @property
    def stderr(self):
        """ Cluster-robust standard error of :attr:`mean` with graphs as clusters.

        ``sqrt(g/(g-1) * sum_r (S_r - mean*n_r)**2) / count`` over the ``g``
        graphs that reached the bin. A bin seen by a single graph falls back
        to :attr:`vertex_stderr`.
        """
        if self.replicas < 2:
            return self.vertex_stderr
        m = self.mean
        residual = self.sum_s2 - 2.0 * m * self.sum_sn + m * m * self.sum_n2
        g = self.replicas
        return math.sqrt(g / (g - 1.0) * max(residual, 0.0)) / self.count

    def merge(self, other):
        return HBin(self.lo, self.hi, self.count + other.count,
                    self.sum_c + other.sum_c, self.sum_c2 + other.sum_c2,
                    self.replicas + other.replicas, self.sum_s2 + other.sum_s2,
                    self.sum_sn + other.sum_sn, self.sum_n2 + other.sum_n2)

    def to_dict(self):
        return {'lo': self.lo, 'hi': self.hi, 'center': self.center, 'count': self.count,
                'replicas': self.replicas, 'mean': self.mean, 'stderr': self.stderr}


@dataclass
class KBin:
    k: int
    count: int = 0
    sum_c: float = 0.0

    @property
    def mean(self):
        return self.sum_c / self.count if self.count else math.nan

    def to_dict(self):
        return {'k': self.k, 'count': self.count, 'mean': self.mean}


@dataclass
class ClusteringReport:
    """ Empirical clustering of one graph.

    ``c_global`` averages over all vertices; ``c_global_deg2`` over the
    vertices of degree at least two.
    """

    n_vertices: int
    c_global: float
    c_global_deg2: float
    n_deg2: int
    triangles_total: int
    transitivity: float
    mean_degree: float
    bins_h: List[HBin] = field(default_factory=list)
    bins_k: List[KBin] = field(default_factory=list)

    def to_dict(self):
        return {
            'n_vertices': self.n_vertices,
            'c_global': self.c_global,
            'c_global_deg2': self.c_global_deg2,
            'n_deg2': self.n_deg2,
            'triangles_total': self.triangles_total,
            'transitivity': self.transitivity,
            'mean_degree': self.mean_degree,
            'bins_h': [b.to_dict() for b in self.bins_h],
            'bins_k': [b.to_dict() for b in self.bins_k],
        }


def log_bin_edges(lo, hi, n_bins=DEFAULT_BINS):
    if not (hi > lo > 0.0) or int(n_bins) < 1:
        raise DomainError(f'Cannot place {n_bins} logarithmic bins on [{lo}, {hi}]')
    return np.geomspace(lo, hi, int(n_bins) + 1)


def _warn_empty_bins(bins_h):
    empty = [i for i, b in enumerate(bins_h) if b.count == 0]
    if empty:
        warnings.warn(f'Hidden-variable bins {empty} are empty; their mean is undefined', NumericalWarning)


def report(graph, n_bins=DEFAULT_BINS, h_range=None, triangles=None, warn_empty=True):
    """ Clustering statistics of a graph.

    Args:
        graph (Graph):
            The graph with its hidden variables.
        n_bins (int, optional):
            Number of logarithmic hidden-variable bins. Defaults to 20.
        h_range (tuple(float, float), optional):
            Range of the bins, normally ``(h_min, h_c)``. Defaults to the
            observed range of the hidden variables.
        triangles (numpy.ndarray, optional):
            Precomputed triangle counts.
        warn_empty (bool, optional):
            Emit a NumericalWarning when some bins stay empty. Defaults to True.

    Returns:
        ClusteringReport

    """

    if triangles is None:
        triangles = count_triangles(graph)
    clustering = local_clustering(graph, triangles)
    degrees = graph.degrees()

    if h_range is None:
        h_range = (float(graph.hidden.min()), float(graph.hidden.max()))
    lo, hi = h_range
    if not hi > lo:
        hi = lo * (1.0 + 1.0e-9)
    edges = log_bin_edges(lo, hi, n_bins)

    index = np.searchsorted(edges, graph.hidden, side='right') - 1
    index[graph.hidden == edges[-1]] = len(edges) - 2
    inside = (index >= 0) & (index < len(edges) - 1)
    nb = len(edges) - 1
    counts = np.bincount(index[inside], minlength=nb)
    sums = np.bincount(index[inside], weights=clustering[inside], minlength=nb)
    squares = np.bincount(index[inside], weights=clustering[inside] ** 2, minlength=nb)
    bins_h = [HBin.of_graph(float(edges[i]), float(edges[i + 1]), int(counts[i]), float(sums[i]), float(squares[i]))
              for i in range(nb)]
    if warn_empty:
        _warn_empty_bins(bins_h)

    k_counts = np.bincount(degrees)
    k_sums = np.bincount(degrees, weights=clustering)
    bins_k = [KBin(int(k), int(k_counts[k]), float(k_sums[k])) for k in np.nonzero(k_counts)[0]]

    deg2 = degrees >= 2
    n_deg2 = int(np.sum(deg2))

    return ClusteringReport(
        n_vertices=graph.n,
        c_global=float(clustering.mean()),
        c_global_deg2=float(clustering[deg2].mean()) if n_deg2 else 0.0,
        n_deg2=n_deg2,
        triangles_total=int(np.sum(triangles) // 3),
        transitivity=transitivity(graph, triangles),
        mean_degree=float(degrees.mean()),
        bins_h=bins_h,
        bins_k=bins_k,
    )


@dataclass
class PooledReport:
    """ Reports of independent replicas pooled by a single aggregator. """

    replicas: int
    c_global_mean: float
    c_global_stderr: float
    c_global_deg2_mean: float
    transitivity_mean: float
    triangles_mean: float
    mean_degree: float
    bins_h: List[HBin]
    bins_k: List[KBin]
    c_global_values: List[float]

    def to_dict(self):
        return {
            'replicas': self.replicas,
            'c_global_mean': self.c_global_mean,
            'c_global_stderr': self.c_global_stderr,
            'c_global_deg2_mean': self.c_global_deg2_mean,
            'transitivity_mean': self.transitivity_mean,
            'triangles_mean': self.triangles_mean,
            'mean_degree': self.mean_degree,
        }


def pool_reports(reports):
    """ Pool replica reports; hidden-variable bins must coincide. """

    reports = list(reports)
    if not reports:
        raise DomainError('No reports to pool')

    bins_h = list(reports[0].bins_h)
    bins_k = {}
    for rep in reports:
        if len(rep.bins_h) != len(bins_h) or any(
                not math.isclose(x.lo, y.lo) or not math.isclose(x.hi, y.hi) for x, y in zip(rep.bins_h, bins_h)):
            raise DomainError('Replica reports use different hidden-variable bins')
    for rep in reports[1:]:
        bins_h = [x.merge(y) for x, y in zip(bins_h, rep.bins_h)]
    _warn_empty_bins(bins_h)
    for rep in reports:
        for kb in rep.bins_k:
            pooled = bins_k.setdefault(kb.k, KBin(kb.k))
            pooled.count += kb.count
            pooled.sum_c += kb.sum_c

    values = np.array([rep.c_global for rep in reports])
    stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else math.nan

    return PooledReport(
        replicas=len(reports),
        c_global_mean=float(values.mean()),
        c_global_stderr=stderr,
        c_global_deg2_mean=float(np.mean([rep.c_global_deg2 for rep in reports])),
        transitivity_mean=float(np.mean([rep.transitivity for rep in reports])),
        triangles_mean=float(np.mean([rep.triangles_total for rep in reports])),
        mean_degree=float(np.mean([rep.mean_degree for rep in reports])),
        bins_h=bins_h,
        bins_k=[bins_k[k] for k in sorted(bins_k)],
        c_global_values=values.tolist(),
    )


def uncorrelated_c_formula(degrees, n_vertices):
    """ ``<k(k-1)>**2 / (N <k>**3)``, the clustering of an uncorrelated graph.

    Args:
        degrees (array_like):
            Nonnegative degree sequence.
        n_vertices (int):
            ``N``.

    Returns:
        float

    """

    k = np.asarray(degrees, dtype=float)
    if k.size == 0 or np.any(k < 0):
        raise DomainError('Degrees must be a non-empty nonnegative sequence')
    if not np.any(k > 0):
        raise DomainError('All degrees are zero')

    first = k.mean()
    second = np.mean(k * (k - 1.0))
    return float(second ** 2 / (n_vertices * first ** 3))
