""" Hidden-variable random graphs.

A pair ``{i, j}`` is joined with probability ``r(h_i h_j / h_s**2)``. The
fast generator skips over non-edges geometrically under the envelope
``min(1, u) >= r(u)`` and thins proposals with ``r(u)/envelope``; the naive
generator draws one uniform per pair and is kept as its test oracle.
"""

import math
from dataclasses import dataclass

import numpy as np

from hvclust.Errors import DomainError
from hvclust.Kernels import eval_r


NAIVE_MAX_VERTICES = 10_000
GENERATORS = ('fast', 'naive')


@dataclass(frozen=True, eq=False)
class Graph:
    """ Simple undirected graph with sorted adjacency in compressed rows.

    Attributes:
        n (int):
            Number of vertices.
        hidden (numpy.ndarray):
            Hidden variable of every vertex.
        indptr (numpy.ndarray):
            Neighbours of ``i`` are ``indices[indptr[i]:indptr[i+1]]``.
        indices (numpy.ndarray):
            Concatenated sorted neighbour lists.

    """

    n: int
    hidden: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray

    @classmethod
    def from_edges(cls, n, hidden, edges):
        """ Build a graph from vertex pairs; duplicates are merged, self-loops rejected. """

        n = int(n)
        hidden = np.array(hidden, dtype=float)
        if hidden.shape != (n,):
            raise DomainError(f'Expected {n} hidden values, got shape {hidden.shape}')

        pairs = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise DomainError(f'Edge endpoints must lie in [0, {n})')
        if np.any(pairs[:, 0] == pairs[:, 1]):
            raise DomainError('Self-loops are not allowed')

        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        keys = np.unique(lo * n + hi)
        lo, hi = keys // n, keys % n

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))

        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

        hidden.setflags(write=False)
        indices = dst[order]
        indices.setflags(write=False)
        indptr.setflags(write=False)

        return cls(n, hidden, indptr, indices)

    def neighbors(self, i):
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degrees(self):
        return np.diff(self.indptr)

    @property
    def edge_count(self):
        return int(self.indices.size // 2)

    def edges(self):
        """ ``(E, 2)`` array of pairs ``i < j`` in lexicographic order. """
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def same_as(self, other):
        return (self.n == other.n
                and np.array_equal(self.hidden, other.hidden)
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def write_edge_list(self, path, verbose=False):
        """ Write ``"i j"`` per line, 0-based with ``i < j``. """

        np.savetxt(path, self.edges(), fmt='%d', delimiter=' ')

        if verbose:
            print(f'Wrote {self.edge_count} edges to {path}')


def _check_hidden(hidden):
    hidden = np.asarray(hidden, dtype=float)
    if hidden.ndim != 1 or hidden.size == 0:
        raise DomainError('Hidden variables must be a non-empty 1-D sequence')
    if not np.all(np.isfinite(hidden)) or np.any(hidden <= 0.0):
        raise DomainError('Hidden variables must be positive and finite')
    return hidden


def generate_naive(kernel, hidden, scheme, rng, max_vertices=NAIVE_MAX_VERTICES):
    """ Join every pair independently with one uniform draw per pair.

    Args:
        kernel (Kernel):
            Connection kernel.
        hidden (array_like):
            Positive hidden variables.
        scheme (CutoffScheme):
            Supplies ``h_s``.
        rng (numpy.random.Generator):
            Random stream.
        max_vertices (int, optional):
            Refuse larger graphs. Defaults to 10 000.

    Returns:
        Graph

    """

    hidden = _check_hidden(hidden)
    n = hidden.size
    if n > max_vertices:
        raise DomainError(f'Naive generation is capped at {max_vertices} vertices, got {n}')

    scale = 1.0 / scheme.h_s ** 2
    src, dst = [], []

    for i in range(n - 1):
        prob = eval_r(kernel, hidden[i] * hidden[i + 1:] * scale)
        hits = np.nonzero(rng.random(n - i - 1) < prob)[0] + i + 1
        src.append(np.full(hits.size, i, dtype=np.int64))
        dst.append(hits)

    if src:
        edges = np.column_stack([np.concatenate(src), np.concatenate(dst)])
    else:
        edges = np.empty((0, 2), dtype=np.int64)

    return Graph.from_edges(n, hidden, edges)


class _UniformStream:
    """ Uniforms on ``(0, 1]`` drawn from ``rng`` in blocks. """

    def __init__(self, rng, block=8192):
        self.rng = rng
        self.block = block
        self.buffer = []
        self.pos = 0

    def next(self):
        if self.pos == len(self.buffer):
            self.buffer = (1.0 - self.rng.random(self.block)).tolist()
            self.pos = 0
        value = self.buffer[self.pos]
        self.pos += 1
        return value


def generate_fast(kernel, hidden, scheme, rng):
    """ Same distribution as :func:`generate_naive` in expected ``O(N + E)`` time.

    Vertices are visited by decreasing hidden variable (ties by index), so the
    envelope ``q_ij = min(1, h_i h_j / h_s**2)`` is nonincreasing along each
    row and geometric skips with the current envelope never pass over a
    candidate with a larger one.

    Args:
        kernel (Kernel):
            Connection kernel, ``r(u) <= min(1, u)`` is required.
        hidden (array_like):
            Positive hidden variables.
        scheme (CutoffScheme):
            Supplies ``h_s``.
        rng (numpy.random.Generator):
            Random stream.

    Returns:
        Graph

    """

    hidden = _check_hidden(hidden)
    n = hidden.size
    order = np.lexsort((np.arange(n), -hidden))
    ranked = hidden[order].tolist()
    labels = order.tolist()
    scale = 1.0 / scheme.h_s ** 2
    f = kernel.f
    exact_envelope = kernel.is_max_dense
    uniform = _UniformStream(rng)

    src, dst = [], []

    for i in range(n - 1):
        row = ranked[i] * scale
        j = i + 1
        q = min(1.0, row * ranked[j])

        while j < n and q > 0.0:
            if q < 1.0:
                j += int(math.log(uniform.next()) / math.log1p(-q))
                if j >= n:
                    break

            u = row * ranked[j]
            envelope = min(1.0, u)

            r = envelope if exact_envelope else min(u * float(f(u)), 1.0)
            accept = uniform.next() * q <= r

            if accept:
                src.append(labels[i])
                dst.append(labels[j])

            q = envelope
            j += 1

    edges = np.column_stack([np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)])
    return Graph.from_edges(n, hidden, edges)


def generate(kernel, hidden, scheme, rng, generator='fast'):
    """ Dispatch on the generator name ``"fast"`` or ``"naive"``. """
    if generator == 'fast':
        return generate_fast(kernel, hidden, scheme, rng)
    if generator == 'naive':
        return generate_naive(kernel, hidden, scheme, rng)
    raise DomainError(f'Unknown generator "{generator}", choose from {GENERATORS}')
