"""The parallel relation on 4-cycles and the graph it generates.

Two squares are parallel when they share their star pair and their bases
differ in one coordinate; a parallel pair is *related* w.r.t. a square set V
when the four other squares of their common 3-cube all lie in V.  G(V) is the
graph on all squares with those edges.  Components are computed by a single
pass over the precomputed pair table; component ids are the smallest square
index in each component, so outputs are stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from . import complexes, cubes, rng
from .cubes import Square


def parallel_neighbors(s: Square, n: int) -> list[Square]:
    """The n-2 squares parallel to s: same stars, base flipped in one coordinate."""
    cubes.validate_square(s, n)
    out = []
    for k in range(n):
        if k == s.i or k == s.j:
            continue
        out.append(Square(s.i, s.j, s.base ^ (1 << k)))
    return out


def cube_mates(s: Square, t: Square, n: int) -> list[Square]:
    """The four other squares of the unique 3-cube containing a parallel pair."""
    if (s.i, s.j) != (t.i, t.j):
        raise ValueError("squares are not parallel (different star pairs)")
    diff = s.base ^ t.base
    if cubes.popcount(diff) != 1:
        raise ValueError("squares are not parallel (bases not at Hamming distance 1)")
    k = diff.bit_length() - 1
    b = s.base & ~diff
    i, j = s.i, s.j
    out = []
    for a, c, extra in ((i, k, j), (j, k, i)):
        lo, hi = (a, c) if a < c else (c, a)
        out.append(Square(lo, hi, b))
        out.append(Square(lo, hi, b | (1 << extra)))
    return out


def related(s: Square, t: Square, v: np.ndarray, n: int) -> bool:
    """True iff the parallel pair (s, t) is related w.r.t. the square set v."""
    return all(v[cubes.square_index(m, n)] for m in cube_mates(s, t, n))


def present_pair_mask(n: int, v: np.ndarray) -> np.ndarray:
    """Boolean mask over the parallel-pair table: pair related w.r.t. v."""
    _, mates = cubes.parallel_pairs_table(n)
    return v[mates].all(axis=1)


@dataclass(frozen=True)
class ComponentDecomposition:
    """Partition of all squares into components of G(V).

    labels[s] is the smallest square index in s's component.  roots, sizes and
    has_marked are aligned arrays over the distinct components.
    """

    labels: np.ndarray
    roots: np.ndarray
    sizes: np.ndarray
    has_marked: np.ndarray

    @property
    def component_count(self) -> int:
        return len(self.roots)

    def size_of(self, root: int) -> int:
        pos = np.searchsorted(self.roots, root)
        return int(self.sizes[pos])


def components(n: int, v: np.ndarray, marked: np.ndarray | None = None) -> ComponentDecomposition:
    """Connected components of G(V) over all squares of the n-cube."""
    count = cubes.square_count(n)
    pairs, _ = cubes.parallel_pairs_table(n)
    keep = present_pair_mask(n, v)
    a = pairs[keep, 0]
    b = pairs[keep, 1]
    graph = coo_matrix(
        (np.ones(len(a), dtype=np.int8), (a, b)), shape=(count, count)
    )
    _, raw = _cc(graph, directed=False)
    # relabel: component id = smallest member index (stable across backends)
    first = np.full(raw.max() + 1 if len(raw) else 1, count, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(count, dtype=np.int64))
    labels = first[raw]
    roots, inverse, sizes = np.unique(labels, return_inverse=True, return_counts=True)
    if marked is None:
        flags = np.zeros(len(roots), dtype=np.bool_)
    else:
        flags = np.zeros(len(roots), dtype=np.bool_)
        np.logical_or.at(flags, inverse, marked)
    return ComponentDecomposition(labels=labels, roots=roots, sizes=sizes, has_marked=flags)


def largest_uncolored_component(n: int, v1: np.ndarray) -> int:
    """Max size of a G(V1) component disjoint from V1 (0 if every component meets V1)."""
    decomp = components(n, v1, marked=v1)
    free = ~decomp.has_marked
    if not free.any():
        return 0
    return int(decomp.sizes[free].max())


@dataclass(frozen=True)
class SubgraphLawReport:
    """Monte Carlo summary of one star-pair class of the parallel graph."""

    n: int
    p: float
    trials: int
    candidate_edges: int
    class_size: int
    edge_freq: float
    edge_se: float
    color_freq: float
    color_se: float
    color_edge_corr: float
    corr_se: float


def component_subgraph_law_check(
    n: int,
    p: float,
    trials: int,
    seed: int,
    star_pair: tuple[int, int] = (0, 1),
) -> SubgraphLawReport:
    """Sample complexes and measure one class of the parallel graph.

    Records the frequency of class-internal edges (present iff the four
    cube-mates are present), the colored-vertex frequency, and the pooled
    correlation between a vertex's color and its incident edge count.
    """
    i, j = star_pair
    start, stop = cubes.class_range(i, j, n)
    pairs, mates = cubes.parallel_pairs_table(n)
    in_class = (pairs[:, 0] >= start) & (pairs[:, 0] < stop)
    cpairs = pairs[in_class] - start
    cmates = mates[in_class]
    class_size = stop - start
    candidates = cpairs.shape[0]

    edge_hits = 0
    color_hits = 0
    colors_all = np.empty(trials * class_size, dtype=np.float64)
    degrees_all = np.empty(trials * class_size, dtype=np.float64)
    for t in range(trials):
        c = complexes.sample(n, p, rng.trial_seed(seed, t))
        present = c.faces[cmates].all(axis=1)
        edge_hits += int(present.sum())
        colors = c.faces[start:stop]
        color_hits += int(colors.sum())
        deg = np.zeros(class_size, dtype=np.int64)
        np.add.at(deg, cpairs[present, 0], 1)
        np.add.at(deg, cpairs[present, 1], 1)
        colors_all[t * class_size : (t + 1) * class_size] = colors
        degrees_all[t * class_size : (t + 1) * class_size] = deg

    n_edge_obs = trials * candidates
    edge_freq = edge_hits / n_edge_obs
    edge_se = float(np.sqrt(max(edge_freq * (1 - edge_freq), 1e-300) / n_edge_obs))
    n_color_obs = trials * class_size
    color_freq = color_hits / n_color_obs
    color_se = float(np.sqrt(max(color_freq * (1 - color_freq), 1e-300) / n_color_obs))
    if colors_all.std() > 0 and degrees_all.std() > 0:
        corr = float(np.corrcoef(colors_all, degrees_all)[0, 1])
    else:
        corr = 0.0
    corr_se = 1.0 / np.sqrt(n_color_obs)
    return SubgraphLawReport(
        n=n,
        p=p,
        trials=trials,
        candidate_edges=candidates,
        class_size=class_size,
        edge_freq=edge_freq,
        edge_se=edge_se,
        color_freq=color_freq,
        color_se=color_se,
        color_edge_corr=corr,
        corr_se=float(corr_se),
    )
