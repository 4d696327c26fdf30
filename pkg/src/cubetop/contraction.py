"""Parallel homotopy contraction: component-spreading to a fixpoint.

Stage t maps a square set V_t to the union of all G(V_t)-components that
intersect V_t.  Starting from the present 2-faces, the sets grow monotonely
and stabilize after a handful of stages; squares never absorbed (survivors)
are the complex's hard kernel.  Contraction is a certificate computation:
the complex and its edge degrees are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import complexes, cubes, parallel
from .complexes import Complex

DEFAULT_MAX_STAGES = 16


def stage(n: int, v: np.ndarray) -> np.ndarray:
    """One stage: union of the components of G(v) that contain a square of v."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components as _cc

    count = cubes.square_count(n)
    pairs, _ = cubes.parallel_pairs_table(n)
    keep = parallel.present_pair_mask(n, v)
    graph = coo_matrix(
        (np.ones(int(keep.sum()), dtype=np.int8), (pairs[keep, 0], pairs[keep, 1])),
        shape=(count, count),
    )
    ncomp, raw = _cc(graph, directed=False)
    marked = np.zeros(ncomp, dtype=np.bool_)
    marked[raw[v]] = True
    return marked[raw]


@dataclass(frozen=True)
class ContractionTrace:
    """Stage sets and survivors of one contraction run."""

    n: int
    v1: np.ndarray
    v_fix: np.ndarray
    stage_count: int
    converged: bool
    survivors: np.ndarray  # square indices outside v_fix
    survivor_min_degrees: np.ndarray  # min edge degree among each survivor's 4 edges
    stages: tuple[np.ndarray, ...] | None = None


def run(c: Complex, max_stages: int = DEFAULT_MAX_STAGES, keep_stages: bool = False) -> ContractionTrace:
    """Iterate stages from the present squares until fixpoint or max_stages."""
    if max_stages < 1:
        raise ValueError("max_stages must be >= 1")
    v = c.faces.copy()
    v1 = c.faces.copy()
    history = [v1.copy()] if keep_stages else None
    converged = False
    t = 0
    while t < max_stages:
        t += 1
        v_next = stage(c.n, v)
        if keep_stages:
            history.append(v_next.copy())
        if np.array_equal(v_next, v):
            converged = True
            v = v_next
            break
        v = v_next
    survivors = np.flatnonzero(~v)
    deg = complexes.edge_degrees(c)
    table = cubes.edges_of_square_table(c.n)
    if len(survivors):
        min_deg = deg[table[survivors]].min(axis=1)
    else:
        min_deg = np.empty(0, dtype=np.int64)
    return ContractionTrace(
        n=c.n,
        v1=v1,
        v_fix=v,
        stage_count=t,
        converged=converged,
        survivors=survivors,
        survivor_min_degrees=min_deg,
        stages=tuple(history) if keep_stages else None,
    )


@dataclass(frozen=True)
class SurvivorReport:
    total: int
    with_maximal_edge: int
    with_light_edge: int
    m_used: int


def survivor_report(trace: ContractionTrace, c: Complex, m: int | None = None) -> SurvivorReport:
    """Categorize survivors by whether they touch a maximal or light edge."""
    if m is None:
        m = complexes.compute_thresholds(c.p).m_p
    deg = complexes.edge_degrees(c)
    table = cubes.edges_of_square_table(c.n)
    if len(trace.survivors):
        edge_deg = deg[table[trace.survivors]]
        with_maximal = int((edge_deg.min(axis=1) == 0).sum())
        with_light = int((edge_deg.min(axis=1) <= m).sum())
    else:
        with_maximal = 0
        with_light = 0
    return SurvivorReport(
        total=len(trace.survivors),
        with_maximal_edge=with_maximal,
        with_light_edge=with_light,
        m_used=m,
    )


def trace_summary(trace: ContractionTrace, c: Complex, m: int | None = None) -> dict:
    """JSON-ready summary of a run."""
    rep = survivor_report(trace, c, m)
    return {
        "n": c.n,
        "p": c.p,
        "seed": c.seed,
        "stages": trace.stage_count,
        "converged": trace.converged,
        "survivors": rep.total,
        "survivors_with_maximal_edge": rep.with_maximal_edge,
        "survivors_with_light_edge": rep.with_light_edge,
    }
