"""Topological oracles: boundary operators, Betti numbers, integer torsion.

The F2 rank of the square-boundary operator is the workhorse.  It is computed
exactly in three stages: (1) change row basis to fundamental-cycle
coordinates of a spanning forest, which drops the tree rows and leaves at
most four entries per column; (2) quotient reduction, where weight-1 columns
zero a row and weight-2 columns identify two rows (union-find), both honest
rank-1 pivots with no fill; (3) bit-packed Gaussian elimination over the
surviving core.  Stage results add up to the exact rank.

Integer Smith normal form is kept for small complexes (torsion detection);
entries are Python ints so there is no overflow to guard against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _cc

from . import cubes
from .complexes import Complex

SNF_EDGE_CAP = 10_000

SQUARE_BOUNDARY_SIGNS = (1, 1, -1, -1)


class CapacityError(ValueError):
    """Requested exact computation exceeds the supported size cap."""


@dataclass(frozen=True)
class ChainComplex:
    """Vertices, edges, and squares with signed boundary incidence.

    Full-skeleton complexes keep every vertex and edge of the ambient cube;
    restricted complexes (witnesses, bubbles) keep only the down-closure of
    their squares.  ``square_edges`` columns follow the orientation
    (i,b), (j,b+2^i), (i,b+2^j), (j,b) with signs +, +, -, -; ``edge_verts``
    rows are (tail, head) = (base, base + 2^dir) as local vertex ids.
    """

    n: int
    full_skeleton: bool
    vertex_ids: np.ndarray  # global vertex labels, sorted
    edge_ids: np.ndarray  # global canonical edge indices, sorted
    edge_verts: np.ndarray  # (E, 2) local vertex ids
    square_ids: np.ndarray  # global canonical square indices
    square_edges: np.ndarray  # (S, 4) local edge ids

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_ids)

    @property
    def edge_count(self) -> int:
        return len(self.edge_ids)

    @property
    def square_count(self) -> int:
        return len(self.square_ids)


def _verify_dd_zero(chain: ChainComplex) -> None:
    if chain.square_count == 0:
        return
    ev = chain.edge_verts[chain.square_edges]  # (S, 4, 2)
    # contribution of edge with sign s: +s at head, -s at tail
    verts = np.concatenate([ev[:, :, 1], ev[:, :, 0]], axis=1)  # (S, 8)
    signs = np.concatenate(
        [
            np.tile(SQUARE_BOUNDARY_SIGNS, (chain.square_count, 1)),
            np.tile([-s for s in SQUARE_BOUNDARY_SIGNS], (chain.square_count, 1)),
        ],
        axis=1,
    )
    order = np.argsort(verts, axis=1, kind="stable")
    sv = np.take_along_axis(verts, order, axis=1)
    ss = np.take_along_axis(signs, order, axis=1)
    paired = (sv[:, 0::2] == sv[:, 1::2]).all() and (ss[:, 0::2] + ss[:, 1::2] == 0).all()
    if not paired:
        raise AssertionError("boundary composition d1∘d2 is nonzero")


def boundary_matrices(
    n: int,
    squares: np.ndarray | list | None = None,
    complex: Complex | None = None,
    full_skeleton: bool = True,
) -> ChainComplex:
    """Build the chain complex for a sampled Complex or an explicit square list.

    With full_skeleton the ambient cube's vertices and edges are all kept;
    otherwise only the down-closure of the given squares.
    """
    if complex is not None:
        n = complex.n
        square_ids = np.flatnonzero(complex.faces).astype(np.int64)
        full_skeleton = True
    else:
        if squares is None:
            raise ValueError("need a Complex or an explicit square list")
        idxs = [
            s if isinstance(s, (int, np.integer)) else cubes.square_index(s, n)
            for s in squares
        ]
        square_ids = np.unique(np.asarray(idxs, dtype=np.int64))

    sq_edge_global = (
        cubes.edges_of_square_table(n)[square_ids]
        if len(square_ids)
        else np.empty((0, 4), dtype=np.int64)
    )
    if full_skeleton:
        edge_ids = np.arange(cubes.edge_count(n), dtype=np.int64)
        vertex_ids = np.arange(1 << n, dtype=np.int64)
        edge_verts = cubes.edge_endpoints_table(n).copy()
        square_edges = sq_edge_global
    else:
        edge_ids = np.unique(sq_edge_global)
        square_edges = np.searchsorted(edge_ids, sq_edge_global)
        endpoints = cubes.edge_endpoints_table(n)[edge_ids]
        vertex_ids = np.unique(endpoints)
        edge_verts = np.searchsorted(vertex_ids, endpoints)
    chain = ChainComplex(
        n=n,
        full_skeleton=full_skeleton,
        vertex_ids=vertex_ids,
        edge_ids=edge_ids,
        edge_verts=edge_verts,
        square_ids=square_ids,
        square_edges=square_edges,
    )
    _verify_dd_zero(chain)
    return chain


def d2_dense(chain: ChainComplex) -> np.ndarray:
    """Signed dense boundary matrix, shape (edge_count, square_count)."""
    out = np.zeros((chain.edge_count, chain.square_count), dtype=np.int64)
    for col in range(chain.square_count):
        for pos in range(4):
            out[chain.square_edges[col, pos], col] += SQUARE_BOUNDARY_SIGNS[pos]
    return out


def d1_dense(chain: ChainComplex) -> np.ndarray:
    """Signed dense vertex boundary matrix, shape (vertex_count, edge_count)."""
    out = np.zeros((chain.vertex_count, chain.edge_count), dtype=np.int64)
    for e in range(chain.edge_count):
        tail, head = chain.edge_verts[e]
        out[head, e] += 1
        out[tail, e] -= 1
    return out


# ---------------------------------------------------------------------------
# F2 rank of d2
# ---------------------------------------------------------------------------


def _spanning_forest(chain: ChainComplex) -> tuple[np.ndarray, int]:
    """Boolean tree-edge mask and number of connected components (beta0)."""
    nv = chain.vertex_count
    if chain.full_skeleton:
        # fixed tree: each vertex v > 0 connects to v with its lowest bit cleared
        v = np.arange(1, nv, dtype=np.int64)
        low = v & -v
        d = np.zeros(len(v), dtype=np.int64)
        lv = low.copy()
        while (lv > 1).any():
            going = lv > 1
            d[going] += 1
            lv[going] >>= 1
        base = v ^ low
        idx = d * (nv >> 1)
        rest = base
        for t in range(chain.n):  # squash(base, {d}) with per-element d
            sel = d == t
            if sel.any():
                b = base[sel]
                idx[sel] += ((b >> (t + 1)) << t) | (b & ((1 << t) - 1))
        mask = np.zeros(chain.edge_count, dtype=np.bool_)
        mask[idx] = True
        return mask, 1
    parent = np.arange(nv, dtype=np.int64)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    mask = np.zeros(chain.edge_count, dtype=np.bool_)
    comp = nv
    for e in range(chain.edge_count):
        a, b = find(int(chain.edge_verts[e, 0])), find(int(chain.edge_verts[e, 1]))
        if a != b:
            parent[a] = b
            mask[e] = True
            comp -= 1
    return mask, comp


@njit(cache=True, nogil=True)
def _quotient_reduce(entries, alive):  # pragma: no cover - jitted
    """Exact rank-1 pivots on columns of weight <= 2 (zeroing and merging rows).

    entries is (C, 4) row ids with -1 padding; modified in place to canonical
    form.  Returns (rank_consumed, live_column_count).
    """
    ncols = entries.shape[0]
    nrows = 0
    for c in range(ncols):
        for q in range(4):
            if entries[c, q] + 1 > nrows:
                nrows = entries[c, q] + 1
    parent = np.arange(nrows, dtype=np.int64)
    dead_row = np.zeros(nrows, dtype=np.bool_)
    rank = 0
    live = 0
    changed = True
    while changed:
        changed = False
        live = 0
        for c in range(ncols):
            if not alive[c]:
                continue
            # canonicalize: root entries, drop dead rows, cancel equal pairs
            buf = np.empty(4, dtype=np.int64)
            w = 0
            for q in range(4):
                r = entries[c, q]
                if r < 0:
                    continue
                while parent[r] != r:
                    parent[r] = parent[parent[r]]
                    r = parent[r]
                if dead_row[r]:
                    continue
                buf[w] = r
                w += 1
            # sort up to 4 elements, cancel duplicates mod 2
            for a in range(1, w):
                key = buf[a]
                b = a - 1
                while b >= 0 and buf[b] > key:
                    buf[b + 1] = buf[b]
                    b -= 1
                buf[b + 1] = key
            out = np.empty(4, dtype=np.int64)
            m = 0
            q = 0
            while q < w:
                if q + 1 < w and buf[q] == buf[q + 1]:
                    q += 2
                else:
                    out[m] = buf[q]
                    m += 1
                    q += 1
            for q in range(4):
                entries[c, q] = out[q] if q < m else -1
            if m == 0:
                alive[c] = False
                changed = True
            elif m == 1:
                dead_row[out[0]] = True
                alive[c] = False
                rank += 1
                changed = True
            elif m == 2:
                parent[out[0]] = out[1]
                alive[c] = False
                rank += 1
                changed = True
            else:
                live += 1
    return rank, live


@njit(cache=True, nogil=True)
def _rank_dense_bitcols(mat):  # pragma: no cover - jitted
    """GF(2) rank of columns packed as 64-bit words; destroys mat."""
    ncols, words = mat.shape
    pivot_of_row = np.full(words * 64, -1, dtype=np.int64)
    rank = 0
    one = np.uint64(1)
    for c in range(ncols):
        while True:
            row = -1
            for w in range(words):
                x = mat[c, w]
                if x != np.uint64(0):
                    b = 0
                    while x & one == np.uint64(0):
                        x >>= one
                        b += 1
                    row = (w << 6) + b
                    break
            if row < 0:
                break
            p = pivot_of_row[row]
            if p < 0:
                pivot_of_row[row] = c
                rank += 1
                break
            for w in range(words):
                mat[c, w] ^= mat[p, w]
    return rank


def rank2(chain: ChainComplex) -> int:
    """Exact F2 rank of the square boundary operator."""
    if chain.square_count == 0:
        return 0
    tree_mask, _ = _spanning_forest(chain)
    row_of_edge = np.full(chain.edge_count, -1, dtype=np.int64)
    nontree = np.flatnonzero(~tree_mask)
    row_of_edge[nontree] = np.arange(len(nontree), dtype=np.int64)
    entries = row_of_edge[chain.square_edges].copy()  # (S, 4), -1 on tree edges
    # push padding to the back for the kernel's scan
    entries = np.sort(entries, axis=1)[:, ::-1].copy()
    alive = np.ones(chain.square_count, dtype=np.bool_)
    rank_sparse, live = _quotient_reduce(entries, alive)
    if live == 0:
        return int(rank_sparse)
    core_cols = np.flatnonzero(alive)
    core_entries = entries[core_cols]
    used_rows = np.unique(core_entries[core_entries >= 0])
    compact = np.searchsorted(used_rows, core_entries.clip(min=0))
    words = (len(used_rows) + 63) >> 6
    mat = np.zeros((len(core_cols), words), dtype=np.uint64)
    for q in range(4):
        rows = compact[:, q]
        valid = core_entries[:, q] >= 0
        idx = np.flatnonzero(valid)
        mat[idx, rows[idx] >> 6] ^= np.uint64(1) << (rows[idx] & 63).astype(np.uint64)
    rank_core = _rank_dense_bitcols(mat)
    return int(rank_sparse + rank_core)


def beta0(chain: ChainComplex) -> int:
    _, comp = _spanning_forest(chain)
    return comp


def beta1_f2(chain: ChainComplex) -> int:
    """First F2 Betti number: E - (V - beta0) - rank2(d2)."""
    b0 = beta0(chain)
    return chain.edge_count - (chain.vertex_count - b0) - rank2(chain)


# ---------------------------------------------------------------------------
# Integer Smith normal form (small complexes)
# ---------------------------------------------------------------------------


def snf_invariant_factors(matrix) -> list[int]:
    """Diagonal of the Smith normal form (positive, divisibility-ordered).

    Plain-Python integer arithmetic; intended for small matrices.
    """
    a = [[int(x) for x in row] for row in np.asarray(matrix)]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    diag: list[int] = []
    t = 0
    while True:
        # smallest-magnitude nonzero pivot in the remaining submatrix
        piv = None
        best = 0
        for i in range(t, nrows):
            row = a[i]
            for j in range(t, ncols):
                v = row[j]
                if v != 0 and (piv is None or abs(v) < best):
                    piv = (i, j)
                    best = abs(v)
                    if best == 1:
                        break
            if best == 1 and piv is not None:
                break
        if piv is None:
            break
        i0, j0 = piv
        a[t], a[i0] = a[i0], a[t]
        for row in a:
            row[t], row[j0] = row[j0], row[t]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
        # clear row t and column t; restart pivot search on any remainder
        dirty = False
        for i in range(t + 1, nrows):
            q, r = divmod(a[i][t], a[t][t])
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            if r:
                dirty = True
        for j in range(t + 1, ncols):
            q, r = divmod(a[t][j], a[t][t])
            if q:
                for row in a:
                    row[j] -= q * row[t]
            if r:
                dirty = True
        if dirty:
            continue
        # enforce divisibility: pivot must divide the remaining submatrix
        offender = None
        for i in range(t + 1, nrows):
            for j in range(t + 1, ncols):
                if a[i][j] % a[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            continue
        diag.append(a[t][t])
        t += 1
        if t >= min(nrows, ncols):
            break
    return diag


def snf_torsion(chain: ChainComplex) -> list[int]:
    """Invariant factors > 1 of the integer square boundary operator."""
    if chain.edge_count > SNF_EDGE_CAP:
        raise CapacityError(
            f"integer SNF capped at {SNF_EDGE_CAP} edges, got {chain.edge_count}"
        )
    factors = snf_invariant_factors(d2_dense(chain))
    return sorted(d for d in factors if d > 1)


def z_rank_d2(chain: ChainComplex) -> int:
    if chain.edge_count > SNF_EDGE_CAP:
        raise CapacityError(
            f"integer SNF capped at {SNF_EDGE_CAP} edges, got {chain.edge_count}"
        )
    return len(snf_invariant_factors(d2_dense(chain)))


@dataclass(frozen=True)
class HomologySummary:
    beta0: int
    beta1_f2: int
    torsion: tuple[int, ...] | None  # invariant factors > 1, None if not computed
    z_free_rank: int | None  # rank of H1 over Z, None if not computed

    def to_json_dict(self) -> dict:
        return {
            "beta0": self.beta0,
            "beta1_f2": self.beta1_f2,
            "torsion": list(self.torsion) if self.torsion is not None else None,
        }


def homology_summary(chain: ChainComplex, with_torsion: bool = False) -> HomologySummary:
    b0 = beta0(chain)
    b1 = beta1_f2(chain)
    torsion = None
    free = None
    if with_torsion:
        factors = snf_torsion(chain)
        torsion = tuple(factors)
        free = chain.edge_count - (chain.vertex_count - b0) - z_rank_d2(chain)
    return HomologySummary(beta0=b0, beta1_f2=b1, torsion=torsion, z_free_rank=free)


def graph_connectivity(n: int, edge_bits: np.ndarray) -> tuple[bool, int]:
    """Connectivity of the spanning subgraph of the n-cube with the given edges."""
    nv = 1 << n
    present = np.flatnonzero(edge_bits)
    ends = cubes.edge_endpoints_table(n)[present]
    graph = coo_matrix(
        (np.ones(len(ends), dtype=np.int8), (ends[:, 0], ends[:, 1])),
        shape=(nv, nv),
    )
    ncomp, _ = _cc(graph, directed=False)
    return ncomp == 1, int(ncomp)
