"""Exact combinatorics of the n-cube: faces, canonical indices, incidence.

Vertices of the n-cube are integers in [0, 2**n); bit k holds the value of
coordinate k (bit 0 is the first coordinate, least significant).  A k-face is
written in star notation: k starred coordinates (free to vary) plus n-k fixed
binary coordinates.  Canonical index layouts, with ``squash`` deleting the
starred bit positions:

* edge (dir d, base b):        d * 2**(n-1) + squash(b, {d})
* square (stars i<j, base b):  pair_rank(i, j, n) * 2**(n-2) + squash(b, {i, j})
* k-face (stars S, base b):    rank of S among k-subsets (lex) * 2**(n-k)
                               + squash(b, S)

``squash`` packs the surviving bits low-to-high, preserving order, so the
encodings are stable across versions and languages; n is capped at 24 so
every index fits comfortably in 64 bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

MAX_N = 24


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"dimension n={n} out of supported range [1, {MAX_N}]")


def vertex_count(n: int) -> int:
    return 1 << n


def edge_count(n: int) -> int:
    return n << (n - 1)


def square_count(n: int) -> int:
    """Number of 4-cycles (potential 2-faces) of the n-cube: 2**(n-3)*n*(n-1)."""
    return (n * (n - 1)) << (n - 2) >> 1


def face_count(n: int, k: int) -> int:
    return math.comb(n, k) << (n - k)


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_of(positions: Union[int, Iterable[int]]) -> int:
    """Normalize a set of coordinate positions (iterable or bitmask) to a bitmask."""
    if isinstance(positions, int):
        return positions
    m = 0
    for t in positions:
        m |= 1 << t
    return m


def bits_of(mask: int) -> list[int]:
    """Positions of set bits, ascending."""
    out = []
    t = 0
    while mask:
        if mask & 1:
            out.append(t)
        mask >>= 1
        t += 1
    return out


def squash(v: int, positions: Union[int, Iterable[int]]) -> int:
    """Delete the bits of v at the given positions, packing the rest low-to-high."""
    mask = mask_of(positions)
    out = 0
    shift = 0
    t = 0
    while v >> t or mask >> t:
        if not (mask >> t) & 1:
            out |= ((v >> t) & 1) << shift
            shift += 1
        t += 1
    return out


def unsquash(v: int, positions: Union[int, Iterable[int]]) -> int:
    """Inverse of squash for the same position set: re-insert zero bits."""
    mask = mask_of(positions)
    for t in bits_of(mask):
        low = v & ((1 << t) - 1)
        v = ((v >> t) << (t + 1)) | low
    return v


@dataclass(frozen=True)
class Edge:
    """1-face: starred coordinate ``dir``, base vertex with bit ``dir`` = 0."""

    dir: int
    base: int

    def endpoints(self) -> tuple[int, int]:
        return self.base, self.base | (1 << self.dir)


@dataclass(frozen=True)
class Square:
    """2-face boundary (4-cycle): starred coordinates i < j, base bits i, j = 0."""

    i: int
    j: int
    base: int

    @property
    def stars(self) -> int:
        return (1 << self.i) | (1 << self.j)

    def vertices(self) -> tuple[int, int, int, int]:
        b = self.base
        return b, b | (1 << self.i), b | (1 << self.j), b | self.stars


@dataclass(frozen=True)
class Face:
    """k-face in star notation: bitmask of starred coordinates plus fixed base."""

    stars: int
    base: int

    @property
    def dim(self) -> int:
        return popcount(self.stars)

    def contains_vertex(self, v: int) -> bool:
        return (v & ~self.stars) == self.base


def validate_edge(e: Edge, n: int) -> None:
    _check_n(n)
    if not 0 <= e.dir < n:
        raise ValueError(f"edge direction {e.dir} out of range for n={n}")
    if e.base >> n:
        raise ValueError(f"edge base {e.base:#x} out of range for n={n}")
    if (e.base >> e.dir) & 1:
        raise ValueError("edge base must have its starred bit cleared")


def validate_square(s: Square, n: int) -> None:
    _check_n(n)
    if not 0 <= s.i < s.j < n:
        raise ValueError(f"square stars ({s.i}, {s.j}) invalid for n={n}")
    if s.base >> n:
        raise ValueError(f"square base {s.base:#x} out of range for n={n}")
    if s.base & s.stars:
        raise ValueError("square base must have both starred bits cleared")


def validate_face(f: Face, n: int) -> None:
    _check_n(n)
    if f.stars >> n or f.base >> n:
        raise ValueError(f"face out of range for n={n}")
    if f.stars & f.base:
        raise ValueError("face base must be zero on starred coordinates")


def as_face(obj: Union[int, Edge, Square, Face]) -> Face:
    """View a vertex (int), Edge, or Square as a Face."""
    if isinstance(obj, Face):
        return obj
    if isinstance(obj, Edge):
        return Face(1 << obj.dir, obj.base)
    if isinstance(obj, Square):
        return Face(obj.stars, obj.base)
    return Face(0, obj)


@lru_cache(maxsize=None)
def _pair_rank_offsets(n: int) -> tuple[int, ...]:
    # offsets[i] = number of pairs (a, b) with a < i
    offs = [0] * n
    for i in range(1, n):
        offs[i] = offs[i - 1] + (n - i)
    return tuple(offs)


def pair_rank(i: int, j: int, n: int) -> int:
    """Lexicographic rank of the pair i < j among all pairs from [0, n)."""
    return _pair_rank_offsets(n)[i] + (j - i - 1)


@lru_cache(maxsize=None)
def _pair_unrank_table(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def pair_unrank(r: int, n: int) -> tuple[int, int]:
    return _pair_unrank_table(n)[r]


def edge_index(e: Edge, n: int) -> int:
    validate_edge(e, n)
    return e.dir * (1 << (n - 1)) + squash(e.base, 1 << e.dir)


def edge_from_index(idx: int, n: int) -> Edge:
    _check_n(n)
    if not 0 <= idx < edge_count(n):
        raise ValueError(f"edge index {idx} out of range for n={n}")
    d, u = divmod(idx, 1 << (n - 1))
    return Edge(d, unsquash(u, 1 << d))


def square_index(s: Square, n: int) -> int:
    validate_square(s, n)
    return pair_rank(s.i, s.j, n) * (1 << (n - 2)) + squash(s.base, s.stars)


def square_from_index(idx: int, n: int) -> Square:
    _check_n(n)
    if not 0 <= idx < square_count(n):
        raise ValueError(f"square index {idx} out of range for n={n}")
    r, u = divmod(idx, 1 << (n - 2))
    i, j = pair_unrank(r, n)
    return Square(i, j, unsquash(u, (1 << i) | (1 << j)))


def face_index(f: Face, n: int) -> int:
    validate_face(f, n)
    k = f.dim
    stars = tuple(bits_of(f.stars))
    rank = 0
    for pos, c in enumerate(combinations(range(n), k)):
        if c == stars:
            rank = pos
            break
    else:
        raise ValueError("star set not found")  # pragma: no cover
    return rank * (1 << (n - k)) + squash(f.base, f.stars)


def face_from_index(idx: int, k: int, n: int) -> Face:
    _check_n(n)
    if not 0 <= idx < face_count(n, k):
        raise ValueError(f"{k}-face index {idx} out of range for n={n}")
    r, u = divmod(idx, 1 << (n - k))
    stars = list(combinations(range(n), k))[r]
    m = mask_of(stars)
    return Face(m, unsquash(u, m))


def squares_of_edge(e: Edge, n: int) -> list[Square]:
    """The n-1 squares containing an edge: add each other coordinate as a star."""
    validate_edge(e, n)
    out = []
    for k in range(n):
        if k == e.dir:
            continue
        i, j = (e.dir, k) if e.dir < k else (k, e.dir)
        out.append(Square(i, j, e.base & ~(1 << k)))
    return out


def edges_of_square(s: Square) -> list[Edge]:
    """Boundary edges, in the orientation order (i,b), (j,b+2^i), (i,b+2^j), (j,b)."""
    b, i, j = s.base, s.i, s.j
    return [
        Edge(i, b),
        Edge(j, b | (1 << i)),
        Edge(i, b | (1 << j)),
        Edge(j, b),
    ]


def squares_of_cube(c: Face) -> list[Square]:
    """The six squares of a 3-face."""
    if c.dim != 3:
        raise ValueError(f"expected a 3-face, got dimension {c.dim}")
    i, j, k = bits_of(c.stars)
    b = c.base
    return [
        Square(i, j, b),
        Square(i, j, b | (1 << k)),
        Square(i, k, b),
        Square(i, k, b | (1 << j)),
        Square(j, k, b),
        Square(j, k, b | (1 << i)),
    ]


def box_span(faces: Sequence[Union[int, Edge, Square, Face]]) -> Face:
    """Smallest face of the ambient cube containing all the given faces.

    Stars are the union of star sets plus every coordinate on which the base
    vertices disagree.
    """
    if not faces:
        raise ValueError("box_span of an empty collection is undefined")
    fs = [as_face(f) for f in faces]
    stars = 0
    for f in fs:
        stars |= f.stars
    b0 = fs[0].base
    for f in fs[1:]:
        stars |= b0 ^ f.base
    return Face(stars, b0 & ~stars)


def face_contains(outer: Face, inner: Union[int, Edge, Square, Face]) -> bool:
    g = as_face(inner)
    if g.stars & ~outer.stars:
        return False
    return (g.base & ~outer.stars) == outer.base


def iter_vertices_of_face(f: Face) -> Iterator[int]:
    for u in range(1 << f.dim):
        yield f.base | unsquash(u, f.stars)


def iter_edges_of_face(f: Face) -> Iterator[Edge]:
    for d in bits_of(f.stars):
        rest = f.stars & ~(1 << d)
        for u in range(1 << (f.dim - 1)):
            yield Edge(d, f.base | unsquash_subset(u, rest))


def iter_squares_of_face(f: Face) -> Iterator[Square]:
    stars = bits_of(f.stars)
    for i, j in combinations(stars, 2):
        rest = f.stars & ~((1 << i) | (1 << j))
        for u in range(1 << (f.dim - 2)):
            yield Square(i, j, f.base | unsquash_subset(u, rest))


def unsquash_subset(u: int, mask: int) -> int:
    """Spread the low bits of u onto the set positions of mask (ascending)."""
    out = 0
    for t in bits_of(mask):
        out |= (u & 1) << t
        u >>= 1
    return out


# ---------------------------------------------------------------------------
# Vectorized index tables (cached per dimension), used by the sampling,
# parallel-graph, and contraction machinery.
# ---------------------------------------------------------------------------


def _squash_np(v: np.ndarray, positions: tuple[int, ...]) -> np.ndarray:
    out = v
    for t in sorted(positions, reverse=True):
        low = out & ((1 << t) - 1)
        out = ((out >> (t + 1)) << t) | low
    return out


def _unsquash_np(u: np.ndarray, positions: tuple[int, ...]) -> np.ndarray:
    out = u
    for t in sorted(positions):
        low = out & ((1 << t) - 1)
        out = ((out >> t) << (t + 1)) | low
    return out


@lru_cache(maxsize=None)
def edges_of_square_table(n: int) -> np.ndarray:
    """(square_count, 4) array of edge indices, orientation order as edges_of_square."""
    _check_n(n)
    half = 1 << (n - 2)
    u = np.arange(half, dtype=np.int64)
    cols = np.empty((square_count(n), 4), dtype=np.int64)
    scale = 1 << (n - 1)
    for r in range(n * (n - 1) // 2):
        i, j = pair_unrank(r, n)
        base = _unsquash_np(u, (i, j))
        row0 = r * half
        bi, bj = base | (1 << i), base | (1 << j)
        cols[row0 : row0 + half, 0] = i * scale + _squash_np(base, (i,))
        cols[row0 : row0 + half, 1] = j * scale + _squash_np(bi, (j,))
        cols[row0 : row0 + half, 2] = i * scale + _squash_np(bj, (i,))
        cols[row0 : row0 + half, 3] = j * scale + _squash_np(base, (j,))
    return cols


@lru_cache(maxsize=None)
def squares_of_edge_table(n: int) -> np.ndarray:
    """(edge_count, n-1) array of square indices containing each edge."""
    _check_n(n)
    half = 1 << (n - 1)
    u = np.arange(half, dtype=np.int64)
    out = np.empty((edge_count(n), n - 1), dtype=np.int64)
    for d in range(n):
        base = _unsquash_np(u, (d,))
        row0 = d * half
        col = 0
        for k in range(n):
            if k == d:
                continue
            i, j = (d, k) if d < k else (k, d)
            sb = base & ~(1 << k)
            out[row0 : row0 + half, col] = pair_rank(i, j, n) * (1 << (n - 2)) + _squash_np(
                sb, (i, j)
            )
            col += 1
    return out


@lru_cache(maxsize=None)
def edge_endpoints_table(n: int) -> np.ndarray:
    """(edge_count, 2) array of endpoint vertices (base, base + 2^dir)."""
    _check_n(n)
    half = 1 << (n - 1)
    u = np.arange(half, dtype=np.int64)
    out = np.empty((edge_count(n), 2), dtype=np.int64)
    for d in range(n):
        base = _unsquash_np(u, (d,))
        out[d * half : (d + 1) * half, 0] = base
        out[d * half : (d + 1) * half, 1] = base | (1 << d)
    return out


@lru_cache(maxsize=None)
def parallel_pairs_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All unordered parallel square pairs and their four cube-mates.

    Returns (pairs, mates): pairs is (P, 2) square indices with P =
    square_count(n) * (n-2) / 2; mates is (P, 4) with the indices of the four
    other squares of the unique 3-cube containing the pair.  The pair is
    related w.r.t. a square set V exactly when all four mates lie in V.
    """
    _check_n(n)
    if n < 3:
        raise ValueError("parallel pairs require n >= 3")
    half = 1 << (n - 2)
    u = np.arange(half, dtype=np.int64)
    pairs_list = []
    mates_list = []

    def sq_idx(a: int, b: int, base: np.ndarray) -> np.ndarray:
        if a > b:
            a, b = b, a
        return pair_rank(a, b, n) * half + _squash_np(base, (a, b))

    for r in range(n * (n - 1) // 2):
        i, j = pair_unrank(r, n)
        base = _unsquash_np(u, (i, j))
        idx_a = r * half + u
        for k in range(n):
            if k == i or k == j:
                continue
            sel = (base >> k) & 1 == 0
            b0 = base[sel]
            a0 = idx_a[sel]
            b1 = b0 | (1 << k)
            idx_b = r * half + _squash_np(b1, (i, j))
            pairs_list.append(np.stack([a0, idx_b], axis=1))
            m = np.empty((len(b0), 4), dtype=np.int64)
            m[:, 0] = sq_idx(i, k, b0)
            m[:, 1] = sq_idx(i, k, b0 | (1 << j))
            m[:, 2] = sq_idx(j, k, b0)
            m[:, 3] = sq_idx(j, k, b0 | (1 << i))
            mates_list.append(m)
    pairs = np.concatenate(pairs_list, axis=0)
    mates = np.concatenate(mates_list, axis=0)
    return pairs, mates


def class_range(i: int, j: int, n: int) -> tuple[int, int]:
    """Square-index range [start, stop) of the star-pair class (i, j)."""
    if not 0 <= i < j < n:
        raise ValueError(f"invalid star pair ({i}, {j}) for n={n}")
    half = 1 << (n - 2)
    r = pair_rank(i, j, n)
    return r * half, (r + 1) * half
