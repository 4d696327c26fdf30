"""Component-size machinery: exact edge-boundary sums and their analytic bound.

g(s) sums (1-p)**b(S) over all connected vertex sets S of size s, where b(S)
counts cube edges leaving S.  Exact evaluation enumerates connected sets
(capped hard: the count grows super-exponentially); the analytic bound
2**n * (n*s)**s * (1-p)**(s*(n - floor(log2 s))) is evaluated in the log
domain so large n never overflows.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator

GS_EXACT_N_CAP = 5
GS_EXACT_S_CAP = 5


class CapacityError(ValueError):
    """Exact enumeration requested beyond the hard size caps."""


def boundary_count(n: int, vertex_set) -> int:
    """Number of cube edges with exactly one endpoint in the vertex set."""
    s = set(int(v) for v in vertex_set)
    out = 0
    for v in s:
        for k in range(n):
            if (v ^ (1 << k)) not in s:
                out += 1
    return out


def connected_vertex_sets(n: int, size: int) -> Iterator[frozenset[int]]:
    """Enumerate connected vertex sets of the given size, each exactly once.

    Standard connected-subgraph enumeration: grow from each anchor vertex,
    extending only with neighbors larger than the anchor, keeping a frontier
    of allowed extensions so no set is produced twice.
    """
    if size < 1:
        return
    nv = 1 << n

    def neighbors(v: int) -> list[int]:
        return [v ^ (1 << k) for k in range(n)]

    def extend(current: set[int], extension: list[int], anchor: int):
        if len(current) == size:
            yield frozenset(current)
            return
        ext = list(extension)
        while ext:
            w = ext.pop()
            new_ext = list(ext)
            for u in neighbors(w):
                if u > anchor and u not in current and u not in extension:
                    new_ext.append(u)
            current.add(w)
            yield from extend(current, new_ext, anchor)
            current.remove(w)

    for v in range(nv):
        yield from extend({v}, [u for u in neighbors(v) if u > v], v)


@lru_cache(maxsize=None)
def _gs_exact_terms(n: int, s: int) -> tuple[tuple[int, int], ...]:
    """Multiset of boundary counts over connected sets, as (b, multiplicity)."""
    counts: dict[int, int] = {}
    for vs in connected_vertex_sets(n, s):
        b = boundary_count(n, vs)
        counts[b] = counts.get(b, 0) + 1
    return tuple(sorted(counts.items()))


def gs_exact(n: int, p: float, s: int) -> float:
    """Exact g(s) = sum over connected size-s vertex sets of (1-p)**b(S)."""
    if n > GS_EXACT_N_CAP or s > GS_EXACT_S_CAP:
        raise CapacityError(
            f"exact g(s) capped at n <= {GS_EXACT_N_CAP}, s <= {GS_EXACT_S_CAP}"
        )
    if s < 1:
        raise ValueError("s must be >= 1")
    return sum(mult * (1.0 - p) ** b for b, mult in _gs_exact_terms(n, s))


def gs_bound_log2(n: int, p: float, s: int) -> float:
    """log2 of the analytic bound 2^n (ns)^s (1-p)^(s(n - floor(log2 s)))."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if p >= 1.0:
        return -math.inf if s * (n - math.floor(math.log2(s))) > 0 else n + s * math.log2(n * s)
    return n + s * math.log2(n * s) + s * (n - math.floor(math.log2(s))) * math.log2(1.0 - p)


def gs_bound(n: int, p: float, s: int) -> float:
    """The analytic bound itself, evaluated via its log."""
    return 2.0 ** gs_bound_log2(n, p, s)


def gs_bound_sum(n: int, p: float, epsilon: float, t_p: int) -> float:
    """Sum of the bound over s in [t_p, floor(2**(epsilon n))]."""
    hi = int(math.floor(2.0 ** (epsilon * n)))
    return sum(gs_bound(n, p, s) for s in range(t_p, hi + 1))
