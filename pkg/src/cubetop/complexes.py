"""Random 2-dimensional cubical complexes: sampling and edge statistics.

A complex is the full 1-skeleton of the n-cube plus a random subset of its
2-faces, each present independently with probability p.  Faces are stored as
a boolean vector over canonical square indices; provenance (p, seed) rides
along so every complex is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import cubes, rng
from .cubes import Edge, Square


@dataclass(frozen=True)
class Complex:
    """A sampled complex: dimension, 2-face membership bits, provenance."""

    n: int
    faces: np.ndarray  # bool, length square_count(n)
    p: float
    seed: int

    def __post_init__(self):
        expected = cubes.square_count(self.n)
        if self.faces.shape != (expected,):
            raise ValueError(
                f"face vector has length {self.faces.shape}, expected {expected}"
            )
        if self.faces.dtype != np.bool_:
            raise ValueError("face vector must be boolean")

    @property
    def face_count(self) -> int:
        return int(self.faces.sum())

    def has_square(self, s: Square) -> bool:
        return bool(self.faces[cubes.square_index(s, self.n)])


def sample(n: int, p: float, seed: int) -> Complex:
    """Draw a complex: face k present iff stream draw k < floor(p * 2**64)."""
    if not 3 <= n <= cubes.MAX_N:
        raise ValueError(f"n={n} outside supported range [3, {cubes.MAX_N}]")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    bits = rng.face_bits(seed, cubes.square_count(n), p)
    return Complex(n=n, faces=bits, p=p, seed=seed & ((1 << 64) - 1))


def from_squares(n: int, squares, p: float = 0.0, seed: int = 0) -> Complex:
    """Build a complex from an explicit list of Square values or indices."""
    bits = np.zeros(cubes.square_count(n), dtype=np.bool_)
    for s in squares:
        idx = s if isinstance(s, (int, np.integer)) else cubes.square_index(s, n)
        bits[idx] = True
    return Complex(n=n, faces=bits, p=p, seed=seed)


def edge_degrees(c: Complex) -> np.ndarray:
    """Per-edge count of present 2-faces containing it (values in [0, n-1])."""
    table = cubes.squares_of_edge_table(c.n)
    return c.faces[table].sum(axis=1, dtype=np.int64)


def maximal_edge_indices(c: Complex) -> np.ndarray:
    """Canonical indices of degree-0 (maximal) edges."""
    return np.flatnonzero(edge_degrees(c) == 0)


def maximal_edges(c: Complex) -> list[Edge]:
    return [cubes.edge_from_index(int(i), c.n) for i in maximal_edge_indices(c)]


def maximal_edge_count(c: Complex) -> int:
    return int((edge_degrees(c) == 0).sum())


def classify_light_heavy(c: Complex, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Split edges into light (degree <= m) and heavy; returns boolean masks."""
    if m < 0:
        raise ValueError("light/heavy cutoff must be non-negative")
    deg = edge_degrees(c)
    light = deg <= m
    return light, ~light


@dataclass(frozen=True)
class Thresholds:
    """Component-size cutoff t_p and the light-edge degree cutoff m_p."""

    t_p: int
    m_p: int


_QUARTER_ROOT_HALF = 0.5**0.25  # (1/2)**(1/4)


def binomial_cdf_below(m: int, q: float, t: int) -> float:
    """Pr[Binomial(m, q) < t] by direct Kahan-compensated term summation."""
    if t <= 0:
        return 0.0
    if m == 0:
        return 1.0
    total = 0.0
    comp = 0.0
    log_q = math.log(q) if q > 0 else -math.inf
    log_1q = math.log1p(-q) if q < 1 else -math.inf
    for k in range(min(t, m + 1)):
        if q == 0.0:
            term = 1.0 if k == 0 else 0.0
        elif q == 1.0:
            term = 1.0 if k == m else 0.0
        else:
            log_term = (
                math.lgamma(m + 1)
                - math.lgamma(k + 1)
                - math.lgamma(m - k + 1)
                + k * log_q
                + (m - k) * log_1q
            )
            term = math.exp(log_term)
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def component_cutoff(p: float) -> int:
    """Smallest positive integer T with 2 * (1-p)**T < 1."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p={p} outside (0, 1)")
    t = 1
    while 2.0 * (1.0 - p) ** t >= 1.0:
        t += 1
    return t


def light_edge_cutoff(p: float, t_p: int) -> int:
    """Smallest positive integer M with Pr[Bin(floor(M/4), p^3) < t_p] < (1/2)^(1/4).

    The probability is decreasing in floor(M/4), so we search the smallest
    block count; exact ties count as failures (resolving toward the larger M).
    """
    q = p**3
    m_blocks = 1
    while binomial_cdf_below(m_blocks, q, t_p) >= _QUARTER_ROOT_HALF:
        m_blocks += 1
    return 4 * m_blocks


def compute_thresholds(p: float) -> Thresholds:
    t_p = component_cutoff(p)
    return Thresholds(t_p=t_p, m_p=light_edge_cutoff(p, t_p))


def light_mask(c: Complex, m: int | None = None) -> np.ndarray:
    """Boolean mask of light edges; m defaults to m_p computed from c.p."""
    if m is None:
        m = compute_thresholds(c.p).m_p
    return edge_degrees(c) <= m
