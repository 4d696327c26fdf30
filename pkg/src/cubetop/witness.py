"""Hand-built small complexes and where they occur inside sampled complexes.

The torus, projective-plane, and Klein-bottle complexes are stored as data
tables in star notation; their edge counts and homology are recomputed from
the tables rather than trusted.  This module also builds bubbles around an
edge, grows minimal enclosing hulls, searches for clean parallel cubes, and
checks occurrence events of an embedded witness inside a sampled complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import complexes, cubes
from .complexes import Complex
from .cubes import Edge, Face, Square


class HullGrowthError(RuntimeError):
    """Hull construction exceeded the dimension cap before stabilizing."""


def parse_star_square(text: str) -> Square:
    """Parse "(*,0,1,*)" into a Square; coordinate 1 is bit 0."""
    parts = [t.strip() for t in text.strip().strip("()").split(",")]
    stars = [k for k, t in enumerate(parts) if t == "*"]
    if len(stars) != 2:
        raise ValueError(f"{text!r} does not have exactly two stars")
    base = 0
    for k, t in enumerate(parts):
        if t == "1":
            base |= 1 << k
        elif t not in ("0", "*"):
            raise ValueError(f"bad coordinate {t!r} in {text!r}")
    return Square(stars[0], stars[1], base)


def square_to_star(s: Square, n: int) -> str:
    parts = []
    for k in range(n):
        if k in (s.i, s.j):
            parts.append("*")
        else:
            parts.append(str((s.base >> k) & 1))
    return "(" + ",".join(parts) + ")"


_TORUS = [
    "(*,0,0,*)", "(0,*,0,*)", "(*,1,0,*)", "(1,*,0,*)",
    "(*,0,*,1)", "(0,*,*,1)", "(*,1,*,1)", "(1,*,*,1)",
    "(*,0,1,*)", "(0,*,1,*)", "(*,1,1,*)", "(1,*,1,*)",
    "(*,0,*,0)", "(0,*,*,0)", "(*,1,*,0)", "(1,*,*,0)",
]

_RP2 = [
    "(0,0,0,*,*)", "(0,0,1,*,*)", "(0,0,*,1,*)", "(0,0,*,*,1)",
    "(0,1,*,*,0)", "(0,*,0,0,*)", "(0,*,1,*,0)", "(0,*,*,0,0)",
    "(0,*,*,1,0)", "(1,0,*,0,*)", "(1,*,0,0,*)", "(1,*,0,*,0)",
    "(*,0,0,*,0)", "(*,0,1,0,*)", "(*,0,*,0,0)", "(*,0,*,0,1)",
    "(*,1,0,0,*)", "(*,*,0,0,1)", "(*,1,0,*,0)", "(*,*,0,1,0)",
]

_KLEIN = [
    "(*,*,1,0,0)", "(*,*,0,0,0)", "(0,*,*,0,0)", "(1,*,*,0,0)",
    "(0,1,*,*,0)", "(1,1,*,*,0)", "(*,1,0,*,0)", "(*,1,1,*,0)",
    "(0,*,*,1,0)", "(1,*,*,1,0)", "(*,*,1,1,0)", "(*,0,*,1,0)",
    "(0,*,0,1,*)", "(1,*,0,1,*)", "(*,0,0,1,*)", "(*,1,0,1,*)",
    "(*,1,*,1,1)", "(0,*,*,1,1)", "(1,*,*,1,1)", "(*,*,1,1,1)",
    "(0,0,*,*,1)", "(1,0,*,*,1)", "(*,0,0,*,1)", "(*,0,1,*,1)",
    "(0,0,*,0,*)", "(1,0,*,0,*)", "(*,0,0,0,*)", "(*,0,1,0,*)",
]

_WITNESS_TABLES = {
    "torus": (4, _TORUS),
    "rp2": (5, _RP2),
    "klein": (5, _KLEIN),
}


@dataclass(frozen=True)
class WitnessComplex:
    name: str
    n: int
    squares: tuple[Square, ...]

    @property
    def edge_count(self) -> int:
        return len({cubes.edge_index(e, self.n) for s in self.squares for e in cubes.edges_of_square(s)})

    @property
    def appearance_threshold(self) -> float:
        """Below p = 1 - (1/2)**(1/e) the witness appears somewhere w.h.p."""
        return 1.0 - 0.5 ** (1.0 / self.edge_count)

    def edge_indices(self) -> np.ndarray:
        idx = {cubes.edge_index(e, self.n) for s in self.squares for e in cubes.edges_of_square(s)}
        return np.array(sorted(idx), dtype=np.int64)

    def square_indices(self) -> np.ndarray:
        return np.array(sorted(cubes.square_index(s, self.n) for s in self.squares), dtype=np.int64)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "squares": [square_to_star(s, self.n) for s in self.squares],
            "edge_count": self.edge_count,
            "appearance_threshold": self.appearance_threshold,
        }


def build_witness(name: str) -> WitnessComplex:
    if name not in _WITNESS_TABLES:
        raise ValueError(f"unknown witness {name!r}; choose from {sorted(_WITNESS_TABLES)}")
    n, table = _WITNESS_TABLES[name]
    squares = tuple(parse_star_square(t) for t in table)
    for s in squares:
        cubes.validate_square(s, n)
    if len(set(squares)) != len(squares):
        raise AssertionError(f"duplicate squares in witness table {name}")
    return WitnessComplex(name=name, n=n, squares=squares)


def build_bubble(n: int, f: Edge) -> list[Square]:
    """The bubble around an edge: every square on the union of 1-skeletons of
    the 3-faces containing the edge, except the squares containing the edge."""
    cubes.validate_edge(f, n)
    if n < 3:
        raise ValueError("bubbles require n >= 3")
    skeleton: set[int] = set()
    candidates: set[Square] = set()
    others = [k for k in range(n) if k != f.dir]
    for a, b in combinations(others, 2):
        stars = (1 << f.dir) | (1 << a) | (1 << b)
        cube3 = Face(stars, f.base & ~stars)
        for e in cubes.iter_edges_of_face(cube3):
            skeleton.add(cubes.edge_index(e, n))
    # squares with all 4 edges on the skeleton, not containing f
    f_idx = cubes.edge_index(f, n)
    seen: set[int] = set()
    for e_idx in skeleton:
        e = cubes.edge_from_index(e_idx, n)
        for s in cubes.squares_of_edge(e, n):
            s_idx = cubes.square_index(s, n)
            if s_idx in seen:
                continue
            seen.add(s_idx)
            edge_idxs = [cubes.edge_index(x, n) for x in cubes.edges_of_square(s)]
            if f_idx in edge_idxs:
                continue
            if all(x in skeleton for x in edge_idxs):
                candidates.add(s)
    return sorted(candidates, key=lambda s: cubes.square_index(s, n))


@dataclass(frozen=True)
class Embedding:
    """Cubical embedding: injective coordinate map plus an offset vertex.

    Coordinate k of the source cube maps to injection[k] in the target; the
    offset fixes the remaining target coordinates and must be zero on the
    image coordinates.
    """

    injection: tuple[int, ...]
    offset: int
    n_to: int

    def __post_init__(self):
        if len(set(self.injection)) != len(self.injection):
            raise ValueError("coordinate injection must be injective")
        if any(not 0 <= t < self.n_to for t in self.injection):
            raise ValueError("injection target out of range")
        img = 0
        for t in self.injection:
            img |= 1 << t
        if self.offset & img:
            raise ValueError("offset must be zero on image coordinates")
        if self.offset >> self.n_to:
            raise ValueError("offset out of range")

    @property
    def n_from(self) -> int:
        return len(self.injection)

    def map_vertex(self, v: int) -> int:
        out = self.offset
        for k, t in enumerate(self.injection):
            out |= ((v >> k) & 1) << t
        return out

    def map_square(self, s: Square) -> Square:
        i, j = sorted((self.injection[s.i], self.injection[s.j]))
        return Square(i, j, self.map_vertex(s.base))

    def map_edge(self, e: Edge) -> Edge:
        return Edge(self.injection[e.dir], self.map_vertex(e.base))

    def image_face(self) -> Face:
        stars = 0
        for t in self.injection:
            stars |= 1 << t
        return Face(stars, self.offset)


def identity_embedding(n_from: int, n_to: int, offset: int = 0) -> Embedding:
    return Embedding(injection=tuple(range(n_from)), offset=offset, n_to=n_to)


def embed_witness(w: WitnessComplex, phi: Embedding) -> list[Square]:
    if phi.n_from != w.n:
        raise ValueError(f"embedding expects {phi.n_from} source coordinates, witness has {w.n}")
    return [phi.map_square(s) for s in w.squares]


def witness_to_complex(w: WitnessComplex, phi: Embedding | None = None) -> Complex:
    """Witness as a Complex in the target cube (p=0, seed=0 provenance)."""
    if phi is None:
        phi = identity_embedding(w.n, w.n)
    return complexes.from_squares(phi.n_to, embed_witness(w, phi))


# ---------------------------------------------------------------------------
# Hulls and clean parallel cubes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hull:
    """Minimal enclosing cube of a defect set, with its member squares."""

    face: Face
    squares: tuple[int, ...]  # canonical indices of the hull's 2-faces
    t_edges: tuple[int, ...]  # canonical edge indices of the defect set


def _incident_squares(n: int, w_squares: np.ndarray, t_edges: set[int]) -> list[int]:
    out = []
    for e_idx in t_edges:
        e = cubes.edge_from_index(e_idx, n)
        for s in cubes.squares_of_edge(e, n):
            s_idx = cubes.square_index(s, n)
            if w_squares[s_idx]:
                out.append(s_idx)
    return sorted(set(out))


def hull(
    n: int,
    w_squares: np.ndarray,
    t_squares=(),
    t_edges=(),
    max_dim: int = 20,
) -> Hull:
    """Grow the minimal enclosing cube of a defect set T inside a complex W.

    The hull's enclosing face must contain every W-square incident to T, and
    every square inside the face that shares no edge with T must be present
    in W.  When a non-incident square is missing, one of its edges is
    adjoined to T and the face regrows; the dimension cap turns runaway
    growth into an error.
    """
    t_edge_set: set[int] = set()
    for e in t_edges:
        t_edge_set.add(e if isinstance(e, (int, np.integer)) else cubes.edge_index(e, n))
    for s in t_squares:
        sq = s if isinstance(s, Square) else cubes.square_from_index(int(s), n)
        for e in cubes.edges_of_square(sq):
            t_edge_set.add(cubes.edge_index(e, n))
    if not t_edge_set:
        raise ValueError("defect set is empty")

    while True:
        members = [cubes.edge_from_index(e, n) for e in sorted(t_edge_set)]
        incident = _incident_squares(n, w_squares, t_edge_set)
        span_of = list(members) + [cubes.square_from_index(s, n) for s in incident]
        face = cubes.box_span(span_of)
        if face.dim > max_dim:
            raise HullGrowthError(
                f"hull grew to dimension {face.dim}, beyond the cap {max_dim}"
            )
        violation = None
        hull_squares = []
        for s in cubes.iter_squares_of_face(face):
            s_idx = cubes.square_index(s, n)
            edge_idxs = [cubes.edge_index(e, n) for e in cubes.edges_of_square(s)]
            touches_t = any(e in t_edge_set for e in edge_idxs)
            if touches_t:
                if w_squares[s_idx]:
                    hull_squares.append(s_idx)
            else:
                if w_squares[s_idx]:
                    hull_squares.append(s_idx)
                else:
                    violation = (s_idx, edge_idxs)
                    break
        if violation is None:
            return Hull(face=face, squares=tuple(sorted(hull_squares)), t_edges=tuple(sorted(t_edge_set)))
        # adjoin the first edge of the offending square and regrow
        _, edge_idxs = violation
        for e in edge_idxs:
            if e not in t_edge_set:
                t_edge_set.add(e)
                break


def verify_hull(n: int, w_squares: np.ndarray, h: Hull) -> bool:
    """Re-check the three hull conditions after construction."""
    t_set = set(h.t_edges)
    # (2) every W-square incident to T lies inside the face
    for s_idx in _incident_squares(n, w_squares, t_set):
        if not cubes.face_contains(h.face, cubes.square_from_index(s_idx, n)):
            return False
    # (3) every square inside the face not incident to T is present in W
    for s in cubes.iter_squares_of_face(h.face):
        edge_idxs = {cubes.edge_index(e, n) for e in cubes.edges_of_square(s)}
        if edge_idxs & t_set:
            continue
        if not w_squares[cubes.square_index(s, n)]:
            return False
    return True


def find_clean_parallel_cube(
    n: int,
    face: Face,
    light_edges: np.ndarray,
    budget: int | None = None,
) -> Face | None:
    """Search parallel translates of a face for one free of light edges.

    Translates are scanned in order of Hamming distance from the original
    (nearest first); for distance-1 translates the connecting edges must not
    be light either.  Returns the first clean translate, or None if the scan
    (bounded by ``budget`` candidates) finds none.
    """
    free = [k for k in range(n) if not (face.stars >> k) & 1]
    masks = []
    for r in range(1, len(free) + 1):
        for sub in combinations(free, r):
            masks.append(cubes.mask_of(sub))
    masks.sort(key=lambda m: (cubes.popcount(m), m))
    if budget is not None:
        masks = masks[:budget]
    for m in masks:
        cand = Face(face.stars, face.base ^ m)
        dirty = False
        for e in cubes.iter_edges_of_face(cand):
            if light_edges[cubes.edge_index(e, n)]:
                dirty = True
                break
        if dirty:
            continue
        if cubes.popcount(m) == 1:
            d = m.bit_length() - 1
            for v in cubes.iter_vertices_of_face(face):
                bridge = Edge(d, min(v, v ^ m))
                if light_edges[cubes.edge_index(bridge, n)]:
                    dirty = True
                    break
        if not dirty:
            return cand
    return None


# ---------------------------------------------------------------------------
# Occurrence events
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OccurrenceConstraints:
    """Squares forced present / absent by an embedded-witness event."""

    required_present: tuple[int, ...]
    required_absent: tuple[int, ...]

    def probability(self, p: float) -> float:
        return p ** len(self.required_present) * (1.0 - p) ** len(self.required_absent)


def occurrence_constraints(w: WitnessComplex, phi: Embedding) -> OccurrenceConstraints:
    """Enumerate the exact square constraints of the occurrence event.

    Inside the image cube: squares sharing an edge with the witness must be
    exactly the witness squares; squares sharing no edge must be present.
    Outside: any square containing a witness edge must be absent.
    """
    n = phi.n_to
    image = phi.image_face()
    t_squares = {cubes.square_index(s, n) for s in embed_witness(w, phi)}
    t_edges = {
        cubes.edge_index(phi.map_edge(e), n)
        for s in w.squares
        for e in cubes.edges_of_square(s)
    }
    present = set(t_squares)
    absent: set[int] = set()
    for s in cubes.iter_squares_of_face(image):
        s_idx = cubes.square_index(s, n)
        if s_idx in t_squares:
            continue
        edge_idxs = {cubes.edge_index(e, n) for e in cubes.edges_of_square(s)}
        if edge_idxs & t_edges:
            absent.add(s_idx)
        else:
            present.add(s_idx)
    for e_idx in t_edges:
        e = cubes.edge_from_index(e_idx, n)
        for s in cubes.squares_of_edge(e, n):
            s_idx = cubes.square_index(s, n)
            if s_idx in present or s_idx in absent:
                continue
            absent.add(s_idx)
    return OccurrenceConstraints(
        required_present=tuple(sorted(present)),
        required_absent=tuple(sorted(absent)),
    )


def witness_occurrence(
    c: Complex,
    w: WitnessComplex,
    phi: Embedding,
    check_separation: bool = False,
    m: int | None = None,
    k_cap: int = 1,
) -> bool:
    """Does the embedded witness occur cleanly in the sampled complex?

    Conditions: (1) the squares of c inside the image cube are exactly the
    witness squares plus all non-incident squares; (2) no square of c outside
    the cube contains a witness edge; (3, optional) no light edge (degree <=
    m) sits in the image cube off the witness or within Hamming distance
    2*k_cap + 2 of the witness, except witness edges themselves.
    """
    if phi.n_to != c.n:
        raise ValueError(f"embedding targets n={phi.n_to}, complex has n={c.n}")
    cons = occurrence_constraints(w, phi)
    for s_idx in cons.required_present:
        if not c.faces[s_idx]:
            return False
    for s_idx in cons.required_absent:
        if c.faces[s_idx]:
            return False
    if not check_separation:
        return True
    if m is None:
        m = complexes.compute_thresholds(c.p).m_p
    light = complexes.light_mask(c, m)
    t_edges = {
        cubes.edge_index(phi.map_edge(e), c.n)
        for s in w.squares
        for e in cubes.edges_of_square(s)
    }
    image = phi.image_face()
    for e in cubes.iter_edges_of_face(image):
        e_idx = cubes.edge_index(e, c.n)
        if e_idx not in t_edges and light[e_idx]:
            return False
    # light edges near the witness: any endpoint within distance 2*k_cap + 2
    radius = 2 * k_cap + 2
    t_vertices = set()
    for e_idx in t_edges:
        a, b = cubes.edge_from_index(e_idx, c.n).endpoints()
        t_vertices.add(a)
        t_vertices.add(b)
    for e_idx in np.flatnonzero(light):
        if int(e_idx) in t_edges:
            continue
        a, b = cubes.edge_from_index(int(e_idx), c.n).endpoints()
        dist = min(
            cubes.popcount(a ^ v) for v in t_vertices
        )
        dist = min(dist, min(cubes.popcount(b ^ v) for v in t_vertices))
        if dist <= radius:
            return False
    return True
