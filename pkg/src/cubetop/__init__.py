"""Random 2-dimensional cubical complexes in the n-cube.

Sampling Q2(n, p), the parallel-relation graph and its contraction to a
fixpoint, homology oracles over F2 and Z, explicit witness complexes, and
Monte Carlo harnesses around all of it.
"""

from .complexes import Complex, Thresholds, compute_thresholds, sample
from .contraction import ContractionTrace, run as contract
from .cubes import Edge, Face, Square, box_span
from .homology import beta1_f2, boundary_matrices, homology_summary
from .witness import build_bubble, build_witness

__all__ = [
    "Complex",
    "Thresholds",
    "compute_thresholds",
    "sample",
    "ContractionTrace",
    "contract",
    "Edge",
    "Face",
    "Square",
    "box_span",
    "beta1_f2",
    "boundary_matrices",
    "homology_summary",
    "build_bubble",
    "build_witness",
]
