"""Fixed-seed verification suites behind `cubetop verify`.

Each check returns (passed, report lines).  Statistical gates use three
standard errors, which keeps the false-failure rate of a single gate around
0.3%.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import bounds, complexes, contraction, cubes, homology, parallel, rng, witness


def check_partition() -> tuple[bool, list[str]]:
    """Full parallel graph: C(n,2) components, each a (n-2)-cube class."""
    lines = []
    ok = True
    for n in range(4, 9):
        v = np.ones(cubes.square_count(n), dtype=np.bool_)
        decomp = parallel.components(n, v)
        want = n * (n - 1) // 2
        sizes_ok = bool((decomp.sizes == (1 << (n - 2))).all())
        roots_ok = decomp.component_count == want
        starts = np.array(
            [cubes.class_range(i, j, n)[0] for i in range(n) for j in range(i + 1, n)]
        )
        class_ok = bool(np.array_equal(np.sort(decomp.roots), np.sort(starts)))
        good = sizes_ok and roots_ok and class_ok
        ok &= good
        lines.append(
            f"partition n={n}: components={decomp.component_count} (want {want}), "
            f"uniform size {1 << (n - 2)}: {'ok' if good else 'FAIL'}"
        )
    return ok, lines


def check_edge_prob() -> tuple[bool, list[str]]:
    """One class of the parallel graph has edge probability p**4."""
    n, p, trials = 7, 0.7, 2000
    rep = parallel.component_subgraph_law_check(n, p, trials, seed=20_240_001)
    target = p**4
    edge_ok = abs(rep.edge_freq - target) <= 3 * rep.edge_se
    corr_ok = abs(rep.color_edge_corr) <= 3 * rep.corr_se
    color_ok = abs(rep.color_freq - p) <= 3 * rep.color_se
    lines = [
        f"edge-prob n={n} p={p}: freq={rep.edge_freq:.5f} target={target:.5f} "
        f"(3se={3 * rep.edge_se:.5f}): {'ok' if edge_ok else 'FAIL'}",
        f"color freq={rep.color_freq:.5f} target={p}: {'ok' if color_ok else 'FAIL'}",
        f"color/edge corr={rep.color_edge_corr:.5f} (3se={3 * rep.corr_se:.5f}): "
        f"{'ok' if corr_ok else 'FAIL'}",
    ]
    return edge_ok and corr_ok and color_ok, lines


def check_gs() -> tuple[bool, list[str]]:
    """Exact g(s) never exceeds its analytic bound on the enumerable range."""
    ok = True
    worst = -math.inf
    for n in range(2, bounds.GS_EXACT_N_CAP + 1):
        for s in range(1, bounds.GS_EXACT_S_CAP + 1):
            for p10 in range(1, 10):
                p = p10 / 10.0
                exact = bounds.gs_exact(n, p, s)
                bound = bounds.gs_bound(n, p, s)
                ok &= exact <= bound * (1 + 1e-12)
                if bound > 0:
                    worst = max(worst, exact / bound)
    lines = [f"gs: exact <= bound on n<=5, s<=5, p in 0.1..0.9; worst ratio {worst:.3e}: "
             f"{'ok' if ok else 'FAIL'}"]
    return ok, lines


def check_witness() -> tuple[bool, list[str]]:
    """Edge counts, homology, and appearance thresholds of the witness tables."""
    want = {
        "torus": (32, 2, (), 0.021428),
        "rp2": (40, 1, (2,), 0.017179),
        "klein": (56, 2, (2,), 0.01230134),
    }
    lines = []
    ok = True
    for name, (e_want, b1_want, torsion_want, thr_want) in want.items():
        w = witness.build_witness(name)
        chain = homology.boundary_matrices(w.n, squares=list(w.squares), full_skeleton=False)
        summary = homology.homology_summary(chain, with_torsion=True)
        good = (
            w.edge_count == e_want
            and summary.beta1_f2 == b1_want
            and summary.torsion == torsion_want
            and abs(w.appearance_threshold - thr_want) < 5e-6
        )
        ok &= good
        lines.append(
            f"witness {name}: edges={w.edge_count} beta1_f2={summary.beta1_f2} "
            f"torsion={list(summary.torsion)} threshold={w.appearance_threshold:.8f}: "
            f"{'ok' if good else 'FAIL'}"
        )
    return ok, lines


def check_soundness() -> tuple[bool, list[str]]:
    """Filling every contracted square never changes beta1 over F2."""
    grid = [(n, p) for n in (6, 7, 8, 9) for p in (0.3, 0.5, 0.7)]
    seeds_per_cell = 9  # 12 cells x 9 = 108 runs
    checked = 0
    bad = 0
    for cell, (n, p) in enumerate(grid):
        for k in range(seeds_per_cell):
            seed = rng.trial_seed(77_000 + cell, k)
            c = complexes.sample(n, p, seed)
            trace = contraction.run(c)
            before = homology.beta1_f2(homology.boundary_matrices(n, complex=c))
            filled = complexes.Complex(
                n=n, faces=c.faces | trace.v_fix, p=p, seed=seed
            )
            after = homology.beta1_f2(homology.boundary_matrices(n, complex=filled))
            checked += 1
            if before != after:
                bad += 1
    ok = bad == 0
    lines = [f"soundness: beta1 preserved after filling V_fix in {checked - bad}/{checked} runs: "
             f"{'ok' if ok else 'FAIL'}"]
    return ok, lines


CHECKS: dict[str, Callable[[], tuple[bool, list[str]]]] = {
    "partition": check_partition,
    "edge-prob": check_edge_prob,
    "gs": check_gs,
    "witness": check_witness,
    "soundness": check_soundness,
}
