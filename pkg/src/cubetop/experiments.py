"""Monte Carlo harness: per-trial statistics, sweeps, and verification suites.

Trials are independent: trial t uses seed splitmix64(master_seed + t), so any
thread count produces the same numbers in the same order (results are
reduced in trial order, not completion order).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import complexes, contraction, homology, rng
from .complexes import Complex

CSV_HEADER = "n,p,trials,stat,mean,stddev,stderr,min,max"


def default_threads() -> int:
    env = os.environ.get("CUBETOP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _stat_face_count(c: Complex) -> float:
    return float(c.face_count)


def _stat_maximal(c: Complex) -> float:
    return float(complexes.maximal_edge_count(c))


def _stat_light(c: Complex) -> float:
    return float(complexes.light_mask(c).sum())


def _stat_beta1(c: Complex) -> float:
    return float(homology.beta1_f2(homology.boundary_matrices(c.n, complex=c)))


def _stat_survivors(c: Complex) -> float:
    return float(len(contraction.run(c).survivors))


def _stat_stage_count(c: Complex) -> float:
    return float(contraction.run(c).stage_count)


def _stat_vfix_all(c: Complex) -> float:
    return 1.0 if bool(contraction.run(c).v_fix.all()) else 0.0


STATISTICS: dict[str, Callable[[Complex], float]] = {
    "face-count": _stat_face_count,
    "maximal-count": _stat_maximal,
    "light-count": _stat_light,
    "beta1": _stat_beta1,
    "survivor-count": _stat_survivors,
    "stage-count": _stat_stage_count,
    "vfix-all": _stat_vfix_all,
}


def run_trials(
    n: int,
    p: float,
    trials: int,
    master_seed: int,
    stat: str | Callable[[Complex], float],
    threads: int | None = None,
) -> np.ndarray:
    """Per-trial statistic values, in trial order."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    fn = STATISTICS[stat] if isinstance(stat, str) else stat
    threads = threads or default_threads()

    def one(t: int) -> float:
        return fn(complexes.sample(n, p, rng.trial_seed(master_seed, t)))

    if threads <= 1:
        return np.array([one(t) for t in range(trials)], dtype=np.float64)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.array(list(pool.map(one, range(trials))), dtype=np.float64)


@dataclass(frozen=True)
class SweepRow:
    n: int
    p: float
    trials: int
    stat: str
    mean: float
    stddev: float
    stderr: float
    min: float
    max: float

    def to_csv(self) -> str:
        return (
            f"{self.n},{self.p!r},{self.trials},{self.stat},"
            f"{self.mean!r},{self.stddev!r},{self.stderr!r},{self.min!r},{self.max!r}"
        )

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "trials": self.trials,
            "stat": self.stat,
            "mean": self.mean,
            "stddev": self.stddev,
            "stderr": self.stderr,
            "min": self.min,
            "max": self.max,
        }


def summarize(n: int, p: float, stat: str, values: np.ndarray) -> SweepRow:
    trials = len(values)
    stddev = float(values.std(ddof=1)) if trials > 1 else 0.0
    return SweepRow(
        n=n,
        p=p,
        trials=trials,
        stat=stat,
        mean=float(values.mean()),
        stddev=stddev,
        stderr=stddev / math.sqrt(trials),
        min=float(values.min()),
        max=float(values.max()),
    )


def sweep(
    n: int,
    p_values: Sequence[float],
    trials: int,
    master_seed: int,
    stat: str,
    threads: int | None = None,
) -> list[SweepRow]:
    rows = []
    for p in p_values:
        values = run_trials(n, p, trials, master_seed, stat, threads)
        rows.append(summarize(n, p, stat, values))
    return rows


def p_range(start: float, end: float, step: float) -> list[float]:
    if step <= 0:
        raise ValueError("step must be positive")
    out = []
    k = 0
    while True:
        p = start + k * step
        if p > end + 1e-12:
            break
        out.append(round(p, 12))
        k += 1
    return out


def poisson_point(n: int, c: float) -> float:
    """p = (1 + (ln n + c)/n) / 2; the near-critical scaling window."""
    p = 0.5 * (1.0 + (math.log(n) + c) / n)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"c={c} puts p={p} outside [0, 1] at n={n}")
    return p


def expected_maximal_mean(n: int, p: float) -> float:
    """Exact expectation of the maximal-edge count: 2^(n-1) n (1-p)^(n-1)."""
    return (1 << (n - 1)) * n * (1.0 - p) ** (n - 1)


def poisson_report(
    n: int, c: float, trials: int, master_seed: int, threads: int | None = None
) -> dict:
    """Maximal-edge count distribution at the scaling point, vs Poisson limit."""
    p = poisson_point(n, c)
    values = run_trials(n, p, trials, master_seed, "maximal-count", threads)
    counts = values.astype(np.int64)
    hist = np.bincount(counts)
    lam = math.exp(-c)
    return {
        "n": n,
        "c": c,
        "p": p,
        "trials": trials,
        "mean": float(values.mean()),
        "expected_mean_exact": expected_maximal_mean(n, p),
        "asymptotic_mean": lam,
        "pr_zero": float((counts == 0).mean()),
        "asymptotic_pr_zero": math.exp(-lam),
        "histogram": hist.tolist(),
    }


PLOT_SCRIPT_TEMPLATE = """\
#!/usr/bin/env python3
# Plot of a cubetop sweep; reads the CSV next to this script.
import csv
from pathlib import Path

import matplotlib.pyplot as plt

csv_path = Path(__file__).resolve().parent / {csv_name!r}
ps, means, errs = [], [], []
with open(csv_path) as fh:
    for row in csv.DictReader(fh):
        ps.append(float(row["p"]))
        means.append(float(row["mean"]))
        errs.append(float(row["stderr"]))

plt.errorbar(ps, means, yerr=errs, marker="o")
plt.xlabel("p")
plt.ylabel({stat!r})
plt.title({title!r})
plt.grid(True, alpha=0.3)
plt.savefig(csv_path.with_suffix(".png"), dpi=150)
print("wrote", csv_path.with_suffix(".png"))
"""


def emit_plot_script(csv_path: str, stat: str, n: int) -> str:
    """Write a standalone matplotlib script next to the CSV; returns its path."""
    import pathlib

    csvp = pathlib.Path(csv_path)
    script = PLOT_SCRIPT_TEMPLATE.format(
        csv_name=csvp.name, stat=stat, title=f"{stat} vs p (n={n})"
    )
    out = csvp.with_suffix(".plot.py")
    out.write_text(script)
    return str(out)
