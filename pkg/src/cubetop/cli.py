"""Command-line front end.

Subcommands: sample, stats, contract, homology, sweep, poisson, verify.
Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O or
format error.  Identical arguments and seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import checks, complexes, contraction, experiments, homology, qcx

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _emit(payload, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_or_sample(args) -> complexes.Complex:
    if getattr(args, "infile", None):
        return qcx.read(args.infile)
    if args.n is None or args.p is None:
        raise argparse.ArgumentTypeError("need --in FILE or --n and --p")
    return complexes.sample(args.n, args.p, args.seed)


def cmd_sample(args) -> int:
    c = complexes.sample(args.n, args.p, args.seed)
    if args.out:
        qcx.write(c, args.out)
    else:
        sys.stdout.buffer.write(qcx.dumps(c))
    return EXIT_OK


def cmd_stats(args) -> int:
    c = _load_or_sample(args)
    thresholds = complexes.compute_thresholds(c.p) if 0 < c.p < 1 else None
    m_p = thresholds.m_p if thresholds else None
    light = int(complexes.light_mask(c, m_p).sum()) if m_p is not None else None
    chain = homology.boundary_matrices(c.n, complex=c)
    payload = {
        "n": c.n,
        "p": c.p,
        "seed": c.seed,
        "faces": c.face_count,
        "maximal_edges": complexes.maximal_edge_count(c),
        "m_p": m_p,
        "light_edges": light,
        "beta1_f2": homology.beta1_f2(chain),
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_contract(args) -> int:
    c = _load_or_sample(args)
    trace = contraction.run(c, max_stages=args.max_stages)
    m = None
    if not 0 < c.p < 1:
        m = 0
    payload = contraction.trace_summary(trace, c, m)
    _emit(payload, args.out)
    return EXIT_OK


def cmd_homology(args) -> int:
    c = _load_or_sample(args)
    chain = homology.boundary_matrices(c.n, complex=c)
    with_torsion = chain.edge_count <= homology.SNF_EDGE_CAP and args.torsion
    summary = homology.homology_summary(chain, with_torsion=with_torsion)
    _emit(summary.to_json_dict(), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.p is not None:
        ps = [args.p]
    else:
        if args.p_start is None or args.p_end is None or args.p_step is None:
            raise argparse.ArgumentTypeError("need --p or --p-start/--p-end/--p-step")
        ps = experiments.p_range(args.p_start, args.p_end, args.p_step)
    rows = experiments.sweep(args.n, ps, args.trials, args.seed, args.stat, args.threads)
    if args.format == "csv":
        text = experiments.CSV_HEADER + "\n" + "\n".join(r.to_csv() for r in rows) + "\n"
        if args.out:
            Path(args.out).write_text(text)
            script = experiments.emit_plot_script(args.out, args.stat, args.n)
            sys.stderr.write(f"wrote {args.out} and {script}\n")
        else:
            sys.stdout.write(text)
    else:
        _emit([r.to_json_dict() for r in rows], args.out)
    return EXIT_OK


def cmd_poisson(args) -> int:
    report = experiments.poisson_report(args.n, args.c, args.trials, args.seed, args.threads)
    _emit(report, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = [args.check] if args.check else sorted(checks.CHECKS)
    all_ok = True
    for name in names:
        ok, lines = checks.CHECKS[name]()
        all_ok &= ok
        for line in lines:
            print(line)
        print(f"check {name}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if all_ok else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cubetop",
        description="Random 2-dimensional cubical complexes: sampling, contraction, homology.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(sp, with_input=True):
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--p", type=float, default=None)
        sp.add_argument("--seed", type=lambda s: int(s, 0), default=0)
        if with_input:
            sp.add_argument("--in", dest="infile", default=None, help=".qcx input file")
        sp.add_argument("--out", default=None)

    sp = sub.add_parser("sample", help="sample a complex and write .qcx")
    add_common(sp, with_input=False)
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("stats", help="face/maximal/light counts and beta1")
    add_common(sp)
    sp.set_defaults(fn=cmd_stats)

    sp = sub.add_parser("contract", help="run the contraction to fixpoint")
    add_common(sp)
    sp.add_argument("--max-stages", type=int, default=contraction.DEFAULT_MAX_STAGES)
    sp.set_defaults(fn=cmd_contract)

    sp = sub.add_parser("homology", help="beta0/beta1 (and torsion when small)")
    add_common(sp)
    sp.add_argument("--torsion", action="store_true")
    sp.set_defaults(fn=cmd_homology)

    sp = sub.add_parser("sweep", help="Monte Carlo sweep over p")
    add_common(sp, with_input=False)
    sp.add_argument("--p-start", type=float, default=None)
    sp.add_argument("--p-end", type=float, default=None)
    sp.add_argument("--p-step", type=float, default=None)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--stat", choices=sorted(experiments.STATISTICS), default="maximal-count")
    sp.add_argument("--format", choices=["json", "csv"], default="csv")
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("poisson", help="maximal-edge distribution at the scaling point")
    add_common(sp, with_input=False)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(fn=cmd_poisson)

    sp = sub.add_parser("verify", help="run a named property suite")
    sp.add_argument("--check", choices=sorted(checks.CHECKS), default=None)
    sp.set_defaults(fn=cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except qcx.QcxFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (argparse.ArgumentTypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
