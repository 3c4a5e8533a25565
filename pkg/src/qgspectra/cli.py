"""Experiment driver CLI.

Commands: eigs, curves, rng, weyl, robinmap, sflow, sdomains, gen.
Outputs are deterministic: identical document + flags + seed give identical
bytes.  Exit codes: 0 success, 2 parse error, 3 solver incompleteness,
4 precondition violation, 1 other toolkit error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import io as docio
from .conditions import ConditionAssignment, alpha_from_s, delta
from .curves import rng as rng_seq
from .curves import spectral_flow, track_curves, weyl_stats
from .eigenfunctions import find_s_points, genericity, partition, phase_align
from .errors import (
    ConditionError,
    DomainViolationError,
    IncompleteSliceError,
    ParseError,
    PreconditionError,
    QgError,
    SolverError,
    UnsupportedDegreeError,
)
from .generators import FAMILIES, gen_graph
from .io import fmt
from .robinmap import assemble
from .solver import full_spectrum

EXIT_PARSE = 2
EXIT_SOLVER = 3
EXIT_PRECONDITION = 4


def _load(path: str):
    try:
        with open(path) as fh:
            return docio.parse_document(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _marked_vertices(graph, points, name: str):
    """Subdivide at the named point set; returns (new graph, vertex ids)."""
    if name not in points:
        raise PreconditionError(f"document has no point set named {name!r}")
    sub = graph.subdivide(points[name])
    return sub.graph, sorted(sub.point_vertex.values())


def _alpha_arg(args) -> float:
    if args.alpha is not None:
        return args.alpha
    s = math.inf if args.s in ("inf", "-inf") else float(args.s)
    return alpha_from_s(s)


def cmd_eigs(args):
    graph, assignment, _ = _load(args.doc)
    sl = full_spectrum(graph, assignment, args.lam_max)
    rows = [[e.n, float(e.lam), float(e.kval), e.multiplicity] for e in sl.eigenpairs]
    docio.write_csv(args.out, ["n", "lambda", "k_or_kappa", "multiplicity"], rows)
    return 0


def cmd_curves(args):
    graph, _, points = _load(args.doc)
    graph2, marked = _marked_vertices(graph, points, args.points)
    lo, hi, num = args.t_grid
    fam = track_curves(graph2, marked, _alpha_arg(args), list(np.linspace(lo, hi, int(num))), args.lam_max)
    rows = []
    for t, sl in zip(fam.t_values, fam.slices):
        if not math.isfinite(t):
            continue
        for n, lam, _, _ in sl.flat():
            rows.append([float(t), n, float(lam)])
    docio.write_csv(args.out, ["t", "n", "lambda"], rows)
    return 0


def cmd_rng(args):
    graph, _, _ = _load(args.doc)
    vr = [int(v) for v in args.vr.split(",")]
    seq = rng_seq(graph, vr, args.sigma, args.n)
    target = (2.0 * args.sigma / graph.total_length) * sum(1.0 / graph.degree(v) for v in vr)
    rows = [
        [i + 1, float(seq.gaps[i]), float(seq.running_means[i]), float(target)]
        for i in range(len(seq.gaps))
    ]
    docio.write_csv(args.out, ["n", "d_n", "running_mean", "target"], rows)
    return 0


def cmd_weyl(args):
    graph, _, _ = _load(args.doc)
    stats = weyl_stats(graph, args.n)
    vi = stats.vertices.index(args.vertex if args.vertex is not None else stats.vertices[0])
    ei = args.edge if args.edge is not None else 0
    rows = []
    for i in range(stats.n_used):
        rows.append(
            [
                i + 1,
                float(stats.vertex_means[i, vi]),
                float(stats.vertex_targets[vi]),
                float(stats.amp_means[i, 2 * ei]),
                float(stats.amp_target),
                float(stats.max_cross_correlation),
            ]
        )
    docio.write_csv(args.out, ["N", "mean_fv2", "target_fv2", "mean_Ae2", "target_Ae2", "max_crosscorr"], rows)
    return 0


def cmd_robinmap(args):
    graph, _, points = _load(args.doc)
    graph2, marked = _marked_vertices(graph, points, args.points)
    rm = assemble(graph2, marked, _alpha_arg(args), args.c)
    rows = [[float(x) for x in row] for row in rm.matrix]
    docio.write_csv(args.out, [f"col{j}" for j in range(len(marked))], rows)
    mor, pos, nul = rm.indices()
    sidecar = {"c": args.c, "s": None if args.alpha is not None else args.s, "alpha": rm.alpha,
               "mor": mor, "pos": pos, "nullity": nul}
    with open(args.out_json, "w", newline="") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_sflow(args):
    graph, _, points = _load(args.doc)
    graph2, marked = _marked_vertices(graph, points, args.points)
    fc = spectral_flow(graph2, marked, _alpha_arg(args), args.level, (args.t_lo, args.t_hi))
    payload = {
        "level": args.level,
        "interval": [args.t_lo, args.t_hi],
        "flow": fc.flow,
        "crossings": [{"t": t, "n": n} for t, n, _ in fc.crossings],
    }
    with open(args.out, "w", newline="") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_sdomains(args):
    graph, assignment, _ = _load(args.doc)
    s = math.inf if args.s in ("inf", "-inf") else float(args.s)
    sl = full_spectrum(graph, assignment, _lam_for_count(graph, args.n))
    rows = []
    for e in sl.eigenpairs:
        if e.lam <= 1e-12 or (e.n or 0) > args.n:
            continue
        rep = genericity(graph, e)
        if not rep.simple:
            continue
        forms = phase_align(graph, e)
        sp = find_s_points(graph, forms, s)
        part = partition(graph, sp, e.n)
        rows.append([e.n, float(s) if math.isfinite(s) else "inf", sp.count, part.domains,
                     part.deficiency, rep.verdict])
    docio.write_csv(args.out, ["n", "s", "phi_s", "nu_s", "deficiency", "generic"], rows)
    return 0


def _lam_for_count(graph, n):
    return ((n + graph.E + graph.V + 2) * math.pi / graph.total_length) ** 2


def cmd_gen(args):
    graph = gen_graph(args.family, seed=args.seed, n=args.n, d=args.d, beta=args.beta)
    doc = docio.write_document(graph, ConditionAssignment(graph))
    with open(args.out, "w", newline="") as fh:
        fh.write(doc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgspectra", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_s_flags(q):
        grp = q.add_mutually_exclusive_group(required=True)
        grp.add_argument("--s", help="Robin parameter s (a float, 'inf')")
        grp.add_argument("--alpha", type=float, help="Pruefer angle in [0, pi)")

    q = sub.add_parser("eigs", help="eigenvalues up to lambda-max (CSV: n, lambda, k_or_kappa, multiplicity)")
    q.add_argument("doc")
    q.add_argument("--lam-max", type=float, required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_eigs)

    q = sub.add_parser("curves", help="spectral curves over a t-grid (CSV: t, n, lambda)")
    q.add_argument("doc")
    q.add_argument("--points", required=True, help="name of the point set in the document")
    add_s_flags(q)
    q.add_argument("--t-grid", type=float, nargs=3, metavar=("LO", "HI", "NUM"), required=True)
    q.add_argument("--lam-max", type=float, required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_curves)

    q = sub.add_parser("rng", help="Robin-Neumann gaps (CSV: n, d_n, running_mean, target)")
    q.add_argument("doc")
    q.add_argument("--vr", required=True, help="comma-separated Robin vertex ids")
    q.add_argument("--sigma", type=float, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_rng)

    q = sub.add_parser("weyl", help="local Weyl-law running means (CSV)")
    q.add_argument("doc")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--vertex", type=int, default=None)
    q.add_argument("--edge", type=int, default=None)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_weyl)

    q = sub.add_parser("robinmap", help="Robin map matrix (CSV) plus JSON index sidecar")
    q.add_argument("doc")
    q.add_argument("--points", required=True)
    add_s_flags(q)
    q.add_argument("--c", type=float, required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--out-json", required=True)
    q.set_defaults(func=cmd_robinmap)

    q = sub.add_parser("sflow", help="spectral flow through a level (JSON)")
    q.add_argument("doc")
    q.add_argument("--points", required=True)
    add_s_flags(q)
    q.add_argument("--level", type=float, required=True)
    q.add_argument("--t-lo", type=float, default=-math.inf)
    q.add_argument("--t-hi", type=float, default=math.inf)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_sflow)

    q = sub.add_parser("sdomains", help="s-point/s-domain counts per eigenfunction (CSV)")
    q.add_argument("doc")
    q.add_argument("--s", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_sdomains)

    q = sub.add_parser("gen", help="generate a graph document from a named family")
    q.add_argument("family", choices=FAMILIES)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--n", type=int, default=5)
    q.add_argument("--d", type=int, default=3)
    q.add_argument("--beta", type=int, default=1)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (IncompleteSliceError, SolverError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (PreconditionError, DomainViolationError, UnsupportedDegreeError, ConditionError) as exc:
        print(f"precondition violation: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except QgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
