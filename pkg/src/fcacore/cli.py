"""Command-line front end: ``fcacore <subcommand> --input FILE ...``."""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import analysis, implications, lattice, pqcore
from .context import ContextError, FormalContext, format_csv, format_cxt, induced_by_names, read_context


def _names(text: str | None) -> list[str] | None:
    if text is None:
        return None
    return [t.strip() for t in text.split(",") if t.strip()]


def _pq(text: str) -> tuple[int, int]:
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'p,q', got {text!r}") from None
    if p < 0 or q < 0:
        raise argparse.ArgumentTypeError("p and q must be non-negative")
    return p, q


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _context_text(K: FormalContext, out: str | None, fmt: str | None) -> str:
    if fmt is None and out not in (None, "-") and out.lower().endswith(".csv"):
        fmt = "csv"
    return format_csv(K) if fmt == "csv" else format_cxt(K)


def _braces(names) -> str:
    return "{" + ", ".join(names) + "}"


def _maybe_core(K: FormalContext, args) -> FormalContext:
    if getattr(args, "p", None) is None and getattr(args, "q", None) is None:
        return K
    return pqcore.compute_core(K, args.p or 0, args.q or 0)


def _select(K: FormalContext, pq, objects, attributes) -> FormalContext:
    if pq is not None:
        return pqcore.compute_core(K, *pq)
    objs = _names(objects) or list(K.objects)
    attrs = _names(attributes) or list(K.attributes)
    return induced_by_names(K, [g for g in K.objects if g in set(objs)], [m for m in K.attributes if m in set(attrs)])


def cmd_core(K, args):
    S = pqcore.compute_core(K, args.p, args.q)
    _emit(_context_text(S, args.out, args.out_format), args.out)


def _concept_lines(L: lattice.ConceptLattice) -> str:
    K = L.context
    lines = []
    for A, B in L:
        ext = [K.objects[i] for i in range(K.n_objects) if A >> i & 1]
        itt = [K.attributes[i] for i in range(K.n_attributes) if B >> i & 1]
        lines.append(f"{_braces(ext)}\t{_braces(itt)}\n")
    return "".join(lines)


def cmd_concepts(K, args):
    L = lattice.enumerate_concepts(_maybe_core(K, args))
    _emit(f"{len(L)}\n" if args.count else _concept_lines(L), args.out)


def cmd_grid(K, args):
    grid = pqcore.core_grid(K, with_lattice_sizes=args.lattice_sizes, workers=args.threads)
    _emit(pqcore.grid_to_csv(grid), args.out)
    if args.counts:
        for name, value in pqcore.core_counts(K).items():
            sys.stderr.write(f"{name}\t{value}\n")


def cmd_order(K, args):
    _emit(pqcore.core_order_diagram(K).to_dot(), args.out)


def cmd_dot(K, args):
    L = lattice.enumerate_concepts(_maybe_core(K, args))
    _emit(lattice.to_dot(L, object_counts=args.object_counts), args.out)


def cmd_transform(K, args):
    S = _select(K, args.from_pq, args.from_objects, args.from_attributes)
    T = _select(K, args.to_pq, args.to_objects, args.to_attributes)
    L = lattice.lattice_transformer(K, S, T, lattice.enumerate_concepts(S))
    _emit(f"{len(L)}\n" if args.count else _concept_lines(L), args.out)


def cmd_base(K, args):
    S = _maybe_core(K, args)
    _emit(implications.format_implications(S, implications.canonical_base(S)), args.out)


def cmd_cdb(K, args):
    S = _maybe_core(K, args)
    _emit(implications.format_implications(S, implications.canonical_direct_base(S)), args.out)


def cmd_bounds(K, args):
    S = pqcore.compute_core(K, args.p, args.q)
    imps = implications.canonical_base(S)
    reports = [implications.core_implication_bounds(K, S, args.p, imp) for imp in imps]
    _emit(implications.bounds_to_csv(S, reports), args.out)


def cmd_iceberg(K, args):
    concepts = implications.iceberg_concepts(K, args.minsupp)
    L = lattice.ConceptLattice(K, concepts, presorted=True)
    _emit(f"{len(L)}\n" if args.count else _concept_lines(L), args.out)


def cmd_interesting(K, args):
    grid = pqcore.core_grid(K, with_lattice_sizes=True, workers=args.threads)
    report = analysis.interesting_cores(grid, args.bound, measure=args.measure)
    _emit(report.to_tsv(), args.out)


def cmd_search(K, args):
    params = analysis.binary_search_readable(K, args.side, args.bound)
    _emit("none\n" if params is None else f"{params.p},{params.q}\n", args.out)


def cmd_components(K, args):
    _emit(f"{pqcore.connected_components(_maybe_core(K, args))}\n", args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fcacore", description="pq-cores of formal contexts")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, core_opt=False, pq_req=False):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("-i", "--input", required=True, help="context file (.cxt or .csv)")
        sp.add_argument("--format", choices=["cxt", "csv"], help="input format (default: from extension)")
        sp.add_argument("-o", "--out", help="output file (default: stdout)")
        sp.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker processes")
        if pq_req:
            sp.add_argument("-p", type=_nonneg, required=True)
            sp.add_argument("-q", type=_nonneg, required=True)
        elif core_opt:
            sp.add_argument("-p", type=_nonneg, help="restrict to the pq-core first")
            sp.add_argument("-q", type=_nonneg)
        sp.set_defaults(func=func)
        return sp

    sp = add("core", cmd_core, "compute the pq-core", pq_req=True)
    sp.add_argument("--out-format", choices=["cxt", "csv"])
    sp = add("concepts", cmd_concepts, "list or count formal concepts", core_opt=True)
    sp.add_argument("--count", action="store_true")
    sp = add("grid", cmd_grid, "all non-empty pq-cores as a CSV grid")
    sp.add_argument("--lattice-sizes", action="store_true")
    sp.add_argument("--counts", action="store_true", help="print core counts to stderr")
    add("order", cmd_order, "order of all distinct pq-cores as DOT")
    sp = add("dot", cmd_dot, "concept lattice diagram as DOT", core_opt=True)
    sp.add_argument("--object-counts", action="store_true")
    sp = add("transform", cmd_transform, "transform concepts between two sub-contexts")
    for side in ("from", "to"):
        sp.add_argument(f"--{side}-pq", type=_pq, metavar="P,Q")
        sp.add_argument(f"--{side}-objects", metavar="NAMES")
        sp.add_argument(f"--{side}-attributes", metavar="NAMES")
    sp.add_argument("--count", action="store_true")
    add("base", cmd_base, "canonical base", core_opt=True)
    add("cdb", cmd_cdb, "canonical direct base", core_opt=True)
    add("bounds", cmd_bounds, "bounds for core implications in the full context", pq_req=True)
    sp = add("iceberg", cmd_iceberg, "concepts with minimum support")
    sp.add_argument("--minsupp", type=Fraction, required=True)
    sp.add_argument("--count", action="store_true")
    sp = add("interesting", cmd_interesting, "rank interesting pq-cores")
    sp.add_argument("--bound", type=int, default=analysis.READABLE_BOUND)
    sp.add_argument("--measure", choices=["lattice", "context"], default="lattice")
    sp = add("search", cmd_search, "binary search for a readable side-core")
    sp.add_argument("--side", choices=["object", "attribute"], default="attribute")
    sp.add_argument("--bound", type=int, default=analysis.SEARCH_BOUND)
    add("components", cmd_components, "connected components", core_opt=True)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        K = read_context(args.input, args.format)
        args.func(K, args)
    except (ContextError, ValueError, OSError, KeyError) as exc:
        print(f"fcacore: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
