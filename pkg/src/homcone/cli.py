"""Command-line front end.

Subcommands::

    homcone verify FRAME
    homcone analyze FRAME
    homcone decompose FRAME POINT [--side primal|dual] [--no-witness]
    homcone graph [GRAPH] [--enumerate N]

Every subcommand accepts ``--tol-abs``, ``--tol-rel`` and
``--format structured|table``. Exit status is 0 on success, 1 when the input
is well formed but fails a mathematical check (axioms, membership), and 2 for
unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import formats
from .caratheodory import (
    caratheodory_bounds,
    decompose,
    decompose_dual_orbit,
    dual_condition,
    indecomposable_components,
    is_selfdual,
    operator_condition,
    primal_condition,
)
from .dense import Tolerance
from .exceptions import HomconeError, ParseError
from .frame import IshiFrame, verify_axioms
from .geometry import maximal_chain_rank
from .graphs import classify_sparse, enumerate_connected_homogeneous

__all__ = ["AnalysisReport", "analyze_frame", "build_parser", "main"]

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


@dataclass
class AnalysisReport:
    """Everything ``analyze`` reports; each field comes from a library call."""

    r: int
    n: int
    sizes: list
    dims: dict
    dimension: int
    axioms_ok: bool
    primal_holds: bool
    primal_violations: list
    dual_holds: bool
    dual_violations: list
    operator_agrees: bool
    selfdual: bool
    rank: int
    components: list
    frame: dict = field(default_factory=dict)


def _violations(report) -> list:
    return [{"triple": list(v.triple), "dims": v.dims} for v in report.violations]


def analyze_frame(frame: IshiFrame, tol: Tolerance) -> AnalysisReport:
    axioms = verify_axioms(frame, tol)
    if not axioms.ok:
        raise HomconeError(f"frame fails the closure axioms: {axioms.violations[0]}")
    p, d = primal_condition(frame), dual_condition(frame)
    agree = operator_condition(frame, "primal", tol).holds == p.holds and operator_condition(frame, "dual", tol).holds == d.holds
    return AnalysisReport(
        r=frame.r,
        n=frame.n,
        sizes=list(frame.sizes),
        dims={f"{i},{j}": v for (i, j), v in frame.dims().items()},
        dimension=frame.dimension,
        axioms_ok=True,
        primal_holds=p.holds,
        primal_violations=_violations(p),
        dual_holds=d.holds,
        dual_violations=_violations(d),
        operator_agrees=agree,
        selfdual=is_selfdual(frame).selfdual,
        rank=maximal_chain_rank(frame, tol),
        components=indecomposable_components(frame),
        frame=formats.frame_to_dict(frame),
    )


def _emit(args, structured: dict, lines: list) -> None:
    if args.format == "structured":
        print(json.dumps(structured, indent=2))
    else:
        print("\n".join(lines))


def _fmt_matrix(M: np.ndarray) -> str:
    return np.array2string(np.asarray(M), precision=6, suppress_small=True, max_line_width=120)


def cmd_verify(args, tol: Tolerance) -> int:
    frame = formats.read_frame(args.frame)
    report = verify_axioms(frame, tol)
    structured = {
        "ok": report.ok,
        "violations": [
            {"axiom": v.axiom, "indices": list(v.indices), "basis_pair": list(v.basis_pair), "residual": v.residual}
            for v in report.violations
        ],
        "warnings": list(report.warnings),
    }
    lines = [f"axioms: {'pass' if report.ok else 'FAIL'}"] + [f"  {v}" for v in report.violations]
    lines += [f"  warning: {w}" for w in report.warnings]
    _emit(args, structured, lines)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_analyze(args, tol: Tolerance) -> int:
    frame = formats.read_frame(args.frame)
    rep = analyze_frame(frame, tol)

    def viol(vs):
        return "; ".join(f"({','.join(map(str, v['triple']))})" for v in vs) or "-"

    lines = [
        f"rank r            {rep.r}",
        f"order n           {rep.n}",
        f"block sizes       {rep.sizes}",
        f"dim V             {rep.dimension}",
        "dims V_ij         " + (", ".join(f"{k}:{v}" for k, v in rep.dims.items()) or "-"),
        f"primal condition  {'holds' if rep.primal_holds else 'fails'}  {viol(rep.primal_violations)}",
        f"dual condition    {'holds' if rep.dual_holds else 'fails'}  {viol(rep.dual_violations)}",
        f"operator check    {'agrees' if rep.operator_agrees else 'DISAGREES'}",
        f"selfdual          {rep.selfdual}",
        f"geometric rank    {rep.rank}",
        f"components        {rep.components}",
    ]
    _emit(args, asdict(rep), lines)
    return EXIT_OK


def cmd_decompose(args, tol: Tolerance) -> int:
    frame = formats.read_frame(args.frame)
    axioms = verify_axioms(frame, tol)
    if not axioms.ok:
        raise HomconeError(f"frame fails the closure axioms: {axioms.violations[0]}")
    kind, arr = formats.read_point(args.point)
    if kind == "factor" and args.side != "dual":
        raise ParseError("a 'factor' point file is only meaningful with --side dual")
    bounds = None
    if args.no_witness:
        dec = decompose_dual_orbit(frame, arr, tol) if kind == "factor" else decompose(frame, arr, args.side, tol)
    else:
        if kind == "factor":
            point = decompose_dual_orbit(frame, arr, tol).point
            bounds = caratheodory_bounds(frame, point, "dual", tol, factor=arr)
        else:
            bounds = caratheodory_bounds(frame, arr, args.side, tol)
        dec = bounds.decomposition
    structured = {
        "side": dec.side,
        "face": list(dec.face),
        "terms": [{"weight": t.weight, "block": t.block, "generator": t.generator.tolist()} for t in dec.terms],
        "size": dec.size,
        "residual": dec.residual,
    }
    lines = [f"side {dec.side}: {dec.size} term(s), reconstruction residual {dec.residual:.3e}"]
    if bounds is not None:
        structured["bounds"] = {"lower": bounds.lower, "upper": bounds.upper}
        structured["witness"] = None if bounds.witness is None else {"triple": list(bounds.witness.triple), "gap": bounds.witness.gap}
        lines.append(f"bounds: lower {bounds.lower}, upper {bounds.upper}")
        if bounds.witness is not None:
            lines.append(f"witness at {bounds.witness.triple} with gap {bounds.witness.gap:.6g}")
    for p, t in enumerate(dec.terms, start=1):
        lines.append(f"term {p}: weight {t.weight:.6g}, block {t.block}")
        lines.append(_fmt_matrix(t.generator))
    _emit(args, structured, lines)
    return EXIT_OK


def cmd_graph(args, tol: Tolerance) -> int:
    if args.enumerate is None and args.graph is None:
        raise ParseError("give a graph file or --enumerate N")
    structured, lines = {}, []
    if args.graph is not None:
        g = formats.read_graph(args.graph)
        cls = classify_sparse(g)
        structured["classification"] = {
            "verdict": cls.verdict,
            "certificate": list(cls.certificate[1]) if cls.verdict == "not_homogeneous" else list(cls.certificate),
            "obstruction": cls.certificate[0] if cls.verdict == "not_homogeneous" else None,
            "dimension": g.n + len(g.edges),
        }
        if cls.verdict == "homogeneous":
            lines.append(f"homogeneous; ordering {list(cls.certificate)}")
        else:
            lines.append(f"not_homogeneous; induced {cls.certificate[0]} on {list(cls.certificate[1])}")
    if args.enumerate is not None:
        classes = enumerate_connected_homogeneous(args.enumerate)
        structured["classes"] = [
            {"edges": sorted(map(list, c.representative.edges)), "dimension": c.dimension, "labelled_count": c.labelled_count}
            for c in classes
        ]
        lines.append(f"{len(classes)} classes of connected homogeneous chordal graphs on {args.enumerate} vertices")
        lines.append(f"{'dim':>4}  {'labelled':>8}  edges")
        for c in classes:
            lines.append(f"{c.dimension:>4}  {c.labelled_count:>8}  {sorted(c.representative.edges)}")
    _emit(args, structured, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-abs", type=float, default=1e-9, help="absolute tolerance (default 1e-9)")
    common.add_argument("--tol-rel", type=float, default=1e-9, help="relative tolerance (default 1e-9)")
    common.add_argument("--format", choices=["structured", "table"], default="table")

    parser = argparse.ArgumentParser(prog="homcone", description="Analyse block spectrahedral homogeneous cones.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the closure axioms of a frame")
    p.add_argument("frame")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", parents=[common], help="dimension conditions, selfduality and rank")
    p.add_argument("frame")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decompose", parents=[common], help="split a point into extreme rays")
    p.add_argument("frame")
    p.add_argument("point")
    p.add_argument("--side", choices=["primal", "dual"], default="primal")
    p.add_argument("--no-witness", action="store_true", help="skip the witness search")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("graph", parents=[common], help="classify a sparsity pattern")
    p.add_argument("graph", nargs="?")
    p.add_argument("--enumerate", type=int, metavar="N")
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = Tolerance(args.tol_abs, args.tol_rel)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args, tol)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (HomconeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
