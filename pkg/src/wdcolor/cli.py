"""Command-line harness: generate instances, run coloring pipelines, verify
colorings, and sweep the dilation diagnostic.

Reports are JSON with sorted keys and no timestamps, so identical configs
produce byte-identical output.  Every report carries both the proved bound
and the measured maximum; the proved constants are loose by design and the
measured values are the useful numbers.  Exit status is nonzero exactly when
something failed: 1 for a failed verification, 2 for bad input.
"""

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .graph import GraphError, WeightedGraph, as_fraction, frac_str, parse_edge_list, write_edge_list
from .partition import (
    Coloring,
    ContractViolation,
    coloring_to_partition,
    measure_dilation,
    verify_partition_family,
    verify_weak_diameter,
)
from .treedec import RootedTreeDecomposition, validate_td
from .twcolor import color_bounded_treewidth
from .geodesic import color_layered, color_planar
from .generators import (
    FAMILIES,
    GeneratorSpec,
    generate,
    layering_from_json,
    layering_to_json,
    rotation_from_json,
    rotation_to_json,
    tripods_to_json,
)

SCHEMA = "wdcolor-report/1"

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _emit(payload: dict, out: Optional[str]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _fail(code: str, message: str, status: int) -> int:
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}, sort_keys=True) + "\n")
    return status


def _load_graph(path: str) -> WeightedGraph:
    try:
        with open(path) as fh:
            return parse_edge_list(fh.read())
    except OSError as exc:
        raise CliError("parse-error", "cannot read graph file: %s" % exc)
    except GraphError as exc:
        raise CliError("parse-error", "bad graph file %s: %s" % (path, exc))


def _load_json(path: str, what: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError("parse-error", "cannot read %s file: %s" % (what, exc))
    except json.JSONDecodeError as exc:
        raise CliError("parse-error", "bad %s JSON in %s: %s" % (what, path, exc))


def _parse_frac(text: str, what: str) -> Fraction:
    try:
        return as_fraction(text)
    except (GraphError, ValueError, ZeroDivisionError):
        raise CliError("parse-error", "bad %s value %r" % (what, text))


def coloring_to_json(c: Coloring) -> dict:
    return {
        "num_colors": c.num_colors,
        "assignment": {str(v): col for v, col in sorted(c.assignment.items())},
    }


def coloring_from_json(data: dict) -> Coloring:
    try:
        return Coloring(
            {int(v): int(col) for v, col in data["assignment"].items()},
            int(data["num_colors"]),
        )
    except (KeyError, TypeError, ValueError, GraphError) as exc:
        raise CliError("parse-error", "bad coloring JSON: %s" % exc)


def _report_payload(args: argparse.Namespace, pipeline: str, extra: dict) -> dict:
    payload = {
        "schema": SCHEMA,
        "pipeline": pipeline,
        "seed": args.seed,
    }
    payload.update(extra)
    return payload


# -- gen ------------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        family=args.family,
        n=args.n,
        rows=args.rows,
        cols=args.cols,
        k=args.k,
        seed=args.seed,
        weight_lo=_parse_frac(args.weight_lo, "weight-lo"),
        weight_hi=_parse_frac(args.weight_hi, "weight-hi"),
        weight_den=args.weight_den,
    )
    base = _load_graph(args.base) if args.base else None
    try:
        inst = generate(spec, base=base)
    except GraphError as exc:
        raise CliError("invalid-input", str(exc))
    prefix = args.out
    if not prefix:
        raise CliError("invalid-input", "gen needs --out PREFIX")
    written: List[str] = []

    def save(path: str, text: str) -> None:
        with open(path, "w") as fh:
            fh.write(text)
        written.append(path)

    save(prefix + ".txt", write_edge_list(inst.graph))
    if inst.td is not None:
        rep = validate_td(inst.graph, inst.td)
        if not rep["ok"]:
            raise CliError("verification-failed", "generated decomposition invalid")
        save(prefix + ".td.json", json.dumps(inst.td.to_json_dict(), sort_keys=True, indent=2) + "\n")
    if inst.rotation is not None:
        save(prefix + ".rotation.json", json.dumps(rotation_to_json(inst.rotation), sort_keys=True, indent=2) + "\n")
    if inst.layering is not None:
        save(prefix + ".layers.json", json.dumps(layering_to_json(inst.layering), sort_keys=True, indent=2) + "\n")
    if inst.tripods is not None:
        inst.tripods.verify(inst.graph)
        save(prefix + ".tripods.json", json.dumps(tripods_to_json(inst.tripods), sort_keys=True, indent=2) + "\n")
    _emit(
        {
            "schema": SCHEMA,
            "family": inst.family,
            "seed": args.seed,
            "vertices": len(inst.graph),
            "edges": len(inst.graph.edges),
            "written": written,
        },
        None,
    )
    return EXIT_OK


# -- run ------------------------------------------------------------------------


def _run_tw(args: argparse.Namespace, g: WeightedGraph, lf: Fraction) -> dict:
    td = None
    if args.td:
        td = RootedTreeDecomposition.from_json_dict(_load_json(args.td, "decomposition"))
    res = color_bounded_treewidth(g, lf, td=td, exact_td_max=args.exact_td_max)
    return {
        "ell": frac_str(lf),
        "colors": res.report.colors,
        "width": res.width,
        "proved_bound": frac_str(res.bound),
        "measured": res.report.to_json_dict(),
        "coloring": coloring_to_json(res.coloring),
        "ok": res.report.ok,
    }


def _run_planar(args: argparse.Namespace, g: WeightedGraph, lf: Fraction) -> dict:
    rotation = None
    if args.rotation:
        rotation = rotation_from_json(_load_json(args.rotation, "rotation"))
    res = color_planar(
        g, lf, rotation,
        slab_width_factor=args.slab_width_factor,
        padding=_parse_frac(args.padding, "padding") if args.padding else None,
    )
    return {
        "ell": frac_str(lf),
        "colors": res.report.colors,
        "proved_bound": frac_str(res.bound),
        "measured": res.report.to_json_dict(),
        "coloring": coloring_to_json(res.coloring),
        "slabs": [
            {"family": s.family, "index": s.index, "owned": len(s.owned)}
            for system in res.systems
            for s in system.slabs
        ],
        "ok": res.report.ok,
    }


def _run_layered(args: argparse.Namespace, g: WeightedGraph, lf: Fraction) -> dict:
    if not args.layers:
        raise CliError("invalid-input", "layered pipeline needs --layers FILE")
    if not args.eps0:
        raise CliError("invalid-input", "layered pipeline needs --eps0")
    layering = layering_from_json(_load_json(args.layers, "layering"))
    res = color_layered(
        g, lf, layering, _parse_frac(args.eps0, "eps0"),
        slab_width_factor=args.slab_width_factor,
        padding=_parse_frac(args.padding, "padding") if args.padding else None,
        exact_td_max=args.exact_td_max,
    )
    return {
        "ell": frac_str(lf),
        "colors": res.report.colors,
        "proved_bound": frac_str(res.bound),
        "measured": res.report.to_json_dict(),
        "coloring": coloring_to_json(res.coloring),
        "ok": res.report.ok,
    }


def _run_partition(args: argparse.Namespace, g: WeightedGraph) -> dict:
    if not args.r:
        raise CliError("invalid-input", "partition pipeline needs --r")
    rf = _parse_frac(args.r, "r")
    res = color_bounded_treewidth(g, rf, exact_td_max=args.exact_td_max)
    family = coloring_to_partition(g, rf, res.coloring, res.bound)
    verify_partition_family(g, family)
    return {
        "r": frac_str(rf),
        "colors": res.report.colors,
        "proved_bound": frac_str(res.bound),
        "measured": res.report.to_json_dict(),
        "partition": family.to_json_dict(),
        "ok": res.report.ok,
    }


def _run_verify(args: argparse.Namespace, g: WeightedGraph, lf: Fraction) -> dict:
    if not args.coloring:
        raise CliError("invalid-input", "verify needs --coloring FILE")
    coloring = coloring_from_json(_load_json(args.coloring, "coloring"))
    bound = _parse_frac(args.bound, "bound") if args.bound else None
    report = verify_weak_diameter(g, lf, coloring, bound=bound)
    payload = {
        "ell": frac_str(lf),
        "colors": report.colors,
        "measured": report.to_json_dict(),
        "ok": report.ok,
    }
    if not report.ok:
        worst = max(report.per_component, key=lambda s: s.hops)
        payload["failure"] = (
            "component with min vertex %d has weak diameter %d hops"
            % (worst.min_vertex, worst.hops)
        )
    return payload


def cmd_run(args: argparse.Namespace) -> int:
    if not args.graph:
        raise CliError("invalid-input", "run needs --graph FILE")
    g = _load_graph(args.graph)
    try:
        if args.pipeline == "partition":
            extra = _run_partition(args, g)
        else:
            if not args.ell:
                raise CliError("invalid-input", "pipeline %s needs --ell" % args.pipeline)
            lf = _parse_frac(args.ell, "ell")
            if args.pipeline == "tw":
                extra = _run_tw(args, g, lf)
            elif args.pipeline == "planar":
                extra = _run_planar(args, g, lf)
            elif args.pipeline == "layered":
                extra = _run_layered(args, g, lf)
            elif args.pipeline == "verify":
                extra = _run_verify(args, g, lf)
            else:
                raise CliError("invalid-input", "unknown pipeline %r" % args.pipeline)
    except ContractViolation as exc:
        _emit(
            _report_payload(args, args.pipeline, {"ok": False, "failure": str(exc)}),
            args.out,
        )
        return EXIT_VERIFICATION
    except GraphError as exc:
        raise CliError("precondition-failed", str(exc))
    _emit(_report_payload(args, args.pipeline, extra), args.out)
    return EXIT_OK if extra.get("ok", False) else EXIT_VERIFICATION


# -- dilation ---------------------------------------------------------------------


def _scale_weights(g: WeightedGraph, factor: Fraction) -> WeightedGraph:
    return WeightedGraph(g.vertices, [(u, v, w * factor) for (u, v, w) in g.edges])


DEFAULT_SCALES = ["1/8", "1/4", "1/2", "1", "2", "4", "8", "16", "32", "64"]


def cmd_dilation(args: argparse.Namespace) -> int:
    if not args.graph:
        raise CliError("invalid-input", "dilation needs --graph FILE")
    g = _load_graph(args.graph)
    scales = [_parse_frac(s, "scale") for s in (args.scales.split(",") if args.scales else DEFAULT_SCALES)]

    def pipeline(gg: WeightedGraph, sf: Fraction):
        return color_bounded_treewidth(
            _scale_weights(gg, sf), sf, exact_td_max=args.exact_td_max
        ).report

    rows = measure_dilation(pipeline, g, scales)
    ratios = {row.get("ratio") for row in rows if "ratio" in row}
    ok = all(row.get("ok", False) for row in rows) and len(ratios) <= 1
    _emit(
        {
            "schema": SCHEMA,
            "pipeline": "dilation",
            "seed": args.seed,
            "rows": rows,
            "scale_covariant": len(ratios) <= 1,
            "ok": ok,
        },
        args.out,
    )
    return EXIT_OK if ok else EXIT_VERIFICATION


# -- argument wiring -------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="wdcolor", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance with its certificates")
    gen.add_argument("family", choices=FAMILIES)
    gen.add_argument("--n", type=int, default=0)
    gen.add_argument("--rows", type=int, default=0)
    gen.add_argument("--cols", type=int, default=0)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--weight-lo", default="1")
    gen.add_argument("--weight-hi", default="1")
    gen.add_argument("--weight-den", type=int, default=1)
    gen.add_argument("--base", help="base graph for the weight overlay")
    gen.add_argument("--out", help="output path prefix")
    gen.set_defaults(func=cmd_gen)

    run = sub.add_parser("run", help="run a pipeline and write its report")
    run.add_argument("pipeline", choices=("tw", "planar", "layered", "partition", "verify"))
    run.add_argument("--graph")
    run.add_argument("--ell")
    run.add_argument("--r")
    run.add_argument("--eps0")
    run.add_argument("--td")
    run.add_argument("--rotation")
    run.add_argument("--layers")
    run.add_argument("--coloring")
    run.add_argument("--bound")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out")
    run.add_argument("--slab-width-factor", type=int, default=8)
    run.add_argument("--padding")
    run.add_argument("--exact-td-max", type=int, default=20)
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="shorthand for: run verify")
    ver.add_argument("--graph")
    ver.add_argument("--ell")
    ver.add_argument("--coloring")
    ver.add_argument("--bound")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--out")
    ver.set_defaults(func=None)

    dil = sub.add_parser("dilation", help="sweep the coloring across scales")
    dil.add_argument("--graph")
    dil.add_argument("--scales", help="comma-separated rational scales")
    dil.add_argument("--seed", type=int, default=0)
    dil.add_argument("--out")
    dil.add_argument("--exact-td-max", type=int, default=20)
    dil.set_defaults(func=cmd_dilation)
    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        ns = argparse.Namespace(
            command="run", pipeline="verify", graph=args.graph, ell=args.ell,
            r=None, eps0=None, td=None, rotation=None, layers=None,
            coloring=args.coloring, bound=args.bound, seed=args.seed, out=args.out,
            slab_width_factor=8, padding=None, exact_td_max=20, func=cmd_run,
        )
        args = ns
    try:
        return args.func(args)
    except CliError as exc:
        return _fail(exc.code, str(exc), EXIT_INPUT)
    except ContractViolation as exc:
        return _fail("verification-failed", str(exc), EXIT_VERIFICATION)
    except GraphError as exc:
        return _fail("invalid-input", str(exc), EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())
