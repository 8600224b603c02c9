"""Command line entry point: ``dtilde <subcommand> ...``.

Exit status is 0 on success, 1 when a verification finds a mismatch and
2 on invalid input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from . import geometry
from .fixtures import hom_engine, load_figure_fixtures, scan_anchor
from .knitting import knit
from .ppcat import PPCoordinate, layout_for_triangulation
from .quiver import QuiverError, classify_type
from .surface import (
    SurfaceError,
    canonical_triangulation,
    parse_triangulation,
    quiver_of_triangulation,
    validate_triangulation,
    write_triangulation,
)
from .verify import ext_engine, int_engine, run_verify

GEOMETRIC_MAX_LEVEL = 6
GEOMETRIC_MAX_N = 8


class BadFlags(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise BadFlags(message)


# ---------------------------------------------------------------- parsing


def parse_range(text: str) -> list[int]:
    """``"6"`` or ``"4..7"``."""
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise BadFlags(f"expected N or A..B, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if hi < lo:
        raise BadFlags(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def parse_coords(text: str) -> list[PPCoordinate]:
    found = re.findall(r"\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)", text)
    if not found:
        raise BadFlags(f"no (level,arc) coordinates in {text!r}")
    out = []
    for level, base in found:
        if int(level) < 1:
            raise BadFlags(f"levels start at 1, got ({level},{base})")
        out.append(PPCoordinate(int(level), int(base)))
    return out


def _triangulation(args):
    if getattr(args, "triangulation", None):
        with open(args.triangulation) as fh:
            t = parse_triangulation(fh.read())
        problems = validate_triangulation(t)
        if problems:
            raise BadFlags("invalid triangulation: " + "; ".join(problems))
        return t
    if args.n is None:
        raise BadFlags("give --n or --triangulation")
    n = parse_range(args.n)
    if len(n) != 1:
        raise BadFlags("this subcommand takes a single --n")
    digons = (0, None)
    if getattr(args, "digons", None):
        a, b = (int(x) for x in args.digons.split(","))
        digons = (a, b)
    styles = ("shared", "shared")
    if getattr(args, "styles", None):
        styles = tuple(args.styles.split(","))
        if len(styles) != 2:
            raise BadFlags("--styles takes two comma separated values")
    return canonical_triangulation(n[0], digons, styles, getattr(args, "apex", None))


def _check_vertices(t, coords):
    for c in coords:
        if c.base not in t.ids():
            raise BadFlags(f"arc {c.base} is not in the triangulation (ids 1..{len(t.arcs)})")


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -------------------------------------------------------------- commands


def cmd_triangulate(args) -> int:
    t = _triangulation(args)
    if args.format == "json":
        q = quiver_of_triangulation(t)
        _emit(json.dumps({
            "n": t.n,
            "frame": [str(s) for s in t.frame],
            "arcs": write_triangulation(t).splitlines()[2:],
            "type": str(classify_type(q)),
        }, indent=2))
    elif args.format == "dot":
        _emit(quiver_of_triangulation(t).to_dot("QT"))
    else:
        _emit(write_triangulation(t))
    if args.svg:
        model = geometry.model_for_triangulation(t)
        curves = [geometry.realize_triangulation_arc(model, t, i) for i in t.ids()]
        with open(args.svg, "w") as fh:
            fh.write(geometry.to_svg(model, curves))
    return 0


def cmd_quiver(args) -> int:
    t = _triangulation(args)
    q = quiver_of_triangulation(t)
    if args.format == "json":
        _emit(json.dumps({"vertices": q.vertex_count, "arrows": [list(a) for a in q.arrows],
                          "type": str(classify_type(q))}))
    elif args.format == "dot":
        _emit(q.to_dot("QT"))
    else:
        _emit(q.to_text() + f"# {classify_type(q)}")
    return 0


def cmd_knit(args) -> int:
    t = _triangulation(args)
    comp = knit(quiver_of_triangulation(t), args.max_level)
    if args.format == "json":
        _emit(json.dumps({f"({lv},{i})": list(comp.dim((lv, i))) for lv, i in comp.coords()}))
    elif args.format == "dot":
        _emit(comp.to_dot())
    else:
        _emit(comp.to_text())
    return 0


def _grid(layout, anchor: PPCoordinate, width: int, hom) -> list[list]:
    """Rows of ``dim Hom(tau^-1 M, Y)`` to the right of the anchor column."""
    base = layout.column(anchor)
    src = anchor.shifted(1)
    rows = []
    for r in range(1, layout.d + 2):
        v = layout.vertex_of_row(r)
        line = []
        for k in range(width):
            twice = base + k - layout.heights[v]
            if twice % 2:
                line.append(None)
            elif (twice // 2, v) == (anchor.level, anchor.base):
                line.append("M")
            else:
                line.append(0 if twice < 2 else hom(src, PPCoordinate(twice // 2, v)))
        rows.append(line)
    return rows


def _format_grid(rows) -> str:
    return "\n".join(" ".join("." if c is None else str(c) for c in line).rstrip() for line in rows)


def cmd_table(args) -> int:
    if args.fixtures:
        out = []
        status = 0
        for g in load_figure_fixtures():
            m = scan_anchor(g, args.engine if args.engine != "geometric" else "knitting")
            if m is None:
                status = 1
                out.append({"name": g.name, "anchor": None})
                continue
            out.append({"name": g.name, "anchor": str(m.anchor), "n": g.n,
                        "rows": [g.row_values(r) for r in range(len(g.matrix))]})
        if args.format == "json":
            _emit(json.dumps(out))
        else:
            for item in out:
                _emit(f"{item['name']}: anchor {item['anchor']}")
                for row in item.get("rows", []):
                    _emit(" ".join(map(str, row)))
        return status
    t = _triangulation(args)
    if not args.anchor:
        raise BadFlags("table needs --anchor or --fixtures")
    (anchor,) = parse_coords(args.anchor)
    _check_vertices(t, [anchor])
    if args.engine == "geometric":
        raise BadFlags("tables use the closed-form or knitting engine")
    layout = layout_for_triangulation(t, anchor.level + args.width // 2 + 3)
    rows = _grid(layout, anchor, args.width, hom_engine(layout, args.engine))
    if args.format == "json":
        _emit(json.dumps({"anchor": str(anchor), "rows": rows}))
    else:
        _emit(_format_grid(rows))
    return 0


def _pair(args, t):
    coords = parse_coords(args.pair)
    if len(coords) != 2:
        raise BadFlags("--pair takes exactly two coordinates")
    _check_vertices(t, coords)
    return coords


def cmd_int(args) -> int:
    t = _triangulation(args)
    x, y = _pair(args, t)
    level = max(x.level, y.level)
    if args.engine == "geometric" and (level > GEOMETRIC_MAX_LEVEL or t.n > GEOMETRIC_MAX_N):
        raise BadFlags(f"the geometric engine is capped at level {GEOMETRIC_MAX_LEVEL}, n {GEOMETRIC_MAX_N}")
    layout = layout_for_triangulation(t, level + 1)
    value = int_engine(layout, args.engine)(x, y)
    if args.svg:
        model = geometry.model_for_triangulation(t)
        curves = [geometry.realize_curve(model, layout, c, 0, k) for k, c in enumerate((x, y))]
        with open(args.svg, "w") as fh:
            fh.write(geometry.to_svg(model, curves))
    if args.format == "json":
        _emit(json.dumps({"pair": [str(x), str(y)], "engine": args.engine, "int": value}))
    else:
        _emit(str(value))
    return 0


def cmd_ext(args) -> int:
    t = _triangulation(args)
    m, n = _pair(args, t)
    if args.engine == "geometric":
        raise BadFlags("Ext is computed by the closed-form or knitting engine")
    layout = layout_for_triangulation(t, max(m.level, n.level) + 1)
    value = ext_engine(layout, args.engine)(m, n)
    if args.format == "json":
        _emit(json.dumps({"M": str(m), "N": str(n), "engine": args.engine, "ext": value}))
    else:
        _emit(str(value))
    return 0


def cmd_verify(args) -> int:
    ns = parse_range(args.n) if args.n else None
    if ns and min(ns) < 3:
        raise BadFlags("verify sweeps start at n = 3")
    report = run_verify(ns, args.max_level, fixtures=args.fixtures, geometric=args.engine == "geometric")
    _emit(report.to_json() if args.format == "json" else report.to_text())
    return 0 if report.passed else 1


def cmd_export_dot(args) -> int:
    t = _triangulation(args)
    q = quiver_of_triangulation(t)
    if args.what == "quiver":
        _emit(q.to_dot("QT"))
    else:
        _emit(knit(q, args.max_level).to_dot())
    return 0


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dtilde", description="Twice-punctured polygons, affine D quivers and intersection numbers.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, fmt=("text", "json")):
        sp.add_argument("--n", help="number of marked points, or A..B for verify")
        sp.add_argument("--triangulation", help="triangulation file instead of --n")
        sp.add_argument("--digons", help="boundary gaps of the two digons, e.g. 0,3")
        sp.add_argument("--styles", help="ray styles per puncture: shared or neighbor, e.g. shared,neighbor")
        sp.add_argument("--apex", type=int, help="fan apex of the unpunctured polygon")
        sp.add_argument("--format", choices=fmt, default="text")

    sp = sub.add_parser("triangulate", help="canonical triangulation in file format")
    common(sp, ("text", "json", "dot"))
    sp.add_argument("--svg", help="write the realized arcs as SVG")
    sp.set_defaults(func=cmd_triangulate)

    sp = sub.add_parser("quiver", help="quiver of a triangulation")
    common(sp, ("text", "json", "dot"))
    sp.set_defaults(func=cmd_quiver)

    sp = sub.add_parser("knit", help="dimension vectors of the preprojective component")
    common(sp, ("text", "json", "dot"))
    sp.add_argument("--max-level", type=int, default=6)
    sp.set_defaults(func=cmd_knit)

    sp = sub.add_parser("table", help="grid of dim Ext(-, M) around an anchor")
    common(sp)
    sp.add_argument("--anchor", help="anchor coordinate, e.g. (3,2)")
    sp.add_argument("--width", type=int, default=24)
    sp.add_argument("--engine", choices=("closed-form", "knitting", "geometric"), default="closed-form")
    sp.add_argument("--fixtures", action="store_true", help="print the stored windows with their located anchors")
    sp.set_defaults(func=cmd_table)

    for name, fn, helptext in (("int", cmd_int, "intersection number of two objects"),
                               ("ext", cmd_ext, "dim Ext^1(M, N) for a pair (M, N)")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--pair", required=True, help='two coordinates, e.g. "(3,5) (2,7)"')
        sp.add_argument("--engine", choices=("closed-form", "knitting", "geometric"), default="closed-form")
        if name == "int":
            sp.add_argument("--svg", help="write both realized curves as SVG")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("verify", help="run the verification sweeps")
    sp.add_argument("--n", help="range of n, e.g. 4..7 (default 3..7)")
    sp.add_argument("--max-level", type=int, default=None)
    sp.add_argument("--engine", choices=("closed-form", "knitting", "geometric"), default="knitting",
                    help="geometric adds the curve sweeps")
    sp.add_argument("--fixtures", action="store_true", help="also reproduce the two stored windows")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("export-dot", help="DOT for the quiver or the knitted component")
    common(sp, ("dot",))
    sp.add_argument("--what", choices=("quiver", "component"), default="quiver")
    sp.add_argument("--max-level", type=int, default=4)
    sp.set_defaults(func=cmd_export_dot)
    return p


def run_command(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise BadFlags("missing subcommand")
        if getattr(args, "max_level", None) is not None and args.max_level < 1:
            raise BadFlags("--max-level must be at least 1")
        return args.func(args)
    except (BadFlags, SurfaceError, QuiverError, ValueError, OSError) as exc:
        print(f"dtilde: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
