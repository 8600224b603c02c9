"""Verification sweeps shared by the CLI and the acceptance tests.

Each ``check_*`` function returns a :class:`CheckResult`; a failing check
carries the offending inputs so they can be replayed one at a time.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import geometry
from .fixtures import AnchorMatch, hom_engine, load_fixture, row_maps, scan_anchor, window_mismatches
from .gluings import enumerate_gluings
from .knitting import ext_dim, euler_form, hom_dim, knit, mesh_middles
from .ppcat import (
    PPCoordinate,
    PPLayout,
    RelCoordinate,
    closed_form_hom,
    closed_form_int,
    layout_for_triangulation,
    resolve,
)
from .quiver import build_quiver, classify_type, is_acyclic, mutate
from .surface import (
    audit_structure,
    canonical_configurations,
    canonical_triangulation,
    endpoints,
    enumerate_triangulations,
    quiver_of_triangulation,
    rotate_triangulation,
)

RECTANGLE_CORNERS = ((1, 0), (1, 2), (1, -5), (3, -3))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    counterexamples: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.detail} ({self.seconds:.1f}s)"

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "counterexamples": [list(map(str, c)) for c in self.counterexamples],
            "seconds": round(self.seconds, 3),
        }


@dataclass
class VerifyReport:
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        lines = [c.line() for c in self.checks]
        for c in self.checks:
            for ce in c.counterexamples[:10]:
                lines.append(f"  {c.name}: " + " ".join(map(str, ce)))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"passed": self.passed, "checks": [c.as_dict() for c in self.checks]}, indent=2)


def _timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - start
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _limit(bad: list, k: int = 50) -> list:
    return bad[:k]


# --------------------------------------------------------------- engines


def int_engine(layout: PPLayout, engine: str, seed: int = 0) -> Callable[[PPCoordinate, PPCoordinate], int]:
    """Intersection number of two preprojective objects by the named engine."""
    if engine == "closed-form":
        return lambda x, y: closed_form_int(layout, x, y)
    if engine == "knitting":
        comp = knit(layout.quiver, layout.max_level)
        return lambda x, y: 0 if x == y else ext_dim(comp, x, y) + ext_dim(comp, y, x)
    if engine == "geometric":
        model = geometry.model_for_triangulation(layout.triangulation)
        return lambda x, y: 0 if x == y else geometry.intersection_number(model, layout, x, y, seed)
    raise ValueError(f"unknown engine {engine!r}")


def ext_engine(layout: PPLayout, engine: str) -> Callable[[PPCoordinate, PPCoordinate], int]:
    if engine == "closed-form":
        return lambda m, n: closed_form_hom(layout, n.shifted(1), m)
    if engine == "knitting":
        comp = knit(layout.quiver, layout.max_level + 1)
        return lambda m, n: ext_dim(comp, m, n)
    raise ValueError(f"Ext is computed by the closed-form or knitting engine, not {engine!r}")


# ---------------------------------------------------------------- checks


@_timed
def check_figure(name: str, engine: str = "knitting") -> CheckResult:
    """Reproduce a printed Hom window around some anchor."""
    grid = load_fixture(name)
    match = scan_anchor(grid, engine)
    label = f"window {name}"
    if match is None:
        t = canonical_triangulation(grid.n)
        lay = layout_for_triangulation(t, len(grid.matrix[0]) // 2 + 5)
        first = AnchorMatch(PPCoordinate(2, lay.vertex_of_row(grid.anchor[0] + 1)), row_maps(lay.d)[0], lay)
        bad = window_mismatches(grid, first, hom_engine(lay, engine))
        return CheckResult(label, False, "no anchor reproduces the window", _limit(bad))
    detail = f"anchor {match.anchor} on the canonical {grid.n}-gon, {sum(1 for _ in grid.cells())} cells"
    bad = []
    if name == "fig8":
        hom = hom_engine(match.layout, engine)
        src = match.anchor.shifted(1)
        for a, b in RECTANGLE_CORNERS:
            y = resolve(match.layout, match.anchor, RelCoordinate(a, b))
            cells = [v for r, k, v in grid.cells() if match.place(grid, r, k) == y]
            if cells != [1] or hom(src, y) != 1:
                bad.append(((a, b), y, cells, hom(src, y)))
        detail += ", rectangle corners (1,0) (1,2) (1,-5) (3,-3) all 1"
    return CheckResult(label, not bad, detail, bad)


@_timed
def check_theorem(ns=range(3, 8), max_level: int = 8, all_styles: bool = True) -> CheckResult:
    """closed_form_int equals the two Ext dimensions summed, all ordered pairs."""
    bad = []
    pairs = 0
    styles = [("shared", "shared"), ("shared", "neighbor"), ("neighbor", "shared"), ("neighbor", "neighbor")]
    for n in ns:
        for st in styles if all_styles else styles[:1]:
            t = canonical_triangulation(n, puncture_arc_styles=st)
            lay = layout_for_triangulation(t, max_level)
            comp = knit(lay.quiver, max_level)
            cs = lay.coords()
            for x in cs:
                for y in cs:
                    pairs += 1
                    expect = 0 if x == y else ext_dim(comp, x, y) + ext_dim(comp, y, x)
                    got = closed_form_int(lay, x, y)
                    if got != expect:
                        bad.append((n, st, x, y, expect, got))
    detail = f"n in {min(ns)}..{max(ns)}, levels <= {max_level}, {pairs} ordered pairs, {len(bad)} mismatches"
    return CheckResult("intersection equals summed Ext", not bad, detail, _limit(bad))


@_timed
def check_dim_vectors(ns=range(3, 7), max_level: int = 5, seed: int = 0) -> CheckResult:
    """Geometric intersections with the triangulation arcs give the knitted dim vectors."""
    bad = []
    curves = 0
    for n in ns:
        t = canonical_triangulation(n)
        lay = layout_for_triangulation(t, max_level)
        comp = knit(lay.quiver, max_level)
        model = geometry.model_for_triangulation(t)
        for c in lay.coords():
            curves += 1
            got = geometry.dim_vector_from_curve(model, lay, c, seed)
            if got != comp.dim(c):
                bad.append((n, c, comp.dim(c), got))
    detail = f"n in {min(ns)}..{max(ns)}, levels <= {max_level}, {curves} curves, {len(bad)} mismatches"
    return CheckResult("curve dim vectors", not bad, detail, _limit(bad))


@_timed
def check_cross_engine(ns=range(3, 6), max_level: int = 4, seed: int = 0) -> CheckResult:
    """Minimal position counts agree with the closed form on all pairs."""
    bad = []
    pairs = 0
    self_crossing = []
    for n in ns:
        t = canonical_triangulation(n)
        lay = layout_for_triangulation(t, max_level)
        model = geometry.model_for_triangulation(t)
        cs = lay.coords()
        for c in cs:
            if geometry.self_intersection_count(model, geometry.realize_curve(model, lay, c, seed)):
                self_crossing.append((n, c))
        for i, x in enumerate(cs):
            for y in cs[i:]:
                pairs += 1
                got = geometry.intersection_number(model, lay, x, y, seed) if x != y else _same_curve_int(model, lay, x, seed)
                expect = closed_form_int(lay, x, y)
                if got != expect:
                    bad.append((n, x, y, expect, got))
    detail = (f"n in {min(ns)}..{max(ns)}, levels <= {max_level}, {pairs} unordered pairs, "
              f"{len(bad)} mismatches, {len(self_crossing)} self-crossing curves")
    return CheckResult("geometric vs closed form", not bad and not self_crossing, detail,
                       _limit(bad) + [("self-crossing",) + s for s in self_crossing])


def _same_curve_int(model, lay, c, seed) -> int:
    """Int of two independent realizations of one object."""
    for k in range(8):
        try:
            x = geometry.realize_curve(model, lay, c, seed + k, 0)
            y = geometry.realize_curve(model, lay, c, seed + k, 1)
            return geometry.minimal_position_int(model, x, y)
        except geometry.DegenerateCrossing:
            continue
    raise geometry.DegenerateCrossing(f"no generic pair of realizations of {c}")


@_timed
def check_oracles(ns=range(3, 10), max_level: int = 12) -> CheckResult:
    """Mesh additivity, Euler form, Tits form and Hom(X, tau X) = 0."""
    bad = []
    pairs = 0
    for n in ns:
        q = quiver_of_triangulation(canonical_triangulation(n))
        comp = knit(q, max_level)
        cs = comp.coords()
        for (level, i) in cs:
            d = comp.dim((level, i))
            if euler_form(q, d, d) != 1:
                bad.append((n, "tits", (level, i), d))
            if level >= 2:
                total = [0] * q.vertex_count
                for m in mesh_middles(q, level, i):
                    total = [a + b for a, b in zip(total, comp.dim(m))]
                lhs = [a + b for a, b in zip(d, comp.dim((level - 1, i)))]
                if lhs != total:
                    bad.append((n, "mesh", (level, i)))
                if hom_dim(comp, (level, i), (level - 1, i)) != 0:
                    bad.append((n, "hom to tau", (level, i)))
        for x in cs:
            for y in cs:
                pairs += 1
                lhs = hom_dim(comp, x, y) - ext_dim(comp, x, y)
                if lhs != euler_form(q, comp.dim(x), comp.dim(y)):
                    bad.append((n, "euler", x, y))
    detail = f"n in {min(ns)}..{max(ns)}, levels <= {max_level}, {pairs} pairs, {len(bad)} failures"
    return CheckResult("knitting oracles", not bad, detail, _limit(bad))


@_timed
def check_structure(ns=range(3, 10)) -> CheckResult:
    """Small surfaces by exhaustive gluing, arc counts for generated ones."""
    bad = []
    notes = []
    classes = {small: enumerate_gluings(small, mirror=True) for small in (1, 2)}
    for small, gs in classes.items():
        for g in gs:
            if g.has_puncture_pair() and g.is_acyclic():
                bad.append((small, "acyclic with a puncture-to-puncture arc", g.edge_ends()))
        notes.append(f"{small}-gon: {len(gs)} classes")
    digon = [g for g in classes[2] if g.is_acyclic()]
    if len(digon) != 4:
        bad.append(("digon acyclic classes", len(digon)))
    for g in digon:
        if str(classify_type(g.quiver())) != "AffineD(4)":
            bad.append(("digon type", str(classify_type(g.quiver()))))
    audited = 0
    for small in (1, 2, 3):
        for t in enumerate_triangulations(small):
            if is_acyclic(quiver_of_triangulation(t)):
                audited += 1
                report = audit_structure(t)
                if not report.passed:
                    bad.append((small, "audit", t.frame, t.arcs))
    notes.append(f"{audited} acyclic enumerated triangulations audited")
    generated = 0
    for n in ns:
        for t in canonical_configurations(n):
            generated += 1
            if len(t.arcs) != n + 3:
                bad.append((n, "arc count", len(t.arcs)))
    detail = (f"{', '.join(notes)}, {len(digon)} acyclic digon classes, "
              f"{generated} generated triangulations with n+3 arcs")
    return CheckResult("surface structure", not bad, detail, _limit(bad))


def random_acyclic_quiver(rng: random.Random, max_vertices: int = 8):
    k = rng.randint(2, max_vertices)
    order = list(range(1, k + 1))
    rng.shuffle(order)
    arrows = []
    for a in range(k):
        for b in range(a + 1, k):
            if rng.random() < 0.35:
                arrows += [(order[a], order[b])] * rng.choice((1, 1, 1, 2))
    return build_quiver(k, arrows)


@_timed
def check_algebra(samples: int = 1000, ns=range(3, 10), seed: int = 0) -> CheckResult:
    """Mutation is an involution; rotation keeps the quiver and adjacency."""
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        q = random_acyclic_quiver(rng)
        i = rng.randint(1, q.vertex_count)
        if mutate(mutate(q, i), i) != q:
            bad.append(("mutation", q.arrows, i))
    count = 0
    for n in ns:
        for t in canonical_configurations(n):
            count += 1
            r = rotate_triangulation(t, 1)
            if quiver_of_triangulation(r) != quiver_of_triangulation(t):
                bad.append(("rotation quiver", n, t.frame, t.arcs))
            for x, y, rx, ry in _pairs(t.arcs, r.arcs):
                if (endpoints(x) & endpoints(y)) and not (endpoints(rx) & endpoints(ry)):
                    bad.append(("adjacency", n, x, y))
    detail = f"{samples} random mutations, {count} rotated triangulations, {len(bad)} failures"
    return CheckResult("mutation and rotation", not bad, detail, _limit(bad))


def _pairs(arcs, rotated):
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            yield arcs[i], arcs[j], rotated[i], rotated[j]


ALL_CHECKS = {
    "fig9": lambda: check_figure("fig9"),
    "fig8": lambda: check_figure("fig8"),
    "theorem": check_theorem,
    "dim-vectors": check_dim_vectors,
    "cross-engine": check_cross_engine,
    "oracles": check_oracles,
    "structure": check_structure,
    "algebra": check_algebra,
}


def run_verify(ns=None, max_level=None, fixtures: bool = False, geometric: bool = False) -> VerifyReport:
    """The ``verify`` subcommand: the main identity on the requested range,
    plus the stored windows and geometric sweeps when asked for."""
    checks = []
    if fixtures:
        checks += [check_figure("fig9"), check_figure("fig8")]
    ns = ns or range(3, 8)
    max_level = max_level or 8
    checks.append(check_theorem(ns, max_level))
    checks.append(check_oracles(ns, max_level))
    if geometric:
        gns = [n for n in ns if n <= 8]
        if gns:
            gl = min(max_level, 6)
            checks.append(check_dim_vectors(gns, gl))
            checks.append(check_cross_engine(gns, min(gl, 4)))
    return VerifyReport(checks)
