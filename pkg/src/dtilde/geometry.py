"""Explicit polyline curves in a concrete twice-punctured polygon.

The model has two nested polygons sharing one vertex direction per frame
slot: an inner *core* through all slots (marked points and the two
puncture slots) and an outer boundary, with a thin *collar* between them.
Punctures sit just inside the core next to their slots, so every
triangulation arc is a straight chord of the core, joined to its marked
points through the collar.

``rho^-1`` is a fractional twist supported in the collar: it drags the
boundary one marked point clockwise and fixes the core.  Applying it ``L``
times turns the collar part of each marked end into a spiral that climbs
from the boundary at ``m - L`` to the core next to ``m``.  Spirals are
polylines with one vertex per spoke, and the spirals of one curve are
parallel in (angle, depth) coordinates, so realized curves are simple.

All coordinates are exact fractions.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction as F
from typing import Sequence

from .ppcat import PPCoordinate, PPLayout
from .surface import (
    PUNCTURES,
    PunctureRay,
    TaggedArc,
    Triangulation,
    as_chord,
)

Point = tuple[F, F]


class DegenerateCrossing(ArithmeticError):
    pass


class OutOfScope(ValueError):
    pass


def _rational_unit(angle: float, denom: int = 10**4) -> Point:
    return (F(math.cos(angle)).limit_denominator(denom), F(math.sin(angle)).limit_denominator(denom))


def _scale(p: Point, s) -> Point:
    return (p[0] * s, p[1] * s)


def _lerp(p: Point, q: Point, t) -> Point:
    return (p[0] + (q[0] - p[0]) * t, p[1] + (q[1] - p[1]) * t)


def _orient(a: Point, b: Point, c: Point) -> F:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


@dataclass(frozen=True)
class DiskModel:
    frame: tuple
    core: dict = field(compare=False)  # slot -> point
    outer: dict = field(compare=False)  # slot -> point
    punctures: dict = field(compare=False)  # name -> point
    phase: dict = field(compare=False)  # slot -> angle in marked units

    @property
    def n(self) -> int:
        return len(self.frame) - 2

    def marked_point(self, m: int) -> Point:
        return self.outer[m % self.n]

    def boundary(self) -> list[Point]:
        return [self.outer[s] for s in self.frame]

    def spoke(self, slot, depth) -> Point:
        """Point on the radial spoke of ``slot``; depth 0 is the boundary."""
        return _lerp(self.outer[slot], self.core[slot], depth)


def build_model(frame: Sequence) -> DiskModel:
    frame = tuple(frame)
    total = len(frame)
    core, outer, phase = {}, {}, {}
    gap_members: dict[int, list] = {}
    last_marked = None
    for k, s in enumerate(frame):
        p = _rational_unit(2 * math.pi * k / total)
        core[s] = p
        outer[s] = _scale(p, F(5, 4))
        if isinstance(s, int):
            last_marked = s
        else:
            gap_members.setdefault(last_marked, []).append(s)
    for s in frame:
        if isinstance(s, int):
            phase[s] = F(s)
    for g, members in gap_members.items():
        for idx, p in enumerate(members, start=1):
            phase[p] = F(g) + F(idx, len(members) + 1)
    # a puncture sits between its slot corner and the chord of the two
    # neighbouring corners
    sag = F(1 - math.cos(2 * math.pi / total)).limit_denominator(1000) / 4
    punct = {p: _scale(core[p], 1 - sag) for p in PUNCTURES}
    return DiskModel(frame, core, outer, punct, phase)


def model_for_triangulation(t: Triangulation) -> DiskModel:
    return build_model(t.frame)


@dataclass(frozen=True)
class PolyCurve:
    points: tuple
    ep0: object  # puncture name or marked index
    ep1: object
    tag: int | None = None

    @property
    def segments(self) -> list[tuple[Point, Point]]:
        return list(zip(self.points, self.points[1:]))

    def point_at(self, param: tuple[int, F]) -> Point:
        i, t = param
        if i == len(self.points) - 1:
            return self.points[-1]
        return _lerp(self.points[i], self.points[i + 1], t)

    def sub_path(self, a: tuple[int, F], b: tuple[int, F]) -> list[Point]:
        """Points from parameter ``a`` to parameter ``b`` (either order)."""
        if a <= b:
            pts = [self.point_at(a)]
            pts += [self.points[k] for k in range(a[0] + 1, b[0] + 1) if (k, F(0)) < b]
            pts.append(self.point_at(b))
            return pts
        return list(reversed(self.sub_path(b, a)))

    def end_params(self) -> tuple[tuple[int, F], tuple[int, F]]:
        return (0, F(0)), (len(self.points) - 1, F(0))

    def reversed(self) -> "PolyCurve":
        return PolyCurve(tuple(reversed(self.points)), self.ep1, self.ep0, self.tag)


# ------------------------------------------------------------ realization


def _next_slot(model: DiskModel, slot):
    k = model.frame.index(slot)
    return model.frame[(k + 1) % len(model.frame)]


def _spiral(model: DiskModel, m: int, turns: int, shrink: F) -> list[Point]:
    """Collar path from the boundary at ``m - turns`` up to spoke ``m``."""
    n = model.n
    start = (m - turns) % n
    if turns == 0:
        return [model.marked_point(m)]
    pts = [model.marked_point(start)]
    slot = start
    unwrapped = F(start)
    target = F(start + turns)
    base = F(start)
    while True:
        nxt = _next_slot(model, slot)
        step = (model.phase[nxt] - model.phase[slot]) % n
        if step == 0:
            step = F(n)  # only when n == 1
        unwrapped += step
        slot = nxt
        depth = (unwrapped - base) / turns * (1 - shrink)
        pts.append(model.spoke(slot, depth))
        if unwrapped >= target:
            break
    return pts


def _entry(model: DiskModel, m: int, slide: F) -> Point:
    """Point on the core boundary just counterclockwise of marked corner ``m``."""
    return _lerp(model.core[m], model.core[_next_slot(model, m)], slide)


@dataclass(frozen=True)
class Jitter:
    shrink: F
    slide: F

    @classmethod
    def draw(cls, rng: random.Random) -> "Jitter":
        return cls(F(rng.randint(20, 400), 4001), F(rng.randint(5, 200), 4001))


def realize_arc(model: DiskModel, arc: TaggedArc, turns: int = 0, jitter: Jitter | None = None,
                tag: int | None = None) -> PolyCurve:
    """Polyline for ``rho^-turns`` of a frame-straight triangulation arc."""
    jitter = jitter or Jitter(F(1, 37), F(1, 53))
    if isinstance(arc, PunctureRay):
        m = arc.marked
        tail = _spiral(model, m, turns, jitter.shrink)
        pts = [model.punctures[arc.puncture], _entry(model, m, jitter.slide)]
        pts += list(reversed(tail))
        if tag is None:
            tag = arc.tag ^ (turns % 2)
        return PolyCurve(tuple(pts), arc.puncture, (m - turns) % model.n, tag)
    c = as_chord(arc)
    if c is None:
        raise OutOfScope("curves with both ends at punctures are not realized")
    if c.a == c.b:
        raise OutOfScope("loops are not drawn straight in the frame")
    head = _spiral(model, c.a, turns, jitter.shrink)
    tail = _spiral(model, c.b, turns, jitter.shrink)
    pts = list(head)
    pts.append(_entry(model, c.a, jitter.slide))
    pts.append(_entry(model, c.b, jitter.slide))
    pts += list(reversed(tail))
    return PolyCurve(tuple(pts), (c.a - turns) % model.n, (c.b - turns) % model.n, None)


def realize_curve(model: DiskModel, layout: PPLayout, c: PPCoordinate, seed: int = 0,
                  variant: int = 0) -> PolyCurve:
    """Curve of preprojective object ``c``: ``rho^-level`` of its base arc."""
    if layout.triangulation is None:
        raise OutOfScope("layout has no triangulation to realize")
    rng = random.Random(f"{seed}:{variant}:{c.level}:{c.base}")
    arc = layout.triangulation.arc(c.base)
    return realize_arc(model, arc, c.level, Jitter.draw(rng))


def realize_triangulation_arc(model: DiskModel, t: Triangulation, i: int, seed: int = 0) -> PolyCurve:
    rng = random.Random(f"{seed}:arc:{i}")
    return realize_arc(model, t.arc(i), 0, Jitter.draw(rng))


# -------------------------------------------------------------- crossings


@dataclass(frozen=True)
class Event:
    key: int
    p1: tuple
    p2: tuple
    pseudo: bool = False


def _segment_hits(a, b, c, d):
    """Proper crossing parameters of ``ab`` and ``cd``, ``None`` if disjoint."""
    d1 = _orient(a, b, c)
    d2 = _orient(a, b, d)
    d3 = _orient(c, d, a)
    d4 = _orient(c, d, b)
    if d1 * d2 > 0 or d3 * d4 > 0:
        return None
    if d1 == 0 and d2 == 0:
        lo1, hi1 = sorted([a, b])
        lo2, hi2 = sorted([c, d])
        if max(lo1, lo2) <= min(hi1, hi2):
            raise DegenerateCrossing("collinear overlapping segments")
        return None
    if 0 in (d1, d2, d3, d4):
        return "touch"
    return d3 / (d3 - d4), d1 / (d1 - d2)


def _bbox_apart(a, b, c, d) -> bool:
    return (
        max(a[0], b[0]) < min(c[0], d[0])
        or max(c[0], d[0]) < min(a[0], b[0])
        or max(a[1], b[1]) < min(c[1], d[1])
        or max(c[1], d[1]) < min(a[1], b[1])
    )


def crossings(c1: PolyCurve, c2: PolyCurve) -> list[Event]:
    """Transversal crossings away from shared curve endpoints."""
    shared = {p for p in (c1.points[0], c1.points[-1]) if p in (c2.points[0], c2.points[-1])}
    out = []
    s1, s2 = c1.segments, c2.segments
    for i, (a, b) in enumerate(s1):
        for j, (c, d) in enumerate(s2):
            if _bbox_apart(a, b, c, d):
                continue
            hit = _segment_hits(a, b, c, d)
            if hit is None:
                continue
            if hit == "touch":
                common = {a, b} & {c, d}
                if common and common <= shared:
                    other = _segment_hits_excluding(a, b, c, d, common)
                    if other is None:
                        continue
                raise DegenerateCrossing("curves touch at a vertex")
            t, u = hit
            out.append(Event(len(out), (i, t), (j, u)))
    return out


def _segment_hits_excluding(a, b, c, d, common):
    # two segments from one shared endpoint: fine unless they are collinear
    (p,) = common
    q = b if a == p else a
    r = d if c == p else c
    if _orient(p, q, r) == 0 and (q[0] - p[0]) * (r[0] - p[0]) + (q[1] - p[1]) * (r[1] - p[1]) > 0:
        raise DegenerateCrossing("curves leave a shared endpoint along the same ray")
    return None


def winding_number(loop: list[Point], p: Point) -> int:
    wn = 0
    for a, b in zip(loop, loop[1:] + loop[:1]):
        if a == b:
            continue
        o = _orient(a, b, p)
        if o == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
            raise DegenerateCrossing("puncture lies on a bigon boundary")
        if a[1] <= p[1]:
            if b[1] > p[1] and o > 0:
                wn += 1
        elif b[1] <= p[1] and o < 0:
            wn -= 1
    return wn


def _empty(model: DiskModel, loop: list[Point]) -> bool:
    for q in model.punctures.values():
        if q in loop:
            continue
        if winding_number(loop, q) != 0:
            return False
    return True


def _pseudo_events(c1: PolyCurve, c2: PolyCurve, start: int) -> list[Event]:
    out = []
    e1 = c1.end_params()
    e2 = c2.end_params()
    ends1 = [(c1.points[0], e1[0]), (c1.points[-1], e1[1])]
    ends2 = [(c2.points[0], e2[0]), (c2.points[-1], e2[1])]
    for p, u in ends1:
        for q, v in ends2:
            if p == q:
                out.append(Event(start + len(out), u, v, pseudo=True))
    return out


def reduce_crossings(model: DiskModel, c1: PolyCurve, c2: PolyCurve, events: list[Event],
                     rng: random.Random | None = None) -> list[Event]:
    """Remove empty bigons and empty half-bigons at shared endpoints."""
    events = list(events) + _pseudo_events(c1, c2, len(events))
    while True:
        order1 = sorted(events, key=lambda e: e.p1)
        order2 = sorted(events, key=lambda e: e.p2)
        pos2 = {e.key: k for k, e in enumerate(order2)}
        pairs = []
        for x, y in zip(order1, order1[1:]):
            if x.pseudo and y.pseudo:
                continue
            if abs(pos2[x.key] - pos2[y.key]) == 1:
                pairs.append((x, y))
        if rng is not None:
            rng.shuffle(pairs)
        for x, y in pairs:
            loop = c1.sub_path(x.p1, y.p1) + c2.sub_path(y.p2, x.p2)[1:-1]
            if _empty(model, loop):
                drop = {e.key for e in (x, y) if not e.pseudo}
                events = [e for e in events if e.key not in drop]
                break
        else:
            return [e for e in events if not e.pseudo]


def untagged_homotopic(model: DiskModel, c1: PolyCurve, c2: PolyCurve, reduced: int) -> bool:
    if {c1.points[0], c1.points[-1]} != {c2.points[0], c2.points[-1]}:
        return False
    if reduced:
        return False
    if c1.points[0] != c2.points[0]:
        c2 = c2.reversed()
    loop = list(c1.points) + list(reversed(c2.points))[1:-1]
    return _empty(model, loop)


def punctured_intersections(c1: PolyCurve, c2: PolyCurve, homotopic: bool) -> int:
    ends1 = {e: c1.tag for e in (c1.ep0, c1.ep1) if isinstance(e, str)}
    ends2 = {e: c2.tag for e in (c2.ep0, c2.ep1) if isinstance(e, str)}
    differ = [p for p in ends1 if p in ends2 and ends1[p] != ends2[p]]
    if not differ:
        return 0
    if homotopic:
        # both ends must be punctures with differing tags
        return len(differ) if len(differ) == 2 else 0
    return len(differ)


def normal_intersections(model: DiskModel, c1: PolyCurve, c2: PolyCurve,
                         rng: random.Random | None = None) -> int:
    return len(reduce_crossings(model, c1, c2, crossings(c1, c2), rng))


def minimal_position_int(model: DiskModel, c1: PolyCurve, c2: PolyCurve,
                         rng: random.Random | None = None) -> int:
    """Normal intersections in minimal position plus punctured intersections."""
    normal = normal_intersections(model, c1, c2, rng)
    homotopic = untagged_homotopic(model, c1, c2, normal)
    return normal + punctured_intersections(c1, c2, homotopic)


def self_intersection_count(model: DiskModel, c: PolyCurve) -> int:
    """Self-crossings left after removing empty monogons."""
    segs = c.segments
    events = []
    for i in range(len(segs)):
        for j in range(i + 2, len(segs)):
            a, b = segs[i]
            d0, d1 = segs[j]
            if _bbox_apart(a, b, d0, d1):
                continue
            hit = _segment_hits(a, b, d0, d1)
            if hit is None:
                continue
            if hit == "touch":
                if i == 0 and j == len(segs) - 1 and c.points[0] == c.points[-1]:
                    continue
                raise DegenerateCrossing("curve touches itself at a vertex")
            t, u = hit
            events.append(((i, t), (j, u)))
    while True:
        for k, (s, t) in enumerate(events):
            inner = [e for e in events if e is not events[k] and (s < e[0] < t or s < e[1] < t)]
            if inner:
                continue
            if _empty(model, c.sub_path(s, t)[:-1]):
                events.pop(k)
                break
        else:
            return len(events)


# ----------------------------------------------------------- high level


def intersection_number(model: DiskModel, layout: PPLayout, c1: PPCoordinate, c2: PPCoordinate,
                        seed: int = 0, attempts: int = 8) -> int:
    """Int of two preprojective curves, retrying on degenerate realizations."""
    for k in range(attempts):
        try:
            x = realize_curve(model, layout, c1, seed + k, 0)
            y = realize_curve(model, layout, c2, seed + k, 1)
            return minimal_position_int(model, x, y)
        except DegenerateCrossing:
            continue
    raise DegenerateCrossing(f"no generic realization of {c1}, {c2} in {attempts} attempts")


def intersection_with_arc(model: DiskModel, layout: PPLayout, c: PPCoordinate, i: int,
                          seed: int = 0, attempts: int = 8) -> int:
    t = layout.triangulation
    for k in range(attempts):
        try:
            x = realize_curve(model, layout, c, seed + k, 0)
            y = realize_triangulation_arc(model, t, i, seed + k)
            return minimal_position_int(model, x, y)
        except DegenerateCrossing:
            continue
    raise DegenerateCrossing(f"no generic realization of {c} against arc {i}")


def dim_vector_from_curve(model: DiskModel, layout: PPLayout, c: PPCoordinate, seed: int = 0) -> tuple[int, ...]:
    """``(Int(curve, i))_i`` over the triangulation arcs."""
    return tuple(intersection_with_arc(model, layout, c, i, seed) for i in layout.triangulation.ids())


def to_svg(model: DiskModel, curves: Sequence[PolyCurve], size: int = 480) -> str:
    scale = size / 3
    off = size / 2

    def xy(p):
        return f"{float(p[0]) * scale + off:.2f},{off - float(p[1]) * scale:.2f}"

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    out.append(f'<polygon points="{" ".join(xy(p) for p in model.boundary())}" fill="none" stroke="black"/>')
    core = [model.core[s] for s in model.frame]
    out.append(f'<polygon points="{" ".join(xy(p) for p in core)}" fill="none" stroke="#bbb" stroke-dasharray="4"/>')
    for m in range(model.n):
        x, y = xy(model.marked_point(m)).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="4"/><text x="{x}" y="{y}" dy="-6">{m}</text>')
    for name, p in model.punctures.items():
        x, y = xy(p).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="white" stroke="black"/>')
        out.append(f'<text x="{x}" y="{y}" dy="14">{name}</text>')
    for k, c in enumerate(curves):
        color = palette[k % len(palette)]
        out.append(f'<polyline points="{" ".join(xy(p) for p in c.points)}" fill="none" stroke="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
