"""Preprojective tagged edges as a coordinate lattice, and the closed-form
intersection calculator.

Objects are ``(level, base)`` with ``level >= 1``; the curve of
``(level, j)`` is ``rho^-level`` applied to triangulation arc ``j``.

Placement in the translation quiver: object ``(level, i)`` sits in column
``2*level + h(i)`` (``h`` drops by one along every arrow of ``Q``) and at
depth ``2`` (top fork), ``r`` (middle row ``r``) or ``N`` (bottom fork) for
the canonical rows of the affine ``D_N`` diagram.

Closed form for ``dim Hom(X, Y)``.  Folding the infinite strip
``Z A_inf^inf`` along the mirrors at depth ``2`` and depth ``N`` gives the
``Z D_N`` mesh, with the two fork values summed.  The hom function of ``X``
unfolds to a sum of forward cones, one for each mirror image of ``X``, so on a
middle row it counts the images whose cone contains ``Y``.  On a fork row
the count ``S`` splits as ``(S + e)/2`` where ``e`` is ``+1``/``-1`` for a
same-end fork of equal/opposite tag (``X`` a fork) and ``0`` otherwise.
Rectangles, triangles and the periodic fork patterns are all slices of
this count.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import ceil, floor

from .quiver import NotAcyclic, Quiver, classify_type, is_acyclic
from .surface import PunctureRay, TaggedArc, Triangulation, rotate


class NotAffineD(ValueError):
    pass


class Unreachable(ValueError):
    pass


class OutOfScope(ValueError):
    pass


@dataclass(frozen=True, order=True)
class PPCoordinate:
    level: int
    base: int

    def __post_init__(self):
        if self.level < 1:
            raise OutOfScope(f"preprojective levels start at 1, got {self.level}")

    def __iter__(self):
        # unpacks like the (level, vertex) pairs used by the knitting engine
        return iter((self.level, self.base))

    def shifted(self, k: int) -> "PPCoordinate":
        """``tau^-k`` of this object."""
        return PPCoordinate(self.level + k, self.base)

    def __str__(self) -> str:
        return f"({self.level},{self.base})"


@dataclass(frozen=True)
class RelCoordinate:
    a: int
    b: int
    tag: int | None = None

    def __str__(self) -> str:
        k = "-" if self.tag is None else str(self.tag)
        return f"({self.a},{self.b})^{k}"


@dataclass(frozen=True)
class RegionClass:
    kind: str  # TypeA, TypeDTop, TypeDBottom
    row: int
    puncture: str | None = None
    tag: int | None = None

    def __str__(self) -> str:
        if self.kind == "TypeA":
            return f"TypeA({self.row})"
        extra = "" if self.puncture is None else f", {self.puncture}, tag {self.tag}"
        return f"{self.kind}({self.row}{extra})"


@dataclass(frozen=True)
class PPLayout:
    quiver: Quiver
    max_level: int
    rows: dict  # vertex -> canonical row
    heights: dict  # vertex -> column offset
    triangulation: Triangulation | None = field(default=None, compare=False)

    @property
    def d(self) -> int:
        """Index of the affine type: ``D_d`` has ``d + 1`` vertices."""
        return self.quiver.vertex_count - 1

    @property
    def arrows(self) -> list[tuple[PPCoordinate, PPCoordinate]]:
        out = []
        for level in range(1, self.max_level + 1):
            for s, t in self.quiver.arrows:
                # arrow s -> t of Q is t -> s of the opposite quiver
                out.append((PPCoordinate(level, t), PPCoordinate(level, s)))
                if level < self.max_level:
                    out.append((PPCoordinate(level, s), PPCoordinate(level + 1, t)))
        return out

    @property
    def meshes(self) -> dict[PPCoordinate, list[PPCoordinate]]:
        out = {}
        for level in range(2, self.max_level + 1):
            for i in self.quiver.vertices:
                mids = [PPCoordinate(level - 1, j) for j in self.quiver.predecessors(i)]
                mids += [PPCoordinate(level, k) for k in self.quiver.successors(i)]
                out[PPCoordinate(level, i)] = mids
        return out

    def coords(self) -> list[PPCoordinate]:
        return [PPCoordinate(lv, i) for lv in range(1, self.max_level + 1) for i in self.quiver.vertices]

    def column(self, c: PPCoordinate) -> int:
        return 2 * c.level + self.heights[c.base]

    def row(self, c: PPCoordinate) -> int:
        return self.rows[c.base]

    def depth_of_row(self, r: int) -> int:
        if r <= 2:
            return 2
        if r >= self.d:
            return self.d
        return r

    def depth(self, c: PPCoordinate) -> int:
        return self.depth_of_row(self.row(c))

    def vertex_of_row(self, r: int) -> int:
        for v, rr in self.rows.items():
            if rr == r:
                return v
        raise KeyError(r)

    def arc(self, c: PPCoordinate) -> TaggedArc:
        """Symbolic curve of ``c``: ``rho^-level`` of its base arc."""
        if self.triangulation is None:
            raise ValueError("layout has no triangulation attached")
        return rotate(self.triangulation.arc(c.base), -c.level)

    def tag(self, c: PPCoordinate) -> int | None:
        if self.triangulation is None:
            return None
        arc = self.triangulation.arc(c.base)
        if isinstance(arc, PunctureRay):
            return arc.tag ^ (c.level % 2)
        return None


def _heights(q: Quiver) -> dict[int, int]:
    h = {1: 0}
    queue = deque([1])
    while queue:
        v = queue.popleft()
        for w in q.successors(v):
            if w not in h:
                h[w] = h[v] - 1
                queue.append(w)
        for w in q.predecessors(v):
            if w not in h:
                h[w] = h[v] + 1
                queue.append(w)
    low = min(h.values())
    return {v: x - low for v, x in h.items()}


def build_layout(q: Quiver, max_level: int, triangulation: Triangulation | None = None) -> PPLayout:
    if not is_acyclic(q):
        raise NotAcyclic("layout needs an acyclic quiver")
    cls = classify_type(q)
    if not cls.is_affine_d:
        raise NotAffineD("layout needs a quiver of affine type D")
    rows = dict(cls.canonical_labeling)
    if triangulation is not None:
        rows = _rows_by_puncture(rows, triangulation, cls.n)
    return PPLayout(q, max_level, rows, _heights(q), triangulation)


def _rows_by_puncture(rows: dict, t: Triangulation, d: int) -> dict:
    """Put the rays at ``P0`` on the top fork rows when possible."""
    top = [v for v, r in rows.items() if r in (1, 2)]
    arc = t.arc(top[0])
    if isinstance(arc, PunctureRay) and arc.puncture == "P1":
        flip = {1: d, 2: d + 1, d: 1, d + 1: 2}
        rows = {v: (d + 2 - r if 3 <= r <= d - 1 else flip[r]) for v, r in rows.items()}
    return rows


def layout_for_triangulation(t: Triangulation, max_level: int) -> PPLayout:
    from .surface import quiver_of_triangulation

    return build_layout(quiver_of_triangulation(t), max_level, t)


# ------------------------------------------------------------ regions


def classify_region(layout: PPLayout, c: PPCoordinate) -> RegionClass:
    r = layout.row(c)
    d = layout.d
    if 3 <= r <= d - 1:
        return RegionClass("TypeA", r)
    kind = "TypeDTop" if r <= 2 else "TypeDBottom"
    puncture = None
    if layout.triangulation is not None:
        arc = layout.triangulation.arc(c.base)
        if isinstance(arc, PunctureRay):
            puncture = arc.puncture
    return RegionClass(kind, r, puncture, layout.tag(c))


def relative_coordinates(layout: PPLayout, anchor: PPCoordinate, target: PPCoordinate) -> RelCoordinate:
    """``(a, b)^tag``: ``a`` steps of ``tau^-1`` and ``b`` diagonal steps
    (positive upwards) lead from ``anchor`` to ``target``."""
    b = layout.depth(anchor) - layout.depth(target)
    dc = layout.column(target) - layout.column(anchor) - abs(b)
    if dc % 2:
        raise Unreachable(f"{target} is not on the lattice of {anchor}")
    return RelCoordinate(dc // 2, b, layout.tag(target))


def resolve(layout: PPLayout, anchor: PPCoordinate, rel: RelCoordinate) -> PPCoordinate:
    """Inverse of :func:`relative_coordinates`; the tag picks a fork row."""
    depth = layout.depth(anchor) - rel.b
    col = layout.column(anchor) + 2 * rel.a + abs(rel.b)
    d = layout.d
    if depth == 2:
        rows = [1, 2]
    elif depth == d:
        rows = [d, d + 1]
    elif 3 <= depth <= d - 1:
        rows = [depth]
    else:
        raise Unreachable(f"depth {depth} outside the diagram")
    hits = []
    for r in rows:
        v = layout.vertex_of_row(r)
        twice_level = col - layout.heights[v]
        if twice_level % 2 or twice_level < 2:
            continue
        c = PPCoordinate(twice_level // 2, v)
        if len(rows) == 1 or rel.tag is None or layout.tag(c) == rel.tag:
            hits.append(c)
    if len(hits) != 1:
        raise Unreachable(f"{rel} from {anchor} resolves to {len(hits)} objects")
    return hits[0]


# ---------------------------------------------------------- closed form


def _images_within(t0: int, t: int, reach: int, d: int) -> int:
    """Mirror images of depth ``t0`` within distance ``reach`` of depth ``t``."""
    period = 2 * (d - 2)
    bases = [t0] if t0 in (2, d) else [t0, 4 - t0]
    total = 0
    for base in bases:
        lo = ceil((t - base - reach) / period)
        hi = floor((t - base + reach) / period)
        total += max(0, hi - lo + 1)
    return total


def closed_form_hom(layout: PPLayout, x: PPCoordinate, y: PPCoordinate) -> int:
    """``dim Hom(X, Y)`` between preprojectives from their positions alone."""
    dp = layout.column(y) - layout.column(x)
    if dp < 0:
        return 0
    t0, t = layout.depth(x), layout.depth(y)
    if (dp - (t - t0)) % 2:
        raise Unreachable("columns and depths disagree in parity")
    count = _images_within(t0, t, dp, layout.d)
    if t not in (2, layout.d):
        return count
    rx, ry = layout.row(x), layout.row(y)
    sign = 0
    if t0 == t:
        # only fork sources split a fork pair unevenly
        sign = (-1) ** (dp // 2) * (1 if rx == ry else -1)
    return (count + sign) // 2


def closed_form_ext(layout: PPLayout, m: PPCoordinate, n: PPCoordinate) -> int:
    """``dim Ext^1(M, N) = dim Hom(tau^-1 N, M)``."""
    return closed_form_hom(layout, n.shifted(1), m)


def closed_form_int(layout: PPLayout, c1: PPCoordinate, c2: PPCoordinate) -> int:
    """Intersection number of the two preprojective tagged edges."""
    if c1 == c2:
        return 0
    return closed_form_ext(layout, c1, c2) + closed_form_ext(layout, c2, c1)


def intersection_case(layout: PPLayout, c1: PPCoordinate, c2: PPCoordinate) -> str:
    """Label a pair by the rows it lives on: ``lower-middle`` when the
    lower-level object is on a middle row, ``upper-middle`` when only the
    higher one is, and ``forks-*`` when both sit on fork rows."""
    if c1 == c2:
        return "identical"
    if c1.level == c2.level:
        return "equal-level"
    lo, hi = (c1, c2) if c1.level < c2.level else (c2, c1)
    r_lo, r_hi = classify_region(layout, lo), classify_region(layout, hi)
    if r_lo.kind == "TypeA":
        return "lower-middle"
    if r_hi.kind == "TypeA":
        return "upper-middle"
    return "forks-same-side" if r_lo.kind == r_hi.kind else "forks-opposite-sides"
