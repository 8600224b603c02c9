"""Tagged arcs and triangulations of a twice-punctured n-gon.

Arcs are stored combinatorially.  A triangulation additionally carries a
*frame*: the cyclic order of boundary marked points with the two punctures
slotted into boundary gaps, e.g. ``(0, 'P0', 1, 2, 3, 'P1', 4, 5)``.  In a
frame every triangulation arc is a straight chord between slots, which
turns crossing tests and counterclockwise neighbour queries into
comparisons of positions on a circle.
"""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .quiver import Quiver, classify_type, is_acyclic

PUNCTURES = ("P0", "P1")

Slot = Union[int, str]


class SurfaceError(ValueError):
    pass


class BadPositions(SurfaceError):
    pass


class TooSmall(SurfaceError):
    pass


class InvalidTriangulation(SurfaceError):
    pass


class BothEndsAtPunctures(SurfaceError):
    pass


# ---------------------------------------------------------------- arcs


@dataclass(frozen=True)
class PunctureRay:
    """Arc from a puncture (its first end) to a marked point."""

    puncture: str
    marked: int
    tag: int
    n: int

    def __post_init__(self):
        if self.puncture not in PUNCTURES:
            raise SurfaceError(f"unknown puncture {self.puncture!r}")
        if self.tag not in (0, 1):
            raise SurfaceError("a puncture end carries tag 0 or 1")
        object.__setattr__(self, "marked", self.marked % self.n)


@dataclass(frozen=True)
class Chord:
    """Arc between marked points ``a -> b``.

    ``left`` lists the marked points and punctures on the left of ``a -> b``.
    For ``a != b`` the marked part is forced (``b+1 .. a-1``) and is
    recomputed; for loops (``a == b``) it tells the two sides apart.
    """

    a: int
    b: int
    left: frozenset
    n: int

    def __post_init__(self):
        a, b = self.a % self.n, self.b % self.n
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        left = frozenset(self.left)
        punct = {x for x in left if isinstance(x, str)}
        if not punct <= set(PUNCTURES):
            raise SurfaceError(f"unknown punctures in {sorted(map(str, left))}")
        if a != b:
            marked = set(_ccw_open(b, a, self.n))
        else:
            marked = {x % self.n for x in left if isinstance(x, int)} - {a}
            if marked and marked != set(range(self.n)) - {a}:
                raise SurfaceError("a loop separates all other marked points from none")
        object.__setattr__(self, "left", frozenset(marked | punct))

    @property
    def left_punctures(self) -> frozenset:
        return frozenset(x for x in self.left if isinstance(x, str))

    @property
    def left_marked(self) -> frozenset:
        return frozenset(x for x in self.left if isinstance(x, int))


@dataclass(frozen=True)
class DigonCutter:
    """Arc ``a -> b`` with a single puncture and no marked point on its left.

    ``a == b + 1`` cuts out a once-punctured digon; ``a == b`` is the loop
    cutting out a once-punctured monogon (the completion of a puncture ray).
    """

    a: int
    b: int
    puncture: str
    n: int

    def __post_init__(self):
        a, b = self.a % self.n, self.b % self.n
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if self.puncture not in PUNCTURES:
            raise SurfaceError(f"unknown puncture {self.puncture!r}")
        if a != b and a != (b + 1) % self.n:
            raise SurfaceError(f"digon cutter needs adjacent endpoints, got {a}, {b}")

    @property
    def is_monogon(self) -> bool:
        return self.a == self.b

    def as_chord(self) -> Chord:
        return Chord(self.a, self.b, frozenset({self.puncture}), self.n)


@dataclass(frozen=True)
class PuncturePair:
    """Arc with both ends in punctures (never preprojective)."""

    tag0: int
    tag1: int
    n: int


TaggedArc = Union[PunctureRay, Chord, DigonCutter, PuncturePair]


def _ccw_open(x: int, y: int, n: int) -> list[int]:
    """Marked points strictly between ``x`` and ``y`` going counterclockwise."""
    out = []
    k = (x + 1) % n
    while k != y % n:
        out.append(k)
        k = (k + 1) % n
    return out


def normalize(arc: TaggedArc) -> TaggedArc:
    """Rewrite a chord with a lone puncture on one side as a DigonCutter."""
    if isinstance(arc, Chord):
        if arc.left == {p for p in arc.left_punctures} and len(arc.left) == 1:
            (p,) = arc.left
            if arc.a == arc.b or arc.a == (arc.b + 1) % arc.n:
                return DigonCutter(arc.a, arc.b, p, arc.n)
        right = _right_side(arc)
        if len(right) == 1 and isinstance(next(iter(right)), str):
            (p,) = right
            if arc.b == arc.a or arc.b == (arc.a + 1) % arc.n:
                return DigonCutter(arc.b, arc.a, p, arc.n)
    return arc


def _right_side(c: Chord) -> frozenset:
    everything = set(range(c.n)) | set(PUNCTURES)
    return frozenset(everything - set(c.left) - {c.a, c.b})


def as_chord(arc: TaggedArc) -> Chord | None:
    if isinstance(arc, Chord):
        return arc
    if isinstance(arc, DigonCutter):
        return arc.as_chord()
    return None


def endpoint_kinds(arc: TaggedArc) -> tuple[str, str]:
    if isinstance(arc, PunctureRay):
        return ("P", "M")
    if isinstance(arc, PuncturePair):
        return ("P", "P")
    return ("M", "M")


def endpoints(arc: TaggedArc) -> frozenset:
    """Marked points and punctures the arc ends at."""
    if isinstance(arc, PunctureRay):
        return frozenset({arc.puncture, arc.marked})
    if isinstance(arc, PuncturePair):
        return frozenset(PUNCTURES)
    return frozenset({arc.a, arc.b})


def untagged(arc: TaggedArc):
    """Hashable key identifying the arc up to tags and orientation."""
    if isinstance(arc, PunctureRay):
        return ("ray", arc.puncture, arc.marked)
    if isinstance(arc, PuncturePair):
        return ("pp",)
    c = as_chord(arc)
    forward = (c.a, c.b, c.left)
    backward = (c.b, c.a, _right_side(c))
    return ("chord", frozenset({forward, backward}))


def same_arc(x: TaggedArc, y: TaggedArc) -> bool:
    if untagged(x) != untagged(y):
        return False
    return _tags(x) == _tags(y)


def _tags(arc):
    if isinstance(arc, PunctureRay):
        return {arc.puncture: arc.tag}
    if isinstance(arc, PuncturePair):
        return {"P0": arc.tag0, "P1": arc.tag1}
    return {}


def is_admissible(arc: TaggedArc) -> bool:
    """No contractible, boundary-parallel or once-punctured-monogon arcs."""
    c = as_chord(arc)
    if c is None:
        return True
    n = c.n
    if c.a != c.b:
        edges_left = (c.a - c.b) % n
        edges_right = n - edges_left
    elif c.left_marked:
        edges_left, edges_right = n, 0
    else:
        edges_left, edges_right = 0, n
    left_p = len(c.left_punctures)
    right_p = 2 - left_p
    return edges_left + left_p >= 2 and edges_right + right_p >= 2


# ------------------------------------------------------- arc operations


def tagged_rotation(arc: TaggedArc, direction: str = "forward") -> TaggedArc:
    """Tagged rotation: marked ends move one step counterclockwise
    (clockwise for ``inverse``) and puncture tags flip."""
    if direction not in ("forward", "inverse"):
        raise ValueError("direction is 'forward' or 'inverse'")
    s = 1 if direction == "forward" else -1
    if isinstance(arc, PunctureRay):
        return PunctureRay(arc.puncture, arc.marked + s, 1 - arc.tag, arc.n)
    if isinstance(arc, PuncturePair):
        return PuncturePair(1 - arc.tag0, 1 - arc.tag1, arc.n)
    if isinstance(arc, DigonCutter):
        return DigonCutter(arc.a + s, arc.b + s, arc.puncture, arc.n)
    left = {(x + s) % arc.n if isinstance(x, int) else x for x in arc.left}
    return Chord(arc.a + s, arc.b + s, frozenset(left), arc.n)


def rotate(arc: TaggedArc, k: int) -> TaggedArc:
    """``rho^k``; negative ``k`` applies the inverse."""
    direction = "forward" if k >= 0 else "inverse"
    for _ in range(abs(k)):
        arc = tagged_rotation(arc, direction)
    return arc


def completion(arc: TaggedArc) -> TaggedArc:
    """Monogon loop around the ray's puncture, puncture on its left."""
    if isinstance(arc, PunctureRay):
        return DigonCutter(arc.marked, arc.marked, arc.puncture, arc.n)
    return arc


def shift_start(arc: Chord | DigonCutter) -> TaggedArc:
    """``gamma[1]``: first end moves counterclockwise to the next marked point."""
    c = as_chord(arc)
    left = set(c.left)
    if c.a != c.b:
        left.add(c.a)
    return normalize(Chord(c.a + 1, c.b, frozenset(left), c.n))


def shift_end(arc: Chord | DigonCutter) -> TaggedArc:
    """``[1]gamma``: last end moves counterclockwise to the next marked point."""
    c = as_chord(arc)
    left = set(c.left) - {(c.b + 1) % c.n}
    if c.a == c.b and c.left_marked:
        left = set(c.left) - {(c.b + 1) % c.n}
    return normalize(Chord(c.a, c.b + 1, frozenset(left), c.n))


def elementary_moves(arc: TaggedArc) -> list[TaggedArc]:
    if isinstance(arc, PuncturePair):
        raise BothEndsAtPunctures("no elementary moves for puncture-to-puncture arcs")
    if isinstance(arc, PunctureRay):
        return [shift_start(completion(arc))]
    arc = normalize(arc)
    if isinstance(arc, DigonCutter) and not arc.is_monogon:
        target = arc.a  # [1]gamma is the monogon loop at a
        return [
            shift_start(arc),
            PunctureRay(arc.puncture, target, 0, arc.n),
            PunctureRay(arc.puncture, target, 1, arc.n),
        ]
    return [shift_start(arc), shift_end(arc)]


# ------------------------------------------------------------- frames


def default_frame(n: int, gaps: tuple[int, int]) -> tuple:
    """Frame with ``P0`` after marked point ``gaps[0]`` and ``P1`` after ``gaps[1]``."""
    slots: list[Slot] = []
    for m in range(n):
        slots.append(m)
        for p, g in zip(PUNCTURES, gaps):
            if g % n == m:
                slots.append(p)
    return tuple(slots)


def all_frames(n: int) -> list[tuple]:
    frames = []
    for g0 in range(n):
        for g1 in range(n):
            frames.append(default_frame(n, (g0, g1)))
            if g0 == g1:
                # P1 before P0 inside the same gap
                slots = list(default_frame(n, (g0, g1)))
                i = slots.index("P0")
                slots[i], slots[i + 1] = slots[i + 1], slots[i]
                frames.append(tuple(slots))
    return frames


@dataclass(frozen=True)
class _End:
    slot: Slot
    key: float  # counterclockwise angular order at the slot


class Frame:
    """Positions on the augmented circle."""

    def __init__(self, slots: tuple):
        self.slots = tuple(slots)
        self.total = len(self.slots)
        self.pos = {s: i for i, s in enumerate(self.slots)}
        self.n = self.total - 2

    def dist(self, x: Slot, y: Slot) -> int:
        return (self.pos[y] - self.pos[x]) % self.total

    def punctures_between(self, x: Slot, y: Slot) -> set[str]:
        """Punctures strictly between ``x`` and ``y`` counterclockwise."""
        out = set()
        k = (self.pos[x] + 1) % self.total
        while k != self.pos[y]:
            if isinstance(self.slots[k], str):
                out.add(self.slots[k])
            k = (k + 1) % self.total
        return out

    def ends(self, arc: TaggedArc) -> tuple[_End, _End] | None:
        """Endpoints as blown-up circle points, or ``None`` if the arc is not
        straight in this frame."""
        if isinstance(arc, PunctureRay):
            p, m = arc.puncture, arc.marked
            return _End(p, self.dist(p, m)), _End(m, self.dist(m, p))
        if isinstance(arc, PuncturePair):
            return _End("P0", self.dist("P0", "P1")), _End("P1", self.dist("P1", "P0"))
        c = as_chord(arc)
        if c.a != c.b:
            if self.punctures_between(c.b, c.a) != set(c.left_punctures):
                return None
            return _End(c.a, self.dist(c.a, c.b)), _End(c.b, self.dist(c.b, c.a))
        # loop: encloses a run of punctures adjacent to the base point
        run = c.left_punctures if not c.left_marked else frozenset(PUNCTURES) - c.left_punctures
        if not run:
            return None
        ds = sorted(self.dist(c.a, p) for p in run)
        if ds != list(range(ds[0], ds[0] + len(ds))):
            return None
        if ds[0] != 1 and ds[-1] != self.total - 1:
            return None
        return _End(c.a, ds[0] - 0.5), _End(c.a, ds[-1] + 0.5)

    def coordinate(self, e: _End) -> tuple:
        # within a slot, counterclockwise angle runs against boundary order
        return (self.pos[e.slot], -e.key)

    def crossing_coordinates(self, arc: TaggedArc) -> list[tuple] | None:
        """Two circle points whose chord crosses what ``arc`` crosses.

        A loop is replaced by the chord from its base to a point just past
        the punctures it encloses; its two ends at the base only matter
        for the neighbour order."""
        ends = self.ends(arc)
        if ends is None:
            return None
        c = as_chord(arc)
        if c is None or c.a != c.b:
            return [self.coordinate(e) for e in ends]
        lo, hi = ends[0].key, ends[1].key
        key = hi if lo == 0.5 else lo
        virtual = ((self.pos[c.a] + key) % self.total, 0)
        return [(self.pos[c.a], -key), virtual]


def _strictly_between(x, y, z) -> bool:
    """Is ``y`` strictly inside the cyclic interval from ``x`` to ``z``?"""
    if x < z:
        return x < y < z
    return y > x or y < z


def arcs_cross(frame: Frame, x: TaggedArc, y: TaggedArc) -> bool:
    """Crossing in the frame: interleaving ends or a punctured intersection."""
    ex, ey = frame.ends(x), frame.ends(y)
    if ex is None or ey is None:
        raise InvalidTriangulation("arc is not straight in the triangulation frame")
    cx = frame.crossing_coordinates(x)
    cy = frame.crossing_coordinates(y)
    if len(set(cx + cy)) == 4:
        inside = sum(_strictly_between(cx[0], c, cx[1]) for c in cy)
        if inside == 1:
            return True
    return punctured_intersections(x, y) > 0


def punctured_intersections(x: TaggedArc, y: TaggedArc) -> int:
    tx, ty = _tags(x), _tags(y)
    shared = [p for p in tx if p in ty]
    differ = [p for p in shared if tx[p] != ty[p]]
    if not differ:
        return 0
    if untagged(x) == untagged(y):
        # homotopic as untagged arcs: both ends must be punctures with different tags
        return len(differ) if len(differ) == 2 else 0
    return len(differ)


# ------------------------------------------------------- triangulations


@dataclass(frozen=True)
class MarkedSurface:
    n: int
    punctures: tuple = PUNCTURES

    def __post_init__(self):
        if self.n < 1:
            raise TooSmall("need at least one marked point")


@dataclass(frozen=True)
class Triangulation:
    surface: MarkedSurface
    arcs: tuple
    frame: tuple = field(default=())

    @property
    def n(self) -> int:
        return self.surface.n

    def arc(self, i: int) -> TaggedArc:
        return self.arcs[i - 1]

    def frame_obj(self) -> Frame:
        return Frame(self.frame)

    def ids(self) -> range:
        return range(1, len(self.arcs) + 1)


def _sweep_key(frame: Frame, arc: TaggedArc):
    ends = frame.ends(arc)
    if ends is None:
        return (1,)  # not straight: sorted last, validation reports it
    coords = sorted(frame.coordinate(e) for e in ends)
    tag = sorted(_tags(arc).items())
    return (0, *coords, tuple(tag))


def make_triangulation(n: int, arcs: Iterable[TaggedArc], frame: tuple | None = None) -> Triangulation:
    """Order arcs by a boundary sweep of the frame and assign ids ``1..``."""
    arcs = [normalize(a) for a in arcs]
    if frame is None:
        frame = infer_frame(n, arcs)
    f = Frame(frame)
    arcs.sort(key=lambda a: _sweep_key(f, a))
    return Triangulation(MarkedSurface(n), tuple(arcs), tuple(frame))


def infer_frame(n: int, arcs: Iterable[TaggedArc]) -> tuple:
    arcs = list(arcs)
    pinned = {}
    for a in arcs:
        if isinstance(a, DigonCutter) and not a.is_monogon:
            pinned[a.puncture] = a.b
    for slots in all_frames(n):
        f = Frame(slots)
        if any(f.pos[p] != (f.pos[g] + 1) % f.total and f.dist(g, p) > 2 for p, g in pinned.items()):
            continue
        if all(f.ends(a) is not None for a in arcs):
            return slots
    raise InvalidTriangulation("arcs cannot be drawn straight in any frame")


def canonical_triangulation(
    n: int,
    digon_positions: tuple[int, int] = (0, None),
    puncture_arc_styles: tuple[str, str] = ("shared", "shared"),
    fan_apex: int | None = None,
) -> Triangulation:
    """Two digon cutters, two tagged rays inside each digon and a fan.

    ``digon_positions[k]`` is the boundary gap (between marked points ``g``
    and ``g+1``) cut off around puncture ``Pk``.  A ``shared`` style puts
    both rays at marked point ``g`` with opposite tags, ``neighbor`` sends
    plain rays to ``g`` and ``g+1``.

    The remaining polygon is fanned from ``fan_apex``.  A fan whose triangle
    has three arc sides gives an oriented 3-cycle, so an explicit apex is
    rejected in that case; without one the first acyclic apex is used, or a
    zigzag strip between the two cutters when no fan is acyclic.
    """
    g0, g1 = digon_positions
    if g1 is None:
        g1 = n // 2
    if n == 2:
        return _digon_case(puncture_arc_styles)
    if n < 3:
        raise TooSmall("canonical triangulations need n >= 3")
    g0, g1 = g0 % n, g1 % n
    if g0 == g1:
        raise BadPositions("digons must sit on different boundary segments")
    frame = default_frame(n, (g0, g1))
    arcs: list[TaggedArc] = []
    for p, g, style in zip(PUNCTURES, (g0, g1), puncture_arc_styles):
        arcs.append(DigonCutter(g + 1, g, p, n))
        if style == "shared":
            arcs += [PunctureRay(p, g, 0, n), PunctureRay(p, g, 1, n)]
        elif style == "neighbor":
            arcs += [PunctureRay(p, g, 0, n), PunctureRay(p, g + 1, 0, n)]
        else:
            raise BadPositions(f"unknown puncture arc style {style!r}")
    f = Frame(frame)
    if fan_apex is not None:
        t = make_triangulation(n, arcs + _fan_chords(f, fan_apex % n), frame)
        if not is_acyclic(quiver_of_triangulation(t)):
            raise BadPositions(
                f"a fan from {fan_apex % n} leaves a triangle bounded by three arcs"
            )
        return t
    for apex in range(n):
        t = make_triangulation(n, arcs + _fan_chords(f, apex), frame)
        if is_acyclic(quiver_of_triangulation(t)):
            return t
    return make_triangulation(n, arcs + _strip_chords(f, g0, g1), frame)


def _chord(f: Frame, a: int, b: int) -> Chord:
    return Chord(a, b, frozenset(f.punctures_between(b, a)), f.n)


def _fan_chords(f: Frame, apex: int) -> list[TaggedArc]:
    n = f.n
    return [_chord(f, apex, k) for k in range(n) if (k - apex) % n not in (0, 1, n - 1)]


def _strip_chords(f: Frame, g0: int, g1: int) -> list[TaggedArc]:
    """Zigzag between the two cutters: every triangle has one boundary edge."""
    n = f.n
    x, y = (g0 + 1) % n, g0
    chords = []
    while x != g1:
        x = (x + 1) % n
        if (x - y) % n not in (1, n - 1):
            chords.append(_chord(f, x, y))
    while y != (g1 + 1) % n:
        y = (y - 1) % n
        if (x - y) % n not in (1, n - 1) and y != (g1 + 1) % n:
            chords.append(_chord(f, x, y))
    return chords


def _digon_case(styles) -> Triangulation:
    n = 2
    frame = default_frame(n, (0, 1))
    arcs: list[TaggedArc] = [DigonCutter(1, 0, "P0", n)]
    for p, g, style in zip(PUNCTURES, (0, 1), styles):
        if style == "shared":
            arcs += [PunctureRay(p, g, 0, n), PunctureRay(p, g, 1, n)]
        else:
            arcs += [PunctureRay(p, g, 0, n), PunctureRay(p, g + 1, 0, n)]
    return make_triangulation(n, arcs, frame)


def canonical_configurations(n: int) -> Iterator[Triangulation]:
    """Every triangulation :func:`canonical_triangulation` can build for ``n``."""
    styles = list(itertools.product(("shared", "neighbor"), repeat=2))
    if n == 2:
        for st in styles:
            yield canonical_triangulation(2, puncture_arc_styles=st)
        return
    for g0, g1 in itertools.permutations(range(n), 2):
        for st in styles:
            for apex in [None, *range(n)]:
                try:
                    yield canonical_triangulation(n, (g0, g1), st, apex)
                except BadPositions:
                    continue


def rotate_triangulation(t: Triangulation, k: int = 1) -> Triangulation:
    """``rho^k`` of every arc; the frame rotates with the marked points."""
    n = t.n
    slots = []
    for s in t.frame:
        slots.append((s + k) % n if isinstance(s, int) else s)
    start = slots.index(0)
    frame = tuple(slots[start:] + slots[:start])
    arcs = tuple(rotate(a, k) for a in t.arcs)
    return Triangulation(t.surface, arcs, frame)


# ---------------------------------------------------------- the quiver


def _neighbour_arrows(t: Triangulation) -> list[tuple[int, int]]:
    f = t.frame_obj()
    at: dict[Slot, dict[float, set[int]]] = defaultdict(lambda: defaultdict(set))
    for i, arc in zip(t.ids(), t.arcs):
        ends = f.ends(arc)
        if ends is None:
            raise InvalidTriangulation(f"arc {i} is not straight in the frame")
        for e in ends:
            at[e.slot][e.key].add(i)
    arrows = []
    for slot, groups in at.items():
        keys = sorted(groups)
        pairs = list(zip(keys, keys[1:]))
        if isinstance(slot, str) and len(keys) > 1:
            pairs.append((keys[-1], keys[0]))  # punctures are interior points
        for k0, k1 in pairs:
            for i in groups[k0]:
                for j in groups[k1]:
                    if i != j:
                        arrows.append((i, j))
    return arrows


def quiver_of_triangulation(t: Triangulation) -> Quiver:
    """Arrow ``i -> j`` when ``j`` is the direct counterclockwise neighbour
    of ``i`` at a shared endpoint; 2-cycles are then cancelled."""
    counts = Counter(_neighbour_arrows(t))
    for (s, r) in list(counts):
        if s < r and (r, s) in counts:
            m = min(counts[(s, r)], counts[(r, s)])
            counts[(s, r)] -= m
            counts[(r, s)] -= m
    arrows = []
    for arrow, mult in sorted(counts.items()):
        arrows += [arrow] * mult
    return Quiver(len(t.arcs), tuple(arrows))


# ----------------------------------------------------------- validation


def candidate_arcs(frame: tuple) -> list[TaggedArc]:
    """Every admissible tagged arc that is straight in ``frame``."""
    f = Frame(frame)
    n = f.n
    out: list[TaggedArc] = []
    for p in PUNCTURES:
        for m in range(n):
            out += [PunctureRay(p, m, 0, n), PunctureRay(p, m, 1, n)]
    for t0, t1 in itertools.product((0, 1), repeat=2):
        out.append(PuncturePair(t0, t1, n))
    seen = set()
    for a in range(n):
        for b in range(n):
            if a == b:
                cands = [Chord(a, a, frozenset(PUNCTURES), n)]
            else:
                cands = [Chord(a, b, frozenset(f.punctures_between(b, a)), n)]
            for c in cands:
                c = normalize(c)
                if not is_admissible(c) or f.ends(c) is None:
                    continue
                key = untagged(c)
                if key not in seen:
                    seen.add(key)
                    out.append(c)
    return out


def _encloses_twice_punctured_digon(arc: TaggedArc) -> bool:
    c = as_chord(arc)
    if c is None or c.a == c.b:
        return False
    n = c.n
    for edges, punct in (((c.a - c.b) % n, c.left_punctures), ((c.b - c.a) % n, _right_punctures(c))):
        if edges == 1 and len(punct) == 2:
            return True
    return False


def _right_punctures(c: Chord) -> frozenset:
    return frozenset(PUNCTURES) - c.left_punctures


def _cuts_once_punctured_digon(arc: TaggedArc) -> str | None:
    arc = normalize(arc)
    if isinstance(arc, DigonCutter) and not arc.is_monogon:
        return arc.puncture
    return None


def validate_triangulation(t: Triangulation) -> list[str]:
    """List of violations; empty for a valid acyclic triangulation."""
    problems: list[str] = []
    n = t.n
    if len(t.arcs) != n + 3:
        problems.append(f"arc count {len(t.arcs)} != n+3 = {n + 3}")
    f = t.frame_obj()
    straight = True
    for i, a in zip(t.ids(), t.arcs):
        if not is_admissible(a):
            problems.append(f"arc {i} is not admissible")
        if f.ends(a) is None:
            problems.append(f"arc {i} is not straight in the frame")
            straight = False
    if not straight:
        return problems
    for (i, x), (j, y) in itertools.combinations(zip(t.ids(), t.arcs), 2):
        if untagged(x) == untagged(y) and _tags(x) == _tags(y):
            problems.append(f"arcs {i} and {j} coincide")
        elif arcs_cross(f, x, y):
            problems.append(f"arcs {i} and {j} cross")
    for c in candidate_arcs(t.frame):
        if any(same_arc(c, a) for a in t.arcs):
            continue
        if not any(arcs_cross(f, c, a) for a in t.arcs):
            problems.append(f"not maximal: {describe_arc(c)} can be added")
            break
    problems += [msg for ok, msg in _structure_checks(t) if not ok]
    q = quiver_of_triangulation(t)
    if not is_acyclic(q):
        problems.append("quiver is not acyclic")
    return problems


def _structure_checks(t: Triangulation) -> list[tuple[bool, str]]:
    n = t.n
    pp = [i for i, a in zip(t.ids(), t.arcs) if isinstance(a, PuncturePair)]
    checks = [(not pp, f"arcs {pp} join the two punctures")]
    if n >= 3:
        bad = [i for i, a in zip(t.ids(), t.arcs) if _encloses_twice_punctured_digon(a)]
        checks.append((not bad, f"arcs {bad} cut out a twice-punctured digon"))
    else:
        checks.append((True, ""))
    for p in PUNCTURES:
        ends = [a.marked for a in t.arcs if isinstance(a, PunctureRay) and a.puncture == p]
        ends += [None for a in t.arcs if isinstance(a, PuncturePair)]
        ok = len(ends) == 2 and None not in ends and (
            ends[0] == ends[1] or (ends[0] - ends[1]) % n in (1, n - 1)
        )
        checks.append((ok, f"puncture {p} has arc ends {ends}, not a neighbouring or shared pair"))
    return checks


@dataclass(frozen=True)
class AuditReport:
    no_puncture_pair: bool
    no_twice_punctured_digon: bool
    two_rays_per_puncture: bool
    digon_cutters: tuple[int, ...]
    polygon_arcs: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.no_puncture_pair and self.no_twice_punctured_digon and self.two_rays_per_puncture


def audit_structure(t: Triangulation) -> AuditReport:
    checks = _structure_checks(t)
    cutters = tuple(i for i, a in zip(t.ids(), t.arcs) if _cuts_once_punctured_digon(a))
    rays = {i for i, a in zip(t.ids(), t.arcs) if isinstance(a, PunctureRay)}
    polygon = tuple(i for i in t.ids() if i not in rays and i not in cutters)
    if len(cutters) != 2 or len({t.arc(i).puncture for i in cutters}) != 2:
        cutters, polygon = (), ()
    return AuditReport(
        no_puncture_pair=checks[0][0],
        no_twice_punctured_digon=checks[1][0],
        two_rays_per_puncture=checks[2][0] and checks[3][0],
        digon_cutters=cutters,
        polygon_arcs=polygon,
    )


def enumerate_triangulations(n: int, frame: tuple | None = None) -> list[Triangulation]:
    """Triangulations whose arcs are all straight in ``frame`` (every frame
    when ``None``), by brute force over maximal compatible sets of candidate
    arcs.  Triangulations needing two arcs between the same endpoints are
    not straight in any frame; :mod:`dtilde.gluings` enumerates everything."""
    frames = all_frames(n) if frame is None else [frame]
    found = []
    for fr in frames:
        f = Frame(fr)
        cands = candidate_arcs(fr)
        m = len(cands)
        compat = [[not arcs_cross(f, cands[i], cands[j]) for j in range(m)] for i in range(m)]
        for clique in _maximal_cliques(m, compat):
            if len(clique) != n + 3:
                continue  # maximal among straight arcs only
            arcs = [cands[i] for i in clique]
            found.append(Triangulation(MarkedSurface(n), tuple(sorted(arcs, key=lambda a: _sweep_key(f, a))), fr))
    return found


def _maximal_cliques(m: int, compat) -> list[list[int]]:
    out = []

    def grow(clique, cands, excluded):
        if not cands and not excluded:
            out.append(clique)
            return
        for v in list(cands):
            grow(
                clique + [v],
                [w for w in cands if w != v and compat[v][w]],
                [w for w in excluded if compat[v][w]],
            )
            cands = [w for w in cands if w != v]
            excluded = excluded + [v]

    grow([], list(range(m)), [])
    return out


# ------------------------------------------------------------- file I/O


def describe_arc(arc: TaggedArc) -> str:
    if isinstance(arc, PunctureRay):
        return f"ray {arc.puncture} {arc.marked} {arc.tag}"
    if isinstance(arc, PuncturePair):
        return f"pair {arc.tag0} {arc.tag1}"
    if isinstance(arc, DigonCutter):
        return f"digon {arc.a} {arc.b} {arc.puncture}"
    items = sorted(arc.left, key=lambda x: (isinstance(x, str), str(x) if isinstance(x, str) else x))
    return f"chord {arc.a} {arc.b} left=" + ",".join(str(x) for x in items)


def write_triangulation(t: Triangulation) -> str:
    lines = [f"surface n={t.n} punctures=2"]
    lines.append("frame " + ",".join(str(s) for s in t.frame))
    for i, a in zip(t.ids(), t.arcs):
        lines.append(f"{describe_arc(a)}  # {i}")
    return "\n".join(lines) + "\n"


def _slot(tok: str) -> Slot:
    return tok if tok.startswith("P") else int(tok)


def parse_triangulation(text: str) -> Triangulation:
    n = None
    frame = None
    arcs: list[TaggedArc] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        try:
            if head == "surface":
                opts = dict(w.split("=", 1) for w in words[1:])
                n = int(opts["n"])
                if int(opts.get("punctures", 2)) != 2:
                    raise SurfaceError("only twice-punctured surfaces are supported")
            elif head == "frame":
                frame = tuple(_slot(s) for s in words[1].split(","))
            elif n is None:
                raise SurfaceError("missing surface header")
            elif head == "ray":
                arcs.append(PunctureRay(words[1], int(words[2]), int(words[3]), n))
            elif head == "digon":
                arcs.append(DigonCutter(int(words[1]), int(words[2]), words[3], n))
            elif head == "pair":
                arcs.append(PuncturePair(int(words[1]), int(words[2]), n))
            elif head == "chord":
                left = frozenset()
                if len(words) > 3:
                    spec = words[3].split("=", 1)[1]
                    left = frozenset(_slot(s) for s in spec.split(",") if s)
                arcs.append(Chord(int(words[1]), int(words[2]), left, n))
            else:
                raise SurfaceError(f"unknown line type {head!r}")
        except (KeyError, IndexError, ValueError) as exc:
            raise SurfaceError(f"bad triangulation line {raw!r}: {exc}") from exc
    if n is None:
        raise SurfaceError("missing surface header")
    return make_triangulation(n, arcs, frame)


def triangulation_type(t: Triangulation):
    return classify_type(quiver_of_triangulation(t))
