"""The two printed Hom windows, and the scan that locates their anchors.

A fixture is a grid with one line per row of the affine D diagram.  Cells
hold ``dim Hom(tau^-1 M, Y)`` for the object ``Y`` at that position, ``M``
marks the anchor and ``.`` marks cells off the mesh lattice.  The anchor's
coordinates are not recorded, so :func:`scan_anchor` searches for them.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterator

from .knitting import hom_dim, knit
from .ppcat import PPCoordinate, PPLayout, closed_form_hom, layout_for_triangulation
from .surface import canonical_triangulation

FIGURES = {"fig8": 11, "fig9": 8}  # name -> affine D rank


class CorruptFixture(ValueError):
    pass


@dataclass(frozen=True)
class FixtureGrid:
    name: str
    matrix: tuple[tuple[int | None, ...], ...]
    anchor: tuple[int, int]  # (row, column), zero based
    type_rank: int

    @property
    def n(self) -> int:
        """Marked points of the polygon whose quiver has this type."""
        return self.type_rank - 2

    def row_values(self, r: int) -> list[int | str]:
        """Row ``r`` (zero based) as printed, the anchor shown as ``"M"``."""
        out = []
        for k, v in enumerate(self.matrix[r]):
            if (r, k) == self.anchor:
                out.append("M")
            elif v is not None:
                out.append(v)
        return out

    def cells(self) -> Iterator[tuple[int, int, int]]:
        """``(row, column, value)`` for every printed integer."""
        for r, line in enumerate(self.matrix):
            for k, v in enumerate(line):
                if v is not None and (r, k) != self.anchor:
                    yield r, k, v


def parse_fixture(name: str, text: str, type_rank: int) -> FixtureGrid:
    rows = []
    anchor = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        cells = []
        for k, tok in enumerate(line.split()):
            if tok == ".":
                cells.append(None)
            elif tok == "M":
                if anchor is not None:
                    raise CorruptFixture(f"{name}: more than one anchor")
                anchor = (len(rows), k)
                cells.append(0)
            else:
                try:
                    cells.append(int(tok))
                except ValueError:
                    raise CorruptFixture(f"{name}: bad cell {tok!r}") from None
        rows.append(tuple(cells))
    if anchor is None:
        raise CorruptFixture(f"{name}: no anchor cell")
    if len(rows) != type_rank + 1:
        raise CorruptFixture(f"{name}: {len(rows)} rows, expected {type_rank + 1}")
    width = max(len(r) for r in rows)
    rows = [r + (None,) * (width - len(r)) for r in rows]
    parity = (figure_depth(anchor[0], type_rank) + anchor[1]) % 2
    for r, line in enumerate(rows):
        for k, v in enumerate(line):
            if v is not None and (figure_depth(r, type_rank) + k) % 2 != parity:
                raise CorruptFixture(f"{name}: cell ({r},{k}) is off the lattice")
    return FixtureGrid(name, tuple(rows), anchor, type_rank)


def figure_depth(r: int, d: int) -> int:
    """Depth of zero-based grid row ``r``; the fork pairs share a depth."""
    return min(max(r + 1, 2), d)


def load_figure_fixtures() -> list[FixtureGrid]:
    out = []
    for name, rank in FIGURES.items():
        text = resources.files("dtilde").joinpath("data").joinpath(f"{name}.txt").read_text()
        out.append(parse_fixture(name, text, rank))
    return out


def load_fixture(name: str) -> FixtureGrid:
    for g in load_figure_fixtures():
        if g.name == name:
            return g
    raise KeyError(name)


# ------------------------------------------------------------------ scan


def row_maps(d: int) -> list[dict[int, int]]:
    """Symmetries of the affine D_d diagram acting on canonical rows."""
    ident = {r: r for r in range(1, d + 2)}
    top = {**ident, 1: 2, 2: 1}
    bottom = {**ident, d: d + 1, d + 1: d}
    flip = {r: (d + 2 - r if 3 <= r <= d - 1 else {1: d, 2: d + 1, d: 1, d + 1: 2}[r]) for r in ident}
    out = []
    for base in (ident, flip):
        for extra in (ident, top, bottom):
            for extra2 in (ident, bottom):
                m = {r: base[extra2[extra[r]]] for r in ident}
                if m not in out:
                    out.append(m)
    return out


@dataclass(frozen=True)
class AnchorMatch:
    anchor: PPCoordinate
    row_map: dict
    layout: PPLayout

    def place(self, grid: FixtureGrid, r: int, k: int) -> PPCoordinate | None:
        """Object at grid cell ``(r, k)``, ``None`` below level 1."""
        lay = self.layout
        v = lay.vertex_of_row(self.row_map[r + 1])
        col = lay.column(self.anchor) + k - grid.anchor[1]
        twice = col - lay.heights[v]
        if twice % 2:
            raise ValueError("cell off the lattice for this anchor")
        return PPCoordinate(twice // 2, v) if twice >= 2 else None


def hom_engine(layout: PPLayout, engine: str) -> Callable[[PPCoordinate, PPCoordinate], int]:
    if engine == "closed-form":
        return lambda x, y: closed_form_hom(layout, x, y)
    if engine == "knitting":
        comp = knit(layout.quiver, layout.max_level)
        return lambda x, y: hom_dim(comp, x, y)
    raise ValueError(f"unknown engine {engine!r}")


def window_mismatches(grid: FixtureGrid, match: AnchorMatch, hom) -> list[tuple[int, int, int, int]]:
    """``(row, column, printed, computed)`` for every disagreeing cell."""
    source = match.anchor.shifted(1)
    bad = []
    for r, k, v in grid.cells():
        y = match.place(grid, r, k)
        got = 0 if y is None else hom(source, y)
        if got != v:
            bad.append((r, k, v, got))
    return bad


def anchor_candidates(grid: FixtureGrid, layout: PPLayout, levels=(1, 2, 3)) -> Iterator[AnchorMatch]:
    for m in row_maps(layout.d):
        v = layout.vertex_of_row(m[grid.anchor[0] + 1])
        for level in levels:
            yield AnchorMatch(PPCoordinate(level, v), m, layout)


def scan_anchor(grid: FixtureGrid, engine: str = "knitting", levels=(1, 2, 3),
                triangulation=None) -> AnchorMatch | None:
    """First anchor whose computed window equals the printed one."""
    t = triangulation or canonical_triangulation(grid.n)
    width = len(grid.matrix[0])
    layout = layout_for_triangulation(t, max(levels) + width // 2 + 2)
    hom = hom_engine(layout, engine)
    for cand in anchor_candidates(grid, layout, levels):
        # every printed cell must name an actual preprojective object
        if any(cand.place(grid, r, k) is None for r, k, _ in grid.cells()):
            continue
        if not window_mismatches(grid, cand, hom):
            return cand
    return None
