import dataclasses

import pytest

from dtilde.fixtures import (
    FIGURES,
    CorruptFixture,
    load_figure_fixtures,
    load_fixture,
    parse_fixture,
    scan_anchor,
    window_mismatches,
    hom_engine,
)
from dtilde.ppcat import RelCoordinate, classify_region, closed_form_hom, resolve

RECTANGLE = [(1, 0), (1, 2), (1, -5), (3, -3)]


@pytest.fixture(scope="module")
def fig8_match():
    return scan_anchor(load_fixture("fig8"))


def test_both_figures_load():
    assert sorted(g.name for g in load_figure_fixtures()) == sorted(FIGURES)


def test_fig8_first_row():
    assert load_fixture("fig8").row_values(0) == [0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 3]


def test_fig9_first_row():
    assert load_fixture("fig9").row_values(0) == ["M", 1, 0, 1, 0, 1, 0, 2, 1, 2, 1, 2]


def test_fig9_bottom_row():
    g = load_fixture("fig9")
    assert g.row_values(len(g.matrix) - 1) == [0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2]


@pytest.mark.parametrize("name, n", [("fig8", 9), ("fig9", 6)])
def test_polygon_sizes(name, n):
    g = load_fixture(name)
    assert g.n == n
    assert len(g.matrix) == g.type_rank + 1


@pytest.mark.parametrize("name", sorted(FIGURES))
@pytest.mark.parametrize("engine", ["knitting", "closed-form"])
def test_window_is_reproduced(name, engine):
    grid = load_fixture(name)
    match = scan_anchor(grid, engine)
    assert match is not None
    assert window_mismatches(grid, match, hom_engine(match.layout, engine)) == []


@pytest.mark.parametrize("name", sorted(FIGURES))
def test_engines_agree_on_the_anchor(name):
    grid = load_fixture(name)
    assert scan_anchor(grid, "knitting").anchor == scan_anchor(grid, "closed-form").anchor


def test_fig8_anchor_is_on_a_middle_row(fig8_match):
    region = classify_region(fig8_match.layout, fig8_match.anchor)
    assert region.kind == "TypeA"
    assert str(region) == "TypeA(5)"


def test_fig9_anchor_is_on_a_fork():
    match = scan_anchor(load_fixture("fig9"))
    assert classify_region(match.layout, match.anchor).kind == "TypeDTop"


@pytest.mark.parametrize("a, b", RECTANGLE)
def test_rectangle_corners(fig8_match, a, b):
    grid = load_fixture("fig8")
    lay, anchor = fig8_match.layout, fig8_match.anchor
    y = resolve(lay, anchor, RelCoordinate(a, b))
    printed = [v for r, k, v in grid.cells() if fig8_match.place(grid, r, k) == y]
    assert printed == [1]
    assert closed_form_hom(lay, anchor.shifted(1), y) == 1


@pytest.mark.parametrize("name", sorted(FIGURES))
def test_a_changed_cell_defeats_every_anchor(name):
    grid = load_fixture(name)
    r, k, v = next(c for c in grid.cells() if c[0] == 4 and c[2] > 0)
    rows = [list(line) for line in grid.matrix]
    rows[r][k] = v + 1
    bent = dataclasses.replace(grid, matrix=tuple(tuple(line) for line in rows))
    assert scan_anchor(bent) is None


def good_text(rows=9):
    # fork rows share a depth, so rows 0, 1 and the last two line up
    depth = [min(max(r + 1, 2), 8) for r in range(rows)]
    lines = ["M . 1"] + ["0 . 0" if depth[r] % 2 == 0 else ". 0 ." for r in range(1, rows)]
    return "\n".join(lines)


def test_small_grid_parses():
    g = parse_fixture("t", good_text(), 8)
    assert g.anchor == (0, 0)
    assert g.row_values(0) == ["M", 1]


@pytest.mark.parametrize("text, message", [
    (good_text().replace("M", "0"), "no anchor"),
    (good_text().replace(". 0 .", ". M .", 1), "more than one anchor"),
    (good_text().replace("1", "x"), "bad cell"),
    (good_text(8), "rows"),
    (good_text().replace("M . 1", "M 1 1"), "off the lattice"),
])
def test_corrupt_grids(text, message):
    with pytest.raises(CorruptFixture, match=message):
        parse_fixture("t", text, 8)


def test_unknown_fixture():
    with pytest.raises(KeyError):
        load_fixture("fig10")
