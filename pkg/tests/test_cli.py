import json

import pytest

import dtilde.verify
from dtilde.cli import BadFlags, parse_coords, parse_range, run_command
from dtilde.fixtures import load_fixture
from dtilde.ppcat import PPCoordinate
from dtilde.surface import parse_triangulation, validate_triangulation


def run(capsys, *argv):
    status = run_command(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_triangulate_hexagon(capsys):
    status, out, _ = run(capsys, "triangulate", "--n", "6")
    assert status == 0
    t = parse_triangulation(out)
    assert len(t.arcs) == 9
    assert validate_triangulation(t) == []


def test_triangulate_json_and_svg(capsys, tmp_path):
    svg = tmp_path / "t.svg"
    status, out, _ = run(capsys, "triangulate", "--n", "5", "--format", "json", "--svg", str(svg))
    assert status == 0
    data = json.loads(out)
    assert data["type"] == "AffineD(7)" and len(data["arcs"]) == 8
    assert svg.read_text().count("<polyline") == 8


def test_triangulation_file_input(capsys, tmp_path):
    _, text, _ = run(capsys, "triangulate", "--n", "4", "--styles", "neighbor,shared")
    path = tmp_path / "t.txt"
    path.write_text(text)
    status, out, _ = run(capsys, "quiver", "--triangulation", str(path), "--format", "json")
    assert status == 0
    assert json.loads(out)["type"] == "AffineD(6)"


def test_invalid_triangulation_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("surface n=4 punctures=2\nray P0 0 0\n")
    status, _, err = run(capsys, "quiver", "--triangulation", str(path))
    assert status == 2
    assert "invalid triangulation" in err


def test_quiver_text(capsys):
    status, out, _ = run(capsys, "quiver", "--n", "6")
    assert status == 0
    assert out.startswith("n=9\n")
    assert out.count("\na ") == 8
    assert "AffineD(8)" in out


def test_knit_json(capsys):
    status, out, _ = run(capsys, "knit", "--n", "3", "--max-level", "2", "--format", "json")
    assert status == 0
    table = json.loads(out)
    assert len(table) == 12
    assert all(len(v) == 6 for v in table.values())


@pytest.mark.parametrize("what, head", [("quiver", "digraph QT {"), ("component", "digraph AR {")])
def test_export_dot(capsys, what, head):
    status, out, _ = run(capsys, "export-dot", "--n", "4", "--what", what, "--max-level", "2")
    assert status == 0 and out.startswith(head)


def test_int_engines_agree(capsys):
    values = set()
    for engine in ("closed-form", "knitting", "geometric"):
        status, out, _ = run(capsys, "int", "--n", "6", "--engine", engine, "--pair", "(3,5) (2,7)")
        assert status == 0
        values.add(int(out))
    assert len(values) == 1


def test_int_writes_svg(capsys, tmp_path):
    svg = tmp_path / "pair.svg"
    status, _, _ = run(capsys, "int", "--n", "4", "--pair", "(2,1) (3,4)", "--svg", str(svg))
    assert status == 0
    assert svg.read_text().count("<polyline") == 2


def test_geometric_engine_is_capped(capsys):
    status, _, err = run(capsys, "int", "--n", "6", "--engine", "geometric", "--pair", "(7,1) (2,2)")
    assert status == 2 and "capped" in err


def test_ext_engines_agree(capsys):
    outs = []
    for engine in ("closed-form", "knitting"):
        status, out, _ = run(capsys, "ext", "--n", "7", "--engine", engine, "--pair", "(5,3) (2,8)",
                             "--format", "json")
        assert status == 0
        outs.append(json.loads(out)["ext"])
    assert outs[0] == outs[1]


def test_table_reproduces_the_hexagon_window(capsys):
    status, out, _ = run(capsys, "table", "--n", "6", "--anchor", "(1,3)", "--width", "23")
    assert status == 0
    printed = [line.split() for line in out.splitlines()]
    grid = load_fixture("fig9")
    for r, row in enumerate(printed):
        expected = ["M" if (r, k) == grid.anchor else "." if v is None else str(v)
                    for k, v in enumerate(grid.matrix[r])]
        assert row == expected[:len(row)]


def test_table_fixtures(capsys):
    status, out, _ = run(capsys, "table", "--fixtures", "--format", "json")
    assert status == 0
    found = {item["name"]: item["anchor"] for item in json.loads(out)}
    assert found == {"fig8": "(3,2)", "fig9": "(1,3)"}


def test_verify_range(capsys):
    status, out, _ = run(capsys, "verify", "--n", "4..7", "--max-level", "8")
    assert status == 0
    assert out.startswith("PASS intersection equals summed Ext")
    assert "0 mismatches" in out


def strip_seconds(text):
    data = json.loads(text)
    for c in data["checks"]:
        c.pop("seconds")
    return data


def test_verify_is_deterministic(capsys):
    argv = ["verify", "--n", "3..5", "--max-level", "5", "--fixtures", "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert strip_seconds(first) == strip_seconds(second)


def test_verify_reports_a_planted_mismatch(capsys, monkeypatch):
    real = dtilde.verify.closed_form_int

    def broken(layout, x, y):
        bump = x == PPCoordinate(3, 2) and y == PPCoordinate(4, 5)
        return real(layout, x, y) + bump

    monkeypatch.setattr(dtilde.verify, "closed_form_int", broken)
    status, out, _ = run(capsys, "verify", "--n", "5", "--max-level", "5")
    assert status == 1
    assert out.startswith("FAIL intersection equals summed Ext")
    assert "(3,2)" in out and "(4,5)" in out


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["triangulate"],
    ["triangulate", "--n", "4..6"],
    ["triangulate", "--n", "six"],
    ["quiver", "--n", "6", "--format", "xml"],
    ["int", "--n", "6", "--pair", "(1,1)"],
    ["int", "--n", "6", "--pair", "(1,1) (2,40)"],
    ["int", "--n", "6", "--pair", "(0,1) (2,2)"],
    ["ext", "--n", "6", "--pair", "(1,1) (2,2)", "--engine", "geometric"],
    ["table", "--n", "6"],
    ["verify", "--n", "2..4"],
    ["knit", "--n", "4", "--max-level", "0"],
    ["quiver", "--triangulation", "/nonexistent/file"],
])
def test_bad_input_exits_with_2(capsys, argv):
    status, _, err = run(capsys, *argv)
    assert status == 2
    assert err.startswith("dtilde: error:")


@pytest.mark.parametrize("text, expected", [("6", [6]), ("4..7", [4, 5, 6, 7]), (" 3 .. 4 ", [3, 4])])
def test_parse_range(text, expected):
    assert parse_range(text) == expected


def test_parse_range_rejects_empty():
    with pytest.raises(BadFlags):
        parse_range("7..4")


def test_parse_coords():
    assert parse_coords("(3,5) ( 2 , 7 )") == [PPCoordinate(3, 5), PPCoordinate(2, 7)]
