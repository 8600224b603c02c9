import itertools
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from dtilde.quiver import classify_type, is_acyclic
from dtilde.surface import (
    BothEndsAtPunctures,
    Chord,
    DigonCutter,
    Frame,
    InvalidTriangulation,
    PuncturePair,
    PunctureRay,
    SurfaceError,
    arcs_cross,
    audit_structure,
    canonical_configurations,
    canonical_triangulation,
    completion,
    elementary_moves,
    endpoints,
    enumerate_triangulations,
    make_triangulation,
    parse_triangulation,
    punctured_intersections,
    quiver_of_triangulation,
    rotate,
    rotate_triangulation,
    tagged_rotation,
    validate_triangulation,
    write_triangulation,
)


def ray_ids(t, puncture):
    return [i for i in t.ids() if isinstance(t.arc(i), PunctureRay) and t.arc(i).puncture == puncture]


# --------------------------------------------------------- construction


@pytest.mark.parametrize("n", range(3, 10))
def test_canonical_has_n_plus_3_valid_arcs(n):
    t = canonical_triangulation(n)
    assert len(t.arcs) == n + 3
    assert validate_triangulation(t) == []


def test_canonical_hexagon():
    t = canonical_triangulation(6)
    q = quiver_of_triangulation(t)
    assert q.vertex_count == 9 and len(q.arrows) == 8
    assert str(classify_type(q)) == "AffineD(8)"
    assert t.frame == (0, "P0", 1, 2, 3, "P1", 4, 5)


def test_digon_case():
    t = canonical_triangulation(2)
    assert len(t.arcs) == 5
    assert str(classify_type(quiver_of_triangulation(t))) == "AffineD(4)"


def test_every_configuration_is_valid():
    count = 0
    for n in range(2, 8):
        for t in canonical_configurations(n):
            count += 1
            assert validate_triangulation(t) == [], write_triangulation(t)
    assert count > 100


@pytest.mark.parametrize("positions, styles, apex", [
    ((0, 0), ("shared", "shared"), None),
    ((0, 3), ("neighbor", "shared"), None),
    ((1, 4), ("shared", "neighbor"), 0),
])
def test_configuration_choices(positions, styles, apex):
    try:
        t = canonical_triangulation(6, positions, styles, apex)
    except SurfaceError:
        return  # an illegal choice is reported, never silently repaired
    assert validate_triangulation(t) == []


# ------------------------------------------------------------ the quiver


def test_rays_at_one_puncture_are_not_joined():
    t = canonical_triangulation(6)
    q = quiver_of_triangulation(t)
    for p in ("P0", "P1"):
        a, b = ray_ids(t, p)
        assert (a, b) not in q.arrows and (b, a) not in q.arrows


def test_flanking_arc_meets_both_rays_of_a_homotopic_pair():
    t = canonical_triangulation(6)
    q = quiver_of_triangulation(t)
    a, b = ray_ids(t, "P0")
    flank = [i for i in t.ids() if isinstance(t.arc(i), DigonCutter) and t.arc(i).puncture == "P0"]
    assert len(flank) == 1
    for r in (a, b):
        assert flank[0] in q.neighbours(r)


# ------------------------------------------------------------ validation


def test_puncture_pair_triangulation_is_flagged():
    bad = [t for t in enumerate_triangulations(3) if any(isinstance(a, PuncturePair) for a in t.arcs)]
    assert bad
    for t in bad:
        problems = validate_triangulation(t)
        assert "quiver is not acyclic" in problems
        assert any("join the two punctures" in p for p in problems)


def test_three_arcs_at_a_puncture_are_flagged():
    t = next(t for t in enumerate_triangulations(3) if len(ray_ids(t, "P0")) == 3)
    assert any("puncture P0" in p for p in validate_triangulation(t))
    assert not audit_structure(t).two_rays_per_puncture


def test_crossing_arcs_are_flagged():
    t = canonical_triangulation(6)
    extra = Chord(1, 3, frozenset({"P0", "P1"}), 6)
    arcs = [a for a in t.arcs if not (isinstance(a, Chord) and a.a == 2 and a.b == 0)] + [extra]
    bad = make_triangulation(6, arcs, t.frame)
    assert any("cross" in p for p in validate_triangulation(bad))


def test_missing_arc_is_not_maximal():
    t = canonical_triangulation(5)
    short = make_triangulation(5, t.arcs[:-1], t.frame)
    problems = validate_triangulation(short)
    assert any("arc count" in p for p in problems)
    assert any("not maximal" in p for p in problems)


def test_loop_around_both_punctures_blocks_rays_outside_it():
    frame = Frame((0, "P0", "P1", 1, 2))
    loop = Chord(1, 1, frozenset({"P0", "P1"}), 3)
    assert arcs_cross(frame, loop, PunctureRay("P0", 0, 0, 3))
    assert arcs_cross(frame, loop, PunctureRay("P1", 2, 1, 3))
    assert not arcs_cross(frame, loop, PunctureRay("P0", 1, 0, 3))
    assert not arcs_cross(frame, loop, Chord(2, 0, frozenset({"P0", "P1"}), 3))


def test_uninhabited_frame_is_rejected():
    with pytest.raises(InvalidTriangulation):
        make_triangulation(4, [DigonCutter(1, 0, "P0", 4), DigonCutter(2, 1, "P0", 4)], None)


# ---------------------------------------------------------- rotation


def test_rotation_of_a_chord():
    c = tagged_rotation(Chord(0, 2, frozenset(), 6))
    assert (c.a, c.b) == (1, 3)
    assert c.left == frozenset({4, 5, 0})


def test_rotation_of_a_ray_flips_the_tag():
    assert tagged_rotation(PunctureRay("P0", 4, 0, 6)) == PunctureRay("P0", 5, 1, 6)


def test_rotation_squared_fixes_a_puncture_pair():
    pair = PuncturePair(0, 1, 6)
    assert rotate(pair, 2) == pair
    assert rotate(pair, 1) != pair


def test_rotation_direction_is_checked():
    with pytest.raises(ValueError):
        tagged_rotation(PunctureRay("P0", 0, 0, 3), "sideways")


arcs_6 = st.one_of(
    st.builds(PunctureRay, st.sampled_from(["P0", "P1"]), st.integers(0, 5), st.integers(0, 1), st.just(6)),
    st.builds(lambda a, d, p: DigonCutter(a, a - d, p, 6), st.integers(0, 5), st.integers(0, 1),
              st.sampled_from(["P0", "P1"])),
    st.builds(lambda a, b, p: Chord(a, b, frozenset(p), 6), st.integers(0, 5), st.integers(0, 5),
              st.sets(st.sampled_from(["P0", "P1"]))).filter(lambda c: c.a != c.b),
)


@settings(max_examples=200, deadline=None)
@given(arcs_6, st.integers(-12, 12))
def test_rotation_inverts(arc, k):
    assert rotate(rotate(arc, k), -k) == arc


@settings(max_examples=200, deadline=None)
@given(arcs_6)
def test_full_turn_of_marked_points(arc):
    # twelve steps return marked ends and an even number of tag flips
    assert rotate(arc, 12) == arc


@pytest.mark.parametrize("n", [3, 5, 8])
def test_rotated_triangulation_keeps_quiver_and_adjacency(n):
    for t in itertools.islice(canonical_configurations(n), 40):
        r = rotate_triangulation(t)
        assert quiver_of_triangulation(r) == quiver_of_triangulation(t)
        assert validate_triangulation(r) == []
        for (x, rx), (y, ry) in itertools.combinations(zip(t.arcs, r.arcs), 2):
            assert bool(endpoints(x) & endpoints(y)) == bool(endpoints(rx) & endpoints(ry))


# ------------------------------------------------- completion and moves


def test_both_tags_share_a_completion():
    a, b = PunctureRay("P0", 2, 0, 6), PunctureRay("P0", 2, 1, 6)
    assert completion(a) == completion(b) == DigonCutter(2, 2, "P0", 6)


def test_completion_keeps_the_puncture_on_the_left():
    c = completion(PunctureRay("P1", 4, 0, 6)).as_chord()
    assert c.left == frozenset({"P1"})


def test_completion_of_a_chord_is_itself():
    c = Chord(0, 3, frozenset({"P0"}), 6)
    assert completion(c) == c


@pytest.mark.parametrize("arc, count", [
    (Chord(0, 3, frozenset(), 6), 2),
    (DigonCutter(1, 0, "P0", 6), 3),
    (PunctureRay("P0", 0, 1, 6), 1),
])
def test_number_of_elementary_moves(arc, count):
    assert len(elementary_moves(arc)) == count


def test_digon_cutter_moves_include_both_tags():
    moves = elementary_moves(DigonCutter(1, 0, "P0", 6))
    rays = {(m.marked, m.tag) for m in moves if isinstance(m, PunctureRay)}
    assert rays == {(1, 0), (1, 1)}


def test_puncture_pair_has_no_moves():
    with pytest.raises(BothEndsAtPunctures):
        elementary_moves(PuncturePair(0, 0, 6))


# ------------------------------------------------- punctured intersections


@pytest.mark.parametrize("x, y, expected", [
    (PunctureRay("P0", 0, 0, 6), PunctureRay("P0", 2, 1, 6), 1),
    (PunctureRay("P0", 0, 0, 6), PunctureRay("P0", 0, 1, 6), 0),
    (PunctureRay("P0", 0, 0, 6), PunctureRay("P0", 2, 0, 6), 0),
    (PunctureRay("P0", 0, 0, 6), PunctureRay("P1", 0, 1, 6), 0),
    (PuncturePair(0, 0, 6), PuncturePair(1, 1, 6), 2),
])
def test_punctured_intersections(x, y, expected):
    assert punctured_intersections(x, y) == expected


# ------------------------------------------------------------- audits


@pytest.mark.parametrize("n", [1, 2, 3])
def test_every_acyclic_enumerated_triangulation_passes_the_audits(n):
    found = enumerate_triangulations(n)
    acyclic = [t for t in found if is_acyclic(quiver_of_triangulation(t))]
    assert acyclic
    for t in acyclic:
        assert audit_structure(t).passed, write_triangulation(t)


def test_enumerated_triangulations_have_n_plus_3_arcs():
    for n in (1, 2, 3):
        assert {len(t.arcs) for t in enumerate_triangulations(n)} == {n + 3}


def test_monogon_puncture_pairs_are_never_acyclic():
    for t in enumerate_triangulations(1):
        if any(isinstance(a, PuncturePair) for a in t.arcs):
            assert not is_acyclic(quiver_of_triangulation(t))


@pytest.mark.parametrize("n", range(3, 10))
def test_audit_finds_two_digon_cutters(n):
    report = audit_structure(canonical_triangulation(n))
    assert report.passed
    assert len(report.digon_cutters) == 2
    assert len(report.polygon_arcs) == n - 3


def test_enumeration_types_for_the_quadrilateral():
    kinds = Counter(
        str(classify_type(q)) for t in enumerate_triangulations(4)
        if is_acyclic(q := quiver_of_triangulation(t))
    )
    assert set(kinds) == {"AffineD(6)"}


# ---------------------------------------------------------------- I/O


@pytest.mark.parametrize("n", [2, 4, 7])
def test_file_round_trip(n):
    t = canonical_triangulation(n)
    assert parse_triangulation(write_triangulation(t)) == t


@pytest.mark.parametrize("text", [
    "ray P0 0 0\n",
    "surface n=3 punctures=1\n",
    "surface n=3\nblob 1 2\n",
    "surface n=3\nray P0 x 0\n",
    "surface n=3\nray P7 0 0\n",
])
def test_bad_files(text):
    with pytest.raises(SurfaceError):
        parse_triangulation(text)
