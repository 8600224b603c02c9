import pytest
from hypothesis import given, settings, strategies as st

from dtilde.quiver import (
    Disconnected,
    LoopArrow,
    NotAcyclic,
    TwoCycle,
    BadVertexId,
    build_quiver,
    classify_type,
    is_acyclic,
    mutate,
    parse_quiver,
    topological_order,
)
from dtilde.surface import canonical_triangulation, quiver_of_triangulation


def exchange_matrix(q):
    n = q.vertex_count
    b = [[0] * (n + 1) for _ in range(n + 1)]
    for s, t in q.arrows:
        b[s][t] += 1
        b[t][s] -= 1
    return b


def matrix_mutation(q, k):
    # independent oracle: mutation of the skew-symmetric exchange matrix
    b = exchange_matrix(q)
    n = q.vertex_count
    out = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if k in (i, j):
                out[i][j] = -b[i][j]
            else:
                bik, bkj = b[i][k], b[k][j]
                out[i][j] = b[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 2
    return out


@st.composite
def acyclic_quivers(draw, max_vertices=7):
    n = draw(st.integers(2, max_vertices))
    order = draw(st.permutations(range(1, n + 1)))
    arrows = []
    for a in range(n):
        for b in range(a + 1, n):
            arrows += [(order[a], order[b])] * draw(st.integers(0, 2))
    return build_quiver(n, arrows)


def test_path_quiver_is_valid():
    q = build_quiver(3, [(1, 2), (2, 3)])
    assert q.arrows == ((1, 2), (2, 3))


@pytest.mark.parametrize("count, arrows, error", [
    (2, [(1, 2), (2, 1)], TwoCycle),
    (1, [(1, 1)], LoopArrow),
    (2, [(1, 3)], BadVertexId),
    (0, [], BadVertexId),
])
def test_build_rejects(count, arrows, error):
    with pytest.raises(error):
        build_quiver(count, arrows)


def test_mutation_at_middle_of_path():
    q = build_quiver(3, [(1, 2), (2, 3)])
    assert sorted(mutate(q, 2).arrows) == [(1, 3), (2, 1), (3, 2)]


def test_mutation_at_sink_of_star_only_reverses():
    star = build_quiver(5, [(leaf, 3) for leaf in (1, 2, 4, 5)])
    assert sorted(mutate(star, 3).arrows) == [(3, leaf) for leaf in (1, 2, 4, 5)]


@settings(max_examples=200, deadline=None)
@given(acyclic_quivers(), st.data())
def test_mutation_is_an_involution(q, data):
    i = data.draw(st.integers(1, q.vertex_count))
    assert mutate(mutate(q, i), i) == q


@settings(max_examples=200, deadline=None)
@given(acyclic_quivers(), st.data())
def test_mutation_matches_matrix_mutation(q, data):
    i = data.draw(st.integers(1, q.vertex_count))
    assert exchange_matrix(mutate(q, i)) == matrix_mutation(q, i)


@pytest.mark.parametrize("arrows, expected", [
    ([(1, 2), (2, 3)], True),
    ([(1, 2), (2, 3), (3, 1)], False),
    ([(1, 2), (1, 2), (3, 2)], True),
])
def test_is_acyclic(arrows, expected):
    assert is_acyclic(build_quiver(3, arrows)) is expected


def test_topological_order_needs_acyclic():
    with pytest.raises(NotAcyclic):
        topological_order(build_quiver(3, [(1, 2), (2, 3), (3, 1)]))


@settings(max_examples=100, deadline=None)
@given(acyclic_quivers())
def test_topological_order_respects_arrows(q):
    pos = {v: k for k, v in enumerate(topological_order(q))}
    assert all(pos[s] < pos[t] for s, t in q.arrows)


def test_star_is_affine_d4():
    star = build_quiver(5, [(leaf, 3) for leaf in (1, 2, 4, 5)])
    assert str(classify_type(star)) == "AffineD(4)"


@pytest.mark.parametrize("arrows", [
    [(1, 2), (2, 3), (3, 4)],
    [(1, 2), (1, 2), (2, 3), (3, 4)],
])
def test_not_affine_d(arrows):
    assert str(classify_type(build_quiver(4, arrows))) == "Other"


def test_disconnected_quiver_has_no_type():
    with pytest.raises(Disconnected):
        classify_type(build_quiver(3, [(1, 2)]))


@pytest.mark.parametrize("n", range(3, 10))
def test_canonical_triangulation_type(n):
    q = quiver_of_triangulation(canonical_triangulation(n))
    assert is_acyclic(q)
    assert str(classify_type(q)) == f"AffineD({n + 2})"


def test_canonical_labeling_is_a_bijection_onto_rows():
    q = quiver_of_triangulation(canonical_triangulation(6))
    labels = classify_type(q).canonical_labeling
    assert sorted(labels.values()) == list(range(1, 10))


def test_text_round_trip():
    q = build_quiver(4, [(1, 2), (3, 2), (4, 3)])
    assert parse_quiver(q.to_text()) == q


def test_dot_lists_every_arrow():
    q = build_quiver(3, [(1, 2), (3, 2)])
    dot = q.to_dot()
    assert "1 -> 2;" in dot and "3 -> 2;" in dot
