"""Exhaustive enumeration of ideal triangulations by gluing triangles.

A twice-punctured ``n``-gon is cut by ``n + 3`` arcs into ``n + 2``
triangles, so every ideal triangulation is a way of pairing up all but
``n`` of the ``3(n + 2)`` triangle sides.  Isomorphism classes of gluings
are ideal triangulations up to homeomorphism (punctures unlabelled), which
makes the enumeration finite and exhaustive.

Tagging does not enter: changing the tags at a puncture keeps both the
exchange quiver and the set of puncture-to-puncture arcs, and each class of
tagged triangulations up to retagging contains exactly one plain tagged
triangulation.  Self-folded triangles are handled by sending the loop to
its radius before reading off the signed adjacency.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

from .quiver import Quiver, classify_type, is_acyclic

Side = tuple[int, int]  # (triangle, k): side from corner k to corner k + 1, ccw


@dataclass(frozen=True)
class Gluing:
    n: int
    triangles: int
    glue: dict  # side -> side, an involution on interior sides
    boundary: frozenset

    def vertex_of(self) -> dict:
        return self.vertices

    @cached_property
    def vertices(self) -> dict:
        """Corner ``(t, k)`` -> vertex class id."""
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (t, k), (u, j) in self.glue.items():
            # orientation reversing: corner k meets corner j+1 and k+1 meets j
            for a, b in (((t, k), (u, (j + 1) % 3)), ((t, (k + 1) % 3), (u, j))):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
        ids = {}
        out = {}
        for t in range(self.triangles):
            for k in range(3):
                out[(t, k)] = ids.setdefault(find((t, k)), len(ids))
        return out

    def edges(self) -> list[tuple[Side, Side]]:
        return sorted({tuple(sorted(p)) for p in self.glue.items()})

    def punctures(self) -> set[int]:
        v = self.vertex_of()
        on_boundary = {v[(t, k)] for t, k in self.boundary} | {v[(t, (k + 1) % 3)] for t, k in self.boundary}
        return set(v.values()) - on_boundary

    def edge_ends(self) -> list[tuple[int, int]]:
        v = self.vertex_of()
        return [(v[(t, k)], v[(t, (k + 1) % 3)]) for (t, k), _ in self.edges()]

    def has_puncture_pair(self) -> bool:
        """Some arc has both ends at punctures (a loop at a puncture counts)."""
        p = self.punctures()
        return any(a in p and b in p for a, b in self.edge_ends())

    def quiver(self) -> Quiver:
        edges = self.edges()
        label = {}
        for e, (s, s2) in enumerate(edges):
            label[s] = label[s2] = e
        radius = {}
        folded = set()
        for t in range(self.triangles):
            for k in range(3):
                s, s1 = (t, k), (t, (k + 1) % 3)
                if self.glue.get(s) == s1:
                    folded.add(t)
                    loop = (t, (k + 2) % 3)
                    if loop in label:
                        radius[label[loop]] = label[s]
        pi = {e: radius.get(e, e) for e in range(len(edges))}
        m = Counter()
        for t in range(self.triangles):
            if t in folded:
                continue
            sides = [(t, k) for k in range(3)]
            for a, b in zip(sides, sides[1:] + sides[:1]):
                if a in label and b in label:
                    x, y = pi[label[a]], pi[label[b]]
                    m[(x, y)] += 1
                    m[(y, x)] -= 1
        arrows = []
        for i in range(len(edges)):
            for j in range(len(edges)):
                arrows += [(i + 1, j + 1)] * max(0, m[(pi[i], pi[j])])
        return Quiver(len(edges), tuple(sorted(arrows)))

    def is_acyclic(self) -> bool:
        return is_acyclic(self.quiver())

    def code(self, mirror: bool = False, names: dict | None = None) -> tuple:
        """Canonical code up to orientation preserving isomorphism (or up
        to any isomorphism with ``mirror``).  ``names`` maps vertex ids to
        labels that isomorphisms must respect."""
        best = None
        for step in ((1, 2) if mirror else (1,)):
            for t in range(self.triangles):
                for k in range(3):
                    c = self._code_from((t, k), step, names)
                    if best is None or c < best:
                        best = c
        return best

    def _code_from(self, start: Side, step: int, names: dict | None = None) -> tuple:
        # number triangles in BFS order; step 2 walks each triangle clockwise
        order = {start[0]: (0, start[1])}
        queue = [start[0]]
        out = []
        for t in queue:
            _, k0 = order[t]
            for i in range(3):
                # in a mirror image the side k runs from corner k+1 to corner k
                k = (k0 + i) % 3 if step == 1 else (k0 - i) % 3
                other = self.glue.get((t, k))
                if other is None:
                    out.append(-1)
                    continue
                u, j = other
                if u not in order:
                    order[u] = (len(order), j)
                    queue.append(u)
                idx, j0 = order[u]
                rel = (j - j0) % 3 if step == 1 else (j0 - j) % 3
                out.append(3 * idx + rel)
            if names is not None:
                # corners in walking order, read off the cached vertex map
                corners = [(k0 + i) % 3 if step == 1 else (k0 + 1 - i) % 3 for i in range(3)]
                out += [names.get(self.vertices[(t, c)], 0) for c in corners]
        return tuple(out)


def _matchings(items: list):
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in _matchings(rest):
            yield [(a, items[i])] + m


def _is_twice_punctured_polygon(g: Gluing) -> bool:
    v = g.vertex_of()
    # boundary sides must form one cycle through n distinct vertices
    nxt = {}
    for t, k in g.boundary:
        a, b = v[(t, k)], v[(t, (k + 1) % 3)]
        if a in nxt:
            return False
        nxt[a] = b
    if len(nxt) != g.n or set(nxt.values()) != set(nxt):
        return False
    seen, cur = set(), next(iter(nxt))
    while cur not in seen:
        seen.add(cur)
        cur = nxt[cur]
    if len(seen) != g.n:
        return False
    if len(set(v.values())) != g.n + 2:
        return False
    # connected
    adj = {t: set() for t in range(g.triangles)}
    for (t, _), (u, _) in g.glue.items():
        adj[t].add(u)
    stack, reached = [0], {0}
    while stack:
        for u in adj[stack.pop()] - reached:
            reached.add(u)
            stack.append(u)
    return len(reached) == g.triangles


def enumerate_gluings(n: int, mirror: bool = False, labelled: bool = False) -> list[Gluing]:
    """One representative per ideal triangulation of the twice-punctured
    ``n``-gon, up to homeomorphism.  With ``labelled`` the homeomorphisms
    must fix each puncture, and a representative appears once per
    inequivalent naming of its punctures."""
    if n < 1:
        raise ValueError("need at least one marked point")
    tri = n + 2
    sides = [(t, k) for t in range(tri) for k in range(3)]
    seen = {}
    for bnd in itertools.combinations(sides, n):
        inner = [s for s in sides if s not in bnd]
        for m in _matchings(inner):
            glue = {}
            for a, b in m:
                glue[a] = b
                glue[b] = a
            g = Gluing(n, tri, glue, frozenset(bnd))
            if not _is_twice_punctured_polygon(g):
                continue
            if labelled:
                p0, p1 = sorted(g.punctures())
                for names in ({p0: 1, p1: 2}, {p0: 2, p1: 1}):
                    seen.setdefault(g.code(mirror, names), g)
            else:
                seen.setdefault(g.code(mirror), g)
    return list(seen.values())


def gluing_summary(n: int, mirror: bool = False, labelled: bool = False) -> dict:
    """Counts used by the structural audit for small polygons."""
    gs = enumerate_gluings(n, mirror, labelled)
    acyclic = [g for g in gs if g.is_acyclic()]
    return {
        "classes": len(gs),
        "acyclic": len(acyclic),
        "with_puncture_pair": sum(g.has_puncture_pair() for g in gs),
        "acyclic_with_puncture_pair": sum(g.has_puncture_pair() for g in acyclic),
        "acyclic_types": sorted({str(classify_type(g.quiver())) for g in acyclic}),
    }
