"""Quivers, mutation, acyclicity and affine type D recognition.

Vertices are the integers ``1..vertex_count``.  Arrows are stored as a
sorted tuple of ``(source, target)`` pairs; parallel arrows are allowed,
loops and oriented 2-cycles are not.
"""
from __future__ import annotations

from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable


class QuiverError(ValueError):
    pass


class LoopArrow(QuiverError):
    pass


class TwoCycle(QuiverError):
    pass


class BadVertexId(QuiverError):
    pass


class Disconnected(QuiverError):
    pass


class NotAcyclic(QuiverError):
    pass


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[tuple[int, int], ...]
    labels: tuple[tuple[int, int], ...] | None = field(default=None, compare=False)

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def arrow_counts(self) -> Counter:
        return Counter(self.arrows)

    def successors(self, v: int) -> list[int]:
        return [t for s, t in self.arrows if s == v]

    def predecessors(self, v: int) -> list[int]:
        return [s for s, t in self.arrows if t == v]

    def neighbours(self, v: int) -> set[int]:
        return set(self.successors(v)) | set(self.predecessors(v))

    def opposite(self) -> "Quiver":
        return Quiver(self.vertex_count, tuple(sorted((t, s) for s, t in self.arrows)), self.labels)

    def relabel(self, perm: dict[int, int]) -> "Quiver":
        """Rename vertex ``v`` to ``perm[v]``."""
        return build_quiver(self.vertex_count, [(perm[s], perm[t]) for s, t in self.arrows])

    def to_text(self) -> str:
        lines = [f"n={self.vertex_count}"]
        lines += [f"a {s} {t}" for s, t in self.arrows]
        return "\n".join(lines) + "\n"

    def to_dot(self, name: str = "Q") -> str:
        out = [f"digraph {name} {{"]
        for v in self.vertices:
            out.append(f'  {v} [label="{v}"];')
        for s, t in self.arrows:
            out.append(f"  {s} -> {t};")
        out.append("}")
        return "\n".join(out) + "\n"


def build_quiver(vertex_count: int, arrows: Iterable[tuple[int, int]]) -> Quiver:
    if vertex_count < 1:
        raise BadVertexId(f"vertex_count must be positive, got {vertex_count}")
    arrows = [(int(s), int(t)) for s, t in arrows]
    for s, t in arrows:
        for v in (s, t):
            if not 1 <= v <= vertex_count:
                raise BadVertexId(f"vertex {v} outside 1..{vertex_count}")
        if s == t:
            raise LoopArrow(f"loop at vertex {s}")
    present = set(arrows)
    for s, t in present:
        if (t, s) in present:
            raise TwoCycle(f"2-cycle between {s} and {t}")
    return Quiver(vertex_count, tuple(sorted(arrows)))


def parse_quiver(text: str) -> Quiver:
    """Read the ``n=<k>`` / ``a <src> <dst>`` text format."""
    count = None
    arrows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("n="):
            count = int(line[2:])
        elif line.startswith("a "):
            _, s, t = line.split()
            arrows.append((int(s), int(t)))
        else:
            raise QuiverError(f"unrecognised quiver line: {raw!r}")
    if count is None:
        raise QuiverError("missing n=<k> header")
    return build_quiver(count, arrows)


def mutate(q: Quiver, i: int) -> Quiver:
    """Mutation at ``i``: compose through ``i``, reverse at ``i``, cancel 2-cycles."""
    if i not in q.vertices:
        raise BadVertexId(f"vertex {i} outside 1..{q.vertex_count}")
    arrows = list(q.arrows)
    ins = [s for s, t in arrows if t == i]
    outs = [t for s, t in arrows if s == i]
    composed = [(j, k) for j in ins for k in outs]
    reversed_ = [(t, s) if i in (s, t) else (s, t) for s, t in arrows]
    counts = Counter(reversed_ + composed)
    # cancel opposite arrows pairwise
    for (s, t) in list(counts):
        if s < t and (t, s) in counts:
            m = min(counts[(s, t)], counts[(t, s)])
            counts[(s, t)] -= m
            counts[(t, s)] -= m
    result = []
    for arrow, mult in sorted(counts.items()):
        result.extend([arrow] * mult)
    return Quiver(q.vertex_count, tuple(result))


def is_acyclic(q: Quiver) -> bool:
    indeg = {v: 0 for v in q.vertices}
    out = defaultdict(list)
    for s, t in q.arrows:
        indeg[t] += 1
        out[s].append(t)
    queue = deque(v for v, d in indeg.items() if d == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == q.vertex_count


def topological_order(q: Quiver) -> list[int]:
    """Vertices ordered so every arrow points forward."""
    if not is_acyclic(q):
        raise NotAcyclic("quiver has an oriented cycle")
    indeg = {v: 0 for v in q.vertices}
    for _, t in q.arrows:
        indeg[t] += 1
    ready = sorted(v for v, d in indeg.items() if d == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in sorted(q.successors(v)):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort()
    return order


def is_connected(q: Quiver) -> bool:
    adj = defaultdict(set)
    for s, t in q.arrows:
        adj[s].add(t)
        adj[t].add(s)
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == q.vertex_count


@dataclass(frozen=True)
class DynkinClass:
    """Result of :func:`classify_type`.

    ``canonical_labeling`` maps a quiver vertex to its row in the affine
    D diagram: forks ``{1, 2}`` hang off row 3, forks ``{n, n+1}`` hang off
    row ``n-1`` and rows ``3..n-1`` form the central path.
    """

    kind: str
    n: int | None = None
    canonical_labeling: dict[int, int] | None = None

    @property
    def is_affine_d(self) -> bool:
        return self.kind == "AffineD"

    def __str__(self) -> str:
        return f"AffineD({self.n})" if self.is_affine_d else "Other"


OTHER = DynkinClass("Other")


def classify_type(q: Quiver) -> DynkinClass:
    """Recognise the underlying graph of ``q`` as an affine D diagram.

    Parallel arrows or a cyclic underlying graph give ``Other``.
    """
    if not is_connected(q):
        raise Disconnected("quiver is not connected")
    edges = {frozenset(a) for a in q.arrows}
    if len(edges) != len(q.arrows) or len(edges) != q.vertex_count - 1:
        return OTHER  # multi-edges, or not a tree
    adj = defaultdict(set)
    for e in edges:
        s, t = tuple(e)
        adj[s].add(t)
        adj[t].add(s)
    deg = {v: len(adj[v]) for v in q.vertices}
    leaves = sorted(v for v in q.vertices if deg[v] == 1)
    n = q.vertex_count - 1
    if n == 4:
        centres = [v for v in q.vertices if deg[v] == 4]
        if len(centres) != 1 or len(leaves) != 4:
            return OTHER
        c = centres[0]
        labeling = {c: 3}
        for row, leaf in zip((1, 2, 4, 5), leaves):
            labeling[leaf] = row
        return DynkinClass("AffineD", 4, labeling)
    if n < 4:
        return OTHER
    branch = sorted(v for v in q.vertices if deg[v] == 3)
    if len(leaves) != 4 or len(branch) != 2 or any(d > 3 for d in deg.values()):
        return OTHER
    b0, b1 = branch
    fork0 = sorted(v for v in leaves if b0 in adj[v])
    fork1 = sorted(v for v in leaves if b1 in adj[v])
    if len(fork0) != 2 or len(fork1) != 2:
        return OTHER
    # walk the central path from b0 to b1
    path = [b0]
    prev = None
    cur = b0
    while cur != b1:
        nxt = [w for w in adj[cur] if w != prev and w not in fork0 and w not in fork1]
        if len(nxt) != 1:
            return OTHER
        prev, cur = cur, nxt[0]
        path.append(cur)
    if len(path) != n - 3:
        return OTHER
    labeling = {fork0[0]: 1, fork0[1]: 2, fork1[0]: n, fork1[1]: n + 1}
    for row, v in enumerate(path, start=3):
        labeling[v] = row
    return DynkinClass("AffineD", n, labeling)
