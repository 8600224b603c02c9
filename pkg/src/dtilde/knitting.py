"""Preprojective component by knitting, with Hom/Ext dimensions.

Conventions: ``dim P(i)_j`` counts the paths ``i -> j``.  The preprojective
component is ``N(Q^op)``: object ``(n, i)`` is ``tau^-(n-1) P(i)`` and the
mesh ending at ``(n+1, i)`` has middles ``(n, j)`` for every arrow ``j -> i``
and ``(n+1, k)`` for every arrow ``i -> k`` of ``Q``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .quiver import NotAcyclic, Quiver, classify_type, is_acyclic, topological_order

INT64_MAX = 2**63 - 1


class NotAffineD(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class Saturation(OverflowError):
    pass


DimVector = tuple[int, ...]
Coord = tuple[int, int]  # (level, vertex)


def _check(v: DimVector) -> DimVector:
    if any(abs(x) > INT64_MAX for x in v):
        raise Saturation("dimension vector entry exceeds 64-bit range")
    return v


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def projective_dim_vectors(q: Quiver) -> list[DimVector]:
    """``result[i-1][j-1]`` is the number of paths from ``i`` to ``j``."""
    if not is_acyclic(q):
        raise NotAcyclic("projectives need an acyclic quiver")
    n = q.vertex_count
    dims: dict[int, DimVector] = {}
    for i in reversed(topological_order(q)):
        d = tuple(1 if j == i else 0 for j in range(1, n + 1))
        for k in q.successors(i):
            d = _add(d, dims[k])
        dims[i] = _check(d)
    return [dims[i] for i in range(1, n + 1)]


def mesh_middles(q: Quiver, level: int, i: int) -> list[Coord]:
    """Middle terms of the mesh ending at ``(level, i)``; ``level >= 2``."""
    mids = [(level - 1, j) for j in q.predecessors(i)]
    mids += [(level, k) for k in q.successors(i)]
    return mids


@dataclass(frozen=True)
class ARComponent:
    quiver: Quiver
    max_level: int
    table: dict[Coord, DimVector]

    def dim(self, c: Coord) -> DimVector:
        return self.table[tuple(c)]

    def coords(self) -> list[Coord]:
        return sorted(self.table)

    def to_text(self) -> str:
        lines = []
        for level in range(1, self.max_level + 1):
            for i in self.quiver.vertices:
                d = self.table[(level, i)]
                lines.append(f"({level},{i}) " + " ".join(str(x) for x in d))
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        out = ["digraph AR {", "  rankdir=LR;"]
        for (level, i) in self.coords():
            d = "".join(str(x) for x in self.table[(level, i)])
            out.append(f'  "{level},{i}" [label="({level},{i})\\n{d}"];')
        for level in range(1, self.max_level + 1):
            for s, t in self.quiver.arrows:
                # Q arrow s -> t gives (n,t) -> (n,s) and (n,s) -> (n+1,t)
                out.append(f'  "{level},{t}" -> "{level},{s}";')
                if level < self.max_level:
                    out.append(f'  "{level},{s}" -> "{level + 1},{t}";')
            if level < self.max_level:
                for i in self.quiver.vertices:
                    out.append(f'  "{level},{i}" -> "{level + 1},{i}" [style=dashed, constraint=false];')
        out.append("}")
        return "\n".join(out) + "\n"


def knit(q: Quiver, max_level: int, require_affine_d: bool = True) -> ARComponent:
    if require_affine_d and not (is_acyclic(q) and classify_type(q).is_affine_d):
        raise NotAffineD("knitting expects an acyclic quiver of affine type D")
    proj = projective_dim_vectors(q)
    table: dict[Coord, DimVector] = {}
    for i in q.vertices:
        table[(1, i)] = proj[i - 1]
    # successors of i must be knitted before i within a level
    order = list(reversed(topological_order(q)))
    for level in range(2, max_level + 1):
        for i in order:
            total = tuple(0 for _ in q.vertices)
            for m in mesh_middles(q, level, i):
                total = _add(total, table[m])
            d = _sub(total, table[(level - 1, i)])
            if any(x < 0 for x in d):
                raise ValueError(f"negative entry knitting ({level},{i}): {d}")
            table[(level, i)] = _check(d)
    return ARComponent(q, max_level, table)


def tau_translate(comp: ARComponent, c: Coord, k: int) -> DimVector | None:
    """Dimension vector of ``tau^k`` of ``c``; ``None`` stands for the zero module."""
    level, i = c
    target = level - k
    if target < 1:
        return None
    if target > comp.max_level:
        raise KeyError(f"level {target} beyond knitted range {comp.max_level}")
    return comp.table[(target, i)]


def hom_dim(comp: ARComponent, x: Coord, y: Coord) -> int:
    """``dim Hom(X, Y)`` for preprojective ``X = (a, i)``.

    ``Hom(tau^-(a-1) P(i), Y) = Hom(P(i), tau^(a-1) Y)``, the ``i`` entry of
    the translate, or zero once the translate vanishes.
    """
    a, i = x
    d = tau_translate(comp, y, a - 1)
    return 0 if d is None else d[i - 1]


def ext_dim(comp: ARComponent, m: Coord, n: Coord) -> int:
    """``dim Ext^1(M, N) = dim Hom(N, tau M)``."""
    level, i = m
    if level == 1:
        return 0
    return hom_dim(comp, n, (level - 1, i))


def euler_form(q: Quiver, d: DimVector, e: DimVector) -> int:
    if len(d) != q.vertex_count or len(e) != q.vertex_count:
        raise DimensionMismatch("vectors must be indexed by the quiver vertices")
    val = sum(x * y for x, y in zip(d, e))
    val -= sum(d[s - 1] * e[t - 1] for s, t in q.arrows)
    return val


def euler_and_tits(q: Quiver, d: DimVector, e: DimVector) -> tuple[int, int]:
    return euler_form(q, d, e), euler_form(q, d, d)
