"""Quivers, representations, quiver morphisms and base change."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .linalg import Field, LinAlgError, Matrix, block_diag

__all__ = [
    "QuiverError", "Arrow", "Quiver", "Representation", "QuiverMorphism",
    "BaseChange", "pullback", "pushforward", "apply_base_change", "random_rep",
    "random_base_change", "direct_sum", "is_connected", "dual", "identity_rep",
]


class QuiverError(ValueError):
    """Malformed quiver data or a representation living on the wrong quiver."""


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: str
    head: str


@dataclass(frozen=True)
class Quiver:
    """A finite directed multigraph; loops and parallel arrows are allowed."""

    name: str
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError(f"quiver {self.name}: duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError(f"quiver {self.name}: duplicate arrow names")
        vs = set(self.vertices)
        for a in self.arrows:
            for end in (a.tail, a.head):
                if end not in vs:
                    raise QuiverError(f"quiver {self.name}: arrow {a.name} uses unknown vertex {end}")

    @classmethod
    def build(cls, name: str, vertices: Iterable, arrows: Iterable[tuple] = ()) -> "Quiver":
        """``arrows`` are ``(name, tail, head)`` triples."""
        return cls(name, tuple(str(v) for v in vertices),
                   tuple(Arrow(str(n), str(t), str(h)) for n, t, h in arrows))

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> dict[str, int]:
        return {a.name: i for i, a in enumerate(self.arrows)}

    def arrow(self, name: str) -> Arrow:
        return self.arrows[self.arrow_index[name]]

    def is_connected(self) -> bool:
        return is_connected(self)

    def components(self) -> list[tuple[str, ...]]:
        """Vertex sets of the connected components, in declaration order."""
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a in self.arrows:
            parent[find(a.tail)] = find(a.head)
        groups: dict[str, list[str]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return [tuple(g) for g in groups.values()]

    def full_subquiver(self, vertices: Iterable[str], name: str | None = None) -> "Quiver":
        keep = set(vertices)
        return Quiver(name or f"{self.name}|sub",
                      tuple(v for v in self.vertices if v in keep),
                      tuple(a for a in self.arrows if a.tail in keep and a.head in keep))

    def opposite(self) -> "Quiver":
        return Quiver(f"{self.name}^op", self.vertices,
                      tuple(Arrow(a.name, a.head, a.tail) for a in self.arrows))

    def __str__(self):
        return self.name


def is_connected(q: Quiver) -> bool:
    """True iff ``q`` is nonempty and its underlying graph is connected."""
    return len(q.components()) == 1


# -- representations ----------------------------------------------------------

@dataclass(frozen=True)
class Representation:
    """A point of rep(Q, alpha): one matrix of shape ``alpha(ha) x alpha(ta)`` per arrow.

    ``dims`` and ``maps`` are aligned with ``quiver.vertices`` and
    ``quiver.arrows``.
    """

    quiver: Quiver
    field: Field
    dims: tuple[int, ...]
    maps: tuple[Matrix, ...]

    def __post_init__(self):
        q = self.quiver
        if len(self.dims) != len(q.vertices) or any(d < 0 for d in self.dims):
            raise QuiverError(f"dimension vector {self.dims} does not fit quiver {q.name}")
        if len(self.maps) != len(q.arrows):
            raise QuiverError(f"expected {len(q.arrows)} arrow matrices, got {len(self.maps)}")
        vi = q.vertex_index
        for a, m in zip(q.arrows, self.maps):
            shape = (self.dims[vi[a.head]], self.dims[vi[a.tail]])
            if m.shape != shape:
                raise QuiverError(f"arrow {a.name}: matrix is {m.nrows}x{m.ncols}, expected {shape[0]}x{shape[1]}")
            if m.field != self.field:
                raise QuiverError(f"arrow {a.name}: matrix over {m.field}, representation over {self.field}")

    @classmethod
    def build(cls, quiver: Quiver, field: Field, dims: Mapping[str, int] | Sequence[int],
              maps: Mapping[str, Matrix | Sequence[Sequence]] | None = None) -> "Representation":
        """Arrows missing from ``maps`` get zero matrices."""
        if isinstance(dims, Mapping):
            unknown = set(dims) - set(quiver.vertices)
            if unknown:
                raise QuiverError(f"unknown vertices {sorted(unknown)}")
            dims = tuple(int(dims.get(v, 0)) for v in quiver.vertices)
        else:
            dims = tuple(int(d) for d in dims)
        if len(dims) != len(quiver.vertices):
            raise QuiverError(f"dimension vector {dims} does not fit quiver {quiver.name}")
        maps = dict(maps or {})
        unknown = set(maps) - set(quiver.arrow_index)
        if unknown:
            raise QuiverError(f"unknown arrows {sorted(unknown)}")
        vi = quiver.vertex_index
        mats = []
        for a in quiver.arrows:
            r, c = dims[vi[a.head]], dims[vi[a.tail]]
            m = maps.get(a.name)
            if m is None:
                m = Matrix.zeros(field, r, c)
            elif not isinstance(m, Matrix):
                m = Matrix.from_rows(field, m, c) if r else Matrix.zeros(field, 0, c)
            mats.append(m)
        return cls(quiver, field, dims, tuple(mats))

    @classmethod
    def zero(cls, quiver: Quiver, field: Field, dims: Sequence[int] | None = None) -> "Representation":
        return cls.build(quiver, field, dims if dims is not None else (0,) * len(quiver.vertices))

    def dim(self, vertex: str) -> int:
        return self.dims[self.quiver.vertex_index[vertex]]

    def map(self, arrow: str) -> Matrix:
        return self.maps[self.quiver.arrow_index[arrow]]

    @property
    def dimv(self) -> dict[str, int]:
        return dict(zip(self.quiver.vertices, self.dims))

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def arrows_with_maps(self):
        """Yield ``(tail index, head index, matrix)`` per arrow."""
        vi = self.quiver.vertex_index
        for a, m in zip(self.quiver.arrows, self.maps):
            yield vi[a.tail], vi[a.head], m

    def _same_quiver(self, other: "Representation"):
        if other.quiver != self.quiver or other.field != self.field:
            raise QuiverError("representations live on different quivers or fields")


def identity_rep(quiver: Quiver, field: Field) -> Representation:
    """``K`` at every vertex, ``1`` over every arrow."""
    one = Matrix.identity(field, 1)
    return Representation(quiver, field, (1,) * len(quiver.vertices), (one,) * len(quiver.arrows))


def direct_sum(phi: Representation, psi: Representation) -> Representation:
    phi._same_quiver(psi)
    dims = tuple(a + b for a, b in zip(phi.dims, psi.dims))
    maps = tuple(block_diag(phi.field, [m, n]) for m, n in zip(phi.maps, psi.maps))
    return Representation(phi.quiver, phi.field, dims, maps)


def random_rep(quiver: Quiver, dims: Sequence[int], field: Field, seed) -> Representation:
    """Uniform entries over GF(p), integers in ``[-3, 3]`` over Q."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    vi = quiver.vertex_index
    dims = tuple(dims)
    maps = []
    for a in quiver.arrows:
        r, c = dims[vi[a.head]], dims[vi[a.tail]]
        rows = tuple(tuple(field.random_element(rng) for _ in range(c)) for _ in range(r))
        maps.append(Matrix(field, r, c, rows))
    return Representation(quiver, field, dims, tuple(maps))


def dual(phi: Representation) -> Representation:
    """Transpose every map; the result lives on the opposite quiver."""
    return Representation(phi.quiver.opposite(), phi.field, phi.dims, tuple(m.T for m in phi.maps))


# -- base change --------------------------------------------------------------

@dataclass(frozen=True)
class BaseChange:
    """An element of GL(alpha): one invertible matrix per vertex."""

    field: Field
    mats: tuple[Matrix, ...]

    def __post_init__(self):
        for g in self.mats:
            if not g.is_invertible():
                raise LinAlgError("base change matrices must be invertible")

    @classmethod
    def identity(cls, field: Field, dims: Sequence[int]) -> "BaseChange":
        return cls(field, tuple(Matrix.identity(field, d) for d in dims))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(g.nrows for g in self.mats)

    def __matmul__(self, other: "BaseChange") -> "BaseChange":
        return BaseChange(self.field, tuple(g @ h for g, h in zip(self.mats, other.mats)))

    def inverse(self) -> "BaseChange":
        return BaseChange(self.field, tuple(g.inverse() for g in self.mats))


def random_base_change(dims: Sequence[int], field: Field, seed) -> BaseChange:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    mats = []
    for d in dims:
        while True:
            g = Matrix(field, d, d, tuple(tuple(field.random_element(rng) for _ in range(d)) for _ in range(d)))
            if g.is_invertible():
                break
        mats.append(g)
    return BaseChange(field, tuple(mats))


def apply_base_change(g: BaseChange, phi: Representation) -> Representation:
    """``phi_a -> g_ha phi_a g_ta^-1`` over every arrow."""
    if g.dims != phi.dims or g.field != phi.field:
        raise QuiverError(f"base change of size {g.dims} does not match dimension vector {phi.dims}")
    inv = [m.inverse() for m in g.mats]
    maps = tuple(g.mats[h] @ m @ inv[t] for t, h, m in phi.arrows_with_maps())
    return Representation(phi.quiver, phi.field, phi.dims, maps)


# -- quiver morphisms ---------------------------------------------------------

@dataclass(frozen=True)
class QuiverMorphism:
    """A map ``source -> target`` sending vertices to vertices and arrows to arrows.

    ``vertex_map`` and ``arrow_map`` are aligned with the source quiver's
    vertices and arrows and hold target names.
    """

    source: Quiver
    target: Quiver
    vertex_map: tuple[str, ...]
    arrow_map: tuple[str, ...]

    def __post_init__(self):
        src, dst = self.source, self.target
        if len(self.vertex_map) != len(src.vertices) or len(self.arrow_map) != len(src.arrows):
            raise QuiverError("morphism must assign every source vertex and arrow")
        for x, y in zip(src.vertices, self.vertex_map):
            if y not in dst.vertex_index:
                raise QuiverError(f"vertex {x} maps to {y}, which is not a vertex of {dst.name}")
        for b, a in zip(src.arrows, self.arrow_map):
            if a not in dst.arrow_index:
                raise QuiverError(f"arrow {b.name} maps to {a}, which is not an arrow of {dst.name}")
            fa = dst.arrow(a)
            if self.vertex(b.tail) != fa.tail or self.vertex(b.head) != fa.head:
                raise QuiverError(f"arrow {b.name}: endpoints not compatible with its image {a}")

    @classmethod
    def build(cls, source: Quiver, target: Quiver, vertex_map: Mapping[str, str],
              arrow_map: Mapping[str, str]) -> "QuiverMorphism":
        missing = [v for v in source.vertices if v not in vertex_map]
        missing += [a.name for a in source.arrows if a.name not in arrow_map]
        if missing:
            raise QuiverError(f"morphism leaves {missing} unassigned")
        return cls(source, target, tuple(str(vertex_map[v]) for v in source.vertices),
                   tuple(str(arrow_map[a.name]) for a in source.arrows))

    @classmethod
    def identity(cls, q: Quiver) -> "QuiverMorphism":
        return cls(q, q, q.vertices, tuple(a.name for a in q.arrows))

    @classmethod
    def inclusion(cls, sub: Quiver, q: Quiver) -> "QuiverMorphism":
        """Inclusion of a subquiver sharing vertex and arrow names."""
        return cls(sub, q, sub.vertices, tuple(a.name for a in sub.arrows))

    def vertex(self, x: str) -> str:
        return self.vertex_map[self.source.vertex_index[x]]

    def arrow(self, b: str) -> str:
        return self.arrow_map[self.source.arrow_index[b]]

    def fiber(self, x: str) -> list[str]:
        """Source vertices over ``x`` in declaration order."""
        return [y for y, fy in zip(self.source.vertices, self.vertex_map) if fy == x]

    def then(self, g: "QuiverMorphism") -> "QuiverMorphism":
        """The composite ``g . self``."""
        if g.source != self.target:
            raise QuiverError("morphisms are not composable")
        return QuiverMorphism(self.source, g.target,
                              tuple(g.vertex(y) for y in self.vertex_map),
                              tuple(g.arrow(a) for a in self.arrow_map))


def pullback(f: QuiverMorphism, psi: Representation) -> Representation:
    """``f^* psi``: re-index ``psi`` along ``f``."""
    if psi.quiver != f.target:
        raise QuiverError(f"pullback along {f.source.name}->{f.target.name} of a representation of {psi.quiver.name}")
    dims = tuple(psi.dim(y) for y in f.vertex_map)
    maps = tuple(psi.map(a) for a in f.arrow_map)
    return Representation(f.source, psi.field, dims, maps)


def pushforward(f: QuiverMorphism, phi: Representation) -> Representation:
    """``f_* phi``: direct sums over vertex fibers, block-summed maps over arrow fibers."""
    if phi.quiver != f.source:
        raise QuiverError(f"pushforward along {f.source.name}->{f.target.name} of a representation of {phi.quiver.name}")
    src, dst, field = f.source, f.target, phi.field
    offset = {}
    dims = []
    for x in dst.vertices:
        total = 0
        for y in f.fiber(x):
            offset[y] = total
            total += phi.dim(y)
        dims.append(total)
    vi = dst.vertex_index
    blocks: dict[str, list[list]] = {}
    for a in dst.arrows:
        blocks[a.name] = [[field.zero] * dims[vi[a.tail]] for _ in range(dims[vi[a.head]])]
    p = field.characteristic
    for b, m in zip(src.arrows, phi.maps):
        out = blocks[f.arrow(b.name)]
        r0, c0 = offset[b.head], offset[b.tail]
        for i, row in enumerate(m.rows):
            target = out[r0 + i]
            for j, x in enumerate(row):
                if x:
                    s = target[c0 + j] + x
                    target[c0 + j] = s % p if p else s
    maps = tuple(Matrix(field, len(blocks[a.name]), dims[vi[a.tail]],
                        tuple(tuple(r) for r in blocks[a.name])) for a in dst.arrows)
    return Representation(dst, field, tuple(dims), maps)
