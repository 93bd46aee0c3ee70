"""Rank functors: the epimorphic core, the injective quotient, global rank.

``sigma`` and ``iota_kernel`` compute their universal objects as fixed points
of arrow-by-arrow sweeps.  Each non-final sweep changes the total dimension,
so at most ``total_dim + 1`` sweeps are needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import (
    Matrix, Subspace, induced_matrix, intersect, image, kernel, map_subspace,
    preimage, quotient_matrix, rank_through,
)
from .quiver import (
    Quiver, QuiverError, QuiverMorphism, Representation, pullback, pushforward,
)

__all__ = [
    "SubRepresentation", "RankChain", "DisconnectedQuiverError", "VertexRankDisagreement",
    "sigma", "iota_kernel", "iota", "vertex_ranks", "global_rank", "component_ranks",
    "rank_rep", "eval_chain", "oracle_a3", "oracle_nsubspace", "oracle_doubleloop",
]


class DisconnectedQuiverError(QuiverError):
    pass


class VertexRankDisagreement(AssertionError):
    """Per-vertex ranks differ on a connected quiver.  Always a bug."""

    def __init__(self, phi: Representation, ranks: Sequence[int]):
        self.phi, self.ranks = phi, tuple(ranks)
        super().__init__(f"vertex ranks disagree: {dict(zip(phi.quiver.vertices, ranks))}")


@dataclass(frozen=True)
class SubRepresentation:
    """Subspaces ``W_x`` of the parent's vertex spaces with ``phi_a(W_ta) <= W_ha``."""

    parent: Representation
    spaces: tuple[Subspace, ...]

    def __post_init__(self):
        phi = self.parent
        if len(self.spaces) != len(phi.dims):
            raise QuiverError("one subspace per vertex is required")
        for w, d in zip(self.spaces, phi.dims):
            if w.ambient_dim != d or w.field != phi.field:
                raise QuiverError("subspace does not live in the vertex space")
        for (t, h, m), a in zip(phi.arrows_with_maps(), phi.quiver.arrows):
            ws = self.spaces[h]
            if any(any(ws.reduce(m.apply(b))) for b in self.spaces[t].basis):
                raise QuiverError(f"arrow {a.name} does not map W_{a.tail} into W_{a.head}")

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(w.dim for w in self.spaces)

    @property
    def dimv(self) -> dict[str, int]:
        return dict(zip(self.parent.quiver.vertices, self.dims))

    def space(self, vertex: str) -> Subspace:
        return self.spaces[self.parent.quiver.vertex_index[vertex]]

    def restriction(self) -> Representation:
        """``phi|_W`` in the stored bases of the ``W_x``."""
        phi = self.parent
        maps = tuple(induced_matrix(m, self.spaces[t], self.spaces[h]) for t, h, m in phi.arrows_with_maps())
        return Representation(phi.quiver, phi.field, self.dims, maps)

    def quotient(self) -> Representation:
        """``phi/W``; each quotient space has the unit vectors at the free columns of ``W_x`` as basis."""
        phi = self.parent
        maps = tuple(quotient_matrix(m, self.spaces[t], self.spaces[h]) for t, h, m in phi.arrows_with_maps())
        dims = tuple(d - w.dim for d, w in zip(phi.dims, self.spaces))
        return Representation(phi.quiver, phi.field, dims, maps)

    def is_epimorphic(self) -> bool:
        return all(map_subspace(m, self.spaces[t]) == self.spaces[h]
                   for t, h, m in self.parent.arrows_with_maps())


def _ordered_arrows(phi: Representation, arrow_order: Sequence[str] | None):
    arrows = list(phi.arrows_with_maps())
    if arrow_order is None:
        return arrows
    idx = phi.quiver.arrow_index
    if sorted(arrow_order) != sorted(idx):
        raise QuiverError("arrow_order must list every arrow once")
    return [arrows[idx[a]] for a in arrow_order]


def _sigma_spaces(phi: Representation, arrow_order=None) -> tuple[list[Subspace], int]:
    f = phi.field
    W = [Subspace.full(f, d) for d in phi.dims]
    arrows = _ordered_arrows(phi, arrow_order)
    for sweep in range(1, phi.total_dim + 2):
        changed = False
        for t, h, m in arrows:
            new = intersect(W[h], map_subspace(m, W[t]))
            if new.dim != W[h].dim:
                W[h], changed = new, True
            new = intersect(W[t], preimage(m, W[h]))
            if new.dim != W[t].dim:
                W[t], changed = new, True
        if not changed:
            return W, sweep
    raise AssertionError("sigma sweep exceeded its termination bound")


def _iota_spaces(phi: Representation, arrow_order=None) -> tuple[list[Subspace], int]:
    f = phi.field
    U = [Subspace.zero(f, d) for d in phi.dims]
    arrows = _ordered_arrows(phi, arrow_order)
    for sweep in range(1, phi.total_dim + 2):
        changed = False
        for t, h, m in arrows:
            new = U[t] + preimage(m, U[h])
            if new.dim != U[t].dim:
                U[t], changed = new, True
            new = U[h] + map_subspace(m, U[t])
            if new.dim != U[h].dim:
                U[h], changed = new, True
        if not changed:
            return U, sweep
    raise AssertionError("iota sweep exceeded its termination bound")


def sigma(phi: Representation, arrow_order: Sequence[str] | None = None) -> SubRepresentation:
    """The largest subrepresentation on which every arrow map is onto."""
    return SubRepresentation(phi, tuple(_sigma_spaces(phi, arrow_order)[0]))


def iota_kernel(phi: Representation, arrow_order: Sequence[str] | None = None) -> SubRepresentation:
    """The smallest subrepresentation ``U`` such that ``phi/U`` has injective maps."""
    return SubRepresentation(phi, tuple(_iota_spaces(phi, arrow_order)[0]))


def iota(phi: Representation) -> Representation:
    """The largest quotient of ``phi`` with injective maps."""
    return iota_kernel(phi).quotient()


def vertex_ranks(phi: Representation) -> tuple[int, ...]:
    """Rank of ``Sigma(phi)_x -> V_x -> Iota(phi)_x`` at every vertex."""
    S, _ = _sigma_spaces(phi)
    U, _ = _iota_spaces(phi)
    return tuple(rank_through(s, u) for s, u in zip(S, U))


def _require_connected(q: Quiver):
    if not q.is_connected():
        raise DisconnectedQuiverError(f"quiver {q.name} is not connected")


def global_rank(phi: Representation) -> int:
    _require_connected(phi.quiver)
    ranks = vertex_ranks(phi)
    if len(set(ranks)) != 1:
        raise VertexRankDisagreement(phi, ranks)
    return ranks[0]


def component_ranks(phi: Representation) -> list[int]:
    """Global rank of the restriction to each connected component."""
    q = phi.quiver
    out = []
    for comp in q.components():
        sub = q.full_subquiver(comp)
        out.append(global_rank(pullback(QuiverMorphism.inclusion(sub, q), phi)))
    return out


def rank_rep(phi: Representation) -> Representation:
    """The image ``R(phi)`` of ``Sigma(phi) -> phi -> Iota(phi)``.

    The space at ``x`` is realized inside ``Sigma_x`` as the span of the
    ``Sigma_x`` basis reduced modulo ``Sigma_x & U_x``.
    """
    _require_connected(phi.quiver)
    S, _ = _sigma_spaces(phi)
    U, _ = _iota_spaces(phi)
    f = phi.field
    meets = [intersect(s, u) for s, u in zip(S, U)]
    comps = [Subspace.span(f, s.ambient_dim, [i.reduce(b) for b in s.basis]) for s, i in zip(S, meets)]
    maps = []
    for t, h, m in phi.arrows_with_maps():
        cols = [comps[h].coordinates(meets[h].reduce(m.apply(c))) for c in comps[t].basis]
        maps.append(Matrix.from_columns(f, cols, comps[h].dim))
    rep = Representation(phi.quiver, f, tuple(c.dim for c in comps), tuple(maps))
    if len(set(rep.dims)) != 1:
        raise VertexRankDisagreement(phi, rep.dims)
    return rep


# -- chains -------------------------------------------------------------------

@dataclass(frozen=True)
class RankChain:
    """A sequence of push/pull steps starting on ``start``.

    A ``push`` step's morphism maps the current quiver into the next one; a
    ``pull`` step's morphism maps the next quiver into the current one.
    """

    start: Quiver
    steps: tuple[tuple[QuiverMorphism, str], ...] = ()
    name: str = ""

    def __post_init__(self):
        q = self.start
        for i, (f, d) in enumerate(self.steps):
            if d == "push":
                if f.source != q:
                    raise QuiverError(f"step {i}: push morphism does not start at {q.name}")
                q = f.target
            elif d == "pull":
                if f.target != q:
                    raise QuiverError(f"step {i}: pull morphism does not end at {q.name}")
                q = f.source
            else:
                raise QuiverError(f"step {i}: direction must be push or pull, not {d!r}")
        _require_connected(q)

    @classmethod
    def pulled(cls, f: QuiverMorphism, name: str = "") -> "RankChain":
        """``rank_f``: pull back along ``f`` then take global rank."""
        return cls(f.target, ((f, "pull"),), name)

    @classmethod
    def pushed(cls, f: QuiverMorphism, name: str = "") -> "RankChain":
        """``rank^f``: push forward along ``f`` then take global rank."""
        return cls(f.source, ((f, "push"),), name)

    @property
    def end(self) -> Quiver:
        if not self.steps:
            return self.start
        f, d = self.steps[-1]
        return f.target if d == "push" else f.source

    def transport(self, phi: Representation) -> Representation:
        if phi.quiver != self.start:
            raise QuiverError(f"chain starts at {self.start.name}, representation lives on {phi.quiver.name}")
        for f, d in self.steps:
            phi = pushforward(f, phi) if d == "push" else pullback(f, phi)
        return phi


def eval_chain(chain: RankChain, phi: Representation) -> int:
    return global_rank(chain.transport(phi))


# -- closed-form oracles ------------------------------------------------------

def oracle_a3(A: Matrix, B: Matrix) -> int:
    """``dim(im A & im B)`` for ``K^n -A-> K^m <-B- K^r``."""
    if A.nrows != B.nrows:
        raise ValueError("A and B must share their target")
    return intersect(image(A), image(B)).dim


def oracle_nsubspace(maps: Sequence[Matrix]) -> int:
    """``dim`` of the intersection of the images of the maps into the centre."""
    if not maps:
        raise ValueError("at least one map is required")
    if len({m.nrows for m in maps}) != 1:
        raise ValueError("maps must share their target")
    out = image(maps[0])
    for m in maps[1:]:
        out = intersect(out, image(m))
    return out.dim


def _largest_stable(start: Subspace, mats: Sequence[Matrix]) -> Subspace:
    W = start
    while True:
        new = W
        for m in mats:
            new = intersect(new, preimage(m, W))
        if new == W:
            return W
        W = new


def _smallest_stable(start: Subspace, mats: Sequence[Matrix]) -> Subspace:
    S = start
    while True:
        new = S
        for m in mats:
            new = new + map_subspace(m, S)
        if new == S:
            return S
        S = new


def oracle_doubleloop(A: Matrix, B: Matrix) -> int:
    """Global rank of the double loop from Fitting decompositions of ``A`` and ``B``.

    ``L`` is the largest ``A,B``-stable subspace of the joint nonzero-eigenvalue
    part, ``S`` the smallest ``A,B``-stable subspace containing both
    generalized 0-eigenspaces; the rank is ``dim L - dim(L & S)``.
    """
    n = A.nrows
    if A.shape != (n, n) or B.shape != (n, n):
        raise ValueError("A and B must be square of equal size")
    An, Bn = A ** n, B ** n
    L = _largest_stable(intersect(image(An), image(Bn)), (A, B))
    S = _smallest_stable(kernel(An) + kernel(Bn), (A, B))
    return L.dim - intersect(L, S).dim
