"""Quiver Grassmannians over GF(q) and the Kronecker string modules P_n, R_n, I_n.

The strata ``X_d`` of ``Gr_beta(R_n)`` are computed twice: once from rank
functions along the strings ``r_d``, ``p_d``, ``i_d`` and once from
Hom-dimensions, which serve as an independent oracle for the integers
``k(U)`` and ``k'(U)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterator, Sequence

from .linalg import Field, Matrix, QQ, Subspace, _rref_rows
from .loci import BudgetExceeded, _check_budget, _run, enumerate_reps, rep_space_size
from .quiver import Quiver, QuiverError, QuiverMorphism, Representation, identity_rep, pushforward
from .rank import RankChain, SubRepresentation, eval_chain

__all__ = [
    "GrassmannianPoint", "gaussian_binomial", "gaussian_binomial_candidates",
    "enumerate_subspaces", "quiver_grassmannian", "kronecker_quiver", "KroneckerModule",
    "string_morphism", "string_module", "hom_dim", "k_invariants", "StrataReport", "strata",
    "sub_bundle_points",
]

GrassmannianPoint = SubRepresentation


def gaussian_binomial(n: int, r: int, q: int) -> int:
    """Number of ``r``-dimensional subspaces of ``GF(q)**n``."""
    if r < 0 or r > n:
        return 0
    num = den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def gaussian_binomial_candidates(value: int, q: int, max_n: int = 8) -> list[tuple[int, int]]:
    """All ``(m, r)`` with ``0 <= r <= m <= max_n`` and ``[m choose r]_q == value``."""
    return [(m, r) for m in range(max_n + 1) for r in range(m + 1) if gaussian_binomial(m, r, q) == value]


def enumerate_subspaces(n: int, r: int, field: Field, limit: int | None = None) -> Iterator[Subspace]:
    """Every ``r``-dimensional subspace of ``field**n`` exactly once.

    Ordered lexicographically by pivot pattern, then by the free entries.
    """
    if not field.is_finite:
        raise ValueError("enumeration needs a finite field")
    if not 0 <= r <= n:
        return
    _check_budget(gaussian_binomial(n, r, field.characteristic), limit, "Grassmannian")
    one, zero = field.one, field.zero
    for pivots in itertools.combinations(range(n), r):
        pset = set(pivots)
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pset]
        for values in itertools.product(field.elements(), repeat=len(free)):
            rows = [[zero] * n for _ in range(r)]
            for i, p in enumerate(pivots):
                rows[i][p] = one
            for (i, j), x in zip(free, values):
                rows[i][j] = x
            yield Subspace(field, n, tuple(tuple(row) for row in rows), pivots)


def _stable(phi: Representation, spaces: Sequence[Subspace]) -> bool:
    for t, h, m in phi.arrows_with_maps():
        wh = spaces[h]
        for b in spaces[t].basis:
            if any(wh.reduce(m.apply(b))):
                return False
    return True


def quiver_grassmannian(phi: Representation, beta: Sequence[int], limit: int | None = None) -> list[GrassmannianPoint]:
    """All subrepresentations of ``phi`` with dimension vector ``beta``."""
    beta = tuple(beta)
    if len(beta) != len(phi.dims) or any(b < 0 or b > d for b, d in zip(beta, phi.dims)):
        raise ValueError(f"beta={beta} is not <= dimv={phi.dims}")
    q = phi.field.characteristic
    if not q:
        raise ValueError("enumeration needs a finite field")
    count = 1
    for d, b in zip(phi.dims, beta):
        count *= gaussian_binomial(d, b, q)
    _check_budget(count, limit, "quiver Grassmannian candidates")
    grids = [list(enumerate_subspaces(d, b, phi.field, limit=float("inf"))) for d, b in zip(phi.dims, beta)]
    return [SubRepresentation(phi, ws) for ws in itertools.product(*grids) if _stable(phi, ws)]


def sub_bundle_points(quiver: Quiver, alpha: Sequence[int], beta: Sequence[int], field: Field,
                      limit: int | None = None) -> Iterator[tuple[tuple[Subspace, ...], Representation]]:
    """All pairs ``(W, phi)`` with ``phi_a(W_ta) <= W_ha`` for every arrow."""
    alpha, beta = tuple(alpha), tuple(beta)
    q = field.characteristic
    count = rep_space_size(quiver, alpha, field)
    for d, b in zip(alpha, beta):
        count *= gaussian_binomial(d, b, q)
    _check_budget(count, limit, "subrepresentation bundle")
    grids = [list(enumerate_subspaces(d, b, field, limit=float("inf"))) for d, b in zip(alpha, beta)]
    reps = list(enumerate_reps(quiver, alpha, field, limit=float("inf")))
    for ws in itertools.product(*grids):
        for phi in reps:
            if _stable(phi, ws):
                yield ws, phi


# -- Kronecker strings --------------------------------------------------------

@lru_cache(maxsize=None)
def kronecker_quiver() -> Quiver:
    return Quiver.build("K2", ["1", "2"], [("a", "1", "2"), ("b", "1", "2")])


@lru_cache(maxsize=None)
def string_morphism(kind: str, n: int) -> QuiverMorphism:
    """The labelling map from a string quiver to the Kronecker quiver.

    ``P``: ``2 <-b 1 -a-> 2 <-b ... -a-> 2`` with ``n`` vertices over 1.
    ``R``: the same string with its first ``2`` and ``b`` removed.
    ``I``: ``1 -a-> 2 <-b 1 -a-> ... <-b 1`` with ``n + 1`` vertices over 1,
    the string obtained from ``P`` by reversing arrows and exchanging the
    two vertex labels.
    """
    verts: list[str] = []
    arrows: list[tuple[str, str, str]] = []
    if kind == "P":
        if n < 0:
            raise ValueError("P_n needs n >= 0")
        verts.append("y0")
        for i in range(1, n + 1):
            verts += [f"x{i}", f"y{i}"]
            arrows += [(f"b{i}", f"x{i}", f"y{i - 1}"), (f"a{i}", f"x{i}", f"y{i}")]
    elif kind == "R":
        if n < 1:
            raise ValueError("R_n needs n >= 1")
        for i in range(1, n + 1):
            verts += [f"x{i}", f"y{i}"]
            if i > 1:
                arrows.append((f"b{i}", f"x{i}", f"y{i - 1}"))
            arrows.append((f"a{i}", f"x{i}", f"y{i}"))
    elif kind == "I":
        if n < 0:
            raise ValueError("I_n needs n >= 0")
        verts.append("x0")
        for i in range(1, n + 1):
            verts += [f"y{i}", f"x{i}"]
            arrows += [(f"a{i}", f"x{i - 1}", f"y{i}"), (f"b{i}", f"x{i}", f"y{i}")]
    else:
        raise ValueError(f"string kind must be P, R or I, not {kind!r}")
    string = Quiver.build(f"{kind.lower()}{n}", verts, arrows)
    return QuiverMorphism.build(string, kronecker_quiver(),
                                {v: "1" if v[0] == "x" else "2" for v in verts},
                                {a: a[0] for a, _, _ in arrows})


@dataclass(frozen=True)
class KroneckerModule:
    kind: str
    n: int
    morphism: QuiverMorphism
    rep: Representation


@lru_cache(maxsize=None)
def string_module(kind: str, n: int, field: Field = QQ) -> KroneckerModule:
    """``P_n``, ``R_n`` or ``I_n`` as the pushforward of the all-identity string."""
    f = string_morphism(kind, n)
    rep = pushforward(f, identity_rep(f.source, field))
    expected = {"P": (n, n + 1), "R": (n, n), "I": (n + 1, n)}[kind]
    if rep.dims != expected:
        raise AssertionError(f"{kind}_{n} has dimension vector {rep.dims}, expected {expected}")
    return KroneckerModule(kind, n, f, rep)


def hom_dim(phi: Representation, psi: Representation) -> int:
    """Dimension of the space of morphisms ``phi -> psi``.

    Solves ``h_ha phi_a = psi_a h_ta`` for all arrows as one linear system.
    """
    if phi.quiver != psi.quiver or phi.field != psi.field:
        raise QuiverError("hom_dim needs representations of the same quiver over the same field")
    f = phi.field
    p = f.characteristic
    offset = []
    nvars = 0
    for dphi, dpsi in zip(phi.dims, psi.dims):
        offset.append(nvars)
        nvars += dphi * dpsi

    def var(x, i, k):  # entry (i, k) of h_x, a dpsi x dphi matrix
        return offset[x] + i * phi.dims[x] + k

    rows = []
    for (t, h, A), B in zip(phi.arrows_with_maps(), psi.maps):
        for i in range(psi.dims[h]):
            for j in range(phi.dims[t]):
                row = [f.zero] * nvars
                for k in range(phi.dims[h]):
                    row[var(h, i, k)] += A.rows[k][j]
                for k in range(psi.dims[t]):
                    row[var(t, k, j)] -= B.rows[i][k]
                if p:
                    row = [x % p for x in row]
                rows.append(row)
    return nvars - len(_rref_rows(f, rows, nvars))


def _regular_index(parent: Representation) -> int:
    n = parent.dims[0]
    if parent.quiver != kronecker_quiver() or parent.dims != (n, n) or n < 1 \
            or parent != string_module("R", n, parent.field).rep:
        raise QuiverError("ambient module is not R_n")
    return n


def k_invariants(U: GrassmannianPoint) -> tuple[int, int]:
    """``(k(U), k'(U))`` for a submodule ``U`` of ``R_n``.

    With ``U = P + R_k`` and ``R_n/U = I + R_k'``, Hom from a regular module
    to a preprojective one vanishes, as does Hom from a preinjective to a
    regular one, so ``k = dim Hom(R_n, U)`` and ``k' = dim Hom(R_n/U, R_n)``.
    """
    Rn = U.parent
    _regular_index(Rn)
    return hom_dim(Rn, U.restriction()), hom_dim(U.quotient(), Rn)


# -- strata -------------------------------------------------------------------

def _chain(kind: str, d: int) -> RankChain:
    return RankChain.pulled(string_morphism(kind, d), name=f"{kind.lower()}{d}")


def _rank_route(sub: Representation, quo: Representation, d: int) -> tuple[int, int, int, int]:
    return (eval_chain(_chain("R", d), sub), eval_chain(_chain("P", d), sub),
            eval_chain(_chain("R", d), quo), eval_chain(_chain("I", d), quo))


@dataclass
class StrataReport:
    n: int
    beta: tuple[int, int]
    q: int
    points: list[dict] = dc_field(default_factory=list)
    counts: dict[int, int] = dc_field(default_factory=dict)
    open_counts: dict[int, int] = dc_field(default_factory=dict)
    disagreements: list[dict] = dc_field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.points)

    def is_filtration(self) -> bool:
        """``X_{d+1} <= X_d`` for every ``d``."""
        return all(d - 1 in p["members"] for p in self.points for d in p["members"] if d)

    def to_json(self, with_points: bool = False) -> dict:
        out = {
            "n": self.n,
            "beta": list(self.beta),
            "q": self.q,
            "total": str(self.total),
            "strata": [
                {"d": d, "count_Xd": str(self.counts[d]), "count_open_stratum": str(self.open_counts[d]),
                 "gaussian_binomial_candidates": [list(c) for c in
                                                  gaussian_binomial_candidates(self.open_counts[d], self.q, 2 * self.n + 2)]}
                for d in sorted(self.counts)
            ],
            "disagreements": self.disagreements,
        }
        if with_points:
            out["points"] = self.points
        return out


def _assess(args) -> tuple[dict, list[dict]]:
    idx, U, n = args
    sub, quo = U.restriction(), U.quotient()
    k, kp = k_invariants(U)
    findings = []
    members = [0]
    for d in range(1, n + 2):
        rr, rp, qr, qi = _rank_route(sub, quo, d)
        for diff, label in ((rr - rp, "sub"), (qr - qi, "quotient")):
            if diff not in (0, 1):
                findings.append({"point": idx, "d": d, "kind": f"difference-bound-{label}", "value": diff})
        by_rank = (rr == rp + 1, qr == qi + 1)
        by_hom = (k >= d, kp >= d)
        if by_rank != by_hom:
            findings.append({"point": idx, "d": d, "kind": "route-mismatch",
                             "rank_route": list(by_rank), "hom_route": list(by_hom),
                             "witness": [[list(map(str, b)) for b in w.basis] for w in U.spaces]})
        if all(by_rank):
            members.append(d)
    point = {"index": idx, "k": k, "k_prime": kp, "members": members,
             "spaces": [[list(map(str, b)) for b in w.basis] for w in U.spaces]}
    return point, findings


def strata(n: int, beta: Sequence[int], field: Field, jobs: int = 1, limit: int | None = None) -> StrataReport:
    """Assign every point of ``Gr_beta(R_n)`` to the strata ``X_d``, ``0 <= d <= n + 1``.

    Membership in ``X_d`` is decided by rank functions
    (``rank_{r_d}(U) = rank_{p_d}(U) + 1`` and
    ``rank_{r_d}(V/U) = rank_{i_d}(V/U) + 1``) and by Hom-dimensions
    (``k(U), k'(U) >= d``); every mismatch is reported.  ``X_0`` is the whole
    Grassmannian.
    """
    Rn = string_module("R", n, field).rep
    points = quiver_grassmannian(Rn, beta, limit)
    report = StrataReport(n, tuple(beta), field.characteristic)
    chunks = [[(i, U, n) for i, U in enumerate(points)][a::max(jobs, 1)] for a in range(max(jobs, 1))]
    results = sorted((r for chunk in _run(_assess_many, chunks, jobs) for r in chunk),
                     key=lambda r: r[0]["index"])
    for point, findings in results:
        report.points.append(point)
        report.disagreements.extend(findings)
    for d in range(n + 2):
        report.counts[d] = sum(1 for p in report.points if d in p["members"])
        report.open_counts[d] = sum(1 for p in report.points if d in p["members"] and d + 1 not in p["members"])
    return report


def _assess_many(chunk):
    return [_assess(args) for args in chunk]
