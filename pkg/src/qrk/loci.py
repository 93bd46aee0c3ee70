"""Rank-locus predicates, censuses of rep(Q, alpha) over GF(q), type-A multiplicities."""
from __future__ import annotations

import itertools
import operator
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

from .linalg import Field, Matrix
from .quiver import Quiver, QuiverError, QuiverMorphism, Representation, random_rep
from .rank import RankChain, _iota_spaces, _sigma_spaces, eval_chain, global_rank

__all__ = [
    "BudgetExceeded", "DEFAULT_BUDGET", "budget", "Constraint", "RankLocusPredicate",
    "eval_locus", "rep_space_size", "enumerate_reps", "CensusTable", "census", "classify",
    "path_order", "interval_morphism", "interval_module", "typea_rank",
    "typea_multiplicities",
]

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    pass


def budget() -> int:
    """Enumeration budget; ``QRK_BUDGET`` overrides the default of 10**7."""
    return int(os.environ.get("QRK_BUDGET", DEFAULT_BUDGET))


# -- predicates ---------------------------------------------------------------

_RELATIONS = {
    "=": operator.eq, "==": operator.eq, "!=": operator.ne, "≠": operator.ne,
    "<=": operator.le, "≤": operator.le, "<": operator.lt,
    ">=": operator.ge, "≥": operator.ge, ">": operator.gt,
}


@dataclass(frozen=True)
class Constraint:
    """``sum(c_i * r_i) <relation> constant``."""

    coeffs: tuple[int, ...]
    relation: str
    constant: int = 0

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")

    def holds(self, values: Sequence[int]) -> bool:
        lhs = sum(c * v for c, v in zip(self.coeffs, values))
        return _RELATIONS[self.relation](lhs, self.constant)


@dataclass(frozen=True)
class RankLocusPredicate:
    chains: tuple[RankChain, ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if not self.constraints:
            raise ValueError("a rank locus needs at least one constraint")
        for c in self.constraints:
            if len(c.coeffs) != len(self.chains):
                raise ValueError(f"constraint has {len(c.coeffs)} coefficients for {len(self.chains)} chains")
        if len({ch.start for ch in self.chains}) > 1:
            raise QuiverError("all chains of a predicate must start on the same quiver")


def eval_locus(pred: RankLocusPredicate, phi: Representation) -> bool:
    values = [eval_chain(c, phi) for c in pred.chains]
    return all(c.holds(values) for c in pred.constraints)


# -- enumeration --------------------------------------------------------------

def _shapes(quiver: Quiver, dims: Sequence[int]) -> list[tuple[int, int]]:
    vi = quiver.vertex_index
    return [(dims[vi[a.head]], dims[vi[a.tail]]) for a in quiver.arrows]


def rep_space_size(quiver: Quiver, dims: Sequence[int], field: Field) -> int:
    """``q**N`` with ``N = sum_a alpha(ta) alpha(ha)``."""
    return field.characteristic ** sum(r * c for r, c in _shapes(quiver, dims))


def _check_budget(count: int, limit: int | None, what: str):
    limit = budget() if limit is None else limit
    if count > limit:
        raise BudgetExceeded(f"{what}: {count} points exceed the budget of {limit}")


def enumerate_reps(quiver: Quiver, dims: Sequence[int], field: Field, limit: int | None = None,
                   start: int = 0, stop: int | None = None) -> Iterator[Representation]:
    """Every point of rep(alpha) over a finite field, in odometer order.

    Entries are read arrow by arrow, row-major; the last entry turns fastest.
    ``start``/``stop`` select a contiguous index range of that order.
    """
    if not field.is_finite:
        raise ValueError("enumeration needs a finite field")
    dims = tuple(dims)
    _check_budget(rep_space_size(quiver, dims, field), limit, "rep space")
    shapes = _shapes(quiver, dims)
    n = sum(r * c for r, c in shapes)
    for entries in itertools.islice(itertools.product(field.elements(), repeat=n), start, stop):
        maps = []
        k = 0
        for r, c in shapes:
            maps.append(Matrix(field, r, c, tuple(entries[k + i * c:k + (i + 1) * c] for i in range(r))))
            k += r * c
        yield Representation(quiver, field, dims, tuple(maps))


# -- census -------------------------------------------------------------------

def classify(phi: Representation, chains: Sequence[RankChain] = ()) -> tuple:
    """``(dimv Sigma, dimv Iota, chain values)`` of one point."""
    S, _ = _sigma_spaces(phi)
    U, _ = _iota_spaces(phi)
    beta = tuple(s.dim for s in S)
    gamma = tuple(d - u.dim for d, u in zip(phi.dims, U))
    return beta, gamma, tuple(eval_chain(c, phi) for c in chains)


@dataclass
class CensusTable:
    field: Field
    dims: tuple[int, ...]
    mode: str
    counts: dict[tuple, int] = dc_field(default_factory=dict)
    total: int = 0
    exact: bool = True
    seed: int | None = None

    def merge(self, other: dict[tuple, int]) -> None:
        for k, v in other.items():
            self.counts[k] = self.counts.get(k, 0) + v
            self.total += v

    def count(self, sigma_dim=None, iota_dim=None, values=None) -> int:
        """Total over classes matching every given key component."""
        return sum(v for (b, g, vals), v in self.counts.items()
                   if (sigma_dim is None or b == tuple(sigma_dim))
                   and (iota_dim is None or g == tuple(iota_dim))
                   and (values is None or vals == tuple(values)))

    def to_json(self) -> dict:
        out = {
            "field": self.field.name,
            "dim": list(self.dims),
            "mode": self.mode,
            "classes": [
                {"sigma_dim": list(b), "iota_dim": list(g), "values": list(v), "count": str(c)}
                for (b, g, v), c in sorted(self.counts.items())
            ],
            "total": str(self.total),
        }
        if not self.exact:
            out["exact"] = False
            out["sample_size"] = str(self.total)
            out["seed"] = self.seed
        return out


def _census_shard(args) -> dict[tuple, int]:
    quiver, dims, field, chains, start, stop = args
    counts: dict[tuple, int] = {}
    for phi in enumerate_reps(quiver, dims, field, limit=float("inf"), start=start, stop=stop):
        k = classify(phi, chains)
        counts[k] = counts.get(k, 0) + 1
    return counts


def _sample_shard(args) -> dict[tuple, int]:
    quiver, dims, field, chains, seed, start, stop = args
    counts: dict[tuple, int] = {}
    for i in range(start, stop):
        phi = random_rep(quiver, dims, field, random.Random(f"{seed}:{i}"))
        k = classify(phi, chains)
        counts[k] = counts.get(k, 0) + 1
    return counts


def _shards(total: int, jobs: int) -> list[tuple[int, int]]:
    jobs = max(1, min(jobs, total))
    cuts = [total * i // jobs for i in range(jobs + 1)]
    return [(a, b) for a, b in zip(cuts, cuts[1:])]


def _run(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, tasks))


def census(quiver: Quiver, dims: Sequence[int], field: Field, chains: Sequence[RankChain] = (),
           sample: int | None = None, seed: int = 0, jobs: int = 1, limit: int | None = None) -> CensusTable:
    """Classify every point of rep(alpha) (or ``sample`` random points) by
    ``dimv Sigma``, ``dimv Iota`` and the values of ``chains``.

    Shards are contiguous index ranges merged by exact addition, so the
    table does not depend on ``jobs``.
    """
    dims = tuple(dims)
    chains = tuple(chains)
    for c in chains:
        if c.start != quiver:
            raise QuiverError(f"chain {c.name or '?'} does not start on {quiver.name}")
    if sample is None:
        total = rep_space_size(quiver, dims, field)
        _check_budget(total, limit, "exhaustive census")
        table = CensusTable(field, dims, "exhaustive")
        tasks = [(quiver, dims, field, chains, a, b) for a, b in _shards(total, jobs)]
        fn = _census_shard
    else:
        table = CensusTable(field, dims, "sample", exact=False, seed=seed)
        tasks = [(quiver, dims, field, chains, seed, a, b) for a, b in _shards(sample, jobs)]
        fn = _sample_shard
    for part in _run(fn, tasks, jobs):
        table.merge(part)
    if sample is None and table.total != rep_space_size(quiver, dims, field):
        raise AssertionError("census classes do not partition rep(alpha)")
    return table


# -- type A -------------------------------------------------------------------

def path_order(quiver: Quiver) -> list[str]:
    """Vertices of a type-A quiver in path order.

    Declaration order is used when it already runs along the path; otherwise
    the walk starts from the first-declared endpoint.
    """
    n = len(quiver.vertices)
    adj: dict[str, list[str]] = {v: [] for v in quiver.vertices}
    for a in quiver.arrows:
        if a.tail == a.head:
            raise QuiverError("a type-A quiver has no loops")
        adj[a.tail].append(a.head)
        adj[a.head].append(a.tail)
    if n == 0 or len(quiver.arrows) != n - 1 or not quiver.is_connected() \
            or any(len(set(v)) != len(v) or len(v) > 2 for v in adj.values()):
        raise QuiverError(f"quiver {quiver.name} is not of type A")
    vs = list(quiver.vertices)
    if all(vs[i + 1] in adj[vs[i]] for i in range(n - 1)):
        return vs
    start = next(v for v in vs if len(adj[v]) <= 1)
    order = [start]
    while len(order) < n:
        order.append(next(w for w in adj[order[-1]] if w not in order))
    return order


def interval_morphism(quiver: Quiver, i: int, j: int) -> QuiverMorphism:
    """Inclusion of the full subquiver on path positions ``i..j`` (1-based)."""
    order = path_order(quiver)
    sub = quiver.full_subquiver(order[i - 1:j], name=f"{quiver.name}[{i},{j}]")
    return QuiverMorphism.inclusion(sub, quiver)


def interval_module(quiver: Quiver, field: Field, k: int, l: int) -> Representation:
    """The indecomposable ``V_kl``: ``K`` on positions ``k..l``, identities between them."""
    order = path_order(quiver)
    support = set(order[k - 1:l])
    dims = {v: int(v in support) for v in quiver.vertices}
    maps = {a.name: [[1]] for a in quiver.arrows if a.tail in support and a.head in support}
    return Representation.build(quiver, field, dims, maps)


def typea_rank(V: Representation, i: int, j: int) -> int:
    """``r_ij(V)``: global rank of the restriction to positions ``i..j``; 0 out of range."""
    n = len(path_order(V.quiver))
    if not (1 <= i <= j <= n):
        return 0
    return eval_chain(RankChain.pulled(interval_morphism(V.quiver, i, j)), V)


def typea_multiplicities(V: Representation) -> dict[tuple[int, int], int]:
    """Multiplicity of every ``V_kl`` in ``V`` by inclusion-exclusion of the ``r_ij``."""
    order = path_order(V.quiver)
    n = len(order)
    r = {(i, j): typea_rank(V, i, j) for i in range(1, n + 1) for j in range(i, n + 1)}

    def rr(i, j):
        return r.get((i, j), 0)

    mult = {}
    for k in range(1, n + 1):
        for l in range(k, n + 1):
            m = rr(k, l) + rr(k - 1, l + 1) - rr(k - 1, l) - rr(k, l + 1)
            if m < 0:
                raise AssertionError(f"negative multiplicity {m} for V_{k}{l}")
            mult[(k, l)] = m
    pos = {v: p for p, v in enumerate(order, 1)}
    recovered = [sum(m for (k, l), m in mult.items() if k <= pos[v] <= l) for v in V.quiver.vertices]
    if tuple(recovered) != V.dims:
        raise AssertionError(f"multiplicities give dimension vector {recovered}, not {V.dims}")
    return mult
