"""Small named quivers and representations used throughout the tests and demos."""
from __future__ import annotations

from functools import lru_cache

from .linalg import Field, Matrix, QQ
from .quiver import Quiver, QuiverMorphism, Representation


@lru_cache(maxsize=None)
def a3_quiver() -> Quiver:
    """``1 -a-> 2 <-b- 3``."""
    return Quiver.build("A3", ["1", "2", "3"], [("a", "1", "2"), ("b", "3", "2")])


def a3_rep(A, B, field: Field = QQ) -> Representation:
    A = A if isinstance(A, Matrix) else Matrix.from_rows(field, A)
    B = B if isinstance(B, Matrix) else Matrix.from_rows(field, B)
    return Representation.build(a3_quiver(), field, [A.ncols, A.nrows, B.ncols], {"a": A, "b": B})


def xyz(field: Field = QQ) -> dict[str, Representation]:
    """The three points of rep(A3, (1,2,1)) on which global rank is 0, 1, 0."""
    e1, e2, z = [[1], [0]], [[0], [1]], [[0], [0]]
    return {"X": a3_rep(e1, e2, field), "Y": a3_rep(e1, e1, field), "Z": a3_rep(e1, z, field)}


@lru_cache(maxsize=None)
def loop_quiver() -> Quiver:
    return Quiver.build("L1", ["1"], [("m", "1", "1")])


@lru_cache(maxsize=None)
def double_loop_quiver() -> Quiver:
    return Quiver.build("L2", ["1"], [("a", "1", "1"), ("b", "1", "1")])


def double_loop_rep(A: Matrix, B: Matrix) -> Representation:
    return Representation.build(double_loop_quiver(), A.field, [A.nrows], {"a": A, "b": B})


@lru_cache(maxsize=None)
def y_quiver() -> Quiver:
    """``1 -a-> 3 <-b- 2`` followed by ``3 -c-> 4``."""
    return Quiver.build("Y", ["1", "2", "3", "4"], [("a", "1", "3"), ("b", "2", "3"), ("c", "3", "4")])


@lru_cache(maxsize=None)
def unfolded_y_morphism() -> QuiverMorphism:
    """``1 -> 3a -> 4 <- 3b <- 2`` onto :func:`y_quiver`, both ``3a``, ``3b`` over ``3``."""
    src = Quiver.build("Yunf", ["1", "3a", "4", "3b", "2"],
                       [("a", "1", "3a"), ("c1", "3a", "4"), ("c2", "3b", "4"), ("b", "2", "3b")])
    return QuiverMorphism.build(src, y_quiver(),
                                {"1": "1", "3a": "3", "4": "4", "3b": "3", "2": "2"},
                                {"a": "a", "b": "b", "c1": "c", "c2": "c"})


@lru_cache(maxsize=None)
def subspace_quiver(n: int) -> Quiver:
    """``n`` arrows ``a_i: i -> 0``."""
    return Quiver.build(f"S{n}", [str(i) for i in range(1, n + 1)] + ["0"],
                        [(f"a{i}", str(i), "0") for i in range(1, n + 1)])


@lru_cache(maxsize=None)
def a2_quiver() -> Quiver:
    return Quiver.build("A2", ["s", "0"], [("a", "s", "0")])


@lru_cache(maxsize=None)
def collapse_morphism(n: int, subset: tuple[int, ...] | None = None) -> QuiverMorphism:
    """Send every ``i`` to ``s`` and every ``a_i`` to ``a``.

    With ``subset`` the source is the full subquiver on ``subset`` and ``0``.
    """
    src = subspace_quiver(n)
    if subset is not None:
        src = src.full_subquiver([str(j) for j in subset] + ["0"], name=f"S{n}{list(subset)}")
    return QuiverMorphism.build(src, a2_quiver(),
                                {v: "0" if v == "0" else "s" for v in src.vertices},
                                {a.name: "a" for a in src.arrows})


@lru_cache(maxsize=None)
def subset_inclusion(n: int, subset: tuple[int, ...]) -> QuiverMorphism:
    return QuiverMorphism.inclusion(collapse_morphism(n, subset).source, subspace_quiver(n))
