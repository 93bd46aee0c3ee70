import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from qrk.linalg import (GF, QQ, LinAlgError, Matrix, Subspace, block_diag, image, induced_matrix,
                        intersect, intersect_by_annihilators, kernel, map_subspace, parse_field,
                        preimage, quotient_matrix, rank_through, rref, subspace_sum)
from strategies import elements, fields, finite_fields, matrices, subspace_pairs, subspaces


def M(rows, field=QQ, ncols=None):
    return Matrix.from_rows(field, rows, ncols)


def span(*vecs, field=QQ, n=None):
    n = n if n is not None else len(vecs[0])
    return Subspace.span(field, n, vecs)


# -- fields ---------------------------------------------------------------------

def test_field_parsing():
    assert parse_field("Q") == QQ
    assert parse_field("gf5") == GF(5)
    assert parse_field("GF(7)") == GF(7)
    with pytest.raises(ValueError):
        parse_field("gf4")
    with pytest.raises(ValueError):
        parse_field("R")


def test_rationals_in_lowest_terms():
    assert QQ("4/6") == Fraction(2, 3)
    assert QQ("3/-6").denominator > 0


def test_prime_field_inverse():
    F = GF(7)
    assert all(F.inv(x) * x % 7 == 1 for x in range(1, 7))
    assert F("1/3") == 5
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


# -- rref -------------------------------------------------------------------------

def test_rref_zero_matrix():
    R, piv, r = rref(Matrix.zeros(QQ, 2, 3))
    assert R == Matrix.zeros(QQ, 2, 3) and piv == [] and r == 0


def test_rref_identity():
    R, piv, r = rref(Matrix.identity(GF(3), 4))
    assert R == Matrix.identity(GF(3), 4) and piv == [0, 1, 2, 3] and r == 4


def test_rref_rank_one():
    R, piv, r = rref(M([[2, 4], [1, 2]]))
    assert r == 1 and piv == [0]
    assert R == M([[1, 2], [0, 0]])


@given(matrices(field=QQ, max_dim=4))
def test_rank_matches_sympy_over_q(m):
    assert m.rank() == sympy.Matrix(m.nrows, m.ncols, [x for r in m.rows for x in r]).rank()


def _brute_rank(m):
    p = m.field.characteristic
    vecs = {tuple(sum(c * x for c, x in zip(coef, row)) % p for row in m.rows)
            for coef in itertools.product(range(p), repeat=m.ncols)}
    r = 0
    while p**r < len(vecs):
        r += 1
    return r


@given(st.data())
def test_rank_matches_brute_force_over_small_fields(data):
    F = data.draw(st.sampled_from([GF(2), GF(3)]))
    m = data.draw(matrices(field=F, max_dim=3))
    assert m.rank() == _brute_rank(m)


@given(matrices())
def test_rref_is_idempotent(m):
    R, piv, _ = rref(m)
    R2, piv2, _ = rref(R)
    assert R == R2 and piv == piv2


# -- image / kernel -----------------------------------------------------------------

def test_kernel_of_identity_is_zero():
    assert kernel(Matrix.identity(QQ, 3)) == Subspace.zero(QQ, 3)


def test_kernel_of_nilpotent_block():
    assert kernel(M([[0, 1], [0, 0]])) == span([1, 0])


def test_image_of_zero_map():
    assert image(Matrix.zeros(GF(2), 3, 2)) == Subspace.zero(GF(2), 3)


@given(matrices())
def test_rank_nullity(m):
    assert image(m).dim + kernel(m).dim == m.ncols


@given(matrices())
def test_kernel_is_annihilated(m):
    assert all(not any(m.apply(v)) for v in kernel(m).basis)


# -- sum / intersection ---------------------------------------------------------------

def test_complementary_lines_meet_in_zero():
    assert intersect(span([1, 0]), span([0, 1])).dim == 0


def test_equal_lines():
    s = span([1, 0])
    assert intersect(s, s) == s
    assert intersect(s, span([1, 0])).dim == 1


def test_ambient_mismatch():
    with pytest.raises(LinAlgError):
        intersect(span([1, 0]), span([1, 0, 0]))
    with pytest.raises(LinAlgError):
        subspace_sum(span([1, 0]), span([1, 0], field=GF(2)))


def test_zero_ambient_space():
    z = Subspace.zero(QQ, 0)
    assert z == Subspace.full(QQ, 0)
    assert intersect(z, z) == z and (z + z) == z
    assert kernel(Matrix.zeros(QQ, 2, 0)) == z


@given(subspace_pairs())
def test_modular_law(args):
    _, _, (S, T) = args
    assert S.dim + T.dim == (S + T).dim + (S & T).dim


@given(subspace_pairs())
def test_intersection_is_contained_in_both(args):
    _, _, (S, T) = args
    meet = S & T
    assert meet <= S and meet <= T
    assert S <= S + T and T <= S + T


@given(st.data())
def test_two_intersection_routes_agree_over_prime_fields(data):
    F = data.draw(finite_fields)
    n = data.draw(st.integers(0, 5))
    S, T = data.draw(subspaces(F, n)), data.draw(subspaces(F, n))
    assert intersect(S, T) == intersect_by_annihilators(S, T)


@given(st.data())
def test_canonical_form_ignores_generator_order_and_redundancy(data):
    F = data.draw(fields)
    n = data.draw(st.integers(1, 5))
    vecs = data.draw(st.lists(st.lists(elements(F), min_size=n, max_size=n), max_size=4))
    perm = data.draw(st.permutations(vecs))
    extra = [[F(a) + F(b) for a, b in zip(u, v)] for u, v in zip(vecs, vecs[1:])]
    S = Subspace.span(F, n, vecs)
    assert S == Subspace.span(F, n, list(perm) + extra)
    T = data.draw(subspaces(F, n))
    T2 = Subspace.span(F, n, list(reversed(T.basis)) + list(T.basis))
    assert S & T == S & T2 and S + T == T2 + S


@given(subspace_pairs(count=2))
def test_operations_are_deterministic(args):
    _, _, (S, T) = args
    assert intersect(S, T) == intersect(S, T)
    assert repr(intersect(S, T)) == repr(intersect(S, T))


# -- preimage / maps --------------------------------------------------------------------

def test_preimage_trivial_cases():
    m = M([[1, 2, 0], [0, 0, 1]])
    assert preimage(m, Subspace.full(QQ, 2)) == Subspace.full(QQ, 3)
    assert preimage(m, Subspace.zero(QQ, 2)) == kernel(m)
    t = span([1, 1, 0])
    assert preimage(Matrix.identity(QQ, 3), t) == t


def test_preimage_shape_mismatch():
    with pytest.raises(LinAlgError):
        preimage(M([[1, 0]]), span([1, 0]))


@given(st.data())
def test_preimage_property(data):
    F = data.draw(fields)
    m = data.draw(matrices(field=F, max_dim=4))
    t = data.draw(subspaces(F, m.nrows))
    P = preimage(m, t)
    assert kernel(m) <= P
    assert map_subspace(m, P) <= t
    # every x with m x in t lies in P: compare dimensions with t & im(m)
    assert P.dim == kernel(m).dim + intersect(t, image(m)).dim


# -- rank through a quotient ----------------------------------------------------------------

def test_rank_through_examples():
    assert rank_through(Subspace.full(QQ, 3), Subspace.zero(QQ, 3)) == 3
    assert rank_through(span([1, 0, 0]), span([1, 0, 0], [0, 1, 0])) == 0
    assert rank_through(span([1, 0]), span([1, 1])) == 1


# -- induced matrices ---------------------------------------------------------------------------

def test_induced_matrix_examples():
    m = M([[1, 2], [3, 4]])
    full = Subspace.full(QQ, 2)
    assert induced_matrix(m, full, full) == m
    s = span([1, 1, 0])
    assert induced_matrix(Matrix.identity(QQ, 3), s, s) == Matrix.identity(QQ, 1)
    assert induced_matrix(M([[0, 1], [0, 0]]), span([0, 1]), span([1, 0])) == M([[1]])


def test_induced_matrix_requires_containment():
    with pytest.raises(LinAlgError):
        induced_matrix(Matrix.identity(QQ, 2), span([0, 1]), span([1, 0]))


@given(st.data())
def test_induced_and_quotient_ranks_add_up(data):
    # for m(S) <= T the ranks of S -> T and K^n/S -> K^m/T bound rank m
    F = data.draw(fields)
    m = data.draw(matrices(field=F, max_dim=4))
    S = data.draw(subspaces(F, m.ncols))
    T = map_subspace(m, S) + data.draw(subspaces(F, m.nrows))
    A = induced_matrix(m, S, T)
    B = quotient_matrix(m, S, T)
    assert A.shape == (T.dim, S.dim)
    assert B.shape == (m.nrows - T.dim, m.ncols - S.dim)
    assert A.rank() == map_subspace(m, S).dim
    assert B.rank() == (image(m) + T).dim - T.dim


# -- matrices ------------------------------------------------------------------------------------

def test_matrix_inverse_and_products():
    m = M([[2, 1], [1, 1]], GF(5))
    assert m @ m.inverse() == Matrix.identity(GF(5), 2)
    with pytest.raises(LinAlgError):
        M([[1, 2], [2, 4]]).inverse()
    assert str(block_diag(QQ, [M([[1]]), M([[0, 1]])])) == "[1,0,0;0,0,1]"
    assert str(Matrix.zeros(QQ, 0, 3)) == "[]"


@settings(max_examples=50)
@given(st.data())
def test_matrix_power_matches_repeated_product(data):
    F = data.draw(fields)
    n = data.draw(st.integers(0, 3))
    m = data.draw(matrices(field=F, rows=n, cols=n))
    assert m ** 3 == m @ m @ m
    assert m ** 0 == Matrix.identity(F, n)
