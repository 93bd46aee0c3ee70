"""Acceptance suite: one group of tests per numbered criterion.

Each test carries a ``criterion`` marker; ``conftest.py`` folds the outcomes
into a single PASS/FAIL line per criterion in the terminal summary.  Time
limits are asserted inside the tests themselves.
"""
import itertools
import random
import subprocess
import sys
import time
from functools import lru_cache

import pytest

from qrk import fixtures as fx
from qrk.grassmannian import (gaussian_binomial_candidates, hom_dim, kronecker_quiver, string_module,
                              string_morphism, strata)
from qrk.linalg import GF, QQ, Matrix, Subspace, hstack, image, intersect
from qrk.loci import census, interval_module, typea_multiplicities
from qrk.quiver import (Representation, apply_base_change, direct_sum, pullback, pushforward,
                        random_base_change, random_rep)
from qrk.rank import RankChain, eval_chain, global_rank, oracle_doubleloop, vertex_ranks
from strategies import random_cover, random_quiver, reorder_to_nested
from test_loci import zigzag


def criterion(number, title):
    return pytest.mark.criterion(number, title)


class Clock:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


def rank_of(*mats):
    return hstack(mats).rank()


# -- 1 -------------------------------------------------------------------------------

@criterion(1, "global ranks of the A3 triple X, Y, Z are (0, 1, 0)")
def test_a3_triple_ranks():
    with Clock(1.0):
        reps = fx.xyz()
        assert tuple(global_rank(reps[k]) for k in "XYZ") == (0, 1, 0)


# -- 2 -------------------------------------------------------------------------------

@criterion(2, "A3 global rank equals dim(im A meet im B)")
def test_a3_against_rank_formula():
    with Clock(10.0):
        rng = random.Random(2002)
        trials = 0
        for field in (QQ, GF(5)):
            for _ in range(110):
                dims = [rng.randint(0, 6) for _ in range(3)]
                phi = random_rep(fx.a3_quiver(), dims, field, rng)
                A, B = phi.map("a"), phi.map("b")
                # dim(im A meet im B) = rk A + rk B - rk [A | B]
                assert global_rank(phi) == A.rank() + B.rank() - rank_of(A, B)
                trials += 1
        assert trials >= 200


# -- 3 -------------------------------------------------------------------------------

def _nilpotent(field, n, rng):
    N = Matrix.from_rows(field, [[field.random_element(rng) if c > r else 0 for c in range(n)]
                                 for r in range(n)], n)
    g = random_base_change([n], field, rng).mats[0]
    return g @ N @ g.inverse()


def _invertible(field, n, rng):
    return random_base_change([n], field, rng).mats[0]


def _generic(field, n, rng):
    return random_rep(fx.loop_quiver(), [n], field, rng).map("m")


@criterion(3, "double-loop global rank matches its closed-form oracle")
def test_double_loop_oracle():
    kinds = [_generic, _nilpotent, _invertible]
    with Clock(30.0):
        rng = random.Random(2003)
        trials = 0
        for field in (QQ, GF(3)):
            for i in range(120):
                n = rng.randint(1, 6)
                make_a, make_b = kinds[i % 3], kinds[(i // 3) % 3]
                A, B = make_a(field, n, rng), make_b(field, n, rng)
                if i % 17 == 0:
                    B = A
                assert global_rank(fx.double_loop_rep(A, B)) == oracle_doubleloop(A, B)
                trials += 1
        assert trials >= 200


@criterion(3, "double-loop global rank matches its closed-form oracle")
def test_double_loop_extreme_cases():
    for field in (QQ, GF(3)):
        for n in range(1, 7):
            Z, I = Matrix.zeros(field, n, n), Matrix.identity(field, n)
            shift = Matrix.from_rows(field, [[int(c == r + 1) for c in range(n)] for r in range(n)], n)
            assert global_rank(fx.double_loop_rep(I, I)) == oracle_doubleloop(I, I) == n
            assert global_rank(fx.double_loop_rep(shift, I)) == oracle_doubleloop(shift, I) == 0
            assert global_rank(fx.double_loop_rep(Z, shift)) == oracle_doubleloop(Z, shift) == 0


# -- 4 -------------------------------------------------------------------------------

@criterion(4, "pullback and pushforward rank identities on Y and the subspace quiver")
def test_unfolded_y_pullback_identity():
    chain = RankChain.pulled(fx.unfolded_y_morphism())
    with Clock(30.0):
        rng = random.Random(2004)
        for i in range(120):
            field = [QQ, GF(2), GF(3), GF(5)][i % 4]
            psi = random_rep(fx.y_quiver(), [rng.randint(0, 3) for _ in range(4)], field, rng)
            a, b, c = psi.map("a"), psi.map("b"), psi.map("c")
            ca, cb = c @ a, c @ b
            assert eval_chain(chain, psi) == ca.rank() + cb.rank() - rank_of(ca, cb)


@criterion(4, "pullback and pushforward rank identities on Y and the subspace quiver")
def test_subspace_collapse_identities():
    with Clock(30.0):
        rng = random.Random(2005)
        instances = 0
        for i in range(120):
            n = rng.randint(1, 4)
            field = [QQ, GF(2), GF(3)][i % 3]
            phi = random_rep(fx.subspace_quiver(n), [rng.randint(0, 3) for _ in range(n + 1)], field, rng)
            maps = [phi.map(f"a{j}") for j in range(1, n + 1)]
            meet = image(maps[0])
            for m in maps[1:]:
                meet = intersect(meet, image(m))
            assert global_rank(phi) == meet.dim
            assert eval_chain(RankChain.pushed(fx.collapse_morphism(n)), phi) == rank_of(*maps)
            for r in range(n + 1):
                for J in itertools.combinations(range(1, n + 1), r):
                    chain = RankChain(phi.quiver, ((fx.subset_inclusion(n, J), "pull"),
                                                   (fx.collapse_morphism(n, J), "push")))
                    want = rank_of(*[maps[j - 1] for j in J]) if J else 0
                    assert eval_chain(chain, phi) == want
            instances += 1
        assert instances >= 100


# -- 5 -------------------------------------------------------------------------------

@criterion(5, "pullback and pushforward are functorial")
def test_functor_laws():
    rng = random.Random(2006)
    for i in range(120):
        Q = random_quiver(rng, "Q")
        g = random_cover(rng, Q, "Qp")
        f = random_cover(rng, g.source, "Qpp")
        field = [QQ, GF(2), GF(5)][i % 3]
        psi = random_rep(Q, [rng.randint(0, 3) for _ in Q.vertices], field, rng)
        assert pullback(f.then(g), psi) == pullback(f, pullback(g, psi))
        phi = random_rep(f.source, [rng.randint(0, 2) for _ in f.source.vertices], field, rng)
        flat = pushforward(f.then(g), phi)
        nested = pushforward(g, pushforward(f, phi))
        # equal once the direct-sum summands of each fiber are listed in the same order
        assert apply_base_change(reorder_to_nested(f, g, phi), flat) == nested


# -- 6 -------------------------------------------------------------------------------

def _chain_pool():
    K = kronecker_quiver()
    chains = [RankChain(fx.a3_quiver()), RankChain(fx.y_quiver()), RankChain(fx.double_loop_quiver()), RankChain(K),
              RankChain.pulled(fx.unfolded_y_morphism()), RankChain.pushed(fx.collapse_morphism(3)),
              RankChain(fx.subspace_quiver(3), ((fx.subset_inclusion(3, (1, 3)), "pull"),
                                                (fx.collapse_morphism(3, (1, 3)), "push")))]
    chains += [RankChain.pulled(string_morphism(k, d)) for k in "RPI" for d in (1, 2)]
    return chains


def _random_instance(rng):
    chain = rng.choice(_chain_pool())
    field = rng.choice([QQ, GF(2), GF(3), GF(5)])
    dims = [rng.randint(0, 3) for _ in chain.start.vertices]
    return chain, field, dims


@criterion(6, "chain ranks are vertex independent, additive and GL-invariant")
def test_vertex_independence():
    rng = random.Random(2007)
    for _ in range(500):
        chain, field, dims = _random_instance(rng)
        phi = random_rep(chain.start, dims, field, rng)
        assert len(set(vertex_ranks(chain.transport(phi)))) == 1


@criterion(6, "chain ranks are vertex independent, additive and GL-invariant")
def test_additivity():
    rng = random.Random(2008)
    for _ in range(500):
        chain, field, dims = _random_instance(rng)
        phi = random_rep(chain.start, dims, field, rng)
        psi = random_rep(chain.start, [rng.randint(0, 2) for _ in dims], field, rng)
        assert eval_chain(chain, direct_sum(phi, psi)) == eval_chain(chain, phi) + eval_chain(chain, psi)


@criterion(6, "chain ranks are vertex independent, additive and GL-invariant")
def test_base_change_invariance():
    rng = random.Random(2009)
    for _ in range(500):
        chain, field, dims = _random_instance(rng)
        phi = random_rep(chain.start, dims, field, rng)
        g = random_base_change(dims, field, rng)
        assert eval_chain(chain, apply_base_change(g, phi)) == eval_chain(chain, phi)


# -- 7 -------------------------------------------------------------------------------

def typea_trial(seed):
    """A random base-changed direct sum of interval modules with known multiplicities."""
    rng = random.Random(seed)
    field = QQ if seed % 2 == 0 else GF(5)
    n = rng.randint(1, 8)
    q = zigzag(n, rng.randrange(10**6))
    want = {}
    V = Representation.zero(q, field)
    for k in range(1, n + 1):
        for l in range(k, n + 1):
            m = rng.randint(1, 3) if rng.random() < 0.25 else 0
            want[(k, l)] = m
            for _ in range(m):
                V = direct_sum(V, interval_module(q, field, k, l))
    return apply_base_change(random_base_change(V.dims, field, rng), V), want


@criterion(7, "type-A interval multiplicities are recovered exactly")
def test_typea_roundtrip():
    with Clock(60.0):
        for seed in range(100):
            V, want = typea_trial(seed)
            assert typea_multiplicities(V) == want


# -- 8 -------------------------------------------------------------------------------

@criterion(8, "census counts on A3 and the one-loop quiver")
def test_census_counts():
    with Clock(5.0):
        q = fx.a3_quiver()
        table = census(q, [1, 2, 1], GF(2), [RankChain(q)])
        assert table.total == 16 and table.count(values=(1,)) == 3
        for p in (2, 3):
            direct = sum(1 for a, b, c, d in itertools.product(range(p), repeat=4)
                         if (a * d - b * c) % p == 0 and any((a, b, c, d)) and (a + d) % p)
            assert census(fx.loop_quiver(), [2], GF(p)).count(sigma_dim=(1,)) == direct


# -- 9 -------------------------------------------------------------------------------

@criterion(9, "Kronecker rank-value table for P_n and R_n")
def test_kronecker_table():
    with Clock(30.0):
        for n in range(1, 7):
            P, R = string_module("P", n).rep, string_module("R", n).rep
            for d in range(1, 8):
                r_d, p_d, i_d = (RankChain.pulled(string_morphism(k, d)) for k in "RPI")
                up, flat = max(n - d + 1, 0), max(n - d, 0)
                assert (eval_chain(r_d, P), eval_chain(p_d, P), eval_chain(i_d, P)) == (up, up, flat)
                assert (eval_chain(r_d, R), eval_chain(p_d, R), eval_chain(i_d, R)) == (up, flat, flat)


# -- 10 ------------------------------------------------------------------------------

STRATA_CASES = [(n, (b1, b2), q) for n in (1, 2, 3) for b1 in range(n + 1) for b2 in range(n + 1) for q in (2, 3)]


@lru_cache(maxsize=None)
def all_strata():
    start = time.perf_counter()
    reports = {case: strata(case[0], case[1], GF(case[2])) for case in STRATA_CASES}
    return reports, time.perf_counter() - start


@criterion(10, "Kronecker strata: rank and Hom routes agree, nested, Gaussian-binomial sizes")
def test_strata_routes_agree_and_nest():
    reports, elapsed = all_strata()
    assert elapsed < 300
    for case, rep in reports.items():
        assert rep.disagreements == [], case
        assert rep.is_filtration(), case


def _non_gaussian_open_counts():
    reports, _ = all_strata()
    return [(n, beta, q, d, v) for (n, beta, q), rep in reports.items()
            for d, v in sorted(rep.open_counts.items()) if v and not gaussian_binomial_candidates(v, q)]


@criterion(10, "Kronecker strata: rank and Hom routes agree, nested, Gaussian-binomial sizes")
@pytest.mark.xfail(strict=True, reason="n=3, beta=(1,2): the open stratum has q^2+2q points "
                                       "(8 at q=2, 15 at q=3), which is not a Gaussian binomial")
def test_open_strata_are_gaussian_binomials():
    assert _non_gaussian_open_counts() == []


@criterion(10, "Kronecker strata: rank and Hom routes agree, nested, Gaussian-binomial sizes")
def test_the_only_non_gaussian_strata_are_known():
    bad = _non_gaussian_open_counts()
    assert {(n, beta, q, v) for n, beta, q, _, v in bad} == {(3, (1, 2), 2, 8), (3, (1, 2), 3, 15)}


# -- 11 ------------------------------------------------------------------------------

@criterion(11, "no maps from regular to preprojective or from preinjective to regular")
@pytest.mark.parametrize("field", [GF(2), GF(3), QQ], ids=str)
def test_hom_vanishing(field):
    for d in range(1, 5):
        R = string_module("R", d, field).rep
        for m in range(0, 5):
            assert hom_dim(R, string_module("P", m, field).rep) == 0
            assert hom_dim(string_module("I", m, field).rep, R) == 0


# -- 12 ------------------------------------------------------------------------------

@criterion(12, "selftest reports do not depend on the number of jobs")
def test_selftest_is_deterministic():
    def report(jobs):
        proc = subprocess.run([sys.executable, "-m", "qrk.cli", "selftest", "--jobs", str(jobs)],
                              capture_output=True, timeout=600)
        assert proc.returncode == 0, proc.stderr.decode()
        return proc.stdout

    one, eight = report(1), report(8)
    assert one and one == eight
