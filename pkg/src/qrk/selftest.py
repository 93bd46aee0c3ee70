"""The worked-example suite behind ``qrk selftest``.

Every check is deterministic (fixed seeds) and the report carries no
timings, so two runs with different ``jobs`` must print identical JSON.
"""
from __future__ import annotations

import itertools
import random

from . import fixtures as fx
from .grassmannian import string_module, string_morphism, strata
from .linalg import GF, QQ, Matrix, Subspace, image, intersect, map_subspace
from .loci import census, interval_module, typea_multiplicities
from .quiver import Representation, apply_base_change, direct_sum, random_base_change, random_rep
from .rank import RankChain, eval_chain, global_rank, oracle_a3, oracle_doubleloop, sigma


def _a3_triple():
    reps = fx.xyz()
    ranks = {k: global_rank(v) for k, v in reps.items()}
    oracle = {k: oracle_a3(v.map("a"), v.map("b")) for k, v in reps.items()}
    return ranks == {"X": 0, "Y": 1, "Z": 0} == oracle, {"ranks": ranks}


def _double_loop():
    rows = []
    for field in (QQ, GF(3)):
        for seed in range(20):
            rng = random.Random(seed)
            n = rng.randint(1, 4)
            phi = random_rep(fx.double_loop_quiver(), [n], field, rng)
            rows.append(global_rank(phi) == oracle_doubleloop(phi.map("a"), phi.map("b")))
    return all(rows), {"instances": len(rows), "agree": sum(rows)}


def _unfolded_pullback():
    f = fx.unfolded_y_morphism()
    chain = RankChain.pulled(f)
    ok = 0
    for seed in range(20):
        psi = random_rep(fx.y_quiver(), [1, 1, 2, 2], GF(2), seed)
        a, b, c = psi.map("a"), psi.map("b"), psi.map("c")
        pulled = intersect(image(c @ a), image(c @ b)).dim
        direct = map_subspace(c, intersect(image(a), image(b))).dim
        ok += eval_chain(chain, psi) == pulled and global_rank(psi) == direct
    return ok == 20, {"instances": 20, "agree": ok}


def _collapse_pushforward():
    n = 3
    ok = total = 0
    for seed in range(10):
        phi = random_rep(fx.subspace_quiver(n), [1, 1, 1, 2], GF(3), seed)
        maps = [phi.map(f"a{i}") for i in range(1, n + 1)]
        meet = image(maps[0])
        for m in maps[1:]:
            meet = intersect(meet, image(m))
        ok += global_rank(phi) == meet.dim
        total += 1
        for r in range(n + 1):
            for J in itertools.combinations(range(1, n + 1), r):
                chain = RankChain(phi.quiver, ((fx.subset_inclusion(n, J), "pull"),
                                               (fx.collapse_morphism(n, J), "push")))
                span = Subspace.zero(phi.field, 2)
                for j in J:
                    span = span + image(maps[j - 1])
                ok += eval_chain(chain, phi) == span.dim
                total += 1
    return ok == total, {"instances": total, "agree": ok}


def _loop_example(jobs):
    out = {}
    passed = True
    for q in (2, 3):
        F = GF(q)
        diag = Matrix.from_rows(F, [[1, 0], [0, 0]])
        S = sigma(Representation.build(fx.loop_quiver(), F, [2], {"m": diag}))
        passed &= S.spaces[0] == Subspace.span(F, 2, [[1, 0]])
        table = census(fx.loop_quiver(), [2], F, jobs=jobs)
        direct = sum(1 for a, b, c, d in itertools.product(range(q), repeat=4)
                     if (a * d - b * c) % q == 0 and any((a, b, c, d)) and (a + d) % q)
        got = table.count(sigma_dim=(1,))
        passed &= got == direct and table.total == q**4
        out[f"gf{q}"] = {"sigma_dim_1": str(got), "rank1_trace_nonzero": str(direct)}
    return passed, out


def _kronecker_table():
    bad = []
    for n in range(1, 7):
        for d in range(1, 8):
            P, R = string_module("P", n).rep, string_module("R", n).rep
            got = [eval_chain(RankChain.pulled(string_morphism(k, d)), M) for M in (P, R) for k in ("R", "P")]
            want = [max(n - d + 1, 0), max(n - d + 1, 0), max(n - d + 1, 0), max(n - d, 0)]
            if got != want:
                bad.append({"n": n, "d": d, "got": got, "want": want})
    return not bad, {"mismatches": bad}


def _census_a3(jobs):
    table = census(fx.a3_quiver(), [1, 2, 1], GF(2), [RankChain(fx.a3_quiver())], jobs=jobs)
    rank1 = table.count(values=(1,))
    return table.total == 16 and rank1 == 3, {"table": table.to_json()}


def _strata(jobs):
    details = {}
    passed = True
    for beta in [(1, 1), (1, 2), (2, 2)]:
        rep = strata(2, beta, GF(2), jobs=jobs)
        passed &= not rep.disagreements and rep.is_filtration()
        details[",".join(map(str, beta))] = rep.to_json()
    return passed, details


def _typea():
    q = fx.a3_quiver()
    F = GF(5)
    V = direct_sum(interval_module(q, F, 1, 2), direct_sum(interval_module(q, F, 2, 3), interval_module(q, F, 2, 3)))
    V = apply_base_change(random_base_change(V.dims, F, 11), V)
    mult = typea_multiplicities(V)
    want = {(k, l): 0 for k in range(1, 4) for l in range(k, 4)}
    want.update({(1, 2): 1, (2, 3): 2})
    return mult == want, {"multiplicities": {f"{k},{l}": m for (k, l), m in sorted(mult.items())}}


def run(jobs: int = 1) -> dict:
    checks = [
        ("a3-triple-ranks", _a3_triple),
        ("double-loop-oracle", _double_loop),
        ("unfolded-pullback", _unfolded_pullback),
        ("subspace-collapse", _collapse_pushforward),
        ("loop-quiver-sigma", lambda: _loop_example(jobs)),
        ("kronecker-rank-table", _kronecker_table),
        ("census-a3", lambda: _census_a3(jobs)),
        ("kronecker-strata", lambda: _strata(jobs)),
        ("type-a-decomposition", _typea),
    ]
    results = []
    for name, fn in checks:
        passed, details = fn()
        results.append({"name": name, "passed": bool(passed), "details": details})
    return {"passed": all(r["passed"] for r in results), "checks": results}
