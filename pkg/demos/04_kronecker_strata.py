"""Kronecker modules and the strata of a quiver Grassmannian.

The first table lists rank-function values of the preprojective and regular
string modules.  The second part stratifies the subrepresentations of the
regular module R_3 over GF(2) two ways, by rank functions and by Hom
dimensions, and prints how many points fall into each stratum.

Run:  python3 demos/04_kronecker_strata.py
"""
from qrk import GF, RankChain, eval_chain, strata, string_module
from qrk.grassmannian import gaussian_binomial_candidates, string_morphism


def rank_table(max_n=5, max_d=6):
    print("values (r_d, p_d, i_d) of P_n / R_n:")
    for n in range(1, max_n + 1):
        cells = []
        for d in range(1, max_d + 1):
            chains = [RankChain.pulled(string_morphism(k, d)) for k in "RPI"]
            P, R = string_module("P", n).rep, string_module("R", n).rep
            cells.append("".join(map(str, (eval_chain(c, P) for c in chains))) + "/" +
                         "".join(map(str, (eval_chain(c, R) for c in chains))))
        print(f"  n={n}: " + "  ".join(cells))


def strata_of_r3(q=2):
    F = GF(q)
    print(f"\nsubrepresentations of R_3 over GF({q}):")
    for beta in [(1, 1), (1, 2), (2, 2)]:
        report = strata(3, beta, F)
        sizes = [report.open_counts[d] for d in sorted(report.open_counts)]
        print(f"  beta {beta}: {report.total} points, open strata {sizes}, "
              f"routes agree: {not report.disagreements}, nested: {report.is_filtration()}")
        for d, v in sorted(report.open_counts.items()):
            if v and not gaussian_binomial_candidates(v, q):
                print(f"    stratum {d} has {v} points, which is not a Gaussian binomial at q={q}")


if __name__ == "__main__":
    rank_table()
    strata_of_r3()
