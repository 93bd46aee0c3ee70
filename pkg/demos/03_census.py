"""Counting points of a representation space by their rank invariants.

Over a finite field every representation space is a finite set, so it can be
partitioned exactly.  Each class is keyed by the dimension vector of the
largest epimorphic subrepresentation, that of the injective-quotient kernel
and the values of the requested rank functions.

Run:  python3 demos/03_census.py
"""
from pathlib import Path

from qrk import GF, RankChain, census, typea_multiplicities
from qrk import fixtures as fx
from qrk.formats import load_quivers, load_rep

DATA = Path(__file__).resolve().parent / "data"


def a3_census():
    q = fx.a3_quiver()
    table = census(q, [1, 2, 1], GF(2), [RankChain(q)])
    print(f"A3 at dimension vector (1,2,1) over GF(2): {table.total} points")
    for (sigma_dim, iota_dim, values), count in sorted(table.counts.items()):
        print(f"  sigma {sigma_dim}  iota {iota_dim}  rank {values[0]}: {count}")


def loop_census():
    for p in (2, 3):
        table = census(fx.loop_quiver(), [2], GF(p))
        print(f"2x2 matrices over GF({p}) with a one-dimensional epimorphic part: "
              f"{table.count(sigma_dim=(1,))} of {table.total}")


def interval_decomposition():
    quivers = load_quivers(DATA / "A3.qv")
    V = load_rep(DATA / "v.qrep", quivers)
    mult = typea_multiplicities(V)
    print("interval summands of v.qrep:", {f"[{k},{l}]": m for (k, l), m in sorted(mult.items()) if m})


if __name__ == "__main__":
    a3_census()
    print()
    loop_census()
    print()
    interval_decomposition()
