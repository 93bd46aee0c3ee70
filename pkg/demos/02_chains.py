"""Rank functions built from pullbacks and pushforwards.

Pulling the Y-shaped quiver back along its unfolding measures how much the
two composite images meet downstream.  Collapsing the subspace quiver onto
a single arrow measures how much the images span together.  Both values
are checked against direct linear algebra.

Run:  python3 demos/02_chains.py
"""
import itertools

from qrk import GF, QQ, RankChain, eval_chain, random_rep
from qrk import fixtures as fx
from qrk.linalg import hstack, image, intersect


def unfolded_y():
    chain = RankChain.pulled(fx.unfolded_y_morphism())
    print("pullback along the unfolded Y quiver:")
    for seed in range(5):
        psi = random_rep(fx.y_quiver(), [2, 1, 3, 2], GF(3), seed)
        a, b, c = psi.map("a"), psi.map("b"), psi.map("c")
        direct = intersect(image(c @ a), image(c @ b)).dim
        print(f"  seed {seed}: chain value {eval_chain(chain, psi)}, dim(im ca meet im cb) {direct}")


def collapsed_subspaces(n=3):
    phi = random_rep(fx.subspace_quiver(n), [1, 1, 1, 3], QQ, 7)
    maps = [phi.map(f"a{i}") for i in range(1, n + 1)]
    print(f"\nsubspace quiver with {n} arms, images of rank {[m.rank() for m in maps]} in a 3-space:")
    for r in range(n + 1):
        for J in itertools.combinations(range(1, n + 1), r):
            chain = RankChain(phi.quiver, ((fx.subset_inclusion(n, J), "pull"),
                                           (fx.collapse_morphism(n, J), "push")))
            span = hstack([maps[j - 1] for j in J]).rank() if J else 0
            print(f"  J = {set(J) or '{}'}: chain value {eval_chain(chain, phi)}, span dimension {span}")


if __name__ == "__main__":
    unfolded_y()
    collapsed_subspaces()
