"""Global rank on a three-vertex quiver.

Three points of the same representation space, with the same dimension
vector and every map injective, can still have different global ranks.
The rank is 1 only when both lines in the middle space coincide.

Run:  python3 demos/01_global_rank.py
"""
from pathlib import Path

from qrk import global_rank, iota_kernel, sigma
from qrk import fixtures as fx
from qrk.formats import format_rep, load_quivers, load_rep

DATA = Path(__file__).resolve().parent / "data"


def show(name, phi):
    S, U = sigma(phi), iota_kernel(phi)
    print(f"{name}: dims {phi.dims}  sigma {S.dims}  iota kernel {U.dims}  global rank {global_rank(phi)}")


def main():
    for name, phi in fx.xyz().items():
        show(name, phi)

    # the same computation from files on disk
    quivers = load_quivers(DATA / "A3.qv")
    y = load_rep(DATA / "y.qrep", quivers)
    print("\nloaded from y.qrep:")
    print(format_rep(y))
    show("Y (file)", y)


if __name__ == "__main__":
    main()
