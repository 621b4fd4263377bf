"""Ramification matrix singular values and per-branch-point sheet derivatives of the Abel-Jacobi map."""

import argparse
from pathlib import Path

import numpy as np

from vclab import covertop, jacobian, monodromy, pencil

DATA = Path(__file__).resolve().parents[1] / "src" / "vclab" / "data"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("curve", nargs="?", default="quartic")
    args = parser.parse_args()
    curve = pencil.load_curve(DATA / f"{args.curve}.json")
    mdata = monodromy.monodromy_rep(curve)
    pdata = jacobian.periods(curve, covertop.build_cover(mdata), mdata.branch)
    rj = jacobian.ramification_jacobian(curve, pdata)
    print(f"g={pdata.genus} rank={rj.rank} singular values={np.array2string(rj.singular_values, precision=4)}")
    print(f"pivot columns {list(rj.pivot_columns)}, block condition {rj.block_condition:.3g}")
    print(" k  colliding  |d phi| colliding      bystander max   |M column|  match")
    for k in range(pdata.branch.e):
        prof = jacobian.bystander_derivative_profile(curve, k, pdata.branch)
        mags = prof.magnitudes
        by = max((mags[i] for i in prof.bystanders), default=0.0)
        col = rj.matrix[:, k]
        match = min(np.linalg.norm(prof.derivatives[i] - s * col) for i in prof.colliding for s in (1, -1))
        print(f"{k:2d}  {str(prof.colliding):9s}  {mags[prof.colliding[0]]:.4f} {mags[prof.colliding[1]]:.4f}"
              f"   {by:.1e}        {np.linalg.norm(col):.4f}      {match / np.linalg.norm(col):.1e}")


if __name__ == "__main__":
    main()
