"""Lasso vs Dantzig selector on the 64-column diabetes model at a common l1 norm.

Prints the first rows of the comparison table under both column scalings,
plus the support and the smallest active Lasso coefficient.

    python scripts/diabetes_matched_s.py [--s 1734.79] [--rows 12]
"""

import argparse

import numpy as np

from lasso_dantzig import dantzig
from lasso_dantzig.cli import table1
from lasso_dantzig.data import diabetes64, standardize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--s", type=float, default=1734.79)
    ap.add_argument("--rows", type=int, default=12)
    args = ap.parse_args()

    d = diabetes64()
    for mode in ("l2", "var"):
        design = standardize(d, mode)
        lb, ls, db, ds = table1(design, args.s)
        print(f"== columns scaled by {mode}, s = {args.s}")
        print(f"{'j':>3} {'name':<9} {'lasso ip':>10} {'lasso b':>10} {'DS ip':>10} {'DS b':>10}")
        for j in range(args.rows):
            print(f"{j + 1:>3} {design.column_names[j]:<9} {ls.inner_products[j]:>10.4f} {lb[j]:>10.4f} "
                  f"{ds.inner_products[j]:>10.4f} {db[j]:>10.4f}")
        for label, lv, dv in (("max |ip|", ls.linf, ds.linf), ("MSE", ls.mse, ds.mse)):
            print(f"    {label:<12} lasso {lv:.4f}   DS {dv:.4f}")
        lsup = np.flatnonzero(np.abs(lb) > dantzig.NONZERO_TOL)
        dsup = np.flatnonzero(np.abs(db) > dantzig.NONZERO_TOL)
        print(f"    lasso support ({lsup.size}): {' '.join(design.column_names[j] for j in lsup)}")
        print(f"    DS support ({dsup.size}): {' '.join(design.column_names[j] for j in dsup)}")
        k = lsup[np.argmin(np.abs(lb[lsup]))]
        print(f"    smallest lasso coefficient: {design.column_names[k]} = {lb[k]:.6f}\n")


if __name__ == "__main__":
    main()
