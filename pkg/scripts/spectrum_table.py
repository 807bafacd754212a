#!/usr/bin/env python3
"""Print an eigenvalue table comparing the scan, quantisation, and asymptotics.

Example:
    python scripts/spectrum_table.py --alpha 2 --ell 0 --n-max 8
"""
import argparse

from anharmonic import spectrum_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("--ell", type=float, default=0.0)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--rel-tol", type=float, default=1e-9)
    args = ap.parse_args()

    rows = spectrum_table(args.alpha, args.ell, args.n_max, rel_tol=args.rel_tol)
    print(f"alpha={args.alpha} ell={args.ell}")
    print(f"{'n':>3} {'E (scan)':>18} {'E (quantisation)':>18} {'E (asymptotic)':>18}"
          f" {'dev q':>10} {'dev a':>10}")
    for r in rows:
        print(f"{r.n:>3} {r.e_exact:>18.12f} {r.e_bs:>18.12f} {r.e_asym:>18.12f}"
              f" {r.rel_dev_bs:>10.2e} {r.rel_dev_asym:>10.2e}")
    print("\nscaled deviations n * |E/E_asym - 1| (flat means the 1/n rate holds):")
    for r in rows:
        if r.n >= 1:
            print(f"  n={r.n:<3d} {r.n * r.rel_dev_asym:.6f}")


if __name__ == "__main__":
    main()
