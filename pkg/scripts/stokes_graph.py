#!/usr/bin/env python3
"""Trace the Stokes complex for a given energy and describe its topology.

Sweep the energy through the critical value to watch the graph reconnect:
    python scripts/stokes_graph.py --alpha 1 --ell 0.5 --energy 1 2 4
"""
import argparse

from anharmonic import OscillatorParams, critical_data, stokes_complex, topology_signature


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--ell", type=float, default=0.5)
    ap.add_argument("--energy", type=float, nargs="+", default=[1.0, 2.0, 4.0])
    args = ap.parse_args()

    cd = critical_data(args.alpha, args.ell)
    print(f"critical energy E* = {cd.e_star:.12f} (double point at x = {cd.x_star:.12f})")
    for e in args.energy:
        sc = stokes_complex(OscillatorParams(args.alpha, e, args.ell))
        sig = topology_signature(sc)
        side = "<" if e < cd.e_star else ("=" if abs(e - cd.e_star) < 1e-12 else ">")
        print(f"\nE = {e}  ({side} E*)")
        print("  vertices:", ", ".join(sig["vertices"]))
        print("  edges:")
        for edge in sig["edges"]:
            print("    ", edge)
        for w in sc.warnings:
            print("  warning:", w)


if __name__ == "__main__":
    main()
