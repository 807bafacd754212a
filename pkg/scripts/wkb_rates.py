#!/usr/bin/env python3
"""Empirical convergence rates of the reduced action integrals.

Prints normalized errors of the small-u and near-critical expansions; flat
columns confirm the stated exponents.
    python scripts/wkb_rates.py --alpha 0.5
"""
import argparse

from anharmonic import OscillatorParams, asymptotic_reference, reduced_wkb_integral, wkb_phase_derivative


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=2.0)
    args = ap.parse_args()
    a = args.alpha

    print(f"alpha = {a}")
    print(f"J1(0) = {reduced_wkb_integral(a, 'J1', 0.0):.12f}")

    print("\nsmall-u expansion of J1 (error / reference rate):")
    for u in (0.2, 0.1, 0.05, 0.025, 0.0125):
        err = abs(reduced_wkb_integral(a, "J1", u)
                  - asymptotic_reference("j1_small_u", a, u=u))
        rate = asymptotic_reference("j1_rate", a, u=u)
        print(f"  u={u:<8g} err={err:.3e} err/rate={err / rate:.4f}")

    nu_star = (1.0 + a) / a ** (a / (a + 1.0))
    slope = asymptotic_reference("j2_slope", a)
    print(f"\nnear-critical J2 (nu* = {nu_star:.12f}, slope {slope:.12f}):")
    for d in (0.1, 0.05, 0.025, 0.0125):
        err = abs(reduced_wkb_integral(a, "J2", nu_star + d) - slope * d)
        print(f"  d={d:<8g} err={err:.3e} err/d^1.5={err / d ** 1.5:.4f}")

    expo = asymptotic_reference("j2_derivative_exponent", a)
    print(f"\nJ2' growth (exponent {expo:+.4f}); normalized values:")
    for nu in (nu_star * 1.5, nu_star * 4.0, nu_star * 16.0, nu_star * 64.0):
        d = wkb_phase_derivative(OscillatorParams(a, nu, 0.5))
        print(f"  nu={nu:<12g} J2'={d:.6f} J2'/nu^expo={d / nu ** expo:.6f}")


if __name__ == "__main__":
    main()
