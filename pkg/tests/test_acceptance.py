"""End-to-end acceptance checks, one per shipped verification criterion.

Each test runs the same check the `verify` command uses, prints a single
summary line, and enforces the runtime budget the check is documented with.
"""
import time

import pytest

from anharmonic import checks


def _run(check, budget):
    t0 = time.perf_counter()
    result = check()
    elapsed = time.perf_counter() - t0
    status = "PASS" if result.passed else "FAIL"
    print("criterion %2d %-28s %s  measured=%.6g bound=%.6g  (%.1fs)"
          % (result.criterion, result.name, status, result.measured,
             result.bound, elapsed))
    assert result.passed, "%s: %s" % (result.name, result.detail)
    assert elapsed < budget, "budget %gs exceeded: %.1fs" % (budget, elapsed)
    return result


def test_criterion_01_quadratic_well_spectrum():
    """Eigenvalue scan reproduces the closed-form levels 4n + 2 ell + 3."""
    _run(checks.check_exact_spectrum_alpha1, 30.0)


def test_criterion_02_quantisation_exactness():
    """Quantisation solver lands on the same lines analytically."""
    _run(checks.check_bohr_sommerfeld_alpha1, 5.0)


def test_criterion_03_large_index_rate():
    """Deviation from the closed-form growth law decays like 1/n."""
    _run(checks.check_large_n_rate, 600.0)


def test_criterion_04_harmonic_subregime():
    """Large-ell ground state approaches the harmonic well at rate ell^-3/2."""
    _run(checks.check_harmonic_subregime, 600.0)


def test_criterion_05_certified_error_bound():
    """Measured approximation error never exceeds the certified bound."""
    _run(checks.check_wkb_error_bound, 60.0)


def test_criterion_06_semiclassical_scaling():
    """The error functional scales linearly in the small parameter."""
    _run(checks.check_hbar_scaling, 60.0)


def test_criterion_07_boundary_ratio_criterion():
    """The boundary ratio equals -1 exactly on the spectrum and only there."""
    _run(checks.check_fock_goncharov_criterion, 120.0)


def test_criterion_08_semiclassical_ratio_accuracy():
    """Boundary ratio matches its phase approximation to first order."""
    _run(checks.check_semiclassical_fg, 120.0)


def test_criterion_09_reduced_integral_asymptotics():
    """Small-u, near-critical, and derivative rates of the J integrals."""
    _run(checks.check_j_asymptotics, 60.0)


def test_criterion_10_stokes_topology_regression():
    """Traced Stokes graphs match the frozen trichotomy topologies."""
    _run(checks.check_stokes_trichotomy, 60.0)
