"""Integral-equation solver and the certified error functionals."""
import math

import pytest

from anharmonic import OscillatorParams, error_functionals, volterra_solve
from anharmonic.checks import committed_curves, measured_wkb_deviation
from anharmonic.volterra import _safe_bound, kernel_b


def _curve(index):
    name, params, path = committed_curves()[index]
    return params, path


class TestIntegralEquation:
    def test_matches_direct_integration(self):
        """The series solution and the transported ODE agree on the deviation."""
        params, path = _curve(0)
        run = volterra_solve(params, path, n=801)
        dev_int = max(abs(z - 1.0) for z in run.z_values)
        dev_ode = measured_wkb_deviation(params, path)
        assert abs(dev_int - dev_ode) < 1e-3 * dev_ode

    def test_starts_from_one(self):
        params, path = _curve(2)
        run = volterra_solve(params, path)
        assert run.z_values[0] == 1.0 + 0.0j

    def test_converges_quickly(self):
        params, path = _curve(0)
        run = volterra_solve(params, path)
        assert run.iterations < 30


class TestCertificates:
    @pytest.mark.parametrize("index", [0, 2, 4])
    def test_bound_covers_the_solution(self, index):
        params, path = _curve(index)
        run = volterra_solve(params, path, n=801)
        dev = max(abs(z - 1.0) for z in run.z_values)
        assert dev <= run.bound

    def test_refinement_never_hurts(self):
        params, path = _curve(0)
        ef = error_functionals(params, path, refined=True)
        assert ef.refined_rho is not None
        assert ef.refined_rho <= ef.rho + 1e-15
        assert ef.refined_bound <= ef.bound + 1e-15

    def test_monotone_curve_has_flat_beta(self):
        params, path = _curve(0)
        ef = error_functionals(params, path)
        assert ef.beta <= 0.0
        assert ef.beta > -1e-6


class TestKernel:
    def test_vanishes_on_the_diagonal(self):
        params, path = _curve(0)
        assert abs(kernel_b(params, path, 0.37, 0.37)) < 1e-12

    @pytest.mark.parametrize("t,s", [(0.9, 0.1), (0.6, 0.5), (1.0, 0.0)])
    def test_bounded_on_monotone_curves(self, t, s):
        # |(exp(-2 dS) - 1)/2| <= 1 once Re dS >= 0 along the curve
        params, path = _curve(0)
        assert abs(kernel_b(params, path, t, s)) <= 1.0 + 1e-9


class TestSafeBound:
    def test_small_arguments(self):
        assert _safe_bound(0.0, 0.0) == 0.0
        assert math.isclose(_safe_bound(1e-3, 0.0), math.expm1(1e-3), rel_tol=1e-12)

    def test_saturates_instead_of_overflowing(self):
        assert _safe_bound(1.0, -5000.0) == math.inf
        assert _safe_bound(1e6, 0.0) == math.inf

    def test_monotone_in_rho(self):
        assert _safe_bound(0.1, 0.0) < _safe_bound(0.2, 0.0)
