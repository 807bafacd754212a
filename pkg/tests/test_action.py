"""Action integrals, the blown-up J integrals, and quantisation."""
import math

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from anharmonic import (
    OscillatorParams,
    asymptotic_reference,
    bohr_sommerfeld_energy,
    critical_data,
    reduced_wkb_integral,
    turning_points,
    wkb_phase,
    wkb_phase_derivative,
)


class TestQuadraticWell:
    """At alpha=1 every quantity here has a closed form."""

    @pytest.mark.parametrize("energy,ell", [(3.9, 0.3), (7.0, 0.0), (12.5, 2.2)])
    def test_phase_is_linear_in_energy(self, energy, ell):
        got = wkb_phase(OscillatorParams(1.0, energy, ell))
        assert abs(got - (energy - 2.0 * ell - 1.0) / 4.0) < 1e-10

    def test_phase_derivative_is_constant(self):
        got = wkb_phase_derivative(OscillatorParams(1.0, 6.3, 0.8))
        assert abs(got - 0.25) < 1e-8

    @pytest.mark.parametrize("u", [0.0, 0.1, 0.3, 0.49])
    def test_j1_line(self, u):
        assert abs(reduced_wkb_integral(1.0, "J1", u) - (1.0 - 2.0 * u) / 4.0) < 1e-12

    @pytest.mark.parametrize("nu", [2.0, 5.0, 20.0])
    def test_j2_line(self, nu):
        assert abs(reduced_wkb_integral(1.0, "J2", nu) - (nu - 2.0) / 4.0) < 1e-12

    @pytest.mark.parametrize("ell,n", [(0.0, 0), (0.5, 3), (1.4, 1)])
    def test_quantisation_recovers_the_lines(self, ell, n):
        got = bohr_sommerfeld_energy(1.0, ell, n)
        assert abs(got / (4.0 * n + 2.0 * ell + 3.0) - 1.0) < 1e-8


class TestJIntegrals:
    @pytest.mark.parametrize("alpha", [0.5, 2.0, 3.7])
    def test_j1_zero_against_quadrature(self, alpha):
        # (1/pi) integral of sqrt(1 - y^2a) over the classical region
        ref = mp.quad(lambda y: mp.sqrt(1.0 - y ** (2.0 * alpha)), [0, 1]) / mp.pi
        got = reduced_wkb_integral(alpha, "J1", 0.0)
        assert abs(got - float(ref)) < 1e-10

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_j2_vanishes_at_critical_point(self, alpha):
        nu_star = (1.0 + alpha) / alpha ** (alpha / (alpha + 1.0))
        assert abs(reduced_wkb_integral(alpha, "J2", nu_star)) < 1e-10

    @given(alpha=st.floats(0.4, 3.0), nu=st.floats(3.0, 40.0))
    def test_duality(self, alpha, nu):
        """J2 at large argument is a rescaled J1 at small argument, exactly."""
        expo = (alpha + 1.0) / (2.0 * alpha)
        j2 = reduced_wkb_integral(alpha, "J2", nu)
        j1 = reduced_wkb_integral(alpha, "J1", nu ** -expo)
        assert abs(j2 - nu ** expo * j1) < 1e-8 * max(1.0, abs(j2))

    def test_large_nu_expansion_rate(self):
        a = 2.0
        ratios = []
        for nu in (20.0, 80.0):
            err = abs(reduced_wkb_integral(a, "J2", nu)
                      - asymptotic_reference("j2_large_nu", a, nu=nu))
            ratios.append(err / asymptotic_reference("j2_large_rate", a, nu=nu))
        assert all(r < 0.5 for r in ratios)
        # the normalized error is flat, so the rate exponent is right
        assert 0.5 < ratios[1] / ratios[0] < 2.0


class TestPhase:
    def test_matches_brute_quadrature(self):
        params = OscillatorParams(2.0, 5.0, 0.7)
        lo, hi = turning_points(params).real_pair

        def p(x):
            x = mp.mpf(x)
            return mp.sqrt(params.energy - x ** 4 - params.lam ** 2 / x ** 2)

        ref = mp.quad(p, [lo * (1 + 1e-12), hi * (1 - 1e-12)]) / mp.pi
        assert abs(wkb_phase(params) - float(ref)) < 1e-6

    @given(s=st.floats(0.4, 2.5))
    def test_scaling_covariance(self, s):
        # x -> s*x maps the well onto another one; the phase transforms exactly
        alpha, e, lam = 2.0, 7.3, 1.1
        i0 = wkb_phase(OscillatorParams(alpha, e, lam - 0.5))
        i1 = wkb_phase(OscillatorParams(alpha, s ** (-2.0 * alpha) * e,
                                        s ** -(alpha + 1.0) * lam - 0.5))
        assert abs(i0 - s ** (alpha + 1.0) * i1) < 1e-8 * i0

    @pytest.mark.parametrize("alpha,ell,energy", [(2.0, 0.7, 6.0), (0.6, 1.2, 9.0)])
    def test_derivative_positive_and_consistent(self, alpha, ell, energy):
        d = wkb_phase_derivative(OscillatorParams(alpha, energy, ell))
        h = 1e-5 * energy
        fd = (wkb_phase(OscillatorParams(alpha, energy + h, ell))
              - wkb_phase(OscillatorParams(alpha, energy - h, ell))) / (2.0 * h)
        assert d > 0
        assert abs(d - fd) < 1e-6 * d


class TestQuantisation:
    @pytest.mark.parametrize("alpha,ell,n", [(2.0, 0.7, 0), (2.0, 0.7, 3), (0.6, 1.2, 2)])
    def test_solver_inverts_the_phase(self, alpha, ell, n):
        e = bohr_sommerfeld_energy(alpha, ell, n)
        assert abs(wkb_phase(OscillatorParams(alpha, e, ell)) - (n + 0.5)) < 1e-10
        assert e > critical_data(alpha, ell).e_star

    def test_levels_increase(self):
        es = [bohr_sommerfeld_energy(2.0, 0.0, n) for n in range(5)]
        assert all(b > a for a, b in zip(es, es[1:]))


class TestReferences:
    def test_quadratic_line_is_exact(self):
        # bracket constant is 1 at alpha=1, so the reference is 4n + 2ell + 1
        got = asymptotic_reference("spectrum_large_n", 1.0, ell=0.0, n=10)
        assert abs(got - 41.0) < 1e-12

    def test_harmonic_coefficient(self):
        got = asymptotic_reference("harmonic_coefficient", 2.0)
        assert math.isclose(got, 4.0 * math.sqrt(2.0) / math.sqrt(3.0), rel_tol=1e-14)

    def test_coalescing_pair_two_term_expansion(self):
        a = 2.0
        nu_star = (1.0 + a) / a ** (a / (a + 1.0))
        errs = []
        for d in (1e-2, 1e-3):
            tp = turning_points(OscillatorParams(a, nu_star + d, 0.5))
            lo, hi = asymptotic_reference("coalescing_tps", a, nu=nu_star + d)
            errs.append(max(abs(tp.real_pair[0] - lo), abs(tp.real_pair[1] - hi)))
        assert errs[1] < 1e-5
        # residual shrinks like d^(3/2): one decade in d gives ~10^1.5 in error
        assert 15.0 < errs[0] / errs[1] < 60.0

    def test_rejects_unknown_identifier(self):
        with pytest.raises(KeyError):
            asymptotic_reference("no_such_thing", 1.0)
