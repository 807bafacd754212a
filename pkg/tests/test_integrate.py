"""Series seeds, asymptotic seeds, and complex-plane transport."""
import cmath
import math

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from anharmonic import CoverPoint, OscillatorParams, PathSpec
from anharmonic.integrate import (
    SolutionState,
    big_R,
    big_R_prime,
    choose_x_max,
    frobenius_eval,
    frobenius_seed,
    propagate,
    r_expansion,
    wronskian,
)

mp.mp.dps = 25


def whittaker_w(energy, ell, z):
    """Recessive confluent solution of the quadratic well, for cross-checks."""
    z = mp.mpc(z)
    return mp.sqrt(1.0 / z) * mp.whitw(energy / 4.0, (2.0 * ell + 1.0) / 4.0, z * z)


def whittaker_m(energy, ell, z):
    z = mp.mpc(z)
    return mp.sqrt(1.0 / z) * mp.whitm(energy / 4.0, (2.0 * ell + 1.0) / 4.0, z * z)


class TestSeriesSeed:
    @pytest.mark.parametrize("energy,ell", [(3.7, 0.4), (9.2, 1.3)])
    def test_matches_confluent_solution(self, energy, ell):
        seed = frobenius_seed(1.0, ell)
        for x in (0.3, 0.9):
            val, dval, rem = frobenius_eval(seed, energy, x)
            ref = complex(whittaker_m(energy, ell, x))
            h = mp.mpf("1e-10")
            refd = complex((whittaker_m(energy, ell, x + h)
                            - whittaker_m(energy, ell, x - h)) / (2 * h))
            assert abs(val - ref) < 1e-10 * abs(ref)
            assert abs(dval - refd) < 1e-6 * abs(refd)
            assert rem < 1e-12 * abs(val)

    def test_remainder_carries_the_prefactor(self):
        # at large ell the x^(ell+1) prefactor is astronomically small and the
        # truncation estimate must shrink with it
        seed = frobenius_seed(1.0, 200.0)
        val, _, rem = frobenius_eval(seed, 405.0, 0.05)
        assert 0 < abs(val) < 1e-200
        assert rem < 1e-10 * abs(val)

    def test_indicial_exponent(self):
        seed = frobenius_seed(2.0, 1.5)
        v1, _, _ = frobenius_eval(seed, 1.0, 1e-3)
        v2, _, _ = frobenius_eval(seed, 1.0, 2e-3)
        assert abs(v2 / v1 - 2.0 ** 2.5) < 1e-4


class TestExponentExpansion:
    def test_log_branch_of_the_quadratic_well(self):
        # alpha=1: R(x) = x^2/2 - (E/2) log x, including the cover argument
        e = 3.3
        exp_ = r_expansion(1.0, e)
        assert exp_.log_flag
        p = CoverPoint(5.0, 2.0 * math.pi)
        ref = p.cpow(2.0) / 2.0 - 0.5 * e * p.clog()
        assert abs(big_R(exp_, p) - ref) < 1e-12 * abs(ref)
        refp = p.to_complex() - 0.5 * e / p.to_complex()
        assert abs(big_R_prime(exp_, p) - refp) < 1e-12 * abs(refp)

    def test_pure_leading_term(self):
        # alpha=2 keeps only x^3/3: the next exponent is already negative
        exp_ = r_expansion(2.0, 1.7)
        assert not exp_.log_flag
        assert abs(big_R(exp_, CoverPoint(3.0, 0.0)) - 9.0) < 1e-12

    def test_power_branch(self):
        e = 1.7
        exp_ = r_expansion(0.6, e)
        assert not exp_.log_flag
        x = CoverPoint(3.0, 0.0)
        ref = 3.0 ** 1.6 / 1.6 - 0.5 * e * 3.0 ** 0.4 / 0.4
        assert abs(big_R(exp_, x) - ref) < 1e-12 * abs(ref)


class TestTransport:
    def test_real_axis_against_confluent_solution(self):
        e, ell = 3.3, 0.7
        params = OscillatorParams(1.0, e, ell)
        a, b = CoverPoint(8.0, 0.0), CoverPoint(2.0, 0.0)
        h = mp.mpf("1e-10")
        w0 = whittaker_w(e, ell, 8.0)
        wd0 = (whittaker_w(e, ell, 8.0 + h) - whittaker_w(e, ell, 8.0 - h)) / (2 * h)
        st_ = SolutionState(a, complex(w0), complex(wd0), 0.0, "oracle")
        out = propagate(params, st_, PathSpec((a, b), ("line",), "principal"),
                        rtol=1e-11)
        got = out.value * cmath.exp(out.logscale)
        ref = complex(whittaker_w(e, ell, 2.0))
        assert abs(got - ref) < 1e-9 * abs(ref)

    def test_arc_against_confluent_solution(self):
        # analytic continuation along |x| = 4 into the upper half plane
        e, ell = 3.3, 0.7
        params = OscillatorParams(1.0, e, ell)
        a, b = CoverPoint(4.0, 0.0), CoverPoint(4.0, 0.5)
        h = mp.mpf("1e-12")
        w0 = whittaker_w(e, ell, 4.0)
        wd0 = (whittaker_w(e, ell, 4.0 + h) - whittaker_w(e, ell, 4.0 - h)) / (2 * h)
        st_ = SolutionState(a, complex(w0), complex(wd0), 0.0, "oracle")
        out = propagate(params, st_, PathSpec((a, b), ("arc",), "principal"),
                        rtol=1e-11)
        got = out.value * cmath.exp(out.logscale)
        ref = complex(whittaker_w(e, ell, 4.0 * cmath.exp(0.5j)))
        assert abs(got - ref) < 1e-9 * abs(ref)

    @given(re0=st.floats(1.6, 2.8), im0=st.floats(0.3, 1.1),
           re1=st.floats(1.6, 2.8), im1=st.floats(0.3, 1.1))
    def test_round_trip_at_low_contrast(self, re0, im0, re1, im1):
        """There and back again reproduces the initial data.

        Only meaningful while exp(2 Re S) stays moderate over the box; a long
        leg toward dominance wipes out the recessive component in doubles.
        """
        params = OscillatorParams(1.0, 2.0, 0.3)
        a = CoverPoint.from_complex(complex(re0, im0))
        b = CoverPoint.from_complex(complex(re1, im1))
        if abs(a.to_complex() - b.to_complex()) < 1e-3:
            return
        st_ = SolutionState(a, 1.0 + 0.2j, -0.3 + 0.1j, 0.0, "t")
        fwd = propagate(params, st_, PathSpec((a, b), ("line",), "principal"),
                        rtol=1e-10)
        back = propagate(params, fwd, PathSpec((b, a), ("line",), "principal"),
                         rtol=1e-10)
        v0 = st_.value * cmath.exp(st_.logscale)
        v1 = back.value * cmath.exp(back.logscale)
        assert abs(v1 - v0) < 1e-7 * abs(v0)

    def test_wronskian_of_independent_data(self):
        x = CoverPoint(2.0, 0.0)
        s1 = SolutionState(x, 1.0, 0.0, 0.5, "a")
        s2 = SolutionState(x, 0.0, 3.0, 1.0, "b")
        m, ls = wronskian(s1, s2)
        assert abs(m * cmath.exp(ls) - 3.0 * cmath.exp(1.5)) < 1e-12


class TestSeedRadius:
    def test_default_scales_with_the_well(self):
        small = choose_x_max(OscillatorParams(1.0, 4.0, 0.0))
        large = choose_x_max(OscillatorParams(1.0, 400.0, 0.0))
        assert small == 20.0
        assert large > 50.0

    def test_budget_clamp_is_monotone(self):
        params = OscillatorParams(1.0, 400.0, 0.0)
        r1 = choose_x_max(params, delta_r_budget=20.0)
        r2 = choose_x_max(params, delta_r_budget=80.0)
        assert r1 <= r2 <= choose_x_max(params)
