"""Potential data structures: cover points, turning points, rescalings."""
import cmath
import math

import pytest
from hypothesis import given, strategies as st

from anharmonic import (
    CoverPoint,
    OscillatorParams,
    critical_data,
    eval_forcing,
    eval_potential,
    eval_reduced,
    to_hbar_coords,
    turning_points,
)
from anharmonic.model import (
    infinity_arg,
    reduced_in_y,
    sector_center_arg,
    sector_half_width,
)


finite = st.floats(allow_nan=False, allow_infinity=False)


class TestCoverPoint:
    def test_branch_selection(self):
        p = CoverPoint.from_complex(-1.0 + 0.0j, near_arg=0.0)
        q = CoverPoint.from_complex(-1.0 + 0.0j, near_arg=-2.0)
        assert math.isclose(p.arg, math.pi)
        assert math.isclose(q.arg, -math.pi)

    def test_power_sees_the_sheet(self):
        # same projection, one extra turn: x^s gains exp(2 pi i s)
        base = CoverPoint(2.0, 0.3)
        lifted = base.rotated(2.0 * math.pi)
        s = 0.37 + 0.21j
        ratio = lifted.cpow(s) / base.cpow(s)
        assert abs(ratio - cmath.exp(2j * math.pi * s)) < 1e-12

    @given(mod=st.floats(0.1, 50.0), arg=st.floats(-9.0, 9.0),
           s=st.floats(-2.0, 2.0))
    def test_power_matches_log(self, mod, arg, s):
        p = CoverPoint(mod, arg)
        assert abs(p.cpow(s) - cmath.exp(s * p.clog())) < 1e-10 * mod ** s

    def test_round_trip(self):
        z = 1.7 - 0.4j
        assert abs(CoverPoint.from_complex(z).to_complex() - z) < 1e-15


class TestTurningPoints:
    def test_quadratic_well_closed_form(self):
        # at alpha=1 the zeros solve x^4 - E x^2 + lam^2 = 0
        for e, ell in ((3.9, 0.3), (11.0, 1.6)):
            lam = ell + 0.5
            disc = math.sqrt(e * e - 4.0 * lam * lam)
            lo = math.sqrt((e - disc) / 2.0)
            hi = math.sqrt((e + disc) / 2.0)
            tp = turning_points(OscillatorParams(1.0, e, ell))
            assert tp.real_pair is not None
            assert abs(tp.real_pair[0] - lo) < 1e-10
            assert abs(tp.real_pair[1] - hi) < 1e-10

    @pytest.mark.parametrize("alpha,ell,energy", [
        (1.0, 0.3, 5.2), (2.0, 0.0, 3.8), (0.6, 1.1, 7.0), (2.0, 4.0, 30.0),
    ])
    def test_roots_annihilate_the_potential(self, alpha, ell, energy):
        params = OscillatorParams(alpha, energy, ell)
        tp = turning_points(params)
        scale = abs(energy)
        if tp.real_pair is not None:
            for x in tp.real_pair:
                assert abs(eval_reduced(params, CoverPoint(x, 0.0))) < 1e-8 * scale
        assert tp.sector_points
        for p in tp.sector_points:
            assert abs(eval_reduced(params, p)) < 1e-8 * scale

    def test_below_critical_pair_disappears(self):
        cd = critical_data(2.0, 0.5)
        tp = turning_points(OscillatorParams(2.0, 0.5 * cd.e_star, 0.5))
        assert tp.real_pair is None
        assert tp.sector_points

    def test_degenerate_energy_collapses_the_pair(self):
        cd = critical_data(2.0, 0.5)
        tp = turning_points(OscillatorParams(2.0, cd.e_star, 0.5))
        assert tp.real_pair is not None
        assert abs(tp.real_pair[0] - cd.x_star) < 1e-7
        assert abs(tp.real_pair[1] - cd.x_star) < 1e-7

    def test_schwarz_symmetry(self):
        # real energy: the zero set is closed under conjugation
        tp = turning_points(OscillatorParams(2.0, 1.5, 0.5))
        zs = [p.to_complex() for p in tp.sector_points]
        for z in zs:
            assert min(abs(z.conjugate() - w) for w in zs) < 1e-9


class TestCriticalData:
    def test_well_bottom(self):
        cd = critical_data(2.0, 0.7)
        params = OscillatorParams(2.0, cd.e_star, 0.7)
        h = 1e-6
        v0 = eval_reduced(params, CoverPoint(cd.x_star, 0.0)).real
        vp = eval_reduced(params, CoverPoint(cd.x_star + h, 0.0)).real
        vm = eval_reduced(params, CoverPoint(cd.x_star - h, 0.0)).real
        assert abs(v0) < 1e-10
        assert vp > v0 and vm > v0

    def test_blown_up_constants(self):
        cd = critical_data(2.0, 0.5)
        assert math.isclose(cd.nu_star, 3.0 / 2.0 ** (2.0 / 3.0), rel_tol=1e-14)
        assert math.isclose(cd.y_star, 2.0 ** (-1.0 / 6.0), rel_tol=1e-14)
        # e_star and x_star are the lam-scaled versions of the same constants
        lam = 1.0
        assert math.isclose(cd.e_star, cd.nu_star * lam, rel_tol=1e-14)


class TestRescaling:
    @given(y_re=st.floats(0.3, 3.0), y_im=st.floats(-1.0, 1.0),
           regime=st.sampled_from([1, 2]))
    def test_reduced_potential_identity(self, y_re, y_im, regime):
        """scale^2 V(scale*y) equals hbar^-2 times the rescaled potential."""
        params = OscillatorParams(2.0, 9.0, 3.5)
        co = to_hbar_coords(params, regime)
        y = complex(y_re, y_im)
        lhs = co.scale ** 2 * eval_reduced(params, CoverPoint.from_complex(co.scale * y))
        rhs = reduced_in_y(co, params.alpha, y) / co.hbar ** 2
        assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(rhs))

    def test_regime_two_constants(self):
        params = OscillatorParams(2.0, 9.0, 3.5)
        co = to_hbar_coords(params, 2)
        assert math.isclose(co.hbar, 1.0 / 4.0, rel_tol=1e-15)
        assert math.isclose(co.scale, 4.0 ** (1.0 / 3.0), rel_tol=1e-15)
        assert math.isclose(co.nu, 9.0 * 4.0 ** (-4.0 / 3.0), rel_tol=1e-15)


class TestForcing:
    def test_pole_cancellation_at_origin(self):
        # the 1/(4x^2) pieces cancel; the leftover vanishes into the origin
        params = OscillatorParams(1.0, 2.0, 0.3)
        mags = [abs(eval_forcing(params, CoverPoint(t, 0.4)))
                for t in (1e-2, 1e-3, 1e-4)]
        assert mags[0] < 0.1
        assert mags[2] < mags[1] < mags[0]

    def test_decay_at_infinity(self):
        params = OscillatorParams(1.0, 2.0, 0.3)
        f10 = abs(eval_forcing(params, CoverPoint(10.0, 0.2)))
        f40 = abs(eval_forcing(params, CoverPoint(40.0, 0.2)))
        # cubic decay in the modulus
        assert f40 < f10 * (10.0 / 40.0) ** 2.5

    def test_potential_vs_reduced(self):
        params = OscillatorParams(1.5, 4.0, 0.8)
        x = CoverPoint.from_complex(1.2 + 0.7j)
        diff = eval_reduced(params, x) - eval_potential(params, x)
        assert abs(diff - 0.25 / x.to_complex() ** 2) < 1e-13


def test_sector_layout():
    a = 1.0
    assert math.isclose(sector_center_arg(a, 1) - sector_center_arg(a, 0),
                        math.pi / 2.0)
    assert math.isclose(sector_half_width(a), math.pi / 4.0)
    # escape directions interleave the sector centers
    assert sector_center_arg(a, 0) < infinity_arg(a, 0) < sector_center_arg(a, 1)
