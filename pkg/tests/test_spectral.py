"""Spectral determinant, eigenvalue scan, and boundary-ratio criteria."""
import cmath
import math

import numpy as np
import pytest
from scipy.special import gamma

from anharmonic import (
    OscillatorParams,
    eigenvalues,
    fock_goncharov,
    r_zero,
    sector_wronskian,
    semiclassical_r_zero,
    spectral_determinant,
    spectrum_table,
    stokes_multiplier,
    bohr_sommerfeld_energy,
)


def quartic_odd_levels(count, size=400):
    """Quartic eigenvalues with a node at the origin, by basis diagonalization.

    Oscillator-basis matrices for p^2 + x^4; the odd-parity levels of the line
    problem are the radial levels at vanishing angular momentum.
    """
    n = np.arange(size)
    x = np.zeros((size, size))
    off = np.sqrt((n[:-1] + 1) / 2.0)
    x[n[:-1], n[:-1] + 1] = off
    x[n[:-1] + 1, n[:-1]] = off
    x2 = x @ x
    h = 2.0 * np.diag(n + 0.5) - x2 + x2 @ x2
    ev = np.linalg.eigvalsh(h)
    return ev[1:2 * count:2]


class TestQuadraticWell:
    @pytest.mark.parametrize("ell", [0.0, 0.5])
    def test_spectrum_lies_on_the_lines(self, ell):
        got = eigenvalues(1.0, ell, 4, rel_tol=1e-9)
        want = [4.0 * n + 2.0 * ell + 3.0 for n in range(5)]
        assert len(got) == 5
        for g, w in zip(got, want):
            assert abs(g / w - 1.0) < 1e-7

    @pytest.mark.parametrize("energy,ell", [(3.9, 0.3), (1.2, 0.0), (8.5, 1.7)])
    def test_determinant_gamma_ratio(self, energy, ell):
        got = spectral_determinant(OscillatorParams(1.0, energy, ell)).value
        want = -2.0 * gamma((2.0 * ell + 3.0) / 2.0) / gamma((2.0 * ell + 3.0 - energy) / 4.0)
        assert abs(got - want) < 1e-7 * abs(want)

    @pytest.mark.parametrize("energy,ell", [(3.9, 0.3), (6.1, 1.2)])
    def test_boundary_ratio_closed_form(self, energy, ell):
        got = r_zero(OscillatorParams(1.0, energy, ell))
        want = cmath.exp(-2j * math.pi * (energy - 2.0 * ell - 1.0) / 4.0)
        assert abs(got - want) < 1e-9


class TestQuarticWell:
    def test_levels_match_basis_diagonalization(self):
        want = quartic_odd_levels(2)
        got = eigenvalues(2.0, 0.0, 1, rel_tol=1e-9)
        for g, w in zip(got, want):
            assert abs(g / w - 1.0) < 5e-8

    def test_quantisation_tracks_the_scan(self):
        tab = spectrum_table(2.0, 0.0, 3, methods=("exact", "bs"), rel_tol=1e-9)
        devs = [r.rel_dev_bs for r in tab]
        assert all(d < 0.05 for d in devs)
        # the agreement improves with the level index
        assert devs[-1] < devs[0]


class TestConnectionData:
    def test_adjacent_wronskians_are_constant(self):
        params = OscillatorParams(1.0, 3.9, 0.3)
        for k in (-1, 0, 1):
            m, ls = sector_wronskian(params, k, k + 1)
            got = m * cmath.exp(ls)
            assert abs(got - 2.0 * (-1.0) ** k) < 1e-6

    def test_multipliers_combine_into_the_cross_ratio(self):
        params = OscillatorParams(1.0, 3.9, 0.3)
        s0 = stokes_multiplier(params, 0)
        s1 = stokes_multiplier(params, 1)
        r = fock_goncharov(params, (0, 2, 1, -1))
        assert abs(s0 * s1 - r) < 1e-7 * max(1.0, abs(r))

    def test_cross_ratio_rejects_repeats(self):
        with pytest.raises(ValueError):
            fock_goncharov(OscillatorParams(1.0, 3.9, 0.3), (0, 1, 1, 2))


class TestSpectralCriterion:
    def test_ratio_hits_minus_one_on_the_spectrum(self):
        e0 = 4.0  # n=0 line at ell=1/2
        got = r_zero(OscillatorParams(1.0, e0, 0.5))
        assert abs(got + 1.0) < 1e-6

    def test_ratio_away_from_the_spectrum(self):
        got = r_zero(OscillatorParams(1.0, 6.0, 0.5))
        assert abs(got + 1.0) > 0.5

    def test_semiclassical_phase_cancels(self):
        ell = 5.0
        e = bohr_sommerfeld_energy(1.0, ell, 0)
        params = OscillatorParams(1.0, e, ell)
        res = abs(r_zero(params) * semiclassical_r_zero(params) - 1.0)
        assert res < 1e-6


class TestDeterminantValue:
    def test_scaled_representation(self):
        d = spectral_determinant(OscillatorParams(1.0, 3.9, 0.3))
        assert abs(d.value - d.mantissa * cmath.exp(d.logscale)) < 1e-12 * abs(d.value)
        assert math.isclose(d.log_abs, math.log(abs(d.value)), rel_tol=1e-9)

    def test_real_on_the_real_energy_axis(self):
        d = spectral_determinant(OscillatorParams(2.0, 2.7, 0.4))
        assert abs(d.value.imag) < 1e-8 * abs(d.value)
