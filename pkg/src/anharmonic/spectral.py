"""Spectral quantities: the determinant, eigenvalue scans, Stokes multipliers,
sector cross-ratios, and the monodromy-type ratio on the positive axis.

Conventions used throughout (Wr[f, g] = f g' - f' g):

 * Q(E)    = Wr[chi, psi_0], chi the regular solution at the origin and psi_0
             the recessive solution of the sector containing the positive
             axis; eigenvalues are the zeros of Q on the real E axis.
 * sigma_k = Wr[psi_{k-1}, psi_{k+1}] / Wr[psi_{k-1}, psi_k].
 * W_a(b, d) = Wr[psi_a, psi_b] / Wr[psi_a, psi_d], and the quadruple ratio
             R_{(a,b,c,d)} = -W_a(b, d) / W_c(b, d).
 * R0      = -Wr[chi, psi_1] / Wr[chi, psi_{-1}], which approaches -1 at
             eigenvalues and equals exp(-2 pi i I(E)) to leading order in the
             semiclassical regime.

Normalization fact used by the tests: Wr[psi_k, psi_{k+1}] = 2 (-1)^k exactly,
since both normalized asymptotic forms hold between the two sectors and the
cover powers cancel in the product.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import CoverPoint, OscillatorParams, critical_data, turning_points
from .action import (
    bohr_sommerfeld_energy,
    asymptotic_reference,
    wkb_phase,
    wkb_phase_derivative,
)
from .integrate import (
    SolutionState,
    choose_x_max,
    frobenius_eval,
    frobenius_seed,
    propagate,
    seed_x0,
    sibuya_seed,
    wronskian,
)
from .action import PathSpec

__all__ = [
    "DeterminantValue",
    "SpectrumRecord",
    "spectral_determinant",
    "eigenvalues",
    "asymptotic_spectrum",
    "spectrum_table",
    "stokes_multiplier",
    "sector_wronskian",
    "fock_goncharov",
    "r_zero",
    "semiclassical_r_zero",
]


@dataclass(frozen=True)
class DeterminantValue:
    """Wronskian Wr[chi, psi_0] as mantissa * exp(logscale)."""

    mantissa: complex
    logscale: float

    @property
    def value(self) -> complex:
        return self.mantissa * cmath.exp(self.logscale)

    @property
    def log_abs(self) -> float:
        return math.log(abs(self.mantissa)) + self.logscale


@dataclass(frozen=True)
class SpectrumRecord:
    n: int
    e_exact: float | None
    e_bs: float | None
    e_asym: float | None
    rel_dev_bs: float | None
    rel_dev_asym: float | None


@lru_cache(maxsize=64)
def _series_table(alpha: float, ell: float):
    return frobenius_seed(alpha, ell)


def _geometry(params: OscillatorParams) -> tuple[float, float]:
    """(match radius, outer turning point or bowl scale) from the real part of E."""
    geo = OscillatorParams(params.alpha, complex(params.energy).real, params.ell)
    tp = turning_points(geo)
    if tp.real_pair is not None:
        return tp.real_pair[1], tp.real_pair[1]
    x_star = critical_data(params.alpha, params.ell).x_star
    return max(1.0, x_star), x_star


def _chi_state(params: OscillatorParams, x_match: float, rtol: float) -> SolutionState:
    table = _series_table(params.alpha, params.ell)
    x0 = seed_x0(params)
    val, dval, rem = frobenius_eval(table, params.energy, x0)
    if val == 0:
        raise RuntimeError("series seed underflowed; ell too large for doubles")
    if rem > 1e-10 * abs(val):
        raise RuntimeError("series seed not converged at the seeding radius")
    state = SolutionState(CoverPoint(x0, 0.0), val, dval, 0.0, "chi_plus").rescaled()
    path = PathSpec((CoverPoint(x0, 0.0), CoverPoint(x_match, 0.0)), ("ray",),
                    "principal")
    return propagate(params, state, path, rtol=rtol)


def _arc_nodes(modulus: float, arg_from: float, arg_to: float) -> list[CoverPoint]:
    """Arc endpoints chunked so each piece subtends at most pi/2."""
    steps = max(1, int(math.ceil(abs(arg_to - arg_from) / (0.5 * math.pi))))
    return [CoverPoint(modulus, arg_from + (arg_to - arg_from) * j / steps)
            for j in range(1, steps + 1)]


def _psi_state(params: OscillatorParams, k: int, meet: CoverPoint, x_max: float,
               refine: bool, tail_n: int, rtol: float) -> SolutionState:
    """Sector-k recessive solution transported to the meeting point.

    The route is ray first, arc second: inward transport on the native ray is
    the stable direction for a recessive seed, and taking the arc at the small
    meeting modulus keeps the solutions of different sectors numerically
    independent (at large modulus two transported dominant solutions become
    parallel to working precision and their Wronskian drowns in cancellation).
    """
    state = sibuya_seed(params, k, x_max, refine=refine, tail_n=tail_n)
    arg_k = k * math.pi / (params.alpha + 1.0)
    nodes = [CoverPoint(x_max, arg_k)]
    kinds: list[str] = []
    if abs(meet.modulus - x_max) > 1e-14:
        nodes.append(CoverPoint(meet.modulus, arg_k))
        kinds.append("ray")
    if abs(meet.arg - arg_k) > 1e-14:
        arcs = _arc_nodes(meet.modulus, arg_k, meet.arg)
        nodes.extend(arcs)
        kinds.extend(["arc"] * len(arcs))
    if not kinds:
        return state
    path = PathSpec(tuple(nodes), tuple(kinds), "principal")
    return propagate(params, state, path, rtol=rtol)


def spectral_determinant(params: OscillatorParams, x_match: float | None = None,
                         x_max: float | None = None, refine: bool = True,
                         tail_n: int = 801, rtol: float = 1e-10,
                         x_max_budget: float | None = None) -> DeterminantValue:
    """Q(E) = Wr[chi, psi_0], zero exactly at the eigenvalues.

    chi is carried outward from the origin series, psi_0 inward from its ray
    seed; both transports run toward their stable direction, so the result is
    insensitive to seeding error (which only enters multiplicatively).
    """
    if x_match is None:
        x_match, _ = _geometry(params)
    if x_max is None:
        x_max = choose_x_max(params, delta_r_budget=x_max_budget)
    if x_max <= x_match:
        x_max = 1.5 * x_match
    chi = _chi_state(params, x_match, rtol)
    psi = _psi_state(params, 0, CoverPoint(x_match, 0.0), x_max, refine, tail_n, rtol)
    m, l = wronskian(chi, psi)
    return DeterminantValue(m, l)


def _phase_index(alpha: float, ell: float, energy: float) -> int:
    """Bohr-Sommerfeld index of an eigenvalue: I(E) is close to n + 1/2."""
    p = OscillatorParams(alpha, energy, ell)
    return int(round(wkb_phase(p) - 0.5))


def eigenvalues(alpha: float, ell: float, n_max: int,
                rel_tol: float = 1e-9) -> list[float]:
    """First n_max + 1 eigenvalues by a sign scan of Q with WKB-paced steps.

    The scan step is a fixed fraction of the local level spacing 1/(dI/dE), so
    consecutive roots cannot share a step; an index check against the
    quantization phase I(E) catches any pair that still slipped through and
    triggers a finer rescan of the gap.
    """
    ode_rtol = min(1e-9, max(rel_tol * 0.05, 5e-13))
    crit = critical_data(alpha, ell)

    def q_at(energy: float) -> DeterminantValue:
        p = OscillatorParams(alpha, energy, ell)
        return spectral_determinant(p, refine=False, rtol=ode_rtol,
                                    x_max_budget=40.0)

    def spacing(energy: float) -> float:
        p = OscillatorParams(alpha, energy, ell)
        return 1.0 / max(wkb_phase_derivative(p), 1e-12)

    e_cap = 4.0 * asymptotic_spectrum(alpha, ell, n_max + 2) + 50.0
    roots: list[float] = []
    e_prev = crit.e_star * (1.0 + 1e-7)
    q_prev = q_at(e_prev)
    while len(roots) <= n_max:
        step = 0.45 * spacing(e_prev)
        e_next = e_prev + step
        if e_next > e_cap:
            raise RuntimeError("eigenvalue scan ran past its energy cap")
        q_next = q_at(e_next)
        if (q_prev.mantissa.real > 0) != (q_next.mantissa.real > 0):
            roots.append(_bracket_root(q_at, e_prev, e_next, q_prev, q_next, rel_tol))
        e_prev, q_prev = e_next, q_next

    for _ in range(3):
        index = [_phase_index(alpha, ell, r) for r in roots]
        missing = sorted(set(range(n_max + 1)) - set(index))
        if not missing:
            break
        for k in missing:
            lo = max([r for r, i in zip(roots, index) if i < k],
                     default=crit.e_star * (1.0 + 1e-7))
            hi = min([r for r, i in zip(roots, index) if i > k], default=e_cap)
            roots.extend(_rescan(q_at, spacing, lo, hi, rel_tol))
        roots = sorted(set(roots))
    index = [_phase_index(alpha, ell, r) for r in roots]
    picked = {i: r for r, i in zip(roots, index)}
    if sorted(picked)[: n_max + 1] != list(range(n_max + 1)):
        raise RuntimeError(f"scan did not resolve indices 0..{n_max}: found {sorted(picked)}")
    return [picked[i] for i in range(n_max + 1)]


def _bracket_root(q_at, e_lo: float, e_hi: float, q_lo: DeterminantValue,
                  q_hi: DeterminantValue, rel_tol: float) -> float:
    ref = max(q_lo.log_abs, q_hi.log_abs)

    def f(energy: float) -> float:
        q = q_at(energy)
        return math.copysign(math.exp(min(q.log_abs - ref, 50.0)), q.mantissa.real)

    from scipy.optimize import brentq
    return float(brentq(f, e_lo, e_hi, xtol=rel_tol * max(1.0, e_hi), rtol=8.9e-16))


def _rescan(q_at, spacing, lo: float, hi: float, rel_tol: float) -> list[float]:
    found: list[float] = []
    e_prev = lo * (1.0 + 1e-12)
    q_prev = q_at(e_prev)
    while e_prev < hi:
        e_next = min(e_prev + 0.1 * spacing(e_prev), hi)
        q_next = q_at(e_next)
        if (q_prev.mantissa.real > 0) != (q_next.mantissa.real > 0):
            found.append(_bracket_root(q_at, e_prev, e_next, q_prev, q_next, rel_tol))
        if e_next >= hi:
            break
        e_prev, q_prev = e_next, q_next
    return found


def asymptotic_spectrum(alpha: float, ell: float, n: int) -> float:
    """Closed-form high-level approximation [B (4n + 2 ell + 1)]^(2a/(a+1))."""
    return float(asymptotic_reference("spectrum_large_n", alpha, ell=ell, n=n))


def spectrum_table(alpha: float, ell: float, n_max: int,
                   methods: tuple[str, ...] = ("exact", "bs", "asym"),
                   rel_tol: float = 1e-9) -> list[SpectrumRecord]:
    exact = eigenvalues(alpha, ell, n_max, rel_tol=rel_tol) if "exact" in methods else None
    out: list[SpectrumRecord] = []
    for n in range(n_max + 1):
        e_exact = exact[n] if exact is not None else None
        e_bs = bohr_sommerfeld_energy(alpha, ell, n) if "bs" in methods else None
        e_asym = asymptotic_spectrum(alpha, ell, n) if "asym" in methods else None
        dev_bs = abs(e_bs - e_exact) / e_exact if (e_exact and e_bs is not None) else None
        dev_asym = abs(e_asym - e_exact) / e_exact if (e_exact and e_asym is not None) else None
        out.append(SpectrumRecord(n, e_exact, e_bs, e_asym, dev_bs, dev_asym))
    return out


def _meet_modulus(params: OscillatorParams) -> float:
    """Radius for sector meetings: near the turning scale, where Re R is O(1)
    and solutions of different sectors are still numerically independent."""
    _, scale = _geometry(params)
    return max(1.0, scale)


def sector_wronskian(params: OscillatorParams, j: int, k: int,
                     x_max: float | None = None, refine: bool = True,
                     tail_n: int = 801, rtol: float = 1e-10) -> tuple[complex, float]:
    """Wr[psi_j, psi_k] as (mantissa, logscale), met on the bisecting ray."""
    if x_max is None:
        x_max = choose_x_max(params)
    meet_arg = 0.5 * (j + k) * math.pi / (params.alpha + 1.0)
    meet = CoverPoint(_meet_modulus(params), meet_arg)
    sj = _psi_state(params, j, meet, x_max, refine, tail_n, rtol)
    sk = _psi_state(params, k, meet, x_max, refine, tail_n, rtol)
    return wronskian(sj, sk)


def stokes_multiplier(params: OscillatorParams, k: int = 0,
                      x_max: float | None = None, refine: bool = True,
                      tail_n: int = 801, rtol: float = 1e-10) -> complex:
    """sigma_k from the three seeds meeting on the sector-k ray."""
    if x_max is None:
        x_max = choose_x_max(params)
    meet = CoverPoint(_meet_modulus(params), k * math.pi / (params.alpha + 1.0))
    sm = _psi_state(params, k - 1, meet, x_max, refine, tail_n, rtol)
    s0 = _psi_state(params, k, meet, x_max, refine, tail_n, rtol)
    sp = _psi_state(params, k + 1, meet, x_max, refine, tail_n, rtol)
    m_num, l_num = wronskian(sm, sp)
    m_den, l_den = wronskian(sm, s0)
    return (m_num / m_den) * cmath.exp(l_num - l_den)


def fock_goncharov(params: OscillatorParams, quad: tuple[int, int, int, int],
                   x_max: float | None = None, refine: bool = True,
                   tail_n: int = 801, rtol: float = 1e-10) -> complex:
    """Quadruple ratio R_{(a,b,c,d)} = -W_a(b,d) / W_c(b,d) of sector solutions.

    All four solutions are transported to one meeting point; the four
    log-scales cancel identically in the ratio, so only mantissas survive.
    """
    a, b, c, d = quad
    if len({a, b, c, d}) != 4:
        raise ValueError("the four sector labels must be distinct")
    if x_max is None:
        x_max = choose_x_max(params)
    meet_arg = (a + b + c + d) / 4.0 * math.pi / (params.alpha + 1.0)
    meet = CoverPoint(_meet_modulus(params), meet_arg)
    states = {k: _psi_state(params, k, meet, x_max, refine, tail_n, rtol)
              for k in (a, b, c, d)}
    m_ab, _ = wronskian(states[a], states[b])
    m_ad, _ = wronskian(states[a], states[d])
    m_cb, _ = wronskian(states[c], states[b])
    m_cd, _ = wronskian(states[c], states[d])
    return -(m_ab / m_ad) * (m_cd / m_cb)


def r_zero(params: OscillatorParams, x_match: float | None = None,
           x_max: float | None = None, tail_n: int = 2001,
           rtol: float = 1e-11) -> complex:
    """R0 = -Wr[chi, psi_1] / Wr[chi, psi_{-1}] on the positive axis.

    Equals -1 exactly at eigenvalues (there psi_1 and psi_{-1} agree up to the
    multiple of psi_0 contained in chi) and stays near +1 between consecutive
    eigenvalues in the semiclassical regime.
    """
    if x_match is None:
        x_match, _ = _geometry(params)
    if x_max is None:
        x_max = choose_x_max(params)
    if x_max <= x_match:
        x_max = 1.5 * x_match
    chi = _chi_state(params, x_match, rtol)
    meet = CoverPoint(x_match, 0.0)
    sp = _psi_state(params, 1, meet, x_max, True, tail_n, rtol)
    sm = _psi_state(params, -1, meet, x_max, True, tail_n, rtol)
    m_num, l_num = wronskian(chi, sp)
    m_den, l_den = wronskian(chi, sm)
    return complex(-(m_num / m_den) * cmath.exp(l_num - l_den))


def semiclassical_r_zero(params: OscillatorParams) -> complex:
    """Leading WKB phase for R0: exp(2 pi i I(E)); R0 * this tends to 1."""
    return cmath.exp(2j * math.pi * wkb_phase(params))
