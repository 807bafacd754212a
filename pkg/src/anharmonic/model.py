"""Oscillator model: potentials on the universal cover, turning points, scalings.

Everything downstream works with the radial Schroedinger operator

    psi''(x) = (x^(2*alpha) + ell*(ell+1)/x^2 - E) psi(x)

continued to the universal cover of the punctured plane.  Points on the cover are stored as
(modulus, continuous argument) so that non-integer powers are single valued.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CoverPoint",
    "OscillatorParams",
    "TurningPointSet",
    "CriticalData",
    "HbarCoords",
    "eval_potential",
    "eval_reduced",
    "eval_forcing",
    "critical_data",
    "turning_points",
    "to_hbar_coords",
    "sector_center_arg",
    "sector_half_width",
    "infinity_arg",
]


@dataclass(frozen=True)
class CoverPoint:
    """Point on the universal cover of the punctured plane."""

    modulus: float
    arg: float

    @classmethod
    def from_complex(cls, z: complex, near_arg: float = 0.0) -> "CoverPoint":
        """Lift z to the cover, choosing the argument branch nearest near_arg."""
        z = complex(z)
        if z == 0:
            raise ValueError("origin is not on the cover")
        a = cmath.phase(z)
        # shift by whole turns to land next to the requested branch
        a += 2.0 * math.pi * round((near_arg - a) / (2.0 * math.pi))
        return cls(abs(z), a)

    def to_complex(self) -> complex:
        return cmath.rect(self.modulus, self.arg)

    def cpow(self, s: complex) -> complex:
        """x**s with the branch fixed by the stored argument."""
        return cmath.exp(s * (math.log(self.modulus) + 1j * self.arg))

    def clog(self) -> complex:
        return complex(math.log(self.modulus), self.arg)

    def rotated(self, dphi: float) -> "CoverPoint":
        return CoverPoint(self.modulus, self.arg + dphi)

    def scaled(self, factor: float) -> "CoverPoint":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return CoverPoint(self.modulus * factor, self.arg)


@dataclass(frozen=True)
class OscillatorParams:
    """Problem data: exponent alpha > 0, energy E, angular number ell > -1/2."""

    alpha: float
    energy: complex
    ell: float

    @property
    def lam(self) -> float:
        # Langer-shifted angular momentum; the reduced potential depends on it only
        return self.ell + 0.5

    def with_energy(self, energy: complex) -> "OscillatorParams":
        return OscillatorParams(self.alpha, energy, self.ell)


@dataclass(frozen=True)
class TurningPointSet:
    """Zeros of the reduced potential near the real sector.

    real_pair holds the two positive roots (x_minus, x_plus) when the energy is
    above the critical value, None below it.  sector_points holds the roots
    adjacent to the positive axis but off it, as cover points.
    """

    real_pair: tuple[float, float] | None
    sector_points: tuple[CoverPoint, ...]


@dataclass(frozen=True)
class CriticalData:
    """Bottom of the effective well and its blown-up coordinates."""

    e_star: float
    x_star: float
    nu_star: float
    y_star: float


@dataclass(frozen=True)
class HbarCoords:
    """Semiclassical rescaling x = scale*y with psi'' = hbar^-2 * V_tilde * psi.

    regime 1 fixes ell and sends E to infinity; regime 2 couples E to ell.
    The exact identity scale^2 * V(scale*y) = hbar^-2 * (y^2a - nu + (lam_eff*hbar... )
    is exposed through reduced_in_y below and unit tested.
    """

    regime: int
    hbar: float
    scale: float
    nu: float
    lam_eff: float


def _as_cover(x, near_arg: float = 0.0) -> CoverPoint:
    if isinstance(x, CoverPoint):
        return x
    return CoverPoint.from_complex(complex(x), near_arg)


def eval_potential(params: OscillatorParams, x) -> complex:
    """Full potential U = x^(2a) + ell(ell+1)/x^2 - E at a cover point."""
    p = _as_cover(x)
    z = p.to_complex()
    return p.cpow(2.0 * params.alpha) + params.ell * (params.ell + 1.0) / (z * z) - params.energy


def eval_reduced(params: OscillatorParams, x) -> complex:
    """Reduced potential V = U + 1/(4x^2) = x^(2a) - E + (ell+1/2)^2/x^2."""
    p = _as_cover(x)
    z = p.to_complex()
    lam = params.lam
    return p.cpow(2.0 * params.alpha) - params.energy + (lam * lam) / (z * z)


def reduced_derivatives(params: OscillatorParams, x) -> tuple[complex, complex, complex]:
    """(V, V', V'') at a cover point, with cover-consistent branches."""
    p = _as_cover(x)
    z = p.to_complex()
    a = params.alpha
    lam2 = params.lam * params.lam
    xa = p.cpow(2.0 * a)
    v = xa - params.energy + lam2 / (z * z)
    v1 = 2.0 * a * xa / z - 2.0 * lam2 / (z * z * z)
    v2 = 2.0 * a * (2.0 * a - 1.0) * xa / (z * z) + 6.0 * lam2 / (z * z * z * z)
    return v, v1, v2


def eval_forcing(params: OscillatorParams, x, sqrt_v: complex | None = None) -> complex:
    """Forcing density F with F dx the perturbation measure of the WKB transport.

    F = [ 1/(4x^2) + (5 V'^2 - 4 V'' V) / (16 V^2) ] / sqrt(V).  The first term is
    V - U written in closed form (Langer shift), avoiding cancellation.  When the
    caller tracks a particular branch of sqrt(V) along a path it should pass it in;
    otherwise the principal branch is used.  Admissibility functionals only consume
    |F|, which is branch free.
    """
    p = _as_cover(x)
    z = p.to_complex()
    v, v1, v2 = reduced_derivatives(params, p)
    payload = 0.25 / (z * z) + (5.0 * v1 * v1 - 4.0 * v2 * v) / (16.0 * v * v)
    if sqrt_v is None:
        sqrt_v = cmath.sqrt(v)
    return payload / sqrt_v


def critical_data(alpha: float, ell: float) -> CriticalData:
    """Minimum of x^(2a) + lam^2/x^2 and the blown-up critical constants."""
    lam = ell + 0.5
    if lam <= 0:
        raise ValueError("ell must exceed -1/2")
    e_star = alpha ** (-alpha / (1.0 + alpha)) * (1.0 + alpha) * lam ** (2.0 * alpha / (1.0 + alpha))
    x_star = alpha ** (-1.0 / (2.0 + 2.0 * alpha)) * lam ** (1.0 / (1.0 + alpha))
    nu_star = (1.0 + alpha) / alpha ** (alpha / (alpha + 1.0))
    y_star = alpha ** (-1.0 / (2.0 * alpha + 2.0))
    return CriticalData(e_star, x_star, nu_star, y_star)


def _real_reduced(params: OscillatorParams, x: float) -> float:
    lam = params.lam
    return x ** (2.0 * params.alpha) - params.energy.real + (lam / x) ** 2


def _real_reduced_d(params: OscillatorParams, x: float) -> float:
    return 2.0 * params.alpha * x ** (2.0 * params.alpha - 1.0) - 2.0 * params.lam ** 2 / x ** 3


def _bisect_root(params: OscillatorParams, lo: float, hi: float) -> float:
    # bisection to 1e-12 relative, then two Newton polishing steps
    flo = _real_reduced(params, lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if (hi - lo) <= 1e-12 * mid:
            break
        fm = _real_reduced(params, mid)
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(2):
        d = _real_reduced_d(params, x)
        if d != 0.0:
            step = _real_reduced(params, x) / d
            if abs(step) < 0.5 * x:
                x -= step
    return x


def _polynomial_sector_roots(params: OscillatorParams) -> list[CoverPoint]:
    # 2*alpha integral: x^(2a+2) - E x^2 + lam^2 is entire, use the companion matrix
    deg = int(round(2.0 * params.alpha)) + 2
    coeffs = np.zeros(deg + 1, dtype=complex)
    coeffs[0] = 1.0
    coeffs[deg - 2] = -params.energy
    coeffs[deg] = params.lam ** 2
    roots = np.roots(coeffs)
    out = []
    for r in roots:
        if abs(r.imag) < 1e-9 * max(1.0, abs(r.real)) and r.real > 0:
            continue  # the real pair is reported separately
        out.append(CoverPoint.from_complex(complex(r)))
    return out


def _newton_sector_roots(params: OscillatorParams) -> list[CoverPoint]:
    """Damped Newton on x^(2a+2) - E x^2 + lam^2 over the cover, seeded per sector."""
    a = params.alpha
    e = params.energy
    lam2 = params.lam ** 2
    scale_e = max(abs(e), 1.0)
    m_big = max(abs(e), lam2) ** (1.0 / (2.0 * a)) if abs(e) > 0 else lam2 ** (1.0 / (2.0 * a + 2.0))
    m_small = (lam2 / scale_e) ** 0.5
    seeds = []
    for sign in (1.0, -1.0):
        for mod in (m_big, m_small, 0.5 * (m_big + m_small)):
            for ph in (math.pi / a, 1.5 * math.pi / (a + 1.0), 2.0 * math.pi / (a + 1.0)):
                seeds.append(CoverPoint(mod, sign * ph))
    found: list[CoverPoint] = []
    for seed in seeds:
        pt = seed
        ok = False
        for _ in range(50):
            h = pt.cpow(2.0 * a + 2.0) - e * pt.cpow(2.0) + lam2
            hsize = abs(pt.cpow(2.0 * a + 2.0)) + abs(e) * pt.modulus ** 2 + lam2
            if abs(h) < 1e-12 * hsize:
                ok = True
                break
            dh = (2.0 * a + 2.0) * pt.cpow(2.0 * a + 1.0) - 2.0 * e * pt.to_complex()
            if dh == 0:
                break
            step = h / dh
            # damp so the argument never jumps more than a quarter turn
            z = pt.to_complex()
            t = 1.0
            while t > 1e-4 and abs(step) * t > 0.5 * pt.modulus:
                t *= 0.5
            znew = z - t * step
            if znew == 0:
                break
            pt = CoverPoint.from_complex(znew, near_arg=pt.arg)
        if not ok:
            continue
        if abs(pt.arg) < 1e-6 or abs(pt.arg) > 3.0 * math.pi / (2.0 * a + 2.0) + 0.3:
            continue
        if all(abs(pt.to_complex() - q.to_complex()) > 1e-6 * (pt.modulus + q.modulus) for q in found):
            found.append(pt)
    return found


def turning_points(params: OscillatorParams) -> TurningPointSet:
    """Zeros of V near the real sector: the positive pair plus adjacent complex roots."""
    if abs(params.energy.imag) > 1e-10 * max(1.0, abs(params.energy.real)):
        raise ValueError("turning point location expects (near) real energy")
    crit = critical_data(params.alpha, params.ell)
    e = params.energy.real
    if e < crit.e_star * (1.0 - 1e-8):
        real_pair = None
    elif abs(e - crit.e_star) <= 1e-8 * crit.e_star:
        real_pair = (crit.x_star, crit.x_star)
    else:
        x_star = crit.x_star
        lo = x_star
        f = _real_reduced(params, lo)
        while f <= 0.0:
            lo *= 0.5
            f = _real_reduced(params, lo)
        x_minus = _bisect_root(params, lo, x_star)
        hi = max(2.0 * x_star, (2.0 * max(e, 1.0)) ** (1.0 / (2.0 * params.alpha)))
        while _real_reduced(params, hi) <= 0.0:
            hi *= 2.0
        x_plus = _bisect_root(params, x_star, hi)
        real_pair = (min(x_minus, x_plus), max(x_minus, x_plus))
    two_a = 2.0 * params.alpha
    if abs(two_a - round(two_a)) < 1e-12:
        sector = _polynomial_sector_roots(params)
    else:
        sector = _newton_sector_roots(params)
    sector.sort(key=lambda p: (p.arg, p.modulus))
    return TurningPointSet(real_pair, tuple(sector))


def to_hbar_coords(params: OscillatorParams, regime: int) -> HbarCoords:
    """Semiclassical coordinates; regime 1: E -> inf at fixed ell, regime 2: hbar = 1/(ell+1/2)."""
    a = params.alpha
    if regime == 1:
        e = params.energy.real
        if e <= 0:
            raise ValueError("regime 1 needs positive energy")
        hbar = e ** (-(a + 1.0) / (2.0 * a))
        scale = e ** (1.0 / (2.0 * a))
        return HbarCoords(1, hbar, scale, 1.0, hbar * params.lam)
    if regime == 2:
        lam = params.lam
        hbar = 1.0 / lam
        scale = lam ** (1.0 / (a + 1.0))
        nu = params.energy.real * lam ** (-2.0 * a / (a + 1.0))
        return HbarCoords(2, hbar, scale, nu, 1.0)
    raise ValueError("regime must be 1 or 2")


def reduced_in_y(coords: HbarCoords, alpha: float, y: complex) -> complex:
    """Rescaled reduced potential: scale^2 V(scale*y) = hbar^-2 * reduced_in_y."""
    yy = complex(y)
    return yy ** (2.0 * alpha) - coords.nu + coords.lam_eff ** 2 / (yy * yy)


def sector_center_arg(alpha: float, k: int) -> float:
    """Central direction of the k-th decay sector."""
    return k * math.pi / (alpha + 1.0)


def sector_half_width(alpha: float) -> float:
    return 0.5 * math.pi / (alpha + 1.0)


def infinity_arg(alpha: float, half_index: int) -> float:
    """Direction of the escape ray between sectors half_index and half_index+1."""
    return (half_index + 0.5) * math.pi / (alpha + 1.0)
