"""Action integrals along cover paths, Bohr-Sommerfeld quantisation, asymptotics.

The central objects are PathSpec (a piecewise path on the universal cover, each
segment a straight line, a circular arc, or a radial ray) and PathFrame, which
evaluates the reduced potential, a *continuously branched* sqrt(V), and the
forcing density along the path.  All quadrature is delegated to scipy.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _sint
from scipy.special import gamma as _gamma

from .model import (
    CoverPoint,
    OscillatorParams,
    critical_data,
    turning_points,
)

__all__ = [
    "PathSpec",
    "ActionResult",
    "PathFrame",
    "path_from_complex",
    "action_integral",
    "wkb_phase",
    "wkb_phase_derivative",
    "reduced_wkb_integral",
    "bohr_sommerfeld_energy",
    "asymptotic_reference",
]

_GAUSS8_NODES = (
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363,
)
_GAUSS8_WEIGHTS = (
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763,
)


def _quiet_quad(f, a, b, **kw):
    # quad flags roundoff near a degenerate radicand even when the absolute
    # error is far below our tolerance; suppress just that warning class
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _sint.IntegrationWarning)
        return _sint.quad(f, a, b, **kw)


@dataclass(frozen=True)
class PathSpec:
    """Piecewise path on the cover.

    parameterization holds one keyword per segment: "line" (straight chord),
    "arc" (constant modulus, linear argument), or "ray" (constant argument,
    linear modulus).  sqrt_v_branch fixes the square-root branch at the first
    node ("principal" or "negative"); it is then continued along the path.
    """

    nodes: tuple[CoverPoint, ...]
    parameterization: tuple[str, ...] = ()
    sqrt_v_branch: str = "principal"

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValueError("a path needs at least two nodes")
        kinds = self.parameterization
        if not kinds:
            kinds = tuple("line" for _ in range(len(self.nodes) - 1))
            object.__setattr__(self, "parameterization", kinds)
        if len(kinds) != len(self.nodes) - 1:
            raise ValueError("need one parameterization entry per segment")
        for kind, a, b in zip(kinds, self.nodes, self.nodes[1:]):
            if kind == "arc":
                if abs(a.modulus - b.modulus) > 1e-9 * a.modulus:
                    raise ValueError("arc endpoints must share their modulus")
                if abs(b.arg - a.arg) >= math.pi:
                    raise ValueError("arcs must subtend less than pi; split the arc")
            elif kind == "ray":
                if abs(a.arg - b.arg) > 1e-12:
                    raise ValueError("ray endpoints must share their argument")
            elif kind == "line":
                za, zb = a.to_complex(), b.to_complex()
                # argument lift along a chord is single valued only off the origin
                if abs(za - zb) > 0 and abs(_dist_to_origin(za, zb)) < 1e-14:
                    raise ValueError("line segment passes through the origin")
            else:
                raise ValueError(f"unknown segment kind {kind!r}")

    @property
    def n_segments(self) -> int:
        return len(self.nodes) - 1


def _dist_to_origin(za: complex, zb: complex) -> float:
    d = zb - za
    if d == 0:
        return abs(za)
    t = -((za.real * d.real + za.imag * d.imag) / (d.real * d.real + d.imag * d.imag))
    t = min(1.0, max(0.0, t))
    return abs(za + t * d)


@dataclass(frozen=True)
class ActionResult:
    value: complex
    segment_values: tuple[complex, ...]
    quadrature_error_estimate: float


def path_from_complex(points, kinds=None, sqrt_v_branch: str = "principal", near_arg: float = 0.0) -> PathSpec:
    """Build a PathSpec from plain complex points, lifting arguments continuously."""
    nodes = []
    prev = near_arg
    for z in points:
        if isinstance(z, CoverPoint):
            pt = z
        else:
            pt = CoverPoint.from_complex(complex(z), near_arg=prev)
        nodes.append(pt)
        prev = pt.arg
    if kinds is None:
        kinds = ()
    elif isinstance(kinds, str):
        kinds = tuple(kinds for _ in range(len(nodes) - 1))
    return PathSpec(tuple(nodes), tuple(kinds), sqrt_v_branch)


class _Segment:
    """One compiled path segment with cover-consistent argument lift."""

    __slots__ = ("kind", "a", "b", "za", "zb", "dz", "dphi")

    def __init__(self, kind: str, a: CoverPoint, b: CoverPoint):
        self.kind = kind
        self.a = a
        self.b = b
        self.za = a.to_complex()
        self.zb = b.to_complex()
        self.dz = self.zb - self.za
        self.dphi = b.arg - a.arg

    def point(self, t: float) -> tuple[complex, float, complex]:
        """Return (x, arg(x) on the cover, dx/dt)."""
        if self.kind == "line":
            z = self.za + t * self.dz
            arg = self.a.arg + cmath.phase(z / self.za)
            return z, arg, self.dz
        if self.kind == "arc":
            arg = self.a.arg + t * self.dphi
            z = cmath.rect(self.a.modulus, arg)
            return z, arg, 1j * self.dphi * z
        # ray
        m = self.a.modulus + t * (self.b.modulus - self.a.modulus)
        e = cmath.rect(1.0, self.a.arg)
        return m * e, self.a.arg, (self.b.modulus - self.a.modulus) * e


class PathFrame:
    """Evaluates V, the continued sqrt(V), and the forcing along a PathSpec.

    The square-root branch is fixed at the start node and continued by scouting
    each segment on a fine grid: a sign flip relative to the principal branch
    happens exactly where V crosses the negative real axis, and each crossing
    is located by bisection so that sign lookups stay O(1).
    """

    def __init__(self, params: OscillatorParams, path: PathSpec, scout: int = 129):
        self.params = params
        self.path = path
        self.segments = [_Segment(k, a, b) for k, a, b in zip(path.parameterization, path.nodes, path.nodes[1:])]
        self._signs: list[tuple[list[float], list[float]]] = []
        sign = 1.0 if path.sqrt_v_branch == "principal" else -1.0
        for seg in self.segments:
            flips: list[float] = []
            signs = [sign]
            prev = sign * cmath.sqrt(self._v_seg(seg, 0.0))
            t_prev = 0.0
            for i in range(1, scout):
                t = i / (scout - 1)
                root = cmath.sqrt(self._v_seg(seg, t))
                # continue the branch: pick the root nearer the previous value
                cur = root if abs(root - prev) <= abs(root + prev) else -root
                s = 1.0 if cur == root else -1.0
                if s != signs[-1]:
                    flips.append(self._locate_flip(seg, t_prev, t, prev, signs[-1]))
                    signs.append(s)
                prev, t_prev = cur, t
            sign = signs[-1]
            self._signs.append((flips, signs))
        self.end_sign = sign

    def _v_seg(self, seg: _Segment, t: float) -> complex:
        z, arg, _ = seg.point(t)
        p = self.params
        lam = p.lam
        xa = cmath.exp(2.0 * p.alpha * (math.log(abs(z)) + 1j * arg))
        return xa - p.energy + (lam * lam) / (z * z)

    def _locate_flip(self, seg: _Segment, t0: float, t1: float,
                     left_val: complex, left_sign: float) -> float:
        # refine the branch-flip location with the same nearest-root continuation
        for _ in range(48):
            tm = 0.5 * (t0 + t1)
            root = cmath.sqrt(self._v_seg(seg, tm))
            cur = root if abs(root - left_val) <= abs(root + left_val) else -root
            if (1.0 if cur == root else -1.0) == left_sign:
                t0, left_val = tm, cur
            else:
                t1 = tm
        return 0.5 * (t0 + t1)

    def _sign_at(self, i_seg: int, t: float) -> float:
        flips, signs = self._signs[i_seg]
        k = 0
        for tf in flips:
            if t > tf:
                k += 1
            else:
                break
        return signs[k]

    def point(self, i_seg: int, t: float) -> tuple[complex, float, complex]:
        return self.segments[i_seg].point(t)

    def reduced(self, i_seg: int, t: float) -> complex:
        return self._v_seg(self.segments[i_seg], t)

    def sqrt_v(self, i_seg: int, t: float) -> complex:
        return self._sign_at(i_seg, t) * cmath.sqrt(self._v_seg(self.segments[i_seg], t))

    def derivative_triple(self, i_seg: int, t: float) -> tuple[complex, complex, complex, complex, complex]:
        """(x, dx/dt, V, V', V'') with the path-consistent power branch."""
        z, arg, dz = self.segments[i_seg].point(t)
        p = self.params
        a = p.alpha
        lam2 = p.lam * p.lam
        xa = cmath.exp(2.0 * a * (math.log(abs(z)) + 1j * arg))
        v = xa - p.energy + lam2 / (z * z)
        v1 = 2.0 * a * xa / z - 2.0 * lam2 / (z * z * z)
        v2 = 2.0 * a * (2.0 * a - 1.0) * xa / (z * z) + 6.0 * lam2 / (z ** 4)
        return z, dz, v, v1, v2

    def forcing(self, i_seg: int, t: float) -> complex:
        """Signed forcing density F(x(t)) using the continued branch of sqrt(V)."""
        z, _, v, v1, v2 = self.derivative_triple(i_seg, t)
        payload = 0.25 / (z * z) + (5.0 * v1 * v1 - 4.0 * v2 * v) / (16.0 * v * v)
        return payload / self.sqrt_v(i_seg, t)

    def cumulative_s(self, i_seg: int, ts: np.ndarray) -> np.ndarray:
        """S(t_k) = int_0^{t_k} sqrt(V) dx on one segment, by per-interval Gauss."""
        out = np.empty(len(ts), dtype=complex)
        acc = 0.0 + 0.0j
        prev = ts[0]
        out[0] = 0.0
        for k in range(1, len(ts)):
            t0, t1 = prev, ts[k]
            half = 0.5 * (t1 - t0)
            mid = 0.5 * (t1 + t0)
            s = 0.0 + 0.0j
            for xg, wg in zip(_GAUSS8_NODES, _GAUSS8_WEIGHTS):
                tt = mid + half * xg
                z, _, dz = self.segments[i_seg].point(tt)
                s += wg * self.sqrt_v(i_seg, tt) * dz
            acc += s * half
            out[k] = acc
            prev = t1
        return out


def action_integral(params: OscillatorParams, path: PathSpec,
                    abs_tol: float = 1e-10, rel_tol: float = 1e-10) -> ActionResult:
    """Integral of the continued sqrt(V) dx along the path."""
    frame = PathFrame(params, path)
    seg_vals = []
    err = 0.0
    for i in range(path.n_segments):
        def f(t, i=i):
            z, _, dz = frame.point(i, t)
            w = frame.sqrt_v(i, t) * dz
            return np.array([w.real, w.imag])
        val, e = _sint.quad_vec(f, 0.0, 1.0, epsabs=abs_tol, epsrel=rel_tol)
        seg_vals.append(complex(val[0], val[1]))
        err += e
    return ActionResult(sum(seg_vals), tuple(seg_vals), err)


def _classical_interval(params: OscillatorParams) -> tuple[float, float]:
    lam = params.lam
    e = params.energy.real
    if lam < 1e-12:
        return 0.0, e ** (1.0 / (2.0 * params.alpha))
    tp = turning_points(params)
    if tp.real_pair is None:
        raise ValueError("no classical region below the critical energy")
    return tp.real_pair


def wkb_phase(params: OscillatorParams, abs_tol: float = 1e-12) -> float:
    """I(E, ell) = (1/pi) * integral of sqrt(E - x^2a - (ell+1/2)^2/x^2) over the well.

    The sin^2 substitution removes both square-root endpoints.  For energies
    in (E*, E*(1+1e-6)) a slope expansion around the degenerate well is used
    instead, where direct quadrature loses accuracy.
    """
    a = params.alpha
    lam = params.lam
    e = params.energy.real
    if lam > 1e-12:
        crit = critical_data(a, params.ell)
        if e <= crit.e_star:
            return 0.0
        if e < crit.e_star * (1.0 + 1e-6):
            slope = asymptotic_reference("j2_slope", a)
            return slope * (e - crit.e_star) * lam ** ((1.0 - a) / (1.0 + a))
    x_lo, x_hi = _classical_interval(params)
    delta = x_hi - x_lo
    lam2 = lam * lam

    def radicand(x: float) -> float:
        return e - x ** (2.0 * a) - (lam2 / (x * x) if lam2 > 0 else 0.0)

    def f(theta: float) -> float:
        st = math.sin(theta)
        ct = math.cos(theta)
        x = x_lo + delta * st * st
        r = radicand(x)
        if r <= 0.0:
            return 0.0
        return 2.0 * delta * st * ct * math.sqrt(r)

    val, _ = _quiet_quad(f, 0.0, 0.5 * math.pi, epsabs=abs_tol, epsrel=1e-12, limit=200)
    return val / math.pi


def wkb_phase_derivative(params: OscillatorParams, abs_tol: float = 1e-12) -> float:
    """dI/dE = (1/2pi) * integral dx / sqrt(E - x^2a - (ell+1/2)^2/x^2) > 0."""
    a = params.alpha
    lam = params.lam
    e = params.energy.real
    if lam > 1e-12:
        crit = critical_data(a, params.ell)
        if e <= crit.e_star * (1.0 + 1e-12):
            # harmonic bottom limit
            return asymptotic_reference("j2_slope", a) * lam ** ((1.0 - a) / (1.0 + a))
    x_lo, x_hi = _classical_interval(params)
    delta = x_hi - x_lo
    lam2 = lam * lam

    def f(theta: float) -> float:
        st = math.sin(theta)
        ct = math.cos(theta)
        x = x_lo + delta * st * st
        r = e - x ** (2.0 * a) - (lam2 / (x * x) if lam2 > 0 else 0.0)
        bridge = (x - x_lo) * (x_hi - x)
        if r <= 0.0 or bridge <= 0.0:
            return 0.0
        h = r / bridge
        return 2.0 / math.sqrt(h)

    val, _ = _quiet_quad(f, 0.0, 0.5 * math.pi, epsabs=abs_tol, epsrel=1e-12, limit=200)
    return val / (2.0 * math.pi)


def reduced_wkb_integral(alpha: float, kind: str, value: float, abs_tol: float = 1e-12) -> float:
    """Blown-up WKB integrals: J1(u) = I(1, u-1/2), J2(nu) = I(nu, 1/2)."""
    if kind == "J1":
        if value < 0:
            raise ValueError("J1 takes u >= 0")
        return wkb_phase(OscillatorParams(alpha, 1.0, value - 0.5), abs_tol)
    if kind == "J2":
        return wkb_phase(OscillatorParams(alpha, value, 0.5), abs_tol)
    raise ValueError("kind must be 'J1' or 'J2'")


def bohr_sommerfeld_energy(alpha: float, ell: float, n: int,
                           tol: float = 1e-10, max_iter: int = 60) -> float:
    """Solve I(E, ell) = n + 1/2 for E by guarded Newton with bisection fallback."""
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    crit = critical_data(alpha, ell)
    target = n + 0.5
    if n >= 5:
        e = asymptotic_reference("spectrum_large_n", alpha, ell=ell, n=n)
        e = max(e, crit.e_star * (1.0 + 1e-9))
    else:
        probe = crit.e_star * (1.0 + 0.01) + 0.01
        slope = wkb_phase_derivative(OscillatorParams(alpha, probe, ell))
        e = crit.e_star + target / slope
    lo, hi = crit.e_star, None
    params = OscillatorParams(alpha, e, ell)
    for _ in range(max_iter):
        params = params.with_energy(e)
        phi = wkb_phase(params) - target
        if phi > 0:
            hi = e if hi is None else min(hi, e)
        else:
            lo = max(lo, e)
        d = wkb_phase_derivative(params)
        step = phi / d
        e_new = e - step
        if not (e_new > lo and (hi is None or e_new < hi)):
            # Newton left the bracket: bisect instead
            if hi is None:
                e_new = 2.0 * e - crit.e_star
            else:
                e_new = 0.5 * (lo + hi)
        if abs(e_new - e) <= tol * max(1.0, abs(e)):
            return e_new
        e = e_new
    raise RuntimeError(f"quantisation solve failed to converge for n={n}")


def _j1_zero(alpha: float) -> float:
    return (0.5 / math.sqrt(math.pi)) * _gamma((1.0 + 2.0 * alpha) / (2.0 * alpha)) \
        / _gamma((1.0 + 3.0 * alpha) / (2.0 * alpha))


def _large_n_bracket(alpha: float) -> float:
    # equals 1/(4*J1(0))
    return (0.5 * math.sqrt(math.pi)) * _gamma((1.0 + 3.0 * alpha) / (2.0 * alpha)) \
        / _gamma((1.0 + 2.0 * alpha) / (2.0 * alpha))


_REFERENCE_IDS = (
    "j1_zero", "j1_small_u", "j1_rate", "j2_slope", "j2_near_critical",
    "j2_large_nu", "j2_large_rate", "j2_derivative_exponent",
    "spectrum_large_n", "spectrum_large_n_rate", "spectrum_fixed_n_large_ell",
    "harmonic_coefficient", "coalescing_tps", "hbar_n",
)


def asymptotic_reference(identifier: str, alpha: float, **kw) -> float | tuple[float, float]:
    """Closed-form reference values for the asymptotic regimes.

    Identifiers (extra keyword arguments in parentheses):
      j1_zero                      J1(0)
      j1_small_u (u)               J1(0) - u/2
      j1_rate (u)                  error scale of the small-u expansion
      j2_slope                     dJ2/dnu at the critical point
      j2_near_critical (nu)        slope * (nu - nu_*)
      j2_large_nu (nu)             J1(0) nu^{(a+1)/2a} - 1/2
      j2_large_rate (nu)           error scale of the large-nu expansion
      j2_derivative_exponent       growth exponent of J2'
      spectrum_large_n (ell, n)    leading eigenvalue growth
      spectrum_large_n_rate (n)    error scale of the same
      spectrum_fixed_n_large_ell (ell, n)  harmonic-well approximation
      harmonic_coefficient         slope of the harmonic term
      coalescing_tps (nu)          two-term expansion of the blown-up turning pair
      hbar_n (nu, n)               2 J2(nu) / (2n+1)
    """
    a = alpha
    if identifier == "j1_zero":
        return _j1_zero(a)
    if identifier == "j1_small_u":
        return _j1_zero(a) - 0.5 * kw["u"]
    if identifier == "j1_rate":
        u = kw["u"]
        if u == 0:
            return 0.0
        if a > 0.5:
            return u * u
        if a == 0.5:
            return u * u * abs(math.log(u))
        return u ** (2.0 * a + 1.0)
    if identifier == "j2_slope":
        return a ** (-1.0 / (a + 1.0)) / (2.0 * math.sqrt(2.0 * a + 2.0))
    if identifier == "j2_near_critical":
        nu_star = (1.0 + a) / a ** (a / (a + 1.0))
        return asymptotic_reference("j2_slope", a) * (kw["nu"] - nu_star)
    if identifier == "j2_large_nu":
        return _j1_zero(a) * kw["nu"] ** ((a + 1.0) / (2.0 * a)) - 0.5
    if identifier == "j2_large_rate":
        nu = kw["nu"]
        if a > 0.5:
            return nu ** (-(a + 1.0) / (2.0 * a))
        if a == 0.5:
            return nu ** (-1.5) * abs(math.log(nu))
        return nu ** (-(a + 1.0))
    if identifier == "j2_derivative_exponent":
        return (1.0 - a) / (2.0 * a)
    if identifier == "spectrum_large_n":
        n, ell = kw["n"], kw["ell"]
        return (_large_n_bracket(a) * (4.0 * n + 2.0 * ell + 1.0)) ** (2.0 * a / (a + 1.0))
    if identifier == "spectrum_large_n_rate":
        n = kw["n"]
        if a > 0.5:
            return 1.0 / n
        if a == 0.5:
            return math.log(n) / n
        return n ** (-(a + 0.5))
    if identifier == "spectrum_fixed_n_large_ell":
        n, ell = kw["n"], kw["ell"]
        lead = (a + 1.0) / a ** (a / (a + 1.0)) * ell ** (2.0 * a / (a + 1.0))
        kcoef = asymptotic_reference("harmonic_coefficient", a)
        return lead * (1.0 + kcoef * (n + 0.5) / ell)
    if identifier == "harmonic_coefficient":
        return 2.0 * a * math.sqrt(2.0) / math.sqrt(a + 1.0)
    if identifier == "coalescing_tps":
        nu = kw["nu"]
        y_star = a ** (-1.0 / (2.0 * a + 2.0))
        nu_star = (1.0 + a) / a ** (a / (a + 1.0))
        d = nu - nu_star
        if d < 0:
            raise ValueError("coalescing expansion needs nu >= nu_*")
        first = a ** (-1.0 / (a + 1.0)) / math.sqrt(2.0 * a + 2.0) * math.sqrt(d)
        second = (5.0 - 2.0 * a) * y_star ** 3 / (12.0 * (a + 1.0)) * d
        return (y_star - first + second, y_star + first + second)
    if identifier == "hbar_n":
        nu, n = kw["nu"], kw["n"]
        return 2.0 * reduced_wkb_integral(a, "J2", nu) / (2.0 * n + 1.0)
    raise KeyError(f"unknown identifier {identifier!r}; valid: {', '.join(_REFERENCE_IDS)}")
