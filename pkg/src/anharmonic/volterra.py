"""Exact-solution control on curves: Volterra kernel, error functionals, bounds.

A WKB candidate Psi = V^(-1/4) exp(S), with S the antiderivative of a fixed
continued branch b of sqrt(V) along the curve, turns psi'' = U psi into the
integral equation z = 1 + K[z] for the ratio z = psi / Psi, with kernel

    (K f)(t) = int_0^t B(t, s) F(s) gamma'(s) f(s) ds,
    B(t, s)  = (exp(-2 (S(t) - S(s))) - 1) / 2,

and forcing density F = [ (V - U) + (5 V'^2 - 4 V'' V) / (16 V^2) ] / b.
(The operator sign depends on which branch F is divided by; the bounds below
only see |K|, so they hold for either convention.)  Everything here works on
a sampled curve: cumulative phase S on a grid, the Nystrom iteration for z
with trapezoid product integration, and the certified a-priori bounds

    rho  = int |F| |dx|,
    beta = inf_{s<=t} Re (S(t) - S(s)),
    |z - 1| <= exp(rho (1 + e^(-beta)) / 2) - 1.

On curves with monotone Re S the infimum is zero and the bound is e^rho - 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _sint

from .model import OscillatorParams
from .action import PathSpec, PathFrame

__all__ = [
    "VolterraRun",
    "ErrorFunctionals",
    "kernel_b",
    "error_functionals",
    "volterra_solve",
    "iterate_grid",
    "endpoint_slope_integral",
]

_EXP_CAP = 700.0


def _safe_bound(rho: float, beta: float) -> float:
    """exp(rho (1 + e^-beta)/2) - 1, saturating at inf instead of overflowing.

    A hugely negative beta means the curve runs against the recessive
    direction somewhere; the certificate is then vacuous, which inf conveys.
    """
    arg = rho * 0.5 * (1.0 + math.exp(min(-beta, _EXP_CAP)))
    if arg > _EXP_CAP:
        return math.inf
    return math.expm1(arg)


@dataclass(frozen=True)
class ErrorFunctionals:
    rho: float
    beta: float
    bound: float
    refined_rho: float | None = None

    @property
    def refined_bound(self) -> float | None:
        if self.refined_rho is None:
            return None
        return math.expm1(self.refined_rho)


@dataclass(frozen=True)
class VolterraRun:
    """Solved ratio z = psi / Psi^W on a sampled curve, with its certificates."""

    curve: PathSpec
    samples: np.ndarray    # global path parameter, segment i covers [i, i+1]
    s_values: np.ndarray   # cumulative int sqrt(V) dx from the start node
    z_values: np.ndarray
    rho: float
    beta: float
    bound: float
    refined_rho: float
    iterations: int


def _kernel_matrix(svals: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Strictly lower triangular B(t_j, t_i) = (exp(-2 (S_j - S_i)) - 1) / 2."""
    n = len(ts)
    expo = -2.0 * (svals[:, None] - svals[None, :])
    np.clip(expo.real, None, _EXP_CAP, out=expo.real)
    b = 0.5 * (np.exp(expo) - 1.0)
    b[np.triu_indices(n)] = 0.0
    return b


def _trapezoid_weights(ts: np.ndarray) -> np.ndarray:
    dt = np.diff(ts)
    w = np.zeros(len(ts))
    w[:-1] += 0.5 * dt
    w[1:] += 0.5 * dt
    return w


def iterate_grid(svals: np.ndarray, fvals: np.ndarray, ts: np.ndarray,
                 tol: float = 1e-13, max_iter: int = 80) -> tuple[np.ndarray, int]:
    """Solve z = 1 + K[z] on a grid by fixed-point iteration.

    svals are cumulative values of int b dx at the nodes, with b the branch
    of sqrt(V) that F is divided by (any common offset drops out of the
    kernel); fvals is the forcing density times the curve speed,
    F(gamma(t)) gamma'(t).  Duplicated nodes (zero spacing) are allowed and
    give the one-sided trapezoid rule at segment corners.
    """
    m = _kernel_matrix(svals, ts) * (fvals * _trapezoid_weights(ts))[None, :]
    z = np.ones(len(ts), dtype=complex)
    for it in range(1, max_iter + 1):
        znew = 1.0 + m @ z
        delta = float(np.max(np.abs(znew - z)))
        z = znew
        if delta <= tol * max(1.0, float(np.max(np.abs(z)))):
            return z, it
    raise RuntimeError("Volterra iteration did not settle; the curve is likely "
                       "far from admissible (rho too large)")


def endpoint_slope_integral(svals: np.ndarray, fvals: np.ndarray,
                            z: np.ndarray, ts: np.ndarray) -> complex:
    """J = int_0^1 exp(-2 (S(1) - S(s))) F gamma' z ds, so that
    dz/dx at the endpoint equals -b * J (with 2B + 1 = exp(-2 dS))."""
    expo = -2.0 * (svals[-1] - svals)
    np.clip(expo.real, None, _EXP_CAP, out=expo.real)
    return complex(np.trapezoid(np.exp(expo) * fvals * z, ts))


def _frame_grid(frame: PathFrame, per_segment: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(global ts, cumulative S, F * dx/dt) sampled along the whole path.

    Segment boundaries appear twice so corner speeds stay one-sided.
    """
    ts_all: list[np.ndarray] = []
    s_all: list[np.ndarray] = []
    f_all: list[np.ndarray] = []
    offset = 0.0 + 0.0j
    for i in range(len(frame.segments)):
        tloc = np.linspace(0.0, 1.0, per_segment)
        s = frame.cumulative_s(i, tloc) + offset
        f = np.empty(per_segment, dtype=complex)
        for k, t in enumerate(tloc):
            _, _, dx = frame.point(i, float(t))
            f[k] = frame.forcing(i, float(t)) * dx
        offset = s[-1]
        ts_all.append(tloc + i)
        s_all.append(s)
        f_all.append(f)
    return np.concatenate(ts_all), np.concatenate(s_all), np.concatenate(f_all)


def kernel_b(params: OscillatorParams, curve: PathSpec, t: float, s: float) -> complex:
    """Kernel value B(t, s) between two global path parameters, s <= t."""
    if s > t:
        raise ValueError("kernel is supported on s <= t")
    frame = PathFrame(params, curve)
    acc = 0.0 + 0.0j
    i0, i1 = int(math.floor(s)), min(int(math.ceil(t)) - 1, len(frame.segments) - 1)
    for i in range(max(i0, 0), i1 + 1):
        lo = max(s - i, 0.0)
        hi = min(t - i, 1.0)
        if hi <= lo:
            continue
        ts = np.linspace(lo, hi, 65)
        acc += frame.cumulative_s(i, ts)[-1]
    expo = -2.0 * acc
    if expo.real > _EXP_CAP:
        expo = complex(_EXP_CAP, expo.imag)
    return 0.5 * (np.exp(expo) - 1.0)


def error_functionals(params: OscillatorParams, curve: PathSpec,
                      n: int = 1025, refined: bool = False) -> ErrorFunctionals:
    """Certified error data for a curve: rho by adaptive quadrature, beta and
    the refined functional on a fine grid."""
    frame = PathFrame(params, curve)
    rho = 0.0
    for i in range(len(frame.segments)):
        def speed(t: float, i=i) -> float:
            _, _, dx = frame.point(i, t)
            return abs(frame.forcing(i, t) * dx)
        val, _ = _sint.quad(speed, 0.0, 1.0, epsabs=1e-12, epsrel=1e-10, limit=300)
        rho += val
    ts, svals, fvals = _frame_grid(frame, n)
    re = svals.real
    beta = float(np.min(re - np.maximum.accumulate(re)))
    bound = _safe_bound(rho, beta)
    refined_rho = None
    if refined:
        expo = -2.0 * (svals[-1] - svals)
        np.clip(expo.real, None, _EXP_CAP, out=expo.real)
        babs = 0.5 * np.abs(np.exp(expo) - 1.0)
        refined_rho = float(np.trapezoid(babs * np.abs(fvals), ts))
    return ErrorFunctionals(rho, beta, bound, refined_rho)


def volterra_solve(params: OscillatorParams, curve: PathSpec,
                   n: int = 601, tol: float = 1e-13) -> VolterraRun:
    """Solve z = 1 + K[z] along the curve and certify it.

    n is the per-segment grid size; the kernel matrix is dense in the grid, so
    memory grows as (n * segments)^2.
    """
    frame = PathFrame(params, curve)
    ts, svals, fvals = _frame_grid(frame, n)
    z, iters = iterate_grid(svals, fvals, ts, tol=tol)
    rho = float(np.trapezoid(np.abs(fvals), ts))
    re = svals.real
    beta = float(np.min(re - np.maximum.accumulate(re)))
    bound = _safe_bound(rho, beta)
    expo = -2.0 * (svals[-1] - svals)
    np.clip(expo.real, None, _EXP_CAP, out=expo.real)
    refined_rho = float(np.trapezoid(0.5 * np.abs(np.exp(expo) - 1.0) * np.abs(fvals), ts))
    return VolterraRun(curve, ts, svals, z, rho, beta, bound, refined_rho, iters)
