"""Level curves of the action and the graph grown from turning points.

A theta-trajectory is a curve along which Im(e^{-i*theta} S) stays constant,
where S' = sqrt(V) with a branch continued along the curve.  Tracing uses the
parameterization dx/dtau = direction * e^{i*theta} / sqrt(V), under which
e^{-i*theta} S moves along the real axis at unit speed, so tau doubles as a
progress variable.  Vertical trajectories (theta = pi/2) emitted by turning
points assemble into a labeled graph whose vertices are the turning points,
the origin, and the escape directions at infinity.

The module also certifies candidate integration paths: monotonicity of Re S
plus the integrability functionals computed by the volterra module.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .action import PathSpec, PathFrame, path_from_complex
from .model import (
    CoverPoint,
    OscillatorParams,
    critical_data,
    turning_points,
)
from .volterra import error_functionals

__all__ = [
    "Termination",
    "TraceStops",
    "Trajectory",
    "StokesEdge",
    "StokesComplex",
    "AdmissibilityReport",
    "trace_trajectory",
    "default_stops",
    "stokes_complex",
    "check_admissible",
    "trajectory_to_path",
    "trajectory_csv_rows",
    "complex_to_json_dict",
    "topology_signature",
]

# relative change of sqrt(V) allowed per step; drives the adaptive step size
_STEP_FRAC = 0.015
# looser creep-in factor once a trace is committed to a turning point ball
_STEP_FRAC_ENDGAME = 0.06
# Newton projection back onto the level set, every this many accepted steps
_CORRECT_EVERY = 10


@dataclass(frozen=True)
class Termination:
    """How a trace ended.

    kind is one of hit_radius_max, hit_radius_min, near_turning_point,
    entered_sector, spiral_into_origin, step_limit.  index carries the turning
    point index or the sector index when the kind needs one.
    """

    kind: str
    index: int | None = None


@dataclass(frozen=True)
class TraceStops:
    """Stop rules for trajectory tracing."""

    radius_max: float
    radius_min: float
    max_steps: int = 200_000
    sector_targets: tuple[int, ...] = ()
    sector_radius: float = math.inf
    arg_window: tuple[float, float] | None = None


@dataclass(frozen=True)
class Trajectory:
    theta: float
    direction: int
    points: tuple[CoverPoint, ...]
    s_values: tuple[complex, ...]
    termination: Termination
    level_drift: float

    def end_point(self) -> CoverPoint:
        return self.points[-1]


@dataclass(frozen=True)
class StokesEdge:
    source: str
    target: str
    trajectory: Trajectory


@dataclass(frozen=True)
class StokesComplex:
    vertices: tuple[str, ...]
    vertex_points: dict
    vertex_multiplicity: dict
    edges: tuple[StokesEdge, ...]
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class AdmissibilityReport:
    monotone: bool
    rho: float
    beta: float
    bound: float


def _potential_pair(params: OscillatorParams, v_mode: str, pole_coupling):
    """Closure (z, arg) -> (V, V') for the chosen potential variant.

    v_mode "full" is the reduced potential; "pure_power" and "pure_pole" are
    the model problems whose trajectories have closed forms, kept as test
    hooks.  pole_coupling may be complex (spiral/circle regimes).
    """
    a = params.alpha
    if v_mode == "full":
        e = params.energy
        lam2 = params.lam * params.lam

        def vv(z: complex, arg: float):
            xa = cmath.exp(2.0 * a * (math.log(abs(z)) + 1j * arg))
            v = xa - e + lam2 / (z * z)
            v1 = 2.0 * a * xa / z - 2.0 * lam2 / (z * z * z)
            return v, v1

        return vv
    if v_mode == "pure_power":

        def vv(z: complex, arg: float):
            xa = cmath.exp(2.0 * a * (math.log(abs(z)) + 1j * arg))
            return xa, 2.0 * a * xa / z

        return vv
    if v_mode == "pure_pole":
        c = params.lam if pole_coupling is None else complex(pole_coupling)
        c2 = c * c

        def vv(z: complex, arg: float):
            return c2 / (z * z), -2.0 * c2 / (z * z * z)

        return vv
    raise ValueError("v_mode must be full, pure_power or pure_pole")


def default_stops(params: OscillatorParams, max_steps: int = 200_000) -> TraceStops:
    """Radius bounds scaled to the turning point geometry."""
    tps = turning_points(params)
    mods = [m for m in ([] if tps.real_pair is None else list(tps.real_pair))]
    mods += [p.modulus for p in tps.sector_points]
    if not mods:
        x_ref = critical_data(params.alpha, params.ell).x_star
        mods = [x_ref]
    return TraceStops(
        radius_max=max(50.0, 10.0 * max(mods)),
        radius_min=1e-4 * min(mods),
        max_steps=max_steps,
    )


def _match_sqrt(v: complex, ref: complex) -> complex:
    root = cmath.sqrt(v)
    return root if abs(root - ref) <= abs(root + ref) else -root


def trace_trajectory(params: OscillatorParams, x0, theta: float, direction: int,
                     stops: TraceStops | None = None, *,
                     v_mode: str = "full", pole_coupling=None,
                     tp_guard=None, suppress_index: int | None = None,
                     suppress_radius: float = 0.0) -> Trajectory:
    """Trace the theta-trajectory of V dx^2 through x0.

    Integrates dx/dtau = direction * e^{i*theta}/sqrt(V) with RK4, the branch
    of sqrt(V) continued step to step, and projects back onto the level set of
    Im(e^{-i*theta} S) every few steps.  S is accumulated independently by
    Simpson's rule on the realized polyline, anchored at S(x0) = 0.

    tp_guard is a list of (CoverPoint, exclusion_radius); entering a guard ball
    terminates the trace with near_turning_point(index).  suppress_index mutes
    that guard until the trace leaves suppress_radius around it (so an edge can
    be launched from a fan ray without instantly terminating on its source).
    """
    if stops is None:
        stops = default_stops(params)
    p0 = x0 if isinstance(x0, CoverPoint) else CoverPoint.from_complex(complex(x0))
    vv = _potential_pair(params, v_mode, pole_coupling)
    two_a_int = abs(2.0 * params.alpha - round(2.0 * params.alpha)) < 1e-12
    guards = [] if tp_guard is None else list(tp_guard)
    guard_z = [g[0].to_complex() for g in guards]
    guard_arg = [g[0].arg for g in guards]
    guard_r = [g[1] for g in guards]
    armed = [True] * len(guards)
    if suppress_index is not None and 0 <= suppress_index < len(guards):
        armed[suppress_index] = False

    z = p0.to_complex()
    arg = p0.arg
    v, _ = vv(z, arg)
    if v == 0:
        raise ValueError("trace must not start at a turning point")
    sq = cmath.sqrt(v)
    phase = cmath.rect(1.0, theta)
    conj_phase = phase.conjugate()

    points = [p0]
    s_vals = [0.0 + 0.0j]
    s_acc = 0.0 + 0.0j
    drift_max = 0.0
    geo_scale = max(abs(z), stops.radius_min * 10.0)
    termination = Termination("step_limit")
    turn_anchor_arg = arg
    turn_records: list[tuple[float, float]] = []  # (winding, modulus)

    n = 0
    while n < stops.max_steps:
        n += 1
        # local step bound: sqrt(V) relative change and geometric caps
        v, v1 = vv(z, arg)
        if v == 0:
            termination = Termination("step_limit")
            break
        rate = abs(v1) / (2.0 * abs(v) ** 1.5)
        dx_cap = 0.05 * abs(z)
        frac = _STEP_FRAC
        if guards:
            armed_pairs = [(abs(z - gz), r_) for gz, r_, a_ in zip(guard_z, guard_r, armed) if a_]
            if armed_pairs:
                d_min, r_near = min(armed_pairs)
                dx_cap = min(dx_cap, 0.35 * d_min + 1e-14 * geo_scale)
                if d_min < 50.0 * r_near:
                    frac = _STEP_FRAC_ENDGAME
        dx_lim = min(dx_cap, frac / max(rate, 1e-300))
        dtau = direction * dx_lim * abs(sq)

        # RK4 on x(tau) with the branch continued through the stages
        def rhs(zz: complex, aa: float, ref: complex) -> tuple[complex, complex]:
            vz, _ = vv(zz, aa)
            root = _match_sqrt(vz, ref)
            return phase / root, root

        k1, r1 = rhs(z, arg, sq)
        z2 = z + 0.5 * dtau * k1
        k2, r2 = rhs(z2, arg + cmath.phase(z2 / z), r1)
        z3 = z + 0.5 * dtau * k2
        k3, r3 = rhs(z3, arg + cmath.phase(z3 / z), r2)
        z4 = z + dtau * k3
        k4, r4 = rhs(z4, arg + cmath.phase(z4 / z), r3)
        znew = z + (dtau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if znew == 0:
            termination = Termination("hit_radius_min")
            break
        argnew = arg + cmath.phase(znew / z)

        # Simpson accumulation of S along the realized chord
        zm = 0.5 * (z + znew)
        am = arg + cmath.phase(zm / z)
        vm, _ = vv(zm, am)
        vn, _ = vv(znew, argnew)
        sm = _match_sqrt(vm, sq)
        sqn = _match_sqrt(vn, sm)
        s_acc += (znew - z) * (sq + 4.0 * sm + sqn) / 6.0

        z, arg, sq = znew, argnew, sqn
        points.append(CoverPoint(abs(z), arg))
        s_vals.append(s_acc)
        drift = abs((conj_phase * s_acc).imag)
        if drift > drift_max:
            drift_max = drift

        if n % _CORRECT_EVERY == 0:
            # one Newton step transverse to the trace restores the level set
            d = (conj_phase * s_acc).imag
            delta = -1j * d * phase / sq
            zc = z + delta
            if zc != 0:
                ac = arg + cmath.phase(zc / z)
                vc, _ = vv(zc, ac)
                sqc = _match_sqrt(vc, sq)
                s_acc += delta * (sq + sqc) / 2.0
                z, arg, sq = zc, ac, sqc
                points[-1] = CoverPoint(abs(z), arg)
                s_vals[-1] = s_acc

        # stop rules
        mod = abs(z)
        if mod >= stops.radius_max:
            termination = Termination("hit_radius_max")
            break
        if mod <= stops.radius_min:
            termination = Termination("hit_radius_min")
            break
        if stops.arg_window is not None and not (stops.arg_window[0] <= arg <= stops.arg_window[1]):
            k_sec = round(arg * (params.alpha + 1.0) / math.pi)
            termination = Termination("entered_sector", int(k_sec))
            break
        hit = None
        for i in range(len(guards)):
            if not armed[i]:
                if abs(z - guard_z[i]) > suppress_radius:
                    armed[i] = True
                continue
            if abs(z - guard_z[i]) < guard_r[i]:
                if two_a_int or abs(arg - guard_arg[i]) < 1.0 or \
                        abs(abs(arg - guard_arg[i]) - 2.0 * math.pi) < 1.0:
                    hit = i
                    break
        if hit is not None:
            termination = Termination("near_turning_point", hit)
            break
        if stops.sector_targets and mod > stops.sector_radius:
            half = 0.5 * math.pi / (params.alpha + 1.0)
            for k_sec in stops.sector_targets:
                center = k_sec * math.pi / (params.alpha + 1.0)
                if abs(arg - center) < 0.9 * half:
                    termination = Termination("entered_sector", int(k_sec))
                    break
            if termination.kind == "entered_sector":
                break
        # winding bookkeeping: spirals shrink each turn, bounded orbits do not
        winding = arg - turn_anchor_arg
        if abs(winding) >= 2.0 * math.pi * (len(turn_records) + 1):
            turn_records.append((winding, mod))
            if len(turn_records) >= 1:
                prev_mod = points[0].modulus if len(turn_records) == 1 else turn_records[-2][1]
                if mod < 0.95 * prev_mod:
                    termination = Termination("spiral_into_origin")
                    break
                if len(turn_records) >= 3 and mod > 0.5 * prev_mod:
                    termination = Termination("step_limit")
                    break

    return Trajectory(
        theta=theta,
        direction=int(direction),
        points=tuple(points),
        s_values=tuple(s_vals),
        termination=termination,
        level_drift=drift_max,
    )


def _infinity_label(alpha: float, arg: float) -> str:
    half = arg * (alpha + 1.0) / math.pi - 0.5
    k = round(half)
    two_a = 2.0 * alpha
    if abs(two_a - round(two_a)) < 1e-12:
        # V is single valued, the graph is periodic with period 2(alpha+1);
        # report escape directions in the principal window
        period = int(round(two_a)) + 2
        offset = period // 2
        k = (k + offset) % period - offset
    return "inf_%d/2" % (2 * k + 1)


def _snap_axis(p: CoverPoint) -> CoverPoint:
    # root-finder noise can put a real root on either side of the axis,
    # flipping its principal phase between pi and -pi; pin it down
    k = round(p.arg / math.pi)
    if abs(p.arg - k * math.pi) < 1e-7:
        return CoverPoint(p.modulus, abs(k) * math.pi if abs(k) == 1 else k * math.pi)
    return p


def _cluster_points(raw: list[CoverPoint]) -> list[tuple[CoverPoint, int]]:
    """Merge near-coincident roots; multiplicity = cluster size."""
    out: list[tuple[CoverPoint, int]] = []
    for p in map(_snap_axis, raw):
        for i, (q, m) in enumerate(out):
            if abs(p.to_complex() - q.to_complex()) < 1e-5 * (p.modulus + q.modulus):
                out[i] = (q, m + 1)
                break
        else:
            out.append((p, 1))
    return out


def _collect_tps(params: OscillatorParams,
                 sector_window: tuple[float, float] | None) -> list[tuple[CoverPoint, int]]:
    tps = turning_points(params)
    raw: list[CoverPoint] = []
    merged: list[tuple[CoverPoint, int]] = []
    if tps.real_pair is not None:
        xm, xp = tps.real_pair
        if xp - xm <= 1e-7 * xp:
            merged.append((CoverPoint(0.5 * (xm + xp), 0.0), 2))
        else:
            raw.append(CoverPoint(xm, 0.0))
            raw.append(CoverPoint(xp, 0.0))
    raw.extend(tps.sector_points)
    merged.extend(_cluster_points(raw))
    if sector_window is not None:
        lo, hi = sector_window
        merged = [(p, m) for p, m in merged if lo - 1e-9 <= p.arg <= hi + 1e-9]
    merged.sort(key=lambda pm: (round(pm[0].arg, 9), pm[0].modulus))
    return merged


def _fan_directions(params: OscillatorParams, tp: CoverPoint, beta: int,
                    theta: float) -> list[float]:
    """Local emission angles at a turning point of multiplicity beta.

    With V ~ a0 (x - x0)^beta the trajectory through x0 satisfies
    arg a0 / 2 + (beta + 2)/2 * phi = theta mod pi, giving beta + 2 rays
    phi_m = (2 m pi + 2 theta - arg a0) / (beta + 2).
    """
    a = params.alpha
    z = tp.to_complex()
    xa = cmath.exp(2.0 * a * (math.log(tp.modulus) + 1j * tp.arg))
    lam2 = params.lam * params.lam
    if beta == 1:
        a0 = 2.0 * a * xa / z - 2.0 * lam2 / (z * z * z)
    else:
        v2 = 2.0 * a * (2.0 * a - 1.0) * xa / (z * z) + 6.0 * lam2 / (z ** 4)
        a0 = v2 / 2.0
    base = cmath.phase(a0)
    return [(2.0 * m * math.pi + 2.0 * theta - base) / (beta + 2.0)
            for m in range(beta + 2)]


def _polyline_midpoint(traj: Trajectory) -> complex:
    zs = [p.to_complex() for p in traj.points]
    seg = [abs(b - a) for a, b in zip(zs, zs[1:])]
    total = sum(seg)
    if total == 0:
        return zs[0]
    target = 0.5 * total
    acc = 0.0
    for a, b, d in zip(zs, zs[1:], seg):
        if acc + d >= target:
            t = (target - acc) / d if d > 0 else 0.0
            return a + t * (b - a)
        acc += d
    return zs[-1]


def stokes_complex(params: OscillatorParams,
                   sector_window: tuple[float, float] | None = None,
                   max_steps: int = 200_000,
                   theta: float = 0.5 * math.pi) -> StokesComplex:
    """Assemble the graph of theta-trajectories emitted by turning points.

    Each turning point of multiplicity beta launches beta + 2 traces along its
    local fan; traces terminate at another turning point, at the origin, or at
    an escape direction at infinity.  Turning-point-to-turning-point edges are
    traced from both ends and paired up by midpoint proximity so each edge is
    reported once.  The default theta = pi/2 gives the vertical trajectories
    whose union is the Stokes complex; infinity labels name the nearest sector
    boundary and are exact for that default.
    """
    tp_list = _collect_tps(params, sector_window)
    if not tp_list:
        raise ValueError("no turning points found in the window")
    stops = default_stops(params, max_steps=max_steps)
    if sector_window is not None:
        stops = TraceStops(stops.radius_max, stops.radius_min, stops.max_steps,
                           arg_window=sector_window)
    # exclusion radii from the local root spacing (origin counts as a root)
    zs = [p.to_complex() for p, _ in tp_list]
    spacing = []
    for i, zi in enumerate(zs):
        d = [abs(zi - zj) for j, zj in enumerate(zs) if j != i]
        d.append(abs(zi))
        spacing.append(min(d))
    guards = [(p, 1e-3 * s) for (p, _), s in zip(tp_list, spacing)]

    traces: list[tuple[int, Trajectory, str | None]] = []
    warnings: list[str] = []
    for i, (tp, beta) in enumerate(tp_list):
        launch_r = 10.0 * guards[i][1]
        for phi in _fan_directions(params, tp, beta, theta):
            z_launch = tp.to_complex() + cmath.rect(launch_r, phi)
            pt = CoverPoint.from_complex(z_launch, near_arg=tp.arg)
            v, _ = _potential_pair(params, "full", None)(z_launch, pt.arg)
            u = cmath.rect(1.0, theta) / cmath.sqrt(v)
            outward = (u.conjugate() * cmath.rect(1.0, phi)).real
            direction = 1 if outward > 0 else -1
            traj = trace_trajectory(
                params, pt, theta, direction, stops,
                tp_guard=guards, suppress_index=i,
                suppress_radius=3.0 * launch_r,
            )
            term = traj.termination
            label: str | None
            if term.kind == "near_turning_point":
                label = None  # resolved during pairing
            elif term.kind == "hit_radius_max":
                label = _infinity_label(params.alpha, traj.points[-1].arg)
            elif term.kind in ("hit_radius_min", "spiral_into_origin"):
                label = "0"
            elif term.kind == "entered_sector":
                label = "exit_%d" % term.index
            else:
                label = "unresolved"
                warnings.append(
                    "trace from tp%d along phi=%.3f hit the step limit" % (i, phi))
            traces.append((i, traj, label))

    edges: list[StokesEdge] = []
    pairable: dict[tuple[int, int], list[tuple[int, Trajectory]]] = {}
    for i, traj, label in traces:
        if label is None:
            j = traj.termination.index
            key = (min(i, j), max(i, j))
            pairable.setdefault(key, []).append((i, traj))
        else:
            edges.append(StokesEdge("tp%d" % i, label, traj))
    for (i, j), group in sorted(pairable.items()):
        if i == j:
            # loops: pair members of the same group with each other
            group = list(group)
            while len(group) >= 2:
                src, t0 = group.pop(0)
                mids = [abs(_polyline_midpoint(t0) - _polyline_midpoint(t)) for _, t in group]
                k = int(np.argmin(mids))
                group.pop(k)
                edges.append(StokesEdge("tp%d" % i, "tp%d" % j, t0))
            for src, t0 in group:
                warnings.append("unpaired loop trace at tp%d" % i)
                edges.append(StokesEdge("tp%d" % i, "tp%d" % j, t0))
            continue
        fwd = [(s, t) for s, t in group if s == i]
        bwd = [(s, t) for s, t in group if s == j]
        while fwd and bwd:
            s0, t0 = fwd.pop(0)
            mids = [abs(_polyline_midpoint(t0) - _polyline_midpoint(t)) for _, t in bwd]
            k = int(np.argmin(mids))
            bwd.pop(k)
            edges.append(StokesEdge("tp%d" % i, "tp%d" % j, t0))
        for s0, t0 in fwd + bwd:
            warnings.append("unpaired edge trace between tp%d and tp%d" % (i, j))
            edges.append(StokesEdge("tp%d" % min(i, j), "tp%d" % max(i, j), t0))

    vertex_points: dict = {}
    vertex_multiplicity: dict = {}
    labels: list[str] = []
    for i, (tp, beta) in enumerate(tp_list):
        lab = "tp%d" % i
        labels.append(lab)
        vertex_points[lab] = tp
        vertex_multiplicity[lab] = beta
    labels.append("0")
    vertex_points["0"] = None
    for e in edges:
        for lab in (e.source, e.target):
            if lab not in vertex_points:
                labels.append(lab)
                vertex_points[lab] = None
    # fan-count consistency: each turning point must carry beta + 2 edge ends
    for i, (tp, beta) in enumerate(tp_list):
        lab = "tp%d" % i
        ends = sum((e.source == lab) + (e.target == lab) for e in edges)
        if ends != beta + 2:
            warnings.append("tp%d has %d edge ends, expected %d" % (i, ends, beta + 2))
    return StokesComplex(
        vertices=tuple(labels),
        vertex_points=vertex_points,
        vertex_multiplicity=vertex_multiplicity,
        edges=tuple(edges),
        warnings=tuple(warnings),
    )


def check_admissible(params: OscillatorParams, path: PathSpec,
                     n: int = 1025) -> AdmissibilityReport:
    """Certify a candidate path: monotone Re S plus (rho, beta) functionals.

    Monotonicity is judged against the path's own scale: the threshold is a
    fixed fraction of the mean |dS| per grid interval, so a path where Re S
    merely stalls (sqrt(V) locally imaginary) is rejected.
    """
    frame = PathFrame(params, path)
    re_all: list[np.ndarray] = []
    offset = 0.0 + 0.0j
    total_len = 0.0
    per = max(8, n // max(1, len(frame.segments)))
    for i in range(len(frame.segments)):
        ts = np.linspace(0.0, 1.0, per)
        s = frame.cumulative_s(i, ts) + offset
        offset = s[-1]
        # each segment starts where the previous one ended: drop the duplicate
        re_all.append(s.real if i == 0 else s.real[1:])
        total_len += float(np.sum(np.abs(np.diff(s))))
    re = np.concatenate(re_all)
    d = np.diff(re)
    tol = 1e-9 * (total_len / max(1, len(d)) + 1e-300)
    monotone = bool(np.all(d > tol) or np.all(d < -tol))
    ef = error_functionals(params, path, n=n)
    return AdmissibilityReport(monotone=monotone, rho=ef.rho, beta=ef.beta, bound=ef.bound)


def trajectory_to_path(traj: Trajectory, max_nodes: int = 200,
                       sqrt_v_branch: str = "principal") -> PathSpec:
    """Decimate a traced polyline into a piecewise-line PathSpec."""
    pts = traj.points
    if len(pts) < 2:
        raise ValueError("trajectory too short to convert")
    stride = max(1, (len(pts) - 1) // max_nodes)
    nodes = list(pts[::stride])
    if nodes[-1] is not pts[-1]:
        nodes.append(pts[-1])
    return PathSpec(tuple(nodes), tuple("line" for _ in nodes[:-1]), sqrt_v_branch)


def trajectory_csv_rows(traj: Trajectory) -> list[tuple[float, float, float]]:
    """Rows (Re x, Im x, cover argument) for polyline export."""
    out = []
    for p in traj.points:
        z = p.to_complex()
        out.append((z.real, z.imag, p.arg))
    return out


def complex_to_json_dict(sc: StokesComplex, params: OscillatorParams,
                         include_polylines: bool = True) -> dict:
    verts = []
    for lab in sc.vertices:
        p = sc.vertex_points.get(lab)
        if lab.startswith("tp"):
            kind = "turning_point"
        elif lab == "0":
            kind = "origin"
        elif lab.startswith("inf"):
            kind = "infinity"
        else:
            kind = "boundary"
        entry = {
            "label": lab,
            "kind": kind,
            "position": None if p is None else [p.to_complex().real, p.to_complex().imag],
            "multiplicity": sc.vertex_multiplicity.get(lab),
        }
        verts.append(entry)
    edges = []
    for e in sc.edges:
        item = {"source": e.source, "target": e.target}
        if include_polylines:
            item["points"] = [[r, i, a] for r, i, a in trajectory_csv_rows(e.trajectory)]
        edges.append(item)
    return {
        "schema_version": 1,
        "alpha": params.alpha,
        "ell": params.ell,
        "energy": [params.energy.real, params.energy.imag],
        "vertices": verts,
        "edges": edges,
        "warnings": list(sc.warnings),
    }


def topology_signature(sc: StokesComplex) -> dict:
    """Canonical labeled-graph signature: sorted vertices and edge multiset."""
    pairs = sorted(
        "%s|%s" % tuple(sorted((e.source, e.target))) for e in sc.edges
    )
    return {"vertices": sorted(sc.vertices), "edges": pairs}
