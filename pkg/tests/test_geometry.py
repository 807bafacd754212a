"""Trajectory tracing, Stokes graphs, and curve admissibility."""
import cmath
import json
import math
from importlib import resources

import pytest
from scipy import integrate as sint

from anharmonic import CoverPoint, OscillatorParams, eval_forcing, stokes_complex, topology_signature
from anharmonic.geometry import TraceStops, check_admissible, trace_trajectory, trajectory_to_path
from anharmonic.checks import _horizontal_curve


def _segment_distance(z, a, b):
    d = b - a
    if d == 0:
        return abs(z - a)
    t = max(0.0, min(1.0, ((z - a) * d.conjugate()).real / abs(d) ** 2))
    return abs(z - (a + t * d))


def _polyline_distance(z, points):
    zs = [p.to_complex() for p in points]
    return min(_segment_distance(z, a, b) for a, b in zip(zs, zs[1:]))


class TestModelTrajectories:
    """Potential variants with closed-form trajectories."""

    @pytest.mark.parametrize("alpha", [1.0, 0.6])
    def test_power_level_conservation(self, alpha):
        # for V = x^2a the level Im(e^-i theta x^(a+1)/(a+1)) is conserved
        params = OscillatorParams(alpha, 0.0, 0.0)
        x0 = CoverPoint.from_complex(1.5 + 0.8j)
        theta = 0.7
        tr = trace_trajectory(params, x0, theta, +1,
                              TraceStops(radius_max=12.0, radius_min=1e-3),
                              v_mode="pure_power")
        s0 = x0.cpow(alpha + 1.0) / (alpha + 1.0)
        for q in tr.points:
            s = q.cpow(alpha + 1.0) / (alpha + 1.0)
            assert abs((cmath.exp(-1j * theta) * (s - s0)).imag) < 1e-6
        assert tr.termination.kind == "hit_radius_max"

    def test_pole_ray(self):
        params = OscillatorParams(1.0, 0.0, 1.0)
        tr = trace_trajectory(params, CoverPoint(1.0, 0.4), 0.0, +1,
                              TraceStops(radius_max=9.0, radius_min=1e-3),
                              v_mode="pure_pole")
        assert max(abs(q.arg - 0.4) for q in tr.points) < 1e-9

    def test_pole_circle_tracks_the_cover(self):
        params = OscillatorParams(1.0, 0.0, 1.0)
        tr = trace_trajectory(params, CoverPoint(2.0, 0.0), 0.5 * math.pi, +1,
                              TraceStops(radius_max=9.0, radius_min=1e-3,
                                         max_steps=4000),
                              v_mode="pure_pole")
        assert max(abs(q.modulus - 2.0) for q in tr.points) < 1e-9
        # several full turns, argument unwound past 2 pi
        assert tr.points[-1].arg > 2.5 * math.pi


class TestTracing:
    def test_reversal_stays_on_the_curve(self):
        params = OscillatorParams(1.0, 2.0, 0.5)
        z0 = 3.0 + 1.0j
        fwd = trace_trajectory(params, CoverPoint.from_complex(z0), 0.3, +1,
                               TraceStops(radius_max=8.0, radius_min=1e-3))
        bwd = trace_trajectory(params, fwd.points[-1], 0.3, -1,
                               TraceStops(radius_max=9.0, radius_min=1e-3))
        assert _polyline_distance(z0, bwd.points) < 1e-3

    def test_level_drift_is_tracked(self):
        params = OscillatorParams(1.0, 2.0, 0.5)
        tr = trace_trajectory(params, CoverPoint.from_complex(3.0 + 1.0j), 0.3, +1,
                              TraceStops(radius_max=8.0, radius_min=1e-3))
        assert tr.level_drift < 1e-6 * (1.0 + abs(tr.s_values[-1]))


class TestStokesGraphs:
    def _fixture(self):
        text = resources.files("anharmonic.data").joinpath(
            "stokes_trichotomy.json").read_text()
        return json.loads(text)

    def test_topologies_match_frozen_graphs(self):
        fx = self._fixture()
        for case in fx["cases"]:
            params = OscillatorParams(case["alpha"], case["energy"], case["ell"])
            sig = topology_signature(stokes_complex(params))
            assert sig["vertices"] == case["signature"]["vertices"], case["name"]
            assert sig["edges"] == case["signature"]["edges"], case["name"]

    def test_vertex_degree_follows_multiplicity(self):
        # a zero of order beta emits beta + 2 trajectories
        for energy in (1.0, 2.0):
            sc = stokes_complex(OscillatorParams(1.0, energy, 0.5))
            degree = {v: 0 for v in sc.vertices}
            for e in sc.edges:
                degree[e.source] += 1
                degree[e.target] += 1
            for v in sc.vertices:
                if v.startswith("tp"):
                    assert degree[v] == sc.vertex_multiplicity[v] + 2

    def test_no_warnings_in_the_standard_cases(self):
        sc = stokes_complex(OscillatorParams(1.0, 4.0, 0.5))
        assert sc.warnings == ()


class TestAdmissibility:
    def test_inward_ray_certificate(self):
        from anharmonic import path_from_complex
        params = OscillatorParams(1.0, 2.0, 0.3)
        path = path_from_complex([10.0 + 0.0j, 4.0 + 0.0j],
                                 sqrt_v_branch="negative")
        rep = check_admissible(params, path)
        assert rep.monotone
        assert rep.rho < 0.1
        assert rep.bound >= math.expm1(rep.rho) - 1e-12

    def test_traced_curve_matches_direct_quadrature(self):
        """rho along the traced imaginary-axis trajectory, two ways.

        At alpha=1 the positive imaginary axis is itself a horizontal
        trajectory, so the traced polyline can be checked against an integral
        over the exact axis.
        """
        params = OscillatorParams(1.0, 6.0, 0.5)
        path = _horizontal_curve(params, 8.0j, 30.0)
        rep = check_admissible(params, path)
        assert rep.monotone
        lo = min(p.modulus for p in path.nodes)
        hi = max(p.modulus for p in path.nodes)

        def speed(y):
            return abs(eval_forcing(params, CoverPoint(y, 0.5 * math.pi)))

        ref, _ = sint.quad(speed, lo, hi, limit=300)
        assert abs(rep.rho - ref) < 1e-2 * ref

    def test_trajectory_to_path_keeps_endpoints(self):
        params = OscillatorParams(1.0, 2.0, 0.5)
        tr = trace_trajectory(params, CoverPoint.from_complex(3.0 + 1.0j), 0.0, +1,
                              TraceStops(radius_max=8.0, radius_min=1e-3))
        path = trajectory_to_path(tr, max_nodes=50)
        assert len(path.nodes) <= 50
        assert abs(path.nodes[0].to_complex() - tr.points[0].to_complex()) < 1e-12
        assert abs(path.nodes[-1].to_complex() - tr.points[-1].to_complex()) < 1e-12
