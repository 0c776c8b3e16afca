"""Unit tests for wavecascade.waterwaves."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tests.conftest import cosine
from wavecascade.dnop import DnBackend
from wavecascade.errors import DegenerateGeometryError, InvalidInputError
from wavecascade.params import DepthScaling, RegimeParams, effective_nu
from wavecascade.spectral import PeriodicGrid
from wavecascade.strip import StripGeometry
from wavecascade.taylor import taylor_check
from wavecascade.waterwaves import (
    IntegratorConfig,
    SurfaceState,
    diagnostic_energy,
    hamiltonian,
    integrate,
    linear_frequency,
    mass,
    min_depth,
    suggest_dt,
    ww_rhs,
)

G = PeriodicGrid(16, 8)
FAST = DnBackend.small_amplitude(3)


def _flat(p: RegimeParams) -> StripGeometry:
    return StripGeometry.flat(G, p)


class TestIntegratorConfig:
    def test_validation(self):
        with pytest.raises(InvalidInputError, match="dt"):
            IntegratorConfig(dt=0.0, t_end=1.0)
        with pytest.raises(InvalidInputError, match="t_end"):
            IntegratorConfig(dt=0.1, t_end=-1.0)
        with pytest.raises(InvalidInputError, match="snapshot_stride"):
            IntegratorConfig(dt=0.1, t_end=1.0, snapshot_stride=0)


class TestRightHandSide:
    def test_rest_is_stationary(self):
        p = RegimeParams(0.5, 1.0)
        d_zeta, d_psi = ww_rhs(SurfaceState.rest(G), _flat(p), DnBackend.elliptic(nz=12))
        assert d_zeta.max_abs() == 0.0
        assert d_psi.max_abs() == 0.0

    def test_linear_limit(self):
        p = RegimeParams(1e-6, 1.0)
        psi = cosine(G)
        d_zeta, d_psi = ww_rhs(SurfaceState(cosine(G), psi), _flat(p), DnBackend.elliptic())
        expected = math.tanh(1.0) / p.nu
        assert_allclose(d_zeta.values, expected * psi.values, atol=1e-5)
        assert_allclose(d_psi.values, -np.cos(G.x), atol=1e-5)


class TestIntegrate:
    def test_linear_standing_wave(self):
        p = RegimeParams(1e-5, 1.0)
        geom = _flat(p)
        omega = math.sqrt(math.tanh(1.0) / p.nu)
        cfg = IntegratorConfig(dt=0.01, t_end=1.0, dn_backend=FAST)
        states = integrate(SurfaceState(cosine(G, 0.5), G.zeros()), cfg, geom, taylor=taylor_check(geom, G.zeros()))
        final = states[-1]
        assert final.time == pytest.approx(1.0)
        assert_allclose(final.zeta.values, 0.5 * math.cos(omega) * np.cos(G.x), atol=1e-4)

    def test_mass_and_energy_conserved(self):
        p = RegimeParams(0.1, 1.0)
        geom = _flat(p)
        state0 = SurfaceState(cosine(G, 0.5), cosine(G, 0.3, kx=2))
        backend = DnBackend.elliptic(nz=16, cg_tol=1e-12)
        cfg = IntegratorConfig(dt=0.01, t_end=0.2, dn_backend=backend, dealias=False)
        states = integrate(state0, cfg, geom, taylor=taylor_check(geom, state0.psi, backend))
        h0 = hamiltonian(state0, geom, backend)
        h1 = hamiltonian(states[-1], geom, backend)
        assert abs(mass(states[-1]) - mass(state0)) < 1e-12
        assert abs(h1 - h0) < 1e-5 * abs(h0)

    def test_reverse_returns_to_start(self):
        p = RegimeParams(0.1, 1.0)
        geom = _flat(p)
        state0 = SurfaceState(cosine(G, 0.5), cosine(G, 0.3, kx=2))
        cfg = IntegratorConfig(dt=0.01, t_end=0.3, dn_backend=FAST)
        forward = integrate(state0, cfg, geom, taylor=taylor_check(geom, state0.psi))[-1]
        back = integrate(forward, cfg, geom, reverse=True, taylor=taylor_check(geom, forward.psi))[-1]
        assert back.time == pytest.approx(0.0, abs=1e-12)
        assert_allclose(back.zeta.values, state0.zeta.values, atol=1e-6)
        assert_allclose(back.psi.values, state0.psi.values, atol=1e-6)

    def test_snapshot_stride(self):
        p = RegimeParams(0.1, 1.0)
        geom = _flat(p)
        cfg = IntegratorConfig(dt=0.01, t_end=0.1, dn_backend=FAST, snapshot_stride=5)
        states = integrate(SurfaceState.rest(G), cfg, geom, taylor=taylor_check(geom, G.zeros()))
        assert [round(s.time, 12) for s in states] == [0.0, 0.05, 0.1]

    def test_warns_without_taylor_check(self, caplog):
        p = RegimeParams(0.1, 1.0)
        cfg = IntegratorConfig(dt=0.05, t_end=0.05, dn_backend=FAST)
        with caplog.at_level("WARNING", logger="wavecascade.waterwaves"):
            integrate(SurfaceState.rest(G), cfg, _flat(p))
        assert "without a prior Taylor sign check" in caplog.text

    def test_stage_below_h0_reports_last_accepted_time(self):
        p = RegimeParams(1.0, 1.0)
        # depth 0.15 under the trough, with psi pulling it down faster than one step can absorb
        geom = StripGeometry(cosine(G, -0.85), G.zeros(), p)
        state = SurfaceState(geom.zeta, cosine(G, -4.0))
        cfg = IntegratorConfig(dt=0.5, t_end=1.0, dn_backend=DnBackend.elliptic(nz=12))
        with pytest.raises(DegenerateGeometryError, match="in a stage after t=0") as exc:
            integrate(state, cfg, geom, taylor=taylor_check(geom, state.psi))
        assert exc.value.time == 0.0
        assert exc.value.min_depth < exc.value.h0
        assert exc.value.to_dict()["time"] == 0.0


class TestDiagnostics:
    def test_hamiltonian_of_linear_wave(self):
        p = RegimeParams(1e-9, 1.0)
        geom = _flat(p)
        state = SurfaceState(cosine(G), cosine(G))
        area = G.lx * G.ly
        expected = 0.25 * area + 0.25 * area * math.tanh(1.0) / p.nu
        assert hamiltonian(state, geom, DnBackend.elliptic()) == pytest.approx(expected, rel=1e-7)

    def test_diagnostic_energy_at_level_zero(self):
        p = RegimeParams(0.1, 1.0)
        geom = _flat(p)
        state = SurfaceState(cosine(G), G.zeros())
        assert diagnostic_energy(state, geom, FAST, 0.0) == pytest.approx(0.5 * G.lx * G.ly)

    def test_min_depth(self):
        p = RegimeParams(0.5, 1.0, beta=0.5)
        geom = StripGeometry(G.zeros(), cosine(G, 0.4), p)
        state = SurfaceState(cosine(G, -0.2), G.zeros())
        assert min_depth(state, geom) == pytest.approx(1.0 - 0.1 - 0.2)

    def test_linear_frequency(self):
        p = RegimeParams(0.1, 4.0)
        omega = linear_frequency(G, p)
        assert omega[0, 0] == 0.0
        assert omega[1, 0] == pytest.approx(math.sqrt(2.0 * math.tanh(2.0) / (4.0 * p.nu)))

    def test_suggest_dt(self):
        p = RegimeParams(0.1, 1.0)
        dt = suggest_dt(G, p, DepthScaling.GENERAL, cfl=0.5)
        assert 0.0 < dt < G.dx
        shallow = suggest_dt(G, p, DepthScaling.SHALLOW, cfl=0.5)
        assert shallow > 0
        assert effective_nu(p, DepthScaling.SHALLOW) == 1.0
