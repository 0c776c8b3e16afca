"""Unit tests for wavecascade.asymptotics.green_naghdi."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tests.conftest import cosine, smooth_random
from wavecascade.asymptotics.common import HyperbolicState, hyperbolic_mass
from wavecascade.asymptotics.green_naghdi import (
    GreenNaghdiOperator,
    check_positivity,
    gn_frequency,
    gn_initial_velocity,
    gn_integrate,
    gn_reconstruct,
)
from wavecascade.errors import DegenerateGeometryError, SolverFailureError
from wavecascade.params import RegimeParams
from wavecascade.spectral import PeriodicGrid, VectorField, grad

G = PeriodicGrid(16, 8)


def _wavy_depth():
    return G.field(lambda x, y: 1.0 + 0.3 * np.cos(x) + 0.1 * np.sin(y))


class TestOperator:
    def test_flat_single_mode(self):
        mu = 0.4
        op = GreenNaghdiOperator(G.zeros() + 1.0, G.zeros(), mu)
        v = grad(cosine(G, kx=2))
        got = op.apply(v)
        assert_allclose(got.x.values, (1.0 + mu * 4.0 / 3.0) * v.x.values, atol=1e-10)

    def test_solve_inverts_apply(self, rng):
        op = GreenNaghdiOperator(_wavy_depth(), G.field(lambda x, y: 0.2 * np.sin(x)), 0.5)
        rhs = VectorField(smooth_random(G, rng, 1.0), smooth_random(G, rng, 1.0))
        back = op.apply(op.solve(rhs))
        assert (back - rhs).max_abs() < 1e-8

    def test_non_convergence(self, rng):
        op = GreenNaghdiOperator(_wavy_depth(), G.zeros(), 0.5, maxiter=1)
        rhs = VectorField(smooth_random(G, rng, 1.0), smooth_random(G, rng, 1.0))
        with pytest.raises(SolverFailureError, match="did not converge"):
            op.solve(rhs)

    def test_needs_positive_depth(self):
        with pytest.raises(DegenerateGeometryError, match="positive depth"):
            GreenNaghdiOperator(cosine(G), G.zeros(), 0.5)

    def test_positivity_quotient_on_flat_bottom(self):
        p = RegimeParams(0.5, 0.5)
        assert check_positivity(HyperbolicState.rest(G), G.zeros(), p) >= 1.0 - 1e-12


class TestIntegration:
    def test_linear_dispersion(self):
        mu = 0.3
        p = RegimeParams(1e-6, mu)
        states = gn_integrate(HyperbolicState(cosine(G, 0.5), VectorField.zeros(G)), G.zeros(), p, 1.0, 0.01)
        omega = 1.0 / math.sqrt(1.0 + mu / 3.0)
        assert gn_frequency(G, mu)[1, 0] == pytest.approx(omega)
        assert_allclose(states[-1].zeta.values, 0.5 * math.cos(omega) * np.cos(G.x), atol=1e-5)

    def test_mass_conserved_over_topography(self):
        p = RegimeParams(0.2, 0.2, beta=0.5)
        b = G.field(lambda x, y: 0.3 * np.sin(x))
        state0 = HyperbolicState(cosine(G, 0.3), VectorField(cosine(G, 0.1, kx=2), G.zeros()))
        states = gn_integrate(state0, b, p, 0.2, 0.01)
        assert abs(hyperbolic_mass(states[-1]) - hyperbolic_mass(state0)) < 1e-12

    def test_dry_data_rejected(self):
        p = RegimeParams(1.0, 0.2, beta=1.0)
        with pytest.raises(DegenerateGeometryError):
            gn_integrate(HyperbolicState.rest(G), cosine(G, 1.5), p, 0.1, 0.01)


class TestInitialData:
    def test_reconstruction_inverts_initialization_to_second_order(self):
        mu = 0.05
        p = RegimeParams(0.5, mu, beta=0.5)
        zeta0 = cosine(G, 0.3)
        b = G.field(lambda x, y: 0.2 * np.sin(x))
        psi0 = cosine(G, 1.0, kx=2)
        v0 = gn_initial_velocity(zeta0, psi0, b, p)
        back = gn_reconstruct(HyperbolicState(zeta0, v0), b, p)
        assert (back - grad(psi0)).max_abs() < 50.0 * mu ** 2
        assert (v0 - grad(psi0)).max_abs() > 10.0 * mu ** 2
