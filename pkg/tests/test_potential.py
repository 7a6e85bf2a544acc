"""Double-well potential, classical flow, and regularized actions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revivalkit.errors import (
    NonClosingOrbit,
    ParameterError,
    ToleranceFailure,
    TopologyError,
)
from revivalkit.potential import (
    canonical_double_well,
    flow_period,
    harmonic_well,
    leading_actions,
    leading_epsilon,
    lobe_action,
    regularized_action,
    turning_points,
    validate_saddle,
)
from revivalkit.util import linear_fit


class TestCanonicalWell:
    def test_saddle_normalization(self, quartic):
        assert quartic(0.0) == 0.0
        assert abs(quartic.first_derivative(0.0)) <= 1e-12
        assert quartic.second_derivative(0.0) == -2.0

    def test_well_minima(self, quartic):
        x = 1.0 / math.sqrt(2.0)
        assert abs(quartic(x) - (-0.25)) <= 1e-15
        assert abs(quartic(-x) - (-0.25)) <= 1e-15
        assert abs(quartic.first_derivative(x)) <= 1e-15

    def test_confinement_and_boundedness(self, quartic):
        xs = np.linspace(-quartic.domain_halfwidth, quartic.domain_halfwidth, 4001)
        vals = quartic(xs)
        assert np.min(vals) >= -0.25 - 1e-12
        assert quartic(quartic.domain_halfwidth) > 1.0

    def test_validate_saddle_accepts_quartic(self, quartic):
        validate_saddle(quartic)

    def test_validate_saddle_rejects_harmonic(self):
        with pytest.raises(ParameterError):
            validate_saddle(harmonic_well())


class TestFlowPeriod:
    def test_energy_drift_below_tolerance(self, quartic):
        orbit = flow_period(quartic, 1e-3)
        assert orbit.energy_drift <= 1e-9

    def test_period_refines_under_half_step(self, quartic):
        coarse = flow_period(quartic, 1e-3, dt=1e-3).period
        fine = flow_period(quartic, 1e-3, dt=5e-4).period
        assert abs(coarse - fine) / fine <= 1e-3  # well under the 1% oracle
        assert abs(coarse - fine) / fine <= 1e-2

    def test_log_law_across_sweep(self, quartic):
        hs = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
        taus = [flow_period(quartic, h).period for h in hs]
        assert all(b > a for a, b in zip(taus, taus[1:]))  # increasing as h drops
        fit = linear_fit([abs(math.log(h)) for h in hs], taus)
        assert fit.max_abs_residual / fit.slope <= 0.02

    def test_initial_point_is_inner_turning_point(self, quartic):
        orbit = flow_period(quartic, 1e-4)
        x0, xi0 = orbit.initial_point
        assert xi0 == 0.0
        assert abs(quartic(x0) - orbit.energy) <= 1e-15

    def test_non_closing_orbit_raises(self, quartic):
        with pytest.raises(NonClosingOrbit):
            flow_period(quartic, 1e-3, max_time=1.0)

    def test_drift_tolerance_enforced(self, quartic):
        with pytest.raises(ToleranceFailure):
            flow_period(quartic, 1e-3, dt=5e-2, drift_tol=1e-14)

    def test_bad_h_rejected(self, quartic):
        with pytest.raises(ParameterError):
            flow_period(quartic, 2.0)


class TestTurningPoints:
    def test_below_barrier_two_points(self, quartic):
        a, b = turning_points(quartic, -0.05, +1)
        assert 0.0 < a < b
        assert abs(quartic(a) + 0.05) <= 1e-12
        assert abs(quartic(b) + 0.05) <= 1e-12

    def test_above_barrier_from_origin(self, quartic):
        a, b = turning_points(quartic, 0.05, +1)
        assert a == 0.0
        assert abs(quartic(b) - 0.05) <= 1e-12

    def test_left_side_mirrors_right(self, quartic):
        ra, rb = turning_points(quartic, -0.05, +1)
        la, lb = turning_points(quartic, -0.05, -1)
        assert abs(la + rb) <= 1e-12 and abs(lb + ra) <= 1e-12

    def test_below_wells_is_topology_error(self, quartic):
        with pytest.raises(TopologyError):
            turning_points(quartic, -0.3, +1)

    @given(st.floats(min_value=-0.09, max_value=0.09))
    @settings(max_examples=40, deadline=None)
    def test_turning_points_lie_on_level_set(self, energy):
        quartic = canonical_double_well()
        a, b = turning_points(quartic, energy, +1)
        lo = a if energy < 0 else b
        assert abs(float(quartic(lo)) - energy) <= 1e-10
        assert abs(float(quartic(b)) - energy) <= 1e-10


class TestActions:
    def test_barrier_action_closed_form(self, quartic):
        # 2 * integral_0^1 sqrt(2(x^2 - x^4)) dx = 2 sqrt(2) / 3
        got = lobe_action(quartic, 0.0, +1)
        assert abs(got - 2.0 * math.sqrt(2.0) / 3.0) <= 1e-13

    def test_quadrature_refinement_oracle(self, quartic):
        for energy in (0.0, -0.03, 0.03):
            coarse = regularized_action(quartic, energy, +1, n=400)
            fine = regularized_action(quartic, energy, +1, n=800)
            assert abs(coarse - fine) <= 1e-6

    def test_epsilon_normalization(self, quartic):
        assert leading_epsilon(quartic, 0.0) == 0.0
        assert abs(leading_epsilon(quartic, 0.01) - 0.01 / math.sqrt(2.0)) <= 1e-15
        # numerical slope at the barrier energy
        d = 1e-6
        slope = (leading_epsilon(quartic, d) - leading_epsilon(quartic, -d)) / (2 * d)
        assert abs(slope - 1.0 / math.sqrt(2.0)) <= 1e-10

    def test_even_potential_symmetric_actions(self, quartic):
        for energy in (-0.06, -0.01, 0.02, 0.08):
            right = regularized_action(quartic, energy, +1)
            left = regularized_action(quartic, energy, -1)
            assert abs(right - left) <= 1e-10
            data = leading_actions(quartic, energy)
            assert data.leading_action_plus == data.leading_action_minus

    def test_regularized_action_is_smooth(self, quartic):
        # second divided differences bounded across the window, incl. E = 0
        es = np.array([-0.08, -0.04, -0.02, -0.01, -0.005, 0.005, 0.01, 0.02, 0.04, 0.08])
        vals = np.array([regularized_action(quartic, float(e), +1) for e in es])
        d1 = np.diff(vals) / np.diff(es)
        mid = 0.5 * (es[1:] + es[:-1])
        d2 = np.diff(d1) / np.diff(mid)
        assert np.max(np.abs(d2)) < 50.0

    def test_energy_window_guard(self, quartic):
        with pytest.raises(ParameterError):
            leading_actions(quartic, 0.2, delta=0.1)
