"""Spectral model: phase functions, derivatives, families, ladder."""

import math

import numpy as np
import pytest

from revivalkit.errors import DomainError
from revivalkit.model import (
    SpectralModel,
    interleaving_violations,
    select_alpha_near,
)
from revivalkit.packet import select_centers
from revivalkit.util import linear_fit

TWO_PI = 2.0 * math.pi


class TestPhaseFunctions:
    def test_f_at_center_is_action_term_plus_quarter_turn(self, model_1e3):
        # arg Gamma(1/2) = 0 and the log term vanishes at lambda = 0
        want = -float(model_1e3.table.plus(0.0)) / model_1e3.h + 0.5 * math.pi
        assert abs(float(model_1e3.f_h(0.0)) - want) <= 1e-9 * abs(want)

    def test_g_vanishes_for_even_potential(self, model_1e3):
        lam = np.linspace(-1, 1, 41)
        assert np.max(np.abs(model_1e3.g_h(lam))) == 0.0

    def test_tunneling_angle_range(self, model_1e3):
        lam = np.linspace(-1, 1, 81)
        spread = model_1e3.z_h(lam) - model_1e3.y_h(lam)
        assert np.all(spread > 0.0)
        assert np.all(spread < TWO_PI)

    def test_exponential_weight_at_window_edge(self, model_1e3):
        # epsilon(h)/h = 1/sqrt(2), so the barrier weight is exp(2 pi / sqrt 2)
        y = model_1e3.epsilon_over_h(1.0)
        assert abs(y - 1.0 / math.sqrt(2.0)) <= 1e-15
        weight = math.exp(2.0 * math.pi * y)
        assert abs(weight - 85.01969522320721) <= 1e-10

    def test_domain_guard(self, model_1e3):
        with pytest.raises(DomainError):
            model_1e3.y_h(1.5)
        with pytest.raises(DomainError):
            model_1e3.y_h(np.array([2000.0]), extended=True)

    def test_slope_dominated_by_log_term(self, model_1e4):
        # leading part ln(h)/sqrt(-V''(0)) = -6.5127 at h = 1e-4, O(1) rest
        slope = float(model_1e4.y_derivative(np.array([0.0]), 1)[0])
        lead = math.log(1e-4) / math.sqrt(2.0)
        assert abs(lead - (-6.512694)) <= 1e-6
        assert slope < 0.0
        assert abs(slope - lead) <= 6.0

    def test_slope_offset_is_h_independent(self, model_1e3, model_1e4):
        # at lambda = 0 the non-log terms cancel exactly in the h-difference;
        # away from 0 the action slope at lambda*h leaves a tiny remainder
        want = (math.log(1e-3) - math.log(1e-4)) / math.sqrt(2.0)
        for lam, tol in ((-0.6, 5e-3), (0.0, 1e-12), (0.4, 5e-3)):
            d = float(
                model_1e3.y_derivative(np.array([lam]), 1)[0]
                - model_1e4.y_derivative(np.array([lam]), 1)[0]
            )
            assert abs(d - want) <= tol

    def test_monotone_sampled_phases(self, model_1e4):
        lam = np.linspace(-1, 1, 801)
        for fn in (model_1e4.y_h, model_1e4.z_h):
            diffs = np.diff(fn(lam))
            assert np.all(diffs < 0.0)

    def test_curvature_bounded_across_sweep(self, quartic, action_table):
        for h in (1e-3, 1e-4, 1e-5, 1e-6):
            m = SpectralModel(quartic, h, table=action_table)
            lam = np.linspace(-1, 1, 101)
            assert np.max(np.abs(m.y_derivative(lam, 2))) < 10.0


class TestDerivativeConsistency:
    @pytest.mark.parametrize("h", [1e-3, 1e-4])
    @pytest.mark.parametrize("lam", [-0.8, -0.3, 0.0, 0.3, 0.8])
    def test_analytic_vs_central_difference(self, quartic, action_table, h, lam):
        m = SpectralModel(quartic, h, table=action_table)
        step = 1e-5

        def fd(fn):
            return (fn(lam + step) - fn(lam - step)) / (2 * step)

        y1 = float(m.y_derivative(np.array([lam]), 1)[0])
        got = fd(lambda t: float(m.y_h(np.array([t]), extended=True)[0]))
        assert abs(got - y1) <= 1e-6 * abs(y1)

        y2 = float(m.y_derivative(np.array([lam]), 2)[0])
        got = fd(lambda t: float(m.y_derivative(np.array([t]), 1, extended=True)[0]))
        assert abs(got - y2) <= 1e-6 * max(abs(y2), 0.1)

        y3 = float(m.y_derivative(np.array([lam]), 3)[0])
        got = fd(lambda t: float(m.y_derivative(np.array([t]), 2, extended=True)[0]))
        assert abs(got - y3) <= 1e-6 * max(abs(y3), 0.1)

    def test_beta_family_derivative(self, model_1e4):
        lam, step = 0.25, 1e-5
        z1 = float(model_1e4.z_derivative(np.array([lam]), 1)[0])
        fd = float(
            (model_1e4.z_h(np.array([lam + step]), extended=True)
             - model_1e4.z_h(np.array([lam - step]), extended=True))[0]
        ) / (2 * step)
        assert abs(fd - z1) <= 1e-6 * abs(z1)


class TestFamilies:
    def test_roots_reinserted(self, model_1e4, window_1e4):
        for k, lam in window_1e4.alpha_lambdas.items():
            resid = float(model_1e4.y_h(np.array([lam]))[0]) - TWO_PI * k
            assert abs(resid) <= 1e-10
        for l, lam in window_1e4.beta_lambdas.items():
            resid = float(model_1e4.z_h(np.array([lam]))[0]) - TWO_PI * l
            assert abs(resid) <= 1e-10

    def test_all_eigenvalues_in_window(self, window_1e4):
        for _, v in window_1e4.alphas + window_1e4.betas:
            assert -window_1e4.h <= v <= window_1e4.h

    def test_families_decrease_in_index(self, window_1e4):
        for fam in ("alpha", "beta"):
            pairs = sorted(window_1e4.family(fam))
            vals = [v for _, v in pairs]
            assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_interleaving(self, window_1e4):
        assert interleaving_violations(window_1e4) == 0
        betas = dict(window_1e4.betas)
        for k, alpha_k in window_1e4.alphas:
            if k in betas:
                assert alpha_k < betas[k]
            if k + 1 in betas:
                assert betas[k + 1] < alpha_k

    def test_count_proportional_to_log_scale(self, quartic, action_table):
        # integer counts staircase around the trend line, so the 5% residual
        # budget is read as the relative standard error of the fitted slope
        hs = [10 ** (-e / 3) for e in range(9, 37)]
        counts, lnhs = [], []
        for h in hs:
            m = SpectralModel(quartic, h, table=action_table)
            w = m.solve_families()
            counts.append(len(w.alphas))
            lnhs.append(abs(math.log(h)))
        x, y = np.asarray(lnhs), np.asarray(counts)
        fit = linear_fit(x, y)
        assert fit.slope > 0.0
        se = math.sqrt(
            np.sum((y - fit.predict(x)) ** 2) / (len(x) - 2)
        ) / math.sqrt(np.sum((x - x.mean()) ** 2))
        assert se / fit.slope <= 0.05

    def test_gap_scaled_band(self, quartic, action_table):
        scaled = []
        for h in (1e-3, 1e-4, 1e-5):
            m = SpectralModel(quartic, h, table=action_table)
            w = m.solve_families()
            lnh = abs(math.log(h))
            for fam in ("alpha", "beta"):
                scaled.extend(g * lnh / h for g in w.gaps(fam))
        lo, hi = min(scaled), max(scaled)
        assert hi / lo < 2.0  # tight band around 2 pi / slope-prefactor

    def test_csv_rows_schema(self, window_1e4):
        rows = window_1e4.csv_rows()
        assert all(len(r) == 5 for r in rows)
        fams = {r[0] for r in rows}
        assert fams == {"alpha", "beta"}


class TestLadderAndPhaseData:
    def test_ladder_extends_the_window(self, model_1e4, window_1e4):
        roots = model_1e4.solve_ladder(lam_center=-0.4, n_side=15)
        assert len(roots) >= 25
        for k, lam in window_1e4.alpha_lambdas.items():
            assert k in roots
            assert abs(roots[k] - lam) <= 1e-12

    def test_phase_data_inverse_derivatives(self, model_1e4):
        roots = model_1e4.solve_ladder(lam_center=-0.4, n_side=8)
        n0 = select_alpha_near(roots, -0.4)
        ph = model_1e4.phase_data(roots, n0)
        lam0 = roots[n0]
        yp = float(model_1e4.y_derivative(np.array([lam0]), 1, extended=True)[0])
        assert abs(ph.a1 - 1.0 / yp) <= 1e-14
        assert abs(ph.t_hyp - yp) <= 1e-10
        # finite-difference check of a1 = dA/dx at x = 2 pi n0 via neighbors
        lam_p, lam_m = roots[n0 + 1], roots[n0 - 1]
        fd = (lam_p - lam_m) / (2 * TWO_PI)
        assert abs(fd - ph.a1) <= 0.05 * abs(ph.a1)

    def test_scaled_inverse_derivatives_bounded(self, quartic, action_table):
        # |A''| |ln h|^3 and |A'''| |ln h|^4 stay in a fixed band
        for h in (1e-3, 1e-4, 1e-5, 1e-6):
            m = SpectralModel(quartic, h, table=action_table)
            roots = m.solve_ladder(lam_center=-0.45, n_side=5)
            n0 = select_alpha_near(roots, -0.45)
            ph = m.phase_data(roots, n0)
            lnh = abs(math.log(h))
            assert 0.05 < abs(ph.a2) * lnh**3 < 5.0
            assert ph.a3_bound * lnh**4 < 40.0

    def test_center_index_times_h_converges(self, quartic, action_table):
        values = []
        for h in (1e-4, 1e-5, 1e-6, 1e-7):
            m = SpectralModel(quartic, h, table=action_table)
            w = m.solve_families()
            n0, _ = select_centers(w, 0.0)
            values.append(n0 * h)
        diffs = [abs(a - b) for a, b in zip(values, values[1:])]
        assert all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:]))
        assert abs(values[-1]) > 0.01  # limit is a nonzero constant

    def test_hyperbolic_period_linear_in_log_scale(self, quartic, action_table):
        lnhs, periods = [], []
        for h in (1e-3, 3.16e-4, 1e-4, 3.16e-5, 1e-5, 3.16e-6, 1e-6):
            m = SpectralModel(quartic, h, table=action_table)
            roots = m.solve_ladder(lam_center=-0.45, n_side=5)
            n0 = select_alpha_near(roots, -0.45)
            periods.append(abs(m.phase_data(roots, n0).t_hyp))
            lnhs.append(abs(math.log(h)))
        fit = linear_fit(lnhs, periods)
        assert fit.rms_residual / np.mean(periods) <= 0.05
