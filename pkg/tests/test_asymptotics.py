import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rho_soliton_lab.asymptotics import (
    cigar_checks,
    fit_exponent,
    fit_report,
    limit_diagnostics,
    predicted_exponents,
)
from rho_soliton_lab.errors import NonpositiveData, OutOfRegime, TailTooShort
from rho_soliton_lab.phase_system import SolitonParams
from rho_soliton_lab.shooting import unstable_trajectory


class TestPredictions:
    def test_bryant_limit(self):
        pred = predicted_exponents(SolitonParams(3, 0.0))
        assert (pred.omega_exp, pred.f_exp, pred.vol_exp) == (0.5, 1.0, 2.0)
        assert pred.regime == "power_law"

    def test_negative_rho(self):
        pred = predicted_exponents(SolitonParams(3, -1.0))
        assert pred.omega_exp == pytest.approx(0.375)
        assert pred.f_exp == pytest.approx(1.25)
        assert pred.vol_exp == pytest.approx(1.75)

    def test_cigar(self):
        pred = predicted_exponents(SolitonParams(3, 0.5))
        assert pred.regime == "cigar"
        assert (pred.omega_exp, pred.f_exp, pred.vol_exp) == (0.0, 2.0, 1.0)

    def test_large_rho_limits(self):
        for rho in (1e9, -1e9):
            pred = predicted_exponents(SolitonParams(3, rho))
            assert pred.omega_exp == pytest.approx(1.0 / 3.0, abs=1e-8)
            assert pred.f_exp == pytest.approx(4.0 / 3.0, abs=1e-8)
            assert pred.vol_exp == pytest.approx(5.0 / 3.0, abs=1e-8)

    def test_band_rejected(self):
        for rho in (0.25, 0.3, 0.49):
            with pytest.raises(OutOfRegime):
                predicted_exponents(SolitonParams(3, rho))

    @given(rho=st.floats(min_value=-10.0, max_value=10.0),
           n=st.integers(min_value=3, max_value=6))
    @settings(max_examples=300, deadline=None)
    def test_volume_exponent_identity(self, rho, n):
        p = SolitonParams(n, rho)
        lo, hi = 1.0 / (2 * p.m), 1.0 / p.m
        if lo <= rho < hi:
            return
        pred = predicted_exponents(p)
        assert pred.vol_exp == pytest.approx((n - 1) * pred.omega_exp + 1.0, rel=1e-12)


class TestFitExponent:
    def test_linear(self):
        r = np.geomspace(1, 100, 200)
        exp, err = fit_exponent(r, r)
        assert exp == pytest.approx(1.0, abs=1e-12)
        assert err < 1e-12

    def test_synthetic_power_law(self):
        r = np.geomspace(1, 100, 200)
        exp, err = fit_exponent(r, 2.0 * r**0.375)
        assert exp == pytest.approx(0.375, abs=1e-10)
        assert err < 1e-10

    @given(scale=st.floats(min_value=1e-6, max_value=1e6),
           power=st.floats(min_value=-3, max_value=3))
    @settings(max_examples=100, deadline=None)
    def test_scale_invariance(self, scale, power):
        r = np.geomspace(1, 50, 100)
        exp, _ = fit_exponent(r, scale * r**power)
        assert exp == pytest.approx(power, abs=1e-8)

    def test_nonpositive_rejected(self):
        r = np.geomspace(1, 10, 50)
        with pytest.raises(NonpositiveData):
            fit_exponent(r, np.linspace(1, -1, 50))

    def test_bad_tail_fraction(self):
        r = np.geomspace(1, 10, 50)
        with pytest.raises(ValueError):
            fit_exponent(r, r, tail_fraction=0.9)

    def test_too_few_samples(self):
        with pytest.raises(TailTooShort):
            fit_exponent(np.array([1.0, 2.0, 4.0]), np.array([1.0, 2.0, 4.0]),
                         tail_fraction=0.25)


class TestConstructedFits:
    def test_bryant(self, profiles):
        rows = {row.quantity: row for row in fit_report(profiles["bryant"])}
        assert abs(rows["omega_exponent"].fitted - 0.5) < 0.02
        assert abs(rows["f_exponent"].fitted - 1.0) < 0.05
        assert abs(rows["vol_exponent"].fitted - 2.0) < 0.05

    def test_negative_rho(self, profiles):
        rows = {row.quantity: row for row in fit_report(profiles["negrho"])}
        assert abs(rows["omega_exponent"].fitted - 0.375) < 0.02
        assert abs(rows["f_exponent"].fitted - 1.25) < 0.05
        assert abs(rows["vol_exponent"].fitted - 1.75) < 0.05

    def test_rho_one(self, profiles):
        rows = {row.quantity: row for row in fit_report(profiles["rho1"])}
        assert abs(rows["omega_exponent"].fitted - 0.25) < 0.02


class TestCigar:
    def test_checks(self, profiles):
        rep = cigar_checks(profiles["cigar"])
        assert rep.omega_tail_oscillation < 0.01
        assert abs(rep.f_exponent - 2.0) < 0.05
        assert abs(rep.vol_exponent - 1.0) < 0.05
        assert rep.passed()

    def test_regime_guard(self, profiles):
        with pytest.raises(OutOfRegime):
            cigar_checks(profiles["bryant"])


class TestLimitDiagnostics:
    def test_bryant_limits(self):
        p = SolitonParams(3, 0.0)
        traj = unstable_trajectory(p, t_span=2000.0)
        rep = limit_diagnostics(traj, p)
        assert rep.pred_y_over_t == 1.0
        assert rep.pred_t_times_x == 1.0
        assert rep.pred_x_times_y == 1.0
        assert rep.max_rel_error() < 0.02

    def test_negative_rho_limits(self):
        p = SolitonParams(3, -1.0)
        traj = unstable_trajectory(p, t_span=2000.0)
        rep = limit_diagnostics(traj, p)
        assert rep.pred_y_over_t == pytest.approx(5.0)
        assert rep.pred_t_times_x == pytest.approx(0.6)
        assert rep.pred_x_times_y == pytest.approx(3.0)
        assert rep.max_rel_error() < 0.02

    def test_cigar_limits(self):
        p = SolitonParams(3, 0.5)
        traj = unstable_trajectory(p, t_span=40.0, method="rk45")
        rep = limit_diagnostics(traj, p, tail_fraction=0.3)
        assert rep.pred_y_over_t == -1.0
        assert rep.y_over_t == pytest.approx(-1.0, abs=0.03)
        # x decays like exp(-(n-2) t^2 / 2)
        assert rep.cigar_log_x_slope == pytest.approx(-0.5, rel=0.05)

    def test_tail_too_short(self):
        p = SolitonParams(3, 0.0)
        traj = unstable_trajectory(p, t_span=5.0)
        with pytest.raises(TailTooShort):
            limit_diagnostics(traj, p)

    def test_band_rejected(self, profiles):
        p = SolitonParams(3, 0.3)
        traj = unstable_trajectory(SolitonParams(3, 0.0), t_span=20.0)
        with pytest.raises(OutOfRegime):
            limit_diagnostics(traj, p)
