import math

import numpy as np
import pytest

from rho_soliton_lab.errors import IntegratorError, OutOfRangeError
from rho_soliton_lab.integrator import (
    EventSpec,
    IntegrationConfig,
    dense_eval,
    integrate,
)
from rho_soliton_lab.phase_system import PhaseState, SolitonParams, steady_vector_field


def exp_field(t, y):
    return [y[0]]


def gaussian_field(t, y):
    return [-2.0 * t * y[0]]


class TestBasics:
    def test_exponential(self):
        traj = integrate(exp_field, [1.0], 0.0, 1.0, IntegrationConfig())
        assert traj.termination == "t_end_reached"
        assert traj.end_state[0] == pytest.approx(math.e, abs=1e-9)

    def test_gaussian_event_time(self):
        ev = EventSpec("half", lambda t, y: y[0] - 0.5, direction="falling", terminal=True)
        traj = integrate(gaussian_field, [1.0], 0.0, 3.0,
                         IntegrationConfig(events=(ev,)))
        assert traj.termination == "event"
        name, t_ev, state = traj.events_hit[0]
        # the solution is exp(-t^2), so the crossing sits at sqrt(ln 2)
        assert t_ev == pytest.approx(math.sqrt(math.log(2.0)), abs=1e-9)

    def test_event_guard_residual(self):
        ev = EventSpec("half", lambda t, y: y[0] - 0.5, direction="falling", terminal=True)
        traj = integrate(gaussian_field, [1.0], 0.0, 3.0,
                         IntegrationConfig(events=(ev,)))
        _, t_ev, state = traj.events_hit[0]
        assert abs(state[0] - 0.5) < 1e-9

    def test_steady_trajectory_stays_in_band(self):
        # leaving the saddle along the unstable direction, x remains in
        # (0, 1) until the terminal event fires
        from rho_soliton_lab.phase_system import unstable_direction
        p = SolitonParams(3, 0.0)
        field = lambda t, s: steady_vector_field(p, PhaseState(*s))
        _, v = unstable_direction(p)
        start = [1.0 + 1e-6 * v[0], 1e-6 * v[1], 1e-3]
        ev = EventSpec("y_big", lambda t, s: s[1] - 30.0, direction="rising", terminal=True)
        traj = integrate(field, start, 0.0, 200.0,
                         IntegrationConfig(events=(ev,), rel_tol=1e-11))
        assert traj.termination == "event"
        xs = traj.states[1:, 0]
        assert np.all(xs > 0.0) and np.all(xs < 1.0)

    def test_blow_up(self):
        traj = integrate(lambda t, y: [y[0] ** 2], [1.0], 0.0, 2.0,
                         IntegrationConfig())
        assert traj.termination == "blow_up"
        with pytest.raises(Exception):
            traj.ensure_completed()

    def test_step_limit(self):
        traj = integrate(exp_field, [1.0], 0.0, 1.0,
                         IntegrationConfig(max_steps=3, max_step=1e-3))
        assert traj.termination == "step_limit"

    def test_nonfinite_start_rejected(self):
        with pytest.raises(IntegratorError):
            integrate(lambda t, y: [1.0 / y[0]], [0.0], 0.0, 1.0)


class TestDenseEval:
    def test_stored_time_is_exact(self):
        traj = integrate(exp_field, [1.0], 0.0, 1.0)
        for i in (0, len(traj.t) // 2, -1):
            assert dense_eval(traj, traj.t[i])[0] == traj.states[i, 0]

    def test_linear_field(self):
        traj = integrate(lambda t, y: [1.0], [0.25], 0.0, 2.0)
        for tq in (0.1, 0.73, 1.999):
            assert dense_eval(traj, tq)[0] == pytest.approx(0.25 + tq, abs=1e-12)

    def test_exponential_midpoints(self):
        traj = integrate(exp_field, [1.0], 0.0, 1.0)
        mids = 0.5 * (traj.t[:-1] + traj.t[1:])
        vals = dense_eval(traj, mids)[:, 0]
        assert np.max(np.abs(vals - np.exp(mids))) < 1e-9

    def test_out_of_range(self):
        traj = integrate(exp_field, [1.0], 0.0, 1.0)
        with pytest.raises(OutOfRangeError):
            dense_eval(traj, 1.5)


class TestProperties:
    def test_tolerance_halving_never_hurts(self):
        errs = []
        for scale in (1.0, 0.5, 0.25, 0.125):
            cfg = IntegrationConfig(rel_tol=1e-6 * scale, abs_tol=1e-8 * scale)
            traj = integrate(exp_field, [1.0], 0.0, 1.0, cfg)
            errs.append(abs(traj.end_state[0] - math.e))
        assert all(b <= a * (1 + 1e-9) for a, b in zip(errs, errs[1:]))

    def test_time_reversal(self):
        p = SolitonParams(3, -1.0)
        field = lambda t, s: steady_vector_field(p, PhaseState(*s))
        start = [0.9, 0.5, 1.0]
        fwd = integrate(field, start, 0.0, 3.0, IntegrationConfig(rel_tol=1e-10))
        back = integrate(field, list(fwd.end_state), 3.0, 0.0,
                         IntegrationConfig(rel_tol=1e-10))
        assert np.max(np.abs(back.end_state - np.array(start))) < 1e-7

    def test_backward_dense_eval(self):
        traj = integrate(exp_field, [1.0], 1.0, 0.0)
        assert dense_eval(traj, 0.5)[0] == pytest.approx(math.exp(-0.5), abs=1e-9)
