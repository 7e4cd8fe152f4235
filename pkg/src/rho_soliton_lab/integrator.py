"""Adaptive ODE integration with dense output and event location.

Thin driver loop over scipy's embedded Runge-Kutta steppers (RK45 /
DOP853 and, for stiff stretches, the implicit Radau IIA pair).  The loop
adds the pieces the rest of the package relies on: named events located
by bisection on the dense output, a blow-up guard, a step budget, and an
immutable `Trajectory` that can be evaluated anywhere in its span.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import DOP853, RK45, Radau
from scipy.optimize import brentq

from .errors import (
    BlowUpError,
    IntegratorError,
    OutOfRangeError,
    StepLimitError,
)

__all__ = ["EventSpec", "IntegrationConfig", "Trajectory", "integrate", "dense_eval"]

_METHODS = {"rk45": RK45, "dop853": DOP853, "radau": Radau}

BLOW_UP_NORM = 1e12


@dataclass(frozen=True)
class EventSpec:
    """Scalar guard g(t, state); an event is a sign change of g.

    direction: 'rising' triggers on g going -, +; 'falling' on +, -;
    'any' on both.  Terminal events stop the integration at the located
    event time.
    """

    name: str
    guard: Callable[[float, np.ndarray], float]
    direction: str = "any"
    terminal: bool = False

    def __post_init__(self):
        if self.direction not in ("rising", "falling", "any"):
            raise ValueError(f"bad direction {self.direction!r}")

    def triggers(self, g_old: float, g_new: float) -> bool:
        if g_old == g_new or g_old * g_new > 0:
            return False
        if self.direction == "rising":
            return g_old < g_new
        if self.direction == "falling":
            return g_old > g_new
        return True


@dataclass(frozen=True)
class IntegrationConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = np.inf
    max_steps: int = 1_000_000
    events: Sequence[EventSpec] = ()
    method: str = "rk45"
    first_step: float | None = None
    blow_up: float = BLOW_UP_NORM

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class Trajectory:
    """Accepted steps, dense interpolants, events; immutable after creation.

    `t` is strictly monotone in the direction of integration.  Each located
    event time lies inside one accepted step, whose interpolant brackets the
    guard's sign change.
    """

    t: np.ndarray
    states: np.ndarray  # shape (len(t), dim)
    events_hit: list = field(default_factory=list)  # (name, t, state)
    termination: str = "t_end_reached"  # t_end_reached | event | step_limit | blow_up
    _interpolants: list = field(default_factory=list, repr=False)
    _forward: bool = True

    @property
    def t_start(self) -> float:
        return float(self.t[0])

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    @property
    def end_state(self) -> np.ndarray:
        return self.states[-1]

    def ensure_completed(self) -> "Trajectory":
        """Raise if the run stopped for a non-event, non-t_end reason."""
        if self.termination == "blow_up":
            raise BlowUpError(f"state norm exceeded blow-up threshold at t = {self.t_end}")
        if self.termination == "step_limit":
            raise StepLimitError(f"step budget exhausted at t = {self.t_end}")
        return self

    def __call__(self, tq):
        return dense_eval(self, tq)

    def first_event(self, name: str):
        for ev in self.events_hit:
            if ev[0] == name:
                return ev
        return None


def _state_norm(y: np.ndarray) -> float:
    return float(np.max(np.abs(y)))


def integrate(
    field: Callable[[float, np.ndarray], Sequence[float]],
    start: Sequence[float],
    t0: float,
    t1: float,
    cfg: IntegrationConfig | None = None,
) -> Trajectory:
    """Integrate state' = field(t, state) from t0 to t1 (t1 < t0 runs backward)."""
    cfg = cfg or IntegrationConfig()
    if t0 == t1:
        raise ValueError("t0 and t1 must differ")
    y0 = np.atleast_1d(np.asarray(start, dtype=float))
    if not np.all(np.isfinite(field(t0, y0))):
        raise IntegratorError("field is not finite at the initial state")

    kwargs = dict(rtol=cfg.rel_tol, atol=cfg.abs_tol, max_step=cfg.max_step)
    if cfg.first_step is not None:
        kwargs["first_step"] = cfg.first_step
    with np.errstate(over="ignore", invalid="ignore"):
        stepper = _METHODS[cfg.method](lambda t, y: np.asarray(field(t, y), dtype=float),
                                       t0, y0, t1, **kwargs)

    ts = [t0]
    ys = [y0.copy()]
    interps = []
    events_hit = []
    termination = "t_end_reached"
    g_old = [ev.guard(t0, y0) for ev in cfg.events]

    nsteps = 0
    while stepper.status == "running":
        if nsteps >= cfg.max_steps:
            termination = "step_limit"
            break
        with np.errstate(over="ignore", invalid="ignore"):
            message = stepper.step()
        nsteps += 1
        if stepper.status == "failed":
            raise IntegratorError(f"stepper failed at t = {stepper.t}: {message}")
        seg = stepper.dense_output()
        t_new, y_new = stepper.t, stepper.y.copy()

        # events: locate every trigger in this step, stop at the first terminal one
        g_new = [ev.guard(t_new, y_new) for ev in cfg.events]
        located = []
        for ev, go, gn in zip(cfg.events, g_old, g_new):
            if not ev.triggers(go, gn):
                continue
            t_lo, t_hi = ts[-1], t_new
            t_ev = brentq(lambda tt: ev.guard(tt, seg(tt)), t_lo, t_hi,
                          xtol=1e-12, rtol=4.0 * np.finfo(float).eps)
            located.append((ev, t_ev))
        located.sort(key=lambda pair: abs(pair[1] - ts[-1]))
        stopped = False
        for ev, t_ev in located:
            y_ev = np.asarray(seg(t_ev), dtype=float)
            events_hit.append((ev.name, float(t_ev), y_ev))
            if ev.terminal:
                ts.append(float(t_ev))
                ys.append(y_ev)
                interps.append(seg)
                termination = "event"
                stopped = True
                break
        if stopped:
            break

        ts.append(float(t_new))
        ys.append(y_new)
        interps.append(seg)
        g_old = g_new

        if _state_norm(y_new) > cfg.blow_up:
            termination = "blow_up"
            break

    return Trajectory(
        t=np.asarray(ts),
        states=np.asarray(ys),
        events_hit=events_hit,
        termination=termination,
        _interpolants=interps,
        _forward=t1 > t0,
    )


def dense_eval(traj: Trajectory, tq):
    """Interpolated state(s) at time(s) tq within the trajectory span.

    Times equal to a stored sample return the stored state exactly.
    """
    scalar = np.isscalar(tq)
    tq_arr = np.atleast_1d(np.asarray(tq, dtype=float))
    t = traj.t
    lo, hi = (t[0], t[-1]) if traj._forward else (t[-1], t[0])
    if np.any(tq_arr < lo) or np.any(tq_arr > hi):
        raise OutOfRangeError(f"query outside [{lo}, {hi}]")

    keys = t if traj._forward else -t
    out = np.empty((len(tq_arr), traj.states.shape[1]))
    for j, tv in enumerate(tq_arr):
        k = tv if traj._forward else -tv
        i = bisect.bisect_left(keys, k)
        if i < len(t) and t[i] == tv:
            out[j] = traj.states[i]
        else:
            out[j] = traj._interpolants[i - 1](tv)
    if scalar:
        return out[0]
    return out
