"""Construction of steady rotationally symmetric solitons by shooting.

Steady trajectories leave the saddle (x, y) = (1, 0).  They are built as
the monotone limit of a family of initial value problems for the scalar
phase ODE: in the low-rho regime (rho < 1/(2m), case 1)

    dx/dy = F(x, y),   x_eps(0) = 1 + eps,   y > 0,

squeezed between the nullcline h(y) and 1 + eps and pointwise decreasing
in eps; in the high-rho regime (rho >= 1/m, case 2) the same with
z = -y, G, and x_eps(0) = 1 - eps, pointwise increasing in eps.  The
family collapses onto the limit curve extremely fast (the limit is an
attracting invariant manifold), so orderings are numerically resolvable
only on moderate spans -- see `EpsilonFamily`.

Profile reconstruction integrates the time-parameterized system seeded
from the limit curve.  To stay conditioned on long spans it tracks the
deviation from the nullcline balance,

    delta = (m-1)(1-m rho)(1 - x^2) - x y,

as a state variable (x is recovered from (delta, y) by a stable quadratic
root), since for large |y| the direct numerator is a vanishing difference
of O(1) terms.  The delta-equation is stiff there (the manifold attracts
with rate ~ |y|), so the late segment uses an implicit stepper.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import warped_geometry
from .errors import (
    AnchoringFailed,
    NoEventWithinSpan,
    NonpositiveTipCurvature,
    NotConverged,
    NotSteady,
    OutOfRegime,
)
from .integrator import EventSpec, IntegrationConfig, Trajectory, integrate
from .phase_system import (
    PhaseState,
    SolitonParams,
    nullcline_h,
    nullcline_k,
    scalar_field_F,
    scalar_field_G,
    unstable_direction,
)
from .profile import NORMALIZATION_R1, NORMALIZATION_RAW, RadialProfile

__all__ = [
    "EpsilonFamily",
    "LimitCurve",
    "NonexistenceReport",
    "epsilon_trajectory",
    "extract_limit",
    "reconstruct_profile",
    "normalize_profile",
    "construct_soliton",
    "verify_nonexistence",
    "unstable_trajectory",
    "regime_of",
]

log = logging.getLogger("rho_soliton_lab")

CASE1 = "case1"
CASE2 = "case2"

DEFAULT_LADDER = (1e-3, 1e-4, 1e-5, 1e-6)
FAMILY_SPAN = 4.0
TIP_FIT_FRACTION = 0.05


def regime_of(p: SolitonParams) -> str:
    """case1 for rho < 1/(2m), case2 for rho >= 1/m; rejects the gap."""
    if not p.is_steady:
        raise NotSteady("shooting construction is for steady solitons (lambda = 0)")
    if p.rho < 1.0 / (2 * p.m):
        return CASE1
    if p.rho >= 1.0 / p.m:
        return CASE2
    raise OutOfRegime(
        f"no complete steady soliton with positive curvature for "
        f"rho in [1/(2(n-1)), 1/(n-1)) = [{1/(2*p.m)}, {1/p.m}); got {p.rho}"
    )


def _scalar_rhs(p: SolitonParams, case: str):
    if case == CASE1:
        return lambda u, s: [scalar_field_F(p, s[0], u)]
    return lambda u, s: [scalar_field_G(p, s[0], u)]


def epsilon_trajectory(
    p: SolitonParams,
    eps: float,
    span: float,
    rel_tol: float = 1e-11,
) -> Trajectory:
    """One member of the shooting family, integrated over y (or z) in (0, span]."""
    case = regime_of(p)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if span <= 0:
        raise ValueError("span must be positive")
    x0 = 1.0 + eps if case == CASE1 else 1.0 - eps
    cfg = IntegrationConfig(rel_tol=rel_tol, abs_tol=1e-14, method="dop853")
    traj = integrate(_scalar_rhs(p, case), [x0], 0.0, span, cfg)
    return traj.ensure_completed()


def _family_worker(args):
    n, rho, eps, span, rel_tol = args
    p = SolitonParams(n=n, rho=rho)
    return epsilon_trajectory(p, eps, span, rel_tol)


@dataclass
class EpsilonFamily:
    """Shooting family on a shared y- (or z-) grid.

    Invariants on the shared grid (strict where gaps exceed roundoff):
    case 1: h(y) <= x_eps(y) <= 1 + eps, and smaller eps gives the smaller
    trajectory; case 2: x_eps <= 1 and smaller eps gives the larger one.
    The inter-trajectory gaps contract at the manifold attraction rate, so
    strict ordering is only numerically meaningful while gaps dominate the
    integration tolerance (the default span is chosen accordingly).
    """

    params: SolitonParams
    regime: str
    epsilons: tuple[float, ...]     # strictly decreasing
    grid: np.ndarray                # shared grid, grid[0] = 0
    xs: np.ndarray                  # shape (len(epsilons), len(grid))
    trajectories: list[Trajectory]
    span: float

    @classmethod
    def construct(
        cls,
        p: SolitonParams,
        epsilons=DEFAULT_LADDER,
        span: float = FAMILY_SPAN,
        n_grid: int = 200,
        rel_tol: float = 1e-11,
        jobs: int = 1,
    ) -> "EpsilonFamily":
        case = regime_of(p)
        eps = tuple(sorted(set(float(e) for e in epsilons), reverse=True))
        if len(eps) < 2:
            raise ValueError("need at least two epsilon levels")
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                trajs = list(pool.map(
                    _family_worker,
                    [(p.n, p.rho, e, span, rel_tol) for e in eps],
                ))
        else:
            trajs = [epsilon_trajectory(p, e, span, rel_tol) for e in eps]
        grid = np.concatenate([[0.0], np.geomspace(span * 1e-4, span, n_grid)])
        xs = np.vstack([traj(grid)[:, 0] for traj in trajs])
        return cls(params=p, regime=case, epsilons=eps, grid=grid, xs=xs,
                   trajectories=trajs, span=span)

    def ordering_violations(self) -> list[tuple[float, float, float]]:
        """Grid points (u, eps_small, eps_large) violating the strict order."""
        bad = []
        for i in range(len(self.epsilons) - 1):
            big, small = self.xs[i], self.xs[i + 1]
            viol = small >= big if self.regime == CASE1 else small <= big
            for j in np.nonzero(viol)[0]:
                bad.append((float(self.grid[j]), self.epsilons[i + 1], self.epsilons[i]))
        return bad

    def envelope_violations(self, tol: float = 1e-12) -> int:
        """Count grid points outside the squeezing bounds of the regime."""
        count = 0
        if self.regime == CASE1:
            hb = nullcline_h(self.params, self.grid)
            for e, row in zip(self.epsilons, self.xs):
                count += int(np.sum(row < hb - tol))
                count += int(np.sum(row > 1.0 + e + tol))
        else:
            for e, row in zip(self.epsilons, self.xs):
                count += int(np.sum(row > 1.0 + tol))
        return count

    def gaps(self) -> np.ndarray:
        """|x_last - x_previous| on the grid, the Cauchy error bracket."""
        return np.abs(self.xs[-1] - self.xs[-2])


@dataclass
class LimitCurve:
    """Smallest-eps trajectory with its pointwise Cauchy gap estimate."""

    params: SolitonParams
    regime: str
    grid: np.ndarray
    x: np.ndarray
    gap: np.ndarray
    converged: np.ndarray
    trajectory: Trajectory
    tol: float

    @property
    def u_start(self) -> float:
        """First converged grid point past the origin."""
        idx = np.nonzero(self.converged & (self.grid > 0))[0]
        return float(self.grid[idx[0]])

    def __call__(self, u):
        return self.trajectory(u)[..., 0]


def extract_limit(family: EpsilonFamily, tol: float = 1e-6) -> LimitCurve:
    """Limit of the family as eps -> 0, with a per-point Cauchy gap.

    The limit is monotone in eps, so the smallest-eps member brackets it
    and the gap to the next member estimates the truncation.  Convergence
    is declared where the gap is below tol.
    """
    if len(family.epsilons) < 3:
        raise ValueError("need at least three epsilon levels to certify a limit")
    gap = family.gaps()
    converged = gap < tol
    if not np.any(converged & (family.grid > 0)):
        worst = sorted(zip(gap, family.grid), reverse=True)[:5]
        raise NotConverged(
            f"no grid point reached gap < {tol}; worst gaps {worst}",
            worst_points=[(float(u), float(g)) for g, u in worst],
        )
    return LimitCurve(
        params=family.params,
        regime=family.regime,
        grid=family.grid,
        x=family.xs[-1].copy(),
        gap=gap,
        converged=converged,
        trajectory=family.trajectories[-1],
        tol=tol,
    )


def residual_of_limit(limit: LimitCurve) -> float:
    """sup |dx/du - F(x, u)| of the limit curve by finite differencing."""
    u = limit.grid[1:]
    x = limit(u)
    du = np.gradient(x, u, edge_order=2)
    p = limit.params
    f = scalar_field_F if limit.regime == CASE1 else scalar_field_G
    target = np.array([f(p, xi, ui) for xi, ui in zip(x, u)])
    core = slice(2, -2)
    return float(np.max(np.abs(du[core] - target[core])))


# ---------------------------------------------------------------------------
# reconstruction of the radial profile


def _x_from_delta(p: SolitonParams, delta, y, case: str):
    c1 = p.c1
    if case == CASE1:
        return 2.0 * (c1 - delta) / (y + np.sqrt(y * y + 4.0 * c1 * (c1 - delta)))
    z = -y
    ac = -c1
    return 2.0 * (delta + ac) / (np.sqrt(z * z + 4.0 * ac * (delta + ac)) + z)


def _time_system(p: SolitonParams, case: str):
    """Right-hand side in t for state (delta, y, ln omega, r, f).

    For the rho = 1/m boundary of case 2 the nullcline coefficient c1
    vanishes and the numerator is the plain product x*z, so the state
    carries (x, z, ...) directly instead.
    """
    c1, c2, c3, a = p.c1, p.c2, p.c3, p.lead
    cigar = c1 == 0.0

    if not cigar:
        def rhs(t, s):
            d, y, lw, r, f = s
            x = _x_from_delta(p, d, y, case)
            D = -c2 * (1.0 - x) * (1.0 + x) + c3 * x * y
            dd = -((2.0 * c1 * x + y) * d + x * D) / a
            return [dd, D / a, x, math.exp(lw), -y]
    else:
        def rhs(t, s):
            x, z, lw, r, f = s
            D = -c2 * (1.0 - x) * (1.0 + x) - c3 * x * z
            return [x * z / a, -D / a, x, math.exp(lw), z]
    return rhs, cigar


def _segment_plan(t_span: float):
    """(t_end, method, max_step) schedule for the time system.

    Fine explicit steps near the tip and step caps proportional to t in
    the stiff Radau tail keep the dense-output interpolation error below
    what the finite-difference windows of the residual and identity
    checks can see (several steps per window everywhere).
    """
    plan = [(min(2.0, t_span), "dop853", 0.01), (min(40.0, t_span), "dop853", 0.25)]
    t_lo = 40.0
    while t_lo < t_span:
        t_hi = min(2.0 * t_lo, t_span)
        plan.append((t_hi, "radau", 0.0125 * t_lo))
        t_lo = t_hi
    return plan


def _integrate_time_system(p, case, state0, t_span, rel_tol):
    rhs, cigar = _time_system(p, case)
    segs = []
    tcur, scur = 0.0, list(state0)
    for tend, method, max_step in _segment_plan(t_span):
        if tend <= tcur:
            continue
        cfg = IntegrationConfig(rel_tol=rel_tol, abs_tol=1e-15, method=method,
                                max_step=max_step)
        traj = integrate(rhs, scur, tcur, tend, cfg).ensure_completed()
        segs.append(traj)
        tcur, scur = traj.t_end, list(traj.end_state)
        if tcur >= t_span:
            break
    def dense(tq):
        tq = np.atleast_1d(np.asarray(tq, dtype=float))
        out = np.empty((len(tq), 5))
        lo = 0.0
        for traj in segs:
            hi = traj.t_end
            msk = (tq >= lo) & (tq <= hi)
            if msk.any():
                out[msk] = traj(tq[msk])
            lo = hi
        return out
    return dense, cigar


def reconstruct_profile(
    p: SolitonParams,
    limit: LimitCurve,
    t_span: float = 60.0,
    n_samples: int = 3000,
    u_start: float | None = None,
    rel_tol: float = 1e-12,
) -> RadialProfile:
    """Radial profile of the soliton defined by a converged limit curve.

    Seeds the time-parameterized system at the first converged grid point,
    recovers t from the y-equation, omega from (ln omega)' = x, r from
    r' = omega and f from f' = -y/omega.  Output samples are geometric in
    r.  The r-origin is fixed by extrapolating omega linearly to zero over
    the first samples (the smooth-tip closure omega ~ r - r_*), and f is
    gauged to vanish there.
    """
    case = limit.regime
    u0 = limit.u_start if u_start is None else float(u_start)
    x0 = float(limit(u0))
    y0 = u0 if case == CASE1 else -u0

    rhs_cigar = p.c1 == 0.0
    if rhs_cigar:
        state0 = [x0, -y0, 0.0, 0.0, 0.0]
    else:
        delta0 = p.c1 * (1.0 - x0) * (1.0 + x0) - x0 * y0
        state0 = [delta0, y0, 0.0, 0.0, 0.0]
    dense, cigar = _integrate_time_system(p, case, state0, t_span, rel_tol)

    # invert r(t) on a fine probe to sample geometrically in r
    tp = np.linspace(0.0, t_span, max(20001, 4 * n_samples))
    rp = dense(tp)[:, 3]
    ts = np.interp(np.geomspace(rp[1], rp[-1] * (1 - 1e-9), n_samples), rp, tp)
    S = dense(ts)
    if cigar:
        X, Y = S[:, 0], -S[:, 1]
    else:
        X = _x_from_delta(p, S[:, 0], S[:, 1], case)
        Y = S[:, 1]
    W = np.exp(S[:, 2])
    R_raw = S[:, 3]
    F_raw = S[:, 4]

    k = max(8, int(TIP_FIT_FRACTION * n_samples))
    slope, intercept = np.polyfit(R_raw[:k], W[:k], 1)
    r_star = -intercept / slope
    r = R_raw - r_star
    if r[0] <= 0:
        raise AnchoringFailed(f"tip extrapolation put r_* = {r_star} past the first sample")
    omega_at_zero = float(np.polyval(np.polyfit(r[:k], W[:k], 2), 0.0))
    if abs(omega_at_zero) > 0.05 * W[0]:
        raise AnchoringFailed(
            f"omega extrapolates to {omega_at_zero} at the tip (first omega {W[0]})"
        )

    f_p = -Y / W
    omega_pp = (p.c1 * (1.0 - X) * (1.0 + X) - X * Y) / (p.lead * W)
    f = F_raw - float(np.polyval(np.polyfit(r[:k], F_raw[:k], 2), 0.0))

    log.info("reconstructed profile: rho=%g case=%s r=[%.3g, %.3g]", p.rho, case, r[0], r[-1])
    return RadialProfile(
        params=p, r=r, omega=W, omega_p=X, omega_pp=omega_pp, f=f, f_p=f_p,
        normalization=NORMALIZATION_RAW, tip_anchored=True, t=ts,
    )


def tip_scalar_curvature(prof: RadialProfile) -> float:
    """Scalar curvature extrapolated quadratically to r = 0."""
    rep = warped_geometry.curvature(prof)
    k = max(8, int(TIP_FIT_FRACTION * len(prof)))
    return float(np.polyval(np.polyfit(prof.r[:k], rep.R[:k], 2), 0.0))


def normalize_profile(prof: RadialProfile) -> RadialProfile:
    """Homothety fixing the tip scalar curvature to one."""
    r_tip = tip_scalar_curvature(prof)
    if not np.isfinite(r_tip) or r_tip <= 0:
        raise NonpositiveTipCurvature(f"tip scalar curvature extrapolates to {r_tip}")
    scaled = prof.rescaled(math.sqrt(r_tip))
    return replace(scaled, normalization=NORMALIZATION_R1)


def construct_soliton(
    p: SolitonParams,
    epsilons=DEFAULT_LADDER,
    span: float = FAMILY_SPAN,
    t_span: float = 60.0,
    n_samples: int = 3000,
    tol: float = 1e-6,
    normalize: bool = True,
    jobs: int = 1,
) -> RadialProfile:
    """Full pipeline: family -> limit -> profile (-> normalization)."""
    fam = EpsilonFamily.construct(p, epsilons=epsilons, span=span, jobs=jobs)
    limit = extract_limit(fam, tol=tol)
    prof = reconstruct_profile(p, limit, t_span=t_span, n_samples=n_samples)
    return normalize_profile(prof) if normalize else prof


# ---------------------------------------------------------------------------
# non-existence band and diagnostic trajectories


def _steady_field(p: SolitonParams):
    c1, c2, c3, a = p.c1, p.c2, p.c3, p.lead

    def rhs(t, s):
        x, y, w = s
        q = (1.0 - x) * (1.0 + x)
        return [(c1 * q - x * y) / a, (-c2 * q + c3 * x * y) / a, x * w]

    return rhs


def unstable_trajectory(
    p: SolitonParams,
    t_span: float = 60.0,
    delta: float = 1e-6,
    rel_tol: float = 1e-10,
    events: tuple[EventSpec, ...] = (),
    method: str = "radau",
    y_sign: float | None = None,
) -> Trajectory:
    """Steady trajectory leaving (1, 0, 0) along the unstable direction.

    The exact equilibrium never moves, so integration starts offset by
    `delta` along the linearized unstable eigenvector (oriented into
    x < 1).  When that eigenvector has no y-component, `y_sign` selects a
    transverse probe offset instead.
    """
    if not p.is_steady or p.kappa != 1:
        raise NotSteady("unstable trajectories are defined for the steady kappa=1 system")
    lam_u, v = unstable_direction(p)
    if y_sign is not None:
        start = [1.0 - delta, y_sign * delta, 1e-3]
    else:
        start = [1.0 + delta * v[0], delta * v[1], 1e-3]
    cfg = IntegrationConfig(rel_tol=rel_tol, abs_tol=1e-14, method=method,
                            events=tuple(events), max_steps=2_000_000)
    return integrate(_steady_field(p), start, 0.0, t_span, cfg)


@dataclass
class NonexistenceReport:
    params: SolitonParams
    mode: str                    # schouten_constraint | x_crossing | y_sign
    detail: str
    event_time: float | None = None
    event_state: tuple | None = None


def verify_nonexistence(
    p: SolitonParams,
    eps: float = 1e-6,
    t_span: float = 200.0,
) -> NonexistenceReport:
    """Exhibit the obstruction in the band 1/(2m) <= rho < 1/m.

    rho = 1/(2m): the system is singular and the structural identity
    (1-2(n-1)rho) grad R = 2 Ric(grad f, .) forces Ric_rr = 0, against
    Ric_rr > 0; reported without integrating.  rho = 1/n: the unstable
    direction at (1, 0) is purely radial, and any y-offset decays toward
    y = 0 while x > 0 (y and y' have opposite signs), so no trajectory
    emerges from the equilibrium with y != 0.  Elsewhere in the band the
    trajectory from the unstable direction reaches x = 0 in finite time,
    which no positively curved warped solution allows.
    """
    if not p.is_steady:
        raise NotSteady("nonexistence verification applies to steady parameters")
    lo, hi = 1.0 / (2 * p.m), 1.0 / p.m
    if not lo <= p.rho < hi:
        raise OutOfRegime(f"rho = {p.rho} outside the nonexistence band [{lo}, {hi})")

    if p.rho == lo:
        return NonexistenceReport(
            params=p, mode="schouten_constraint",
            detail="singular leading factor: identity forces R_rr = 0, "
                   "incompatible with R_rr > 0",
        )

    if p.rho == 1.0 / p.n:
        # probe both transverse offsets; |y| must decay while x stays positive
        evidence = []
        for sign in (+1.0, -1.0):
            ev = EventSpec("x_zero", lambda t, s: s[0], direction="falling", terminal=True)
            traj = unstable_trajectory(p, t_span=t_span, delta=eps, events=(ev,),
                                       y_sign=sign, method="rk45")
            ys = np.abs(traj.states[:, 1])
            monotone = bool(np.all(np.diff(ys) <= 1e-16))
            evidence.append((sign, monotone, float(ys[-1] / ys[0])))
        detail = (
            "unstable direction has zero y-component; transverse probes show "
            f"|y| decaying toward 0 while x > 0 (sign, monotone, end/start): {evidence}"
        )
        return NonexistenceReport(params=p, mode="y_sign", detail=detail)

    ev = EventSpec("x_zero", lambda t, s: s[0], direction="falling", terminal=True)
    traj = unstable_trajectory(p, t_span=t_span, delta=eps, events=(ev,), method="rk45")
    hit = traj.first_event("x_zero")
    if hit is None:
        raise NoEventWithinSpan(
            f"x = 0 not reached within t_span = {t_span}; x ended at {traj.end_state[0]}"
        )
    name, t_ev, state = hit
    return NonexistenceReport(
        params=p, mode="x_crossing",
        detail=f"x reaches 0 at t = {t_ev:.6g} with y = {state[1]:.6g}",
        event_time=float(t_ev),
        event_state=tuple(float(v) for v in state),
    )
