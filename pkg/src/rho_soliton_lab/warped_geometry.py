"""Pointwise geometry of warped-product metrics dr^2 + omega(r)^2 g_can.

With m = n-1 and Ric_can = (m-1)*kappa*g_can:

    Ric   = -m (omega''/omega) dr x dr
            + [ (m-1)(kappa - omega'^2) - omega*omega'' ] g_can
    R     = -2m omega''/omega + m(m-1)(kappa - omega'^2)/omega^2
    K_rad = -omega''/omega          (planes containing d/dr)
    K_sph = (kappa - omega'^2)/omega^2
    Hess f = f'' dr x dr + omega omega' f' g_can

The soliton equation Ric + Hess f = rho R g + lam g reduces to two scalar
equations whose left-hand sides `soliton_residual` evaluates:

    res1 = f'' w^2 - (m - 2m rho) w w'' + m(m-1) rho w'^2 - lam w^2
           - m(m-1) rho kappa
    res2 = f' w w' - (1 - 2m rho) w w'' - (m-1)(1 - m rho) w'^2 - lam w^2
           + (m-1)(1 - m rho) kappa

Second derivatives of f are taken from the profile when a producer
attached analytic values, otherwise by finite differences of f' -- the
independent route that makes the residual an end-to-end check for
numerically constructed profiles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from . import fdiff
from .errors import OutOfRangeError
from .profile import RadialProfile

__all__ = [
    "CurvatureReport",
    "ResidualReport",
    "IdentityReport",
    "LevelSetReport",
    "curvature",
    "trace_deviation",
    "hessian_laplacian",
    "soliton_residual",
    "identity_checks",
    "level_set_geometry",
    "ball_volume",
    "volume_curve",
    "unit_sphere_area",
]

TIP_OMEGA_FLOOR = 1e-12

# fraction of the curvature length used as the absolute FD window floor
_WINDOW_FRACTION = 0.25


@dataclass
class CurvatureReport:
    r: np.ndarray
    R: np.ndarray
    ric_rr: np.ndarray
    ric_sph: np.ndarray          # eigenvalue on unit spherical directions
    k_rad: np.ndarray
    k_sph: np.ndarray
    mean_curvature: np.ndarray   # H of the r-level
    r_sigma: np.ndarray          # induced scalar curvature of the r-level
    valid: np.ndarray            # False where omega underflows the tip floor


def _fields(prof: RadialProfile):
    return prof.r, prof.omega, prof.omega_p, prof.omega_pp, prof.f, prof.f_p


def curvature(prof: RadialProfile) -> CurvatureReport:
    r, w, wp, wpp, _, _ = _fields(prof)
    m = prof.m
    kappa = prof.params.kappa
    valid = w > TIP_OMEGA_FLOOR
    with np.errstate(divide="ignore", invalid="ignore"):
        q = (kappa - wp * wp) if kappa != 1 else (1.0 - wp) * (1.0 + wp)
        k_rad = -wpp / w
        k_sph = q / (w * w)
        ric_rr = m * k_rad
        ric_sph = (m - 1) * k_sph + k_rad
        R = 2 * m * k_rad + m * (m - 1) * k_sph
        H = m * wp / w
        r_sigma = m * (m - 1) * kappa / (w * w)
    rep = CurvatureReport(
        r=r, R=R, ric_rr=ric_rr, ric_sph=ric_sph, k_rad=k_rad, k_sph=k_sph,
        mean_curvature=H, r_sigma=r_sigma, valid=valid,
    )
    return rep


def trace_deviation(prof: RadialProfile, rep: CurvatureReport | None = None) -> float:
    """sup relative |R - (Ric_rr + m Ric_sph)| over valid samples."""
    rep = rep or curvature(prof)
    m = prof.m
    tr = rep.ric_rr + m * rep.ric_sph
    v = rep.valid
    denom = 1.0 + np.abs(rep.R[v])
    return float(np.max(np.abs(rep.R[v] - tr[v]) / denom))


def _f_second_derivative(prof: RadialProfile, window_floor: float) -> np.ndarray:
    if prof.f_pp is not None:
        return prof.f_pp
    return fdiff.derivative(prof.r, prof.f_p, order=1, window_floor=window_floor)


def _window_floor(prof: RadialProfile) -> float:
    """Absolute FD window: a fraction of the curvature length 1/sqrt(max |R|)."""
    rep = curvature(prof)
    rmax = float(np.max(np.abs(rep.R[rep.valid]))) if np.any(rep.valid) else 0.0
    if not np.isfinite(rmax) or rmax <= 0:
        return 0.0
    return _WINDOW_FRACTION / np.sqrt(rmax)


def hessian_laplacian(prof: RadialProfile) -> tuple[np.ndarray, np.ndarray]:
    """(f'', Delta f) per sample; Delta f = f'' + m (omega'/omega) f'."""
    r, w, wp, _, _, fp = _fields(prof)
    fpp = _f_second_derivative(prof, _window_floor(prof))
    with np.errstate(divide="ignore", invalid="ignore"):
        lap = fpp + prof.m * (wp / w) * fp
    return fpp, lap


@dataclass
class ResidualReport:
    res1: np.ndarray
    res2: np.ndarray
    scale1: float               # largest constituent term of equation 1
    scale2: float
    sup_abs: float
    sup_rel: float              # sup |res| / largest term, both equations

    def accepted(self, tol: float = 1e-6) -> bool:
        return self.sup_rel < tol


def soliton_residual(prof: RadialProfile) -> ResidualReport:
    r, w, wp, wpp, _, fp = _fields(prof)
    m, rho, lam, kappa = prof.m, prof.params.rho, prof.params.lam, prof.params.kappa
    fpp = _f_second_derivative(prof, _window_floor(prof))
    w2 = w * w
    ones = np.ones_like(w)

    t1 = [fpp * w2, -(m - 2 * m * rho) * w * wpp, m * (m - 1) * rho * wp * wp,
          -lam * w2, -m * (m - 1) * rho * kappa * ones]
    t2 = [fp * w * wp, -(1 - 2 * m * rho) * w * wpp,
          -(m - 1) * (1 - m * rho) * wp * wp, -lam * w2,
          (m - 1) * (1 - m * rho) * kappa * ones]
    res1 = sum(t1)
    res2 = sum(t2)
    scale1 = float(np.max(np.abs(np.vstack(t1))))
    scale2 = float(np.max(np.abs(np.vstack(t2))))
    sup_abs = float(max(np.max(np.abs(res1)), np.max(np.abs(res2))))
    sup_rel = float(max(np.max(np.abs(res1)) / max(scale1, 1e-300),
                        np.max(np.abs(res2)) / max(scale2, 1e-300)))
    return ResidualReport(res1=res1, res2=res2, scale1=scale1, scale2=scale2,
                          sup_abs=sup_abs, sup_rel=sup_rel)


@dataclass
class IdentityReport:
    """Radial form of the three structural identities of the soliton equation.

    e1:  Delta f - ((n rho - 1) R + n lam)
    e2:  (1 - 2(n-1) rho) R' - 2 Ric_rr f'
    e3:  (1 - 2(n-1) rho) Delta R - <grad R, grad f>
         - 2 (rho R^2 - |Ric|^2 + lam R)
    """

    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    sup_e1: float
    sup_e2: float
    sup_e3: float
    schouten_ric_radial: float | None = None  # sup |Ric_rr f'| when rho = 1/(2m)

    @property
    def sup(self) -> float:
        return max(self.sup_e1, self.sup_e2, self.sup_e3)


def identity_checks(prof: RadialProfile) -> IdentityReport:
    r, w, wp, wpp, _, fp = _fields(prof)
    n, m = prof.n, prof.m
    rho, lam = prof.params.rho, prof.params.lam
    rep = curvature(prof)
    R, ric_rr, ric_sph = rep.R, rep.ric_rr, rep.ric_sph
    ric2 = ric_rr**2 + m * ric_sph**2
    floor = _window_floor(prof)

    fpp = _f_second_derivative(prof, floor)
    Rp = fdiff.derivative(r, R, order=1, window_floor=floor)
    Rpp = fdiff.derivative(r, R, order=2, window_floor=floor)
    lap_f = fpp + m * (wp / w) * fp
    lap_R = Rpp + m * (wp / w) * Rp

    e1 = lap_f - ((n * rho - 1) * R + n * lam)
    e2 = (1 - 2 * m * rho) * Rp - 2 * ric_rr * fp
    e3 = (1 - 2 * m * rho) * lap_R - (Rp * fp + 2 * (rho * R * R - ric2 + lam * R))
    schouten = None
    if prof.params.lead == 0.0:
        schouten = float(np.max(np.abs(ric_rr * fp)))
    return IdentityReport(
        e1=e1, e2=e2, e3=e3,
        sup_e1=float(np.max(np.abs(e1))),
        sup_e2=float(np.max(np.abs(e2))),
        sup_e3=float(np.max(np.abs(e3))),
        schouten_ric_radial=schouten,
    )


@dataclass
class LevelSetReport:
    """Extrinsic geometry of the r-levels, computed along two routes.

    Direct route from the warped form: H = m omega'/omega and
    |h|^2 = m (omega'/omega)^2.  The contracted Riccati equation gives
    |h|^2 = -H' - Ric_rr independently, and the Gauss equation assembles
    R_sigma = R - 2 Ric_rr - |h|^2 + H^2; the direct value is
    m(m-1) kappa / omega^2.
    """

    r: np.ndarray
    H: np.ndarray
    h_norm2_direct: np.ndarray
    h_norm2_riccati: np.ndarray
    r_sigma_direct: np.ndarray
    r_sigma_gauss: np.ndarray
    regular: np.ndarray          # False where f' = 0 (critical level)

    @property
    def gauss_deviation(self) -> float:
        g = self.regular
        return float(np.max(np.abs(self.r_sigma_gauss[g] - self.r_sigma_direct[g])
                            / (1.0 + np.abs(self.r_sigma_direct[g]))))


def level_set_geometry(prof: RadialProfile) -> LevelSetReport:
    r, w, wp, wpp, _, fp = _fields(prof)
    m = prof.m
    rep = curvature(prof)
    H = m * wp / w
    h2_direct = m * (wp / w) ** 2
    # H' from the stored derivatives of omega: H' = m (omega''/omega - (omega'/omega)^2)
    Hp = m * (wpp / w - (wp / w) ** 2)
    h2_riccati = -Hp - rep.ric_rr
    r_sigma_gauss = rep.R - 2 * rep.ric_rr - h2_riccati + H * H
    regular = fp != 0.0
    return LevelSetReport(
        r=r, H=H, h_norm2_direct=h2_direct, h_norm2_riccati=h2_riccati,
        r_sigma_direct=rep.r_sigma, r_sigma_gauss=r_sigma_gauss, regular=regular,
    )


def unit_sphere_area(n: int) -> float:
    """Area of the unit (n-1)-sphere in R^n."""
    from math import gamma, pi
    return 2.0 * pi ** (n / 2.0) / gamma(n / 2.0)


def volume_curve(prof: RadialProfile) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative ball volume Area(S^{n-1}) * int_0^r omega^{n-1}.

    For tip-anchored profiles a virtual sample (r=0, omega=0) closes the
    quadrature at the tip; the omitted sliver is O(r_0^n).
    """
    r, w = prof.r, prof.omega
    if prof.tip_anchored and r[0] > 0:
        r = np.concatenate([[0.0], r])
        w = np.concatenate([[0.0], w])
    integrand = w ** (prof.n - 1)
    vol = cumulative_simpson(integrand, x=r, initial=0.0)
    vol = unit_sphere_area(prof.n) * vol
    if prof.tip_anchored and prof.r[0] > 0:
        return r[1:], vol[1:]
    return r, vol


def ball_volume(prof: RadialProfile, radius: float) -> float:
    """Volume of the ball of the given radius around the tip."""
    r, vol = volume_curve(prof)
    lo = 0.0 if prof.tip_anchored else r[0]
    if radius < lo or radius > r[-1]:
        raise OutOfRangeError(f"radius {radius} outside [{lo}, {r[-1]}]")
    return float(np.interp(radius, r, vol))
