import math

import numpy as np
import pytest

from rho_soliton_lab.errors import OutOfRangeError
from rho_soliton_lab.exact_solutions import cylinder_solutions, flat_gaussian, schouten_shrinker_local
from rho_soliton_lab.phase_system import SolitonParams
from rho_soliton_lab.profile import RadialProfile
from rho_soliton_lab.warped_geometry import (
    ball_volume,
    curvature,
    hessian_laplacian,
    identity_checks,
    level_set_geometry,
    soliton_residual,
    trace_deviation,
    unit_sphere_area,
    volume_curve,
)


def make_profile(n, rho, lam, kappa, r, omega, omega_p, omega_pp, f, f_p,
                 f_pp=None, tip=False):
    return RadialProfile(
        params=SolitonParams(n, rho, lam=lam, kappa=kappa),
        r=r, omega=omega, omega_p=omega_p, omega_pp=omega_pp, f=f, f_p=f_p,
        f_pp=f_pp, tip_anchored=tip,
    )


def round_cylinder(n=3, w0=1.0, r_max=10.0, num=1001):
    r = np.linspace(0, r_max, num)
    z = np.zeros_like(r)
    return make_profile(n, 0.25, 1.0, 1, r, np.full_like(r, w0), z, z,
                        z.copy(), z.copy(), f_pp=z.copy())


def flat_cone(n=3, r_max=10.0, num=1001):
    r = np.linspace(0.5, r_max, num)
    z = np.zeros_like(r)
    return make_profile(n, 0.3, 0.0, 1, r, r.copy(), np.ones_like(r), z,
                        z.copy(), z.copy(), f_pp=z.copy(), tip=True)


def sphere_profile(num=2001):
    r = np.linspace(0.1, math.pi - 0.1, num)
    z = np.zeros_like(r)
    return make_profile(3, 0.3, 0.0, 1, r, np.sin(r), np.cos(r), -np.sin(r),
                        z.copy(), z.copy(), f_pp=z.copy())


class TestCurvature:
    def test_round_cylinder(self):
        prof = round_cylinder(w0=2.0)
        rep = curvature(prof)
        m = prof.m
        assert np.allclose(rep.k_rad, 0.0)
        assert np.allclose(rep.k_sph, 1.0 / 4.0)
        assert np.allclose(rep.R, m * (m - 1) / 4.0)

    def test_flat_cone(self):
        rep = curvature(flat_cone())
        assert np.allclose(rep.k_rad, 0.0)
        assert np.allclose(rep.k_sph, 0.0)
        assert np.allclose(rep.R, 0.0)

    def test_unit_sphere(self):
        prof = sphere_profile()
        rep = curvature(prof)
        i = np.argmin(np.abs(prof.r - math.pi / 4))
        assert rep.k_rad[i] == pytest.approx(1.0, rel=1e-12)
        assert rep.k_sph[i] == pytest.approx(1.0, rel=1e-12)

    def test_trace_consistency(self, profiles):
        for prof in profiles.values():
            assert trace_deviation(prof) < 1e-10
        assert trace_deviation(sphere_profile()) < 1e-12

    def test_positive_curvature_on_constructed(self, profiles):
        for prof in profiles.values():
            rep = curvature(prof)
            live = prof.omega_p > 0
            assert np.all(rep.k_rad[live] > 0)
            assert np.all(rep.k_rad >= 0)
            assert np.all(rep.k_sph > 0)


class TestHessianLaplacian:
    def test_constant_potential(self):
        prof = round_cylinder()
        fpp, lap = hessian_laplacian(prof)
        assert np.allclose(fpp, 0.0)
        assert np.allclose(lap, 0.0)

    def test_flat_radial_quadratic(self):
        # f = lam r^2 / 2 on flat R^3: f'' = lam, Delta f = 3 lam
        lam = 0.7
        prof = flat_gaussian(3, 0.3, lam)
        fpp, lap = hessian_laplacian(prof)
        assert np.allclose(fpp, lam, rtol=1e-12)
        assert np.allclose(lap, 3 * lam, rtol=1e-12)

    def test_schouten_laplacian_relation(self):
        # on the n=3 Schouten shrinker: Delta f = -R/4 + 3 lam
        prof = schouten_shrinker_local(0.0, 1.0, 0.5)
        _, lap = hessian_laplacian(prof)
        R = curvature(prof).R
        assert np.allclose(lap, -R / 4 + 3 * prof.params.lam, atol=1e-12)

    def test_fd_route_matches_analytic(self):
        prof = flat_gaussian(3, 0.3, 1.0)
        stripped = RadialProfile(
            params=prof.params, r=prof.r, omega=prof.omega, omega_p=prof.omega_p,
            omega_pp=prof.omega_pp, f=prof.f, f_p=prof.f_p, tip_anchored=True,
        )
        fpp, _ = hessian_laplacian(stripped)
        assert np.max(np.abs(fpp - 1.0)) < 1e-10


class TestResidual:
    def test_cylinder_exact(self):
        prof = round_cylinder(n=3, w0=math.sqrt(0.5))
        # shrinking Schouten cylinder: f = r^2
        prof.f[:] = prof.r**2
        prof.f_p[:] = 2 * prof.r
        prof.f_pp[:] = 2.0
        rep = soliton_residual(prof)
        assert rep.sup_abs < 1e-13

    def test_flat_gaussian_exact(self):
        for lam, rho in ((0.0, 0.3), (1.0, 0.25), (-1.0, 0.125)):
            rep = soliton_residual(flat_gaussian(3 if rho != 0.125 else 4, rho, lam))
            assert rep.sup_abs < 1e-13

    def test_perturbation_detected(self):
        sols = cylinder_solutions(3, 0.25, 1.0)
        prof = sols[0].profile()
        prof.omega += 1e-3 * np.sin(prof.r)
        rep = soliton_residual(prof)
        assert rep.sup_abs > 1e-4

    def test_constructed_profiles(self, profiles):
        for name, prof in profiles.items():
            rep = soliton_residual(prof)
            assert rep.sup_rel < 1e-6, name


class TestIdentities:
    def test_constructed_suite(self, profiles):
        for name, prof in profiles.items():
            rep = identity_checks(prof)
            assert rep.sup < 1e-5, (name, rep.sup_e1, rep.sup_e2, rep.sup_e3)

    def test_schouten_cylinder_radial_ricci(self):
        prof = schouten_shrinker_local(0.0, 1.0, 0.5)
        rep = identity_checks(prof)
        assert rep.schouten_ric_radial == 0.0

    def test_flat_gaussian_identity_one(self):
        # R = 0, so Delta f = n lam exactly
        lam = 1.0
        prof = flat_gaussian(3, 0.25, lam)
        rep = identity_checks(prof)
        assert rep.sup_e1 < 1e-10
        assert rep.sup_e2 < 1e-12


class TestLevelSets:
    def test_direct_fiber_curvature(self, profiles):
        prof = profiles["negrho"]
        rep = level_set_geometry(prof)
        m = prof.m
        direct = m * (m - 1) / prof.omega**2
        assert np.allclose(rep.r_sigma_direct, direct, rtol=1e-12)

    def test_round_cylinder_flat_levels(self):
        prof = round_cylinder(w0=1.0)
        prof.f_p[:] = 1.0  # any regular potential slope
        rep = level_set_geometry(prof)
        R = curvature(prof).R
        assert np.allclose(rep.H, 0.0)
        assert np.allclose(rep.h_norm2_direct, 0.0)
        assert np.allclose(rep.r_sigma_gauss, R)

    def test_gauss_riccati_cross_check(self, profiles):
        for name, prof in profiles.items():
            rep = level_set_geometry(prof)
            assert rep.gauss_deviation < 1e-8, name

    def test_critical_levels_masked(self):
        prof = round_cylinder()
        rep = level_set_geometry(prof)
        assert not rep.regular.any()  # f' = 0 everywhere on this profile


class TestHomothety:
    def test_covariance_at_two(self, profiles):
        prof = profiles["cigar"]
        c = 2.0
        scaled = prof.rescaled(c)
        r0, r1 = curvature(prof), curvature(scaled)
        for field in ("R", "k_rad", "k_sph"):
            a, b = getattr(r0, field), getattr(r1, field)
            assert np.max(np.abs(b - a / c**2)) < 1e-12 * np.max(np.abs(a))
        assert np.max(np.abs(r1.mean_curvature - r0.mean_curvature / c)) \
            < 1e-12 * np.max(np.abs(r0.mean_curvature))


class TestBallVolume:
    def test_flat_ball(self):
        prof = flat_gaussian(3, 0.3, 0.0, n_samples=4001)
        for radius in (1.0, 4.0, 9.5):
            assert ball_volume(prof, radius) == pytest.approx(
                4.0 * math.pi / 3.0 * radius**3, rel=1e-8)

    def test_cylinder_linear_growth(self):
        w0 = 1.5
        prof = round_cylinder(n=3, w0=w0, r_max=20.0, num=4001)
        v1 = ball_volume(prof, 10.0)
        v2 = ball_volume(prof, 15.0)
        slope = (v2 - v1) / 5.0
        assert slope == pytest.approx(4.0 * math.pi * w0**2, rel=1e-12)

    def test_out_of_range(self):
        prof = flat_cone()
        with pytest.raises(OutOfRangeError):
            ball_volume(prof, 1e9)

    def test_area_constants(self):
        assert unit_sphere_area(3) == pytest.approx(4 * math.pi)
        assert unit_sphere_area(4) == pytest.approx(2 * math.pi**2)

    def test_volume_curve_monotone(self, profiles):
        r, vol = volume_curve(profiles["bryant"])
        assert np.all(np.diff(vol) > 0)
