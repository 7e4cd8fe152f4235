import math

import numpy as np
import pytest

from rho_soliton_lab.errors import GaugeViolation, InvalidParameters, OutOfRegime
from rho_soliton_lab.exact_solutions import (
    canonical_suite,
    cylinder_solutions,
    flat_gaussian,
    gradient_inequality_check,
    schouten_shrinker_local,
)
from rho_soliton_lab.warped_geometry import (
    curvature,
    hessian_laplacian,
    identity_checks,
    level_set_geometry,
    soliton_residual,
)


class TestCylinderEnumeration:
    def test_schouten_shrinking_round(self):
        sols = cylinder_solutions(3, 0.25, 1.0)
        assert len(sols) == 1
        s = sols[0]
        assert s.kappa == 1
        assert s.omega0_sq == pytest.approx(0.5)
        assert s.f_quad == pytest.approx(1.0)

    def test_cigar_value_steady(self):
        sols = cylinder_solutions(3, 0.5, 0.0)
        assert {s.kappa for s in sols} == {-1, 0, 1}
        by_kappa = {s.kappa: s for s in sols}
        assert by_kappa[1].f_quad == pytest.approx(1.0 / (2 * by_kappa[1].omega0_sq))
        assert by_kappa[0].trivial

    def test_hyperbolic_shrinking(self):
        sols = cylinder_solutions(3, 1.0, 1.0)
        assert len(sols) == 1
        assert sols[0].kappa == -1
        assert sols[0].omega0_sq == pytest.approx(1.0)

    def test_expanding_low_rho(self):
        sols = cylinder_solutions(3, 0.1, -1.0)
        assert len(sols) == 1
        assert sols[0].kappa == -1
        assert sols[0].omega0_sq == pytest.approx(0.8)

    def test_no_round_expanders_at_low_rho(self):
        # lam > 0 with rho < 1/(n-1) admits only kappa = +1
        sols = cylinder_solutions(3, 0.1, 1.0)
        assert all(s.kappa == 1 for s in sols)

    def test_trivial_steady_branch_flagged(self):
        sols = cylinder_solutions(3, 0.3, 0.0)
        assert len(sols) == 1 and sols[0].trivial and sols[0].kappa == 0

    def test_rho_zero_rejected(self):
        with pytest.raises(OutOfRegime):
            cylinder_solutions(3, 0.0, 1.0)


class TestCanonicalSuite:
    def test_at_least_eight(self):
        assert len(canonical_suite()) >= 8

    def test_machine_level_residuals(self):
        for label, prof in canonical_suite():
            rep = soliton_residual(prof)
            assert rep.sup_abs < 1e-12, (label, rep.sup_abs)

    def test_cylinder_laplacian_consistency(self):
        # omega' = 0 kills the omega-term of Delta f, so Delta f = f'' and
        # the trace identity reproduces it from R = m(m-1) kappa / w0^2
        for label, prof in canonical_suite():
            if not np.allclose(prof.omega_p, 0.0):
                continue
            p = prof.params
            R = curvature(prof).R
            _, lap = hessian_laplacian(prof)
            fpp = prof.f_pp
            assert np.allclose(lap, fpp), label
            assert np.allclose(lap, (p.n * p.rho - 1) * R + p.n * p.lam), label

    def test_homothety_closure(self):
        # scaling by c maps a solution to one with lam -> lam / c^2
        sols = cylinder_solutions(3, 1.0, 1.0)
        prof = sols[0].profile()
        scaled = prof.rescaled(3.0)
        assert scaled.params.lam == pytest.approx(1.0 / 9.0)
        assert soliton_residual(scaled).sup_abs < 1e-12


class TestFlatGaussian:
    @pytest.mark.parametrize("lam,a0", [(0.0, 0.0), (1.0, 0.5), (-1.0, -0.5)])
    def test_residuals_vanish(self, lam, a0):
        prof = flat_gaussian(3, 0.25, lam, a0=a0)
        assert soliton_residual(prof).sup_abs < 1e-12

    def test_inconsistent_linear_term_rejected(self):
        # with the tip at the origin the spherical component pins f' = lam*omega
        with pytest.raises(InvalidParameters):
            flat_gaussian(3, 0.25, 0.0, a0=0.5)
        with pytest.raises(InvalidParameters):
            flat_gaussian(3, 0.25, 1.0, a0=-0.5)

    def test_rejects_rho_zero(self):
        with pytest.raises(OutOfRegime):
            flat_gaussian(3, 0.0, 1.0)


class TestSchoutenLocal:
    def test_cylinder_branch(self):
        prof = schouten_shrinker_local(0.0, 1.0, 0.5)
        assert soliton_residual(prof).sup_abs < 1e-13
        rep = level_set_geometry(prof)
        # R_Sigma = 2 / b^2 = 2
        reg = rep.regular
        assert np.allclose(rep.r_sigma_direct[reg], 2.0)
        # radial Ricci annihilates grad f
        assert identity_checks(prof).schouten_ric_radial == 0.0

    def test_flat_branch(self):
        prof = schouten_shrinker_local(1.0, 1.0, 0.5)
        assert soliton_residual(prof).sup_abs < 1e-13
        rep = level_set_geometry(prof)
        reg = rep.regular
        assert np.allclose(rep.r_sigma_direct[reg], 2.0 / (prof.r[reg] + 1.0) ** 2)

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameters):
            schouten_shrinker_local(-0.5, 1.0, 0.5)
        with pytest.raises(InvalidParameters):
            schouten_shrinker_local(0.0, 1.0, 1.0)  # 2 lam b^2 != 1
        with pytest.raises(InvalidParameters):
            schouten_shrinker_local(0.5, 1.0, 0.5)  # cone slope
        with pytest.raises(InvalidParameters):
            schouten_shrinker_local(0.0, -1.0, 0.5)
        with pytest.raises(InvalidParameters):
            schouten_shrinker_local(0.0, 1.0, 0.5, n=4)


class TestGradientInequality:
    def test_flat_branch_lower_bound_saturates(self):
        # 2 lam f + f'(0)^2 = (lam r + lam b)^2 identically on the flat branch
        prof = schouten_shrinker_local(1.0, 1.0, 0.5)
        rep = gradient_inequality_check(prof, a=5.0)
        assert abs(rep.lower_margin_min) < 1e-12
        assert rep.upper_margin_min > 0
        assert rep.sufficiency_min > 0

    def test_cylinder_branch_strict(self):
        prof = schouten_shrinker_local(0.0, 1.0, 0.5)
        lam = prof.params.lam
        a = 2 * lam + float(np.max(curvature(prof).R))
        rep = gradient_inequality_check(prof, a=a)
        assert rep.lower_margin_min > 0
        assert rep.upper_margin_min > 0
        assert rep.sufficiency_min > 0

    def test_steady_rejected(self):
        prof = flat_gaussian(3, 0.3, 0.0)
        with pytest.raises(OutOfRegime):
            gradient_inequality_check(prof, a=1.0)

    def test_gauge_violation(self):
        prof = schouten_shrinker_local(1.0, 1.0, 0.5)
        prof.f += 1.0
        with pytest.raises(GaugeViolation):
            gradient_inequality_check(prof, a=5.0)
