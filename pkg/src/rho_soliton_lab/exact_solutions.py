"""Closed-form soliton families, emitted as radial profiles.

Three sources: the classification of warped solutions with vanishing
radial Ricci curvature (cylinders over constant-curvature fibers and flat
space with a quadratic potential), and the local shrinking solutions at
the Schouten value rho = 1/(2(n-1)) in dimension three (a round cylinder
R x S^2 and flat R^3, both with quadratic potentials).  All profiles
carry analytic second derivatives of f, so residual checks evaluate the
defining equations to rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GaugeViolation, InvalidParameters, OutOfRegime
from .phase_system import SolitonParams
from .profile import NORMALIZATION_RAW, RadialProfile
from .warped_geometry import curvature

__all__ = [
    "CylinderSolution",
    "cylinder_solutions",
    "flat_gaussian",
    "schouten_shrinker_local",
    "gradient_inequality_check",
    "GradientInequalityReport",
    "canonical_suite",
]


@dataclass(frozen=True)
class CylinderSolution:
    """Product metric R x N(kappa) with constant warping omega_0.

    The potential is quadratic, f = f_quad * r^2 + a0 * r + b0.  `trivial`
    marks the branches where the potential gradient is parallel (flat
    fibers with f linear).
    """

    n: int
    rho: float
    lam: float
    kappa: int
    omega0_sq: float
    f_quad: float
    trivial: bool = False

    def profile(self, r_min: float = 0.0, r_max: float = 10.0,
                n_samples: int = 801, a0: float = 0.0, b0: float = 0.0) -> RadialProfile:
        r = np.linspace(r_min, r_max, n_samples)
        w0 = np.sqrt(self.omega0_sq)
        params = SolitonParams(n=self.n, rho=self.rho, lam=self.lam, kappa=self.kappa)
        return RadialProfile(
            params=params,
            r=r,
            omega=np.full_like(r, w0),
            omega_p=np.zeros_like(r),
            omega_pp=np.zeros_like(r),
            f=self.f_quad * r**2 + a0 * r + b0,
            f_p=2 * self.f_quad * r + a0,
            normalization=NORMALIZATION_RAW,
            tip_anchored=False,
            f_pp=np.full_like(r, 2 * self.f_quad),
        )


def cylinder_solutions(n: int, rho: float, lam: float) -> list[CylinderSolution]:
    """All constant-omega solutions for the given (n, rho, lam).

    Enumeration by the sign of 1-(n-1)*rho; an empty list is a valid
    outcome (e.g. rho < 1/(n-1) with lam > 0 admits only kappa = +1).
    Trivial flat-fiber branches are included and flagged rather than
    dropped, so the enumeration is exhaustive.
    """
    if rho == 0.0:
        raise OutOfRegime("cylinder classification is stated for rho != 0")
    if n < 3:
        raise ValueError("need n >= 3")
    m = n - 1
    c = 1.0 - m * rho
    out: list[CylinderSolution] = []

    if c != 0.0:
        if lam == 0.0:
            out.append(CylinderSolution(n, rho, lam, kappa=0, omega0_sq=1.0,
                                        f_quad=0.0, trivial=True))
        else:
            f_quad = lam / (2.0 * c)
            for kappa in (1, -1):
                w2 = kappa * (n - 2) * c / lam
                if w2 > 0:
                    out.append(CylinderSolution(n, rho, lam, kappa=kappa,
                                                omega0_sq=w2, f_quad=f_quad))
    else:
        # rho = 1/(n-1): only steady, any fiber sign and any radius
        if lam == 0.0:
            for kappa, w2 in ((1, 1.0), (0, 1.0), (-1, 1.0)):
                out.append(CylinderSolution(
                    n, rho, lam, kappa=kappa, omega0_sq=w2,
                    f_quad=(n - 2) * kappa / (2.0 * w2),
                    trivial=(kappa == 0),
                ))
    return out


def flat_gaussian(n: int, rho: float, lam: float, a0: float = 0.0,
                  r_max: float = 10.0, n_samples: int = 801) -> RadialProfile:
    """Flat space with the quadratic potential f = lam r^2 / 2 + a0 r + b0.

    The spherical component of the defining equation forces f' = lam*omega,
    so the linear term is tied to the radial origin: a0 = lam * s with
    omega = r + s.  With a0 = 0 the tip sits at r = 0 and omega = r; a
    nonzero a0 needs lam != 0 of matching sign and produces the same flat
    solution sampled away from its tip.
    """
    if rho == 0.0:
        raise OutOfRegime("stated for rho != 0")
    if a0 == 0.0:
        s = 0.0
    elif lam == 0.0 or a0 / lam < 0:
        raise InvalidParameters(
            "the linear coefficient is lam times the origin offset; "
            f"a0 = {a0} is inconsistent with lam = {lam}"
        )
    else:
        s = a0 / lam
    if s == 0.0:
        r = np.linspace(r_max / (n_samples - 1), r_max, n_samples)
    else:
        r = np.linspace(0.0, r_max, n_samples)
    params = SolitonParams(n=n, rho=rho, lam=lam, kappa=1)
    return RadialProfile(
        params=params,
        r=r,
        omega=r + s,
        omega_p=np.ones_like(r),
        omega_pp=np.zeros_like(r),
        f=0.5 * lam * r**2 + a0 * r,
        f_p=lam * r + a0,
        normalization=NORMALIZATION_RAW,
        tip_anchored=(s == 0.0),
        f_pp=np.full_like(r, lam),
    )


def schouten_shrinker_local(a: float, b: float, lam: float, n: int = 3,
                            c0: float = 0.0, r_max: float = 10.0,
                            n_samples: int = 801) -> RadialProfile:
    """Local shrinking solutions at rho = 1/4 in dimension three.

    omega(r) = a r + b on r >= 0 with a >= 0, b > 0, lam > 0.  Plugging the
    stated quadratic potentials into the two reduced equations leaves
    (1 - a^2)/2 for the slope branch and lam b^2 - 1/2 for the level
    branch, so only a = 1 (flat R^3, f = lam r^2/2 + lam b r + e) and
    a = 0 with 2 lam b^2 = 1 (round R x S^2, f = lam r^2 + c r + d) solve
    them; other inputs are rejected.
    """
    if n != 3:
        raise InvalidParameters("local Schouten shrinkers are classified in n = 3")
    if a < 0 or b <= 0:
        raise InvalidParameters(f"need a >= 0 and b > 0, got a = {a}, b = {b}")
    if lam <= 0:
        raise InvalidParameters(f"shrinking solutions need lam > 0, got {lam}")
    rho = 0.25
    r = np.linspace(0.0, r_max, n_samples)

    if a == 0.0:
        if abs(2.0 * lam * b * b - 1.0) > 1e-12:
            raise InvalidParameters(
                f"cylinder branch requires 2*lam*b^2 = 1; got {2*lam*b*b}"
            )
        params = SolitonParams(n=3, rho=rho, lam=lam, kappa=1)
        return RadialProfile(
            params=params, r=r,
            omega=np.full_like(r, b),
            omega_p=np.zeros_like(r),
            omega_pp=np.zeros_like(r),
            f=lam * r**2 + c0 * r,
            f_p=2 * lam * r + c0,
            normalization=NORMALIZATION_RAW,
            tip_anchored=False,
            f_pp=np.full_like(r, 2 * lam),
        )
    if abs(a - 1.0) > 1e-12:
        raise InvalidParameters(
            f"slope branch admits only a = 1 (residual of the level equation "
            f"is (1 - a^2)/2 = {(1 - a*a)/2:.3g})"
        )
    params = SolitonParams(n=3, rho=rho, lam=lam, kappa=1)
    return RadialProfile(
        params=params, r=r,
        omega=r + b,
        omega_p=np.ones_like(r),
        omega_pp=np.zeros_like(r),
        f=0.5 * lam * r**2 + lam * b * r,
        f_p=lam * r + lam * b,
        normalization=NORMALIZATION_RAW,
        tip_anchored=False,
        f_pp=np.full_like(r, lam),
    )


@dataclass
class GradientInequalityReport:
    """Pointwise check of 2 lam f + f'(0)^2 <= |f'|^2 <= a f + f'(0)^2."""

    a: float
    lower_margin_min: float       # min over r > 0 of |f'|^2 - 2 lam f - f'(0)^2
    upper_margin_min: float       # min over r > 0 of a f + f'(0)^2 - |f'|^2
    sufficiency_min: float        # min over range of a - 2 lam - R/2

    @property
    def holds(self) -> bool:
        return self.lower_margin_min >= -1e-12 and self.upper_margin_min >= -1e-12


def gradient_inequality_check(prof: RadialProfile, a: float) -> GradientInequalityReport:
    """Both gradient bounds for a shrinking profile gauged to f(0) = 0.

    The upper bound needs a large enough that a - 2*lam - R/2 > 0 on the
    sampled range; the report carries the margin of that sufficient
    condition alongside the pointwise inequality margins.
    """
    lam = prof.params.lam
    if lam <= 0:
        raise OutOfRegime(f"gradient inequality applies to shrinking profiles; lam = {lam}")
    if abs(prof.f[0]) > 1e-12 or prof.r[0] != 0.0:
        raise GaugeViolation("profile must be sampled from r = 0 with f(0) = 0")
    fp0 = prof.f_p[0]
    grad2 = prof.f_p**2
    pos = prof.r > 0
    lower = grad2[pos] - 2 * lam * prof.f[pos] - fp0**2
    upper = a * prof.f[pos] + fp0**2 - grad2[pos]
    R = curvature(prof).R
    return GradientInequalityReport(
        a=a,
        lower_margin_min=float(np.min(lower)),
        upper_margin_min=float(np.min(upper)),
        sufficiency_min=float(np.min(a - 2 * lam - R / 2)),
    )


def canonical_suite() -> list[tuple[str, RadialProfile]]:
    """Named closed-form profiles spanning the classification.

    Used as exact oracles: every profile satisfies the reduced soliton
    equations identically.
    """
    suite: list[tuple[str, RadialProfile]] = []

    def cyl(label, n, rho, lam, kappa):
        sols = [s for s in cylinder_solutions(n, rho, lam) if s.kappa == kappa]
        assert len(sols) == 1, (label, sols)
        suite.append((label, sols[0].profile()))

    cyl("round cylinder, shrinking Schouten n=3", 3, 0.25, 1.0, 1)
    cyl("hyperbolic cylinder, shrinking n=3 rho=1", 3, 1.0, 1.0, -1)
    cyl("round cylinder, shrinking n=4 rho=0.1", 4, 0.1, 2.0, 1)
    cyl("hyperbolic cylinder, expanding n=3 rho=0.2", 3, 0.2, -1.0, -1)
    cyl("steady cylinder at rho=1/(n-1), n=3", 3, 0.5, 0.0, 1)
    suite.append(("flat steady profile", flat_gaussian(3, 0.3, 0.0)))
    suite.append(("flat shrinking Schouten R^3", flat_gaussian(3, 0.25, 1.0)))
    suite.append(("flat expanding n=4", flat_gaussian(4, 0.125, -1.0)))
    suite.append(("local Schouten shrinker R x S^2", schouten_shrinker_local(0.0, 1.0, 0.5)))
    suite.append(("local Schouten shrinker flat", schouten_shrinker_local(1.0, 1.0, 0.5)))
    return suite
