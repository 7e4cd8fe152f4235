"""Phase-plane formulation of warped-product gradient rho-Einstein solitons.

A warped metric dr^2 + omega(r)^2 g_can with constant-curvature fibers
(Ric_can = (m-1)*kappa*g_can, m = n-1) reduces the soliton equation to a
first-order system in the variables

    x = omega',   y = -omega * f',   omega,

with phase time t defined by dt = dr / omega:

    (1-2*m*rho) x' = (m-1)(1-m*rho)(kappa - x^2) - x*y - lam*omega^2
    (1-2*m*rho) y' = -m(m-1)(1-(m+1)*rho)(kappa - x^2)
                     + (1+m-4*m*rho)*x*y + (m-1)*lam*omega^2
            omega' = x*omega

For steady solitons (lam = 0, kappa = 1) the (x, y) subsystem decouples
and the trajectory can be viewed as a graph x = x(y) (or x = x(z) with
z = -y), governed by the scalar fields F and G below.  The value
rho = 1/(2m) makes the left-hand factor vanish; operations that divide by
it refuse to run there (see `SchoutenSingular`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DenominatorZero, NotSteady, OutOfRegime, SchoutenSingular

__all__ = [
    "SolitonParams",
    "PhaseState",
    "system_rhs_numerators",
    "vector_field",
    "steady_vector_field",
    "scalar_field_F",
    "scalar_field_G",
    "nullcline_h",
    "nullcline_k",
    "equilibria",
    "equilibrium_families",
    "unstable_direction",
]


@dataclass(frozen=True)
class SolitonParams:
    """Structural parameters: dimension n >= 3, rho, lam, fiber sign kappa."""

    n: int
    rho: float
    lam: float = 0.0
    kappa: int = 1

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"dimension n must be >= 3, got {self.n}")
        if self.kappa not in (-1, 0, 1):
            raise ValueError(f"kappa must be -1, 0 or +1, got {self.kappa}")

    @property
    def m(self) -> int:
        return self.n - 1

    # Recurring coefficient combinations of the first-order system.
    @property
    def c1(self) -> float:
        """(m-1)(1-m*rho), coefficient of (kappa - x^2) in the x-equation."""
        return (self.m - 1) * (1.0 - self.m * self.rho)

    @property
    def c2(self) -> float:
        """m(m-1)(1-(m+1)*rho), coefficient of (kappa - x^2) in the y-equation."""
        return self.m * (self.m - 1) * (1.0 - (self.m + 1) * self.rho)

    @property
    def c3(self) -> float:
        """1 + m - 4*m*rho, coefficient of x*y in the y-equation."""
        return 1.0 + self.m - 4.0 * self.m * self.rho

    @property
    def lead(self) -> float:
        """1 - 2*m*rho, the factor multiplying x' and y'."""
        return 1.0 - 2.0 * self.m * self.rho

    @property
    def is_schouten(self) -> bool:
        return self.lead == 0.0

    @property
    def is_steady(self) -> bool:
        return self.lam == 0.0

    def steady(self) -> "SolitonParams":
        return replace(self, lam=0.0, kappa=1)

    def require_not_schouten(self):
        if self.is_schouten:
            raise SchoutenSingular(
                f"rho = 1/(2(n-1)) = {self.rho} makes the system singular "
                f"(n = {self.n}); the x', y' equations divide by 1-2(n-1)rho"
            )


@dataclass(frozen=True)
class PhaseState:
    """A point (x, y, omega) of the first-order system at phase time t."""

    x: float
    y: float
    omega: float
    t: float = 0.0


def _one_minus_sq(x: float) -> float:
    # (1-x)(1+x) avoids cancellation for x near 1, where trajectories start.
    return (1.0 - x) * (1.0 + x)


def system_rhs_numerators(p: SolitonParams, s: PhaseState) -> tuple[float, float, float]:
    """Right-hand sides with the (1-2*m*rho) factor still on the left.

    Returns (N_x, N_y, domega) where (1-2*m*rho) x' = N_x and similarly for
    y, while omega' = x*omega carries no singular factor.  Well defined for
    every rho, including the Schouten value.
    """
    q = p.kappa - s.x * s.x if p.kappa != 1 else _one_minus_sq(s.x)
    w2 = s.omega * s.omega
    nx = p.c1 * q - s.x * s.y - p.lam * w2
    ny = -p.c2 * q + p.c3 * s.x * s.y + (p.m - 1) * p.lam * w2
    return nx, ny, s.x * s.omega


def vector_field(p: SolitonParams, s: PhaseState) -> tuple[float, float, float]:
    """(x', y', omega') of the first-order system, singular factor divided out."""
    p.require_not_schouten()
    nx, ny, dw = system_rhs_numerators(p, s)
    return nx / p.lead, ny / p.lead, dw


def steady_vector_field(p: SolitonParams, s: PhaseState) -> tuple[float, float, float]:
    """The decoupled steady field; requires lam = 0 and kappa = 1."""
    if p.lam != 0.0:
        raise NotSteady(f"steady field requires lambda = 0, got {p.lam}")
    if p.kappa != 1:
        raise OutOfRegime(f"steady decoupled system assumes kappa = +1, got {p.kappa}")
    return vector_field(p, s)


def _F_parts(p: SolitonParams, x: float, y: float) -> tuple[float, float]:
    q = _one_minus_sq(x)
    return p.c1 * q - x * y, -p.c2 * q + p.c3 * x * y


def scalar_field_F(p: SolitonParams, x: float, y: float) -> float:
    """dx/dy for the steady trajectory viewed as x = x(y), y > 0."""
    num, den = _F_parts(p, x, y)
    if den == 0.0:
        raise DenominatorZero(x, y)
    return num / den


def _G_parts(p: SolitonParams, x: float, z: float) -> tuple[float, float]:
    q = _one_minus_sq(x)
    return p.c1 * q + x * z, p.c2 * q + p.c3 * x * z


def scalar_field_G(p: SolitonParams, x: float, z: float) -> float:
    """dx/dz with z = -y, used when trajectories run into y < 0."""
    num, den = _G_parts(p, x, z)
    if den == 0.0:
        raise DenominatorZero(x, z)
    return num / den


def nullcline_h(p: SolitonParams, y):
    """x-nullcline of the steady system for rho < 1/m.

    Root in (0, 1] of (m-1)(1-m*rho)(1-x^2) - x*y = 0, written in the
    cancellation-free form 2*c / (y + hypot(y, 2*c)) with
    c = (m-1)(1-m*rho) > 0.  Decreases strictly from h(0) = 1 to 0.
    """
    if p.rho >= 1.0 / p.m:
        raise OutOfRegime(f"h is defined for rho < 1/(n-1); got rho = {p.rho}")
    c = p.c1
    y = np.asarray(y, dtype=float)
    out = 2.0 * c / (y + np.hypot(y, 2.0 * c))
    return float(out) if out.ndim == 0 else out


def nullcline_k(p: SolitonParams, z):
    """x-nullcline in the z = -y half-plane for rho >= 1/m.

    For rho > 1/m this is the root in (0, 1] of
    (m-1)(1-m*rho)(1-x^2) + x*z = 0, i.e. 2*|c| / (z + hypot(z, 2*|c|)).
    At rho = 1/m the coefficient c vanishes and the nullcline degenerates
    to k(z) = 0 for z > 0 with k(0) = 1.
    """
    if p.rho < 1.0 / p.m:
        raise OutOfRegime(f"k is defined for rho >= 1/(n-1); got rho = {p.rho}")
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError("k expects z >= 0")
    c = abs(p.c1)
    if c == 0.0:
        out = np.where(z > 0, 0.0, 1.0)
    else:
        out = 2.0 * c / (z + np.hypot(z, 2.0 * c))
    return float(out) if out.ndim == 0 else out


def equilibria(p: SolitonParams) -> list[PhaseState]:
    """Isolated equilibria of the full system with omega >= 0.

    Closed-form case analysis.  omega' = x*omega forces x = 0 or omega = 0 at
    an equilibrium:

    * omega = 0: the remaining 2x2 linear system in (kappa - x^2, x*y) has
      determinant (m-1)(1-2*m*rho)^2 != 0, so kappa = x^2 and x*y = 0.
      For kappa = 1 this gives P = (1, 0, 0) and Q = (-1, 0, 0); for
      kappa = -1 nothing; for kappa = 0 a line (reported as a family).
    * x = 0: eliminating lam*omega^2 leaves (m-1)*kappa*(2*m*rho - 1) = 0,
      impossible away from the Schouten value unless kappa = 0.

    Non-isolated equilibrium sets (kappa = 0) are described by
    `equilibrium_families`.
    """
    p.require_not_schouten()
    if p.kappa == 1:
        return [PhaseState(1.0, 0.0, 0.0), PhaseState(-1.0, 0.0, 0.0)]
    return []


def equilibrium_families(p: SolitonParams) -> list[str]:
    """Textual descriptors of non-isolated equilibrium sets (our extension).

    The case analysis behind `equilibria` is stated in the source text only
    for lam = 0, kappa = 1; the general enumeration here is an extension of
    it and is flagged as such in reports.
    """
    p.require_not_schouten()
    fams = []
    if p.kappa == 0:
        fams.append("line {(0, y, 0) : y real} (flat fibers, omega = 0)")
        if p.lam == 0.0:
            fams.append("plane {(0, y, omega) : y real, omega >= 0} (flat steady)")
    return fams


def unstable_direction(p: SolitonParams) -> tuple[float, np.ndarray]:
    """Unstable eigenpair of the steady (x, y) subsystem linearized at (1, 0).

    The Jacobian is (1/(1-2*m*rho)) * [[-2*c1, -1], [2*c2, c3]], with
    determinant -2*(m-1) < 0 for every admissible rho: the equilibrium is a
    saddle.  The returned eigenvector is normalized and oriented so that its
    x-component is negative (pointing into x < 1, the side trajectories
    leave on).
    """
    p.require_not_schouten()
    jac = np.array([[-2.0 * p.c1, -1.0], [2.0 * p.c2, p.c3]]) / p.lead
    eigvals, eigvecs = np.linalg.eig(jac)
    i = int(np.argmax(eigvals.real))
    lam_u = float(eigvals[i].real)
    v = eigvecs[:, i].real
    v = v / math.hypot(v[0], v[1])
    if v[0] > 0:
        v = -v
    return lam_u, v
