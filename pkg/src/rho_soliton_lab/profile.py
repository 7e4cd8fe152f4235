"""Sampled radial profiles of warped-product metrics and their file format.

A profile carries (r, omega, omega', omega'', f, f') on an increasing
r-grid.  Producers that know second derivatives of f in closed form may
attach them (`f_pp`); numerically constructed profiles deliberately do
not, so that residual checks differentiate f' independently.  The JSON
schema stores floats as decimal strings of 17 significant digits, which
round-trip doubles exactly and keep files diffable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .phase_system import SolitonParams

__all__ = ["RadialProfile", "fmt17", "profile_to_json", "profile_from_json"]

SCHEMA = "rho-soliton-profile/1"

NORMALIZATION_RAW = "raw"
NORMALIZATION_R1 = "R_at_origin_one"


def fmt17(x: float) -> str:
    """Decimal string with 17 significant digits (lossless for doubles)."""
    return format(float(x), ".17g")


@dataclass
class RadialProfile:
    params: SolitonParams
    r: np.ndarray
    omega: np.ndarray
    omega_p: np.ndarray
    omega_pp: np.ndarray
    f: np.ndarray
    f_p: np.ndarray
    normalization: str = NORMALIZATION_RAW
    tip_anchored: bool = True
    # analytic extras; never serialized
    f_pp: np.ndarray | None = field(default=None, repr=False)
    t: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        arrays = [self.r, self.omega, self.omega_p, self.omega_pp, self.f, self.f_p]
        lens = {len(a) for a in arrays}
        if len(lens) != 1:
            raise ValueError("sample arrays must share a length")
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("r must be strictly increasing")

    def __len__(self) -> int:
        return len(self.r)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def m(self) -> int:
        return self.params.m

    def rescaled(self, c: float) -> "RadialProfile":
        """Homothety g -> c^2 g realized as r -> c r, omega -> c omega.

        f is carried along as a scalar function (f' scales by 1/c), and
        lambda rescales to lambda / c^2 so that non-steady solutions map to
        solutions.
        """
        if c <= 0:
            raise ValueError("homothety factor must be positive")
        new_params = replace(self.params, lam=self.params.lam / c**2)
        return RadialProfile(
            params=new_params,
            r=self.r * c,
            omega=self.omega * c,
            omega_p=self.omega_p.copy(),
            omega_pp=self.omega_pp / c,
            f=self.f.copy(),
            f_p=self.f_p / c,
            normalization=self.normalization,
            tip_anchored=self.tip_anchored,
            f_pp=None if self.f_pp is None else self.f_pp / c**2,
            t=None if self.t is None else self.t.copy(),
        )


def profile_to_json(prof: RadialProfile) -> str:
    doc = {
        "schema": SCHEMA,
        "params": {
            "n": prof.params.n,
            "rho": fmt17(prof.params.rho),
            "lambda": fmt17(prof.params.lam),
            "kappa": prof.params.kappa,
        },
        "normalization": prof.normalization,
        "tip_anchored": prof.tip_anchored,
        "samples": [
            {
                "r": fmt17(prof.r[i]),
                "omega": fmt17(prof.omega[i]),
                "omega_p": fmt17(prof.omega_p[i]),
                "omega_pp": fmt17(prof.omega_pp[i]),
                "f": fmt17(prof.f[i]),
                "f_p": fmt17(prof.f_p[i]),
            }
            for i in range(len(prof))
        ],
    }
    return json.dumps(doc, indent=1) + "\n"


def profile_from_json(text: str) -> RadialProfile:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    params = SolitonParams(
        n=int(doc["params"]["n"]),
        rho=float(doc["params"]["rho"]),
        lam=float(doc["params"]["lambda"]),
        kappa=int(doc["params"]["kappa"]),
    )
    cols = {k: [] for k in ("r", "omega", "omega_p", "omega_pp", "f", "f_p")}
    for s in doc["samples"]:
        for k in cols:
            cols[k].append(float(s[k]))
    return RadialProfile(
        params=params,
        r=np.asarray(cols["r"]),
        omega=np.asarray(cols["omega"]),
        omega_p=np.asarray(cols["omega_p"]),
        omega_pp=np.asarray(cols["omega_pp"]),
        f=np.asarray(cols["f"]),
        f_p=np.asarray(cols["f_p"]),
        normalization=doc.get("normalization", NORMALIZATION_RAW),
        tip_anchored=bool(doc.get("tip_anchored", False)),
    )
