import numpy as np
import pytest

from rho_soliton_lab.phase_system import SolitonParams
from rho_soliton_lab import shooting


# Constructed steady profiles shared across test modules.  Spans are long
# enough for tail exponent fits; construction costs a few seconds each.
CONSTRUCTED = {
    "bryant": dict(n=3, rho=0.0, t_span=2500.0),
    "negrho": dict(n=3, rho=-1.0, t_span=2500.0),
    "cigar": dict(n=3, rho=0.5, t_span=800.0),
    "rho1": dict(n=3, rho=1.0, t_span=2500.0),
}


@pytest.fixture(scope="session")
def profiles():
    out = {}
    for name, spec in CONSTRUCTED.items():
        p = SolitonParams(spec["n"], spec["rho"])
        out[name] = shooting.construct_soliton(p, t_span=spec["t_span"], n_samples=4000)
    return out


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260809)
