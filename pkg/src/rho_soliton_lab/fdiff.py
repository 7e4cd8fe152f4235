"""Finite-difference derivatives of sampled fields on non-uniform grids.

Stencil weights come from Fornberg's recursion, exact for arbitrary node
placement.  Sampled profiles use geometric r-grids, so stencil windows are
chosen in log-r; near the tip the fields are flat to float resolution over
any window proportional to r, so an absolute window floor (the caller
passes a fraction of the geometry's curvature length) keeps second
derivatives resolvable there.  Stencils are clamped at the ends of the
grid and become one-sided.
"""

from __future__ import annotations

import numpy as np

__all__ = ["fornberg_weights", "derivative"]


def fornberg_weights(nodes: np.ndarray, x0: float, max_order: int) -> np.ndarray:
    """Weights W[:, k] with sum(W[:, k] * f(nodes)) ~ f^(k)(x0), k <= max_order."""
    nodes = np.asarray(nodes, dtype=float)
    npts = len(nodes)
    C = np.zeros((npts, max_order + 1))
    c1 = 1.0
    c4 = nodes[0] - x0
    C[0, 0] = 1.0
    for i in range(1, npts):
        mn = min(i, max_order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    C[i, k] = c1 * (k * C[i - 1, k - 1] - c5 * C[i - 1, k]) / c2
                C[i, 0] = -c1 * c5 * C[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                C[j, k] = (c4 * C[j, k] - k * C[j, k - 1]) / c3
            C[j, 0] = c4 * C[j, 0] / c3
        c1 = c2
    return C


def derivative(
    r: np.ndarray,
    v: np.ndarray,
    order: int = 1,
    theta: float = 0.1,
    window_floor: float = 0.0,
    npts: int = 7,
) -> np.ndarray:
    """order-th derivative of v(r) sampled on a (near-)geometric grid.

    The stencil at r_i spans roughly max(theta, window_floor / r_i) in
    log-r, realized by striding over grid indices.
    """
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    if len(r) < npts:
        raise ValueError(f"need at least {npts} samples, got {len(r)}")
    N = len(r)
    dln = float(np.median(np.diff(np.log(np.abs(r) + 1e-300))))
    if dln <= 0:
        dln = float(np.median(np.diff(r)) / max(abs(r[0]), 1e-300))
    out = np.empty(N)
    offsets = np.arange(npts)
    max_stride = max(1, (N - 1) // (npts - 1))
    for i in range(N):
        want = theta
        if window_floor > 0 and r[i] != 0:
            want = max(theta, window_floor / abs(r[i]))
        stride = int(np.ceil(want / (dln * (npts - 1))))
        stride = min(max(stride, 1), max_stride)
        half = (npts // 2) * stride
        j0 = min(max(i - half, 0), N - 1 - (npts - 1) * stride)
        idx = j0 + stride * offsets
        w = fornberg_weights(r[idx], r[i], order)
        out[i] = w[:, order] @ v[idx]
    return out
