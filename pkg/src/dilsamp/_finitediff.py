"""Finite-difference extraction of partial derivatives.

Central symmetric stencils with Richardson extrapolation over three step
sizes.  Shared by the spectrum inspection in :mod:`dilsamp.generators` and
the calibration solver so that both see the same stencil policy.

The stencil width and base step grow with the derivative order: round-off
amplification goes like ``eps / h**r``, so high orders need larger steps,
which in turn need wider (higher-degree) stencils to keep the truncation
error down.  Accuracy is exercised in the tests against closed-form
derivatives of catalog spectra.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

# base step and stencil width per maximum single-coordinate order
_BASE_STEP = {0: 1e-2, 1: 1e-2, 2: 1e-2, 3: 2e-2, 4: 4e-2, 5: 6e-2, 6: 8e-2}
_NPTS = {0: 7, 1: 7, 2: 7, 3: 7, 4: 9, 5: 9, 6: 11}


@lru_cache(maxsize=None)
def stencil(npts: int, order: int) -> tuple[float, ...]:
    """Weights ``w`` with ``f^(order)(0) ~ h**-order * sum w_i f(i*h)``.

    Nodes are the integers ``-npts//2 .. npts//2``; the rule is exact for
    polynomials of degree ``npts - 1``.
    """
    if order >= npts:
        raise ValueError("stencil too small for requested order")
    half = npts // 2
    nodes = np.arange(-half, half + 1, dtype=float)
    # V[s, i] = nodes_i**s; moment conditions sum_i w_i nodes_i**s = s! delta_{s,order}
    V = np.vander(nodes, npts, increasing=True).T
    rhs = np.zeros(npts)
    rhs[order] = float(math.factorial(order))
    return tuple(np.linalg.solve(V, rhs))


def _error_exponent(npts: int, order: int) -> int:
    # leading truncation exponent of the symmetric rule (series steps by h**2)
    q = npts - order
    return q if q % 2 == 0 else q + 1


def fd_partial(fn, x0, beta, scale: float = 1.0):
    """Mixed partial derivative ``D^beta fn`` at ``x0`` by finite differences.

    Parameters
    ----------
    fn : callable
        Accepts an array of points with last axis ``len(x0)`` and returns
        values of matching leading shape.  May be complex-valued.
    x0 : array_like
        Base point, shape ``(d,)``.
    beta : sequence of int
        Derivative order per coordinate, total order at most 6.
    scale : float
        Multiplies the base step; pass ``max(1, |x0|_inf)`` for arguments
        far from the origin.
    """
    x0 = np.asarray(x0, dtype=float)
    beta = tuple(int(b) for b in beta)
    if any(b < 0 for b in beta):
        raise ValueError(f"negative derivative order in {beta}")
    rtot = sum(beta)
    if rtot == 0:
        return complex(np.asarray(fn(x0.reshape(1, -1)))[0])
    if rtot > 6:
        raise ValueError("derivative order above 6 is not supported")

    rmax = max(beta)
    npts = _NPTS[rmax]
    h0 = _BASE_STEP[rmax] * float(scale)
    active = [i for i, b in enumerate(beta) if b > 0]
    weights = [np.asarray(stencil(npts, beta[i])) for i in active]
    half = npts // 2
    nodes = np.arange(-half, half + 1, dtype=float)
    q = min(_error_exponent(npts, beta[i]) for i in active)

    # tensor stencil over the active coordinates
    grids = np.meshgrid(*([nodes] * len(active)), indexing="ij")
    w = weights[0]
    for wi in weights[1:]:
        w = np.multiply.outer(w, wi)

    def estimate(h: float) -> complex:
        pts = np.broadcast_to(x0, grids[0].shape + x0.shape).copy()
        for ax, i in enumerate(active):
            pts[..., i] = x0[i] + h * grids[ax]
        vals = np.asarray(fn(pts))
        return complex((w * vals).sum() / h**rtot)

    t0, t1, t2 = estimate(h0), estimate(h0 / 2), estimate(h0 / 4)
    r = 2.0**q
    a1 = (r * t1 - t0) / (r - 1.0)
    a2 = (r * t2 - t1) / (r - 1.0)
    r2 = 2.0 ** (q + 2)
    return (r2 * a2 - a1) / (r2 - 1.0)
