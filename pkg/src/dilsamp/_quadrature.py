"""Quadrature rules for ball averages.

Deterministic rules in one and two dimensions (Gauss-Legendre on the
segment, Gauss-Legendre in radius times a trapezoid rule in angle on the
disk), fixed-seed Monte Carlo in higher dimensions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuadSpec:
    """Parameters of the ball-average quadrature.

    ``order`` is the Gauss-Legendre point count (segment and radial),
    ``angular`` the number of equispaced angles on the disk, ``mc_samples``
    and ``seed`` drive the Monte Carlo rule used for dimension 3 and up.
    """

    order: int = 16
    angular: int = 32
    mc_samples: int = 200_000
    seed: int = 0


def gauss_legendre(n: int, a: float, b: float):
    """Nodes and weights on ``[a, b]``; weights sum to ``b - a``."""
    x, w = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def segment_rule(radius: float, quad: QuadSpec, breaks=()):
    """Average-one rule on ``[-radius, radius]``: weights sum to 1.

    ``breaks`` lists interior points (kink locations in the integration
    variable); the segment is split there so each Gauss panel sees a smooth
    integrand.
    """
    cuts = [-radius] + sorted(float(b) for b in breaks if -radius < b < radius) + [radius]
    xs, ws = [], []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        x, w = gauss_legendre(quad.order, lo, hi)
        xs.append(x)
        ws.append(w)
    nodes = np.concatenate(xs)
    weights = np.concatenate(ws) / (2.0 * radius)
    return nodes[:, None], weights


def disk_rule(radius: float, quad: QuadSpec):
    """Average-one rule on the disk of given radius: weights sum to 1."""
    r, wr = gauss_legendre(quad.order, 0.0, radius)
    theta = 2.0 * np.pi * np.arange(quad.angular) / quad.angular
    wt = 2.0 * np.pi / quad.angular
    nodes = np.stack(
        [
            np.outer(r, np.cos(theta)).ravel(),
            np.outer(r, np.sin(theta)).ravel(),
        ],
        axis=-1,
    )
    weights = (np.outer(wr * r, np.full_like(theta, wt))).ravel()
    return nodes, weights / (np.pi * radius**2)


def ball_mc_rule(d: int, radius: float, quad: QuadSpec):
    """Average-one Monte Carlo rule on the d-ball (fixed seed)."""
    rng = np.random.default_rng(quad.seed)
    n = quad.mc_samples
    dirs = rng.standard_normal((n, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = radius * rng.random(n) ** (1.0 / d)
    nodes = dirs * radii[:, None]
    weights = np.full(n, 1.0 / n)
    return nodes, weights


def ball_rule(d: int, radius: float, quad: QuadSpec, breaks=()):
    """Dispatch an average-one rule on the d-ball of given radius."""
    if radius <= 0:
        raise ValueError("ball radius must be positive")
    if d == 1:
        return segment_rule(radius, quad, breaks)
    if d == 2:
        return disk_rule(radius, quad)
    return ball_mc_rule(d, radius, quad)
