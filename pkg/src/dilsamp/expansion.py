"""Sampling expansions: coefficients, lattice support, evaluation.

At level ``j`` the expansion of a signal ``f`` reads

    Q_j f(x) = sum_k c_k phi(M^j x - k)

with one coefficient per lattice point ``k``.  Three coefficient rules are
provided:

* exact sampling: ``c_k = f(M^-j k)``;
* differential sampling: ``c_k`` is a differential operator applied to the
  rescaled signal (see :mod:`dilsamp.diffop`);
* falsified (ball-averaged) sampling: ``c_k`` is the average of ``f`` over
  the image under ``M^-j`` of the radius-``h`` ball centered at ``k``,
  computed in pulled-back coordinates so no ellipsoid geometry is needed:
  ``c_k = (1/V_h) integral_{|t|<=h} f(M^-j k + M^-j t) dt``.

The deviation of the falsified rule from its differential counterpart with
the matching ball-moment operator decays one order faster than the operator
window, which is what makes ball averages usable in place of derivatives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Union

import numpy as np

from ._quadrature import QuadSpec, ball_rule
from .diffop import DiffOperator, apply_to_signal, apply_to_signal_many, ball_operator
from .dilation import Dilation
from .generators import Generator

_CHUNK = 1 << 17
_EDGE = 1e-9


class MissingCoefficientError(KeyError):
    """A lattice point needed by evaluation has no coefficient."""


@dataclass(frozen=True)
class Box:
    """Axis-aligned box, the evaluation domain of an expansion."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        if len(lo) != len(hi) or any(a >= b for a, b in zip(lo, hi)):
            raise ValueError("box must satisfy lo < hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def d(self) -> int:
        return len(self.lo)

    @staticmethod
    def centered(halfwidth: float, d: int) -> "Box":
        return Box((-halfwidth,) * d, (halfwidth,) * d)

    def corners(self) -> np.ndarray:
        cs = list(product(*zip(self.lo, self.hi)))
        return np.asarray(cs, dtype=float)


@dataclass(frozen=True)
class ExactRule:
    """Point samples of the signal."""


@dataclass(frozen=True)
class DifferentialRule:
    """Differential operator applied to the rescaled signal."""

    operator: DiffOperator


@dataclass(frozen=True)
class FalsifiedRule:
    """Ball averages of radius ``h`` (in lattice coordinates)."""

    h: float
    quad: QuadSpec = QuadSpec()

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("averaging radius must be positive")


CoefficientRule = Union[ExactRule, DifferentialRule, FalsifiedRule]


# ---------------------------------------------------------------------------
# ball averages


def ball_average(f, center, radius: float, quad: QuadSpec = QuadSpec()) -> complex:
    """Average of ``f`` over the ball of given center and radius.

    Deterministic quadrature in dimensions 1 and 2 (Gauss-Legendre and a
    polar product rule), fixed-seed Monte Carlo beyond.  Kink locations
    declared by the signal split the segment rule in dimension 1.
    """
    center = np.asarray(center, dtype=float).reshape(-1)
    return _pullback_average(
        f, center[None, :], np.eye(center.size), radius, quad
    )[0]


def _pullback_average(f, bases: np.ndarray, a: np.ndarray, h: float, quad: QuadSpec):
    """Averages ``(1/V_h) integral_{|t|<=h} f(base + A t) dt`` for each base.

    Vectorized over bases in chunks; signals with kinks fall back to a
    per-base split rule in dimension 1.
    """
    d = bases.shape[1]
    kinks = tuple(getattr(f, "kinks", ()) or ())
    if kinks and d == 1:
        scale = float(a[0, 0])
        out = np.empty(bases.shape[0], dtype=complex)
        for i, base in enumerate(bases[:, 0]):
            breaks = [(x0 - base) / scale for x0 in kinks]
            nodes, weights = ball_rule(1, h, quad, breaks=breaks)
            pts = base + nodes * scale
            out[i] = np.asarray(f.eval(pts)) @ weights
        return out
    nodes, weights = ball_rule(d, h, quad)
    mapped = nodes @ a.T
    out = np.empty(bases.shape[0], dtype=complex)
    step = max(1, _CHUNK // max(1, len(weights)))
    for lo in range(0, bases.shape[0], step):
        chunk = bases[lo : lo + step]
        pts = chunk[:, None, :] + mapped[None, :, :]
        vals = np.asarray(f.eval(pts))
        out[lo : lo + step] = vals @ weights
    return out


# ---------------------------------------------------------------------------
# lattice support and coefficients


def lattice_support(
    g: Generator,
    m: Dilation,
    j: int,
    domain: Box,
    truncation_tol: float = 1e-10,
) -> np.ndarray:
    """Integer lattice points whose translated generator matters on ``domain``.

    For compactly supported generators this is a superset of every ``k``
    with ``supp phi(M^j . - k)`` meeting the domain (a thin boundary layer
    of vanishing terms may be included, which leaves the truncated sum
    exact).  For unbounded generators the per-coordinate reach ``R`` is
    chosen so each omitted term is below ``truncation_tol`` in magnitude:
    the catalog decay ``|phi| <= decay_const / x**2`` per coordinate gives
    ``R = sqrt(decay_const / truncation_tol)``.
    """
    if domain.d != g.d:
        raise ValueError("domain dimension does not match the generator")
    y = domain.corners() @ np.asarray(m.power(j), dtype=float).T
    ylo, yhi = y.min(axis=0), y.max(axis=0)
    if g.support_radius is not None:
        reach = g.support_radius
    else:
        if truncation_tol <= 0:
            raise ValueError("truncation tolerance must be positive")
        reach = math.sqrt(g.decay_const / truncation_tol)
    lo = np.ceil(ylo - reach - _EDGE).astype(np.int64)
    hi = np.floor(yhi + reach + _EDGE).astype(np.int64)
    ranges = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    grids = np.meshgrid(*ranges, indexing="ij")
    return np.stack([gr.ravel() for gr in grids], axis=-1)


def coefficients(rule: CoefficientRule, f, m: Dilation, j: int, lattice) -> dict:
    """Coefficient map ``k -> c_k`` for the given rule.

    ``lattice`` is an integer array ``(n, d)`` or an iterable of tuples.
    The signal dimension, operator dimension and dilation must agree.
    """
    ks = np.asarray(list(lattice) if not isinstance(lattice, np.ndarray) else lattice)
    ks = ks.reshape(-1, m.d)
    a = np.asarray(m.power(-j), dtype=float)
    bases = ks @ a.T
    if isinstance(rule, ExactRule):
        vals = np.asarray(f.eval(bases), dtype=complex)
    elif isinstance(rule, DifferentialRule):
        if rule.operator.d != m.d:
            raise ValueError("operator dimension does not match the dilation")
        vals = apply_to_signal_many(rule.operator, f, m, j, ks)
    elif isinstance(rule, FalsifiedRule):
        vals = _pullback_average(f, bases, a, rule.h, rule.quad)
    else:
        raise TypeError(f"unknown coefficient rule {rule!r}")
    return {tuple(int(v) for v in k): complex(c) for k, c in zip(ks, vals)}


def deviation(
    f, op: DiffOperator, m: Dilation, j: int, k, h: float, quad: QuadSpec = QuadSpec()
) -> complex:
    """Ball-averaged minus differential coefficient at one lattice point.

    Decays like ``scale(j)**(order + 1)`` for signals with bounded
    derivatives of total order ``order + 1``.
    """
    ks = np.asarray(k, dtype=float).reshape(1, -1)
    a = np.asarray(m.power(-j), dtype=float)
    avg = _pullback_average(f, ks @ a.T, a, h, quad)[0]
    return complex(avg - apply_to_signal(op, f, m, j, ks[0]))


def deviation_many(
    f, op: DiffOperator, m: Dilation, j: int, lattice, h: float,
    quad: QuadSpec = QuadSpec(),
) -> np.ndarray:
    """Vectorized :func:`deviation` over a lattice array ``(n, d)``."""
    ks = np.asarray(lattice).reshape(-1, op.d)
    a = np.asarray(m.power(-j), dtype=float)
    avg = _pullback_average(f, ks @ a.T, a, h, quad)
    return avg - apply_to_signal_many(op, f, m, j, ks)


# ---------------------------------------------------------------------------
# evaluation


def _dense_coeffs(coeffs: dict, d: int):
    ks = np.asarray(list(coeffs.keys()), dtype=np.int64).reshape(-1, d)
    vals = np.fromiter(coeffs.values(), dtype=complex, count=len(coeffs))
    kmin = ks.min(axis=0)
    shape = tuple(ks.max(axis=0) - kmin + 1)
    dense = np.zeros(shape, dtype=complex)
    present = np.zeros(shape, dtype=bool)
    idx = tuple((ks - kmin).T)
    dense[idx] = vals
    present[idx] = True
    return dense, present, kmin


def evaluate(g: Generator, m: Dilation, j: int, coeffs: dict, points) -> np.ndarray:
    """Evaluate ``sum_k c_k phi(M^j x - k)`` at the given points.

    Every lattice point whose generator translate is nonzero at some
    evaluation point must appear in ``coeffs``
    (:class:`MissingCoefficientError` otherwise).  For unbounded generators
    the provided coefficients are summed as given; build them from
    :func:`lattice_support` so the omitted tail is below the truncation
    tolerance.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :] if pts.size == g.d else pts[:, None]
    if pts.shape[-1] != g.d:
        raise ValueError("points must have last axis equal to the dimension")
    pts = pts.reshape(-1, g.d)
    if not coeffs:
        raise ValueError("empty coefficient map")
    dense, present, kmin = _dense_coeffs(coeffs, g.d)
    mj = np.asarray(m.power(j), dtype=float)
    out = np.empty(pts.shape[0], dtype=complex)
    for lo in range(0, pts.shape[0], _CHUNK):
        chunk = pts[lo : lo + _CHUNK]
        y = chunk @ mj.T
        if g.support_radius is not None:
            out[lo : lo + _CHUNK] = _evaluate_compact(g, y, dense, present, kmin)
        else:
            out[lo : lo + _CHUNK] = _evaluate_full(g, y, dense, present, kmin)
    return out


def _evaluate_compact(g, y, dense, present, kmin):
    r = g.support_radius
    width = int(math.floor(2 * r + 2 * _EDGE)) + 1
    k0 = np.ceil(y - r - _EDGE).astype(np.int64)
    acc = np.zeros(y.shape[0], dtype=complex)
    kmax = kmin + np.asarray(dense.shape) - 1
    for off in product(range(width), repeat=g.d):
        k = k0 + np.asarray(off, dtype=np.int64)
        phi = np.asarray(g.spatial(y - k))
        live = phi != 0
        if not np.any(live):
            continue
        inside = np.all((k >= kmin) & (k <= kmax), axis=1)
        sel = tuple(np.where(inside[:, None], k - kmin, 0).T)
        have = present[sel] & inside
        bad = live & ~have
        if np.any(bad):
            missing = k[bad.argmax()]
            raise MissingCoefficientError(
                f"no coefficient for lattice point {tuple(missing)}"
            )
        acc += np.where(have, dense[sel], 0.0) * phi
    return acc


def _evaluate_full(g, y, dense, present, kmin):
    ks = np.argwhere(present) + kmin
    vals = dense[tuple((ks - kmin).T)]
    acc = np.zeros(y.shape[0], dtype=complex)
    step = max(1, _CHUNK // max(1, ks.shape[0]))
    for lo in range(0, y.shape[0], step):
        yc = y[lo : lo + step]
        phi = np.asarray(g.spatial(yc[:, None, :] - ks[None, :, :]))
        acc[lo : lo + step] = phi @ vals
    return acc


@dataclass(frozen=True)
class ExpansionResult:
    """One evaluated expansion: level, lattice, coefficients, values."""

    level: int
    lattice: np.ndarray
    coefficients: dict
    points: np.ndarray
    values: np.ndarray


def expand(
    g: Generator,
    m: Dilation,
    j: int,
    rule: CoefficientRule,
    f,
    domain: Box,
    points,
    truncation_tol: float = 1e-10,
) -> ExpansionResult:
    """Convenience wrapper: lattice support, coefficients, evaluation."""
    lat = lattice_support(g, m, j, domain, truncation_tol)
    cs = coefficients(rule, f, m, j, lat)
    pts = np.asarray(points, dtype=float).reshape(-1, g.d)
    vals = evaluate(g, m, j, cs, pts)
    return ExpansionResult(j, lat, cs, pts, vals)


__all__ = [
    "Box",
    "ExactRule",
    "DifferentialRule",
    "FalsifiedRule",
    "CoefficientRule",
    "QuadSpec",
    "MissingCoefficientError",
    "ball_average",
    "ball_operator",
    "lattice_support",
    "coefficients",
    "deviation",
    "deviation_many",
    "evaluate",
    "expand",
    "ExpansionResult",
]
