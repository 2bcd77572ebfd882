"""Multi-index arithmetic and enumeration.

Multi-indices are plain tuples of non-negative integers.  The canonical
ordering used everywhere in the package sorts by total order first and
lexicographically within one total order; enumeration functions return
indices already in that order.
"""
from __future__ import annotations

import math
from itertools import chain

import numpy as np

from ._arrays import as_index


def total_order(alpha) -> int:
    """Sum of the components, written ``[alpha]`` in the docs."""
    return sum(as_index(alpha))


def factorial(alpha) -> int:
    """Product of the componentwise factorials (exact integer)."""
    out = 1
    for a in as_index(alpha):
        out *= math.factorial(a)
    return out


def choose(alpha, beta) -> int:
    """Componentwise binomial coefficient; 0 when any ``beta_i > alpha_i``."""
    a, b = as_index(alpha), as_index(beta)
    if len(a) != len(b):
        raise ValueError("multi-index length mismatch")
    out = 1
    for ai, bi in zip(a, b):
        if bi > ai:
            return 0
        out *= math.comb(ai, bi)
    return out


def monomial(x, alpha):
    """Evaluate ``x**alpha`` componentwise with the convention ``0**0 = 1``.

    Parameters
    ----------
    x : array_like
        Points with last axis of length ``len(alpha)``.
    alpha : sequence of int
        Exponent per coordinate.

    Returns
    -------
    ndarray or scalar of the leading shape of ``x``.
    """
    a = as_index(alpha)
    pts = np.asarray(x)
    if pts.shape[-1] != len(a):
        raise ValueError(f"point dimension {pts.shape[-1]} != index length {len(a)}")
    out = np.ones(pts.shape[:-1], dtype=pts.dtype if pts.dtype.kind == "c" else float)
    for i, ai in enumerate(a):
        if ai:
            out = out * pts[..., i] ** ai
    return out


def indices_of_order(p: int, d: int) -> list[tuple[int, ...]]:
    """All multi-indices of total order exactly ``p`` in ``d`` variables.

    Returned in ascending lexicographic order; the count is
    ``binom(p + d - 1, d - 1)``.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if p < 0:
        raise ValueError("order must be non-negative")
    if d == 1:
        return [(p,)]
    out = []
    for first in range(p + 1):
        out.extend((first,) + rest for rest in indices_of_order(p - first, d - 1))
    return out


def indices_below(n: int, d: int) -> list[tuple[int, ...]]:
    """All multi-indices of total order below ``n``, canonically ordered.

    The count is ``binom(n - 1 + d, d)``.
    """
    if n < 0:
        raise ValueError("order bound must be non-negative")
    return list(chain.from_iterable(indices_of_order(p, d) for p in range(n)))


def count_of_order(p: int, d: int) -> int:
    return math.comb(p + d - 1, d - 1)


def count_below(n: int, d: int) -> int:
    return math.comb(n - 1 + d, d)
