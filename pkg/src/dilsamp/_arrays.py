"""Small array-shape helpers shared across modules."""
from __future__ import annotations

import numpy as np


def as_points(x, d: int) -> np.ndarray:
    """Coerce ``x`` to an array of points with last axis ``d``.

    Scalars and plain 1-d arrays are accepted when ``d == 1``.
    """
    a = np.asarray(x)
    if a.ndim == 0:
        if d != 1:
            raise ValueError(f"scalar point given for dimension {d}")
        return a.reshape(1)
    if a.shape[-1] != d:
        if d == 1:
            return a[..., None]
        raise ValueError(f"point array with last axis {a.shape[-1]}, expected {d}")
    return a


def as_index(alpha) -> tuple[int, ...]:
    """Coerce to a tuple multi-index and validate non-negativity."""
    t = tuple(int(a) for a in np.atleast_1d(alpha))
    if any(a < 0 for a in t):
        raise ValueError(f"multi-index must be non-negative, got {t}")
    return t
