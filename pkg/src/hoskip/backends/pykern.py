"""Pure-numpy reference implementations of the two hot kernels.

These are the fallback twins of the compiled extension; both backends must
agree to floating-point noise.  Kept free of any project imports so either
module can be loaded in isolation.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def deficit_sum(coeff, w_beta, y, out=None):
    """Evaluate sum_j coeff[j] * y / (y + w_beta[j]) for a batch of y.

    ``coeff`` and ``w_beta`` are the per-node weight and path-loss factor of
    a fixed quadrature discretization; ``y`` is a 1-D batch.  Returns an
    array shaped like ``y``.
    """
    y = np.asarray(y, dtype=float)
    out_ = y[:, None] / (y[:, None] + w_beta[None, :]) @ coeff
    if out is None:
        return out_
    out[:] = out_
    return out


def segment_change_count(px, py, x0, y0, ux, uy, step, n_steps):
    """Count nearest-point identity changes along a discretized segment.

    The walk starts at (x0, y0), advances ``step`` in direction (ux, uy)
    per move, and makes ``n_steps`` moves.  At each of the n_steps + 1
    positions the nearest of the points (px, py) is found (first index wins
    ties); the return value is the number of consecutive positions whose
    nearest index differs.
    """
    if len(px) == 0:
        return 0
    i = np.arange(n_steps + 1)
    xs = x0 + i * (step * ux)
    ys = y0 + i * (step * uy)
    d2 = (xs[:, None] - px[None, :]) ** 2 + (ys[:, None] - py[None, :]) ** 2
    idx = np.argmin(d2, axis=1)
    return int(np.count_nonzero(np.diff(idx)))
