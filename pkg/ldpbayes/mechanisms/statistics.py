"""Per-record sufficient statistics released by the regression clients.

Each statistic coordinate is a weighted product u_i * u_j of the augmented
record u = (x_1, ..., x_d, y). Cross products x_j x_k (j < k) carry weight
sqrt(2), which makes the second-order block an isometric image of x x^T.

Layouts:
    linear:   [x_j^2, sqrt(2) x_j x_k, x_j y, y^2]
    logistic: [x_j^2, sqrt(2) x_j x_k, y x_j]    with y mapped to {-1, 1}
"""

import math

import numpy as np

from ldpbayes.utils.errors import InvalidParameterError

LAYOUTS = ("linear", "logistic")


def _check(layout):
    if layout not in LAYOUTS:
        raise InvalidParameterError(f"unknown statistic layout {layout!r}")


def statistic_pairs(d, layout):
    """Index pairs into u and their weights, in release order."""
    _check(layout)
    pairs = [(j, j, 1.0) for j in range(d)]
    pairs += [(j, k, math.sqrt(2.0)) for j in range(d) for k in range(j + 1, d)]
    pairs += [(j, d, 1.0) for j in range(d)]
    if layout == "linear":
        pairs.append((d, d, 1.0))
    rows, cols, weights = zip(*pairs, strict=True)
    return np.array(rows), np.array(cols), np.array(weights)


def statistic_dim(d, layout):
    _check(layout)
    second = d * (d + 1) // 2
    return second + d + (1 if layout == "linear" else 0)


def statistic_blocks(d, layout):
    """Block label per coordinate: 'xx', 'xy' or 'yy'."""
    second = d * (d + 1) // 2
    blocks = ["xx"] * second + ["xy"] * d
    if layout == "linear":
        blocks.append("yy")
    return blocks


def sufficient_statistic(x, y, layout):
    """Statistic for one record, or row-wise for x of shape (n, d)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if layout == "logistic":
        y = 2.0 * y - 1.0
    d = x.shape[-1]
    u = np.concatenate([x, y[..., None]], axis=-1)
    rows, cols, weights = statistic_pairs(d, layout)
    return u[..., rows] * u[..., cols] * weights
