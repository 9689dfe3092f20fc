"""Pure-numpy peak-search kernels (fallback when the extension is absent).

Both implementations must stay bit-identical to the compiled versions in
``_core.pyx``: same strictness rules, same tie handling.

Tie rule on plateaus: a cell survives an exact tie with a neighbour only if
its index tuple is lexicographically smaller, so each flat plateau yields a
deterministic representative.
"""

import numpy as np

NEG_INF = -np.inf


def local_maxima_2d(values, threshold):
    """Indices of strict-ish local maxima of a 2-D map above ``threshold``.

    Axis 0 (rows) is circular, axis 1 (columns) is clipped at the edges.
    The neighbourhood is the 4-connected cross: both circular row
    neighbours at the same column and both column neighbours in the same
    row.  Returns ``(rows, cols)`` int arrays in row-major order.
    """
    v = np.asarray(values, dtype=np.float64)
    m, k = v.shape
    above = v > threshold

    if m > 1:
        up = np.roll(v, 1, axis=0)     # neighbour (i-1) mod m
        down = np.roll(v, -1, axis=0)  # neighbour (i+1) mod m
        row_idx = np.arange(m)[:, None]
        # ties against the row-above neighbour are won only by row 0
        ok_up = (v > up) | ((v == up) & (row_idx == 0))
        # ties against the row-below neighbour are won except by the last row
        ok_down = (v > down) | ((v == down) & (row_idx != m - 1))
        keep = above & ok_up & ok_down
    else:
        keep = above

    left = np.empty_like(v)
    left[:, 0] = NEG_INF
    left[:, 1:] = v[:, :-1]
    right = np.empty_like(v)
    right[:, -1] = NEG_INF
    right[:, :-1] = v[:, 1:]
    keep &= v > left     # ties with the left neighbour are lost
    keep &= v >= right   # ties with the right neighbour are won

    rows, cols = np.nonzero(keep)
    return rows.astype(np.int64), cols.astype(np.int64)


def local_maxima_1d(values, threshold):
    """Indices of local maxima of a 1-D profile above ``threshold``.

    Edges are clipped (an endpoint only competes with its inner
    neighbour); exact ties keep the smaller index.
    """
    v = np.asarray(values, dtype=np.float64)
    n = v.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64)
    left = np.empty_like(v)
    left[0] = NEG_INF
    left[1:] = v[:-1]
    right = np.empty_like(v)
    right[-1] = NEG_INF
    right[:-1] = v[1:]
    keep = (v > threshold) & (v > left) & (v >= right)
    return np.nonzero(keep)[0].astype(np.int64)
