"""Grid graph kernels with a numba path and a numpy/scipy fallback.

Both kernels operate on a boolean mask over a 2-D lattice and a list of
integer neighbour offsets ``(dx, dy)``.  The offset list must be closed
under negation.  Arrays are indexed ``[y, x]``.

The backend is chosen once at import time.  Set ``FRACSQ_NUMBA=0`` to force
the fallback (useful for benchmarking and for platforms without numba).
Both backends return identical arrays.
"""
import os

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("FRACSQ_NUMBA", "1") != "0"
BACKEND = "numba" if USE_NUMBA else "numpy"


def _bfs_loop(mask, sources, offsets):
    h, w = mask.shape
    flat = mask.ravel()
    dist = np.full(h * w, -1, dtype=np.int32)
    queue = np.empty(h * w, dtype=np.int64)
    head = 0
    tail = 0
    for s in sources:
        if flat[s] and dist[s] < 0:
            dist[s] = 0
            queue[tail] = s
            tail += 1
    while head < tail:
        cur = queue[head]
        head += 1
        cy = cur // w
        cx = cur - cy * w
        for i in range(offsets.shape[0]):
            nx = cx + offsets[i, 0]
            ny = cy + offsets[i, 1]
            if nx < 0 or ny < 0 or nx >= w or ny >= h:
                continue
            nxt = ny * w + nx
            if flat[nxt] and dist[nxt] < 0:
                dist[nxt] = dist[cur] + 1
                queue[tail] = nxt
                tail += 1
    return dist.reshape(h, w)


def _label_loop(mask, offsets):
    h, w = mask.shape
    flat = mask.ravel()
    labels = np.full(h * w, -1, dtype=np.int32)
    stack = np.empty(h * w, dtype=np.int64)
    count = 0
    for start in range(h * w):
        if not flat[start] or labels[start] >= 0:
            continue
        labels[start] = count
        top = 0
        stack[top] = start
        top += 1
        while top > 0:
            top -= 1
            cur = stack[top]
            cy = cur // w
            cx = cur - cy * w
            for i in range(offsets.shape[0]):
                nx = cx + offsets[i, 0]
                ny = cy + offsets[i, 1]
                if nx < 0 or ny < 0 or nx >= w or ny >= h:
                    continue
                nxt = ny * w + nx
                if flat[nxt] and labels[nxt] < 0:
                    labels[nxt] = count
                    stack[top] = nxt
                    top += 1
        count += 1
    return labels.reshape(h, w), count


if HAVE_NUMBA:
    bfs_distances_numba = numba.njit(cache=True)(_bfs_loop)
    label_components_numba = numba.njit(cache=True)(_label_loop)
else:  # pragma: no cover
    bfs_distances_numba = None
    label_components_numba = None


def _adjacency(mask, offsets):
    """Sparse symmetric adjacency over the flat indices of ``mask``."""
    h, w = mask.shape
    idx = np.arange(h * w).reshape(h, w)
    rows, cols = [], []
    for dx, dy in offsets:
        # a -> a + (dx, dy), both endpoints inside the grid and the mask
        ys = slice(max(0, -dy), h - max(0, dy))
        xs = slice(max(0, -dx), w - max(0, dx))
        yt = slice(max(0, dy), h - max(0, -dy))
        xt = slice(max(0, dx), w - max(0, -dx))
        both = mask[ys, xs] & mask[yt, xt]
        rows.append(idx[ys, xs][both])
        cols.append(idx[yt, xt][both])
    r = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
    c = np.concatenate(cols) if cols else np.empty(0, dtype=np.int64)
    data = np.ones(len(r), dtype=np.int8)
    return sparse.csr_matrix((data, (r, c)), shape=(h * w, h * w))


def bfs_distances_numpy(mask, sources, offsets):
    h, w = mask.shape
    flat = mask.ravel()
    src = np.asarray([s for s in sources if flat[s]], dtype=np.int64)
    dist = np.full(h * w, -1, dtype=np.int32)
    if len(src) == 0:
        return dist.reshape(h, w)
    adj = _adjacency(mask, offsets)
    # super-source at index h*w joined to every seed
    n = h * w + 1
    extra_r = np.full(len(src), h * w)
    coo = adj.tocoo()
    adj = sparse.csr_matrix(
        (
            np.concatenate([coo.data, np.ones(2 * len(src), dtype=np.int8)]),
            (np.concatenate([coo.row, extra_r, src]), np.concatenate([coo.col, src, extra_r])),
        ),
        shape=(n, n),
    )
    d = csgraph.shortest_path(adj, unweighted=True, indices=h * w, directed=False)
    reach = np.isfinite(d[:-1])
    dist[reach] = d[:-1][reach].astype(np.int32) - 1
    return dist.reshape(h, w)


def label_components_numpy(mask, offsets):
    h, w = mask.shape
    adj = _adjacency(mask, offsets)
    _, raw = csgraph.connected_components(adj, directed=False)
    flat = mask.ravel()
    labels = np.full(h * w, -1, dtype=np.int32)
    # renumber in order of first appearance so both backends agree
    seen = raw[flat]
    _, first = np.unique(seen, return_index=True)
    order = np.argsort(first)
    remap = np.empty(order.size, dtype=np.int32)
    remap[order] = np.arange(order.size, dtype=np.int32)
    uniq = np.unique(seen)
    labels[flat] = remap[np.searchsorted(uniq, seen)]
    return labels.reshape(h, w), int(order.size)


def _as_offsets(offsets):
    arr = np.asarray(sorted(set(map(tuple, offsets)) - {(0, 0)}), dtype=np.int64)
    return arr.reshape(-1, 2)


def bfs_distances(mask, sources, offsets):
    """Multi-source BFS distances inside ``mask``; -1 marks unreachable cells.

    ``sources`` are flat (row-major) indices; seeds outside the mask are ignored.
    """
    mask = np.ascontiguousarray(mask, dtype=np.bool_)
    src = np.asarray(sources, dtype=np.int64).ravel()
    offs = _as_offsets(offsets)
    if USE_NUMBA:
        return bfs_distances_numba(mask, src, offs)
    return bfs_distances_numpy(mask, src, offs)


def label_components(mask, offsets):
    """Connected components of ``mask``; labels numbered by first row-major cell."""
    mask = np.ascontiguousarray(mask, dtype=np.bool_)
    offs = _as_offsets(offsets)
    if USE_NUMBA:
        labels, count = label_components_numba(mask, offs)
        return labels, int(count)
    return label_components_numpy(mask, offs)


FOUR = ((1, 0), (-1, 0), (0, 1), (0, -1))
EIGHT = FOUR + ((1, 1), (-1, -1), (1, -1), (-1, 1))
