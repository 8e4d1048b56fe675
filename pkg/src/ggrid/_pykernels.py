"""Pure numpy implementations of the hot kernels.

Each function mirrors one in ``_ckernels.pyx`` and performs the same
floating-point operations in the same order, so both backends return
bit-identical weights. Work is batched over selections (or trees) so the
Python-level loop count does not grow with the batch.

Layout shared by all kernels: ``dist`` is the distance matrix of the points
in cell-grouped ("packed") order and cell ``c`` owns rows
``offsets[c]:offsets[c+1]``. A selection is one point per cell, enumerated
lexicographically with cell 0 as the most significant digit.
"""
from __future__ import annotations

import math

import numpy as np

_BATCH_ELEMS = 1 << 22


def _selection_points(offsets: np.ndarray, start: int, stop: int) -> np.ndarray:
    sizes = np.diff(offsets)
    digits = np.unravel_index(np.arange(start, stop), tuple(int(s) for s in sizes))
    return np.stack(digits, axis=1) + offsets[:-1]


def selection_mst_weights(dist: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """MST weight (Prim from cell 0) of every selection."""
    sizes = np.diff(offsets)
    k = len(sizes)
    total = math.prod(int(s) for s in sizes)
    out = np.zeros(total)
    if k == 1:
        return out
    batch = max(1, _BATCH_ELEMS // (k * k))
    for start in range(0, total, batch):
        stop = min(total, start + batch)
        pts = _selection_points(offsets, start, stop)
        D = dist[pts[:, :, None], pts[:, None, :]]
        rows = np.arange(stop - start)
        best = D[:, 0, :].copy()
        in_tree = np.zeros((stop - start, k), dtype=bool)
        in_tree[:, 0] = True
        acc = np.zeros(stop - start)
        for _ in range(k - 1):
            masked = np.where(in_tree, np.inf, best)
            v = np.argmin(masked, axis=1)
            acc = acc + masked[rows, v]
            in_tree[rows, v] = True
            best = np.minimum(best, D[rows, v, :])
        out[start:stop] = acc
    return out


def _bits(mask: int) -> list[int]:
    return [b for b in range(mask.bit_length()) if mask >> b & 1]


def selection_tour_weights(dist: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Optimal tour weight of every selection (Held-Karp rooted at cell 0)."""
    sizes = np.diff(offsets)
    k = len(sizes)
    total = math.prod(int(s) for s in sizes)
    out = np.zeros(total)
    if k == 1:
        return out
    m = k - 1
    full = (1 << m) - 1
    masks = [(mask, _bits(mask)) for mask in range(1, full + 1)]
    batch = max(1, _BATCH_ELEMS // ((1 << m) * m + k * k))
    for start in range(0, total, batch):
        stop = min(total, start + batch)
        pts = _selection_points(offsets, start, stop)
        D = dist[pts[:, :, None], pts[:, None, :]]
        dp = np.full((stop - start, full + 1, m), np.inf)
        for j in range(m):
            dp[:, 1 << j, j] = D[:, 0, j + 1]
        for mask, bits in masks:
            if len(bits) < 2:
                continue
            for j in bits:
                prev = mask ^ (1 << j)
                js = _bits(prev)
                cand = dp[:, prev, js] + D[:, np.array(js) + 1, j + 1]
                dp[:, mask, j] = cand.min(axis=1)
        out[start:stop] = (dp[:, full, :] + D[:, 1:, 0]).min(axis=1)
    return out


def prufer_dp_weights(dist: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Best realization weight of every cell tree, indexed by Prüfer rank.

    The DP follows the Prüfer leaf-elimination order: removing leaf ``l``
    attached to ``s`` folds ``min_q W[q] + d(p, q)`` into every ``W[p]`` of
    ``s``, and the final edge closes the tree.
    """
    sizes = np.diff(offsets)
    k = len(sizes)
    if k < 2:
        raise ValueError("prufer_dp_weights needs k >= 2")
    P = int(sizes.max())
    dpad = np.full((k, k, P, P), np.inf)
    for a in range(k):
        for b in range(k):
            if a != b:
                dpad[a, b, : sizes[a], : sizes[b]] = dist[
                    offsets[a] : offsets[a + 1], offsets[b] : offsets[b + 1]
                ]
    total = k ** (k - 2)
    out = np.empty(total)
    batch = max(1, _BATCH_ELEMS // (k * P * P))
    for start in range(0, total, batch):
        stop = min(total, start + batch)
        B = stop - start
        rows = np.arange(B)
        if k > 2:
            seqs = np.stack(np.unravel_index(np.arange(start, stop), (k,) * (k - 2)), axis=1)
        else:
            seqs = np.zeros((B, 0), dtype=np.intp)
        deg = np.ones((B, k), dtype=np.intp)
        for t in range(k - 2):
            deg[rows, seqs[:, t]] += 1
        W = np.zeros((B, k, P))
        for t in range(k - 2):
            leaf = np.argmax(deg == 1, axis=1)
            s = seqs[:, t]
            deg[rows, leaf] -= 1
            deg[rows, s] -= 1
            fold = (dpad[s, leaf] + W[rows, leaf][:, None, :]).min(axis=2)
            W[rows, s] = W[rows, s] + fold
        _, cols = np.nonzero(deg == 1)
        cols = cols.reshape(B, 2)
        u, v = cols[:, 0], cols[:, 1]
        closing = (dpad[u, v] + W[rows, v][:, None, :]) + W[rows, u][:, :, None]
        out[start:stop] = closing.reshape(B, -1).min(axis=1)
    return out


def matching_dp(d: np.ndarray) -> tuple[float, list[tuple[int, int]]]:
    """Minimum perfect matching of ``len(d)`` (even) nodes by subset DP.

    The lowest unmatched node is paired first; partners are tried in
    ascending order and only a strict improvement replaces the incumbent.
    """
    m = len(d)
    if m % 2:
        raise ValueError("odd node count")
    memo: dict[int, tuple[float, int]] = {0: (0.0, -1)}

    def solve(mask: int) -> float:
        hit = memo.get(mask)
        if hit is not None:
            return hit[0]
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        best, arg = math.inf, -1
        r = rest
        while r:
            j = (r & -r).bit_length() - 1
            r ^= 1 << j
            cand = float(d[i][j]) + solve(rest ^ (1 << j))
            if cand < best:
                best, arg = cand, j
        memo[mask] = (best, arg)
        return best

    full = (1 << m) - 1
    weight = solve(full)
    pairs = []
    mask = full
    while mask:
        i = (mask & -mask).bit_length() - 1
        j = memo[mask][1]
        pairs.append((i, j))
        mask ^= (1 << i) | (1 << j)
    return weight, pairs
