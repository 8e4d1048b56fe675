# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Same contracts and operation order as _pykernels."""
import numpy as np

from libc.math cimport INFINITY
from libc.stdlib cimport malloc, free


cdef extern from *:
    int __builtin_popcountll(unsigned long long)


cdef inline Py_ssize_t _total(const Py_ssize_t[::1] offsets, Py_ssize_t k):
    cdef Py_ssize_t c, t = 1
    for c in range(k):
        t *= offsets[c + 1] - offsets[c]
    return t


def selection_mst_weights(const double[:, ::1] dist, const Py_ssize_t[::1] offsets):
    cdef Py_ssize_t k = offsets.shape[0] - 1
    cdef Py_ssize_t total = _total(offsets, k)
    out = np.zeros(total)
    cdef double[::1] res = out
    if k == 1:
        return out
    cdef Py_ssize_t *pts = <Py_ssize_t *> malloc(k * sizeof(Py_ssize_t))
    cdef double *best = <double *> malloc(k * sizeof(double))
    cdef char *in_tree = <char *> malloc(k * sizeof(char))
    cdef Py_ssize_t s, c, it, v, pick
    cdef double acc, bw, w
    try:
        for c in range(k):
            pts[c] = offsets[c]
        for s in range(total):
            for v in range(k):
                in_tree[v] = 0
                best[v] = dist[pts[0], pts[v]]
            in_tree[0] = 1
            acc = 0.0
            for it in range(k - 1):
                pick = -1
                bw = INFINITY
                for v in range(k):
                    if not in_tree[v] and (pick < 0 or best[v] < bw):
                        pick = v
                        bw = best[v]
                acc = acc + bw
                in_tree[pick] = 1
                for v in range(k):
                    w = dist[pts[pick], pts[v]]
                    if w < best[v]:
                        best[v] = w
            res[s] = acc
            # odometer: last cell is the least significant digit
            c = k - 1
            while c >= 0:
                pts[c] += 1
                if pts[c] < offsets[c + 1]:
                    break
                pts[c] = offsets[c]
                c -= 1
    finally:
        free(pts)
        free(best)
        free(in_tree)
    return out


def selection_tour_weights(const double[:, ::1] dist, const Py_ssize_t[::1] offsets):
    cdef Py_ssize_t k = offsets.shape[0] - 1
    cdef Py_ssize_t total = _total(offsets, k)
    out = np.zeros(total)
    cdef double[::1] res = out
    if k == 1:
        return out
    cdef Py_ssize_t m = k - 1
    cdef Py_ssize_t full = (1 << m) - 1
    cdef Py_ssize_t *pts = <Py_ssize_t *> malloc(k * sizeof(Py_ssize_t))
    cdef double *dp = <double *> malloc((full + 1) * m * sizeof(double))
    cdef Py_ssize_t s, c, j, i, mask, prev
    cdef double bestv, cand
    try:
        for c in range(k):
            pts[c] = offsets[c]
        for s in range(total):
            for j in range(m):
                dp[(1 << j) * m + j] = dist[pts[0], pts[j + 1]]
            for mask in range(1, full + 1):
                if (mask & (mask - 1)) == 0:
                    continue
                for j in range(m):
                    if not (mask >> j) & 1:
                        continue
                    prev = mask ^ (1 << j)
                    bestv = INFINITY
                    for i in range(m):
                        if (prev >> i) & 1:
                            cand = dp[prev * m + i] + dist[pts[i + 1], pts[j + 1]]
                            if cand < bestv:
                                bestv = cand
                    dp[mask * m + j] = bestv
            bestv = INFINITY
            for j in range(m):
                cand = dp[full * m + j] + dist[pts[j + 1], pts[0]]
                if cand < bestv:
                    bestv = cand
            res[s] = bestv
            c = k - 1
            while c >= 0:
                pts[c] += 1
                if pts[c] < offsets[c + 1]:
                    break
                pts[c] = offsets[c]
                c -= 1
    finally:
        free(pts)
        free(dp)
    return out


def prufer_dp_weights(const double[:, ::1] dist, const Py_ssize_t[::1] offsets):
    cdef Py_ssize_t k = offsets.shape[0] - 1
    if k < 2:
        raise ValueError("prufer_dp_weights needs k >= 2")
    cdef Py_ssize_t n = offsets[k]
    cdef Py_ssize_t L = k - 2
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t t
    for t in range(L):
        total *= k
    out = np.empty(total)
    cdef double[::1] res = out
    cdef Py_ssize_t *seq = <Py_ssize_t *> malloc((L + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *deg = <Py_ssize_t *> malloc(k * sizeof(Py_ssize_t))
    cdef double *W = <double *> malloc(n * sizeof(double))
    cdef Py_ssize_t r, v, leaf, s, p, q, u, c
    cdef double mn, cand
    try:
        for t in range(L):
            seq[t] = 0
        for r in range(total):
            for v in range(k):
                deg[v] = 1
            for t in range(L):
                deg[seq[t]] += 1
            for p in range(n):
                W[p] = 0.0
            for t in range(L):
                leaf = 0
                while deg[leaf] != 1:
                    leaf += 1
                s = seq[t]
                deg[leaf] -= 1
                deg[s] -= 1
                for p in range(offsets[s], offsets[s + 1]):
                    mn = INFINITY
                    for q in range(offsets[leaf], offsets[leaf + 1]):
                        cand = dist[p, q] + W[q]
                        if cand < mn:
                            mn = cand
                    W[p] = W[p] + mn
            u = 0
            while deg[u] != 1:
                u += 1
            v = u + 1
            while deg[v] != 1:
                v += 1
            mn = INFINITY
            for p in range(offsets[u], offsets[u + 1]):
                for q in range(offsets[v], offsets[v + 1]):
                    cand = (dist[p, q] + W[q]) + W[p]
                    if cand < mn:
                        mn = cand
            res[r] = mn
            c = L - 1
            while c >= 0:
                seq[c] += 1
                if seq[c] < k:
                    break
                seq[c] = 0
                c -= 1
    finally:
        free(seq)
        free(deg)
        free(W)
    return out


def matching_dp(const double[:, ::1] d):
    cdef Py_ssize_t m = d.shape[0]
    if m % 2:
        raise ValueError("odd node count")
    cdef Py_ssize_t size = 1 << m
    cdef Py_ssize_t full = size - 1
    f_arr = np.full(size, np.inf)
    arg_arr = np.full(size, -1, dtype=np.intp)
    cdef double[::1] f = f_arr
    cdef Py_ssize_t[::1] arg = arg_arr
    cdef Py_ssize_t mask, i, j, rest, r
    cdef double best, cand
    f[0] = 0.0
    for mask in range(1, size):
        if __builtin_popcountll(mask) & 1:
            continue
        i = 0
        while not (mask >> i) & 1:
            i += 1
        rest = mask ^ (1 << i)
        best = INFINITY
        r = -1
        for j in range(i + 1, m):
            if (rest >> j) & 1:
                cand = d[i, j] + f[rest ^ (1 << j)]
                if cand < best:
                    best = cand
                    r = j
        f[mask] = best
        arg[mask] = r
    pairs = []
    mask = full
    while mask:
        i = 0
        while not (mask >> i) & 1:
            i += 1
        j = arg[mask]
        pairs.append((i, j))
        mask ^= (1 << i) | (1 << j)
    return float(f[full]), pairs
