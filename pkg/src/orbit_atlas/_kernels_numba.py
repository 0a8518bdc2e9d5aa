"""Numba-jitted enumeration kernels: the default backend.

Same contract as the numpy module: level-synchronous BFS over packed matrix
keys with a uint64 visited bitset.  Frontier expansion runs in nogil kernels
so a thread pool can split large frontiers; marking stays sequential, which
keeps the partition byte-identical for every worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor, wait

import numpy as np
from numba import njit

# splitting tiny frontiers across threads costs more than it saves
_PAR_MIN_FRONTIER = 2048


@njit(cache=True, nogil=True)
def _expand_range(frontier, lo, hi, kinds, tvals, add_t, mul_t, neg_t, S, out):
    S2 = S * S
    S3 = S2 * S
    G = kinds.shape[0]
    for i in range(lo, hi):
        k = frontier[i]
        a = k // S3
        rem = k - a * S3
        b = rem // S2
        rem -= b * S2
        c = rem // S
        d = rem - c * S
        base = i * G
        for g in range(G):
            t = tvals[g]
            if kinds[g] == 0:
                tc = mul_t[t, c]
                na = add_t[a, tc]
                dma = add_t[d, neg_t[a]]
                nb = add_t[b, add_t[mul_t[t, dma], neg_t[mul_t[t, tc]]]]
                nc = c
                nd = add_t[d, neg_t[tc]]
            else:
                sb = mul_t[t, b]
                na = add_t[a, neg_t[sb]]
                nb = b
                amd = add_t[a, neg_t[d]]
                nc = add_t[c, add_t[mul_t[t, amd], neg_t[mul_t[t, sb]]]]
                nd = add_t[d, sb]
            out[base + g] = ((na * S + nb) * S + nc) * S + nd
    return 0


@njit(cache=True, nogil=True)
def _mark_new(cands, count, visited, nxt):
    fl = 0
    one = np.uint64(1)
    zero = np.uint64(0)
    for i in range(count):
        k = cands[i]
        w = k >> 6
        bit = one << np.uint64(k & 63)
        if visited[w] & bit == zero:
            visited[w] |= bit
            nxt[fl] = k
            fl += 1
    return fl


@njit(cache=True, nogil=True)
def _set_bit(visited, k):
    visited[k >> 6] |= np.uint64(1) << np.uint64(k & 63)


@njit(cache=True, nogil=True)
def _next_unvisited(visited, start):
    # padding bits are preset, so the scan stops inside the state range
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    one = np.uint64(1)
    zero = np.uint64(0)
    nwords = visited.shape[0]
    w = start >> 6
    if w < nwords and visited[w] != full:
        word = visited[w]
        for s in range(start & 63, 64):
            if word >> np.uint64(s) & one == zero:
                return (w << 6) + s
    w += 1
    while w < nwords:
        if visited[w] != full:
            word = visited[w]
            for s in range(64):
                if word >> np.uint64(s) & one == zero:
                    return (w << 6) + s
        w += 1
    return -1


def _make_visited(n_states: int) -> np.ndarray:
    nwords = (n_states + 63) >> 6
    v = np.zeros(nwords, dtype=np.uint64)
    extra = nwords * 64 - n_states
    if extra:
        v[-1] = np.uint64(((1 << extra) - 1) << (64 - extra))
    return v


class _Buffers:
    """Reusable frontier/candidate buffers, grown by doubling."""

    def __init__(self, G: int):
        self.G = G
        cap = 4096
        self.frontier = np.empty(cap, dtype=np.int64)
        self.nxt = np.empty(cap, dtype=np.int64)
        self.cands = np.empty(cap * G, dtype=np.int64)

    def ensure(self, flen: int):
        need = flen * self.G
        if need > self.cands.size:
            size = self.cands.size
            while size < need:
                size *= 2
            self.cands = np.empty(size, dtype=np.int64)
        if self.nxt.size < self.cands.size:
            self.nxt = np.empty(self.cands.size, dtype=np.int64)


def _expand(buffers, flen, kinds, tvals, add_t, mul_t, neg_t, S, pool, threads):
    buffers.ensure(flen)
    f, out = buffers.frontier, buffers.cands
    if pool is None or flen < _PAR_MIN_FRONTIER:
        _expand_range(f, 0, flen, kinds, tvals, add_t, mul_t, neg_t, S, out)
        return
    step = (flen + threads - 1) // threads
    futures = [
        pool.submit(_expand_range, f, lo, min(lo + step, flen), kinds, tvals, add_t, mul_t, neg_t, S, out)
        for lo in range(0, flen, step)
    ]
    wait(futures)
    for fut in futures:
        fut.result()


def _bfs(seed, visited, buffers, kinds, tvals, add_t, mul_t, neg_t, S, pool, threads, collect):
    _set_bit(visited, seed)
    buffers.frontier[0] = seed
    flen = 1
    size = 1
    pieces = [np.array([seed], dtype=np.int64)] if collect else None
    while flen:
        _expand(buffers, flen, kinds, tvals, add_t, mul_t, neg_t, S, pool, threads)
        newlen = _mark_new(buffers.cands, flen * buffers.G, visited, buffers.nxt)
        buffers.frontier, buffers.nxt = buffers.nxt, buffers.frontier
        flen = newlen
        size += newlen
        if collect and newlen:
            pieces.append(buffers.frontier[:newlen].copy())
    members = np.sort(np.concatenate(pieces)) if collect else None
    return size, members


def partition(add_t, mul_t, neg_t, S, kinds, tvals, threads=1):
    visited = _make_visited(S**4)
    buffers = _Buffers(len(kinds))
    reps, sizes = [], []
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        seed = _next_unvisited(visited, 0)
        while seed >= 0:
            size, _ = _bfs(
                seed, visited, buffers, kinds, tvals, add_t, mul_t, neg_t, S, pool, threads, collect=False
            )
            reps.append(seed)
            sizes.append(size)
            seed = _next_unvisited(visited, seed + 1)
    finally:
        if pool is not None:
            pool.shutdown()
    return np.asarray(reps, dtype=np.int64), np.asarray(sizes, dtype=np.int64)


def orbit(add_t, mul_t, neg_t, S, kinds, tvals, seed, threads=1):
    visited = _make_visited(S**4)
    buffers = _Buffers(len(kinds))
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        _, members = _bfs(
            seed, visited, buffers, kinds, tvals, add_t, mul_t, neg_t, S, pool, threads, collect=True
        )
    finally:
        if pool is not None:
            pool.shutdown()
    return members
