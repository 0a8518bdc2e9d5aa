"""Pure-numpy enumeration kernels: the fallback backend.

Matrices are packed base-|R| into int64 keys ((a*S + b)*S + c)*S + d and a
visited bitset (uint64 words) tracks the BFS closure under elementary
unipotent conjugation.  The numba backend implements the same contract; both
must produce identical partitions.
"""

from __future__ import annotations

import numpy as np

_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)


def decode_keys(keys, S):
    S2, S3 = S * S, S * S * S
    a = keys // S3
    rem = keys - a * S3
    b = rem // S2
    rem = rem - b * S2
    c = rem // S
    d = rem - c * S
    return a, b, c, d


def encode_keys(a, b, c, d, S):
    return ((a * S + b) * S + c) * S + d


def conj_batch(kind, t, a, b, c, d, add_t, mul_t, neg_t):
    """Closed-form elementary conjugation on decoded entry arrays."""
    if kind == 0:  # U(t): a+tc, b+t(d-a)-t^2*c, c, d-tc
        tc = mul_t[t, c]
        na = add_t[a, tc]
        dma = add_t[d, neg_t[a]]
        nb = add_t[b, add_t[mul_t[t, dma], neg_t[mul_t[t, tc]]]]
        nc = c
        nd = add_t[d, neg_t[tc]]
    else:  # L(s): a-sb, b, c+s(a-d)-s^2*b, d+sb
        sb = mul_t[t, b]
        na = add_t[a, neg_t[sb]]
        nb = b
        amd = add_t[a, neg_t[d]]
        nc = add_t[c, add_t[mul_t[t, amd], neg_t[mul_t[t, sb]]]]
        nd = add_t[d, sb]
    return na, nb, nc, nd


def make_visited(n_states: int) -> np.ndarray:
    """Bitset with the padding bits of the last word pre-set."""
    nwords = (n_states + 63) >> 6
    v = np.zeros(nwords, dtype=np.uint64)
    extra = nwords * 64 - n_states
    if extra:
        v[-1] = np.uint64(((1 << extra) - 1) << (64 - extra))
    return v


def _set_bit(visited, k: int):
    visited[k >> 6] |= np.uint64(1) << np.uint64(k & 63)


def _expand(frontier, kinds, tvals, add_t, mul_t, neg_t, S):
    a, b, c, d = decode_keys(frontier, S)
    out = np.empty((len(kinds), frontier.size), dtype=np.int64)
    for g in range(len(kinds)):
        na, nb, nc, nd = conj_batch(int(kinds[g]), int(tvals[g]), a, b, c, d, add_t, mul_t, neg_t)
        out[g] = encode_keys(na, nb, nc, nd, S)
    return out.ravel()


def _mark_new(cands, visited):
    u = np.unique(cands)
    w = u >> 6
    m = np.uint64(1) << (u & 63).astype(np.uint64)
    fresh = (visited[w] & m) == 0
    w, m, u = w[fresh], m[fresh], u[fresh]
    np.bitwise_or.at(visited, w, m)
    return u


def next_unvisited(visited, start: int) -> int:
    """First clear bit at or after start; padding bits are preset, so the
    scan cannot run past the state count."""
    w = start >> 6
    nwords = visited.size
    # finish the word the cursor points into
    if w < nwords and visited[w] != _FULL:
        word = int(visited[w])
        for s in range(start & 63, 64):
            if not (word >> s) & 1:
                return (w << 6) + s
    w += 1
    while w < nwords:
        chunk = visited[w : w + 8192]
        hits = np.flatnonzero(chunk != _FULL)
        if hits.size:
            w += int(hits[0])
            word = int(visited[w])
            for s in range(64):
                if not (word >> s) & 1:
                    return (w << 6) + s
        w += chunk.size
    return -1


def _bfs(seed, visited, kinds, tvals, add_t, mul_t, neg_t, S, collect):
    _set_bit(visited, seed)
    frontier = np.array([seed], dtype=np.int64)
    pieces = [frontier] if collect else None
    size = 1
    while frontier.size:
        cands = _expand(frontier, kinds, tvals, add_t, mul_t, neg_t, S)
        frontier = _mark_new(cands, visited)
        size += frontier.size
        if collect:
            pieces.append(frontier)
    members = np.sort(np.concatenate(pieces)) if collect else None
    return size, members


def partition(add_t, mul_t, neg_t, S, kinds, tvals, threads=1):
    """Orbit partition of all S^4 keys; threads are accepted for interface
    parity but this backend is single-threaded (output is identical)."""
    visited = make_visited(S**4)
    reps, sizes = [], []
    seed = next_unvisited(visited, 0)
    while seed >= 0:
        size, _ = _bfs(seed, visited, kinds, tvals, add_t, mul_t, neg_t, S, collect=False)
        reps.append(seed)
        sizes.append(size)
        seed = next_unvisited(visited, seed + 1)
    return np.asarray(reps, dtype=np.int64), np.asarray(sizes, dtype=np.int64)


def orbit(add_t, mul_t, neg_t, S, kinds, tvals, seed, threads=1):
    visited = make_visited(S**4)
    _, members = _bfs(seed, visited, kinds, tvals, add_t, mul_t, neg_t, S, collect=True)
    return members
