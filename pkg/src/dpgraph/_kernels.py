"""Compiled inner loops for graph construction and search.

Everything here is deliberately serial and branch-simple so builds and
searches are bit-reproducible: distances accumulate in float64, are
quantized to float32, and all ordering comparisons happen on the float32
values with ties broken by ascending id.  Keep every graph-edge distance
computation routed through these kernels so identical point pairs always
produce bitwise-identical stored distances.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _dist(data, a, b):
    acc = 0.0
    for j in range(data.shape[1]):
        diff = np.float64(data[a, j]) - np.float64(data[b, j])
        acc += diff * diff
    return np.float32(np.sqrt(acc))


@njit(cache=True, inline="always")
def _query_dist(data, i, query):
    acc = 0.0
    for j in range(data.shape[1]):
        diff = np.float64(data[i, j]) - np.float64(query[j])
        acc += diff * diff
    return np.float32(np.sqrt(acc))


@njit(cache=True)
def pair_distances(data, left, right):
    """Float32 distances for an array of (left[i], right[i]) row pairs."""
    out = np.empty(left.shape[0], dtype=np.float32)
    for t in range(left.shape[0]):
        out[t] = _dist(data, left[t], right[t])
    return out


@njit(cache=True)
def query_distances(data, query):
    """Float32 distances from every row of data to one query vector."""
    out = np.empty(data.shape[0], dtype=np.float32)
    for i in range(data.shape[0]):
        out[i] = _query_dist(data, i, query)
    return out


@njit(cache=True, inline="always")
def _insert_neighbor(ids, dists, flags, cand, d):
    """Checked push of cand into one sorted bounded neighbor row.

    The row is ordered ascending by (dist, id).  Returns 1 when cand was
    inserted, 0 when it was rejected as too far or already present.  The
    duplicate scan only needs the prefix with dist <= d because a given
    pair of points always hashes to the same float32 distance.
    """
    size = ids.shape[0]
    last = size - 1
    if d > dists[last] or (d == dists[last] and cand >= ids[last]):
        return 0
    pos = size
    for i in range(size):
        di = dists[i]
        if di > d or (di == d and ids[i] > cand):
            pos = i
            break
        if ids[i] == cand:
            return 0
    for i in range(last, pos, -1):
        ids[i] = ids[i - 1]
        dists[i] = dists[i - 1]
        flags[i] = flags[i - 1]
    ids[pos] = cand
    dists[pos] = d
    flags[pos] = np.uint8(1)
    return 1


@njit(cache=True)
def local_join(data, ids, dists, flags, new_lists, old_lists):
    """One round of local joins; returns the number of row updates.

    new_lists and old_lists hold per-node candidate ids with -1 padding.
    Every new-new pair (once) and every new-old pair is tried in both
    directions against the corresponding neighbor rows.
    """
    n = new_lists.shape[0]
    width_new = new_lists.shape[1]
    width_old = old_lists.shape[1]
    updates = 0
    for v in range(n):
        for i in range(width_new):
            u1 = new_lists[v, i]
            if u1 < 0:
                continue
            for j in range(i + 1, width_new):
                u2 = new_lists[v, j]
                if u2 < 0 or u2 == u1:
                    continue
                d = _dist(data, u1, u2)
                updates += _insert_neighbor(ids[u1], dists[u1], flags[u1], u2, d)
                updates += _insert_neighbor(ids[u2], dists[u2], flags[u2], u1, d)
            for j in range(width_old):
                u2 = old_lists[v, j]
                if u2 < 0 or u2 == u1:
                    continue
                d = _dist(data, u1, u2)
                updates += _insert_neighbor(ids[u1], dists[u1], flags[u1], u2, d)
                updates += _insert_neighbor(ids[u2], dists[u2], flags[u2], u1, d)
    return updates


@njit(cache=True, inline="always")
def _pool_insert(pool_ids, pool_dists, pool_state, size, cand, d):
    """Insert cand into the bounded search pool, keeping (dist, id) order.

    pool_state is 0 for unexplored entries and 1 for explored ones; states
    travel with their entries.  Returns the new pool size.
    """
    cap = pool_ids.shape[0]
    if size == cap:
        last = size - 1
        if d > pool_dists[last] or (d == pool_dists[last] and cand >= pool_ids[last]):
            return size
    pos = size
    for i in range(size):
        di = pool_dists[i]
        if di > d or (di == d and pool_ids[i] > cand):
            pos = i
            break
    if pos == cap:
        return size
    end = size if size < cap else cap - 1
    for i in range(end, pos, -1):
        pool_ids[i] = pool_ids[i - 1]
        pool_dists[i] = pool_dists[i - 1]
        pool_state[i] = pool_state[i - 1]
    pool_ids[pos] = cand
    pool_dists[pos] = d
    pool_state[pos] = np.uint8(0)
    return size + 1 if size < cap else size


@njit(cache=True)
def greedy_search(data, indptr, nbr_ids, query, entries, pool_size, k):
    """Best-first graph walk from random entries with a bounded pool.

    Seeds the pool with every entry point, then repeatedly expands the
    closest unexplored pool entry until the whole pool is explored.  A
    visited bitmap guarantees each point's distance is computed at most
    once.  Returns (ids, dists, n_computed, hops, found) where found is the
    final pool size and ids/dists hold its first min(k, found) entries.
    """
    n = data.shape[0]
    pool_ids = np.empty(pool_size, dtype=np.int32)
    pool_dists = np.empty(pool_size, dtype=np.float32)
    pool_state = np.zeros(pool_size, dtype=np.uint8)
    visited = np.zeros(n, dtype=np.uint8)
    size = 0
    n_computed = 0
    for t in range(entries.shape[0]):
        e = entries[t]
        if visited[e]:
            continue
        visited[e] = np.uint8(1)
        d = _query_dist(data, e, query)
        n_computed += 1
        size = _pool_insert(pool_ids, pool_dists, pool_state, size, e, d)
    hops = 0
    while True:
        cur = -1
        for i in range(size):
            if pool_state[i] == 0:
                cur = i
                break
        if cur < 0:
            break
        pool_state[cur] = np.uint8(1)
        node = pool_ids[cur]
        hops += 1
        for ei in range(indptr[node], indptr[node + 1]):
            nb = nbr_ids[ei]
            if visited[nb]:
                continue
            visited[nb] = np.uint8(1)
            d = _query_dist(data, nb, query)
            n_computed += 1
            size = _pool_insert(pool_ids, pool_dists, pool_state, size, nb, d)
    found = size
    take = k if k < found else found
    return pool_ids[:take].copy(), pool_dists[:take].copy(), n_computed, hops, found
