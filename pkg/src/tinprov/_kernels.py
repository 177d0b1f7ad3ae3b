"""Optional compiled replay kernels (numba).

Long path-free replays are dominated by per-parcel interpreter overhead, so
the engines hand whole streams to these kernels when numba is installed.
Parcels live in flat arrays: the receipt kernel threads them into per-vertex
linked lists (queue for FIFO, stack for LIFO), the generation-time kernel
keeps per-vertex binary heaps in a shared index arena with doubling
capacities.  Semantics are identical to the engines' process() paths — the
same selection rule, split/dust rule, newborn rule and baseline total
arithmetic — and the engines difference-test the two paths against each
other.

Everything here is an implementation detail; engines fall back to pure
Python when numba is missing.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    AVAILABLE = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


#: streams shorter than this are not worth the array conversion
MIN_STREAM = 100_000


def stream_arrays(stream):
    """Column arrays (source, dest, time, quantity) for a materialized stream."""
    n = len(stream)
    src = np.fromiter((r.source for r in stream), np.int64, n)
    dst = np.fromiter((r.dest for r in stream), np.int64, n)
    tms = np.fromiter((r.time for r in stream), np.float64, n)
    qty = np.fromiter((r.quantity for r in stream), np.float64, n)
    return src, dst, tms, qty


@njit(cache=True)
def replay_receipt(src, dst, qty, n_vertices, lifo, eps):
    """Replay a stream under FIFO/LIFO; returns pools, list heads and stats."""
    n = src.size
    pcap = 2 * n + 1  # at most one split and one newborn per interaction
    porig = np.empty(pcap, np.int64)
    pqty = np.empty(pcap, np.float64)
    pnext = np.full(pcap, -1, np.int64)
    head = np.full(n_vertices, -1, np.int64)
    tail = np.full(n_vertices, -1, np.int64)
    totals = np.zeros(n_vertices, np.float64)
    generated = np.zeros(n_vertices, np.float64)
    nalloc = 0
    cum_nb = 0.0
    entries = 0
    for i in range(n):
        s = src[i]
        d = dst[i]
        rq = qty[i]
        resq = rq
        while resq > 0.0:
            h = head[s]
            if h < 0:
                break
            tq = pqty[h]
            if tq - resq > eps:
                # split: the remainder stays at the selected end
                pqty[h] = tq - resq
                j = nalloc
                nalloc += 1
                porig[j] = porig[h]
                pqty[j] = resq
                if lifo:
                    pnext[j] = head[d]
                    head[d] = j
                else:
                    pnext[j] = -1
                    if tail[d] < 0:
                        head[d] = j
                    else:
                        pnext[tail[d]] = j
                    tail[d] = j
                entries += 1
                resq = 0.0
            else:
                head[s] = pnext[h]
                if head[s] < 0:
                    tail[s] = -1
                if lifo:
                    pnext[h] = head[d]
                    head[d] = h
                else:
                    pnext[h] = -1
                    if tail[d] < 0:
                        head[d] = h
                    else:
                        pnext[tail[d]] = h
                    tail[d] = h
                resq -= tq
        if resq > 0.0:
            j = nalloc
            nalloc += 1
            porig[j] = s
            pqty[j] = resq
            if lifo:
                pnext[j] = head[d]
                head[d] = j
            else:
                pnext[j] = -1
                if tail[d] < 0:
                    head[d] = j
                else:
                    pnext[tail[d]] = j
                tail[d] = j
            entries += 1
        bs = totals[s]
        q = rq if rq < bs else bs
        totals[s] = bs - q
        totals[d] += rq
        nb = rq - q
        if nb > 0.0:
            generated[s] += nb
            cum_nb += nb
    return porig, pqty, pnext, head, totals, generated, cum_nb, entries


@njit(cache=True, inline="always")
def _less(pkey, porig, pseq, a, b):
    if pkey[a] != pkey[b]:
        return pkey[a] < pkey[b]
    if porig[a] != porig[b]:
        return porig[a] < porig[b]
    return pseq[a] < pseq[b]


@njit(cache=True, inline="always")
def _sift_up(A, base, i, pkey, porig, pseq):
    while i > 0:
        par = (i - 1) >> 1
        a = A[base + i]
        b = A[base + par]
        if not _less(pkey, porig, pseq, a, b):
            break
        A[base + i] = b
        A[base + par] = a
        i = par


@njit(cache=True, inline="always")
def _sift_down(A, base, m, pkey, porig, pseq):
    i = 0
    while True:
        left = 2 * i + 1
        if left >= m:
            break
        c = left
        right = left + 1
        if right < m and _less(pkey, porig, pseq, A[base + right], A[base + left]):
            c = right
        if _less(pkey, porig, pseq, A[base + c], A[base + i]):
            t = A[base + i]
            A[base + i] = A[base + c]
            A[base + c] = t
            i = c
        else:
            break


@njit(cache=True)
def replay_gentime(src, dst, tms, qty, n_vertices, sign, eps):
    """Replay a stream under LRB/MRB; returns pools, heap layout and stats."""
    n = src.size
    pcap = 2 * n + 1
    porig = np.empty(pcap, np.int64)
    pbirth = np.empty(pcap, np.float64)
    pkey = np.empty(pcap, np.float64)
    pqty = np.empty(pcap, np.float64)
    pseq = np.empty(pcap, np.int64)
    off = np.zeros(n_vertices, np.int64)
    sz = np.zeros(n_vertices, np.int64)
    cap = np.zeros(n_vertices, np.int64)
    A = np.empty(8 * n + 4 * n_vertices + 64, np.int64)
    arena_end = 0
    totals = np.zeros(n_vertices, np.float64)
    generated = np.zeros(n_vertices, np.float64)
    nalloc = 0
    seq = 0
    cum_nb = 0.0
    entries = 0
    for i in range(n):
        s = src[i]
        d = dst[i]
        rq = qty[i]
        resq = rq
        while resq > 0.0 and sz[s] > 0:
            base = off[s]
            root = A[base]
            tq = pqty[root]
            if tq - resq > eps:
                # split: the remainder keeps its heap slot at the source
                pqty[root] = tq - resq
                j = nalloc
                nalloc += 1
                porig[j] = porig[root]
                pbirth[j] = pbirth[root]
                pkey[j] = pkey[root]
                pqty[j] = resq
                pseq[j] = seq
                seq += 1
                entries += 1
                resq = 0.0
                root = j
            else:
                m = sz[s] - 1
                sz[s] = m
                if m > 0:
                    A[base] = A[base + m]
                    _sift_down(A, base, m, pkey, porig, pseq)
                resq -= tq
            # push `root` onto d's heap, growing or relocating its span first
            c = cap[d]
            if sz[d] == c:
                newcap = 4 if c == 0 else 2 * c
                if arena_end + newcap > A.size:
                    B = np.empty(2 * A.size + newcap, np.int64)
                    B[:arena_end] = A[:arena_end]
                    A = B
                if sz[d] > 0:
                    A[arena_end : arena_end + sz[d]] = A[off[d] : off[d] + sz[d]]
                off[d] = arena_end
                cap[d] = newcap
                arena_end += newcap
            base = off[d]
            k = sz[d]
            sz[d] = k + 1
            A[base + k] = root
            _sift_up(A, base, k, pkey, porig, pseq)
        if resq > 0.0:
            j = nalloc
            nalloc += 1
            porig[j] = s
            pbirth[j] = tms[i]
            pkey[j] = sign * tms[i]
            pqty[j] = resq
            pseq[j] = seq
            seq += 1
            entries += 1
            c = cap[d]
            if sz[d] == c:
                newcap = 4 if c == 0 else 2 * c
                if arena_end + newcap > A.size:
                    B = np.empty(2 * A.size + newcap, np.int64)
                    B[:arena_end] = A[:arena_end]
                    A = B
                if sz[d] > 0:
                    A[arena_end : arena_end + sz[d]] = A[off[d] : off[d] + sz[d]]
                off[d] = arena_end
                cap[d] = newcap
                arena_end += newcap
            base = off[d]
            k = sz[d]
            sz[d] = k + 1
            A[base + k] = j
            _sift_up(A, base, k, pkey, porig, pseq)
        bs = totals[s]
        q = rq if rq < bs else bs
        totals[s] = bs - q
        totals[d] += rq
        nb = rq - q
        if nb > 0.0:
            generated[s] += nb
            cum_nb += nb
    return porig, pbirth, pqty, pseq, A, off, sz, totals, generated, cum_nb, entries, seq


def warmup() -> bool:
    """Force JIT compilation with a tiny stream; returns availability."""
    if not AVAILABLE:
        return False
    src = np.array([0, 1], np.int64)
    dst = np.array([1, 0], np.int64)
    tms = np.array([1.0, 2.0])
    qty = np.array([2.0, 3.0])
    for lifo in (True, False):
        replay_receipt(src, dst, qty, 2, lifo, 1e-9)
    for sign in (1.0, -1.0):
        replay_gentime(src, dst, tms, qty, 2, sign, 1e-9)
    return True
