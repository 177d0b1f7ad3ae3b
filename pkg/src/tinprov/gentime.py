"""Birth-time ordered selection: least- and most-recently-born policies.

Each buffer is a binary heap of parcels keyed on generation time (min-heap
for least-recently-born, max-heap for most-recently-born).  A transfer
drains parcels from the extreme of the source heap until the requested
quantity is covered; the last parcel may be split, and any shortfall is
generated as a newborn parcel at the source.

Heap entries are mutable lists ``[key, origin, seq, birth_time, quantity,
path]``.  ``key`` is the signed birth time, ``seq`` is a creation sequence
number that makes the ordering total (ties on birth time break on origin
index, then creation order).
"""

from __future__ import annotations

import heapq
from typing import Optional

from . import _kernels
from .core import ConfigError, EngineBase, Interaction, Policy
from .paths import NO_PATH, PathStore

_KEY, _ORIGIN, _SEQ, _BIRTH, _QTY, _PATH = range(6)


class GenTimeEngine(EngineBase):
    """Provenance engine for the generation-time selection policies."""

    def __init__(
        self,
        n_vertices: int,
        most_recent: bool = False,
        epsilon: float = 1e-9,
        track_paths: bool = False,
        coalesce: bool = False,
        path_store: Optional[PathStore] = None,
    ) -> None:
        super().__init__(n_vertices, epsilon)
        if coalesce and track_paths:
            raise ConfigError("coalescing would merge parcels with distinct paths")
        self.policy = Policy.MOST_RECENTLY_BORN if most_recent else Policy.LEAST_RECENTLY_BORN
        self._sign = -1.0 if most_recent else 1.0
        self.buffers: list[list[list]] = [[] for _ in range(n_vertices)]
        self.paths: Optional[PathStore] = None
        if track_paths:
            self.paths = path_store if path_store is not None else PathStore()
        self._merge_maps: Optional[list[dict]] = (
            [{} for _ in range(n_vertices)] if coalesce else None
        )
        self._seq = 0

    def _add(self, v: int, origin: int, birth: float, qty: float, path: int, seq: int = -1) -> None:
        if self._merge_maps is not None:
            live = self._merge_maps[v]
            existing = live.get((origin, birth))
            if existing is not None:
                existing[_QTY] += qty
                return
        if seq < 0:
            seq = self._seq
            self._seq += 1
        entry = [self._sign * birth, origin, seq, birth, qty, path]
        heapq.heappush(self.buffers[v], entry)
        if self._merge_maps is not None:
            self._merge_maps[v][(origin, birth)] = entry
        self.entries += 1

    def process(self, r: Interaction) -> None:
        s = r.source
        src = self.buffers[s]
        eps = self.epsilon
        paths = self.paths
        resq = r.quantity
        while resq > 0.0 and src:
            top = src[0]
            tq = top[_QTY]
            if tq - resq > eps:
                # split: the remainder stays at the source, the copy keeps
                # the parcel's (origin, birth) and route so far
                top[_QTY] = tq - resq
                self._add(r.dest, top[_ORIGIN], top[_BIRTH], resq, top[_PATH])
                resq = 0.0
            else:
                heapq.heappop(src)
                self.entries -= 1
                if self._merge_maps is not None:
                    del self._merge_maps[s][(top[_ORIGIN], top[_BIRTH])]
                path = top[_PATH]
                if paths is not None:
                    path = paths.extend(path, s)
                self._add(r.dest, top[_ORIGIN], top[_BIRTH], tq, path, seq=top[_SEQ])
                resq -= tq
        if resq > 0.0:
            path = paths.birth(s) if paths is not None else NO_PATH
            self._add(r.dest, s, r.time, resq, path)
        self._settle(r)
        if self.entries > self.peak_entries:
            self.peak_entries = self.entries

    def run(self, stream) -> "GenTimeEngine":
        """Replay a whole stream; same semantics as repeated process() calls.

        Hot path for long streams: with paths and coalescing off, the
        per-interaction work runs with everything in locals and whole-parcel
        moves reuse the popped heap entry.
        """
        if self.paths is not None or self._merge_maps is not None:
            for r in stream:
                self.process(r)
            return self
        if (
            _kernels.AVAILABLE
            and self.interactions_processed == 0
            and self.entries == 0
            and self._seq == 0
            and isinstance(stream, (list, tuple))
            and len(stream) >= _kernels.MIN_STREAM
        ):
            return self._run_kernel(stream)
        heappush = heapq.heappush
        heappop = heapq.heappop
        buffers = self.buffers
        totals = self.totals
        generated = self.generated
        eps = self.epsilon
        sign = self._sign
        seq = self._seq
        entries = self.entries
        cum = self.cumulative_newborn
        count = 0
        for r in stream:
            s = r.source
            d = r.dest
            rq = r.quantity
            src = buffers[s]
            dst = buffers[d]
            resq = rq
            while src:
                top = src[0]
                tq = top[_QTY]
                if tq - resq > eps:
                    top[_QTY] = tq - resq
                    heappush(dst, [top[0], top[1], seq, top[3], resq, top[5]])
                    seq += 1
                    entries += 1
                    resq = 0.0
                    break
                heappush(dst, heappop(src))
                resq -= tq
                if resq <= 0.0:
                    break
            if resq > 0.0:
                rt = r.time
                heappush(dst, [sign * rt, s, seq, rt, resq, -1])
                seq += 1
                entries += 1
            bs = totals[s]
            q = rq if rq < bs else bs
            totals[s] = bs - q
            totals[d] += rq
            nb = rq - q
            if nb > 0.0:
                generated[s] += nb
                cum += nb
            count += 1
        self._seq = seq
        self.entries = entries
        if entries > self.peak_entries:
            self.peak_entries = entries
        self.cumulative_newborn = cum
        self.interactions_processed += count
        return self

    def _run_kernel(self, stream) -> "GenTimeEngine":
        """Replay via the compiled kernel and rebuild the buffer heaps.

        The kernel orders parcels by the same (key, origin, seq) rule as the
        list entries, so copying each heap span in array order yields a valid
        heapq structure.
        """
        src, dst, tms, qty = _kernels.stream_arrays(stream)
        porig, pbirth, pqty, pseq, arena, off, sz, totals, generated, cum_nb, n_entries, seq = (
            _kernels.replay_gentime(src, dst, tms, qty, self.n_vertices, self._sign, self.epsilon)
        )
        origins = porig.tolist()
        births = pbirth.tolist()
        quantities = pqty.tolist()
        seqs = pseq.tolist()
        arena_l = arena.tolist()
        sign = self._sign
        for v, (o, k) in enumerate(zip(off.tolist(), sz.tolist())):
            self.buffers[v] = [
                [sign * births[i], origins[i], seqs[i], births[i], quantities[i], NO_PATH]
                for i in arena_l[o : o + k]
            ]
        self.totals = totals.tolist()
        self.generated = generated.tolist()
        self.cumulative_newborn = float(cum_nb)
        self.entries = int(n_entries)
        if self.entries > self.peak_entries:
            self.peak_entries = self.entries
        self._seq = int(seq)
        self.interactions_processed = len(stream)
        return self

    def snapshot(self, v: int) -> list[tuple[int, float, float]]:
        """Current parcels of a buffer as (origin, birth_time, quantity)."""
        if not 0 <= v < self.n_vertices:
            return []
        return [(e[_ORIGIN], e[_BIRTH], e[_QTY]) for e in self.buffers[v]]

    def snapshot_paths(self, v: int) -> list[tuple[int, float, tuple[int, ...]]]:
        """Current parcels as (origin, quantity, route sequence)."""
        if self.paths is None:
            raise ConfigError("path tracking is not enabled")
        if not 0 <= v < self.n_vertices:
            return []
        return [(e[_ORIGIN], e[_QTY], self.paths.sequence(e[_PATH])) for e in self.buffers[v]]

    def average_path_length(self) -> float:
        """Mean route length (vertices, origin included) over resident parcels."""
        if self.paths is None:
            raise ConfigError("path tracking is not enabled")
        count = 0
        total = 0
        for buf in self.buffers:
            for e in buf:
                total += self.paths.length(e[_PATH])
                count += 1
        return total / count if count else 0.0
