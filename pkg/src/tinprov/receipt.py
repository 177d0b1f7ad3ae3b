"""Receipt-order selection: FIFO and LIFO policies.

Buffers are insertion-ordered sequences of (origin, quantity) pairs.  FIFO
consumes from the front, LIFO from the back.  Transfer mechanics are the
same residue/split/newborn rule as the generation-time policies; selected
pairs are appended to the destination in selection order, with the newborn
pair (if any) appended last.  When a pair is split, the remainder keeps its
place at the end it was selected from.

Each buffer keeps a running prefix-sum of parcel quantities alongside the
parcel list, so a transfer locates the last wholly-moved parcel by bisection
and moves the run in bulk instead of popping one element at a time.  FIFO
consumption advances a head index (with periodic compaction) and tracks the
already-consumed part of the front parcel, so prefix sums stay valid.
"""

from __future__ import annotations

from bisect import bisect_right
from itertools import accumulate, islice
from operator import itemgetter
from typing import Optional

from . import _kernels
from .core import ConfigError, EngineBase, Interaction, Policy
from .paths import NO_PATH, PathStore

# compact a FIFO buffer once this many consumed slots accumulate at the front
_COMPACT_AT = 256

qty_of = itemgetter(1)


class ReceiptEngine(EngineBase):
    """Provenance engine for the FIFO/LIFO selection policies."""

    def __init__(
        self,
        n_vertices: int,
        lifo: bool = False,
        epsilon: float = 1e-9,
        track_paths: bool = False,
        path_store: Optional[PathStore] = None,
    ) -> None:
        super().__init__(n_vertices, epsilon)
        self.policy = Policy.LIFO if lifo else Policy.FIFO
        self._lifo = lifo
        # parcels are mutable [origin, quantity, path_handle] lists
        self._entries: list[list[list]] = [[] for _ in range(n_vertices)]
        self._cums: list[list[float]] = [[] for _ in range(n_vertices)]
        self._head = [0] * n_vertices       # fifo: first live parcel index
        self._used = [0.0] * n_vertices     # fifo: consumed part of the front parcel
        self.paths: Optional[PathStore] = None
        if track_paths:
            self.paths = path_store if path_store is not None else PathStore()

    def process(self, r: Interaction) -> None:
        s = r.source
        d = r.dest
        rq = r.quantity
        if s == d:
            resq = self._drain_self(s, rq)
        elif self._lifo:
            resq = self._drain_lifo(s, d, rq)
        else:
            resq = self._drain_fifo(s, d, rq)
        if resq > 0.0:
            path = self.paths.birth(s) if self.paths is not None else NO_PATH
            ed = self._entries[d]
            cd = self._cums[d]
            ed.append([s, resq, path])
            cd.append((cd[-1] if cd else 0.0) + resq)
            self.entries += 1
        if self.entries > self.peak_entries:
            self.peak_entries = self.entries
        # baseline total update
        bs = self.totals[s]
        q = rq if rq < bs else bs
        self.totals[s] = bs - q
        self.totals[d] += rq
        newborn = rq - q
        if newborn > 0.0:
            self.generated[s] += newborn
            self.cumulative_newborn += newborn
        self.interactions_processed += 1

    def run(self, stream) -> "ReceiptEngine":
        """Replay a whole stream; same semantics as repeated process() calls.

        Hot path for long streams: with paths off, the per-interaction work
        runs with everything in locals and the baseline total update inlined.
        """
        if self.paths is not None:
            for r in stream:
                self.process(r)
            return self
        if (
            _kernels.AVAILABLE
            and self.interactions_processed == 0
            and self.entries == 0
            and isinstance(stream, (list, tuple))
            and len(stream) >= _kernels.MIN_STREAM
        ):
            return self._run_kernel(stream)
        E = self._entries
        C = self._cums
        H = self._head
        U = self._used
        totals = self.totals
        generated = self.generated
        eps = self.epsilon
        bis = bisect_right
        entries = self.entries
        cum_nb = self.cumulative_newborn
        count = 0
        lifo = self._lifo
        for r in stream:
            s = r.source
            d = r.dest
            rq = r.quantity
            resq = rq
            if s == d:
                self.entries = entries
                resq = self._drain_self(s, rq)
                entries = self.entries
            elif lifo:
                es = E[s]
                if es:
                    cs = C[s]
                    ed = E[d]
                    cd = C[d]
                    last = cd[-1] if cd else 0.0
                    total = cs[-1]
                    target = total - resq
                    if target < 0.0:
                        es.reverse()
                        ed.extend(es)
                        cd.extend(islice(accumulate(map(qty_of, es), initial=last), 1, None))
                        last = cd[-1]
                        es.clear()
                        cs.clear()
                        resq -= total
                    else:
                        j = bis(cs, target)
                        if j + 1 < len(es):
                            moved = es[j + 1 :]
                            moved.reverse()
                            ed.extend(moved)
                            cd.extend(islice(accumulate(map(qty_of, moved), initial=last), 1, None))
                            last = cd[-1]
                        rem = resq - (total - cs[j])
                        del es[j + 1 :]
                        del cs[j + 1 :]
                        ej = es[j]
                        qj = ej[1]
                        if qj - rem > eps:
                            ej[1] = qj - rem
                            cs[j] -= rem
                            ed.append([ej[0], rem, -1])
                            last += rem
                            entries += 1
                        else:
                            es.pop()
                            cs.pop()
                            ed.append(ej)
                            last += qj
                        cd.append(last)
                        resq = 0.0
            else:
                es = E[s]
                head = H[s]
                n = len(es)
                if head < n:
                    cs = C[s]
                    ed = E[d]
                    cd = C[d]
                    last = cd[-1] if cd else 0.0
                    used = U[s]
                    base = cs[head - 1] if head else 0.0
                    eff = cs[-1] - base - used
                    if resq >= eff:
                        if used:
                            es[head][1] -= used
                        moved = es[head:] if head else es
                        ed.extend(moved)
                        cd.extend(islice(accumulate(map(qty_of, moved), initial=last), 1, None))
                        last = cd[-1]
                        es.clear()
                        cs.clear()
                        H[s] = 0
                        U[s] = 0.0
                        resq -= eff
                    else:
                        target = resq + base + used
                        m = bis(cs, target, head)
                        rem = resq
                        if m > head:
                            if used:
                                es[head][1] -= used
                            moved = es[head:m]
                            ed.extend(moved)
                            cd.extend(islice(accumulate(map(qty_of, moved), initial=last), 1, None))
                            last = cd[-1]
                            rem = resq - (cs[m - 1] - base - used)
                            used = 0.0
                        if rem > 0.0:
                            em = es[m]
                            qm = em[1] - used
                            if qm - rem > eps:
                                ed.append([em[0], rem, -1])
                                last += rem
                                cd.append(last)
                                entries += 1
                                U[s] = used + rem
                                H[s] = m
                            else:
                                if used:
                                    em[1] -= used
                                ed.append(em)
                                last += em[1]
                                cd.append(last)
                                U[s] = 0.0
                                H[s] = m + 1
                        else:
                            U[s] = 0.0
                            H[s] = m
                        head = H[s]
                        if head >= _COMPACT_AT:
                            shift = cs[head - 1]
                            E[s] = es[head:]
                            C[s] = [c - shift for c in cs[head:]]
                            H[s] = 0
                        resq = 0.0
            if resq > 0.0:
                ed = E[d]
                cd = C[d]
                ed.append([s, resq, -1])
                cd.append((cd[-1] if cd else 0.0) + resq)
                entries += 1
            bs = totals[s]
            q = rq if rq < bs else bs
            totals[s] = bs - q
            totals[d] += rq
            nb = rq - q
            if nb > 0.0:
                generated[s] += nb
                cum_nb += nb
            count += 1
        self.entries = entries
        if entries > self.peak_entries:
            self.peak_entries = entries
        self.cumulative_newborn = cum_nb
        self.interactions_processed += count
        return self

    def _run_kernel(self, stream) -> "ReceiptEngine":
        """Replay via the compiled kernel and rebuild the buffer lists."""
        src, dst, _, qty = _kernels.stream_arrays(stream)
        porig, pqty, pnext, heads, totals, generated, cum_nb, n_entries = _kernels.replay_receipt(
            src, dst, qty, self.n_vertices, self._lifo, self.epsilon
        )
        origins = porig.tolist()
        quantities = pqty.tolist()
        nxt = pnext.tolist()
        lifo = self._lifo
        for v, idx in enumerate(heads.tolist()):
            buf = []
            while idx >= 0:
                buf.append([origins[idx], quantities[idx], NO_PATH])
                idx = nxt[idx]
            if lifo:
                buf.reverse()
            cums = []
            running = 0.0
            for e in buf:
                running += e[1]
                cums.append(running)
            self._entries[v] = buf
            self._cums[v] = cums
        self.totals = totals.tolist()
        self.generated = generated.tolist()
        self.cumulative_newborn = float(cum_nb)
        self.entries = int(n_entries)
        n_entries = self.entries
        if n_entries > self.peak_entries:
            self.peak_entries = n_entries
        self.interactions_processed = len(stream)
        return self

    def _drain_lifo(self, s: int, d: int, resq: float) -> float:
        """Move up to resq units from the top of s's stack; returns leftover."""
        es = self._entries[s]
        if not es:
            return resq
        cs = self._cums[s]
        ed = self._entries[d]
        cd = self._cums[d]
        last = cd[-1] if cd else 0.0
        paths = self.paths
        total = cs[-1]
        target = total - resq
        if target < 0.0:
            # the whole stack moves, top first
            for e in reversed(es):
                if paths is not None:
                    e[2] = paths.extend(e[2], s)
                ed.append(e)
                last += e[1]
                cd.append(last)
            es.clear()
            cs.clear()
            return resq - total
        j = bisect_right(cs, target)
        # parcels above j move whole (top-down), then parcel j covers the rest
        for i in range(len(es) - 1, j, -1):
            e = es[i]
            if paths is not None:
                e[2] = paths.extend(e[2], s)
            ed.append(e)
            last += e[1]
            cd.append(last)
        rem = resq - (total - cs[j])
        del es[j + 1 :]
        del cs[j + 1 :]
        ej = es[j]
        qj = ej[1]
        if qj - rem > self.epsilon:
            # split: the remainder stays on top of the source stack
            ej[1] = qj - rem
            cs[j] -= rem
            ed.append([ej[0], rem, ej[2]])
            last += rem
            self.entries += 1
        else:
            es.pop()
            cs.pop()
            if paths is not None:
                ej[2] = paths.extend(ej[2], s)
            ed.append(ej)
            last += qj
        cd.append(last)
        return 0.0

    def _drain_fifo(self, s: int, d: int, resq: float) -> float:
        """Move up to resq units from the front of s's queue; returns leftover."""
        es = self._entries[s]
        head = self._head[s]
        n = len(es)
        if head >= n:
            return resq
        cs = self._cums[s]
        ed = self._entries[d]
        cd = self._cums[d]
        last = cd[-1] if cd else 0.0
        paths = self.paths
        used = self._used[s]
        base = cs[head - 1] if head else 0.0
        effective_total = cs[-1] - base - used
        if resq >= effective_total:
            # the whole queue moves, front first
            front = es[head]
            if used:
                front[1] -= used
            for i in range(head, n):
                e = es[i]
                if paths is not None:
                    e[2] = paths.extend(e[2], s)
                ed.append(e)
                last += e[1]
                cd.append(last)
            es.clear()
            cs.clear()
            self._head[s] = 0
            self._used[s] = 0.0
            return resq - effective_total
        target = resq + base + used
        m = bisect_right(cs, target, head)
        # parcels head..m-1 move whole, then parcel m covers the rest
        if m > head:
            front = es[head]
            if used:
                front[1] -= used
            for i in range(head, m):
                e = es[i]
                if paths is not None:
                    e[2] = paths.extend(e[2], s)
                ed.append(e)
                last += e[1]
                cd.append(last)
            rem = resq - (cs[m - 1] - base - used)
            used = 0.0
            if rem <= 0.0:
                # the moved run covered resq exactly; parcel m is untouched
                self._used[s] = 0.0
                self._head[s] = m
                if m >= _COMPACT_AT:
                    self._compact(s)
                return 0.0
        else:
            rem = resq
        em = es[m]
        qm = em[1] - (used if m == head else 0.0)
        if qm - rem > self.epsilon:
            # split: the remainder stays at the front of the queue
            ed.append([em[0], rem, em[2]])
            last += rem
            self.entries += 1
            self._used[s] = (used if m == head else 0.0) + rem
            self._head[s] = m
        else:
            if m == head and used:
                em[1] -= used
            if paths is not None:
                em[2] = paths.extend(em[2], s)
            ed.append(em)
            last += em[1]
            self._used[s] = 0.0
            self._head[s] = m + 1
        cd.append(last)
        if self._head[s] >= _COMPACT_AT:
            self._compact(s)
        return 0.0

    def _drain_self(self, v: int, resq: float) -> float:
        """Literal element-wise drain for self-interactions.

        Source and destination alias, so bulk slicing is unsafe; parcels are
        selected and re-appended one at a time, exactly as the selection rule
        dictates, and the prefix sums are rebuilt afterwards.  Terminates
        because resq strictly decreases on every whole move.
        """
        buf = [[o, q, p] for o, q, p in self._live(v)]
        eps = self.epsilon
        paths = self.paths
        lifo = self._lifo
        while resq > 0.0 and buf:
            e = buf[-1] if lifo else buf[0]
            tq = e[1]
            if tq - resq > eps:
                # split: the remainder stays in place, the copy arrives last
                e[1] = tq - resq
                buf.append([e[0], resq, e[2]])
                self.entries += 1
                resq = 0.0
            else:
                buf.pop() if lifo else buf.pop(0)
                if paths is not None:
                    e[2] = paths.extend(e[2], v)
                buf.append(e)
                resq -= tq
        self._entries[v] = buf
        cums = []
        running = 0.0
        for e in buf:
            running += e[1]
            cums.append(running)
        self._cums[v] = cums
        self._head[v] = 0
        self._used[v] = 0.0
        return resq

    def _compact(self, s: int) -> None:
        head = self._head[s]
        base = self._cums[s][head - 1]
        self._entries[s] = self._entries[s][head:]
        self._cums[s] = [c - base for c in self._cums[s][head:]]
        self._head[s] = 0

    def _live(self, v: int):
        """Live parcels of a buffer with the front adjusted for consumption."""
        es = self._entries[v]
        head = self._head[v]
        used = self._used[v] if not self._lifo else 0.0
        for i in range(head, len(es)):
            e = es[i]
            if i == head and used:
                yield e[0], e[1] - used, e[2]
            else:
                yield e[0], e[1], e[2]

    def snapshot(self, v: int) -> list[tuple[int, float]]:
        """Buffer contents front-to-back as (origin, quantity) pairs."""
        if not 0 <= v < self.n_vertices:
            return []
        return [(o, q) for o, q, _ in self._live(v)]

    def snapshot_paths(self, v: int) -> list[tuple[int, float, tuple[int, ...]]]:
        """Buffer contents as (origin, quantity, route sequence)."""
        if self.paths is None:
            raise ConfigError("path tracking is not enabled")
        if not 0 <= v < self.n_vertices:
            return []
        return [(o, q, self.paths.sequence(p)) for o, q, p in self._live(v)]

    def average_path_length(self) -> float:
        """Mean route length (vertices, origin included) over resident parcels."""
        if self.paths is None:
            raise ConfigError("path tracking is not enabled")
        count = 0
        total = 0
        for v in range(self.n_vertices):
            for _, _, p in self._live(v):
                total += self.paths.length(p)
                count += 1
        return total / count if count else 0.0
