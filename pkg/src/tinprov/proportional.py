"""Proportional selection: per-vertex origin→amount provenance vectors.

When a transfer does not drain the source buffer, every origin component of
the source vector contributes the same fraction of its mass.  Vectors come
in two representations with identical semantics:

* dense — a contiguous float array per vertex, one slot per tracked origin,
  updated with plain array arithmetic (data-parallel friendly);
* sparse — a list of (origin, amount) pairs strictly sorted by origin index,
  updated by merging sorted lists.

Entries whose amount falls to the dust threshold (``epsilon``) are dropped
from sparse vectors.  When a scope mechanism is active the dropped mass is
folded into the UNKNOWN entry; otherwise it is only tracked as a per-vertex
diagnostic.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from .core import UNKNOWN, EngineBase, Interaction, Policy

SparseVec = list  # list[tuple[int, float]], sorted by origin


def sparse_merge(
    a: Sequence[tuple[int, float]],
    b: Sequence[tuple[int, float]],
    scale: float = 1.0,
    epsilon: float = 0.0,
    fold_dust: bool = False,
) -> tuple[SparseVec, float]:
    """Merge two sorted (origin, amount) lists into ``a ⊕ scale·b``.

    Returns ``(merged, dropped)`` where ``dropped`` is the mass of entries
    that fell at or below ``epsilon`` and were discarded.  With ``fold_dust``
    that mass is moved to the UNKNOWN entry instead and ``dropped`` is 0.
    Inputs must be strictly sorted by origin (internal consistency; checked
    with assertions).
    """
    out: SparseVec = []
    dropped = 0.0
    dust = 0.0
    i, j = 0, 0
    na, nb = len(a), len(b)
    last = None
    while i < na or j < nb:
        if j >= nb or (i < na and a[i][0] < b[j][0]):
            o, amt = a[i]
            i += 1
        elif i >= na or b[j][0] < a[i][0]:
            o, amt = b[j][0], b[j][1] * scale
            j += 1
        else:
            o = a[i][0]
            amt = a[i][1] + b[j][1] * scale
            i += 1
            j += 1
        assert last is None or o > last, "sparse vector not strictly sorted"
        last = o
        if amt <= epsilon:
            if fold_dust:
                dust += amt
            else:
                dropped += amt
            continue
        out.append((o, amt))
    if dust > 0.0:
        if out and out[0][0] == UNKNOWN:
            out[0] = (UNKNOWN, out[0][1] + dust)
        else:
            out.insert(0, (UNKNOWN, dust))
    return out, dropped


def densify(entries: Sequence[tuple[int, float]], n_slots: int) -> list[float]:
    """Expand a sparse vector to a dense amount list (UNKNOWN excluded)."""
    out = [0.0] * n_slots
    for o, amt in entries:
        if o != UNKNOWN:
            out[o] += amt
    return out


class ProportionalDenseEngine(EngineBase):
    """Proportional policy over dense per-vertex provenance arrays."""

    policy = Policy.PROP_DENSE

    def __init__(self, n_vertices: int, scope=None, epsilon: float = 1e-9) -> None:
        super().__init__(n_vertices, epsilon)
        self.scope = scope
        self.n_slots = scope.n_slots if scope is not None else n_vertices
        self._slot_of = scope.slot_of if scope is not None else list(range(n_vertices))
        self.vectors = np.zeros((n_vertices, self.n_slots), dtype=np.float64)
        self.entries = n_vertices * self.n_slots
        self.peak_entries = self.entries

    def process(self, r: Interaction) -> None:
        s, d, rq = r.source, r.dest, r.quantity
        bs = self.totals[s]
        vs = self.vectors[s]
        vd = self.vectors[d]
        if rq >= bs - self.epsilon:
            moved = vs.copy()
            vs[:] = 0.0
            vd += moved
            newborn = rq - bs
            if newborn > 0.0:
                vd[self._slot_of[s]] += newborn
        else:
            alpha = rq / bs
            slice_ = vs * alpha
            vs -= slice_
            np.clip(vs, 0.0, None, out=vs)
            vd += slice_
        self._settle(r)

    def snapshot(self, v: int) -> list[tuple[int, float]]:
        """Nonzero components of the vertex's provenance vector."""
        if not 0 <= v < self.n_vertices:
            return []
        row = self.vectors[v]
        return [(int(i), float(row[i])) for i in np.nonzero(row)[0]]


class ProportionalSparseEngine(EngineBase):
    """Proportional policy over sorted sparse provenance lists."""

    policy = Policy.PROP_SPARSE

    def __init__(self, n_vertices: int, scope=None, epsilon: float = 1e-9, budget=None) -> None:
        super().__init__(n_vertices, epsilon)
        self.scope = scope
        self.budget = budget
        self._slot_of = scope.slot_of if scope is not None else list(range(n_vertices))
        self._fold_dust = scope is not None or budget is not None
        self.vectors: list[SparseVec] = [[] for _ in range(n_vertices)]
        self.dropped = [0.0] * n_vertices
        self.shrinks = [0] * n_vertices

    def process(self, r: Interaction) -> None:
        s, d = r.source, r.dest
        before = len(self.vectors[s]) + (len(self.vectors[d]) if d != s else 0)
        shrink = None
        budget = self.budget
        if budget is not None:
            shrink = lambda merged: (
                budget.shrink(merged) if len(merged) > budget.capacity else merged
            )
        shrunk = _transfer(
            self.vectors,
            self.dropped,
            r,
            self._slot_of[s],
            self.totals[s],
            self.epsilon,
            self._fold_dust,
            shrink,
        )
        if shrunk:
            self.shrinks[d] += 1
        after = len(self.vectors[s]) + (len(self.vectors[d]) if d != s else 0)
        self.entries += after - before
        if self.entries > self.peak_entries:
            self.peak_entries = self.entries
        self._settle(r)

    def snapshot(self, v: int) -> list[tuple[int, float]]:
        """The vertex's sparse provenance entries (origin, amount)."""
        if not 0 <= v < self.n_vertices:
            return []
        return list(self.vectors[v])

    def total_dropped(self) -> float:
        return sum(self.dropped)


def _transfer(
    vectors: list[SparseVec],
    dropped: list[float],
    r: Interaction,
    slot_source: int,
    source_total: float,
    epsilon: float,
    fold_dust: bool,
    shrink: Optional[Callable[[SparseVec], SparseVec]] = None,
) -> bool:
    """Apply one interaction to a bank of sparse vectors; see module doc."""
    s, d, rq = r.source, r.dest, r.quantity
    vs = vectors[s]
    if rq >= source_total - epsilon:
        incoming = vs
        newborn = rq - source_total
        if newborn > 0.0:
            incoming, drp = sparse_merge(
                incoming, ((slot_source, newborn),), 1.0, epsilon, fold_dust
            )
            dropped[d] += drp
        vectors[s] = []
    else:
        alpha = rq / source_total
        incoming = [(o, q * alpha) for o, q in vs]
        residual, drp = sparse_merge((), vs, 1.0 - alpha, epsilon, fold_dust)
        dropped[s] += drp
        vectors[s] = residual
    merged, drp = sparse_merge(vectors[d], incoming, 1.0, epsilon, fold_dust)
    dropped[d] += drp
    shrunk = False
    if shrink is not None:
        reduced = shrink(merged)
        shrunk = reduced is not merged
        merged = reduced
    vectors[d] = merged
    return shrunk
