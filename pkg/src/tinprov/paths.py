"""Route tracking for buffered parcels (element policies only).

Each parcel can carry the route it travelled: the path starts as just the
origin vertex and is extended with the transmitter every time the parcel is
relayed wholesale to another vertex.  A split copy keeps the path of the
parcel it was split from.  Paths are stored as reversed parent chains so
that shared prefixes are stored once; a handle is an index into the store.
"""

from __future__ import annotations

NO_PATH = -1


class PathStore:
    """Append-only parent-chain storage of parcel routes."""

    __slots__ = ("_vertex", "_parent", "_depth", "_roots", "_children")

    def __init__(self) -> None:
        self._vertex: list[int] = []
        self._parent: list[int] = []
        self._depth: list[int] = []
        self._roots: dict[int, int] = {}
        self._children: dict[tuple[int, int], int] = {}

    def __len__(self) -> int:
        return len(self._vertex)

    def birth(self, origin: int) -> int:
        """Handle for the length-1 path [origin]. Cached per origin."""
        handle = self._roots.get(origin)
        if handle is None:
            handle = self._append(origin, NO_PATH, 1)
            self._roots[origin] = handle
        return handle

    def extend(self, handle: int, transmitter: int) -> int:
        """Handle for the given path extended with the transmitter vertex."""
        key = (handle, transmitter)
        child = self._children.get(key)
        if child is None:
            child = self._append(transmitter, handle, self._depth[handle] + 1)
            self._children[key] = child
        return child

    def _append(self, vertex: int, parent: int, depth: int) -> int:
        self._vertex.append(vertex)
        self._parent.append(parent)
        self._depth.append(depth)
        return len(self._vertex) - 1

    def length(self, handle: int) -> int:
        return self._depth[handle]

    def sequence(self, handle: int) -> tuple[int, ...]:
        """Materialize the logical vertex sequence, origin first."""
        out: list[int] = []
        node = handle
        while node != NO_PATH:
            out.append(self._vertex[node])
            node = self._parent[node]
        out.reverse()
        return tuple(out)
