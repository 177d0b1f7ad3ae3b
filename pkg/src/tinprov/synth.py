"""Synthetic interaction streams for benchmarks and tests.

Streams are deterministic for a given seed, times are strictly increasing
integers (no tie handling needed downstream) and quantities are positive
integers.
"""

from __future__ import annotations

import random
from typing import Iterable, TextIO

from .core import Interaction

SHAPES = ("uniform", "hub", "chain")

#: fraction of hub-shaped interactions that touch the hub vertex
_HUB_BIAS = 0.75


def synth_stream(
    n_vertices: int,
    n_interactions: int,
    seed: int = 0,
    shape: str = "uniform",
    max_quantity: int = 100,
) -> list[Interaction]:
    """Generate a time-ordered synthetic stream.

    Shapes: ``uniform`` picks random distinct endpoints; ``hub`` routes most
    interactions through vertex 0; ``chain`` only emits edges v_i -> v_{i+1}.
    """
    if n_vertices < 2 or n_interactions < 0:
        raise ValueError("need at least two vertices and a non-negative length")
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}")
    rng = random.Random(seed)
    out: list[Interaction] = []
    for i in range(n_interactions):
        if shape == "chain":
            s = rng.randrange(n_vertices - 1)
            d = s + 1
        elif shape == "hub" and rng.random() < _HUB_BIAS:
            other = rng.randrange(1, n_vertices)
            s, d = (0, other) if rng.random() < 0.5 else (other, 0)
        else:
            s = rng.randrange(n_vertices)
            d = rng.randrange(n_vertices - 1)
            if d >= s:
                d += 1
        out.append(Interaction(s, d, float(i + 1), float(rng.randint(1, max_quantity))))
    return out


def write_stream(fh: TextIO, stream: Iterable[Interaction]) -> None:
    """Write interactions as CSV lines with v<i> labels."""
    for r in stream:
        fh.write(f"v{r.source},v{r.dest},{r.time:g},{r.quantity:g}\n")
