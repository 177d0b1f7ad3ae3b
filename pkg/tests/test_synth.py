"""Synthetic stream generation contracts."""

import io

import pytest

from tinprov import parse_stream, synth_stream, write_stream


def test_deterministic_per_seed():
    a = synth_stream(10, 200, seed=42)
    b = synth_stream(10, 200, seed=42)
    assert a == b
    assert a != synth_stream(10, 200, seed=43)


def test_times_strictly_increasing_integer():
    stream = synth_stream(5, 100, seed=1)
    times = [r.time for r in stream]
    assert times == sorted(set(times))
    assert all(t == int(t) for t in times)
    assert all(r.quantity > 0 and r.quantity == int(r.quantity) for r in stream)


def test_chain_shape_only_forward_edges():
    for r in synth_stream(4, 300, seed=2, shape="chain"):
        assert r.dest == r.source + 1


def test_hub_shape_concentrates_on_vertex_zero():
    stream = synth_stream(20, 2000, seed=3, shape="hub")
    touching_hub = sum(1 for r in stream if 0 in (r.source, r.dest))
    assert touching_hub >= len(stream) // 2


def test_no_self_loops():
    for shape in ("uniform", "hub", "chain"):
        for r in synth_stream(6, 500, seed=4, shape=shape):
            assert r.source != r.dest


def test_validation():
    with pytest.raises(ValueError):
        synth_stream(1, 10)
    with pytest.raises(ValueError):
        synth_stream(5, 10, shape="ring")


def test_write_parse_roundtrip():
    stream = synth_stream(6, 50, seed=5)
    buf = io.StringIO()
    write_stream(buf, stream)
    table, parsed, rejected = parse_stream(buf.getvalue().splitlines())
    assert rejected == []
    assert [(table.labels[r.source], table.labels[r.dest], r.time, r.quantity) for r in parsed] == [
        (f"v{r.source}", f"v{r.dest}", r.time, r.quantity) for r in stream
    ]
