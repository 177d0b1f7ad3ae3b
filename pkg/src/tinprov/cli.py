"""Command-line front end: replay, snapshot reports, alerts, stream synthesis."""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from typing import Optional, Sequence, TextIO

from .alerts import alert_scan
from .core import (
    PROPORTIONAL_POLICIES,
    UNKNOWN,
    UNKNOWN_LABEL,
    ConfigError,
    Policy,
    VertexTable,
    generated_totals,
    parse_stream,
    sort_check,
)
from .engines import EngineConfig, build_engine
from .report import build_report
from .scalable import BudgetSpec, ScopeMap
from .synth import SHAPES, synth_stream, write_stream


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tinprov",
        description="Replay a temporal interaction stream and track quantity provenance.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay a stream under a selection policy")
    run.add_argument("input", help="interaction CSV/TSV file, or - for stdin")
    run.add_argument(
        "--policy",
        choices=[p.value for p in Policy],
        default=Policy.NOPROV.value,
    )
    run.add_argument("--paths", action="store_true", help="track parcel routes")
    run.add_argument("--coalesce", action="store_true", help="merge equal (origin, birth) parcels")
    run.add_argument("--selective", metavar="FILE|topk=K", help="track only selected origins")
    run.add_argument("--groups", metavar="FILE", help="CSV vertex_label,group_label map")
    run.add_argument("--window", type=int, metavar="W")
    run.add_argument("--budget", metavar="C=<int>,f=<real>")
    run.add_argument("--epsilon", type=float, default=1e-9, metavar="E")
    run.add_argument("--snapshot-at", default="end", metavar="{end|every-k=N}")
    run.add_argument("--alert-threshold", type=float, metavar="T")
    run.add_argument("--format", choices=["csv", "json"], default="csv")
    run.add_argument("--strict", action="store_true", help="fail on any rejected record")
    run.add_argument("--output", "-o", default="-", help="snapshot destination (default stdout)")
    run.add_argument("--top", type=int, metavar="N", help="only snapshot the N largest buffers")
    run.set_defaults(func=cmd_run)

    synth = sub.add_parser("synth", help="generate a synthetic interaction stream")
    synth.add_argument("output", help="destination file, or - for stdout")
    synth.add_argument("--vertices", type=int, required=True)
    synth.add_argument("--interactions", type=int, required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--shape", choices=SHAPES, default="uniform")
    synth.set_defaults(func=cmd_synth)
    return parser


def _parse_budget(text: str) -> BudgetSpec:
    capacity = None
    fraction = 0.7
    for part in text.split(","):
        key, _, value = part.partition("=")
        key = key.strip().lower()
        if key == "c":
            capacity = int(value)
        elif key == "f":
            fraction = float(value)
        else:
            raise ValueError(f"unknown budget field {key!r}")
    if capacity is None:
        raise ValueError("budget needs C=<int>")
    return BudgetSpec(capacity, fraction)


def _load_scope(args, table: VertexTable, stream) -> Optional[ScopeMap]:
    if args.selective:
        if args.selective.startswith("topk="):
            k = int(args.selective[5:])
            gen = generated_totals(stream, len(table))
            ranked = sorted(range(len(table)), key=lambda v: (-gen[v], v))
            tracked = ranked[:k]
        else:
            with open(args.selective, encoding="utf-8") as fh:
                labels = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
            tracked = [table.index_of(label) for label in labels]
        return ScopeMap.selective(tracked, len(table), labels=table.labels)
    if args.groups:
        group_names: dict[str, int] = {}
        group_of: dict[int, int] = {}
        with open(args.groups, encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or row[0].startswith("#"):
                    continue
                label, group = row[0].strip(), row[1].strip()
                gid = group_names.setdefault(group, len(group_names))
                if label in table:
                    group_of[table.index_of(label)] = gid
        return ScopeMap.grouped(group_of, len(table), group_labels=list(group_names))
    return None


def _origin_label(origin: int, table: VertexTable, scope: Optional[ScopeMap]) -> str:
    if origin == UNKNOWN:
        return UNKNOWN_LABEL
    if scope is not None:
        return scope.slot_labels[origin]
    return table.label_of(origin)


def _snapshot_rows(engine, table: VertexTable, scope, with_paths: bool, top: Optional[int]):
    """Yield snapshot dicts with field order vertex,origin,quantity[,birth_time][,path]."""
    eps = engine.epsilon
    vertices = [v for v in range(engine.n_vertices) if engine.totals[v] > eps]
    if top is not None:
        vertices = sorted(vertices, key=lambda v: -engine.totals[v])[:top]
    for v in vertices:
        vlabel = table.label_of(v)
        if engine.policy is Policy.NOPROV:
            yield {"vertex": vlabel, "origin": "", "quantity": engine.totals[v]}
            continue
        if with_paths:
            for origin, qty, path in engine.snapshot_paths(v):
                yield {
                    "vertex": vlabel,
                    "origin": table.label_of(origin),
                    "quantity": qty,
                    "path": "|".join(table.label_of(x) for x in path),
                }
            continue
        for item in engine.snapshot(v):
            if len(item) == 3:  # (origin, birth_time, quantity)
                origin, birth, qty = item
                yield {
                    "vertex": vlabel,
                    "origin": table.label_of(origin),
                    "quantity": qty,
                    "birth_time": birth,
                }
            else:
                origin, qty = item
                yield {
                    "vertex": vlabel,
                    "origin": _origin_label(origin, table, scope),
                    "quantity": qty,
                }


def _emit(rows, fmt: str, out: TextIO, header: Optional[str] = None) -> None:
    rows = list(rows)
    if fmt == "json":
        out.write(json.dumps({"after": header, "rows": rows} if header else rows))
        out.write("\n")
        return
    if header:
        out.write(f"# {header}\n")
    fields = ["vertex", "origin", "quantity"]
    if any("birth_time" in r for r in rows):
        fields.append("birth_time")
    if any("path" in r for r in rows):
        fields.append("path")
    writer = csv.DictWriter(out, fieldnames=fields)
    writer.writeheader()
    for r in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})


def cmd_run(args, parser) -> int:
    policy = Policy(args.policy)
    try:
        budget = _parse_budget(args.budget) if args.budget else None
    except (ValueError, ConfigError) as exc:
        parser.error(f"bad --budget: {exc}")

    every_k = None
    if args.snapshot_at != "end":
        if not args.snapshot_at.startswith("every-k="):
            parser.error("--snapshot-at takes 'end' or 'every-k=N'")
        every_k = int(args.snapshot_at[8:])
        if every_k < 1:
            parser.error("every-k must be positive")
    if args.alert_threshold is not None:
        if policy not in PROPORTIONAL_POLICIES:
            parser.error("--alert-threshold requires a proportional policy")
        if every_k is not None:
            parser.error("--alert-threshold cannot be combined with every-k snapshots")

    if args.input == "-":
        table, stream, rejected = parse_stream(sys.stdin)
    else:
        with open(args.input, encoding="utf-8") as fh:
            table, stream, rejected = parse_stream(fh)
    for rec in rejected:
        print(f"line {rec.line_no}: rejected ({rec.reason}): {rec.line}", file=sys.stderr)
    if rejected and args.strict:
        print(f"{len(rejected)} record(s) rejected (strict mode)", file=sys.stderr)
        return 1
    stream = sort_check(stream)

    try:
        scope = _load_scope(args, table, stream)
        cfg = EngineConfig(
            policy=policy,
            scope=scope,
            window=args.window,
            budget=budget,
            track_paths=args.paths,
            coalesce=args.coalesce,
            epsilon=args.epsilon,
        )
        engine = build_engine(cfg, len(table))
    except (ConfigError, KeyError) as exc:
        parser.error(str(exc))

    out = sys.stdout if args.output == "-" else open(args.output, "w", encoding="utf-8")
    try:
        alerts = []
        started = time.perf_counter()
        if args.alert_threshold is not None:
            alerts = alert_scan(stream, engine, args.alert_threshold)
        elif every_k is not None:
            for i, r in enumerate(stream, start=1):
                engine.process(r)
                if i % every_k == 0:
                    _emit(
                        _snapshot_rows(engine, table, scope, args.paths, args.top),
                        args.format,
                        out,
                        header=f"after interaction {i}",
                    )
        else:
            engine.run(stream)
        wall = time.perf_counter() - started
        if every_k is None or (stream and len(stream) % every_k != 0):
            header = f"after interaction {len(stream)}" if every_k is not None else None
            _emit(
                _snapshot_rows(engine, table, scope, args.paths, args.top),
                args.format,
                out,
                header=header,
            )
        for a in alerts:
            print(
                f"alert: index={a.index} vertex={table.label_of(a.vertex)} "
                f"total={a.total:g} origins={a.contributing_origins}",
                file=sys.stderr,
            )
        print(build_report(engine, wall, alerts=len(alerts)).render(), file=sys.stderr)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_synth(args, parser) -> int:
    try:
        stream = synth_stream(args.vertices, args.interactions, args.seed, args.shape)
    except ValueError as exc:
        parser.error(str(exc))
    if args.output == "-":
        write_stream(sys.stdout, stream)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            write_stream(fh, stream)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
