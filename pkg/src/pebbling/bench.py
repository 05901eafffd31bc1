"""Benchmark harness: run strategies over generated instances and tabulate
claimed bounds against simulated peaks and move counts."""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor

from pebbling import bounds
from pebbling.errors import PebblingError, PreconditionError
from pebbling.generators import InstanceSpec, generate
from pebbling.schedule import IllegalMoveError, simulate
from pebbling.schedulers import run_strategy

COLUMNS = (
    "strategy", "family", "n", "m", "d", "S_bound", "peak", "T_bound", "moves", "ms",
    "status", "reason", "ref_m_log_m", "ref_loui",
)

# Schedules longer than this are not simulated to the end.
DEFAULT_MOVE_CAP = 5_000_000


def bench_row(strategy: str, spec: InstanceSpec, move_cap: int = DEFAULT_MOVE_CAP) -> dict:
    """One table row. Scheduler failures are recorded in ``status`` and
    ``reason`` instead of being raised."""
    dag = generate(spec)
    row = dict.fromkeys(COLUMNS, "")
    row.update(
        strategy=strategy, family=spec.label(), n=dag.n, m=dag.m, d=dag.d,
        ref_m_log_m=_fmt(bounds.m_log_m_reference(dag.m, dag.d)),
        ref_loui=_fmt(bounds.loui_reference(dag.n, dag.d)),
    )
    start = time.perf_counter()
    try:
        rep = run_strategy(strategy, dag)
    except PreconditionError as exc:
        row.update(status="skipped", reason=str(exc))
        return row
    except PebblingError as exc:
        row.update(status="error", reason=str(exc))
        return row
    row["ms"] = f"{(time.perf_counter() - start) * 1000:.1f}"
    row["S_bound"] = rep.space_bound
    row["T_bound"] = "" if rep.move_bound is None else rep.move_bound
    try:
        metrics = simulate(dag, itertools.islice(rep.schedule, move_cap + 1))
    except IllegalMoveError as exc:
        row.update(status="error", reason=str(exc))
        return row
    row.update(peak=metrics.peak, moves=metrics.moves)
    if metrics.moves > move_cap:
        row.update(status="truncated", reason=f"more than {move_cap} moves", moves="")
    elif len(metrics.covered) != dag.n:
        row.update(status="error", reason="schedule is not full")
    elif metrics.peak > rep.space_bound:
        row.update(status="violated", reason="peak exceeds S_bound")
    elif rep.move_bound is not None and metrics.moves > rep.move_bound:
        row.update(status="violated", reason="moves exceed T_bound")
    else:
        row["status"] = "ok"
    return row


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else f"{x:.2f}"


def _row_args(args):
    return bench_row(*args)


def bench(
    strategies: Sequence[str],
    instances: Iterable[InstanceSpec],
    jobs: int = 1,
    move_cap: int = DEFAULT_MOVE_CAP,
) -> list[dict]:
    """Rows for every (instance, strategy) pair, in input order."""
    tasks = [(s, spec, move_cap) for spec in instances for s in strategies]
    if jobs <= 1 or len(tasks) <= 1:
        return [bench_row(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_row_args, tasks))


def to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
