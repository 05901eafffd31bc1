"""Pebbling with a set ``W`` of challenging vertices set aside.

A schedule ``C'`` for ``G' = G - W`` is reused once per ``w`` in ``W``
(topological order): a filtered replay pebbles just the ancestors ``w``
needs, ``w`` is pebbled and kept, every other pebble is cleared. A final
unfiltered replay of ``C'`` covers the rest. The cost is ``|W| + d`` extra
pebbles on top of ``C'``.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass

from pebbling import bounds
from pebbling.errors import InnerScheduleError
from pebbling.graph import Dag, ancestors, induced_subdag, topological_sort
from pebbling.schedule import IllegalMoveError, Move, Place, Remove, Schedule, Slide, simulate
from pebbling.schedulers.basic import depth_recursive_schedule, topo_schedule
from pebbling.schedulers.report import SchedulerReport

Inner = Callable[[Dag], SchedulerReport] | SchedulerReport


@dataclass(frozen=True)
class Piece:
    """A stretch of a composite schedule.

    When ``guard`` is set, the stretch leaves the pebbles on every vertex
    outside ``guard`` as it found them, except that it may add pebbles on
    ``guard`` itself; a replay that only cares about vertices disjoint from
    ``guard`` can skip it.
    """

    schedule: Schedule
    guard: frozenset[int] | None = None


class PieceSchedule(Schedule):
    """A schedule assembled from :class:`Piece` objects, supporting pruned
    replays that skip pieces irrelevant to a vertex set."""

    __slots__ = ("pieces",)

    @classmethod
    def of(cls, pieces: Sequence[Piece]) -> PieceSchedule:
        pieces = tuple(pieces)
        s = cls.lazy(lambda: itertools.chain.from_iterable(p.schedule for p in pieces))
        s.pieces = pieces
        return s


def relevant_moves(schedule: Schedule, wanted: frozenset[int] | set[int]) -> Iterator[Move]:
    """Moves of ``schedule`` with every piece skipped whose guard misses
    ``wanted``; the skipped pieces do not change pebbles on ``wanted``."""
    if not isinstance(schedule, PieceSchedule):
        yield from schedule
        return
    for p in schedule.pieces:
        if p.guard is not None and p.guard.isdisjoint(wanted):
            continue
        yield from relevant_moves(p.schedule, wanted)


def _filtered(moves: Iterable[Move], scope: set[int], keep: frozenset[int], pebbled: set[int]) -> Iterator[Move]:
    """Replay ``moves`` restricted to ``scope`` without ever unpebbling
    ``keep``. ``pebbled`` is updated in place."""
    for mv in moves:
        kind = type(mv)
        if kind is Place:
            v = mv.v
            if v in scope and v not in pebbled:
                pebbled.add(v)
                yield mv
        elif kind is Remove:
            v = mv.v
            if v in pebbled and v not in keep:
                pebbled.remove(v)
                yield mv
        else:
            x, v = mv
            if v in scope and v not in pebbled:
                pebbled.add(v)
                if x in keep:
                    yield Place(v)
                else:
                    pebbled.remove(x)
                    yield mv
            elif x in pebbled and x not in keep:
                pebbled.remove(x)
                yield Remove(x)


def _block(inner: Schedule, w: int, scope: set[int], keep: frozenset[int]) -> Iterator[Move]:
    pebbled: set[int] = set()
    yield from _filtered(relevant_moves(inner, scope), scope, keep, pebbled)
    yield Place(w)
    for v in sorted(pebbled):
        yield Remove(v)


def compose(dag: Dag, reduced: Dag, w_order: Sequence[int], inner: Schedule) -> PieceSchedule:
    """The challenging-vertices schedule for ``dag`` from a full schedule
    ``inner`` of ``reduced`` (the sub-DAG without ``w_order``)."""
    pieces: list[Piece] = []
    for w in w_order:
        keep = frozenset(p for p in dag.preds(w) if p in reduced)
        scope = set(keep) | ancestors(reduced, keep) if keep else set()
        blk = Schedule.lazy(lambda w=w, scope=scope, keep=keep: _block(inner, w, scope, keep))
        if len(scope) <= 64:
            blk = blk.materialize()
        pieces.append(Piece(blk, frozenset((w,))))
    pieces.append(Piece(inner))
    return PieceSchedule.of(pieces)


def _inner_report(inner: Inner, reduced: Dag) -> SchedulerReport:
    if isinstance(inner, SchedulerReport):
        return inner
    if reduced.n == 0:
        return SchedulerReport(Schedule(), 0, 0, "empty", {})
    return inner(reduced)


def challenging_schedule(dag: Dag, W: Iterable[int], inner: Inner) -> SchedulerReport:
    """Schedule ``dag`` by pebbling each vertex of ``W`` once and keeping it.

    ``inner`` is a report for the reduced DAG, or a function producing one.
    Bounds use the inner schedule's measured peak ``S'`` and length ``T'``:
    ``S' + |W| + d`` pebbles and ``(|W|+1)(T'+n)`` moves.
    """
    W = set(W)
    unknown = W.difference(dag.vertices)
    if unknown:
        from pebbling.errors import UnknownVertexError

        raise UnknownVertexError(unknown)
    reduced = induced_subdag(dag, [v for v in dag.vertices if v not in W])
    rep = _inner_report(inner, reduced)
    try:
        metrics = simulate(reduced, rep.schedule)
    except IllegalMoveError as exc:
        raise InnerScheduleError(f"inner schedule is illegal on the reduced graph: {exc}") from exc
    if len(metrics.covered) != reduced.n:
        raise InnerScheduleError("inner schedule does not pebble every vertex of the reduced graph")
    rank = topological_sort(dag).rank
    w_order = sorted(W, key=rank.__getitem__)
    sched = compose(dag, reduced, w_order, rep.schedule)
    k = len(w_order)
    return SchedulerReport(
        sched,
        metrics.peak + k + dag.d,
        (k + 1) * (metrics.moves + dag.n),
        "challenging",
        {
            "W": w_order,
            "inner_strategy": rep.strategy,
            "inner_peak": metrics.peak,
            "inner_moves": metrics.moves,
            "inner_S_bound": rep.space_bound,
        },
    )


def pebble_general(dag: Dag) -> SchedulerReport:
    """Any in-degree: vertices with in-degree above ``log2 m`` are set aside
    and the rest is pebbled by the budget pipeline (``B = m/g(m)``, with
    ``m`` of the whole DAG) or, below ``2**12`` edges, in topological order.
    """
    from pebbling.schedulers.budget import SMALL_GRAPH_EDGES, pipeline_decompose_and_schedule

    m = dag.m
    if dag.d <= 1:
        # One pebble suffices; with m <= 1 the threshold log2 m would be 0.
        rep = depth_recursive_schedule(dag)
        rep.strategy = "general"
        rep.params.update(W=[], W_cap=_edges_over_log2(m))
        return rep
    W = [v for v in dag.vertices if bounds.exceeds_log2(dag.in_degree(v), m)]

    def inner(reduced: Dag) -> SchedulerReport:
        if reduced.d <= 1:
            return depth_recursive_schedule(reduced)
        if m < SMALL_GRAPH_EDGES:
            return topo_schedule(reduced)
        return pipeline_decompose_and_schedule(reduced, bounds.budget_m_over_g(m))

    rep = challenging_schedule(dag, W, inner)
    rep.strategy = "general"
    rep.params["W_cap"] = _edges_over_log2(m)
    return rep


def _edges_over_log2(m: int) -> int | None:
    """``floor(m / log2 m)``: the most vertices of in-degree above ``log2 m``."""
    if m < 2:
        return None
    return bounds.const_times_m_over_log2m_floor(1, 1, m)


def pebble_by_depth(dag: Dag) -> SchedulerReport:
    """Set aside vertices of in-degree at least ``sqrt(m/l)`` and pebble the
    rest with the depth-recursive strategy: at most
    ``ceil(2 sqrt(m l)) - l + 1 + d`` pebbles. Falls back to the plain
    depth-recursive schedule when that is no better than ``l(d-1)+1``.
    """
    m, depth, d = dag.m, dag.depth, dag.d
    classic = bounds.classic_depth_bound(depth, d)
    if depth == 0:
        rep = depth_recursive_schedule(dag)
        rep.strategy = "depth"
        return rep
    claimed = bounds.depth_sqrt_bound(m, depth, d)
    if claimed >= classic:
        rep = depth_recursive_schedule(dag)
        rep.strategy = "depth"
        rep.params.update(fallback="classic bound is smaller", sqrt_bound=claimed)
        return rep
    heavy = [v for v in dag.vertices if dag.in_degree(v) ** 2 * depth >= m]
    cap = bounds.ceil_sqrt(m * depth)
    heavy.sort(key=lambda v: (-dag.in_degree(v), v))
    W = heavy[:cap]
    rep = challenging_schedule(dag, W, depth_recursive_schedule)
    rep.strategy = "depth"
    rep.params.update(classic_bound=classic, measured_bound=rep.space_bound)
    rep.space_bound = min(rep.space_bound, claimed)
    return rep
