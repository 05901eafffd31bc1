"""Schedules built from budget decompositions.

The schedule for parts ``1..k`` is built from the schedule ``prev`` for parts
``1..k-1``. Each vertex ``u`` of part ``k`` whose predecessors reach back into
earlier parts gets its own replay of ``prev``: the replay runs up to the first
moment every such predecessor has been pebbled, with the last unpebbling of
each of them suppressed so they are all present; ``u`` is then pebbled by a
slide from one of them, the part-``k`` pebbles that are no longer needed are
released, the configuration of ``prev`` is restored, and the replay finishes.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from pebbling import bounds
from pebbling.decomposition import BudgetDecomposition, decompose, merge_small_parts
from pebbling.errors import PreconditionError
from pebbling.graph import Dag, TopoOrder, topological_sort
from pebbling.schedule import Move, Place, Remove, Schedule, Slide
from pebbling.schedulers.basic import depth_recursive_schedule, release_lists, topo_moves, topo_schedule
from pebbling.schedulers.report import SchedulerReport

# Levels whose estimated length stays below this are kept as tuples so the
# many replays of them iterate a tuple instead of re-running generators.
MATERIALIZE_LIMIT = 2_000_000

SMALL_GRAPH_EDGES = 1 << 12


@dataclass(frozen=True)
class _Replay:
    """How to splice one part-``k`` vertex into a replay of ``prev``."""

    stop: int  # index of the move in ``prev`` after which ``u`` is pebbled
    edits: dict[int, Move | None]  # replacement moves (None drops the move)
    source: int | None  # predecessor slid from; None places u directly
    restore: tuple[Move, ...]  # moves re-establishing prev's configuration


def _placed(move: Move) -> int | None:
    t = type(move)
    if t is Place:
        return move.v
    if t is Slide:
        return move.dst
    return None


def _unpebbled(move: Move) -> int | None:
    t = type(move)
    if t is Remove:
        return move.v
    if t is Slide:
        return move.src
    return None


def _plan_replays(dag: Dag, prev: Schedule, reach: Sequence[tuple[int, ...]]) -> list[_Replay | None]:
    """Scan ``prev`` twice and work out the replay for each vertex whose
    back-reaching predecessor set ``reach[i]`` is non-empty."""
    wanted = {w for ps in reach for w in ps}
    first: dict[int, int] = {}
    for j, mv in enumerate(prev):
        w = _placed(mv)
        if w in wanted and w not in first:
            first[w] = j
            if len(first) == len(wanted):
                break
    stops: dict[int, list[int]] = {}
    for i, ps in enumerate(reach):
        if ps:
            stops.setdefault(max(first[w] for w in ps), []).append(i)

    plans: list[_Replay | None] = [None] * len(reach)
    preds = dag.pred_map
    single_pred = dag.d <= 1
    pebbled: set[int] = set()
    last_off: dict[int, tuple[int, Move]] = {}
    last_stop = max(stops, default=-1)
    for j, mv in enumerate(prev):
        if j > last_stop:
            break
        w = _unpebbled(mv)
        if w is not None:
            pebbled.discard(w)
            if w in wanted:
                last_off[w] = (j, mv)
        w = _placed(mv)
        if w is not None:
            pebbled.add(w)
        for i in stops.get(j, ()):
            plans[i] = _replay_at(j, mv, reach[i], pebbled, last_off, preds, single_pred)
    return plans


def _replay_at(stop, move, reach, pebbled, last_off, preds, single_pred) -> _Replay:
    extras = [w for w in sorted(reach) if w not in pebbled]
    edits: dict[int, Move | None] = {}
    if extras:
        # Keep every missing predecessor pebbled by suppressing its last
        # unpebbling; a slide off it becomes a plain placement. Sliding from
        # a vertex whose suppressed move was a slide saves its clean-up move.
        extras.sort(key=lambda w: type(last_off[w][1]) is not Slide)
        for w in extras:
            j, mv = last_off[w]
            edits[j] = Place(mv.dst) if type(mv) is Slide else None
        source = extras[0]
        restore = tuple(Remove(w) for w in sorted(extras[1:]))
        return _Replay(stop, edits, source, restore)

    if not single_pred:
        # Nothing extra is pebbled, so the d-1 spare pebbles cover a plain
        # placement of u and the replay needs no repair.
        return _Replay(stop, edits, None, ())
    # In-degree one: slide from the predecessor, then rebuild it. If it was
    # itself reached by a slide, its source is rebuilt along its unique
    # ancestor chain, starting below the deepest ancestor still pebbled.
    source = _placed(move)
    if type(move) is Place:
        return _Replay(stop, edits, source, (Place(source),))
    via = move.src
    chain = [via]
    while preds[chain[-1]] and preds[chain[-1]][0] not in pebbled:
        chain.append(preds[chain[-1]][0])
    chain.reverse()
    restore = [Place(chain[0])]
    restore += [Slide(a, b) for a, b in zip(chain, chain[1:])]
    restore.append(Slide(via, source))
    return _Replay(stop, edits, source, tuple(restore))


def _splice(prev: Schedule, plan: _Replay, u: int, release: Sequence[int]) -> Iterator[Move]:
    it = iter(prev)
    edits = plan.edits
    for j, mv in enumerate(it):
        if j in edits:
            mv = edits[j]
            if mv is not None:
                yield mv
        else:
            yield mv
        if j == plan.stop:
            break
    yield Place(u) if plan.source is None else Slide(plan.source, u)
    for v in release:
        yield Remove(v)
    yield from plan.restore
    yield from it


def _extend(dag: Dag, prev: Schedule, prev_len: int | None, seg: tuple[int, ...], earlier: set[int]):
    releases = release_lists(dag, seg)
    reach = [tuple(p for p in dag.preds(u) if p in earlier) for u in seg]
    if not any(reach):
        tail = Schedule(topo_moves(seg, releases))
        total = None if prev_len is None else prev_len + len(tail)
        return prev + tail, total
    plans = _plan_replays(dag, prev, reach)

    def moves() -> Iterator[Move]:
        for u, plan, release in zip(seg, plans, releases):
            if plan is None:
                yield Place(u)
                for v in release:
                    yield Remove(v)
            else:
                yield from _splice(prev, plan, u, release)

    sched = Schedule.lazy(moves)
    if prev_len is not None:
        replays = sum(p is not None for p in plans)
        estimate = replays * (prev_len + 2 * len(seg)) + 2 * len(seg)
        if estimate <= MATERIALIZE_LIMIT:
            sched = sched.materialize()
            return sched, len(sched)
    return sched, None


def schedule_from_decomposition(dag: Dag, decomp: BudgetDecomposition) -> SchedulerReport:
    """Emptying full schedule using at most
    ``sum(boundaries) + 1 + (d-1)(parts-1)`` pebbles."""
    segs = [p.segment for p in decomp.parts]
    TopoOrder.checked(dag, [v for s in segs for v in s])
    first = segs[0]
    sched = Schedule(topo_moves(first, release_lists(dag, first)))
    length: int | None = len(sched)
    earlier = set(first)
    for seg in segs[1:]:
        sched, length = _extend(dag, sched, length, seg, earlier)
        earlier.update(seg)
    sizes = [len(s) for s in segs]
    return SchedulerReport(
        sched,
        decomp.space_bound(dag.d),
        None,
        "decomposition",
        {
            "B": decomp.budget,
            "parts": decomp.part_count,
            "part_sizes": sizes,
            "boundaries": [p.boundary for p in decomp.parts],
            "replay_count": bounds.merged_move_count(sizes),
        },
    )


def pipeline_decompose_and_schedule(
    dag: Dag, budget: int | Fraction, order: TopoOrder | Sequence[int] | None = None
) -> SchedulerReport:
    """Decompose with budget ``B``, merge parts smaller than ``d``, and build
    the replay schedule.

    The space bound reported is ``floor(B) + 1 + (d-1)(parts-1)`` with the
    part count actually produced; ``params["closed_form_space"]`` holds the
    worst case over all decompositions, with ``2**floor(m/B)`` parts.
    """
    budget = Fraction(budget)
    if budget < 0:
        raise ValueError("budget must be non-negative")
    d = dag.d
    if d <= 1:
        rep = depth_recursive_schedule(dag)
        rep.strategy = "decomposition"
        rep.params.update(B=budget, note="in-degree <= 1: single-pebble chains")
        return rep
    seq = tuple(order) if order is not None else topological_sort(dag).order
    decomp = decompose(dag, seq, budget)
    merged = merge_small_parts(dag, decomp, d)
    rep = schedule_from_decomposition(dag, merged)
    rep.space_bound = math.floor(budget) + 1 + (d - 1) * (decomp.part_count - 1)
    rep.move_bound = bounds.as_int_bound(bounds.decomposition_time_bound(dag.n, dag.m, d, budget))
    rep.params.update(
        parts_before_merge=decomp.part_count,
        levels=decomp.levels,
        closed_form_space=bounds.decomposition_space_bound(budget, dag.m, d),
    )
    return rep


def select_budget(m: int, d: int, space: int) -> Fraction | None:
    """Largest ``B`` in ``[0, m]`` with ``B + 1 + (d-1)(2**floor(m/B) - 1) <= S``.

    On ``(m/(k+1), m/k]`` the exponent is ``k`` and the cost grows with ``B``,
    so the first ``k`` whose piece contains a feasible point gives the answer.
    """
    if m < 1 or d < 1 or space < 1:
        raise ValueError("m, d and S must be positive")
    m_ = Fraction(m)
    for k in range(1, m + 1):
        cap = space - 1 - (d - 1) * ((1 << k) - 1)
        if cap <= 0 and d >= 2:
            break
        lo, hi = m_ / (k + 1), m_ / k
        if cap > lo:
            return min(hi, Fraction(cap))
    # Only B = 0 remains; its cost is 1 when d == 1 and unbounded otherwise.
    return Fraction(0) if d == 1 and space >= 1 else None


def pebble_bounded_degree(
    dag: Dag, mode: str = "theorem1", order: TopoOrder | Sequence[int] | None = None
) -> SchedulerReport:
    """Budget pipeline with ``B = m/g(m)`` (``theorem1``) or ``B = 2m/log2 m``
    (``lemma7``). In-degree at most one is pebbled with a single pebble."""
    m, d = dag.m, dag.d
    if d <= 1:
        rep = depth_recursive_schedule(dag)
        rep.strategy = f"bounded-{mode}"
        return rep
    if mode == "theorem1":
        if m < SMALL_GRAPH_EDGES:
            rep = topo_schedule(dag, order)
            rep.strategy = "bounded-theorem1"
            rep.params["fallback"] = "m < 2**12: topological order"
            return rep
        if bounds.exceeds_log2(d, m):
            raise PreconditionError(
                f"theorem1 needs d <= log2 m (d={d}, m={m}); use pebble_general"
            )
        rep = pipeline_decompose_and_schedule(dag, bounds.budget_m_over_g(m), order)
    elif mode == "lemma7":
        if m <= 1 or not bounds.at_most_log2_fraction(d, m, 3):
            raise PreconditionError(
                f"lemma7 needs m > 1 and d <= log2(m)/3 (d={d}, m={m}); use pebble_general"
            )
        rep = pipeline_decompose_and_schedule(dag, bounds.budget_2m_over_log2m(m), order)
        claimed = bounds.log_constant_space_bound(m)
        rep.params["instantiated_space"] = rep.space_bound
        rep.space_bound = min(rep.space_bound, claimed)
        rep.params["log_constant_space"] = claimed
        rep.params["log_constant_time"] = bounds.as_int_bound(bounds.log_constant_time_bound(dag.n, m))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    rep.strategy = f"bounded-{mode}"
    return rep
