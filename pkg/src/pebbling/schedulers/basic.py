"""Direct schedules: topological-order pebbling and the depth-recursive
strategy using ``l(d-1)+1`` pebbles."""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence

from pebbling.bounds import classic_depth_bound
from pebbling.graph import Dag, TopoOrder, boundary_profile, topological_sort
from pebbling.schedule import Move, Place, Remove, Schedule, Slide
from pebbling.schedulers.report import SchedulerReport


def release_lists(dag: Dag, seq: Sequence[int]) -> list[tuple[int, ...]]:
    """For each position ``i`` of ``seq``, the vertices among ``seq[:i+1]``
    that have no successor in ``seq[i+1:]`` (successors outside ``seq`` are
    ignored) and so can be unpebbled right after ``seq[i]`` is placed."""
    rank = {v: i for i, v in enumerate(seq)}
    due: list[list[int]] = [[] for _ in seq]
    for i, v in enumerate(seq):
        last = max((rank[w] for w in dag.succs(v) if w in rank), default=i)
        due[last].append(v)
    return [tuple(sorted(vs)) for vs in due]


def topo_moves(seq: Sequence[int], releases: Sequence[Sequence[int]]) -> Iterator[Move]:
    for v, done in zip(seq, releases):
        yield Place(v)
        for u in done:
            yield Remove(u)


def topo_schedule(dag: Dag, order: TopoOrder | Sequence[int] | None = None) -> SchedulerReport:
    """Place vertices in topological order, removing each as soon as none of
    its successors is still to come. Exactly ``2n`` moves, emptying, and at
    most ``b(G, order) + 1`` pebbles."""
    seq = tuple(order) if order is not None else topological_sort(dag).order
    if order is not None:
        TopoOrder.checked(dag, seq)
    profile = boundary_profile(dag, seq)
    moves = tuple(topo_moves(seq, release_lists(dag, seq)))
    return SchedulerReport(
        Schedule(moves),
        profile.max_value + 1,
        2 * dag.n,
        "topo",
        {"boundary": profile.max_value},
    )


def depth_moves(dag: Dag) -> Iterator[Move]:
    """Pebble every sink in turn by recursively pebbling its predecessors.

    A vertex's predecessors are pebbled one after another while the earlier
    ones keep their pebbles; the vertex then receives a pebble slid from the
    last freshly pebbled predecessor and the other fresh ones are released.
    Already-pebbled vertices are reused rather than recomputed.
    """
    preds: Mapping[int, tuple[int, ...]] = dag.pred_map
    pebbled: set[int] = set()
    for sink in dag.sinks():
        # Frames: [vertex, next predecessor index, freshly pebbled preds].
        stack: list[list] = [[sink, 0, []]]
        while stack:
            frame = stack[-1]
            v, i, fresh = frame
            ps = preds[v]
            if i < len(ps):
                frame[1] = i + 1
                if ps[i] not in pebbled:
                    stack.append([ps[i], 0, []])
                continue
            stack.pop()
            if fresh:
                src = fresh[-1]
                yield Slide(src, v)
                pebbled.discard(src)
                for u in fresh[:-1]:
                    yield Remove(u)
                    pebbled.discard(u)
            else:
                yield Place(v)
            pebbled.add(v)
            if stack:
                stack[-1][2].append(v)
        yield Remove(sink)
        pebbled.discard(sink)


def depth_recursive_schedule(dag: Dag) -> SchedulerReport:
    depth = dag.depth
    return SchedulerReport(
        Schedule.lazy(lambda: depth_moves(dag)),
        classic_depth_bound(depth, dag.d),
        None,
        "depth-classic",
        {"depth": depth, "d": dag.d},
    )
