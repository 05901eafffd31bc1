"""Immutable DAG type, topological orders and boundary profiles.

Vertex ids are integers. Graphs built by ingestion or the generators use the
dense range ``0..n-1``; induced sub-DAGs keep the ids of their parent, so a
``Dag`` may hold any set of integers.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from pebbling.errors import CycleError, GraphError, OrderMismatchError, UnknownVertexError


class Dag:
    """A directed acyclic graph with sorted predecessor/successor tuples.

    Construction rejects self-loops, duplicate edges, edges touching unknown
    vertices and directed cycles. Instances are never mutated afterwards.
    """

    def __init__(
        self,
        vertices: Iterable[int],
        edges: Iterable[tuple[int, int]] = (),
        names: Mapping[int, str] | None = None,
    ) -> None:
        verts = sorted(set(vertices))
        preds: dict[int, list[int]] = {v: [] for v in verts}
        succs: dict[int, list[int]] = {v: [] for v in verts}
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if u not in preds or v not in preds:
                raise UnknownVertexError({x for x in (u, v) if x not in preds})
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge {u} -> {v}")
            seen.add((u, v))
            preds[v].append(u)
            succs[u].append(v)
        self._vertices = tuple(verts)
        self._preds = {v: tuple(sorted(p)) for v, p in preds.items()}
        self._succs = {v: tuple(sorted(s)) for v, s in succs.items()}
        self._m = len(seen)
        self._names = dict(names) if names else {}
        # Raises CycleError for cyclic input; the order is reused by callers.
        self._order = _kahn(self)

    # -- basic accessors -------------------------------------------------
    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return self._m

    @cached_property
    def d(self) -> int:
        """Maximum in-degree (0 for an edgeless or empty graph)."""
        return max((len(p) for p in self._preds.values()), default=0)

    @property
    def avg_in_degree(self) -> Fraction:
        return Fraction(self._m, self.n) if self.n else Fraction(0)

    @cached_property
    def depth(self) -> int:
        return topological_depth(self)

    def preds(self, v: int) -> tuple[int, ...]:
        return self._preds[v]

    def succs(self, v: int) -> tuple[int, ...]:
        return self._succs[v]

    def in_degree(self, v: int) -> int:
        return len(self._preds[v])

    def out_degree(self, v: int) -> int:
        return len(self._succs[v])

    @property
    def pred_map(self) -> Mapping[int, tuple[int, ...]]:
        return self._preds

    @property
    def succ_map(self) -> Mapping[int, tuple[int, ...]]:
        return self._succs

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in self._vertices:
            for v in self._succs[u]:
                yield u, v

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._succs and v in self._succs[u]

    def __contains__(self, v: object) -> bool:
        return v in self._preds

    def name(self, v: int) -> str:
        return self._names.get(v, str(v))

    @property
    def names(self) -> Mapping[int, str]:
        return {v: self.name(v) for v in self._vertices}

    def sources(self) -> list[int]:
        return [v for v in self._vertices if not self._preds[v]]

    def sinks(self) -> list[int]:
        return [v for v in self._vertices if not self._succs[v]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return self._vertices == other._vertices and self._succs == other._succs

    def __hash__(self) -> int:
        return hash((self._vertices, frozenset(self.edges())))

    def __repr__(self) -> str:
        return f"Dag(n={self.n}, m={self.m}, d={self.d})"


@dataclass(frozen=True)
class TopoOrder:
    """A permutation of a DAG's vertices with every edge pointing forward."""

    order: tuple[int, ...]

    @cached_property
    def rank(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self) -> Iterator[int]:
        return iter(self.order)

    def __getitem__(self, i):
        return self.order[i]

    @classmethod
    def checked(cls, dag: Dag, order: Sequence[int]) -> TopoOrder:
        """Wrap ``order`` after verifying it is a topological order of ``dag``."""
        order = tuple(order)
        if len(order) != dag.n or set(order) != set(dag.vertices):
            raise OrderMismatchError("order is not a permutation of the DAG's vertices")
        rank = {v: i for i, v in enumerate(order)}
        for u, v in dag.edges():
            if rank[u] >= rank[v]:
                raise OrderMismatchError(f"edge {u} -> {v} points backwards in the order")
        return cls(order)


@dataclass(frozen=True)
class BoundaryProfile:
    """``values[i-1]`` is the boundary after the first ``i`` vertices.

    ``argmax`` is the 1-based index of the first prefix reaching ``max_value``.
    """

    values: tuple[int, ...]
    max_value: int
    argmax: int


def _kahn(dag: Dag) -> tuple[int, ...]:
    indeg = {v: len(p) for v, p in dag.pred_map.items()}
    ready = [v for v, k in indeg.items() if k == 0]
    heapq.heapify(ready)
    out: list[int] = []
    succ = dag.succ_map
    while ready:
        v = heapq.heappop(ready)
        out.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(out) != len(indeg):
        remaining = {v for v, k in indeg.items() if k > 0}
        raise CycleError(find_cycle(remaining, succ))
    return tuple(out)


def find_cycle(vertices: set[int], succ: Mapping[int, Iterable[int]]) -> list[int]:
    """Return one directed cycle inside ``vertices`` (which must contain one)."""
    # Every vertex left over by Kahn has a predecessor that is also left over,
    # so walking predecessors backwards must revisit a vertex.
    pred: dict[int, int] = {}
    for u in vertices:
        for v in succ[u]:
            if v in vertices:
                pred.setdefault(v, u)
    start = min(vertices)
    seen: dict[int, int] = {}
    walk: list[int] = []
    v = start
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        v = pred[v]
    cycle = walk[seen[v]:]
    cycle.reverse()
    return cycle


def topological_sort(dag: Dag) -> TopoOrder:
    """Kahn's algorithm, always releasing the smallest ready vertex id first."""
    return TopoOrder(dag._order)


def boundary_profile(dag: Dag, order: TopoOrder | Sequence[int]) -> BoundaryProfile:
    """Boundary sizes of every prefix of ``order`` in O(n + m).

    Each vertex with successors enters the boundary with a counter of its
    successors; the counter of a predecessor drops as each successor is
    scanned, and the vertex leaves the boundary when it reaches zero.
    """
    seq = order.order if isinstance(order, TopoOrder) else tuple(order)
    if len(seq) != dag.n or set(seq) != set(dag.vertices):
        raise OrderMismatchError("order is not a permutation of the DAG's vertices")
    pending = {v: len(s) for v, s in dag.succ_map.items()}
    preds = dag.pred_map
    size = 0
    values: list[int] = []
    best, best_at = 0, 1
    for i, v in enumerate(seq, start=1):
        if pending[v]:
            size += 1
        for u in preds[v]:
            pending[u] -= 1
            if pending[u] == 0:
                size -= 1
        values.append(size)
        if size > best:
            best, best_at = size, i
    return BoundaryProfile(tuple(values), best, best_at)


def induced_subdag(dag: Dag, subset: Iterable[int]) -> Dag:
    """The sub-DAG on ``subset`` with every edge of ``dag`` between its members."""
    keep = set(subset)
    missing = keep.difference(dag.pred_map)
    if missing:
        raise UnknownVertexError(missing)
    edges = [(u, v) for v in keep for u in dag.preds(v) if u in keep]
    return Dag(keep, edges, {v: dag.name(v) for v in keep})


def topological_depth(dag: Dag) -> int:
    """Number of edges on a longest directed path."""
    longest: dict[int, int] = {}
    preds = dag.pred_map
    for v in topological_sort(dag):
        longest[v] = max((longest[u] + 1 for u in preds[v]), default=0)
    return max(longest.values(), default=0)


def ancestors(dag: Dag, targets: Iterable[int]) -> set[int]:
    """Proper ancestors of the given vertices (targets themselves excluded
    unless they are ancestors of another target)."""
    out: set[int] = set()
    stack = [u for t in targets for u in dag.preds(t)]
    while stack:
        v = stack.pop()
        if v not in out:
            out.add(v)
            stack.extend(dag.preds(v))
    return out


def weak_components(dag: Dag) -> list[list[int]]:
    """Weakly connected components, each sorted, ordered by smallest id."""
    seen: set[int] = set()
    comps: list[list[int]] = []
    for s in dag.vertices:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in dag.preds(v) + dag.succs(v):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps
