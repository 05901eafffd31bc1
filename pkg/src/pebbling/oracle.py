"""Ground-truth engines for small inputs: exact pebbling numbers, exhaustive
and heuristic balanced separators, and enumeration of every small DAG."""

from __future__ import annotations

import itertools
import time
from collections import deque
from collections.abc import Iterator
from dataclasses import dataclass

from pebbling.graph import Dag, induced_subdag, weak_components


@dataclass(frozen=True)
class SearchBudget:
    max_pebbles: int = 16
    max_states: int = 2_000_000
    timeout: float = 60.0  # seconds

    def __post_init__(self) -> None:
        if self.max_pebbles <= 0 or self.max_states <= 0 or self.timeout <= 0:
            raise ValueError("search budget fields must be positive")


@dataclass(frozen=True)
class OracleResult:
    """``value`` is the exact pebbling number, or ``None`` when the search
    gave up (``reason`` says which cap was hit)."""

    value: int | None
    states: int
    reason: str | None = None

    @property
    def exact(self) -> bool:
        return self.value is not None


class _Exceeded(Exception):
    pass


def optimal_pebbles(dag: Dag, budget: SearchBudget = SearchBudget()) -> OracleResult:
    """Least number of pebbles admitting a full schedule (slides allowed).

    Iterative deepening on the pebble count; each round is a depth-first
    search over ``(configuration, covered)`` states. A state is dropped when
    one with the same configuration and a superset of covered vertices was
    already reached.
    """
    if dag.n == 0:
        return OracleResult(0, 0)
    index = {v: i for i, v in enumerate(dag.vertices)}
    n = dag.n
    pmask = [0] * n
    plist: list[tuple[int, ...]] = [()] * n
    for v, i in index.items():
        ps = tuple(index[u] for u in dag.preds(v))
        plist[i] = ps
        for j in ps:
            pmask[i] |= 1 << j
    full = (1 << n) - 1
    deadline = time.monotonic() + budget.timeout
    states = 0

    def feasible(limit: int) -> bool:
        nonlocal states
        seen: dict[int, list[int]] = {}
        stack = [(0, 0)]
        while stack:
            config, covered = stack.pop()
            frontier = seen.setdefault(config, [])
            if any(c | covered == c for c in frontier):
                continue
            frontier[:] = [c for c in frontier if c | covered != covered]
            frontier.append(covered)
            states += 1
            if states > budget.max_states:
                raise _Exceeded("max_states")
            if states & 0x3FFF == 0 and time.monotonic() > deadline:
                raise _Exceeded("timeout")
            count = config.bit_count()
            for i in range(n):
                bit = 1 << i
                if config & bit:
                    stack.append((config & ~bit, covered))
            for i in range(n):
                bit = 1 << i
                if config & bit or pmask[i] & ~config:
                    continue
                cov = covered | bit
                if cov == full:
                    return True
                for j in plist[i]:
                    stack.append(((config | bit) & ~(1 << j), cov))
                if count < limit:
                    stack.append((config | bit, cov))
        return False

    lower = max(1, dag.d)
    try:
        for limit in range(lower, min(n, budget.max_pebbles) + 1):
            if feasible(limit):
                return OracleResult(limit, states)
    except _Exceeded as exc:
        return OracleResult(None, states, str(exc))
    return OracleResult(None, states, "max_pebbles")


# -- separators ----------------------------------------------------------

def _balanced(n: int, size: int) -> bool:
    return 3 * size <= 2 * n


def _pack(sizes: list[int], n: int) -> list[int] | None:
    """Indices of components forming the left side so that both sides are at
    most ``2n/3``; the most even split wins, then the lexicographically first
    choice of components."""
    total = sum(sizes)
    reach: dict[int, tuple[int, ...]] = {0: ()}
    for i, s in enumerate(sizes):
        for acc, picked in list(reach.items()):
            reach.setdefault(acc + s, picked + (i,))
    best = None
    for acc in sorted(reach):
        if _balanced(n, acc) and _balanced(n, total - acc):
            key = (max(acc, total - acc), acc)
            if best is None or key < best[0]:
                best = (key, reach[acc])
    return None if best is None else list(best[1])


def _split(dag: Dag, removed: set[int]) -> tuple[set[int], set[int]] | None:
    rest = induced_subdag(dag, [v for v in dag.vertices if v not in removed])
    comps = weak_components(rest) if rest.n else []
    picked = _pack([len(c) for c in comps], dag.n)
    if picked is None:
        return None
    left = {v for i in picked for v in comps[i]}
    right = set(rest.vertices) - left
    return left, right


def brute_force_separator(dag: Dag) -> tuple[set[int], set[int], set[int]]:
    """A smallest separator ``(L, S, R)``: candidate ``S`` sets are tried by
    size and then in lexicographic order; the first that admits a balanced
    packing of the remaining components is returned."""
    verts = dag.vertices
    for k in range(len(verts) + 1):
        for sep in itertools.combinations(verts, k):
            sides = _split(dag, set(sep))
            if sides is not None:
                return sides[0], set(sep), sides[1]
    raise AssertionError("unreachable: S = V always separates")


def _bfs_layers(dag: Dag, comp: set[int], start: int) -> list[list[int]]:
    dist = {start: 0}
    layers = [[start]]
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in dag.preds(v) + dag.succs(v):
            if w in comp and w not in dist:
                dist[w] = dist[v] + 1
                if dist[w] == len(layers):
                    layers.append([])
                layers[dist[w]].append(w)
                queue.append(w)
    return layers


def heuristic_separator(dag: Dag) -> tuple[set[int], set[int], set[int]]:
    """Balanced separator from breadth-first layers; no size guarantee.

    If the components already pack into two balanced sides the separator is
    empty. Otherwise the largest component is layered by breadth-first
    search from a far vertex (double sweep), and the smallest layer whose
    removal leaves a balanced packing is taken.
    """
    n = dag.n
    sides = _split(dag, set())
    if sides is not None:
        return sides[0], set(), sides[1]
    comps = weak_components(dag)
    big = set(max(comps, key=len))
    first = _bfs_layers(dag, big, min(big))
    layers = _bfs_layers(dag, big, min(first[-1]))
    half = n / 2
    candidates = []
    before = 0
    for j, layer in enumerate(layers):
        candidates.append((len(layer), abs(before + len(layer) / 2 - half), j))
        before += len(layer)
    for _, _, j in sorted(candidates):
        sides = _split(dag, set(layers[j]))
        if sides is not None:
            return sides[0], set(layers[j]), sides[1]
    # Two adjacent layers, then the whole component, then everything.
    for j in range(len(layers) - 1):
        sep = set(layers[j]) | set(layers[j + 1])
        sides = _split(dag, sep)
        if sides is not None:
            return sides[0], sep, sides[1]
    sides = _split(dag, big)
    if sides is not None:
        return sides[0], big, sides[1]
    return set(), set(dag.vertices), set()


# -- enumeration ---------------------------------------------------------

def enumerate_small_dags(n: int) -> Iterator[Dag]:
    """Every DAG on ``0..n-1`` whose edges go from lower to higher id:
    ``2**(n(n-1)/2)`` graphs."""
    if n < 0:
        raise ValueError("n must be non-negative")
    pairs = [(i, j) for j in range(n) for i in range(j)]
    for mask in range(1 << len(pairs)):
        yield Dag(range(n), [p for k, p in enumerate(pairs) if mask >> k & 1])
