"""Shared graph builders and independent reference computations."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from pebbling.graph import Dag


def chain(n: int) -> Dag:
    return Dag(range(n), [(i, i + 1) for i in range(n - 1)])


def diamond() -> Dag:
    return Dag(range(4), [(0, 1), (0, 2), (1, 3), (2, 3)])


def grid(h: int, w: int) -> Dag:
    edges = [(i * w + j, i * w + j + 1) for i in range(h) for j in range(w - 1)]
    edges += [(i * w + j, (i + 1) * w + j) for i in range(h - 1) for j in range(w)]
    return Dag(range(h * w), edges)


def random_dag(rng: random.Random, n: int, max_indeg: int, shuffle: bool = True) -> Dag:
    """Each vertex draws up to ``max_indeg`` predecessors among earlier
    vertices; labels are then permuted so ids do not reveal the order."""
    perm = list(range(n))
    if shuffle:
        rng.shuffle(perm)
    edges = []
    for v in range(1, n):
        k = rng.randint(0, min(v, max_indeg))
        edges += [(perm[u], perm[v]) for u in rng.sample(range(v), k)]
    return Dag(range(n), edges)


def naive_boundary(dag: Dag, order) -> list[int]:
    """Boundary of every prefix straight from the definition."""
    order = list(order)
    out = []
    for i in range(1, len(order) + 1):
        prefix, suffix = set(order[:i]), set(order[i:])
        out.append(sum(1 for v in prefix if any(w in suffix for w in dag.succs(v))))
    return out


def is_topological(dag: Dag, order) -> bool:
    rank = {v: i for i, v in enumerate(order)}
    return sorted(rank) == list(dag.vertices) and all(rank[u] < rank[v] for u, v in dag.edges())


@st.composite
def dags(draw, min_n: int = 1, max_n: int = 12, max_indeg: int = 4) -> Dag:
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    edges = []
    for v in range(1, n):
        preds = draw(st.sets(st.integers(0, v - 1), max_size=min(v, max_indeg)))
        edges += [(perm[u], perm[v]) for u in preds]
    return Dag(range(n), edges)
