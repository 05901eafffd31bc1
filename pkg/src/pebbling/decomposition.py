"""Budget decompositions: ordered splits of a topological order whose
per-part maximum boundaries sum to at most a budget ``B``."""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from pebbling.graph import Dag, TopoOrder, boundary_profile, induced_subdag

Number = int | Fraction


@dataclass(frozen=True)
class Part:
    segment: tuple[int, ...]
    boundary: int

    def __len__(self) -> int:
        return len(self.segment)


@dataclass(frozen=True)
class BudgetDecomposition:
    parts: tuple[Part, ...]
    budget: Fraction
    # Levels of the recursion tree that produced the parts (1 = no split).
    levels: int = field(default=1, compare=False)

    @property
    def part_count(self) -> int:
        return len(self.parts)

    @property
    def boundary_sum(self) -> int:
        return sum(p.boundary for p in self.parts)

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(v for p in self.parts for v in p.segment)

    def space_bound(self, d: int) -> int:
        """Pebbles sufficient to pebble the DAG from this decomposition."""
        return self.boundary_sum + 1 + max(d - 1, 0) * (self.part_count - 1)

    def to_json(self) -> dict:
        return {
            "parts": [list(p.segment) for p in self.parts],
            "boundaries": [p.boundary for p in self.parts],
            "B": str(self.budget),
            "parts_count": self.part_count,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> BudgetDecomposition:
        parts = tuple(Part(tuple(seg), int(b)) for seg, b in zip(data["parts"], data["boundaries"]))
        return cls(parts, Fraction(data["B"]))


def part_boundary(dag: Dag, segment: Sequence[int]) -> int:
    """Maximum boundary of the sub-DAG induced by ``segment`` in segment order."""
    return boundary_profile(induced_subdag(dag, segment), segment).max_value


@dataclass
class SplitTrace:
    """Per-split record kept when tracing is requested (used by tests)."""

    level: int
    budget: Fraction
    edges: int
    prefix_edges: int
    suffix_edges: int


def decompose(
    dag: Dag,
    order: TopoOrder | Sequence[int],
    budget: Number,
    trace: list[SplitTrace] | None = None,
) -> BudgetDecomposition:
    """Recursively split ``order`` at its first maximum-boundary prefix until
    every piece fits its share of the budget.

    Child budgets are proportional to the number of edges left inside each
    half. Arithmetic on budgets is exact.
    """
    seq = tuple(order.order if isinstance(order, TopoOrder) else order)
    budget = Fraction(budget)
    if budget < 0:
        raise ValueError("budget must be non-negative")
    parts: list[Part] = []
    levels = 0

    # Explicit stack instead of recursion; right child is pushed first so
    # parts come out in order.
    stack: list[tuple[Dag, tuple[int, ...], Fraction, int]] = [(dag, seq, budget, 0)]
    while stack:
        sub, sub_seq, sub_budget, level = stack.pop()
        levels = max(levels, level + 1)
        profile = boundary_profile(sub, sub_seq)
        if profile.max_value <= sub_budget:
            parts.append(Part(sub_seq, profile.max_value))
            continue
        cut = profile.argmax
        pre, suf = sub_seq[:cut], sub_seq[cut:]
        g_pre, g_suf = induced_subdag(sub, pre), induced_subdag(sub, suf)
        if trace is not None:
            trace.append(SplitTrace(level, sub_budget, sub.m, g_pre.m, g_suf.m))
        total = g_pre.m + g_suf.m
        if total == 0:
            # Both halves edgeless: boundary 0 fits any budget.
            levels = max(levels, level + 2)
            parts.append(Part(pre, 0))
            parts.append(Part(suf, 0))
            continue
        stack.append((g_suf, suf, sub_budget * g_suf.m / total, level + 1))
        stack.append((g_pre, pre, sub_budget * g_pre.m / total, level + 1))
    return BudgetDecomposition(tuple(parts), budget, levels)


def merge_small_parts(dag: Dag, decomp: BudgetDecomposition, d: int) -> BudgetDecomposition:
    """Merge the leftmost part with fewer than ``d`` vertices into its right
    neighbour until only the last part may be smaller than ``d``.

    Boundaries of merged parts are recomputed. Each merge grows the boundary
    sum by at most ``d - 1`` while removing one part, so
    ``boundary_sum + 1 + (d - 1) * (parts - 1)`` never increases. The budget
    of the result is raised to the new boundary sum when merging exceeded it.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    segs = [list(p.segment) for p in decomp.parts]
    bounds = [p.boundary for p in decomp.parts]
    i = 0
    while i < len(segs) - 1:
        if len(segs[i]) >= d:
            i += 1
            continue
        segs[i] = segs[i] + segs.pop(i + 1)
        bounds.pop(i + 1)
        bounds[i] = part_boundary(dag, segs[i])
    parts = tuple(Part(tuple(s), b) for s, b in zip(segs, bounds))
    if parts == decomp.parts:
        return decomp
    new_sum = sum(bounds)
    return BudgetDecomposition(parts, max(decomp.budget, Fraction(new_sum)), decomp.levels)
