"""Schedule constructions, each returning a :class:`SchedulerReport`."""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction

from pebbling.graph import Dag
from pebbling.schedulers.basic import depth_recursive_schedule, release_lists, topo_schedule
from pebbling.schedulers.budget import (
    pebble_bounded_degree,
    pipeline_decompose_and_schedule,
    schedule_from_decomposition,
    select_budget,
)
from pebbling.schedulers.challenging import challenging_schedule, pebble_by_depth, pebble_general
from pebbling.schedulers.planar import check_separator, pebble_with_separator
from pebbling.schedulers.report import SchedulerReport


def _decomposition(dag: Dag, budget: Fraction | None = None) -> SchedulerReport:
    # Default budget: half the edges, i.e. at most four parts.
    if budget is None:
        budget = Fraction(dag.m, 2)
    return pipeline_decompose_and_schedule(dag, budget)


def _separator(kind: str) -> Callable[[Dag], SchedulerReport]:
    def run(dag: Dag) -> SchedulerReport:
        from pebbling import oracle

        fn = oracle.heuristic_separator if kind == "heuristic" else oracle.brute_force_separator
        return pebble_with_separator(dag, fn, f"separator-{kind}")

    return run


STRATEGIES: dict[str, Callable[..., SchedulerReport]] = {
    "topo": topo_schedule,
    "decomposition": _decomposition,
    "bounded-theorem1": lambda dag: pebble_bounded_degree(dag, "theorem1"),
    "bounded-lemma7": lambda dag: pebble_bounded_degree(dag, "lemma7"),
    "general": pebble_general,
    "depth-classic": depth_recursive_schedule,
    "depth": pebble_by_depth,
    "separator-heuristic": _separator("heuristic"),
    "separator-brute": _separator("brute"),
}


def run_strategy(name: str, dag: Dag, **options) -> SchedulerReport:
    try:
        fn = STRATEGIES[name]
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGIES)}") from None
    return fn(dag, **options)


__all__ = [
    "STRATEGIES",
    "SchedulerReport",
    "challenging_schedule",
    "check_separator",
    "depth_recursive_schedule",
    "pebble_bounded_degree",
    "pebble_by_depth",
    "pebble_general",
    "pebble_with_separator",
    "pipeline_decompose_and_schedule",
    "release_lists",
    "run_strategy",
    "schedule_from_decomposition",
    "select_budget",
    "topo_schedule",
]
