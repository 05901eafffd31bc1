"""Acceptance suite: eleven end-to-end checks at their stated sizes,
tolerances and time limits. Each prints one PASS/FAIL line.

Run under pytest, or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import is_topological, naive_boundary, random_dag  # noqa: E402
from pebbling.decomposition import decompose, merge_small_parts  # noqa: E402
from pebbling.errors import PreconditionError  # noqa: E402
from pebbling.generators import FAMILIES, InstanceSpec, generate  # noqa: E402
from pebbling.graph import Dag, induced_subdag, topological_sort  # noqa: E402
from pebbling.oracle import (  # noqa: E402
    SearchBudget,
    brute_force_separator,
    enumerate_small_dags,
    heuristic_separator,
    optimal_pebbles,
)
from pebbling.schedule import Place, Remove, Slide, simulate, verify_full  # noqa: E402
from pebbling.schedulers import (  # noqa: E402
    STRATEGIES,
    challenging_schedule,
    depth_recursive_schedule,
    pebble_bounded_degree,
    pebble_by_depth,
    pebble_general,
    pebble_with_separator,
    run_strategy,
    schedule_from_decomposition,
    topo_schedule,
)

mp = mpmath.mp.clone() if hasattr(mpmath.mp, "clone") else mpmath.mp


class Fail(Exception):
    pass


def need(cond, msg):
    if not cond:
        raise Fail(msg)


def full_run(dag, schedule):
    v = verify_full(dag, schedule)
    need(v.ok, f"verdict {v}")
    return v.metrics


def family_instances():
    sizes = {
        "chain": dict(n=40),
        "pyramid": dict(height=8),
        "grid": dict(height=7, width=9),
        "binary-in-tree": dict(height=6),
        "butterfly": dict(height=4),
        "layered-random": dict(layers=6, width=8, degree=3, seed=5),
        "heavy-tail-random": dict(n=300, seed=5),
    }
    assert set(sizes) == set(FAMILIES)
    return [generate(InstanceSpec(f, **kw)) for f, kw in sizes.items()]


# -- 1 ------------------------------------------------------------------

def topological_schedule_exactness():
    rng = random.Random(101)
    graphs = [random_dag(rng, rng.randint(1, 500), rng.randint(1, 8)) for _ in range(200)]
    graphs += family_instances()
    for g in graphs:
        order = topological_sort(g).order
        need(is_topological(g, order), "order is not topological")
        rep = topo_schedule(g)
        m = full_run(g, rep.schedule)
        b = max(_fast_boundary(g, order))
        need(m.moves == 2 * g.n, f"{m.moves} moves, n={g.n}")
        need(m.peak <= b + 1, f"peak {m.peak} > b+1 = {b + 1}")
        need(not m.final, "final configuration not empty")
    return f"{len(graphs)} graphs: 2n moves, peak <= b+1, emptying"


def _fast_boundary(g, order):
    # Same definition as helpers.naive_boundary, counted by last successor.
    rank = {v: i for i, v in enumerate(order)}
    last = [max((rank[w] for w in g.succs(v)), default=rank[v]) for v in order]
    diff = [0] * (len(order) + 1)
    for i, j in enumerate(last):
        diff[i] += 1
        diff[j] -= 1
    out, run = [], 0
    for i in range(len(order)):
        run += diff[i]
        out.append(run)
    return out


# -- 2 ------------------------------------------------------------------

def decomposition_contract():
    rng = random.Random(202)
    for trial in range(500):
        g = random_dag(rng, rng.randint(1, 300), rng.randint(1, 6))
        top = max(g.m, 1)
        budget = Fraction(rng.randint(1, 40 * top), 40)
        order = topological_sort(g).order
        dec = decompose(g, order, budget)
        k = math.floor(Fraction(g.m) / budget)
        need(sum(p.boundary for p in dec.parts) <= budget, f"trial {trial}: boundary sum over budget")
        need(dec.part_count <= min(g.n, 2 ** k), f"trial {trial}: {dec.part_count} parts, k={k}")
        need(tuple(v for p in dec.parts for v in p.segment) == order, f"trial {trial}: segments != order")
        need(dec.levels <= k + 1, f"trial {trial}: depth {dec.levels} > {k + 1}")
        if trial % 25 == 0:
            for p in dec.parts:
                sub = induced_subdag(g, p.segment)
                need(p.boundary == max(naive_boundary(sub, p.segment)), "part boundary mismatch")
    return "500 (dag, B) pairs: sum b <= B, parts <= min(n, 2^floor(m/B)), depth <= floor(m/B)+1"


# -- 3 ------------------------------------------------------------------

def decomposition_space_bound():
    rng = random.Random(303)
    done = 0
    while done < 200:
        g = random_dag(rng, rng.randint(2, 40), rng.randint(1, 4))
        if g.m == 0:
            continue
        budget = Fraction(rng.randint(1, 4 * g.m), 4)
        dec = decompose(g, topological_sort(g), budget)
        ell = dec.part_count
        if ell > 4:
            continue
        m = full_run(g, schedule_from_decomposition(g, dec).schedule)
        limit = sum(p.boundary for p in dec.parts) + 1 + (g.d - 1) * (ell - 1)
        need(m.peak <= limit, f"peak {m.peak} > {limit}")
        need(not m.final, "not emptying")
        done += 1
    return "200 decompositions with <= 4 parts: peak <= sum b + 1 + (d-1)(l-1), emptying"


# -- 4 ------------------------------------------------------------------

def _time_limit(n, d, ell):
    """2 d/(d-1) (n/L)^L with L = min(ell, ceil(n/d), n/e): exact rational
    when L is an integer, 80-digit arithmetic otherwise."""
    whole = min(ell, -(-n // d))
    with mpmath.workdps(80):
        if mpmath.mpf(whole) <= mpmath.mpf(n) / mpmath.e:
            return Fraction(2 * d, d - 1) * Fraction(n, whole) ** whole
        L = mpmath.mpf(n) / mpmath.e
        return 2 * mpmath.mpf(d) / (d - 1) * (mpmath.mpf(n) / L) ** L


def merged_time_bound_check():
    rng = random.Random(404)
    done, tight = 0, 0.0
    while done < 150:
        g = random_dag(rng, rng.randint(2, 30), rng.randint(2, 4))
        if g.d < 2:
            continue
        budget = Fraction(rng.randint(1, 4 * g.m), 4)
        dec = merge_small_parts(g, decompose(g, topological_sort(g), budget), g.d)
        ell = dec.part_count
        if ell > 3:
            continue
        m = full_run(g, schedule_from_decomposition(g, dec).schedule)
        limit = _time_limit(g.n, g.d, ell)
        with mpmath.workdps(80):
            ok = m.moves <= limit if isinstance(limit, Fraction) else mpmath.mpf(m.moves) <= limit
        need(ok, f"{m.moves} moves > {float(limit):.1f} (n={g.n}, d={g.d}, parts={ell})")
        tight = max(tight, m.moves / float(limit))
        done += 1
    return f"150 instances with <= 3 merged parts: moves within bound (max ratio {tight:.2f})"


# -- 5 ------------------------------------------------------------------

def challenging_vertex_bounds():
    rng = random.Random(505)
    inners = [topo_schedule, depth_recursive_schedule]
    for trial in range(100):
        g = random_dag(rng, rng.randint(1, 40), rng.randint(1, 6))
        W = set(rng.sample(g.vertices, rng.randint(0, min(4, g.n))))
        inner = inners[trial % 2]
        reduced = induced_subdag(g, [v for v in g.vertices if v not in W])
        if reduced.n:
            inner_m = simulate(reduced, inner(reduced).schedule)
            s1, t1 = inner_m.peak, inner_m.moves
        else:
            s1 = t1 = 0
        rep = challenging_schedule(g, W, inner)
        m = full_run(g, rep.schedule)
        need(m.peak <= s1 + len(W) + g.d, f"trial {trial}: peak {m.peak} > {s1}+{len(W)}+{g.d}")
        need(m.moves <= (len(W) + 1) * (t1 + g.n), f"trial {trial}: {m.moves} moves")
    return "100 (dag, W) pairs: peak <= S'+|W|+d, moves <= (|W|+1)(T'+n)"


# -- 6 ------------------------------------------------------------------

def heavy_tail_general():
    specs = [
        InstanceSpec("heavy-tail-random", n=n, degree=deg, hub_fraction=hf, seed=seed)
        for n, deg, hf in [(200, 2, 0.05), (500, 3, 0.05), (1000, 2, 0.1), (1500, 3, 0.05), (2000, 4, 0.05)]
        for seed in range(3)
    ]
    max_w = 0
    for spec in specs:
        g = generate(spec)
        hubs = {v for v in g.vertices if 2 ** g.in_degree(v) > g.m}
        need(hubs, f"{spec.label()}: no vertex of in-degree above log2 m")
        rep = pebble_general(g)
        W = set(rep.params["W"])
        need(W == hubs, "set-aside vertices differ from in-degree > log2 m")
        # |W| <= m / log2 m  <=>  m^|W| <= 2^m
        need(g.m ** len(W) <= 2 ** g.m, f"|W|={len(W)} exceeds m/log2 m")
        m = full_run(g, rep.schedule)
        need(m.peak <= rep.params["inner_S_bound"] + len(W) + g.d, f"{spec.label()}: peak {m.peak}")
        need(m.peak <= g.n, "peak above n")
        max_w = max(max_w, len(W))
    return f"{len(specs)} heavy-tail instances (n <= 2000, |W| up to {max_w}): peak <= S'_bound+|W|+d and <= n"


# -- 7 ------------------------------------------------------------------

def bounded_degree_constant():
    specs = [InstanceSpec("grid", height=2, width=w) for w in range(345, 465, 10)]
    specs += [
        InstanceSpec("grid", height=5, width=250),
        InstanceSpec("grid", height=8, width=150),
        InstanceSpec("grid", height=20, width=60),
        InstanceSpec("pyramid", height=45),
        InstanceSpec("butterfly", height=7),
        InstanceSpec("butterfly", height=8),
        InstanceSpec("layered-random", layers=10, width=90, degree=2, seed=1),
        InstanceSpec("layered-random", layers=8, width=100, degree=3, seed=2),
        InstanceSpec("layered-random", layers=12, width=80, degree=3, seed=3),
    ]
    split = 0
    for spec in specs:
        g = generate(spec)
        # Regime: m >= 2^10 and d <= log2(m)/3, i.e. 2^(3d) <= m.
        need(g.m >= 1 << 10 and 1 << (3 * g.d) <= g.m, f"{spec.label()} outside the regime")
        rep = pebble_bounded_degree(g, "lemma7")
        m = full_run(g, rep.schedule)
        with mpmath.workdps(60):
            ok = m.peak * mpmath.log(g.m, 2) <= mpmath.mpf("2.8125") * g.m
        need(ok, f"{spec.label()}: peak {m.peak} above 2.8125 m/log2 m")
        split += rep.params.get("parts_before_merge", 1) > 1
    return f"{len(specs)} instances ({split} split into several parts): peak <= 2.8125 m/log2 m"


# -- 8 ------------------------------------------------------------------

def _shallow_hub_dag(rng, depth, d, hubs):
    """A path of ``depth`` edges plus ``hubs`` vertices of in-degree ``d``
    fed by fresh sources and path vertices (never raising the depth)."""
    n = depth + 1
    edges = [(i, i + 1) for i in range(depth)]
    for _ in range(hubs):
        h = n
        n += 1
        from_path = rng.sample(range(depth), rng.randint(0, min(d, depth)))
        edges += [(p, h) for p in from_path]
        for _ in range(d - len(from_path)):
            edges.append((n, h))
            n += 1
    return Dag(range(n), edges)


def depth_regime():
    rng = random.Random(808)
    count = 0
    for depth in range(6, 16):
        for d in (8, 12):
            g = _shallow_hub_dag(rng, depth, d, rng.randint(1, 2))
            m, l = g.m, g.depth
            need((l, g.d) == (depth, d), "construction changed depth or degree")
            if 4 * l * m > d * d * (l - 1) ** 2:
                continue
            r = math.isqrt(4 * m * l)
            claimed = (r if r * r == 4 * m * l else r + 1) - l + 1 + d
            need(claimed < l * (d - 1) + 1, f"bound {claimed} not below l(d-1)+1")
            rep = pebble_by_depth(g)
            peak = full_run(g, rep.schedule).peak
            need(peak <= claimed, f"peak {peak} > {claimed} (m={m}, l={l}, d={d})")
            count += 1
    need(count >= 20, f"only {count} instances in the regime")
    return f"{count} instances with m <= d^2(l-1)^2/(4l): peak <= ceil(2 sqrt(ml)) - l + 1 + d < l(d-1)+1"


# -- 9 ------------------------------------------------------------------

def _grid(h, w):
    return generate(InstanceSpec("grid", height=h, width=w))


def _recording(separator, log):
    def run(dag):
        left, sep, right = separator(dag)
        need(left | sep | right == set(dag.vertices), "separator does not cover V")
        need(not any((u in left and v in right) or (u in right and v in left) for u, v in dag.edges()),
             "separator leaves a crossing edge")
        need(3 * max(len(left), len(right)) <= 2 * dag.n, "separator is unbalanced")
        log.append((len(sep), dag.n))
        return left, sep, right

    return run


def _planar_closed_form(n, d):
    with mpmath.workdps(60):
        s2, s3 = mpmath.sqrt(2), mpmath.sqrt(3)
        return 6 * (s2 + s3) * (1 + mpmath.sqrt(mpmath.mpf(2) / 3)) * mpmath.sqrt(n) + d


def separator_recursion():
    cases = [(h, w, heuristic_separator) for h in range(1, 13) for w in range(1, 13)]
    cases += [(h, w, brute_force_separator) for h in range(1, 5) for w in range(1, 5)]
    certified = 0
    for h, w, sep in cases:
        g = _grid(h, w)
        log = []
        rep = pebble_with_separator(g, _recording(sep, log))
        peak = full_run(g, rep.schedule).peak
        need(peak <= rep.space_bound, f"{h}x{w}: peak {peak} > recursion bound {rep.space_bound}")
        ok = all(s * s <= 8 * n for s, n in log)
        need(ok == rep.params["certified"], f"{h}x{w}: certificate flag disagrees")
        if ok:
            with mpmath.workdps(60):
                need(peak <= _planar_closed_form(g.n, g.d), f"{h}x{w}: peak above closed form")
            certified += 1
    return f"{len(cases)} grids up to 12x12: peak <= recursion bound; {certified} certified and within s(n,d)"


# -- 10 -----------------------------------------------------------------

def oracle_consistency():
    graphs = [g for n in range(1, 5) for g in enumerate_small_dags(n)]
    rng = random.Random(1010)
    pairs = [(i, j) for j in range(6) for i in range(j)]
    for _ in range(200):
        graphs.append(Dag(range(6), [p for p in pairs if rng.random() < 0.4]))
    checked = 0
    for g in graphs:
        opt = optimal_pebbles(g, SearchBudget(max_pebbles=6)).value
        need(opt is not None, "oracle gave up")
        for name in STRATEGIES:
            try:
                rep = run_strategy(name, g)
            except PreconditionError:
                continue
            m = full_run(g, rep.schedule)
            need(m.peak >= opt, f"{name}: peak {m.peak} below optimum {opt}")
            need(m.peak <= rep.space_bound, f"{name}: peak above claim")
            checked += 1
    return f"{len(graphs)} graphs, {checked} schedules: all legal and full, none below the optimum"


# -- 11 -----------------------------------------------------------------

SINGLE_PEBBLE = ["decomposition", "bounded-theorem1", "bounded-lemma7", "general", "depth-classic", "depth"]


def in_degree_one_exactness():
    rng = random.Random(1111)
    forests = [[k] for k in range(1, 31)]
    forests += [[rng.randint(1, 12) for _ in range(rng.randint(2, 6))] for _ in range(40)]
    runs = off = 0
    example = None
    for lengths in forests:
        edges, base = [], 0
        for k in lengths:
            edges += [(base + i, base + i + 1) for i in range(k - 1)]
            base += k
        g = Dag(range(base), edges)
        for name in SINGLE_PEBBLE:
            try:
                rep = run_strategy(name, g)
            except PreconditionError:
                continue
            m = full_run(g, rep.schedule)
            need(m.peak == 1, f"{name}: peak {m.peak} on chains {lengths}")
            runs += 1
            if m.moves != 2 * g.n:
                off += 1
                example = example or (name, lengths, m.moves, 2 * g.n)
    need(off == 0, f"peak 1 everywhere, but {off}/{runs} schedules miss 2n moves "
                   f"(e.g. {example[0]} on chains {example[1]}: {example[2]} moves vs {example[3]})")
    return f"{runs} schedules: peak 1 and 2n moves"


CRITERIA = [
    (1, "topological schedule: 2n moves, peak <= b+1", 10, topological_schedule_exactness),
    (2, "budget decomposition contract", 20, decomposition_contract),
    (3, "decomposition schedule space bound", 60, decomposition_space_bound),
    (4, "merged decomposition time bound", 60, merged_time_bound_check),
    (5, "challenging-vertex space and time bounds", 60, challenging_vertex_bounds),
    (6, "general in-degree pipeline on heavy-tail graphs", 120, heavy_tail_general),
    (7, "bounded-degree constant 2.8125 m/log2 m", 60, bounded_degree_constant),
    (8, "depth-based bound in its regime", 30, depth_regime),
    (9, "separator recursion on planar grids", 120, separator_recursion),
    (10, "consistency with exact pebbling numbers", 120, oracle_consistency),
    (11, "in-degree one: one pebble, exactly 2n moves", 5, in_degree_one_exactness),
]


def run_criterion(num, title, limit, fn):
    start = time.perf_counter()
    try:
        detail, ok = fn(), True
    except Fail as exc:
        detail, ok = str(exc), False
    elapsed = time.perf_counter() - start
    if ok and elapsed >= limit:
        ok, detail = False, f"{detail}; too slow"
    line = f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title}: {detail} ({elapsed:.1f}s, limit {limit}s)"
    return ok, line


@pytest.mark.parametrize(
    "num, title, limit, fn", CRITERIA, ids=[fn.__name__.replace("_", "-") for *_, fn in CRITERIA]
)
def test_criterion(num, title, limit, fn, capsys):
    ok, line = run_criterion(num, title, limit, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
