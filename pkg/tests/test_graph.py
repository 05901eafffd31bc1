import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import chain, dags, diamond, is_topological, naive_boundary
from pebbling.errors import CycleError, GraphError, OrderMismatchError, UnknownVertexError
from pebbling.graph import (
    Dag,
    TopoOrder,
    ancestors,
    boundary_profile,
    induced_subdag,
    topological_depth,
    topological_sort,
    weak_components,
)


def all_topological_orders(dag):
    return [p for p in itertools.permutations(dag.vertices) if is_topological(dag, p)]


class TestConstruction:
    def test_counts_and_degrees(self):
        g = diamond()
        assert (g.n, g.m, g.d) == (4, 4, 2)
        assert g.avg_in_degree == 1
        assert g.in_degree(3) == 2 and g.out_degree(0) == 2
        assert g.sources() == [0] and g.sinks() == [3]

    def test_in_degree_matches_stored_edges(self):
        g = diamond()
        for v in g.vertices:
            assert g.in_degree(v) == sum(1 for _, w in g.edges() if w == v)

    @pytest.mark.parametrize(
        "edges, exc",
        [([(0, 0)], GraphError), ([(0, 1), (0, 1)], GraphError), ([(0, 5)], UnknownVertexError)],
    )
    def test_rejects_malformed_edges(self, edges, exc):
        with pytest.raises(exc):
            Dag(range(2), edges)

    def test_cycle_is_reported(self):
        with pytest.raises(CycleError) as info:
            Dag(range(3), [(0, 1), (1, 2), (2, 0)])
        cyc = info.value.cycle
        assert sorted(cyc) == [0, 1, 2]
        assert "cycle detected" in str(info.value)

    def test_equality_ignores_edge_order(self):
        assert Dag(range(3), [(0, 1), (1, 2)]) == Dag(range(3), [(1, 2), (0, 1)])
        assert hash(Dag(range(3), [(0, 1)])) == hash(Dag(range(3), [(0, 1)]))


class TestTopologicalSort:
    def test_chain(self):
        assert topological_sort(chain(3)).order == (0, 1, 2)

    def test_singleton(self):
        assert topological_sort(Dag([0])).order == (0,)

    def test_diamond_is_smallest_id_first(self):
        orders = all_topological_orders(diamond())
        assert orders == [(0, 1, 2, 3), (0, 2, 1, 3)]
        assert topological_sort(diamond()).order == min(orders)

    @given(dags())
    def test_output_is_a_topological_permutation(self, g):
        order = topological_sort(g)
        assert is_topological(g, order)
        assert all(order.rank[v] == i for i, v in enumerate(order))

    @given(dags(max_n=6))
    def test_tie_break_gives_lexicographically_least_order(self, g):
        assert topological_sort(g).order == min(all_topological_orders(g))

    def test_checked_rejects_bad_sequences(self):
        with pytest.raises(OrderMismatchError):
            TopoOrder.checked(diamond(), [0, 1, 2])
        with pytest.raises(OrderMismatchError):
            TopoOrder.checked(diamond(), [1, 0, 2, 3])


class TestBoundaryProfile:
    def test_chain(self):
        p = boundary_profile(chain(3), (0, 1, 2))
        assert (p.values, p.max_value, p.argmax) == ((1, 1, 0), 1, 1)

    def test_diamond_matches_definition(self):
        g = diamond()
        p = boundary_profile(g, topological_sort(g))
        assert list(p.values) == naive_boundary(g, (0, 1, 2, 3)) == [1, 2, 2, 0]
        assert (p.max_value, p.argmax) == (2, 2)

    def test_isolated_vertices(self):
        p = boundary_profile(Dag(range(5)), range(5))
        assert p.values == (0,) * 5 and p.max_value == 0 and p.argmax == 1

    def test_boundary_can_exceed_suffix_length(self):
        # Two prefix vertices feed the single remaining vertex.
        p = boundary_profile(Dag(range(3), [(0, 2), (1, 2)]), (0, 1, 2))
        assert p.values == (1, 2, 0)

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatchError):
            boundary_profile(diamond(), (0, 1, 3))

    @given(dags(max_n=14), st.randoms(use_true_random=False))
    def test_scan_equals_definition_on_any_topological_order(self, g, rnd):
        # Random topological order: Kahn's algorithm with random tie-breaking.
        indeg = {v: g.in_degree(v) for v in g.vertices}
        ready = [v for v in g.vertices if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(rnd.randrange(len(ready)))
            order.append(v)
            for w in g.succs(v):
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
        p = boundary_profile(g, order)
        assert list(p.values) == naive_boundary(g, order)

    @given(dags(max_n=14))
    def test_profile_invariants(self, g):
        p = boundary_profile(g, topological_sort(g))
        order = topological_sort(g).order
        assert p.values[-1] == 0
        for i, b in enumerate(p.values, start=1):
            prefix = set(order[:i])
            crossing = sum(1 for u, v in g.edges() if u in prefix and v not in prefix)
            assert 0 <= b <= min(i, crossing)
        assert p.max_value == max(p.values) == p.values[p.argmax - 1]
        assert all(b < p.max_value for b in p.values[: p.argmax - 1])
        assert p.max_value <= g.m


class TestInducedSubdag:
    def test_examples(self):
        g = diamond()
        assert list(induced_subdag(g, {0, 1}).edges()) == [(0, 1)]
        sub = induced_subdag(g, {1, 2})
        assert sub.vertices == (1, 2) and sub.m == 0
        assert induced_subdag(g, g.vertices) == g

    def test_unknown_vertex(self):
        with pytest.raises(UnknownVertexError):
            induced_subdag(diamond(), {0, 9})

    @given(dags(max_n=10), st.data())
    def test_monotone_in_the_subset(self, g, data):
        b = data.draw(st.sets(st.sampled_from(g.vertices)))
        a = data.draw(st.sets(st.sampled_from(sorted(b)))) if b else set()
        ea, eb = set(induced_subdag(g, a).edges()), set(induced_subdag(g, b).edges())
        assert ea <= eb
        assert eb == {(u, v) for u, v in g.edges() if u in b and v in b}


class TestDepthAndReachability:
    def test_depth_examples(self):
        assert topological_depth(chain(4)) == 3
        assert topological_depth(Dag(range(4))) == 0
        assert diamond().depth == 2

    @given(dags(max_n=8))
    def test_depth_equals_longest_enumerated_path(self, g):
        def longest_from(v):
            return max((1 + longest_from(w) for w in g.succs(v)), default=0)

        assert g.depth == max(longest_from(v) for v in g.vertices)

    def test_ancestors_are_proper(self):
        g = diamond()
        assert ancestors(g, [3]) == {0, 1, 2}
        assert ancestors(g, [0]) == set()

    def test_weak_components(self):
        g = Dag(range(5), [(0, 2), (3, 1)])
        assert weak_components(g) == [[0, 2], [1, 3], [4]]
