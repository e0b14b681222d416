"""Tests for Gamma-graphs, Gamma-maps, finite actions, and their LCL translations."""

import random
from typing import Any

import pytest

from lclwork.exceptions import ColoringError, GroupError
from lclwork.gamma_graph import (
    FiniteAction,
    GammaGraph,
    VertexMap,
    action_table,
    action_to_gamma_graph,
    gamma_graph_to_lcl,
    is_gamma_map,
    lcl_to_gamma_graph,
    window_gamma_graph,
)
from lclwork.groups import FiniteGroup, FreeAbelian, FreeGroup, GenSet, Window, ball
from lclwork.lcl import (
    LCLInstance,
    WindowConfiguration,
    first_match_map,
    interaction_support,
    pi_sn_generate,
    verify_pi_coloring,
)
from lclwork.subshift import enumerate_window_configs

SUPPORT = [(-1,), (0,), (1,)]


class TestGammaGraph:
    """Tests for the GammaGraph container."""

    def test_build_and_query(self, z: FreeAbelian) -> None:
        """Test explicit edges and the default for labels outside the support."""
        graph = GammaGraph.build(z, ["a", "b"], [(1,)], [((1,), "a", "b")])
        assert graph.has_edge((1,), "a", "b")
        assert not graph.has_edge((1,), "b", "a")
        assert not graph.has_edge((7,), "a", "a")
        assert list(graph.edges()) == [((1,), "a", "b")]
        assert len(graph) == 1

    def test_cofinite_default(self, z: FreeAbelian) -> None:
        """Test that a cofinite graph has every edge labelled outside its support."""
        graph = GammaGraph.build(z, ["a"], [(1,)], [], cofinite=True)
        assert graph.has_edge((7,), "a", "a")
        assert not graph.has_edge((1,), "a", "a")

    def test_build_validation(self, z: FreeAbelian) -> None:
        """Test that labels must be in the support and endpoints must be vertices."""
        with pytest.raises(GroupError, match="support"):
            GammaGraph.build(z, ["a"], [(1,)], [((2,), "a", "a")])
        with pytest.raises(GroupError, match="endpoint"):
            GammaGraph.build(z, ["a"], [(1,)], [((1,), "a", "b")])
        with pytest.raises(GroupError, match="distinct"):
            GammaGraph.build(z, ["a", "a"], [(1,)], [])

    def test_payload(self, z: FreeAbelian) -> None:
        """Test the certificate form."""
        graph = GammaGraph.build(z, [0, 1], [(1,)], [((1,), 0, 1)])
        assert graph.to_payload() == {
            "vertices": [0, 1],
            "support": [[1]],
            "triples": [[[1], 0, 1]],
            "cofinite": False,
        }


class TestVertexMap:
    """Tests for VertexMap."""

    def test_from_mapping_requires_total_map(self, z: FreeAbelian) -> None:
        """Test that every vertex needs an image."""
        graph = GammaGraph.build(z, ["a", "b"], [], [])
        with pytest.raises(ColoringError, match="total"):
            VertexMap.from_mapping(graph, {"a": 0})

    def test_composition(self, z: FreeAbelian) -> None:
        """Test that composing with the identity changes nothing."""
        graph = GammaGraph.build(z, ["a", "b"], [], [])
        f = VertexMap.from_mapping(graph, {"a": "b", "b": "a"})
        assert VertexMap.identity(graph).then(f) == f
        assert f.then(f) == VertexMap.identity(graph)
        assert f("a") == "b"


class TestLclToGammaGraph:
    """Tests for the pattern graph of an instance."""

    def test_proper_coloring_pattern_graph(self, proper_two_coloring: LCLInstance) -> None:
        """Test the edges of the pattern graph of the proper two-coloring."""
        graph = lcl_to_gamma_graph(proper_two_coloring, SUPPORT)
        assert graph.cofinite
        assert sorted(graph.edges()) == [
            ((-1,), 0, 1),
            ((-1,), 1, 0),
            ((0,), 0, 0),
            ((0,), 1, 1),
            ((1,), 0, 1),
            ((1,), 1, 0),
        ]
        assert graph.has_edge((5,), 0, 0)


class TestIsGammaMap:
    """Tests for is_gamma_map."""

    def test_first_match_map_is_gamma_map(
        self, z: FreeAbelian, proper_two_coloring: LCLInstance
    ) -> None:
        """Test the first-match map of a valid coloring."""
        config = WindowConfiguration.from_values(Window.box(z, 5), [0, 1, 0, 1, 0])
        assignment = first_match_map(config, proper_two_coloring)
        source = window_gamma_graph(config.space, SUPPORT, points=list(assignment))
        target = lcl_to_gamma_graph(proper_two_coloring, SUPPORT)
        verdict = is_gamma_map(VertexMap.from_mapping(source, assignment), source, target)
        assert verdict.ok
        assert verdict.violation is None

    def test_constant_map_violation(
        self, z: FreeAbelian, proper_two_coloring: LCLInstance
    ) -> None:
        """Test that the first violating triple in lexicographic order is reported."""
        window = Window.box(z, 4)
        source = window_gamma_graph(window, SUPPORT)
        target = lcl_to_gamma_graph(proper_two_coloring, SUPPORT)
        constant = VertexMap.from_mapping(source, dict.fromkeys(window.points, 0))
        verdict = is_gamma_map(constant, source, target)
        assert not verdict.ok
        assert verdict.violation == ((-1,), (1,), (0,))

    def test_image_must_be_target_vertex(
        self, z: FreeAbelian, proper_two_coloring: LCLInstance
    ) -> None:
        """Test that images outside the target are rejected."""
        window = Window.box(z, 2)
        source = window_gamma_graph(window, SUPPORT)
        target = lcl_to_gamma_graph(proper_two_coloring, SUPPORT)
        f = VertexMap.from_mapping(source, dict.fromkeys(window.points, 9))
        with pytest.raises(ColoringError):
            is_gamma_map(f, source, target)

    def test_randomized_fragments(self, z: FreeAbelian, z2: FreeAbelian) -> None:
        """Test the Gamma-map property on 100 randomly drawn valid configurations."""
        rng = random.Random(0)
        cases: list[tuple[GenSet, int, Window, Window]] = [
            (ball(z, 1), 2, Window.box(z, 5, start=-2), Window.box(z, 9)),
            (ball(z, 1), 3, Window.box(z, 5, start=-2), Window.box(z, 7)),
            (ball(z, 1), 2, Window.box(z, 3, start=-1), Window.box(z, 8)),
            (ball(z2, 1), 2, Window.box(z2, 3, start=-1), Window.box(z2, 3)),
        ]
        pool: list[tuple[LCLInstance, GammaGraph, list[Any], WindowConfiguration]] = []
        for gen_set, n, pattern_window, window in cases:
            lcl = pi_sn_generate(gen_set, n, pattern_window)
            support = sorted(interaction_support(lcl))
            target = lcl_to_gamma_graph(lcl, support)
            configs, _ = enumerate_window_configs(lcl, window, limit=500)
            pool.extend((lcl, target, support, config) for config in configs)
        assert len(pool) >= 100
        for lcl, target, support, config in rng.sample(pool, 100):
            assert verify_pi_coloring(config, lcl).ok
            assignment = first_match_map(config, lcl)
            source = window_gamma_graph(config.space, support, points=list(assignment))
            f = VertexMap.from_mapping(source, assignment)
            assert is_gamma_map(f, source, target).ok


class TestFiniteAction:
    """Tests for finite actions."""

    def test_rotation(self, z: FreeAbelian, f2: FreeGroup) -> None:
        """Test that elements act through their words."""
        action = FiniteAction.rotation(z, 3)
        assert action.act((2,), 0) == 2
        assert action.act((-1,), 0) == 2
        assert FiniteAction.rotation(f2, 3).act((1, -2), 0) == 0
        assert action.points == (0, 1, 2)
        assert 2 in action
        assert 3 not in action

    def test_permutation_count(self, z2: FreeAbelian) -> None:
        """Test that one permutation per generator is required."""
        with pytest.raises(GroupError, match="generators"):
            FiniteAction(z2, 2, ((1, 0),))

    def test_permutations_must_be_permutations(self, z: FreeAbelian) -> None:
        """Test that non-bijective maps are rejected."""
        with pytest.raises(GroupError, match="permutation"):
            FiniteAction(z, 2, ((0, 0),))

    def test_free_abelian_generators_commute(self, z2: FreeAbelian) -> None:
        """Test that Z^2 needs commuting permutations."""
        with pytest.raises(GroupError, match="commute"):
            FiniteAction(z2, 3, ((1, 0, 2), (0, 2, 1)))

    def test_finite_group_relations(self) -> None:
        """Test that actions of finite groups must respect the table."""
        assert FiniteAction(FiniteGroup.cyclic(2), 2, ((1, 0),)).act(1, 0) == 1
        with pytest.raises(GroupError, match="relations"):
            FiniteAction(FiniteGroup.cyclic(3), 2, ((1, 0),))


class TestActionGraphs:
    """Tests for action_to_gamma_graph and gamma_graph_to_lcl."""

    def test_action_to_gamma_graph(self, z: FreeAbelian) -> None:
        """Test the Gamma-graph of a rotation."""
        action = FiniteAction.rotation(z, 3)
        graph = action_to_gamma_graph(z, action.points, action_table(action, SUPPORT), SUPPORT)
        assert len(graph) == 9
        assert graph.has_edge((1,), 2, 0)
        assert graph.has_edge((-1,), 0, 2)
        assert not graph.cofinite

    def test_identity_must_fix_points(self, z: FreeAbelian) -> None:
        """Test that a table moving points by the identity is rejected."""
        table = {((0,), 0): 1, ((0,), 1): 0}
        with pytest.raises(GroupError, match="identity"):
            action_to_gamma_graph(z, [0, 1], table, [(0,)])

    def test_incomplete_table(self, z: FreeAbelian) -> None:
        """Test that missing table entries are rejected."""
        with pytest.raises(GroupError, match="no valid value"):
            action_to_gamma_graph(z, [0, 1], {((1,), 0): 1}, [(1,)])

    def test_inconsistent_composition(self, z: FreeAbelian) -> None:
        """Test that the table must compose inside the support."""
        table = {((0,), x): x for x in range(3)}
        table |= {((1,), x): (x + 1) % 3 for x in range(3)}
        table |= {((2,), x): x for x in range(3)}
        with pytest.raises(GroupError, match="composes"):
            action_to_gamma_graph(z, range(3), table, [(0,), (1,), (2,)])

    def test_window_leaving_support(self, z: FreeAbelian) -> None:
        """Test that action_table rejects spaces that are not closed under the support."""
        with pytest.raises(GroupError):
            action_table(Window.box(z, 2), SUPPORT)

    def test_gamma_graph_to_lcl(self, z: FreeAbelian, z_ball1: GenSet) -> None:
        """Test the LCL of a two-vertex graph joined along both generators."""
        edges = [((0,), v, v) for v in (0, 1)]
        edges += [(g, v, 1 - v) for g in ((1,), (-1,)) for v in (0, 1)]
        graph = GammaGraph.build(z, [0, 1], SUPPORT, edges, cofinite=True)
        lcl = gamma_graph_to_lcl(graph, z_ball1)
        assert lcl.alphabet_size == 2
        assert [p.values for p in lcl.patterns] == [
            {(0,): 0, (-1,): 1, (1,): 1},
            {(0,): 1, (-1,): 0, (1,): 0},
        ]

    def test_gamma_graph_to_lcl_needs_cofinite(self, z: FreeAbelian, z_ball1: GenSet) -> None:
        """Test that graphs with a finite edge set are rejected."""
        graph = GammaGraph.build(z, [0], SUPPORT, [((0,), 0, 0)])
        with pytest.raises(GroupError, match="cofinite"):
            gamma_graph_to_lcl(graph, z_ball1)

    def test_gamma_graph_to_lcl_needs_cover(self, z: FreeAbelian, z_ball1: GenSet) -> None:
        """Test that S must cover the support of the graph."""
        graph = GammaGraph.build(z, [0], [(2,)], [], cofinite=True)
        with pytest.raises(GroupError, match="cover"):
            gamma_graph_to_lcl(graph, z_ball1)
