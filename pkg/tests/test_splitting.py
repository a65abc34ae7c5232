import networkx as nx
import pytest

from utils import graph_core
from utils.config import Caps
from utils.errors import CapExceededError, HypothesisError, NotASplittingError
from utils.ideal_core import colon_by_linear_difference, edge_ideal
from utils.sweep import connected_graphs
from utils.splitting import (
    SplitOptions,
    SplittingMap,
    compare,
    component_images,
    edge_neighbor_preserved,
    enumerate_splittings,
    find_splitting_map,
    identity_splitting,
    merge_vertices,
    reduction_chain,
    specialness,
    splitting_count,
    splitting_from_json,
    splitting_to_json,
    verify_splitting,
)

SMALL_GRAPHS = [
    graph_core.path_graph(4),
    graph_core.path_graph(5),
    graph_core.cycle_graph(3),
    graph_core.cycle_graph(4),
    graph_core.cycle_graph(5),
    graph_core.star_graph(3),
    graph_core.make_graph(4, [(1, 2), (2, 3), (3, 1), (3, 4)]),
    graph_core.make_graph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 3)]),
]


def test_identity_is_valid_and_special(broom):
    candidate = identity_splitting(broom)
    assert verify_splitting(candidate).ok
    flags = specialness(candidate)
    assert flags.condition1 and flags.condition2


def test_broom_splitting(broom_split):
    assert verify_splitting(broom_split)
    assert broom_split.fibers[1] == (1, 10)
    flags = specialness(broom_split)
    assert flags.condition2
    assert not flags.condition1
    assert flags.special


@pytest.mark.parametrize("source, target, alpha, violation", [
    (graph_core.make_graph(4, [(1, 2), (3, 4)]), graph_core.path_graph(2), (1, 2, 1, 2), "edge_bijection"),
    (graph_core.path_graph(2), graph_core.edgeless_graph(2), (1, 2), "edges_to_edges"),
    (graph_core.path_graph(2), graph_core.path_graph(3), (1, 2), "surjective"),
    (graph_core.path_graph(2), graph_core.path_graph(2), (1,), "alpha_domain"),
    (graph_core.make_graph(3, [(1, 2)]), graph_core.path_graph(3), (1, 2, 3), "edge_bijection"),
])
def test_verify_reports_first_violation(source, target, alpha, violation):
    diagnostics = verify_splitting(SplittingMap(source, target, alpha))
    assert not diagnostics
    assert diagnostics.violation == violation
    assert diagnostics.witness


def test_specialness_needs_a_valid_map():
    bad = SplittingMap(graph_core.path_graph(2), graph_core.path_graph(3), (1, 2))
    with pytest.raises(NotASplittingError):
        specialness(bad)
    with pytest.raises(NotASplittingError):
        compare(bad)


def test_single_edge_has_one_splitting():
    splittings = list(enumerate_splittings(graph_core.path_graph(2)))
    assert len(splittings) == 1
    assert splittings[0].source == graph_core.path_graph(2)


def test_path_has_two_splittings(p3, two_k2):
    first, second = enumerate_splittings(p3)
    assert first.source == p3 and first.alpha == (1, 2, 3)
    assert second.source == two_k2
    assert second.alpha == (1, 2, 2, 3)


def test_triangle_has_eight_raw_splittings():
    triangle = graph_core.cycle_graph(3)
    assert splitting_count(triangle) == 8
    assert len(list(enumerate_splittings(triangle))) == 8


def test_isolated_vertices_are_carried_over():
    graph = graph_core.make_graph(3, [(1, 2)])
    (only,) = enumerate_splittings(graph)
    assert only.source.n == 3
    assert verify_splitting(only)


def test_padding_adds_isolated_vertices(p3):
    padded = list(enumerate_splittings(p3, SplitOptions(pad_isolated=2)))
    assert [c.source.n for c in padded] == [5, 6]
    assert all(verify_splitting(c) for c in padded)


def test_enumeration_guards():
    with pytest.raises(CapExceededError) as info:
        list(enumerate_splittings(graph_core.path_graph(9)))
    assert info.value.cap_name == "max_split_edges"
    with pytest.raises(CapExceededError) as info:
        list(enumerate_splittings(graph_core.star_graph(5), caps=Caps(max_splittings=10)))
    assert info.value.cap_name == "max_splittings"


def test_filters_and_source_cap(broom_split):
    triangle = graph_core.cycle_graph(3)
    special1 = list(enumerate_splittings(triangle, SplitOptions(splitting_filter="special1")))
    assert all(specialness(c).condition1 for c in special1)
    assert any(c.source.n == 4 for c in special1)
    special2 = list(enumerate_splittings(triangle, SplitOptions(splitting_filter="special2")))
    assert all(specialness(c).condition2 for c in special2)
    small = list(enumerate_splittings(triangle, SplitOptions(max_source_vertices=3)))
    assert len(small) == 1


def test_dedupe_up_to_automorphisms(p3):
    star = graph_core.star_graph(3)
    assert len(list(enumerate_splittings(star))) == 5
    assert len(list(enumerate_splittings(star, SplitOptions(dedupe=True)))) == 3
    assert len(list(enumerate_splittings(p3, SplitOptions(dedupe=True)))) == 2


@pytest.mark.parametrize("graph", SMALL_GRAPHS + [graph_core.complete_graph(4)])
def test_every_component_count_occurs(graph):
    counts = {len(graph_core.connected_components(c.source)) for c in enumerate_splittings(graph)}
    assert counts == set(range(1, graph.m + 1))


@pytest.mark.parametrize("graph", SMALL_GRAPHS)
def test_enumerated_splittings_keep_structure(graph):
    bipartite = nx.is_bipartite(graph.to_networkx())
    forest = nx.is_forest(graph.to_networkx())
    nu = graph_core.induced_matching_number(graph)
    bight = graph_core.bight(graph)
    for candidate in enumerate_splittings(graph):
        assert verify_splitting(candidate)
        assert edge_neighbor_preserved(candidate)
        assert nu <= graph_core.induced_matching_number(candidate.source)
        assert bight <= graph_core.bight(candidate.source)
        if bipartite:
            assert nx.is_bipartite(candidate.source.to_networkx())
        if forest:
            assert nx.is_forest(candidate.source.to_networkx())


def test_compare_identity_has_no_changes(c4):
    record = compare(identity_splitting(c4))
    assert all(record.verdicts().values())
    assert set(record.deltas().values()) == {0}
    assert record.violated() == []


def test_compare_broom_loses_depth(broom_split):
    record = compare(broom_split)
    assert record.target_report.depth == 3
    assert record.source_report.depth == 2
    assert not record.depth_ok
    assert record.pd_ok and record.reg_ok and record.dim_ok
    assert "depth" in record.violated()
    row = record.to_row()
    assert row["special2"] is True and row["depth_ok"] is False
    assert row["delta_depth"] == -1
    assert row["components_source"] == 2


def test_compare_path_with_its_split(p3):
    _, split = enumerate_splittings(p3)
    record = compare(split)
    assert all(record.verdicts().values())
    assert record.betti_totals_source == record.betti_totals_target == (2, 1)


def test_merge_vertices(two_k2, p3):
    merged = merge_vertices(two_k2, 2, 3)
    assert merged.target == p3
    assert merged.alpha == (1, 2, 2, 3)
    with pytest.raises(HypothesisError):
        merge_vertices(p3, 1, 2)
    with pytest.raises(HypothesisError):
        merge_vertices(p3, 1, 3)


def test_reduction_chain_of_broom(broom_split, broom):
    steps, residual = reduction_chain(broom_split)
    assert len(steps) == 1
    assert steps[0].target == broom
    assert residual.perm == tuple(range(1, 10))


@pytest.mark.parametrize("graph", [graph_core.cycle_graph(3), graph_core.complete_graph(4)])
def test_condition_one_survives_every_merge(graph):
    for candidate in enumerate_splittings(graph, SplitOptions(splitting_filter="special1")):
        steps, residual = reduction_chain(candidate)
        reduced = steps[-1].target if steps else candidate.source
        assert graph_core.relabel(reduced, residual) == graph
        for step in steps:
            assert specialness(step).condition1
            (x, y), = list(step.fiber_pairs())
            assert colon_by_linear_difference(step.source, x, y).gens == edge_ideal(step.source).gens


def test_component_images_cover_the_graph(broom_split, broom):
    images = component_images(broom_split)
    assert len(images) == 2
    assert [image.m for image in images] == [5, 3]
    assert frozenset().union(*(image.edges for image in images)) == broom.edges


def test_find_splitting_map():
    star = graph_core.star_graph(3)
    three_k2 = graph_core.make_graph(6, [(1, 2), (3, 4), (5, 6)])
    found = find_splitting_map(three_k2, star)
    assert found is not None and verify_splitting(found)
    assert find_splitting_map(graph_core.cycle_graph(3), graph_core.path_graph(4)) is None
    assert find_splitting_map(graph_core.path_graph(4), graph_core.cycle_graph(3)) is not None


def test_splitting_json(broom_split):
    assert splitting_from_json(splitting_to_json(broom_split)) == broom_split


def test_four_cycle_with_pendant_stars_splits_three_ways():
    # vertices 9, 10 and 11 are second copies of 1, 3 and 6
    target = graph_core.make_graph(8, [(1, 2), (2, 3), (3, 4), (1, 4), (4, 5), (4, 6), (6, 7), (6, 8)])
    source = graph_core.make_graph(11, [(1, 2), (2, 3), (4, 9), (4, 10), (4, 5), (4, 6), (7, 11), (8, 11)])
    candidate = SplittingMap(source, target, (1, 2, 3, 4, 5, 6, 7, 8, 1, 3, 6))
    assert verify_splitting(candidate)
    assert len(graph_core.connected_components(source)) == 3
    flags = specialness(candidate)
    assert flags.condition2
    assert not flags.condition1


@pytest.mark.slow
def test_splittings_keep_structure_up_to_six_edges():
    for graph in connected_graphs(6):
        bipartite = nx.is_bipartite(graph.to_networkx())
        forest = nx.is_forest(graph.to_networkx())
        nu = graph_core.induced_matching_number(graph)
        bight = graph_core.bight(graph)
        for candidate in enumerate_splittings(graph):
            source = candidate.source
            assert nu <= graph_core.induced_matching_number(source)
            assert bight <= graph_core.bight(source)
            if bipartite:
                assert nx.is_bipartite(source.to_networkx())
            if forest:
                assert nx.is_forest(source.to_networkx())
