import math
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from networkx.algorithms.isomorphism import categorical_multiedge_match

from relhyp_hub.core.cusped import (
    build_cusped,
    distance_report,
    estimate_delta_four_point,
    four_point_defect,
    geodesic,
    graph_distance,
    gromov_product,
    thin_triangle,
)
from relhyp_hub.core.exceptions import (
    BudgetExceededError,
    DisconnectedGraphError,
    PeripheralNotInGeneratingSetError,
    UnknownVertexError,
    ValidationError,
)
from relhyp_hub.core.graphs import LabeledGraph, VertexLabel, cayley_ball
from relhyp_hub.core.groups import FreeGroup
from relhyp_hub.core.horoball import VERTICAL, build_horoball, depth_of
from relhyp_hub.core.subgroups import SubgroupSpec


@pytest.fixture
def integers():
    return FreeGroup(["a"])


@pytest.fixture
def cycle4():
    return LabeledGraph.from_networkx(nx.cycle_graph(4), "C4")


def test_cayley_ball_of_free_group_is_a_tree():
    ball = cayley_ball(FreeGroup(["a", "b"]), 2)
    assert ball.vertex_count == 17
    assert ball.edge_count == 16
    assert ball.is_connected()


def test_horoball_over_path(integers):
    base = cayley_ball(integers, 1)
    horoball = build_horoball(base, 2)
    assert horoball.vertex_count == 9
    # 2 ребра основания, 2 на уровне 1, 3 на уровне 2, 6 вертикальных
    assert horoball.edge_count == 13
    assert len(horoball.horizontal_edges(2)) == 3
    vertical = [e for e in horoball.graph.edges if e[2] == VERTICAL]
    assert len(vertical) == 6
    assert depth_of(horoball, horoball.vertex_id(base.find("a"), 2)) == 2


def test_horoball_over_single_edge():
    horoball = build_horoball(LabeledGraph.from_networkx(nx.path_graph(2), "P2"), 2)
    assert horoball.vertex_count == 6
    assert horoball.edge_count == 7


def test_horoball_invariants_on_random_graphs():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 13))
        depth = int(rng.integers(0, 5))
        base = nx.gnp_random_graph(n, 0.3, seed=int(rng.integers(0, 2**31)))
        if not nx.is_connected(base):
            continue
        horoball = build_horoball(LabeledGraph.from_networkx(base), depth)
        assert horoball.vertex_count == n * (depth + 1)
        distances = dict(nx.all_pairs_shortest_path_length(base))
        for k in range(1, depth + 1):
            expected = sum(1 for u in distances for v in distances[u] if u < v and distances[u][v] < 2**k)
            assert len(horoball.horizontal_edges(k)) == expected
        vertical = [e for e in horoball.graph.edges if e[2] == VERTICAL]
        assert len(vertical) == n * depth


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_horoball_distance_bound_on_paths(n):
    depth = math.ceil(math.log2(n)) + 2
    base = LabeledGraph.from_networkx(nx.path_graph(n), f"P{n}")
    horoball = build_horoball(base, depth)
    ends = base.find("0"), base.find(str(n - 1))
    oracle = nx.shortest_path_length(horoball.graph.simple_graph, ends[0], ends[1])
    assert graph_distance(horoball.graph, *ends) == oracle
    assert oracle <= min(n, 2 * math.ceil(math.log2(n)) + 1)


def test_horoball_distance_grows_logarithmically(integers):
    base = cayley_ball(integers, 8)
    horoball = build_horoball(base, 4)
    left = horoball.vertex_id(base.find("a^-8"), 0)
    right = horoball.vertex_id(base.find("a^8"), 0)
    assert graph_distance(horoball.graph, left, right) < 16


def test_horoball_requires_connected_base():
    graph = LabeledGraph("two points")
    graph.add_vertex(0, VertexLabel("x"))
    graph.add_vertex(1, VertexLabel("y"))
    with pytest.raises(DisconnectedGraphError):
        build_horoball(graph, 1)


def test_horoball_rejects_negative_depth(integers):
    with pytest.raises(ValidationError):
        build_horoball(cayley_ball(integers, 1), -1)


def test_cusped_space_over_integers(integers):
    peripheral = SubgroupSpec.from_words(integers, ["a"], "P")
    space = build_cusped(integers, [peripheral], radius=3, depth=2)
    assert space.graph.vertex_count == 21
    assert space.graph.edge_count == 41
    assert len(space.horoballs) == 1
    assert space.horoballs[0].base_vertices == tuple(range(7))


def test_cusped_space_without_peripherals_is_the_ball(integers):
    space = build_cusped(integers, [], radius=2, depth=3)
    assert space.graph.vertex_count == space.ball.vertex_count == 5


def test_peripheral_must_use_generators():
    group = FreeGroup(["a", "b"])
    with pytest.raises(PeripheralNotInGeneratingSetError):
        build_cusped(group, [SubgroupSpec.from_words(group, ["a*b"])], radius=1, depth=1)


def test_geodesic_and_gromov_product(cycle4):
    path = geodesic(cycle4, 0, 2)
    assert len(path) == 3
    assert path[0] == 0 and path[-1] == 2
    assert gromov_product(cycle4, 1, 2, 0) == Fraction(1)
    assert gromov_product(cycle4, 1, 3, 0) == 0


def test_four_point_defect_of_square(cycle4):
    assert four_point_defect(cycle4, 0, 1, 2, 3) == Fraction(1)


def test_delta_of_tree_is_zero():
    report = estimate_delta_four_point(cayley_ball(FreeGroup(["a", "b"]), 1))
    assert report.delta == 0
    assert report.method == "exhaustive"


def test_delta_of_square(cycle4):
    report = estimate_delta_four_point(cycle4)
    assert report.delta == Fraction(1)
    assert report.doubled_delta == 2
    assert sorted(report.witness) == [0, 1, 2, 3]


def test_sampled_delta_is_reproducible(cycle4):
    first = estimate_delta_four_point(cycle4, "sampled", seed=7, count=200)
    second = estimate_delta_four_point(cycle4, "sampled", seed=7, count=200)
    assert first == second
    assert first.delta <= Fraction(1)


def test_sampled_delta_requires_seed(cycle4):
    with pytest.raises(ValidationError):
        estimate_delta_four_point(cycle4, "sampled")


def test_exhaustive_budget(cycle4):
    with pytest.raises(BudgetExceededError):
        estimate_delta_four_point(cycle4, budget=10)


def test_thin_triangles_in_tree():
    report = thin_triangle(cayley_ball(FreeGroup(["a", "b"]), 1))
    assert report.slimness == 0


def test_distance_report_flags_paths_through_the_top_level(integers):
    peripheral = SubgroupSpec.from_words(integers, ["a"], "P")
    space = build_cusped(integers, [peripheral], radius=3, depth=2)
    far = distance_report(space, space.ball.find("a^-3"), space.ball.find("a^3"))
    assert far["distance"] == 6
    assert far["may_shrink_with_depth"] is True
    near = distance_report(space, space.ball.find("a^-1"), space.ball.find("a"))
    assert near["distance"] == 2
    assert near["may_shrink_with_depth"] is False


def test_horoball_vertex_id_over_sparse_base_ids():
    base = LabeledGraph("sparse")
    for v, tag in ((10, "x"), (20, "y"), (30, "z")):
        base.add_vertex(v, VertexLabel(tag))
    base.add_edge(10, 20)
    base.add_edge(20, 30)
    horoball = build_horoball(base, 2)
    assert horoball.vertex_id(30, 0) == 2
    assert horoball.vertex_id(20, 2) == 7
    assert horoball.graph.label(horoball.vertex_id(30, 1)) == VertexLabel("z", 1, 30)
    with pytest.raises(UnknownVertexError):
        horoball.vertex_id(15, 0)
    with pytest.raises(UnknownVertexError):
        horoball.vertex_id(10, 3)


def _random_tree(n: int, rng: np.random.Generator) -> nx.Graph:
    if n == 1:
        return nx.empty_graph(1)
    return nx.from_prufer_sequence([int(x) for x in rng.integers(0, n, size=n - 2)])


def test_delta_of_random_trees_is_zero():
    rng = np.random.default_rng(0)
    for n in range(1, 41):
        trees = [_random_tree(n, rng) for _ in range(3)] + [nx.path_graph(n), nx.star_graph(n - 1)]
        for tree in trees:
            report = estimate_delta_four_point(LabeledGraph.from_networkx(tree, f"T{n}"))
            assert report.delta == 0, (n, sorted(tree.edges))


def test_delta_of_path_horoball_is_reproducible():
    base = LabeledGraph.from_networkx(nx.path_graph(7), "P7")
    first = estimate_delta_four_point(build_horoball(base, 3).graph)
    second = estimate_delta_four_point(build_horoball(base, 3).graph)
    assert first == second
    assert first.vertex_count == 28
    # квадрат из двух вертикальных и двух горизонтальных рёбер даёт delta >= 1
    assert first.delta >= 1
    assert four_point_defect(build_horoball(base, 3).graph, *first.witness) == first.delta
    sampled = estimate_delta_four_point(build_horoball(base, 3).graph, "sampled", seed=3, count=5000)
    assert sampled.delta <= first.delta


def test_deeper_horoballs_never_increase_distances(integers):
    peripheral = SubgroupSpec.from_words(integers, ["a"], "P")
    shallow = build_cusped(integers, [peripheral], radius=8, depth=2)
    deep = build_cusped(integers, [peripheral], radius=8, depth=4)
    ball = shallow.ball.vertex_ids
    assert ball == deep.ball.vertex_ids
    for u in ball:
        for v in ball:
            if u < v:
                assert graph_distance(deep.graph, u, v) <= graph_distance(shallow.graph, u, v)
    ends = shallow.ball.find("a^-8"), shallow.ball.find("a^8")
    assert graph_distance(shallow.graph, *ends) == 10
    assert graph_distance(deep.graph, *ends) == 9


def test_cusped_free_group_over_cyclic_peripheral():
    group = FreeGroup(["a", "b"])
    space = build_cusped(group, [SubgroupSpec.from_words(group, ["a"], "P")], radius=2, depth=1)
    assert len(space.horoballs) == 9
    sizes = sorted(len(h.base_vertices) for h in space.horoballs)
    assert sizes == [1, 1, 1, 1, 1, 1, 3, 3, 5]
    assert space.graph.vertex_count == 2 * 17


def test_empty_peripheral_cusped_space_is_the_ball_up_to_labels():
    group = FreeGroup(["a", "b"])
    space = build_cusped(group, [], radius=2, depth=3)
    assert nx.is_isomorphic(
        space.graph.nx_graph,
        space.ball.nx_graph,
        node_match=lambda x, y: x["label"] == y["label"],
        edge_match=categorical_multiedge_match("label", ""),
    )
