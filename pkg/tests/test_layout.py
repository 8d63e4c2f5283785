import math

import pytest

from relhyp_hub.core.actions import dihedral_action_on_polygon, induce_from_action
from relhyp_hub.core.boundary import glue_boundary_classes
from relhyp_hub.core.development import build_development
from relhyp_hub.core.exceptions import NotATreeError, ValidationError
from relhyp_hub.core.layout import tree_of_circles


@pytest.fixture(scope="module")
def genus2_layout(genus2_dev):
    return tree_of_circles(genus2_dev, glue_boundary_classes(genus2_dev), depth=2, seed=0, child_scale=0.35)


def test_root_circle(genus2_layout):
    root = genus2_layout.nodes[0]
    assert root.kind == "circle"
    assert root.center == (0.0, 0.0)
    assert root.radius == 1.0
    assert root.color == "red"


def test_one_tangency_point_per_edge(genus2_dev, genus2_layout):
    touching = genus2_layout.children(0)
    assert len(touching) == len(genus2_dev.coset_keys("e/u"))
    assert all(not n.vertex and n.kind == "point" for n in touching)
    assert all(n.class_id is not None for n in touching)


def test_child_circles_are_tangent(genus2_layout):
    by_id = {n.object_id: n for n in genus2_layout.nodes}
    children = [n for n in genus2_layout.circles if n.parent is not None]
    assert children
    for child in children:
        parent = by_id[by_id[child.parent].parent]
        distance = math.dist(parent.center, child.center)
        assert distance == pytest.approx(parent.radius + child.radius)
        assert child.radius == pytest.approx(0.35 * parent.radius)
        assert child.color == "blue"


def test_layout_is_deterministic(genus2_dev, genus2_layout):
    again = tree_of_circles(genus2_dev, glue_boundary_classes(genus2_dev), depth=2, seed=0, child_scale=0.35)
    assert again.to_dict(genus2_dev) == genus2_layout.to_dict(genus2_dev)
    other = tree_of_circles(genus2_dev, None, depth=2, seed=1, child_scale=0.35)
    assert other.nodes[1].center != genus2_layout.nodes[1].center


def test_finite_vertex_groups_are_points(amalgam_dev):
    layout = tree_of_circles(amalgam_dev, None, depth=2, seed=0)
    assert layout.circles
    assert all(n.kind == "point" and n.limit_set_empty for n in layout.circles)


def test_depth_limited_by_radius(genus2_dev):
    with pytest.raises(ValidationError):
        tree_of_circles(genus2_dev, None, depth=3, seed=0)


def test_layout_requires_tree_development():
    dev = build_development(induce_from_action(dihedral_action_on_polygon(3)).cog, bound=2, radius=2)
    with pytest.raises(NotATreeError):
        tree_of_circles(dev, None, depth=1, seed=0)


def test_graph_export_carries_positions(genus2_dev, genus2_layout):
    graph = genus2_layout.to_networkx(genus2_dev)
    assert graph.number_of_nodes() == len(genus2_layout.nodes)
    assert graph.nodes["o0"]["pos"] == "0.0,0.0!"
