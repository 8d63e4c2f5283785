import pytest

from relhyp_hub.core.cells import Cell, CellComplex, graph_complex, polygon, simplex, square_grid, theta_graph
from relhyp_hub.core.exceptions import InvalidTreeError, NonRegularComplexError, ValidationError
from relhyp_hub.core.scwol import Scwol, barycentric_subdivision, geometric_realization, scwolify


def test_polygon_counts():
    assert polygon(5).counts == [5, 5, 1]
    assert square_grid(2, 1).counts == [6, 7, 2]


def test_simplex_faces():
    tetra = simplex(3)
    assert tetra.counts == [4, 6, 4, 1]
    assert len(tetra.proper_faces("0-1-2-3")) == 14


def test_missing_face_rejected():
    with pytest.raises(ValidationError):
        CellComplex([Cell("e", 1, ("p", "q"))])


def test_loop_edge_is_not_regular():
    loop = graph_complex(["p"], [("l", "p", "p")])
    with pytest.raises(NonRegularComplexError):
        loop.check_regular()


def test_scwol_of_theta_graph():
    scwol = scwolify(theta_graph())
    assert len(scwol.objects) == 5
    assert len(scwol.arrows) == 6
    assert scwol.composable_pairs() == []
    assert scwol.dimensions["e0"] == 1
    assert scwol.dimensions["p"] == 0
    assert scwol.is_simple


def test_scwol_of_triangle_has_composable_pairs():
    scwol = scwolify(simplex(2))
    assert len(scwol.arrows) == 12
    assert len(scwol.composable_pairs()) == 6
    assert scwol.composable_triples() == []
    for a, b in scwol.composable_pairs():
        ab = scwol.compose(a, b)
        assert scwol.source(ab) == scwol.source(b)
        assert scwol.target(ab) == scwol.target(a)


def test_composition_must_be_given():
    with pytest.raises(ValidationError):
        Scwol(["x", "y", "z"], {"x/y": ("x", "y"), "y/z": ("y", "z"), "x/z": ("x", "z")})


def test_spanning_trees():
    scwol = scwolify(simplex(1))
    trees = list(scwol.spanning_trees())
    assert trees == [sorted(scwol.arrows)]
    scwol.check_tree(trees[0])


def test_invalid_tree():
    scwol = scwolify(simplex(1))
    with pytest.raises(InvalidTreeError):
        scwol.check_tree([sorted(scwol.arrows)[0]])


def test_barycentric_subdivision_matches_realization():
    sd = barycentric_subdivision(polygon(3))
    assert sd.counts == [7, 12, 6]
    assert geometric_realization(scwolify(polygon(3))).counts == sd.counts


def test_scwol_round_trip_through_dict():
    scwol = scwolify(simplex(2))
    restored = Scwol.from_dict(scwol.to_dict())
    assert restored.to_dict() == scwol.to_dict()


def _vertex_sets(complex_: CellComplex) -> set[frozenset[str]]:
    spans: dict[str, frozenset[str]] = {}
    for dim in range(complex_.dimension + 1):
        for cell in complex_.cells_of_dim(dim):
            spans[cell.name] = frozenset([cell.name]) if dim == 0 else frozenset().union(*(spans[f] for f in cell.faces))
    return set(spans.values())


@pytest.mark.parametrize("complex_", [polygon(3), polygon(4), simplex(3), square_grid(2, 1), theta_graph()],
                         ids=["triangle", "square", "tetrahedron", "grid", "theta"])
def test_subdivision_has_the_simplices_of_the_realization(complex_):
    sd = barycentric_subdivision(complex_)
    realization = geometric_realization(scwolify(complex_))
    assert sd.counts == realization.counts
    assert _vertex_sets(sd) == _vertex_sets(realization)
    assert len(_vertex_sets(sd)) == sum(sd.counts)
