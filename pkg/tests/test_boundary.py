import copy

import pytest

from relhyp_hub.core.boundary import (
    act_on_point,
    boundaries_embed_check,
    class_spread_check,
    compute_domain,
    fixed_subcomplex,
    glue_boundary_classes,
    parabolic_generators,
    point_at,
    skeleton,
    verify_peripheral_assignment,
)
from relhyp_hub.core.development import build_development
from relhyp_hub.core.examples import load_example
from relhyp_hub.core.exceptions import TruncationTooSmallError, ValidationError
from relhyp_hub.core.schemas import load_complex
from relhyp_hub.core.subgroups import enumerate_cosets
from relhyp_hub.core.usecases import BoundaryManager

LETTERS = [f"{name}^{sign}" for name in ("u.a1", "u.b1", "v.a2", "v.b2") for sign in (1, -1)]


def _genus2_with(**overrides):
    data = copy.deepcopy(load_example("genus2").data["complex"])
    data.update(overrides)
    return load_complex(data, "genus2-variant")


@pytest.fixture(scope="module")
def genus2_classes(genus2_dev):
    return glue_boundary_classes(genus2_dev)


@pytest.fixture(scope="module")
def genus2_wide(genus2_cog):
    return build_development(genus2_cog, bound=2, radius=4)


@pytest.fixture(scope="module")
def genus2_wide_classes(genus2_wide):
    return glue_boundary_classes(genus2_wide)


def test_bundled_assignment_is_consistent(genus2_cog):
    assert verify_peripheral_assignment(genus2_cog) == []


def test_point_is_normalized_to_coset_representative(genus2_dev):
    group = genus2_dev.cog.groups["u"]
    commutator = group.parse("a1*b1*a1^-1*b1^-1")
    assert point_at(genus2_dev, 0, 0, commutator) == point_at(genus2_dev, 0, 0)
    with pytest.raises(ValidationError):
        point_at(genus2_dev, 0, 1)


def test_parabolic_generator_fixes_its_point(genus2_dev):
    point = point_at(genus2_dev, 0, 0)
    (generator,) = parabolic_generators(genus2_dev, point)
    assert act_on_point(genus2_dev, generator, point) == point


def test_gluing_classes_of_surface_group(genus2_dev, genus2_classes):
    edges = genus2_dev.objects_over("e")
    assert len(genus2_classes) == len(edges) == len(genus2_dev.coset_keys("e/u"))
    assert len(genus2_classes) > 9
    for cls in genus2_classes:
        assert len(cls.members) == 3
        assert len(cls.objects()) == 3
        assert {genus2_dev.objects[o].base for o in cls.objects()} == {"e", "u", "v"}


def test_surface_boundaries_embed(genus2_dev, genus2_classes):
    report = boundaries_embed_check(genus2_classes, genus2_dev)
    assert report.status == "PASS"
    assert report.checked_classes == len(genus2_classes)


def test_embedding_failure_reports_loop():
    v_peripheral = ["a2*b2*a2^-1*b2^-1"]
    cog = _genus2_with(
        peripherals={"e": [["c"], ["c"]], "u": [["a1*b1*a1^-1*b1^-1"]], "v": [v_peripheral, list(v_peripheral)]},
        peripheral_maps={"e/u": [[0, "1"], [0, "1"]], "e/v": [[0, "1"], [1, "1"]]},
    )
    dev = build_development(cog, bound=4, radius=2)
    report = boundaries_embed_check(glue_boundary_classes(dev), dev)
    assert report.status == "FAIL"
    assert report.violations[0]["xi_loop"]


def test_inconsistent_assignment_is_rejected():
    cog = _genus2_with(peripheral_maps={"e/u": [[0, "1"]], "e/v": [[0, "a2"]]})
    assert verify_peripheral_assignment(cog)[0]["arrow"] == "e/v"
    dev = build_development(cog, bound=4, radius=2)
    with pytest.raises(ValidationError):
        glue_boundary_classes(dev)


def test_domain_of_base_point(genus2_dev):
    result = compute_domain(genus2_dev, point_at(genus2_dev, 0, 0), A=2, d_max=12)
    assert len(result.objects) == 3
    assert result.objects[0] == 0
    assert {genus2_dev.objects[o].base for o in result.objects} == {"e", "u", "v"}
    assert result.diameter == 1
    assert result.connected and result.convex
    assert result.within_bound and result.count_within
    assert result.convexity_check == "exact"


def test_generator_letters_cover_the_presentation(genus2_wide):
    assert sorted(genus2_wide.parse(name)[0] for name in LETTERS) == sorted(genus2_wide.letters)


@pytest.mark.parametrize("letter", LETTERS)
def test_domains_are_equivariant(genus2_wide, letter):
    g = genus2_wide.parse(letter)
    points = BoundaryManager.base_points(genus2_wide)
    assert len(points) == 2
    for point in points:
        moved = act_on_point(genus2_wide, g, point)
        assert moved is not None
        domain = compute_domain(genus2_wide, point, A=2, d_max=12, max_power=2).objects
        image = compute_domain(genus2_wide, moved, A=2, d_max=12, max_power=2).objects
        assert {genus2_wide.act(g, o) for o in domain} == set(image)


@pytest.mark.parametrize("letter", LETTERS)
def test_gluing_classes_are_equivariant(genus2_wide, genus2_wide_classes, letter):
    g = genus2_wide.parse(letter)
    owner = {m: i for i, cls in enumerate(genus2_wide_classes) for m in cls.members}
    checked = 0
    for cls in genus2_wide_classes:
        images = [act_on_point(genus2_wide, g, m) for m in cls.members]
        if None in images or any(image not in owner for image in images):
            continue
        targets = {owner[image] for image in images}
        assert len(targets) == 1, cls.to_dict(genus2_wide)
        target = genus2_wide_classes[targets.pop()]
        if len(target.members) == len(cls.members):
            assert set(images) == set(target.members)
        checked += 1
    assert checked > 0


@pytest.mark.parametrize("name", ["amalgam-4-2-6", "theta-free"])
def test_finite_stabilizer_examples_have_no_parabolic_points(name):
    example = load_example(name)
    params = example.defaults
    dev = build_development(example.complex_of_groups(), params["bound"], max(params["radius"], params["depth"]))
    assert BoundaryManager.base_points(dev) == []
    classes = glue_boundary_classes(dev)
    assert classes == []
    assert class_spread_check(classes, dev, params["A"]).status == "PASS"


def test_domain_needs_large_enough_truncation(genus2_cog):
    dev = build_development(genus2_cog, bound=4, radius=1)
    with pytest.raises(TruncationTooSmallError):
        compute_domain(dev, point_at(dev, 0, 0), A=2, d_max=12)


def test_domain_parameters_are_checked(genus2_dev):
    with pytest.raises(ValidationError):
        compute_domain(genus2_dev, point_at(genus2_dev, 0, 0), A=-1, d_max=12)


def test_fixed_subcomplex_of_identity_is_everything(genus2_dev):
    result = fixed_subcomplex(genus2_dev, [()])
    assert result.fixed == list(range(genus2_dev.object_count))
    assert result.indeterminate == []


def test_skeleton_of_tree_development(amalgam_dev):
    graph = skeleton(amalgam_dev)
    assert graph.number_of_nodes() == len(amalgam_dev.objects) - len(amalgam_dev.objects_over("e"))
    assert graph.number_of_edges() == len(amalgam_dev.objects_over("e"))


def test_point_syntax(genus2_dev):
    assert BoundaryManager.parse_point(genus2_dev, "u:0:1") == point_at(genus2_dev, 0, 0)
    assert BoundaryManager.parse_point(genus2_dev, "o0:0") == point_at(genus2_dev, 0, 0)
    with pytest.raises(ValidationError):
        BoundaryManager.parse_point(genus2_dev, "w:0")
    with pytest.raises(ValidationError):
        BoundaryManager.parse_point(genus2_dev, "u:x")


def test_every_short_vertex_coset_is_labelled(genus2_dev, genus2_classes):
    subgroup = genus2_dev.cog.peripherals["u"][0]
    table = enumerate_cosets(subgroup, max_length=genus2_dev.bound)
    expected = {point_at(genus2_dev, 0, 0, rep) for rep in table.representatives}
    found = {m for cls in genus2_classes for m in cls.members if m.vertex == 0}
    assert found == expected
    assert len(found) == 161


def test_vertex_cosets_without_edge_labels_get_their_own_classes():
    cog = _genus2_with(peripherals={
        "e": [["c"]],
        "u": [["a1*b1*a1^-1*b1^-1"], ["a1"]],
        "v": [["a2*b2*a2^-1*b2^-1"]],
    })
    dev = build_development(cog, bound=4, radius=2)
    lonely = [cls for cls in glue_boundary_classes(dev) if cls.members[0].peripheral == 1]
    # классы g<a1> с представителем длины <= 4: 1 + 2 + 6 + 18 + 54
    assert len(lonely) == 81
    assert all(len(cls.members) == 1 and cls.members[0].vertex == 0 for cls in lonely)
    assert all(not cls.witnesses for cls in lonely)


def test_surface_classes_stay_within_acylindricity_constant(genus2_dev, genus2_classes):
    report = class_spread_check(genus2_classes, genus2_dev, A=2)
    assert report.status == "PASS"
    assert report.max_spread == 1
    assert report.violations == []


def test_spread_check_flags_classes_wider_than_A(genus2_dev, genus2_classes):
    report = class_spread_check(genus2_classes, genus2_dev, A=0)
    assert report.status == "FAIL"
    assert len(report.violations) == len(genus2_classes)
    with pytest.raises(ValidationError):
        class_spread_check(genus2_classes, genus2_dev, A=-1)
