import numpy as np
import pytest

from relhyp_hub.core.actions import dihedral_action_on_polygon, induce_from_action, random_polygon_action
from relhyp_hub.core.cells import simplex
from relhyp_hub.core.complexes import (
    ComplexOfGroups,
    abelian_invariants,
    amalgam_invariants,
    fundamental_group_presentation,
    spanning_tree_invariants,
    validate_cocycles,
)
from relhyp_hub.core.exceptions import ValidationError
from relhyp_hub.core.groups import FiniteTable
from relhyp_hub.core.scwol import scwolify


def _constant_complex(dim: int = 3):
    scwol = scwolify(simplex(dim))
    groups = {o: FiniteTable.cyclic(2, "t") for o in scwol.objects}
    psi = {a: ((1,),) for a in scwol.arrows}
    return scwol, groups, psi


def test_bundled_complexes_are_valid(genus2_cog, amalgam_cog, theta_cog):
    for cog in (genus2_cog, amalgam_cog, theta_cog):
        assert validate_cocycles(cog).valid


def test_non_homomorphism_is_reported(complex_variant):
    report = validate_cocycles(complex_variant("amalgam-4-2-6", {"e/v": "y^2"}))
    assert not report.valid
    assert report.violations[0]["condition"] == "homomorphism"
    assert report.violations[0]["arrow"] == "e/v"


def test_non_injective_map_is_reported(complex_variant):
    report = validate_cocycles(complex_variant("genus2", {"e/u": "1"}))
    assert [v["condition"] for v in report.violations] == ["injective"]


def test_trivial_twists_on_simplex_are_a_cocycle():
    scwol, groups, psi = _constant_complex()
    report = validate_cocycles(ComplexOfGroups(scwol, groups, psi))
    assert report.valid
    assert report.checked_triples == len(scwol.composable_triples()) > 0


def _triples_using(scwol, pair):
    found = set()
    for a, b, c in scwol.composable_triples():
        if pair in {(b, c), (a, scwol.compose(b, c)), (a, b), (scwol.compose(a, b), c)}:
            found.add((a, b, c))
    return found


def test_every_single_twist_flip_on_tetrahedron_is_located():
    scwol, groups, psi = _constant_complex()
    for pair in scwol.composable_pairs():
        report = validate_cocycles(ComplexOfGroups(scwol, groups, psi, {pair: (1,)}))
        assert not report.valid
        assert {v["condition"] for v in report.violations} == {"b"}
        assert {tuple(v["triple"]) for v in report.violations} == _triples_using(scwol, pair)


def test_twist_flip_on_triangle_has_no_triple_to_break():
    scwol, groups, psi = _constant_complex(2)
    assert (len(scwol.objects), len(scwol.arrows)) == (7, 12)
    assert scwol.composable_triples() == []
    # Z/2 коммутативна, поэтому условие (a) выполняется при любом g_(a,b)
    for pair in scwol.composable_pairs():
        assert validate_cocycles(ComplexOfGroups(scwol, groups, psi, {pair: (1,)})).valid


def test_every_twist_replacement_on_dihedral_triangle_is_located():
    cog = induce_from_action(dihedral_action_on_polygon(3)).cog
    scwol = cog.scwol
    flagged = 0
    for pair in scwol.composable_pairs():
        a, b = pair
        target = cog.groups[scwol.target(a)]
        source = cog.groups[scwol.source(b)]
        right = [cog.psi_apply(a, cog.psi_apply(b, source.generator(i))) for i in range(1, source.rank + 1)]
        current = cog.twist_element(a, b)
        for x in target.elements():
            report = validate_cocycles(ComplexOfGroups(scwol, cog.groups, cog.psi, {**cog.twist, pair: x}, tree=cog.tree))
            z = target.multiply(x, target.inverse(current))
            central = all(target.multiply(z, y).normal_form == target.multiply(y, z).normal_form for y in right)
            assert report.valid == central
            assert {tuple(v["pair"]) for v in report.violations} == (set() if central else {pair})
            flagged += not central
    assert flagged > 0


def test_twist_on_non_composable_pair_rejected():
    scwol, groups, psi = _constant_complex()
    arrow = sorted(scwol.arrows)[0]
    with pytest.raises(ValidationError):
        ComplexOfGroups(scwol, groups, psi, {(arrow, arrow): (1,)})


def test_missing_local_group_rejected():
    scwol, groups, psi = _constant_complex()
    groups.pop(scwol.objects[0])
    with pytest.raises(ValidationError):
        ComplexOfGroups(scwol, groups, psi)


def test_presentation_of_amalgam(amalgam_cog):
    raw = fundamental_group_presentation(amalgam_cog)
    assert set(raw.families) >= {"local", "inverse", "conjugation", "tree"}
    reduced = fundamental_group_presentation(amalgam_cog, tietze=True)
    assert reduced.rank == 3
    assert "e/u+" in reduced.killed
    assert abelian_invariants(raw) == abelian_invariants(reduced) == (0, (12,))
    assert amalgam_invariants([4, 6], [[2, -3]]) == (0, (12,))


def test_presentation_of_theta_graph_is_free(theta_cog):
    presentation = fundamental_group_presentation(theta_cog, tietze=True)
    assert presentation.rank == 2
    assert presentation.relators == []
    assert abelian_invariants(presentation) == (2, ())


def test_abelianization_does_not_depend_on_tree(theta_cog):
    assert set(spanning_tree_invariants(theta_cog)) == {(2, ())}


def test_surface_group_abelianization(genus2_cog):
    presentation = fundamental_group_presentation(genus2_cog, tietze=True, simplify=True)
    assert abelian_invariants(presentation) == (4, ())
    assert presentation.to_dict()["abelianization"] == {"free_rank": 4, "torsion": []}


def test_dihedral_action_on_triangle():
    induced = induce_from_action(dihedral_action_on_polygon(3))
    assert induced.group.order() == 6
    assert len(induced.cog.scwol.objects) == 7
    assert validate_cocycles(induced.cog).valid


@pytest.mark.parametrize("seed", range(200))
def test_random_induced_complexes_are_cocycles(seed):
    rng = np.random.default_rng(seed)
    induced = induce_from_action(random_polygon_action(rng), rng)
    assert validate_cocycles(induced.cog).valid
