import pytest

from relhyp_hub.core.exceptions import UndecidableMembershipError
from relhyp_hub.core.groups import FiniteTable, FinitelyPresented, FreeGroup
from relhyp_hub.core.subgroups import SubgroupSpec, enumerate_cosets, subgroup_height_bounded


@pytest.fixture
def free2():
    return FreeGroup(["a", "b"])


def test_subgroup_kinds(free2):
    assert SubgroupSpec.from_words(free2, []).kind == "trivial"
    assert SubgroupSpec.whole(free2).kind == "whole"
    assert SubgroupSpec.from_words(free2, ["a^2"]).kind == "cyclic"
    assert SubgroupSpec.from_words(free2, ["a", "b*a*b^-1"]).kind == "unsupported"


def test_cyclic_membership_and_express(free2):
    h = SubgroupSpec.from_words(free2, ["a*b"])
    assert h.contains(free2.parse("a*b*a*b"))
    assert not h.contains(free2.parse("a*b*a"))
    assert h.express(free2.parse("b^-1*a^-1")) == (-1,)
    assert h.is_finite() is False


def test_unsupported_membership_is_reported(free2):
    h = SubgroupSpec.from_words(free2, ["a", "b*a*b^-1"])
    with pytest.raises(UndecidableMembershipError):
        h.contains(free2.parse("b"))


def test_coset_rep_is_shortlex_minimal(free2):
    h = SubgroupSpec.from_words(free2, ["a"])
    rep = h.coset_rep(free2.parse("b*a^3"))
    assert rep.normal_form == (2,)
    assert h.same_coset(free2.parse("b"), free2.parse("b*a^-2"))


def test_finite_subgroup_elements():
    group = FiniteTable.cyclic(6, "y")
    h = SubgroupSpec.from_words(group, ["y^3"])
    assert h.kind == "finite"
    assert len(h.elements()) == 2
    assert h.contains(group.parse("y^3"))
    assert not h.contains(group.parse("y"))


def test_enumerate_cosets_finite_index():
    group = FiniteTable.cyclic(6, "y")
    table = enumerate_cosets(SubgroupSpec.from_words(group, ["y^3"]))
    assert table.is_complete
    assert table.index == 3


def test_enumerate_cosets_truncated_by_length(free2):
    h = SubgroupSpec.from_words(free2, ["a"])
    table = enumerate_cosets(h, max_length=2)
    assert table.status == "truncated"
    assert table.index is None
    # единица, b^{±1} и шесть классов длины 2
    assert len(table.representatives) == 9


def test_enumerate_cosets_respects_budget(free2):
    h = SubgroupSpec.from_words(free2, ["a"])
    table = enumerate_cosets(h, budget=5)
    assert table.status == "truncated"
    assert len(table.representatives) == 5


def test_finite_index_subgroup_in_finitely_presented_group():
    group = FinitelyPresented(["a", "b"], [(1, 1, 1), (2, 2), (1, 2, 1, 2)])
    h = SubgroupSpec.from_words(group, ["a"])
    assert h.contains(group.parse("a^2"))
    assert not h.contains(group.parse("b"))


def test_height_in_finite_group_is_zero():
    group = FiniteTable.cyclic(4, "x")
    report = subgroup_height_bounded(SubgroupSpec.from_words(group, ["x^2"]), 2, 2)
    assert report.exact
    assert report.lower_bound == 0


def test_height_of_malnormal_subgroup_is_one(free2):
    # <a> в F(a, b) малонормальна: пересечения двух различных сопряжённых тривиальны
    report = subgroup_height_bounded(SubgroupSpec.from_words(free2, ["a"]), 2, 2)
    assert report.lower_bound == 1
    assert report.upper_bound_candidate == 1
    assert not report.exact


@pytest.mark.parametrize("generators", [["a*b*a^-1*b^-1"], ["a"], ["a^2*b"]])
def test_coset_representatives_are_suffix_closed(free2, generators):
    table = enumerate_cosets(SubgroupSpec.from_words(free2, generators), max_length=3)
    words = set(table.words())
    assert len(words) == len(table.representatives)
    for word in words:
        for i in range(len(word) + 1):
            assert word[i:] in words
            assert table.locate(free2.normalize(word[i:])) is not None


def test_coset_representatives_lie_in_distinct_cosets(free2):
    h = SubgroupSpec.from_words(free2, ["a*b*a^-1*b^-1"])
    reps = enumerate_cosets(h, max_length=2).representatives
    for i, left in enumerate(reps):
        assert all(not h.same_coset(left, right) for right in reps[i + 1:])
