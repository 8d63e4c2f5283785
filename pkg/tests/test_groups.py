import pytest

from relhyp_hub.core.exceptions import UnknownSymbolError, ValidationError
from relhyp_hub.core.groups import (
    Equality,
    FiniteTable,
    FinitelyPresented,
    FreeGroup,
    FreeProductOfFinites,
    cyclic_normal,
    format_word,
    free_reduce,
    invert_word,
    parse_word,
)


def test_free_reduce_cancels_adjacent_inverses():
    assert free_reduce((1, 2, -2, -1, 1)) == (1,)
    assert free_reduce((1, -1)) == ()


def test_invert_word():
    assert invert_word((1, -2, 3)) == (-3, 2, -1)


def test_parse_and_format_word():
    gens = ["a", "b"]
    assert parse_word(gens, "a*b^-1*a^2") == (1, -2, 1, 1)
    assert parse_word(gens, "1") == ()
    assert format_word(gens, (1, -2, 1, 1)) == "a*b^-1*a^2"
    assert format_word(gens, ()) == "1"


def test_parse_unknown_symbol():
    with pytest.raises(UnknownSymbolError):
        parse_word(["a"], "a*z")


def test_duplicate_generator_names_rejected():
    with pytest.raises(ValidationError):
        FreeGroup(["a", "a"])


def test_free_group_normal_forms():
    group = FreeGroup(["a", "b"])
    x = group.parse("a*b*b^-1*a")
    assert x.normal_form == (1, 1)
    assert group.equals(x, group.parse("a^2")) == Equality.EQUAL
    assert group.equals(x, group.parse("a*b")) == Equality.NOT_EQUAL
    assert group.has_infinite_order(x)
    assert group.is_finite() is False


def test_free_group_of_rank_zero_is_trivial():
    group = FreeGroup(0)
    assert group.is_finite() is True
    assert group.order() == 1


def test_cyclic_table():
    group = FiniteTable.cyclic(4, "x")
    assert group.order() == 4
    assert group.is_identity(group.parse("x^4")) == Equality.EQUAL
    assert group.parse("x^5").normal_form == (1,)
    assert group.parse("x^-1").normal_form == group.parse("x^3").normal_form
    assert len(group.elements()) == 4


def test_table_must_be_associative_latin_square():
    with pytest.raises(ValidationError):
        FiniteTable([[0, 1], [0, 1]], ["1", "a"], ["a"])


def test_table_relators_define_the_group():
    group = FiniteTable.cyclic(3, "t")
    presented = FinitelyPresented(group.generators, group.relators())
    assert presented.order() == 3


def test_free_product_of_finites():
    group = FreeProductOfFinites([FiniteTable.cyclic(2, "s"), FiniteTable.cyclic(3, "t")])
    st = group.parse("s*t")
    assert group.has_infinite_order(st)
    assert not group.has_infinite_order(group.parse("t*s*t^-1"))
    assert group.parse("s*s*t").normal_form == (2,)
    assert group.factor_of(group.parse("t^2")) == 1
    assert group.factor_of(st) is None
    assert group.is_finite() is False


def test_finitely_presented_symmetric_group():
    group = FinitelyPresented(["a", "b"], [(1, 1, 1), (2, 2), (1, 2, 1, 2)])
    assert group.order() == 6
    assert group.equals(group.parse("a*b"), group.parse("b*a^-1")) == Equality.EQUAL
    assert group.has_canonical_forms


def test_cyclic_normal_is_rotation_invariant():
    assert cyclic_normal((1, 2, -1)) == cyclic_normal((2, -1, 1))
