import pytest

from prefpersist import parse_fo, parse_s5, parse_tel
from prefpersist.analysis import (
    BOX, DIAM, EXISTENTIAL, TB, TD, UNIVERSAL, NegativeIn, PositiveIn, SyntacticClass, classify, is_subjective,
    odd_negation_heuristic, temporal_depth,
)


@pytest.mark.parametrize("text,expected", [
    ("~K p & K(q -> p)", True),
    ("K(p & q) | s", False),
    ("K p", True),
    ("K(p) -> M(K q)", True),
    ("p", False),
])
def test_is_subjective(text, expected):
    assert is_subjective(parse_s5(text)) is expected


def test_temporal_subjective():
    assert is_subjective(parse_tel("F K p & G(M q)"))


@pytest.mark.parametrize("text,cls,expected", [
    ("M(~p)", DIAM, True),
    ("K p", DIAM, False),
    ("M p & M(M q | M p)", DIAM, True),
    ("M p & M(q | M p)", DIAM, False),
    ("~K p", DIAM, False),
    ("K p | K(K q)", BOX, True),
    ("M p", BOX, False),
])
def test_modal_classes(text, cls, expected):
    assert classify(parse_s5(text), cls) is expected


@pytest.mark.parametrize("text,cls,expected", [
    ("F(M p) & H(G(M q))", TD, True),
    ("F(K p)", TD, False),
    ("G(K p) | P(K q)", TB, True),
    ("~F(K p)", TB, False),
    ("M p", TD, True),
])
def test_temporal_classes(text, cls, expected):
    assert classify(parse_tel(text), cls) is expected


@pytest.mark.parametrize("text,cls,expected", [
    ("forall x y. (P(x) & Succ(x,y) -> P(y))", PositiveIn("P"), False),
    ("forall x y. (P(x) & Succ(x,y) -> P(y))", NegativeIn("P"), False),
    ("forall x. ~P(x)", NegativeIn("P"), True),
    ("exists x. (P(x) | Q(x))", PositiveIn("P"), True),
    ("forall x. (P(x) -> Q(x))", NegativeIn("P"), True),
    ("exists x. P(x)", EXISTENTIAL, True),
    ("forall x. exists y. R(x,y)", UNIVERSAL, False),
    ("forall x y. (R(x,y) | x = y)", UNIVERSAL, True),
    ("exists x. forall y. R(x,y)", EXISTENTIAL, False),
])
def test_first_order_classes(text, cls, expected):
    assert classify(parse_fo(text), cls) is expected


def test_class_parse():
    assert SyntacticClass.parse("diam") == DIAM
    assert SyntacticClass.parse("negative:P") == NegativeIn("P")
    with pytest.raises(ValueError):
        SyntacticClass.parse("nope")


@pytest.mark.parametrize("text,expected", [
    ("~K(q | K p)", True),
    ("K p", False),
    ("~K q & ~K p", True),
])
def test_odd_negation(text, expected):
    assert odd_negation_heuristic(parse_s5(text)) is expected


@pytest.mark.parametrize("text,depth", [("K p", 0), ("F(K p)", 1), ("[](K p -> G(K q))", 2), ("F G P K p", 3)])
def test_temporal_depth(text, depth):
    assert temporal_depth(parse_tel(text)) == depth
