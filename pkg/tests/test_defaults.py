import random

import pytest

from prefpersist import parse_s5, parse_tel
from prefpersist.corpus import default_theories
from prefpersist.defaults import (
    Default, DefaultTheory, default_to_mtel, parse_default_theory, reiter_extensions, sceptical_consequence,
    sceptically_follows,
)
from prefpersist.errors import LanguageError
from prefpersist.mtel import Verdict
from prefpersist.s5 import atom_mask, full_mask
from prefpersist.syntax import Top

S = parse_s5
PQ = ("p", "q")
NIXON = "default: : ~q / p\ndefault: : ~p / q\n"


def test_parse_theory():
    th = parse_default_theory("# comment\nfact: q\ndefault: q : p / p   # trailing\n")
    assert th.facts == (S("q"),)
    assert th.defaults == (Default(S("q"), S("p"), S("p")),)
    assert parse_default_theory("default: : p / p").defaults[0].prerequisite == Top()
    with pytest.raises(ValueError):
        parse_default_theory("rule: p")


def test_translation_examples():
    one = parse_default_theory("default: : p / p")
    assert default_to_mtel(one) == parse_tel("[](K T & G(~K ~p) -> G(K p))")
    assert default_to_mtel(DefaultTheory((S("q"),), ())) == S("K q")
    both = parse_default_theory("fact: q\ndefault: q : p / p")
    assert default_to_mtel(both) == parse_tel("[](K q & G(~K ~p) -> G(K p)) & K q")


def test_extensions_examples():
    atoms = PQ
    assert reiter_extensions(parse_default_theory("default: : p / p"), atoms) == [atom_mask(0, 2)]
    assert reiter_extensions(DefaultTheory(), atoms) == [full_mask(2)]
    nix = reiter_extensions(parse_default_theory(NIXON), atoms)
    assert sorted(nix) == sorted([atom_mask(0, 2), atom_mask(1, 2)])


def test_nixon_extensions_are_p_and_q():
    nix = reiter_extensions(parse_default_theory(NIXON), PQ)
    assert len(nix) == 2
    assert {sceptically_follows([e], S("p"), PQ) for e in nix} == {True, False}
    assert all(sceptically_follows([e], S("p | q"), PQ) for e in nix)


@pytest.mark.parametrize("text,phi,expected", [
    ("default: : p / p", "p", Verdict.TRUE),
    ("default: : p / p", "q", Verdict.FALSE),
    ("fact: q", "q", Verdict.TRUE),
    (NIXON, "p", Verdict.FALSE),
    (NIXON, "p | q", Verdict.TRUE),
])
def test_sceptical_examples(text, phi, expected):
    assert sceptical_consequence(parse_default_theory(text), S(phi), sig=PQ) is expected


def test_non_propositional_rejected():
    with pytest.raises(LanguageError):
        DefaultTheory((S("K p"),), ())
    with pytest.raises(LanguageError):
        sceptical_consequence(DefaultTheory(), S("K p"))


def test_agrees_with_extension_oracle_on_random_theories():
    atoms = ("p", "q", "r")
    rng = random.Random(5)
    phis = [S("p"), S("~q"), S("p | r"), S("q -> r")]
    unknown = 0
    for th in default_theories(atoms, 25, seed=rng, max_rules=3):
        exts = reiter_extensions(th, atoms)
        for phi in phis:
            v = sceptical_consequence(th, phi, sig=atoms)
            if v is Verdict.UNKNOWN:
                unknown += 1
                continue
            assert (v is Verdict.TRUE) == sceptically_follows(exts, phi, atoms), th.to_text()
    assert unknown == 0
