import itertools

import numpy as np
import pytest

import oracles
from prefpersist import parse_fo
from prefpersist.corpus import fo_corpus
from prefpersist.errors import BoundExceeded, LanguageError, SignatureError
from prefpersist.fincirc import (
    CircMode, FoClass, FoStructure, canonical_form, dom_leq, embeds_below, entail_classical_fo, entail_fincirc,
    expressibility_witness_fo, fo_class, fo_sat, minimal_structures, parse_structure, pred_leq,
)
from prefpersist.syntax import Signature

F = parse_fo
SIG_P = Signature((), (("P", 1),))
SIG_PQ = Signature((), (("P", 1), ("Q", 1)))
SIG_PR = Signature((), (("P", 1), ("R", 2)))
PRED = CircMode.of_pred("P")
DOM = CircMode.dom()


def test_fo_sat_examples():
    assert fo_sat(FoStructure.make(1, {"P": [(0,)]}), F("exists x. P(x)"))
    assert not fo_sat(FoStructure.make(2, {"P": []}), F("exists x. P(x)"))
    assert fo_sat(FoStructure.make(2, {}), F("forall x. exists y. ~(x = y)"))
    with pytest.raises(LanguageError):
        fo_sat(FoStructure.make(1, {"P": [(0,)]}), F("P(x)"))


def test_structure_validation_and_text():
    with pytest.raises(ValueError):
        FoStructure.make(0, {})
    with pytest.raises(ValueError):
        FoStructure.make(1, {"P": [(3,)]})
    s = FoStructure.make(3, {"P": [(0,)], "R": [(0, 1), (2, 2)]}, SIG_PR)
    assert str(s) == "domain=3; P={(0)}; R={(0,1),(2,2)}"
    assert parse_structure(str(s), SIG_PR) == s
    odd = s.restrict({0, 2})
    assert str(odd).startswith("domain={0,2}")
    assert parse_structure(str(odd), SIG_PR) == odd


def test_orders_examples():
    a = FoStructure.make(2, {"P": [(0,)], "Q": [(1,)]}, SIG_PQ)
    b = FoStructure.make(2, {"P": [(0,), (1,)], "Q": [(1,)]}, SIG_PQ)
    c = FoStructure.make(2, {"P": [(0,)], "Q": []}, SIG_PQ)
    assert pred_leq(a, a, "P") and pred_leq(a, b, "P") and not pred_leq(b, a, "P")
    assert not pred_leq(c, b, "P")  # Q differs
    assert not pred_leq(a.restrict({0}), a, "P")  # different domains
    assert dom_leq(a.restrict({0}), a) and dom_leq(a, a)
    assert not dom_leq(a, b)


def test_orders_are_partial_orders():
    cls = FoClass(SIG_PQ, 3)
    for mode in (PRED, DOM):
        leq = cls.leq_matrix(mode)
        assert leq.diagonal().all()
        assert not (leq & leq.T & ~np.eye(len(cls), dtype=bool)).any()
        two = (leq.astype(np.int32) @ leq.astype(np.int32)) > 0
        assert not (two & ~leq).any()


def test_leq_matrix_matches_pointwise_orders():
    cls = FoClass(SIG_PR, 2)
    leq_p, leq_d = cls.leq_matrix(PRED), cls.leq_matrix(DOM)
    for i, j in itertools.product(range(0, len(cls), 3), repeat=2):
        s, t = cls.structures[i], cls.structures[j]
        assert leq_p[i, j] == pred_leq(s, t, "P")
        assert leq_d[i, j] == dom_leq(s, t)


@pytest.mark.parametrize("mode", [PRED, DOM])
def test_entailment_examples(mode):
    uniq = F("forall x y. (P(x) & P(y) -> x = y)")
    assert entail_fincirc(F("exists x. P(x)"), uniq, PRED, 3, SIG_P)
    assert entail_fincirc(F("exists x. P(x)"), F("forall x. P(x)"), DOM, 3, SIG_P)
    assert entail_fincirc(F("_|_"), F("exists x. ~(x = x)"), mode, 3, SIG_P)


def test_minimal_structures_examples():
    mins = minimal_structures(F("exists x. P(x)"), PRED, 2, SIG_P)
    assert mins and all(len(s.ext("P")) == 1 for s in mins)
    assert len(mins) == 4  # {0}, {1}, and {0,1} with P on either element
    tops = minimal_structures(F("T"), DOM, 2, SIG_P)
    assert tops and all(len(s.domain) == 1 for s in tops)
    assert minimal_structures(F("_|_"), DOM, 2, SIG_P) == []
    deduped = minimal_structures(F("T"), DOM, 2, SIG_P, dedup=True)
    assert sorted(map(str, deduped)) == ["domain=1; P={(0)}", "domain=1; P={}"]


def test_classical():
    assert entail_classical_fo(F("forall x. P(x)"), F("exists x. P(x)"), 3, SIG_P)
    assert not entail_classical_fo(F("exists x. P(x)"), F("forall x. P(x)"), 3, SIG_P)


def test_isomorphism_helpers():
    s = FoStructure.make({1, 2}, {"P": [(2,)]}, SIG_P)
    assert str(canonical_form(s)) == "domain=2; P={(0)}"
    assert embeds_below(FoStructure.make(1, {"P": [(0,)]}, SIG_P), s, DOM)
    assert not embeds_below(FoStructure.make(1, {"P": [(0,)]}, SIG_P), s, PRED)
    assert embeds_below(FoStructure.make(2, {"P": []}, SIG_P), s, PRED)


@pytest.mark.parametrize("mode", [PRED, DOM])
def test_witness_biconditional(mode):
    cls = fo_class(SIG_PR, 2)
    for m in cls.structures[::2]:
        w = expressibility_witness_fo(m, mode, SIG_PR)
        got = cls.sat(w)
        for j, n in enumerate(cls.structures):
            assert got[j] == embeds_below(m, n, mode)


def test_bounds_and_errors():
    with pytest.raises(BoundExceeded):
        entail_fincirc(F("exists x. P(x)"), F("T"), DOM, 9, SIG_P)
    with pytest.raises(BoundExceeded):
        FoClass(Signature((), (("R", 2), ("S", 2))), 4)
    with pytest.raises(SignatureError):
        entail_fincirc(F("exists x. Q(x)"), F("T"), DOM, 2, SIG_P)
    with pytest.raises(LanguageError):
        entail_fincirc(F("exists x. P(x)"), F("P(y)"), DOM, 2, SIG_P)
    assert CircMode.parse("pred:P") == PRED and CircMode.parse("dom") == DOM
    with pytest.raises(ValueError):
        CircMode.parse("bogus")


@pytest.mark.parametrize("mode,kind,pred", [(PRED, "pred", "P"), (DOM, "dom", None)])
def test_entailment_against_naive_oracle(mode, kind, pred):
    preds = SIG_PQ.predicates
    corpus = fo_corpus(SIG_PQ, 14, seed=31, max_size=8)
    for a in corpus:
        for b in corpus[:6]:
            assert entail_fincirc(a, b, mode, 3, SIG_PQ) == oracles.circ_entails(a, b, preds, kind, pred, 3), (a, b)


def test_sat_against_naive_oracle():
    cls = fo_class(SIG_PR, 2)
    for f in fo_corpus(SIG_PR, 20, seed=32, max_size=9):
        got = cls.sat(f)
        for j, s in enumerate(cls.structures):
            ext = {n: e for n, e in s.extensions}
            assert got[j] == oracles.fo_eval(f, s.domain, ext)
