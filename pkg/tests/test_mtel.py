import pytest

import oracles
from prefpersist import parse_tel
from prefpersist.corpus import tel_corpus
from prefpersist.errors import LanguageError
from prefpersist.mtel import (
    Horizon, TelcClass, TelcModel, Verdict, closure_states, enumerate_telc, entail_mtel,
    expressibility_witness_mtel, is_totally_ignorant, minimal_models_mtel, model_sat, postponements, sim_equiv,
    tel_sat, telc_leq, totally_ignorant,
)
from prefpersist.s5 import atom_mask, full_mask
from prefpersist.syntax import And, Implies, Not, TGlob, Top, TPast

T = parse_tel
P1 = ("p",)
PQ = ("p", "q")
FULL1 = full_mask(1)
PW1 = atom_mask(0, 1)


def full_then(atoms, state, t):
    return TelcModel(tuple(atoms), (full_mask(len(atoms)), state), (0, t))


def test_model_validation():
    with pytest.raises(ValueError):
        TelcModel(P1, (PW1, FULL1), (0, 1))  # knowledge lost
    with pytest.raises(ValueError):
        TelcModel(P1, (FULL1,), (1,))
    m = TelcModel.from_sequence(P1, [FULL1, FULL1, PW1])
    assert m.starts == (0, 2) and m.last_change == 2
    assert TelcModel.parse(P1, str(m)) == m


def test_tel_sat_examples():
    assert not tel_sat(totally_ignorant(P1), 0, T("F(K p)"))
    m = full_then(P1, PW1, 1)
    assert tel_sat(m, 0, T("F(K p)"))
    assert not tel_sat(m, 0, T("K p"))
    assert tel_sat(m, 1, T("K p & P(~K p)"))
    assert tel_sat(m, 5, T("H(M ~p) | P(M ~p)"))


def test_telc_leq_examples():
    ti = totally_ignorant(PQ)
    for m in enumerate_telc(PQ, 2):
        assert telc_leq(ti, m) and telc_leq(m, m)
    assert telc_leq(full_then(P1, PW1, 2), full_then(P1, PW1, 1))
    assert not telc_leq(full_then(P1, PW1, 1), full_then(P1, PW1, 2))


def test_telc_leq_against_pointwise_oracle():
    models = enumerate_telc(PQ, 2)
    states = [oracles.telc_states(m, PQ) for m in models]
    for a, sa in zip(models, states):
        for b, sb in zip(models, states):
            assert telc_leq(a, b) == oracles.telc_pointwise_leq(sa, sb)


def test_minimal_models_examples():
    assert minimal_models_mtel(T("F(K p)"), sig=PQ).certified == ()
    mm = minimal_models_mtel(T("F(K p) & K p"), sig=P1)
    assert mm.certified == (TelcModel(P1, (PW1,)),) and mm.is_certain
    assert minimal_models_mtel(T("T"), sig=PQ).certified == (totally_ignorant(PQ),)


@pytest.mark.parametrize("a,b,expected", [
    ("F(K p)", "F(K q)", Verdict.TRUE),
    ("F(K p) & K p", "F(K q)", Verdict.FALSE),
    ("K p", "~K q", Verdict.TRUE),
    ("K p | K q", "K q", Verdict.FALSE),
    ("T", "G(M p)", Verdict.TRUE),
])
def test_entailment_examples(a, b, expected):
    assert entail_mtel(T(a), T(b), sig=PQ) is expected


def test_unknown_when_nothing_certified():
    # no horizon certifies F(K p) & ~F(K q); postponement keeps refuting candidates
    v = entail_mtel(T("F(K p)"), T("_|_"), Horizon(1, 0), sig=P1)
    assert v in (Verdict.TRUE, Verdict.UNKNOWN)
    with pytest.raises(TypeError):
        bool(Verdict.TRUE)


def test_sim_equiv():
    f = T("F(K p) | G(M q)")
    assert sim_equiv(f, f, sig=PQ)
    assert not sim_equiv(T("K p"), T("K q"), sig=PQ)
    assert sim_equiv(T("[](K p)"), T("K p"), sig=PQ)


def test_totally_ignorant():
    ti = totally_ignorant(P1)
    assert ti.states == (FULL1,) and ti.starts == (0,)
    assert not is_totally_ignorant(full_then(P1, PW1, 1))
    for m in enumerate_telc(PQ, 3):
        assert is_totally_ignorant(m) == (m == totally_ignorant(PQ))


def test_postponements():
    m = TelcModel(PQ, (15, 12, 8), (0, 1, 3))
    shifted = postponements(m, 2)
    assert TelcModel(PQ, (15, 12, 8), (0, 2, 4)) in shifted
    assert TelcModel(PQ, (15, 12, 8), (0, 1, 5)) in shifted
    assert all(telc_leq(v, m) for v in shifted)


def test_closure_states():
    fam = closure_states(T("F(K p) & M q"), PQ)
    assert full_mask(2) in fam and atom_mask(0, 2) in fam
    assert closure_states(T("K(K p)"), PQ) is None


def test_language_checks():
    with pytest.raises(LanguageError):
        entail_mtel(T("F p"), T("K p"), sig=P1)


def test_truth_against_naive_oracle():
    models = enumerate_telc(PQ, 3)
    for f in tel_corpus(PQ, 25, seed=21, max_size=9, max_depth=2) + [T("[](K p -> G(K q))")]:
        for m in models[::7]:
            states = oracles.telc_states(m, PQ)
            for t in (0, 1, 4):
                assert tel_sat(m, t, f) == oracles.tel_eval(f, states, t, 4), (f, m, t)


def test_translation_identities():
    # truth at 0 is truth everywhere of ~P T -> f; truth everywhere is truth at 0 of f & G f
    models = TelcClass(PQ, 4).models
    for f in tel_corpus(PQ, 20, seed=22, max_size=7, max_depth=1):
        initially = Implies(Not(TPast(Top())), f)
        for m in models[::5]:
            times = range(m.last_change + 4)
            assert model_sat(m, f) == all(tel_sat(m, t, initially) for t in times)
            assert all(tel_sat(m, t, f) for t in times) == model_sat(m, And(f, TGlob(f)))


def test_expressibility_witness():
    models = TelcClass(P1, 3).models
    for m in models:
        w = expressibility_witness_mtel(m)
        for n in models:
            assert model_sat(n, w) == telc_leq(m, n)
