import json
import random

import pytest

from prefpersist import parse_s5
from prefpersist.analysis import DIAM
from prefpersist.corpus import random_class_member, random_subjective
from prefpersist.errors import LanguageError, SignatureError
from prefpersist.pipeline import (
    Options, Query, Route, build_query, make_logic, parse_batch_line, rows_to_json, rows_to_tsv, run_batch,
    run_query, split_fields,
)

S = parse_s5
ALL_BUT_DIRECT = Options(frozenset(r for r in Route if r is not Route.DIRECT))


def gs5(premises, conclusion, phi=None, split=None):
    return build_query("gs5", premises, conclusion, phi, split, atoms=["p", "q"])


def test_conservative_reduction_example():
    r = run_query(gs5(["K p & K q"], "K p"))
    assert (r.route, r.verdict) == (Route.CONSERVATIVE_REDUCTION, "true")
    assert r.classifier == "box"


def test_boxed_conclusion_takes_reduction_even_with_addition():
    # K q is in BOX, so the reduction fires before the direct check
    r = run_query(gs5(["K p | K q"], "K q", phi="M ~p"))
    assert (r.route, r.verdict) == (Route.CONSERVATIVE_REDUCTION, "true")
    direct = run_query(gs5(["K p | K q"], "K q", phi="M ~p"), ALL_BUT_DIRECT)
    assert (direct.route, direct.verdict) == (Route.DIRECT, "true")


def test_downward_persistent_add_example():
    r = run_query(gs5(["K p"], "~K q", phi="M ~q"))
    assert (r.route, r.verdict) == (Route.DOWNWARD_PERSISTENT_ADD, "true")


def test_upward_keep_reachable_when_reduction_disabled():
    opts = Options(frozenset({Route.CONSERVATIVE_REDUCTION}))
    r = run_query(gs5(["K p & K q"], "K p", phi="K p"), opts)
    assert (r.route, r.verdict) == (Route.UPWARD_PERSISTENT_KEEP, "true")


def test_local_split():
    opts = Options(frozenset({Route.CONSERVATIVE_REDUCTION}))
    r = run_query(gs5(["K p", "M ~q"], "~K q", split=[0]), opts)
    assert (r.route, r.verdict) == (Route.LOCAL_SPLIT, "true")


def test_direct_false_with_witness():
    r = run_query(gs5(["K p | K q"], "~K q"))
    assert (r.route, r.verdict) == (Route.DIRECT, "false")
    assert r.witnesses


def test_mtel_query_reports_certification():
    q = build_query("mtel", ["F(K p) & K p"], "F(K q)", atoms=["p", "q"])
    r = run_query(q)
    assert (r.route, r.verdict) == (Route.DIRECT, "false")
    assert r.certification["certified"] >= 1


def test_mtel_non_conservative_conclusion_not_reduced():
    q = build_query("mtel", ["F(K p)"], "F(K q)", atoms=["p", "q"])
    r = run_query(q)
    assert r.route is Route.DIRECT and r.verdict == "true"


def test_circ_queries():
    q = build_query("circ:pred:P", ["exists x. P(x)"], "forall x y. (P(x) & P(y) -> x = y)")
    assert run_query(q).verdict == "true"
    q = build_query("circ:dom", ["exists x. P(x)"], "exists x. P(x)")
    r = run_query(q)
    assert (r.route, r.verdict) == (Route.CONSERVATIVE_REDUCTION, "true")


def test_query_validation():
    logic = make_logic("gs5", atoms=["p", "q"])
    with pytest.raises(ValueError):
        Query(logic, (), S("K p"))
    with pytest.raises(LanguageError):
        Query(logic, (S("p"),), S("K p"))
    with pytest.raises(ValueError):
        Query(logic, (S("K p"),), S("K p"), split=(3,))
    with pytest.raises(SignatureError):
        gs5(["K r"], "K p")
    with pytest.raises(ValueError):
        make_logic("nope")


def test_batch_parsing():
    assert split_fields("gs5 | _|_ | K p") == ["gs5", "_|_", "K p"]
    assert parse_batch_line("gs5 | K p ; M q | M ~p | K p") == ("gs5", ["K p", "M q"], "M ~p", "K p")
    assert parse_batch_line("gs5 | K p \\/ K q | | K q")[2] is None
    with pytest.raises(ValueError):
        parse_batch_line("gs5 | K p")


BATCH = """# logic | premise | [phi |] conclusion
gs5 | K p & K q | K p
gs5 | K p \\/ K q | M ~p | K q
gs5 | K p | K r
mtel | F(K p) | F(K q)
circ:pred:P | exists x. P(x) | forall x. (P(x) -> P(x))
"""


def test_batch_run_and_outputs():
    rows = run_batch(BATCH, atoms=["p", "q"])
    assert [r.line for r in rows] == [2, 3, 4, 5, 6]
    assert rows[2].report is None and "r" in rows[2].error
    tsv = rows_to_tsv(rows)
    lines = tsv.splitlines()
    assert lines[0].split("\t")[0] == "line" and len(lines) == 6
    data = json.loads(rows_to_json(rows))
    assert data[0]["route"] == "conservative-reduction" and "error" in data[2]
    assert rows_to_json(rows) == rows_to_json(run_batch(BATCH, atoms=["p", "q"]))


def test_timings_only_on_request():
    r = run_query(gs5(["K p"], "~K q"))
    assert "timings" not in r.to_dict() and "timings" in r.to_dict(timings=True)
    assert "timings:" not in r.to_text()


def test_routes_agree_with_direct_on_fuzzed_gs5_queries(gs5_pq):
    rng = random.Random(7)
    atoms = ("p", "q")
    for _ in range(120):
        prem = tuple(random_subjective(rng, atoms, rng.randint(2, 7)) for _ in range(rng.randint(1, 2)))
        phi = random_class_member(rng, DIAM, atoms, rng.randint(2, 5)) if rng.random() < 0.6 else None
        concl = random_subjective(rng, atoms, rng.randint(2, 6))
        split = (0,) if len(prem) == 2 and rng.random() < 0.5 else None
        q = Query(gs5_pq, prem, concl, phi, split)
        assert run_query(q).verdict == run_query(q, ALL_BUT_DIRECT).verdict
