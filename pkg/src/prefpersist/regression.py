"""Worked examples with known answers, used by ``prefpersist selftest``."""

from __future__ import annotations

from typing import Callable

from .defaults import parse_default_theory, reiter_extensions, sceptical_consequence, sceptically_follows
from .fincirc import CircMode, entail_fincirc
from .mtel import Verdict, entail_mtel, minimal_models_mtel
from .parser import parse_fo, parse_s5, parse_tel
from .s5 import entail_gs5, is_honest

PQ = ("p", "q")


def _gs5(a: str, b: str) -> bool:
    return entail_gs5(parse_s5(a), parse_s5(b), PQ)


def _mtel(a: str, b: str) -> Verdict:
    return entail_mtel(parse_tel(a), parse_tel(b), sig=PQ)


def _default(text: str, phi: str) -> tuple[Verdict, bool]:
    th = parse_default_theory(text)
    atoms = sorted(set(th.atoms()) | {"p", "q"})
    v = sceptical_consequence(th, parse_s5(phi), sig=atoms)
    return v, sceptically_follows(reiter_extensions(th, atoms), parse_s5(phi), atoms)


NIXON = "default: : ~q / p\ndefault: : ~p / q\n"

CASES: list[tuple[str, Callable[[], bool]]] = [
    ("gs5: K p entails ~K q", lambda: _gs5("K p", "~K q") is True),
    ("gs5: K p & K q does not entail ~K q", lambda: _gs5("K p & K q", "~K q") is False),
    ("gs5: K p | K q entails ~(K p & K q)", lambda: _gs5("K p | K q", "~(K p & K q)") is True),
    ("gs5: (K p | K q) & M ~p entails K q", lambda: _gs5("(K p | K q) & M ~p", "K q") is True),
    ("gs5: K p | K q does not entail K q", lambda: _gs5("K p | K q", "K q") is False),
    ("gs5: K p is honest", lambda: is_honest(parse_s5("K p"), PQ)),
    ("gs5: K p | K q is not honest", lambda: not is_honest(parse_s5("K p | K q"), PQ)),
    ("mtel: F K p entails F K q", lambda: _mtel("F K p", "F K q") is Verdict.TRUE),
    ("mtel: F K p has no certified minimal model",
     lambda: minimal_models_mtel(parse_tel("F K p"), sig=PQ).certified == ()),
    ("mtel: F K p & K p does not entail F K q", lambda: _mtel("F K p & K p", "F K q") is Verdict.FALSE),
    ("mtel: K p entails ~K q as in gs5", lambda: _mtel("K p", "~K q") is Verdict.TRUE),
    ("circ: exists x P(x) gives a unique P under pred(P)",
     lambda: entail_fincirc(parse_fo("exists x. P(x)"), parse_fo("forall x y. (P(x) & P(y) -> x = y)"),
                            CircMode.of_pred("P"), 3)),
    ("circ: exists x P(x) gives forall x P(x) under dom",
     lambda: entail_fincirc(parse_fo("exists x. P(x)"), parse_fo("forall x. P(x)"), CircMode.dom(), 3)),
    ("default: (T : p)/p has p", lambda: _default("default: : p / p", "p") == (Verdict.TRUE, True)),
    ("default: (T : p)/p lacks q", lambda: _default("default: : p / p", "q") == (Verdict.FALSE, False)),
    ("default: Nixon pair lacks p", lambda: _default(NIXON, "p") == (Verdict.FALSE, False)),
    ("default: Nixon pair has p | q", lambda: _default(NIXON, "p | q") == (Verdict.TRUE, True)),
]


def run_all() -> list[tuple[str, bool]]:
    out = []
    for name, check in CASES:
        try:
            ok = bool(check())
        except Exception:  # a crash is a failure, reported not raised
            ok = False
        out.append((name, ok))
    return out
