"""Naive reference semantics, written independently of the package engines.

S5 models are frozensets of valuation dicts (as sorted item tuples), temporal
models are explicit lists of such sets, and first-order structures are built
with itertools.  Everything here is slow and obvious on purpose.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from prefpersist.syntax import (
    And,
    Atom,
    Bot,
    Eq,
    Exists,
    Forall,
    Implies,
    K,
    M,
    Not,
    Or,
    Pred,
    TAlways,
    TFut,
    TGlob,
    THist,
    TPast,
    Top,
)

# ---------------------------------------------------------------- S5


def valuations(atoms: Sequence[str]) -> list[tuple[tuple[str, bool], ...]]:
    return [tuple(zip(atoms, bits)) for bits in itertools.product((False, True), repeat=len(atoms))]


def s5_models(atoms: Sequence[str]) -> list[frozenset]:
    vals = valuations(atoms)
    return [frozenset(c) for r in range(1, len(vals) + 1) for c in itertools.combinations(vals, r)]


def s5_eval(f, model: frozenset, world) -> bool:
    w = dict(world)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Atom):
        return w[f.name]
    if isinstance(f, Not):
        return not s5_eval(f.arg, model, world)
    if isinstance(f, And):
        return s5_eval(f.left, model, world) and s5_eval(f.right, model, world)
    if isinstance(f, Or):
        return s5_eval(f.left, model, world) or s5_eval(f.right, model, world)
    if isinstance(f, Implies):
        return (not s5_eval(f.left, model, world)) or s5_eval(f.right, model, world)
    if isinstance(f, K):
        return all(s5_eval(f.arg, model, v) for v in model)
    if isinstance(f, M):
        return any(s5_eval(f.arg, model, v) for v in model)
    raise TypeError(f)


def s5_holds(f, model: frozenset) -> bool:
    return s5_eval(f, model, next(iter(model)))


def gs5_minimal(f, atoms) -> list[frozenset]:
    sat = [m for m in s5_models(atoms) if s5_holds(f, m)]
    return [m for m in sat if not any(n > m for n in sat)]


def gs5_entails(alpha, beta, atoms) -> bool:
    return all(s5_holds(beta, m) for m in gs5_minimal(alpha, atoms))


# ---------------------------------------------------------------- TEL


def tel_eval(f, states: list[frozenset], t: int, depth_pad: int) -> bool:
    """Truth at ``t`` of a model whose state list is repeated from its last entry.

    Future quantifiers look ``depth_pad`` steps beyond the later of ``t`` and the
    last listed state, which is exact once ``depth_pad`` exceeds the nesting.
    """

    def st(s):
        return states[min(s, len(states) - 1)]

    def go(g, s):
        if isinstance(g, (K, M)):
            return s5_eval(g, st(s), next(iter(st(s))))
        if isinstance(g, Top):
            return True
        if isinstance(g, Bot):
            return False
        if isinstance(g, Not):
            return not go(g.arg, s)
        if isinstance(g, And):
            return go(g.left, s) and go(g.right, s)
        if isinstance(g, Or):
            return go(g.left, s) or go(g.right, s)
        if isinstance(g, Implies):
            return (not go(g.left, s)) or go(g.right, s)
        end = max(s, len(states)) + depth_pad
        if isinstance(g, TFut):
            return any(go(g.arg, u) for u in range(s + 1, end))
        if isinstance(g, TGlob):
            return all(go(g.arg, u) for u in range(s + 1, end))
        if isinstance(g, TPast):
            return any(go(g.arg, u) for u in range(s))
        if isinstance(g, THist):
            return all(go(g.arg, u) for u in range(s))
        if isinstance(g, TAlways):
            return all(go(g.arg, u) for u in range(end))
        raise TypeError(g)

    return go(f, t)


def telc_states(model, atoms) -> list[frozenset]:
    """Explicit state list of a package TelcModel, one entry per time up to its last change."""
    vals = valuations(atoms)
    return [frozenset(v for j, v in enumerate(vals) if model.state_at(t) >> j & 1)
            for t in range(model.last_change + 1)]


def telc_pointwise_leq(a: list[frozenset], b: list[frozenset]) -> bool:
    n = max(len(a), len(b))
    return all(a[min(t, len(a) - 1)] >= b[min(t, len(b) - 1)] for t in range(n))


# ---------------------------------------------------------------- first order


def fo_structures(preds: Sequence[tuple[str, int]], n: int):
    """All structures on domain ``range(n)`` as (n, {name: frozenset of tuples})."""
    spaces = [list(itertools.product(range(n), repeat=a)) for _, a in preds]
    choices = []
    for space in spaces:
        choices.append([frozenset(c) for r in range(len(space) + 1) for c in itertools.combinations(space, r)])
    for combo in itertools.product(*choices):
        yield frozenset(range(n)), dict(zip((p for p, _ in preds), combo))


def fo_eval(f, dom, ext, env=None) -> bool:
    env = env or {}
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Pred):
        return tuple(env[v] for v in f.args) in ext[f.name]
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not fo_eval(f.arg, dom, ext, env)
    if isinstance(f, And):
        return fo_eval(f.left, dom, ext, env) and fo_eval(f.right, dom, ext, env)
    if isinstance(f, Or):
        return fo_eval(f.left, dom, ext, env) or fo_eval(f.right, dom, ext, env)
    if isinstance(f, Implies):
        return (not fo_eval(f.left, dom, ext, env)) or fo_eval(f.right, dom, ext, env)
    if isinstance(f, Forall):
        return all(fo_eval(f.body, dom, ext, {**env, f.var: d}) for d in dom)
    if isinstance(f, Exists):
        return any(fo_eval(f.body, dom, ext, {**env, f.var: d}) for d in dom)
    raise TypeError(f)


def _restrict(dom, ext, sub):
    return sub, {p: frozenset(t for t in e if set(t) <= sub) for p, e in ext.items()}


def circ_minimal(alpha, dom, ext, mode: str, pred: str | None, preds) -> bool:
    """Whether a model of ``alpha`` is minimal, by searching for a strictly smaller model.

    Domain mode: strictly smaller structures are exactly proper substructures
    (up to isomorphism).  Predicate mode: same domain and other predicates,
    strictly smaller extension of ``pred``.
    """
    if mode == "dom":
        for r in range(1, len(dom)):
            for sub in itertools.combinations(sorted(dom), r):
                d2, e2 = _restrict(dom, ext, frozenset(sub))
                if fo_eval(alpha, d2, e2):
                    return False
        return True
    own = ext[pred]
    for r in range(len(own)):
        for smaller in itertools.combinations(sorted(own), r):
            if fo_eval(alpha, dom, {**ext, pred: frozenset(smaller)}):
                return False
    return True


def circ_entails(alpha, beta, preds, mode: str, pred: str | None, max_size: int) -> bool:
    for n in range(1, max_size + 1):
        for dom, ext in fo_structures(preds, n):
            if fo_eval(alpha, dom, ext) and circ_minimal(alpha, dom, ext, mode, pred, preds):
                if not fo_eval(beta, dom, ext):
                    return False
    return True
