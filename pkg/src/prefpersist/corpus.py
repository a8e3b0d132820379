"""Seeded random formula generators used by the oracles, tests and CLI sweeps.

Every generator takes a :class:`random.Random` (or a seed) so corpora are
reproducible.  Sizes count AST nodes as :func:`prefpersist.syntax.size` does.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable, Sequence

from .analysis import ClassKind, SyntacticClass, classify
from .defaults import Default, DefaultTheory
from .syntax import (
    And,
    Atom,
    Bot,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    K,
    M,
    Not,
    Or,
    Pred,
    Signature,
    TFut,
    TGlob,
    THist,
    TPast,
    Top,
    size,
)

Rng = random.Random


def _rng(seed: int | Rng) -> Rng:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_prop(rng: Rng, atoms: Sequence[str], budget: int) -> Formula:
    """Propositional formula with at most ``budget`` nodes."""
    if budget <= 1:
        r = rng.random()
        if r < 0.06:
            return Top()
        if r < 0.1:
            return Bot()
        return Atom(rng.choice(atoms))
    if budget == 2 or rng.random() < 0.25:
        return Not(random_prop(rng, atoms, budget - 1)) if budget >= 2 and rng.random() < 0.5 else Atom(rng.choice(atoms))
    left = rng.randint(1, budget - 2)
    op = rng.choice((And, Or, Implies))
    return op(random_prop(rng, atoms, left), random_prop(rng, atoms, budget - 1 - left))


def random_subjective(rng: Rng, atoms: Sequence[str], budget: int) -> Formula:
    """Subjective S5 formula with at most ``budget`` nodes."""
    if budget <= 2:
        return rng.choice((K, M))(Atom(rng.choice(atoms)))
    r = rng.random()
    if r < 0.35:
        op = rng.choice((K, K, M))
        if rng.random() < 0.8:
            return op(random_prop(rng, atoms, budget - 1))
        return op(random_subjective(rng, atoms, budget - 1))
    if r < 0.5:
        return Not(random_subjective(rng, atoms, budget - 1))
    if budget < 5:
        return rng.choice((K, M))(random_prop(rng, atoms, budget - 1))
    left = rng.randint(2, budget - 3)
    op = rng.choice((And, Or, Implies))
    return op(random_subjective(rng, atoms, left), random_subjective(rng, atoms, budget - 1 - left))


_TEMPORAL_OPS = (TFut, TGlob, TPast, THist)


def random_subjective_tel(rng: Rng, atoms: Sequence[str], budget: int, max_depth: int = 2) -> Formula:
    """Subjective TEL formula, temporal nesting at most ``max_depth``."""
    if budget <= 2:
        return rng.choice((K, M))(Atom(rng.choice(atoms)))
    r = rng.random()
    if r < 0.3 and max_depth > 0:
        return rng.choice(_TEMPORAL_OPS)(random_subjective_tel(rng, atoms, budget - 1, max_depth - 1))
    if r < 0.45:
        return rng.choice((K, M))(random_prop(rng, atoms, budget - 1))
    if r < 0.55:
        return Not(random_subjective_tel(rng, atoms, budget - 1, max_depth))
    if budget < 5:
        return rng.choice((K, M))(random_prop(rng, atoms, budget - 1))
    left = rng.randint(2, budget - 3)
    op = rng.choice((And, Or, Implies))
    return op(random_subjective_tel(rng, atoms, left, max_depth),
              random_subjective_tel(rng, atoms, budget - 1 - left, max_depth))


def random_class_member(rng: Rng, cls: SyntacticClass, atoms: Sequence[str], budget: int,
                        max_depth: int = 2) -> Formula:
    """Random member of DIAM, BOX, TD or TB built directly from the grammar."""
    op = {ClassKind.DIAM: M, ClassKind.TD: M, ClassKind.BOX: K, ClassKind.TB: K}[cls.kind]
    temporal = cls.kind in (ClassKind.TD, ClassKind.TB)

    def go(b: int, depth: int) -> Formula:
        if b <= 2:
            return op(Atom(rng.choice(atoms)))
        r = rng.random()
        if temporal and depth > 0 and r < 0.3:
            return rng.choice(_TEMPORAL_OPS)(go(b - 1, depth - 1))
        if r < 0.5:
            return op(random_prop(rng, atoms, b - 1))
        if r < 0.6:
            return op(go(b - 1, 0))
        if b < 5:
            return op(random_prop(rng, atoms, b - 1))
        left = rng.randint(2, b - 3)
        return rng.choice((And, Or))(go(left, depth), go(b - 1 - left, depth))

    return go(budget, max_depth)


# ---------------------------------------------------------------- first order


def _vars(n: int) -> list[str]:
    return ["x", "y", "z", "u", "v", "w"][:n]


def random_qf(rng: Rng, sig: Signature, variables: Sequence[str], budget: int,
              polarity: tuple[str, int] | None = None, parity: int = 0) -> Formula:
    """Quantifier-free formula over ``variables``.

    With ``polarity=(P, want)`` every occurrence of ``P`` ends up under a number
    of negations congruent to ``want`` mod 2 (implications count one for the
    antecedent).
    """

    def atom(par: int) -> Formula:
        choices = list(sig.predicates)
        if polarity is not None and par != polarity[1]:
            choices = [c for c in choices if c[0] != polarity[0]]
        if not choices or rng.random() < 0.2:
            return Eq(rng.choice(variables), rng.choice(variables))
        name, arity = rng.choice(choices)
        return Pred(name, tuple(rng.choice(variables) for _ in range(arity)))

    def go(b: int, par: int) -> Formula:
        if b <= 1:
            return atom(par)
        if b == 2 or rng.random() < 0.25:
            return Not(go(b - 1, par ^ 1))
        left = rng.randint(1, b - 2)
        op = rng.choice((And, Or, Implies))
        lpar = par ^ 1 if op is Implies else par
        return op(go(left, lpar), go(b - 1 - left, par))

    return go(budget, parity)


def random_fo(rng: Rng, sig: Signature, budget: int, n_vars: int = 2,
              shape: str = "any", polarity: tuple[str, int] | None = None) -> Formula:
    """Random sentence.

    ``shape`` is ``universal`` or ``existential`` for a prenex block of one
    quantifier kind, or ``any`` for mixed quantifiers anywhere.
    """
    variables = _vars(n_vars)
    if shape in ("universal", "existential"):
        q = Forall if shape == "universal" else Exists
        body = random_qf(rng, sig, variables, max(1, budget - n_vars), polarity)
        for v in reversed(variables):
            body = q(v, body)
        return body

    def go(b: int, bound: list[str], par: int) -> Formula:
        free = [v for v in variables if v not in bound]
        if b <= 2 or (not free and rng.random() < 0.5):
            if not bound:
                v = free[0]
                return (Exists if rng.random() < 0.5 else Forall)(v, random_qf(rng, sig, [v], max(1, b - 1), polarity, par))
            return random_qf(rng, sig, bound, max(1, b), polarity, par)
        r = rng.random()
        if free and (r < 0.45 or not bound):
            v = free[0]
            return rng.choice((Forall, Exists))(v, go(b - 1, bound + [v], par))
        if r < 0.6:
            return Not(go(b - 1, bound, par ^ 1))
        if b < 5:
            return random_qf(rng, sig, bound, b - 1, polarity, par)
        left = rng.randint(2, b - 3)
        op = rng.choice((And, Or, Implies))
        lpar = par ^ 1 if op is Implies else par
        return op(go(left, bound, lpar), go(b - 1 - left, bound, par))

    return go(budget, [], 0)


# -------------------------------------------------------------------- corpora


def sample(gen: Callable[[Rng, int], Formula], n: int, seed: int | Rng, max_size: int,
           key: Callable[[Formula], object] | None = None, attempts: int = 40) -> list[Formula]:
    """Up to ``n`` distinct formulas of size at most ``max_size``.

    With ``key`` (for instance a semantic fingerprint) formulas with an equal
    key are deduplicated, keeping the first (smallest budget first) one.
    """
    rng = _rng(seed)
    seen: set = set()
    out: list[Formula] = []
    tries = 0
    while len(out) < n and tries < n * attempts:
        tries += 1
        budget = rng.randint(2, max_size)
        f = gen(rng, budget)
        if size(f) > max_size:
            continue
        k = key(f) if key is not None else f
        if k in seen:
            continue
        seen.add(k)
        out.append(f)
    return out


def subjective_corpus(atoms: Sequence[str], n: int, seed: int | Rng = 0, max_size: int = 10,
                      dedup: bool = True) -> list[Formula]:
    """Subjective S5 formulas, semantically deduplicated over Ground S5 models."""
    from .s5 import sat_vector

    atoms = tuple(atoms)
    key = (lambda f: sat_vector(f, atoms).tobytes()) if dedup else None
    return sample(lambda r, b: random_subjective(r, atoms, b), n, seed, max_size, key)


def class_corpus(cls: SyntacticClass, atoms: Sequence[str], n: int, seed: int | Rng = 0,
                 max_size: int = 10) -> list[Formula]:
    atoms = tuple(atoms)
    out = sample(lambda r, b: random_class_member(r, cls, atoms, b), n, seed, max_size)
    assert all(classify(f, cls) for f in out)
    return out


def tel_corpus(atoms: Sequence[str], n: int, seed: int | Rng = 0, max_size: int = 10,
               max_depth: int = 2) -> list[Formula]:
    atoms = tuple(atoms)
    return sample(lambda r, b: random_subjective_tel(r, atoms, b, max_depth), n, seed, max_size)


def fo_corpus(sig: Signature, n: int, seed: int | Rng = 0, max_size: int = 10, shape: str = "any",
              polarity: tuple[str, int] | None = None, n_vars: int = 2) -> list[Formula]:
    return sample(lambda r, b: random_fo(r, sig, max(b, n_vars + 1), n_vars, shape, polarity), n, seed, max_size)


def random_default_theory(rng: Rng, atoms: Sequence[str], max_rules: int = 3, max_facts: int = 1,
                          budget: int = 3) -> DefaultTheory:
    facts = tuple(random_prop(rng, atoms, rng.randint(1, budget)) for _ in range(rng.randint(0, max_facts)))
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        pre = Top() if rng.random() < 0.5 else random_prop(rng, atoms, rng.randint(1, budget))
        rules.append(Default(pre, random_prop(rng, atoms, rng.randint(1, budget)),
                             random_prop(rng, atoms, rng.randint(1, budget))))
    return DefaultTheory(facts, tuple(rules))


def default_theories(atoms: Sequence[str], n: int, seed: int | Rng = 0, max_rules: int = 3) -> list[DefaultTheory]:
    rng = _rng(seed)
    return [random_default_theory(rng, atoms, max_rules) for _ in range(n)]


def prop_corpus(atoms: Sequence[str], n: int, seed: int | Rng = 0, max_size: int = 5) -> list[Formula]:
    from .s5 import prop_mask

    atoms = tuple(atoms)
    return sample(lambda r, b: random_prop(r, atoms, b), n, seed, max_size, key=lambda f: prop_mask(f, atoms))


def dedupe(formulas: Iterable[Formula]) -> list[Formula]:
    return list(dict.fromkeys(formulas))
