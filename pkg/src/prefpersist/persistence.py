"""Semantic oracles for persistence, monotonicity and conservativity.

All checks quantify over the finite model class of a :class:`LogicHandle`.
Corpus-based oracles quantify over the formulas they are given; the
fixed-premise checks are exact model-level conditions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .analysis import SyntacticClass, classify
from .errors import NothingToConstruct
from .corpus import random_class_member
from .logics import LogicHandle, MtelLogic
from .syntax import And, Atom, Formula, Implies, K, M, Not, Or, size, to_text


@dataclass(frozen=True)
class PersistenceVerdict:
    downward: bool
    upward: bool
    #: (m, n) with m |= f, n below m, n not |= f
    down_witness: tuple[int, int] | None = None
    #: (m, n) with m |= f, m below n, n not |= f
    up_witness: tuple[int, int] | None = None

    @property
    def witness(self) -> tuple[int, int] | None:
        return self.down_witness or self.up_witness


def _first_pair(mask: np.ndarray) -> tuple[int, int] | None:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    m, n = hits[0]
    return int(m), int(n)


def _violation(below: np.ndarray, sat: np.ndarray) -> tuple[int, int] | None:
    """First (m, n) with m |= f, below[n, m] and n not |= f."""
    S, U = np.flatnonzero(sat), np.flatnonzero(~sat)
    if len(S) == 0 or len(U) == 0:
        return None
    sub = below[np.ix_(U, S)].T  # [m, n]
    hit = _first_pair(sub)
    return None if hit is None else (int(S[hit[0]]), int(U[hit[1]]))


def persistence_oracle(logic: LogicHandle, f: Formula) -> PersistenceVerdict:
    """Exhaustive check of both persistence directions; witnesses in model order."""
    sat = logic.sat(f)
    leq = logic.leq
    dw = _violation(leq, sat)  # n below m
    uw = _violation(leq.T, sat)  # m below n
    return PersistenceVerdict(dw is None, uw is None, dw, uw)


def _minimal_matrix(logic: LogicHandle, formulas: Sequence[Formula]) -> np.ndarray:
    return np.array([logic.minimal_vec(logic.sat(a)) for a in formulas], dtype=bool).reshape(len(formulas), logic.size)


def _sat_matrix(logic: LogicHandle, formulas: Sequence[Formula]) -> np.ndarray:
    return np.array([logic.sat(b) for b in formulas], dtype=bool).reshape(len(formulas), logic.size)


def _entails_matrix(logic: LogicHandle, premises: Sequence[Formula], conclusions: Sequence[Formula]) -> np.ndarray:
    """``E[i, j]``: premises[i] preferentially entails conclusions[j] (exact logics only)."""
    mins = _minimal_matrix(logic, premises).astype(np.int32)
    bad = (~_sat_matrix(logic, conclusions)).astype(np.int32)
    return (mins @ bad.T) == 0


def monotonicity_violation(logic: LogicHandle, f: Formula, premises: Sequence[Formula],
                           conclusions: Sequence[Formula]) -> tuple[Formula, Formula] | None:
    """First ``(alpha, beta)`` with ``alpha |~ beta`` but not ``alpha & f |~ beta``."""
    premises, conclusions = list(premises), list(conclusions)
    if logic.exact_minimality:
        before = _entails_matrix(logic, premises, conclusions)
        after = _entails_matrix(logic, [And(a, f) for a in premises], conclusions)
        hit = _first_pair(before & ~after)
        return None if hit is None else (premises[hit[0]], conclusions[hit[1]])
    for a in premises:
        for b in conclusions:
            if logic.entails(a, b) is True and logic.entails(And(a, f), b) is False:
                return a, b
    return None


def respects_monotonicity_oracle(logic: LogicHandle, f: Formula, premises: Iterable[Formula],
                                 conclusions: Iterable[Formula]) -> bool:
    return monotonicity_violation(logic, f, list(premises), list(conclusions)) is None


def respects_monotonicity_fixed(logic: LogicHandle, alpha: Formula, f: Formula) -> bool:
    """Every minimal model of ``alpha & f`` is a minimal model of ``alpha``."""
    _require_exact(logic)
    both = logic.minimal_vec(logic.sat(And(alpha, f)))
    alone = logic.minimal_vec(logic.sat(alpha))
    return not bool(np.any(both & ~alone))


def conservativity_violation(logic: LogicHandle, beta: Formula, premises: Sequence[Formula],
                             additions: Sequence[Formula]) -> tuple[Formula, Formula] | None:
    """First ``(alpha, phi)`` with ``alpha |~ beta`` but not ``alpha & phi |~ beta``."""
    premises, additions = list(premises), list(additions)
    if logic.exact_minimality:
        before = _entails_matrix(logic, premises, [beta])[:, 0]
        for i in np.flatnonzero(before):
            after = _entails_matrix(logic, [And(premises[i], p) for p in additions], [beta])[:, 0]
            bad = np.flatnonzero(~after)
            if len(bad):
                return premises[i], additions[int(bad[0])]
        return None
    for a in premises:
        if logic.entails(a, beta) is not True:
            continue
        for p in additions:
            if logic.entails(And(a, p), beta) is False:
                return a, p
    return None


def conservative_oracle(logic: LogicHandle, beta: Formula, premises: Iterable[Formula],
                        additions: Iterable[Formula] | None = None) -> bool:
    premises = list(premises)
    additions = premises if additions is None else list(additions)
    return conservativity_violation(logic, beta, premises, additions) is None


def conservative_fixed(logic: LogicHandle, alpha: Formula, beta: Formula) -> bool:
    """``beta`` survives every addition to the fixed premise ``alpha``.

    For logics with expressible preference this is classical entailment.
    """
    return logic.classical(alpha, beta)


def conservative_sweep(logic: LogicHandle, beta: Formula, premises: Iterable[Formula]) -> Formula | None:
    """Fixed-premise conservativity over every premise: the first ``alpha`` with
    ``alpha |~ beta`` but not ``alpha |= beta``, or None."""
    for a in premises:
        if logic.entails(a, beta) is True and not conservative_fixed(logic, a, beta):
            return a
    return None


# ---------------------------------------------------------------- witnesses


def _require_exact(logic: LogicHandle) -> None:
    if not logic.exact_minimality:
        raise NotImplementedError(f"{logic.name}: minimality is not decided on the enumerated class")


def expressibility_failures(logic: LogicHandle, limit: int | None = None) -> list[tuple[int, int]]:
    """Pairs ``(m, n)`` where the witness of ``m`` misjudges model ``n``."""
    out = []
    for i in range(logic.size):
        got = logic.sat(logic.witness(i))
        for j in np.flatnonzero(got != logic.above(i)):
            out.append((i, int(j)))
            if limit is not None and len(out) >= limit:
                return out
    return out


def check_expressibility(logic: LogicHandle) -> bool:
    return not expressibility_failures(logic, limit=1)


def is_smooth(logic: LogicHandle, sample: Iterable[Formula]) -> bool:
    """Every model of every sampled formula lies above a minimal model of it."""
    _require_exact(logic)
    for f in sample:
        sat = logic.sat(f)
        mins = logic.minimal_vec(sat)
        covered = (mins[:, None] & logic.leq).any(axis=0)
        if np.any(sat & ~covered):
            return False
    return True


@dataclass(frozen=True)
class Construction:
    alpha: Formula
    beta: Formula
    phi: Formula
    before: bool | None
    after: bool | None

    @property
    def violates(self) -> bool:
        return self.before is True and self.after is False


def monotonicity_counterexample(logic: LogicHandle, f: Formula) -> Construction:
    """Monotonicity violation built from a downward-persistence witness.

    With ``m |= f``, ``n`` below ``m`` and ``n`` not a model of ``f``:
    ``alpha = w(n) & (f -> w(m))`` entails ``~f`` but ``alpha & f`` does not.
    """
    v = persistence_oracle(logic, f)
    if v.downward:
        raise NothingToConstruct(f"{to_text(f)} is downward persistent")
    m, n = v.down_witness
    alpha = And(logic.witness(n), Implies(f, logic.witness(m)))
    beta = Not(f)
    return Construction(alpha, beta, f, logic.entails(alpha, beta), logic.entails(And(alpha, f), beta))


def monotonicity_converse_check(logic: LogicHandle, f: Formula) -> bool:
    return monotonicity_counterexample(logic, f).violates


def conservativity_counterexample(logic: LogicHandle, beta: Formula) -> Construction:
    """Conservativity violation built from an upward-persistence witness.

    With ``n |= beta``, ``n`` below ``m`` and ``m`` not a model of ``beta``:
    ``alpha = w(n)`` entails ``beta`` but ``alpha & w(m)`` does not.
    """
    v = persistence_oracle(logic, beta)
    if v.upward:
        raise NothingToConstruct(f"{to_text(beta)} is upward persistent")
    n, m = v.up_witness
    alpha, phi = logic.witness(n), logic.witness(m)
    return Construction(alpha, beta, phi, logic.entails(alpha, beta), logic.entails(And(alpha, phi), beta))


def conservativity_converse_check(logic: LogicHandle, beta: Formula) -> bool:
    return conservativity_counterexample(logic, beta).violates


def negation_duality_check(logic: LogicHandle, f: Formula) -> bool:
    """Upward persistence of ``f`` coincides with downward persistence of ``~f``."""
    return persistence_oracle(logic, f).upward == persistence_oracle(logic, Not(f)).downward


def smooth_criterion_sides(logic: LogicHandle, alpha: Formula, phi: Formula) -> tuple[bool, bool]:
    """Both sides of the smooth-logic criterion for respecting monotonicity at ``alpha``.

    Left: every minimal model of ``alpha & phi`` is minimal for ``alpha``.
    Right: every model of ``alpha & phi`` lies above a minimal model of
    ``alpha`` that satisfies ``phi``.
    """
    _require_exact(logic)
    left = respects_monotonicity_fixed(logic, alpha, phi)
    sat_a = logic.sat(alpha)
    sat_p = logic.sat(phi)
    good = logic.minimal_vec(sat_a) & sat_p
    covered = (good[:, None] & logic.leq).any(axis=0)
    right = not bool(np.any(sat_a & sat_p & ~covered))
    return left, right


def true_beyond_ignorance(logic: MtelLogic, beta: Formula) -> bool:
    """``beta`` holds in every enumerated model except possibly the totally ignorant one."""
    sat = logic.sat(beta).copy()
    sat[logic.ti_index()] = True
    return bool(sat.all())


# ------------------------------------------------------- bounded completeness


def _candidates(cls: SyntacticClass, atoms: Sequence[str], size_bound: int) -> Iterable[Formula]:
    # exhaustive over the smallest members, then a seeded sample of larger ones
    op = M if cls.kind.value in ("diam", "td") else K
    lits = [Atom(a) for a in atoms] + [Not(Atom(a)) for a in atoms]
    props = lits + [Or(a, b) for a, b in itertools.combinations(lits, 2)] + [And(a, b) for a, b in itertools.combinations(lits, 2)]
    base = [op(p) for p in props]
    for f in base:
        if size(f) <= size_bound:
            yield f
    for a, b in itertools.combinations_with_replacement(base, 2):
        for c in (And(a, b), Or(a, b)):
            if size(c) <= size_bound:
                yield c
    rng = random.Random(0)
    for _ in range(2000):
        f = random_class_member(rng, cls, atoms, size_bound)
        if size(f) <= size_bound:
            yield f


def bounded_completeness_search(logic: LogicHandle, f: Formula, cls: SyntacticClass,
                                size_bound: int = 9) -> Formula | None:
    """A member of ``cls`` equivalent to ``f`` on the enumerated class, or None.

    ``None`` is inconclusive: the search is bounded.
    """
    if classify(f, cls) and size(f) <= size_bound:
        return f
    target = logic.sat(f)
    atoms = getattr(logic, "atoms", ())
    for g in _candidates(cls, atoms, size_bound):
        if np.array_equal(logic.sat(g), target):
            return g
    return None


__all__ = [
    "Construction",
    "PersistenceVerdict",
    "bounded_completeness_search",
    "check_expressibility",
    "conservative_fixed",
    "conservative_oracle",
    "conservative_sweep",
    "conservativity_converse_check",
    "conservativity_counterexample",
    "conservativity_violation",
    "expressibility_failures",
    "is_smooth",
    "monotonicity_converse_check",
    "monotonicity_counterexample",
    "monotonicity_violation",
    "negation_duality_check",
    "persistence_oracle",
    "respects_monotonicity_fixed",
    "respects_monotonicity_oracle",
    "smooth_criterion_sides",
    "true_beyond_ignorance",
]
