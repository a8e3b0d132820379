"""Purely syntactic analyses: subjectivity, class grammars, polarity, depth."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import LanguageError
from .syntax import (
    TEMPORAL,
    And,
    Atom,
    Bot,
    Exists,
    Forall,
    Formula,
    Implies,
    K,
    M,
    Not,
    Or,
    Pred,
    TFut,
    TGlob,
    THist,
    TPast,
    Top,
    has_modal,
    has_temporal,
    is_first_order,
    is_propositional,
    walk,
)


class ClassKind(str, Enum):
    DIAM = "diam"
    BOX = "box"
    TD = "td"
    TB = "tb"
    NEGATIVE_IN = "negative"
    POSITIVE_IN = "positive"
    UNIVERSAL = "universal"
    EXISTENTIAL = "existential"
    SUBJECTIVE = "subjective"
    SUBJECTIVE_TEL = "subjective-tel"


_FO_KINDS = {ClassKind.NEGATIVE_IN, ClassKind.POSITIVE_IN, ClassKind.UNIVERSAL, ClassKind.EXISTENTIAL}


@dataclass(frozen=True)
class SyntacticClass:
    kind: ClassKind
    pred: str | None = None

    def __post_init__(self):
        needs_pred = self.kind in (ClassKind.NEGATIVE_IN, ClassKind.POSITIVE_IN)
        if needs_pred != (self.pred is not None):
            raise ValueError(f"class {self.kind.value} {'needs' if needs_pred else 'takes no'} predicate")

    def __str__(self):
        return f"{self.kind.value}({self.pred})" if self.pred else self.kind.value

    @classmethod
    def parse(cls, text: str) -> "SyntacticClass":
        """Accepts ``diam``, ``box``, ``td``, ``tb``, ``universal``,
        ``existential``, ``subjective``, ``subjective-tel``, ``negative(P)``
        and ``positive(P)`` (also ``negative:P``)."""
        m = re.fullmatch(r"\s*([A-Za-z-]+)\s*(?:[(:]\s*([A-Za-z][A-Za-z0-9_]*)\s*\)?)?\s*", text)
        if m is None:
            raise ValueError(f"unknown syntactic class {text!r}")
        return cls(ClassKind(m.group(1).lower()), m.group(2))


DIAM = SyntacticClass(ClassKind.DIAM)
BOX = SyntacticClass(ClassKind.BOX)
TD = SyntacticClass(ClassKind.TD)
TB = SyntacticClass(ClassKind.TB)
UNIVERSAL = SyntacticClass(ClassKind.UNIVERSAL)
EXISTENTIAL = SyntacticClass(ClassKind.EXISTENTIAL)
SUBJECTIVE = SyntacticClass(ClassKind.SUBJECTIVE)
SUBJECTIVE_TEL = SyntacticClass(ClassKind.SUBJECTIVE_TEL)


def NegativeIn(pred: str) -> SyntacticClass:
    return SyntacticClass(ClassKind.NEGATIVE_IN, pred)


def PositiveIn(pred: str) -> SyntacticClass:
    return SyntacticClass(ClassKind.POSITIVE_IN, pred)


def is_subjective(f: Formula) -> bool:
    """Every atom occurrence has a ``K`` (or ``M``) ancestor."""

    def go(node: Formula, under_k: bool) -> bool:
        if isinstance(node, Atom):
            return under_k
        if isinstance(node, (K, M)):
            return go(node.arg, True)
        return all(go(c, under_k) for c in node.children())

    if is_first_order(f):
        raise LanguageError("subjectivity is defined for S5/TEL formulas only")
    return go(f, False)


def temporal_depth(f: Formula) -> int:
    if isinstance(f, TEMPORAL):
        return 1 + temporal_depth(f.arg)
    return max((temporal_depth(c) for c in f.children()), default=0)


def _modal_member(f: Formula, op: type) -> bool:
    # op(phi) with phi propositional | X & X | X | X | op(X)
    if isinstance(f, op):
        return is_propositional(f.arg) or _modal_member(f.arg, op)
    if isinstance(f, (And, Or)):
        return _modal_member(f.left, op) and _modal_member(f.right, op)
    return False


def _temporal_member(f: Formula, op: type) -> bool:
    if _modal_member(f, op):
        return True
    if isinstance(f, (And, Or)):
        return _temporal_member(f.left, op) and _temporal_member(f.right, op)
    if isinstance(f, (TFut, TGlob, TPast, THist)):
        return _temporal_member(f.arg, op)
    return False


def occurrence_parities(f: Formula, pred: str) -> list[int]:
    """Number of enclosing negations (mod 2) of each occurrence of ``pred``.

    ``a -> b`` counts as ``~a | b``.
    """
    out: list[int] = []

    def go(node: Formula, parity: int):
        if isinstance(node, Pred):
            if node.name == pred:
                out.append(parity)
        elif isinstance(node, Not):
            go(node.arg, parity ^ 1)
        elif isinstance(node, Implies):
            go(node.left, parity ^ 1)
            go(node.right, parity)
        else:
            for c in node.children():
                go(c, parity)

    go(f, 0)
    return out


def _quantifier_free(f: Formula) -> bool:
    return not any(isinstance(n, (Forall, Exists)) for n in walk(f))


def _prefix_member(f: Formula, q: type) -> bool:
    while isinstance(f, q):
        f = f.body
    return _quantifier_free(f)


def classify(f: Formula, cls: SyntacticClass) -> bool:
    """Exact membership of ``f`` in the grammar of ``cls`` (no equivalence reasoning)."""
    kind = cls.kind
    fo = is_first_order(f)
    if kind in _FO_KINDS:
        if has_modal(f) or has_temporal(f):
            raise LanguageError(f"class {cls} applies to first-order formulas")
        if kind is ClassKind.NEGATIVE_IN:
            return all(p == 1 for p in occurrence_parities(f, cls.pred))
        if kind is ClassKind.POSITIVE_IN:
            return all(p == 0 for p in occurrence_parities(f, cls.pred))
        if kind is ClassKind.UNIVERSAL:
            return _prefix_member(f, Forall)
        return _prefix_member(f, Exists)
    if fo:
        raise LanguageError(f"class {cls} applies to epistemic formulas")
    if kind in (ClassKind.DIAM, ClassKind.BOX, ClassKind.SUBJECTIVE) and has_temporal(f):
        raise LanguageError(f"class {cls} applies to S5 formulas")
    if kind is ClassKind.DIAM:
        return _modal_member(f, M)
    if kind is ClassKind.BOX:
        return _modal_member(f, K)
    if kind is ClassKind.TD:
        return _temporal_member(f, M)
    if kind is ClassKind.TB:
        return _temporal_member(f, K)
    return is_subjective(f)


def odd_negation_heuristic(f: Formula) -> bool:
    """Sufficient test for downward persistence of a subjective S5 formula.

    True iff the nearest ``K`` above every atom sits under an odd number of
    negations.  ``M a`` counts as ``~K~a`` and ``a -> b`` as ``~a | b``.
    """
    if has_temporal(f) or is_first_order(f):
        raise LanguageError("odd-negation test applies to S5 formulas")

    def go(node: Formula, parity: int, k_parity: int | None) -> bool:
        if isinstance(node, Atom):
            return k_parity == 1
        if isinstance(node, (Top, Bot)):
            return True
        if isinstance(node, Not):
            return go(node.arg, parity ^ 1, k_parity)
        if isinstance(node, K):
            return go(node.arg, parity, parity)
        if isinstance(node, M):
            return go(node.arg, parity, parity ^ 1)
        if isinstance(node, Implies):
            return go(node.left, parity ^ 1, k_parity) and go(node.right, parity, k_parity)
        return all(go(c, parity, k_parity) for c in node.children())

    return go(f, 0, None)


__all__ = [
    "ClassKind",
    "SyntacticClass",
    "DIAM",
    "BOX",
    "TD",
    "TB",
    "UNIVERSAL",
    "EXISTENTIAL",
    "SUBJECTIVE",
    "SUBJECTIVE_TEL",
    "NegativeIn",
    "PositiveIn",
    "is_subjective",
    "temporal_depth",
    "classify",
    "odd_negation_heuristic",
    "occurrence_parities",
]
