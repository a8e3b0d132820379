"""Propositional default theories: MTEL translation and a Reiter-extension oracle.

Text format, one item per line (``#`` starts a comment)::

    fact: q
    default: q : p / p        # prerequisite : justification / consequent
    default: : ~q / p         # empty prerequisite means T
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .analysis import temporal_depth
from .errors import LanguageError
from .mtel import Horizon, Verdict, entail_mtel
from .parser import parse_s5
from .s5 import DEFAULT_MAX_ATOMS, check_bound, full_mask, prop_mask, resolve_signature
from .syntax import (
    And,
    Formula,
    Implies,
    K,
    Not,
    Signature,
    TAlways,
    TFut,
    TGlob,
    Top,
    atoms_of,
    conj,
    is_propositional,
    to_text,
)


@dataclass(frozen=True)
class Default:
    prerequisite: Formula
    justification: Formula
    consequent: Formula

    def __str__(self):
        return f"{to_text(self.prerequisite)} : {to_text(self.justification)} / {to_text(self.consequent)}"


@dataclass(frozen=True)
class DefaultTheory:
    facts: tuple[Formula, ...] = ()
    defaults: tuple[Default, ...] = ()

    def __post_init__(self):
        for f in self.formulas():
            if not is_propositional(f):
                raise LanguageError(f"default theories are propositional; got {f}")

    def formulas(self) -> list[Formula]:
        out = list(self.facts)
        for d in self.defaults:
            out += [d.prerequisite, d.justification, d.consequent]
        return out

    def atoms(self) -> list[str]:
        names: set[str] = set()
        for f in self.formulas():
            names.update(atoms_of(f))
        return sorted(names)

    def to_text(self) -> str:
        lines = [f"fact: {to_text(f)}" for f in self.facts]
        lines += [f"default: {d}" for d in self.defaults]
        return "\n".join(lines) + ("\n" if lines else "")


def parse_default_theory(text: str, sig: Signature | None = None) -> DefaultTheory:
    facts, defaults = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in ("fact", "default"):
            raise ValueError(f"line {lineno}: expected 'fact:' or 'default:'")
        if key == "fact":
            facts.append(parse_s5(rest, sig))
            continue
        pre, sep1, tail = rest.partition(":")
        just, sep2, cons = tail.partition("/")
        if not (sep1 and sep2):
            raise ValueError(f"line {lineno}: expected '<pre> : <just> / <cons>'")
        pre_f = parse_s5(pre, sig) if pre.strip() else Top()
        defaults.append(Default(pre_f, parse_s5(just, sig), parse_s5(cons, sig)))
    return DefaultTheory(tuple(facts), tuple(defaults))


def default_to_mtel(theory: DefaultTheory) -> Formula:
    """``[](K pre & G(~K~just) -> G(K cons))`` per rule, then ``K fact`` per fact."""
    rules = [
        TAlways(Implies(And(K(d.prerequisite), TGlob(Not(K(Not(d.justification))))), TGlob(K(d.consequent))))
        for d in theory.defaults
    ]
    return conj(rules + [K(f) for f in theory.facts])


def default_horizon(theory: DefaultTheory, phi: Formula) -> Horizon:
    # A minimal reasoning process applies each rule at most once, one round per step.
    depth = temporal_depth(And(default_to_mtel(theory), TFut(K(phi))))
    return Horizon(max(1, depth + len(theory.defaults)))


def sceptical_consequence(
    theory: DefaultTheory,
    phi: Formula,
    hz: Horizon | None = None,
    sig: Signature | Sequence[str] | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> Verdict:
    """Whether the translation of ``theory`` MTEL-entails ``F(K phi)``."""
    if not is_propositional(phi):
        raise LanguageError(f"sceptical consequences are propositional; got {phi}")
    psi = default_to_mtel(theory)
    sig = resolve_signature(sig if sig is not None else sorted(set(theory.atoms()) | set(atoms_of(phi))))
    hz = hz or default_horizon(theory, phi)
    return entail_mtel(psi, TFut(K(phi)), hz, sig, max_atoms)


def reiter_extensions(
    theory: DefaultTheory, sig: Signature | Sequence[str] | None = None, max_atoms: int = DEFAULT_MAX_ATOMS
) -> list[int]:
    """All Reiter extensions, each as the mask of valuations satisfying it.

    Candidates are ``Th(W + consequents of D')`` for every subset ``D'`` of the
    defaults; a candidate ``E`` is an extension when the least set closed under
    the facts and every default whose prerequisite it contains and whose
    justification is consistent with ``E`` is ``E`` itself.  Mask 0 stands for
    the inconsistent extension.
    """
    sig = resolve_signature(sig if sig is not None else theory.atoms())
    check_bound(sig, max_atoms)
    atoms = sig.atoms
    full = full_mask(len(atoms))
    w_mask = full
    for f in theory.facts:
        w_mask &= prop_mask(f, atoms)
    rules = [(prop_mask(d.prerequisite, atoms), prop_mask(d.justification, atoms), prop_mask(d.consequent, atoms))
             for d in theory.defaults]
    found: set[int] = set()
    for k in range(len(rules) + 1):
        for subset in combinations(range(len(rules)), k):
            cand = w_mask
            for i in subset:
                cand &= rules[i][2]
            if cand in found:
                continue
            if _gamma(cand, w_mask, rules) == cand:
                found.add(cand)
    return sorted(found, reverse=True)


def _gamma(ext: int, w_mask: int, rules: list[tuple[int, int, int]]) -> int:
    current = w_mask
    applied: set[int] = set()
    changed = True
    while changed:
        changed = False
        for i, (pre, just, cons) in enumerate(rules):
            if i in applied:
                continue
            if current & pre == current and ext & just:
                current &= cons
                applied.add(i)
                changed = True
    return current


def sceptically_follows(extensions: Sequence[int], phi: Formula, atoms: Sequence[str]) -> bool:
    """``phi`` belongs to every extension (vacuously true when there are none)."""
    mask = prop_mask(phi, tuple(atoms))
    return all(e & mask == e for e in extensions)
