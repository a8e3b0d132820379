"""Finite predicate and domain circumscription.

Structures are labeled: the domain is a nonempty subset of ``0..max_size-1``
so that every substructure of an enumerated structure is itself enumerated.
Equality is identity and is never stored.  Facts are packed into an integer
bitset (one bit per predicate/tuple over the full universe), which lets the
two preference orders be computed with vectorised bit operations.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BoundExceeded, LanguageError, SignatureError
from .syntax import (
    And,
    Bot,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Pred,
    Signature,
    Top,
    conj,
    free_vars,
    has_modal,
    has_temporal,
    predicates_of,
)

DEFAULT_MAX_SIZE = 4
MAX_FACT_BITS = 62
DEFAULT_MAX_STRUCTURES = 200_000


@dataclass(frozen=True)
class FoStructure:
    domain: frozenset[int]
    extensions: tuple[tuple[str, frozenset[tuple[int, ...]]], ...]

    def __post_init__(self):
        if not self.domain:
            raise ValueError("domains are nonempty")
        for name, ext in self.extensions:
            for tup in ext:
                if not set(tup) <= self.domain:
                    raise ValueError(f"{name}{tup} mentions elements outside the domain")

    @classmethod
    def make(cls, domain: int | Iterable[int], extensions: Mapping[str, Iterable[Sequence[int]]] = (),
             sig: Signature | None = None) -> "FoStructure":
        dom = frozenset(range(domain)) if isinstance(domain, int) else frozenset(domain)
        ext = {name: frozenset(tuple(t) for t in tuples) for name, tuples in dict(extensions).items()}
        names = [n for n, _ in sig.predicates] if sig is not None else sorted(ext)
        return cls(dom, tuple((n, ext.get(n, frozenset())) for n in names))

    def ext(self, name: str) -> frozenset[tuple[int, ...]]:
        for n, e in self.extensions:
            if n == name:
                return e
        raise SignatureError(f"unknown predicate {name!r}")

    def restrict(self, sub: Iterable[int]) -> "FoStructure":
        sub = frozenset(sub)
        return FoStructure(sub, tuple((n, frozenset(t for t in e if set(t) <= sub)) for n, e in self.extensions))

    def __str__(self):
        dom = sorted(self.domain)
        head = f"domain={len(dom)}" if dom == list(range(len(dom))) else "domain={" + ",".join(map(str, dom)) + "}"
        parts = [head]
        for name, ext in self.extensions:
            tuples = ",".join("(" + ",".join(map(str, t)) + ")" for t in sorted(ext))
            parts.append(f"{name}={{{tuples}}}")
        return "; ".join(parts)


class Mode(str, Enum):
    PRED = "pred"
    DOM = "dom"


@dataclass(frozen=True)
class CircMode:
    """``CircMode.pred("P")`` minimises predicate P; ``CircMode.dom()`` the domain."""

    kind: Mode
    pred: str | None = None

    @classmethod
    def of_pred(cls, name: str) -> "CircMode":
        return cls(Mode.PRED, name)

    @classmethod
    def dom(cls) -> "CircMode":
        return cls(Mode.DOM)

    @classmethod
    def parse(cls, text: str) -> "CircMode":
        t = text.strip()
        if t.lower() == "dom":
            return cls.dom()
        if t.lower().startswith("pred"):
            name = t[4:].strip(" :()")
            if name:
                return cls.of_pred(name)
        raise ValueError(f"expected 'dom' or 'pred:P', got {text!r}")

    def __str__(self):
        return "dom" if self.kind is Mode.DOM else f"pred({self.pred})"


# ------------------------------------------------------------------ semantics


def fo_sat(s: FoStructure, f: Formula, env: Mapping[str, int] | None = None) -> bool:
    """Tarskian satisfaction; quantifiers range over ``s.domain``."""
    env = dict(env or {})
    missing = free_vars(f) - set(env)
    if missing:
        raise LanguageError(f"unbound variables {sorted(missing)} in {f}")
    return _sat(s, f, env, sorted(s.domain))


def _sat(s: FoStructure, f: Formula, env: dict, dom: list[int]) -> bool:
    if isinstance(f, Pred):
        ext = s.ext(f.name)
        tup = tuple(env[v] for v in f.args)
        if ext and len(next(iter(ext))) != len(tup):
            raise SignatureError(f"arity mismatch for {f.name}")
        return tup in ext
    if isinstance(f, Eq):
        return env[f.left] == env[f.right]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not _sat(s, f.arg, env, dom)
    if isinstance(f, And):
        return _sat(s, f.left, env, dom) and _sat(s, f.right, env, dom)
    if isinstance(f, Or):
        return _sat(s, f.left, env, dom) or _sat(s, f.right, env, dom)
    if isinstance(f, Implies):
        return (not _sat(s, f.left, env, dom)) or _sat(s, f.right, env, dom)
    if isinstance(f, (Forall, Exists)):
        saved = env.get(f.var, None)
        want_all = isinstance(f, Forall)
        result = want_all
        for e in dom:
            env[f.var] = e
            if _sat(s, f.body, env, dom) != want_all:
                result = not want_all
                break
        if saved is None:
            env.pop(f.var, None)
        else:
            env[f.var] = saved
        return result
    raise LanguageError(f"not a first-order formula: {f}")


def pred_leq(m: FoStructure, n: FoStructure, p: str) -> bool:
    """``m`` is P-preferred to ``n``: same domain, same other predicates, smaller P."""
    if m.domain != n.domain:
        return False
    for (name, em), (_, en) in zip(m.extensions, n.extensions):
        if name == p:
            if not em <= en:
                return False
        elif em != en:
            return False
    return True


def dom_leq(n: FoStructure, m: FoStructure) -> bool:
    """``n`` is a substructure of ``m``."""
    return n.domain <= m.domain and n == m.restrict(n.domain)


# -------------------------------------------------------------- enumeration


class FoClass:
    """Every labeled structure over ``sig`` with domain inside ``0..max_size-1``."""

    def __init__(self, sig: Signature, max_size: int, max_structures: int = DEFAULT_MAX_STRUCTURES):
        if max_size < 1:
            raise ValueError("max_size must be positive")
        self.sig = sig
        self.max_size = max_size
        universe = range(max_size)
        self.facts: list[tuple[str, tuple[int, ...]]] = [
            (name, tup) for name, arity in sig.predicates for tup in itertools.product(universe, repeat=arity)
        ]
        if len(self.facts) > MAX_FACT_BITS:
            raise BoundExceeded(f"{len(self.facts)} ground facts exceed the bound of {MAX_FACT_BITS}")
        self._fact_index = {fact: i for i, fact in enumerate(self.facts)}
        # facts whose elements all lie in a given domain (indexed by domain bitmask)
        self.inside = np.zeros(1 << max_size, dtype=np.uint64)
        for d in range(1 << max_size):
            bits = 0
            for i, (_, tup) in enumerate(self.facts):
                if all((d >> e) & 1 for e in tup):
                    bits |= 1 << i
            self.inside[d] = bits
        total = 0
        for d in range(1, 1 << max_size):
            total += 1 << bin(int(self.inside[d])).count("1")
        if total > max_structures:
            raise BoundExceeded(f"{total} structures exceed the bound of {max_structures}")
        doms, facts = [], []
        for d in range(1, 1 << max_size):
            allowed = [i for i in range(len(self.facts)) if (int(self.inside[d]) >> i) & 1]
            for r in range(1 << len(allowed)):
                bits = 0
                for j, i in enumerate(allowed):
                    if (r >> j) & 1:
                        bits |= 1 << i
                doms.append(d)
                facts.append(bits)
        order = sorted(range(len(doms)), key=lambda i: (bin(doms[i]).count("1"), doms[i], facts[i]))
        self.dom_bits = np.array([doms[i] for i in order], dtype=np.uint64)
        self.fact_bits = np.array([facts[i] for i in order], dtype=np.uint64)
        self.structures = [self._decode(int(self.dom_bits[i]), int(self.fact_bits[i])) for i in range(len(order))]
        self._sat_cache: dict[Formula, np.ndarray] = {}

    def __len__(self):
        return len(self.structures)

    def _decode(self, d: int, bits: int) -> FoStructure:
        ext: dict[str, set] = {name: set() for name, _ in self.sig.predicates}
        for i, (name, tup) in enumerate(self.facts):
            if (bits >> i) & 1:
                ext[name].add(tup)
        dom = frozenset(e for e in range(self.max_size) if (d >> e) & 1)
        return FoStructure(dom, tuple((n, frozenset(ext[n])) for n, _ in self.sig.predicates))

    def index_of(self, s: FoStructure) -> int:
        d = sum(1 << e for e in s.domain)
        bits = 0
        for name, ext in s.extensions:
            for tup in ext:
                bits |= 1 << self._fact_index[(name, tup)]
        hits = np.flatnonzero((self.dom_bits == d) & (self.fact_bits == bits))
        if len(hits) != 1:
            raise ValueError(f"structure {s} is not in this class")
        return int(hits[0])

    def pred_bits(self, name: str) -> int:
        return sum(1 << i for i, (n, _) in enumerate(self.facts) if n == name)

    def sat(self, f: Formula) -> np.ndarray:
        if f not in self._sat_cache:
            check_sentence(f, self.sig)
            vec = np.fromiter((_sat(s, f, {}, sorted(s.domain)) for s in self.structures), dtype=bool,
                              count=len(self.structures))
            vec.setflags(write=False)
            self._sat_cache[f] = vec
        return self._sat_cache[f]

    def leq_matrix(self, mode: CircMode) -> np.ndarray:
        """``leq[i, j]``: structure i is preferred to (below) structure j."""
        return self._leq(mode)

    @lru_cache(maxsize=8)
    def _leq(self, mode: CircMode) -> np.ndarray:
        D, F = self.dom_bits, self.fact_bits
        if mode.kind is Mode.PRED:
            if self.sig.arity(mode.pred) is None:
                raise SignatureError(f"unknown predicate {mode.pred!r}")
            pb = np.uint64(self.pred_bits(mode.pred))
            rest = ~pb
            same_dom = D[:, None] == D[None, :]
            same_rest = (F[:, None] & rest) == (F[None, :] & rest)
            sub_p = ((F[:, None] & pb) & ~(F[None, :] & pb)) == 0
            out = same_dom & same_rest & sub_p
        else:
            sub_dom = (D[:, None] & ~D[None, :]) == 0
            inside = self.inside[D.astype(np.int64)]
            restricted = (F[None, :] & inside[:, None]) == F[:, None]
            out = sub_dom & restricted
        out.setflags(write=False)
        return out

    def minimal(self, sat: np.ndarray, mode: CircMode) -> np.ndarray:
        leq = self.leq_matrix(mode)
        strict = leq & ~np.eye(len(self), dtype=bool)
        dominated = (sat[:, None] & strict).any(axis=0)
        return sat & ~dominated


def check_sentence(f: Formula, sig: Signature | None = None) -> None:
    if has_modal(f) or has_temporal(f):
        raise LanguageError(f"not a first-order formula: {f}")
    fv = free_vars(f)
    if fv:
        raise LanguageError(f"open formula (free variables {sorted(fv)}): {f}")
    if sig is not None:
        for name, arity in predicates_of(f).items():
            a = sig.arity(name)
            if a is None:
                raise SignatureError(f"unknown predicate {name!r}")
            if a != arity:
                raise SignatureError(f"predicate {name} has arity {a}, used with {arity}")


def resolve_fo_signature(sig: Signature | Mapping[str, int] | None, *formulas: Formula) -> Signature:
    if isinstance(sig, Signature):
        return sig
    if sig is not None:
        return Signature.of((), sig)
    preds: dict[str, int] = {}
    for f in formulas:
        for name, arity in predicates_of(f).items():
            if preds.setdefault(name, arity) != arity:
                raise SignatureError(f"predicate {name} used with two arities")
    return Signature((), tuple(sorted(preds.items())))


@lru_cache(maxsize=32)
def fo_class(sig: Signature, max_size: int) -> FoClass:
    return FoClass(sig, max_size)


def _setup(alpha: Formula, beta: Formula | None, mode: CircMode, max_size: int, sig, bound: int):
    if max_size > bound:
        raise BoundExceeded(f"domain size {max_size} exceeds the bound of {bound}")
    formulas = [alpha] + ([beta] if beta is not None else [])
    sig = resolve_fo_signature(sig, *formulas)
    if mode.kind is Mode.PRED and sig.arity(mode.pred) is None:
        sig = Signature((), tuple(sorted(sig.predicates + ((mode.pred, 1),))))
    for f in formulas:
        check_sentence(f, sig)
    return fo_class(sig, max_size)


def minimal_structures(
    alpha: Formula,
    mode: CircMode,
    max_size: int,
    sig: Signature | Mapping[str, int] | None = None,
    bound: int = DEFAULT_MAX_SIZE,
    dedup: bool = False,
) -> list[FoStructure]:
    """Minimal models of ``alpha`` under the mode's order.

    With ``dedup`` only one structure per isomorphism class is returned.
    """
    cls = _setup(alpha, None, mode, max_size, sig, bound)
    idx = np.flatnonzero(cls.minimal(cls.sat(alpha), mode))
    out = [cls.structures[i] for i in idx]
    return canonical_representatives(out) if dedup else out


def entail_fincirc(
    alpha: Formula,
    beta: Formula,
    mode: CircMode,
    max_size: int,
    sig: Signature | Mapping[str, int] | None = None,
    bound: int = DEFAULT_MAX_SIZE,
    dedup: bool = False,
) -> bool:
    """``beta`` holds in every minimal model of ``alpha`` with domain size at most ``max_size``."""
    cls = _setup(alpha, beta, mode, max_size, sig, bound)
    minimal = cls.minimal(cls.sat(alpha), mode)
    if dedup:
        reps = canonical_representatives([cls.structures[i] for i in np.flatnonzero(minimal)])
        return all(_sat(s, beta, {}, sorted(s.domain)) for s in reps)
    return not bool(np.any(minimal & ~cls.sat(beta)))


def entail_classical_fo(alpha: Formula, beta: Formula, max_size: int, sig=None) -> bool:
    cls = fo_class(resolve_fo_signature(sig, alpha, beta), max_size)
    return not bool(np.any(cls.sat(alpha) & ~cls.sat(beta)))


# ----------------------------------------------------------- isomorphism


def relabel(s: FoStructure, mapping: Mapping[int, int]) -> FoStructure:
    return FoStructure(
        frozenset(mapping[e] for e in s.domain),
        tuple((n, frozenset(tuple(mapping[e] for e in t) for t in ext)) for n, ext in s.extensions),
    )


def canonical_form(s: FoStructure) -> FoStructure:
    """Least relabeling of ``s`` onto ``0..n-1`` (by printed form)."""
    dom = sorted(s.domain)
    best = None
    for perm in itertools.permutations(range(len(dom))):
        cand = relabel(s, dict(zip(dom, perm)))
        key = str(cand)
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def canonical_representatives(structures: Iterable[FoStructure]) -> list[FoStructure]:
    seen: dict[FoStructure, None] = {}
    for s in structures:
        seen.setdefault(canonical_form(s))
    return list(seen)


def embeds_below(m: FoStructure, n: FoStructure, mode: CircMode) -> bool:
    """Some isomorphic copy of ``m`` lies below ``n`` in the mode's order."""
    dm = sorted(m.domain)
    dn = sorted(n.domain)
    if mode.kind is Mode.PRED and len(dm) != len(dn):
        return False
    if len(dm) > len(dn):
        return False
    for image in itertools.permutations(dn, len(dm)):
        copy = relabel(m, dict(zip(dm, image)))
        if mode.kind is Mode.PRED:
            if pred_leq(copy, n, mode.pred):
                return True
        elif dom_leq(copy, n):
            return True
    return False


def expressibility_witness_fo(m: FoStructure, mode: CircMode, sig: Signature | None = None) -> Formula:
    """Sentence true in ``n`` iff an isomorphic copy of ``m`` is below ``n``.

    Domain mode describes ``m``'s diagram on some distinct elements; predicate
    mode additionally fixes the domain size and only requires ``m``'s positive
    facts for the minimised predicate.  Arities of empty predicates come from
    ``sig``.
    """
    dom = sorted(m.domain)
    xs = [f"x{i}" for i in range(len(dom))]
    name_of = dict(zip(dom, xs))
    parts: list[Formula] = []
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            parts.append(Not(Eq(xs[i], xs[j])))
    if mode.kind is Mode.PRED:
        parts.append(Forall("y", _disj([Eq("y", x) for x in xs])))
    for name, ext in m.extensions:
        arity = sig.arity(name) if sig is not None else None
        if arity is None:
            if not ext:
                raise SignatureError(f"cannot infer the arity of empty predicate {name}; pass a signature")
            arity = len(next(iter(ext)))
        for tup in itertools.product(dom, repeat=arity):
            atom = Pred(name, tuple(name_of[e] for e in tup))
            if tup in ext:
                parts.append(atom)
            elif not (mode.kind is Mode.PRED and name == mode.pred):
                parts.append(Not(atom))
    body = conj(parts)
    for x in reversed(xs):
        body = Exists(x, body)
    return body


def _disj(parts: list[Formula]) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def parse_structure(text: str, sig: Signature | None = None) -> FoStructure:
    """Inverse of ``str(FoStructure)``: ``domain=2; P={(0)}; R={(0,1),(1,1)}``."""
    parts = [p.strip() for p in text.split(";") if p.strip()]
    if not parts or not parts[0].startswith("domain="):
        raise ValueError(f"structure must start with 'domain=': {text!r}")
    head = parts[0][len("domain="):].strip()
    if head.startswith("{"):
        domain: int | list[int] = [int(x) for x in head.strip("{}").split(",") if x.strip()]
    else:
        domain = int(head)
    ext: dict[str, list[tuple[int, ...]]] = {}
    for part in parts[1:]:
        name, eq, body = part.partition("=")
        if not eq:
            raise ValueError(f"expected 'Name={{...}}', got {part!r}")
        ext[name.strip()] = [tuple(int(x) for x in t.split(",") if x.strip())
                             for t in re.findall(r"\(([^()]*)\)", body)]
    return FoStructure.make(domain, ext, sig)
