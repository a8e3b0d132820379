"""Formula trees shared by the epistemic, temporal-epistemic and first-order languages.

Nodes are frozen dataclasses, so formulas hash, compare structurally and can be
used as cache keys.  Derived connectives (``|``, ``->``, ``M``, ``T``, ``_|_``,
``G``, ``H``, ``[]``) are kept as their own node types; :func:`normalize`
rewrites them into the primitive set ``~ & K P F`` (plus ``T``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import SignatureError


@dataclass(frozen=True)
class Signature:
    """Atoms for the propositional/modal languages, predicates for first-order.

    Equality is always available in first-order formulas and is never listed
    in ``predicates``.
    """

    atoms: tuple[str, ...] = ()
    predicates: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if len(set(self.atoms)) != len(self.atoms):
            raise SignatureError(f"duplicate atoms in {self.atoms}")
        names = [name for name, _ in self.predicates]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate predicates in {names}")
        for name, arity in self.predicates:
            if arity < 0:
                raise SignatureError(f"negative arity for {name}")

    @classmethod
    def of(cls, atoms: str | Sequence[str] = (), predicates=()) -> "Signature":
        if isinstance(atoms, str):
            atoms = [a.strip() for a in atoms.split(",") if a.strip()]
        if isinstance(predicates, dict):
            predicates = predicates.items()
        return cls(tuple(atoms), tuple((n, int(a)) for n, a in predicates))

    def arity(self, name: str) -> int | None:
        for n, a in self.predicates:
            if n == name:
                return a
        return None

    def index(self, atom: str) -> int:
        try:
            return self.atoms.index(atom)
        except ValueError:
            raise SignatureError(f"unknown atom {atom!r}") from None

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        return to_text(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    def __repr__(self):
        return "Bot()"


@dataclass(frozen=True, repr=False)
class _Unary(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"{type(self).__name__}({self.arg!r})"


@dataclass(frozen=True, repr=False)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Not(_Unary):
    pass


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


class K(_Unary):
    """The agent knows ``arg``."""


class M(_Unary):
    """The agent considers ``arg`` possible; sugar for ``~K~arg``."""


class TPast(_Unary):
    """``P``: at some strictly earlier time."""


class THist(_Unary):
    """``H``: at every strictly earlier time."""


class TFut(_Unary):
    """``F``: at some strictly later time."""


class TGlob(_Unary):
    """``G``: at every strictly later time."""


class TAlways(_Unary):
    """``[]``: at every time, i.e. ``H f & f & G f``."""


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula

    def children(self):
        return (self.body,)

    def __repr__(self):
        return f"Forall({self.var!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def children(self):
        return (self.body,)

    def __repr__(self):
        return f"Exists({self.var!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class Pred(Formula):
    name: str
    args: tuple[str, ...]

    def __repr__(self):
        return f"Pred({self.name!r}, {self.args!r})"


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: str
    right: str

    def __repr__(self):
        return f"Eq({self.left!r}, {self.right!r})"


TEMPORAL = (TPast, THist, TFut, TGlob, TAlways)
MODAL = (K, M)
QUANTIFIERS = (Forall, Exists)

UNARY_SYMBOL = {K: "K", M: "M", TPast: "P", THist: "H", TFut: "F", TGlob: "G", TAlways: "[]"}
SYMBOL_UNARY = {v: k for k, v in UNARY_SYMBOL.items()}


def conj(parts: Sequence[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``T``."""
    parts = list(parts)
    if not parts:
        return Top()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Sequence[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return Bot()
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def size(f: Formula) -> int:
    return sum(1 for _ in walk(f))


def atoms_of(f: Formula) -> list[str]:
    """Atom names in order of first occurrence."""
    seen: dict[str, None] = {}
    for node in walk(f):
        if isinstance(node, Atom):
            seen.setdefault(node.name)
    return list(seen)


def predicates_of(f: Formula) -> dict[str, int]:
    out: dict[str, int] = {}
    for node in walk(f):
        if isinstance(node, Pred):
            out.setdefault(node.name, len(node.args))
    return out


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Pred):
        return set(f.args)
    if isinstance(f, Eq):
        return {f.left, f.right}
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    out: set[str] = set()
    for c in f.children():
        out |= free_vars(c)
    return out


def is_propositional(f: Formula) -> bool:
    return all(isinstance(n, (Atom, Top, Bot, Not, And, Or, Implies)) for n in walk(f))


def has_temporal(f: Formula) -> bool:
    return any(isinstance(n, TEMPORAL) for n in walk(f))


def has_modal(f: Formula) -> bool:
    return any(isinstance(n, MODAL) for n in walk(f))


def is_first_order(f: Formula) -> bool:
    return any(isinstance(n, (Forall, Exists, Pred, Eq)) for n in walk(f))


def normalize(f: Formula) -> Formula:
    """Rewrite derived connectives into ``~ & K P F`` and ``T``.

    ``a | b`` becomes ``~(~a & ~b)``, ``a -> b`` becomes ``~(a & ~b)``,
    ``M a`` becomes ``~K~a``, ``_|_`` becomes ``~T``, ``G a`` becomes ``~F~a``,
    ``H a`` becomes ``~P~a`` and ``[]a`` becomes ``H a & a & G a`` (expanded).
    Quantifiers, predicates and equality are left alone.
    """
    if isinstance(f, (Atom, Top, Pred, Eq)):
        return f
    if isinstance(f, Bot):
        return Not(Top())
    if isinstance(f, Not):
        return Not(normalize(f.arg))
    if isinstance(f, And):
        return And(normalize(f.left), normalize(f.right))
    if isinstance(f, Or):
        return Not(And(Not(normalize(f.left)), Not(normalize(f.right))))
    if isinstance(f, Implies):
        return Not(And(normalize(f.left), Not(normalize(f.right))))
    if isinstance(f, K):
        return K(normalize(f.arg))
    if isinstance(f, M):
        return Not(K(Not(normalize(f.arg))))
    if isinstance(f, TPast):
        return TPast(normalize(f.arg))
    if isinstance(f, TFut):
        return TFut(normalize(f.arg))
    if isinstance(f, TGlob):
        return Not(TFut(Not(normalize(f.arg))))
    if isinstance(f, THist):
        return Not(TPast(Not(normalize(f.arg))))
    if isinstance(f, TAlways):
        a = normalize(f.arg)
        return And(And(Not(TPast(Not(a))), a), Not(TFut(Not(a))))
    if isinstance(f, Forall):
        return Forall(f.var, normalize(f.body))
    if isinstance(f, Exists):
        return Exists(f.var, normalize(f.body))
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------- printing

_PREC = {Implies: 1, Or: 2, And: 3}
_BIN_SYMBOL = {And: "&", Or: "|", Implies: "->"}


def _is_tight(f: Formula) -> bool:
    return isinstance(f, (Atom, Top, Bot, Pred, Eq, Not, K, M) + TEMPORAL)


def to_text(f: Formula) -> str:
    """Canonical surface syntax; ``parse(to_text(f))`` returns ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "_|_"
    if isinstance(f, Pred):
        return f"{f.name}({','.join(f.args)})"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Not):
        return "~" + _operand(f.arg)
    if isinstance(f, _Unary):
        sym = UNARY_SYMBOL[type(f)]
        inner = _operand(f.arg)
        sep = "" if inner.startswith("(") or sym == "[]" else " "
        return sym + sep + inner
    if isinstance(f, (Forall, Exists)):
        word = "forall" if isinstance(f, Forall) else "exists"
        return f"{word} {f.var}. {to_text(f.body)}"
    if isinstance(f, _Binary):
        prec = _PREC[type(f)]
        sym = _BIN_SYMBOL[type(f)]
        left, right = f.left, f.right
        ltxt = to_text(left)
        rtxt = to_text(right)
        # & and | associate to the left, -> to the right
        if isinstance(left, (Forall, Exists)) or (
            isinstance(left, _Binary) and (_PREC[type(left)] < prec or (type(f) is Implies and type(left) is Implies))
        ):
            ltxt = f"({ltxt})"
        if isinstance(right, _Binary) and (
            _PREC[type(right)] < prec or (type(right) is type(f) and type(f) is not Implies)
        ):
            rtxt = f"({rtxt})"
        elif isinstance(right, (Forall, Exists)) and type(f) is not Implies:
            rtxt = f"({rtxt})"
        return f"{ltxt} {sym} {rtxt}"
    raise TypeError(f"not a formula node: {f!r}")


def _operand(f: Formula) -> str:
    if _is_tight(f):
        return to_text(f)
    return f"({to_text(f)})"
