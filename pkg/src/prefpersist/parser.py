"""Recursive-descent parser for the surface syntax.

Grammar (loosest binding first)::

    formula  := quant | imp
    quant    := ('forall' | 'exists') var (','? var)* '.' formula
    imp      := or ('->' (quant | imp))?          # right associative
    or       := and ('|' (quant | and))*
    and      := unary ('&' (quant | unary))*
    unary    := ('~' | 'K' | 'M' | 'F' | 'G' | 'P' | 'H' | '[]') (unary | quant)
              | primary

A quantifier in operand position extends as far right as possible, so
``P(x) & forall y. Q(y) | R(y)`` reads the disjunction inside the quantifier.
    primary  := '(' formula ')' | 'T' | '_|_' | atom | Name '(' vars ')' | var '=' var

Atoms and variables are lowercase identifiers; operators are single
uppercase letters; predicate names start with an uppercase letter and are
always followed by an argument list.
"""

from __future__ import annotations

import re
from enum import Enum

from .errors import FormulaSyntaxError, LanguageError, SignatureError
from .syntax import (
    SYMBOL_UNARY,
    TEMPORAL,
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
    Top,
    walk,
)


class Lang(str, Enum):
    S5 = "S5"
    TEL = "TEL"
    FO = "FO"


_TOKEN = re.compile(
    r"""\s*(?:
        (?P<arrow>->)
      | (?P<box>\[\])
      | (?P<bot>_\|_)
      | (?P<alt>\\/|/\\)
      | (?P<sym>[~&|().,=])
      | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)

_OPERATOR_LETTERS = set("KMFGPH")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = len(text[pos:]) - len(text[pos:].lstrip()) + pos
            raise FormulaSyntaxError(f"unexpected character {text[bad]!r}", text, bad)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "alt":  # ASCII-art spellings of | and &
            kind, value = "sym", "|" if value == "\\/" else "&"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature | None, lang: Lang):
        self.text = text
        self.sig = sig
        self.lang = lang
        self.toks = _tokenize(text)
        self.i = 0
        self.bound: list[str] = []

    # token helpers
    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(msg, self.text, tok[2])

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value:
            self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def at(self, value: str) -> bool:
        return self.peek()[1] == value

    # grammar
    def formula(self) -> Formula:
        if self.peek()[1] in ("forall", "exists"):
            return self.quant()
        return self.imp()

    def quant(self) -> Formula:
        word = self.take()[1]
        if self.lang is not Lang.FO:
            self.error(f"quantifier {word!r} outside first-order language", self.toks[self.i - 1])
        vars_ = [self.var()]
        while not self.at("."):
            if self.at(","):
                self.take()
            vars_.append(self.var())
        self.expect(".")
        self.bound.extend(vars_)
        body = self.formula()
        del self.bound[-len(vars_):]
        node = Forall if word == "forall" else Exists
        for v in reversed(vars_):
            body = node(v, body)
        return body

    def var(self) -> str:
        tok = self.take()
        if tok[0] != "ident" or not tok[1][0].islower() or tok[1] in ("forall", "exists"):
            self.error("expected a variable", tok)
        return tok[1]

    def imp(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.take()
            right = self.quant() if self.peek()[1] in ("forall", "exists") else self.imp()
            return Implies(left, right)
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.at("|"):
            self.take()
            out = Or(out, self.quant() if self.peek()[1] in ("forall", "exists") else self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.at("&"):
            self.take()
            out = And(out, self.operand())
        return out

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "~":
            self.take()
            return Not(self.operand())
        if kind == "box":
            self.take()
            return self._temporal("[]", pos)
        if kind == "ident" and value in _OPERATOR_LETTERS and not self._is_predicate_call():
            self.take()
            if value in ("K", "M"):
                if self.lang is Lang.FO:
                    self.error(f"modal operator {value} outside modal languages", (kind, value, pos))
                arg = self.operand()
                return K(arg) if value == "K" else M(arg)
            return self._temporal(value, pos)
        return self.primary()

    def _temporal(self, sym: str, pos: int) -> Formula:
        if self.lang is not Lang.TEL:
            raise FormulaSyntaxError(f"temporal operator {sym} outside TEL", self.text, pos)
        return SYMBOL_UNARY[sym](self.operand())

    def operand(self) -> Formula:
        if self.peek()[1] in ("forall", "exists"):
            return self.quant()
        return self.unary()

    def _is_predicate_call(self) -> bool:
        # In first-order mode an uppercase name followed by '(' is a predicate.
        kind, value, _ = self.peek()
        if self.lang is not Lang.FO or self.peek(1)[1] != "(":
            return False
        return kind == "ident" and value[0].isupper()

    def primary(self) -> Formula:
        tok = self.take()
        kind, value, pos = tok
        if value == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        if kind == "bot":
            return Bot()
        if kind != "ident":
            self.error(f"unexpected {value or 'end of input'!r}", tok)
        if value == "T" and not (self.lang is Lang.FO and self.at("(")):
            return Top()
        if value[0].isupper():
            if self.lang is not Lang.FO:
                self.error(f"unknown operator or predicate {value!r}", tok)
            return self.pred(tok)
        if self.lang is Lang.FO:
            if self.at("="):
                self.take()
                right = self.var()
                return Eq(value, right)
            self.error(f"variable {value!r} must be used in a predicate or equality", tok)
        if value in ("forall", "exists"):
            self.error("quantifier outside first-order language", tok)
        if self.sig is not None and value not in self.sig.atoms:
            raise SignatureError(f"unknown atom {value!r} at position {pos}")
        return Atom(value)

    def pred(self, tok) -> Formula:
        name = tok[1]
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.var())
            while self.at(","):
                self.take()
                args.append(self.var())
        self.expect(")")
        if self.sig is not None:
            arity = self.sig.arity(name)
            if arity is None:
                raise SignatureError(f"unknown predicate {name!r} at position {tok[2]}")
            if arity != len(args):
                raise SignatureError(
                    f"predicate {name} expects {arity} arguments, got {len(args)} at position {tok[2]}"
                )
        return Pred(name, tuple(args))


def parse(text: str, sig: Signature | None = None, lang: Lang | str = Lang.TEL) -> Formula:
    """Parse ``text`` in language ``lang``.

    With a signature, unknown atoms/predicates and arity mismatches raise
    :class:`SignatureError`.  Temporal operators inside the scope of ``K``
    (or ``M``) raise :class:`LanguageError`.
    """
    lang = Lang(lang)
    p = _Parser(text, sig, lang)
    f = p.formula()
    tok = p.peek()
    if tok[0] != "eof":
        p.error(f"unexpected {tok[1]!r}", tok)
    check_epistemic_scope(f)
    return f


def check_epistemic_scope(f: Formula) -> None:
    """Reject temporal operators under ``K``/``M``."""
    for node in walk(f):
        if isinstance(node, (K, M)):
            for inner in walk(node.arg):
                if isinstance(inner, TEMPORAL):
                    raise LanguageError(
                        f"temporal operator inside the scope of an epistemic operator: {node}"
                    )


def parse_s5(text: str, sig: Signature | None = None) -> Formula:
    return parse(text, sig, Lang.S5)


def parse_tel(text: str, sig: Signature | None = None) -> Formula:
    return parse(text, sig, Lang.TEL)


def parse_fo(text: str, sig: Signature | None = None) -> Formula:
    return parse(text, sig, Lang.FO)
