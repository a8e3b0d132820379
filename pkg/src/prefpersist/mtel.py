"""Minimal temporal epistemic logic over conservative, eventually-constant models.

A conservative model is a sequence of S5 states in which the set of possible
worlds never grows.  Over a finite signature every such sequence changes only
finitely often, so a model is stored as its distinct states together with the
times at which each state starts; the last state lasts forever.

Exact minimality over all conservative models is not computed.  Candidates are
enumerated up to a horizon ``h`` and checked against every model whose changes
happen no later than ``h + postpone_rounds``; see :func:`minimal_models_mtel`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .analysis import is_subjective, temporal_depth
from .errors import BoundExceeded, LanguageError
from .s5 import (
    DEFAULT_MAX_ATOMS,
    check_bound,
    format_state,
    full_mask,
    holds,
    parse_state,
    popcount,
    prop_mask,
    resolve_signature,
    state_witness,
)
from .syntax import (
    And,
    Bot,
    Formula,
    Implies,
    K,
    M,
    Not,
    Or,
    Signature,
    TAlways,
    TFut,
    TGlob,
    THist,
    TPast,
    Top,
    conj,
    has_temporal,
    is_first_order,
    is_propositional,
    walk,
)

DEFAULT_POSTPONE_ROUNDS = 2
DEFAULT_MAX_MODELS = 400_000


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: bool | None) -> "Verdict":
        if value is None:
            return cls.UNKNOWN
        return cls.TRUE if value else cls.FALSE

    def __bool__(self):
        raise TypeError("a three-valued verdict has no truth value; compare with Verdict.TRUE")


@dataclass(frozen=True)
class Horizon:
    """Latest change point enumerated, and how far beyond it candidates are checked."""

    h: int
    postpone_rounds: int = DEFAULT_POSTPONE_ROUNDS

    def __post_init__(self):
        if self.h < 1:
            raise ValueError("horizon must be at least 1")
        if self.postpone_rounds < 0:
            raise ValueError("postpone_rounds must be nonnegative")

    @property
    def extended(self) -> int:
        # at least one step past h, otherwise changes at h are never checked
        return self.h + max(1, self.postpone_rounds)


def default_horizon(n_atoms: int, *formulas: Formula) -> Horizon:
    depth = max((temporal_depth(f) for f in formulas), default=0)
    return Horizon(max(1, depth + (1 << n_atoms) - 1), DEFAULT_POSTPONE_ROUNDS)


@dataclass(frozen=True)
class TelcModel:
    """Conservative temporal model: ``states[i]`` holds from ``starts[i]`` on."""

    atoms: tuple[str, ...]
    states: tuple[int, ...]
    starts: tuple[int, ...] = (0,)

    def __post_init__(self):
        if not self.states or len(self.states) != len(self.starts):
            raise ValueError("need one start time per state")
        if self.starts[0] != 0:
            raise ValueError("the first state must start at time 0")
        full = full_mask(len(self.atoms))
        for s in self.states:
            if s <= 0 or s > full:
                raise ValueError(f"invalid state {s}")
        for a, b in zip(self.states, self.states[1:]):
            if a & b != b or a == b:
                raise ValueError("states must strictly shrink (knowledge never decreases)")
        for a, b in zip(self.starts, self.starts[1:]):
            if b <= a:
                raise ValueError("start times must increase")

    @classmethod
    def from_sequence(cls, atoms: Sequence[str], states: Sequence[int]) -> "TelcModel":
        """Build from a finite prefix of states; the last one is repeated forever."""
        merged: list[int] = []
        starts: list[int] = []
        for t, s in enumerate(states):
            if not merged or merged[-1] != s:
                merged.append(s)
                starts.append(t)
        return cls(tuple(atoms), tuple(merged), tuple(starts))

    @classmethod
    def parse(cls, atoms: Sequence[str], text: str) -> "TelcModel":
        """Parse ``state@[t0,t1) ; ... ; state@[tk,inf)``."""
        states, starts = [], []
        for seg in text.split(";"):
            state, _, span = seg.strip().partition("@")
            lo = span.strip().lstrip("[").split(",")[0]
            states.append(parse_state(state.strip(), len(atoms)))
            starts.append(int(lo))
        return cls(tuple(atoms), tuple(states), tuple(starts))

    @property
    def last_change(self) -> int:
        return self.starts[-1]

    @property
    def n_changes(self) -> int:
        return len(self.states) - 1

    def state_at(self, t: int) -> int:
        i = 0
        while i + 1 < len(self.starts) and self.starts[i + 1] <= t:
            i += 1
        return self.states[i]

    def prefix(self, length: int) -> list[int]:
        return [self.state_at(t) for t in range(length)]

    def __str__(self):
        n = len(self.atoms)
        parts = []
        for i, (s, t0) in enumerate(zip(self.states, self.starts)):
            t1 = self.starts[i + 1] if i + 1 < len(self.starts) else "inf"
            parts.append(f"{format_state(s, n)}@[{t0},{t1})")
        return " ; ".join(parts)


def totally_ignorant(sig: Signature | Sequence[str]) -> TelcModel:
    atoms = sig.atoms if isinstance(sig, Signature) else tuple(sig)
    return TelcModel(tuple(atoms), (full_mask(len(atoms)),), (0,))


def is_totally_ignorant(m: TelcModel) -> bool:
    # States never grow, so F(K g) fails for every non-tautology iff the final state is full.
    return m.states[-1] == full_mask(len(m.atoms))


def telc_leq(m1: TelcModel, m2: TelcModel) -> bool:
    """Pointwise degree-of-knowledge order, decided on merged segment boundaries."""
    if m1.atoms != m2.atoms:
        raise ValueError("models over different signatures")
    for t in sorted(set(m1.starts) | set(m2.starts)):
        a, b = m1.state_at(t), m2.state_at(t)
        if a & b != b:
            return False
    return True


# ------------------------------------------------------------------ semantics


def _check_tel(f: Formula) -> None:
    if is_first_order(f):
        raise LanguageError(f"not a TEL formula: {f}")
    for node in walk(f):
        if isinstance(node, (K, M)) and has_temporal(node.arg):
            raise LanguageError(f"temporal operator under K: {node}")


def require_subjective_tel(*formulas: Formula) -> None:
    for f in formulas:
        _check_tel(f)
        if not is_subjective(f):
            raise LanguageError(f"MTEL is defined on subjective formulas; got {f}")


def _truth(f: Formula, S: np.ndarray, atoms: tuple[str, ...], memo: dict) -> np.ndarray:
    """Truth of ``f`` at every (model, time) cell of the state matrix ``S``.

    The last column stands for all later times; callers make ``S`` wide enough
    (last change + temporal depth + 1) for that to be exact.
    """
    key = f
    if key in memo:
        return memo[key]
    if not has_temporal(f):
        uniq, inv = np.unique(S, return_inverse=True)
        vals = np.array([holds(f, int(u), atoms) for u in uniq], dtype=bool)
        out = vals[inv].reshape(S.shape)
    elif isinstance(f, Not):
        out = ~_truth(f.arg, S, atoms, memo)
    elif isinstance(f, And):
        out = _truth(f.left, S, atoms, memo) & _truth(f.right, S, atoms, memo)
    elif isinstance(f, Or):
        out = _truth(f.left, S, atoms, memo) | _truth(f.right, S, atoms, memo)
    elif isinstance(f, Implies):
        out = ~_truth(f.left, S, atoms, memo) | _truth(f.right, S, atoms, memo)
    elif isinstance(f, TPast):
        out = _past(_truth(f.arg, S, atoms, memo))
    elif isinstance(f, TFut):
        out = _future(_truth(f.arg, S, atoms, memo))
    elif isinstance(f, THist):
        out = ~_past(~_truth(f.arg, S, atoms, memo))
    elif isinstance(f, TGlob):
        out = ~_future(~_truth(f.arg, S, atoms, memo))
    elif isinstance(f, TAlways):
        a = _truth(f.arg, S, atoms, memo)
        out = ~_past(~a) & a & ~_future(~a)
    else:
        raise LanguageError(f"not a TEL formula: {f}")
    memo[key] = out
    return out


def _past(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    if x.shape[1] > 1:
        out[:, 1:] = np.logical_or.accumulate(x, axis=1)[:, :-1]
    return out


def _future(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    rev = np.logical_or.accumulate(x[:, ::-1], axis=1)[:, ::-1]
    out[:, :-1] = rev[:, 1:]
    out[:, -1] = x[:, -1]
    return out


def _state_matrix(models: Sequence[TelcModel], width: int) -> np.ndarray:
    S = np.empty((len(models), width), dtype=np.int64)
    for i, m in enumerate(models):
        S[i] = m.prefix(width)
    return S


def tel_sat(model: TelcModel, t: int, f: Formula) -> bool:
    """Truth of subjective TEL ``f`` at time ``t`` of ``model``."""
    require_subjective_tel(f)
    width = model.last_change + temporal_depth(f) + 1
    row = _truth(f, _state_matrix([model], width), model.atoms, {})[0]
    return bool(row[min(t, width - 1)])


def model_sat(model: TelcModel, f: Formula) -> bool:
    return tel_sat(model, 0, f)


# ----------------------------------------------------------- model classes


def closure_states(f: Formula, atoms: tuple[str, ...]) -> list[int] | None:
    """States that can occur in a minimal model of ``f``, or None for "all".

    When every epistemic subformula has a propositional argument, replacing
    each state by the largest state knowing the same arguments keeps ``f``
    true, keeps the model conservative and is at most as knowledgeable; so
    minimal models only use intersections of the arguments' world sets.
    """
    args = []
    for node in walk(f):
        if isinstance(node, K):
            arg = node.arg
        elif isinstance(node, M):
            arg = Not(node.arg)
        else:
            continue
        if not is_propositional(arg):
            return None
        args.append(prop_mask(arg, atoms))
    family = {full_mask(len(atoms))}
    for a in set(args):
        family |= {s & a for s in family}
    family.discard(0)
    return sorted(family, reverse=True)


class TelcClass:
    """All conservative models over ``states`` whose changes happen at times 1..h."""

    def __init__(self, atoms: tuple[str, ...], h: int, states: Iterable[int] | None = None,
                 max_models: int = DEFAULT_MAX_MODELS):
        self.atoms = tuple(atoms)
        self.h = h
        if states is None:
            states = range(full_mask(len(atoms)), 0, -1)
        family = sorted(set(states), reverse=True)
        self.family = family
        chains = _chains(family)
        total = sum(_comb(h, len(c) - 1) for c in chains)
        if total > max_models:
            raise BoundExceeded(f"{total} models at horizon {h} exceed the bound of {max_models}")
        models = []
        for chain in chains:
            k = len(chain) - 1
            for times in itertools.combinations(range(1, h + 1), k):
                models.append(TelcModel(self.atoms, chain, (0,) + times))
        self.models = models
        self._states = np.zeros((len(models), h + 1), dtype=np.int64)
        for i, m in enumerate(models):
            self._states[i] = m.prefix(h + 1)
        self._leq: np.ndarray | None = None

    def __len__(self):
        return len(self.models)

    def state_matrix(self, width: int) -> np.ndarray:
        if width <= self.h + 1:
            return self._states[:, :width]
        extra = np.repeat(self._states[:, -1:], width - self.h - 1, axis=1)
        return np.concatenate([self._states, extra], axis=1)

    def truth(self, f: Formula, width: int | None = None) -> np.ndarray:
        width = width or self.h + temporal_depth(f) + 1
        return _truth(f, self.state_matrix(max(width, self.h + temporal_depth(f) + 1)), self.atoms, {})

    def sat(self, f: Formula) -> np.ndarray:
        """Truth at time 0 in every model."""
        return self.truth(f)[:, 0]

    def ignorance(self) -> np.ndarray:
        pc = np.vectorize(popcount, otypes=[np.int64])
        return pc(self._states).sum(axis=1)

    def leq_matrix(self) -> np.ndarray:
        """``leq[i, j]``: model i is at most as knowledgeable as model j."""
        if self._leq is None:
            S = self._states
            n = len(S)
            out = np.empty((n, n), dtype=bool)
            for lo in range(0, n, 256):
                blk = S[lo:lo + 256, None, :]
                out[lo:lo + 256] = np.all((blk & S[None, :, :]) == S[None, :, :], axis=2)
            self._leq = out
        return self._leq

    def minimal_indices(self, sat: np.ndarray) -> list[int]:
        """Indices of ``sat`` models with no strictly less knowledgeable ``sat`` model."""
        idx = np.flatnonzero(sat)
        if len(idx) == 0:
            return []
        score = self.ignorance()[idx]
        order = idx[np.lexsort((idx, -score))]
        S = self._states
        found: list[int] = []
        found_rows = np.empty((0, S.shape[1]), dtype=np.int64)
        for i in order:
            row = S[i]
            if len(found) and np.any(np.all((found_rows & row) == row, axis=1)):
                continue
            found.append(int(i))
            found_rows = np.vstack([found_rows, row])
        return sorted(found)


def _comb(n: int, k: int) -> int:
    from math import comb

    return comb(n, k) if 0 <= k <= n else 0


@lru_cache(maxsize=64)
def _chains_cached(family: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    below = {s: [t for t in family if t != s and s & t == t] for s in family}
    out: list[tuple[int, ...]] = []

    def extend(chain: tuple[int, ...]):
        out.append(chain)
        for t in below[chain[-1]]:
            extend(chain + (t,))

    for s in family:
        extend((s,))
    return tuple(out)


def _chains(family: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    return _chains_cached(tuple(family))


def enumerate_telc(sig: Signature | Sequence[str], h: int, states: Iterable[int] | None = None) -> list[TelcModel]:
    atoms = sig.atoms if isinstance(sig, Signature) else tuple(sig)
    return TelcClass(tuple(atoms), h, states).models


# ------------------------------------------------------------- minimality


@dataclass(frozen=True)
class MinimalModels:
    certified: tuple[TelcModel, ...]
    uncertified: tuple[TelcModel, ...]
    horizon: Horizon
    refuted_by_postponement: int = 0
    class_size: int = 0

    @property
    def is_certain(self) -> bool:
        return not self.uncertified


def postponements(m: TelcModel, rounds: int) -> list[TelcModel]:
    """Variants with the changes from index ``i`` on delayed by 1..rounds steps."""
    out = []
    for i in range(1, len(m.starts)):
        for r in range(1, rounds + 1):
            starts = m.starts[:i] + tuple(t + r for t in m.starts[i:])
            out.append(TelcModel(m.atoms, m.states, starts))
    return out


def _sat_models(f: Formula, models: Sequence[TelcModel]) -> np.ndarray:
    if not models:
        return np.zeros(0, dtype=bool)
    width = max(m.last_change for m in models) + temporal_depth(f) + 1
    atoms = models[0].atoms
    return _truth(f, _state_matrix(models, width), atoms, {})[:, 0]


@lru_cache(maxsize=512)
def _minimal_cached(f: Formula, atoms: tuple[str, ...], hz: Horizon, max_models: int) -> MinimalModels:
    family = closure_states(f, atoms)
    cls = TelcClass(atoms, hz.extended, family, max_models=max_models)
    sat = cls.sat(f)
    certified, uncertified = [], []
    refuted = 0
    for i in cls.minimal_indices(sat):
        m = cls.models[i]
        if m.last_change <= hz.h:
            certified.append(m)
            continue
        variants = postponements(m, max(1, hz.postpone_rounds))
        if np.any(_sat_models(f, variants)):
            refuted += 1
        else:
            uncertified.append(m)
    return MinimalModels(tuple(certified), tuple(uncertified), hz, refuted, len(cls))


def minimal_models_mtel(
    f: Formula,
    hz: Horizon | None = None,
    sig: Signature | Sequence[str] | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    max_models: int = DEFAULT_MAX_MODELS,
) -> MinimalModels:
    """Bounded search for minimal models of a subjective TEL formula.

    Every conservative model changing no later than ``hz.h + hz.postpone_rounds``
    is enumerated and the minimal models of ``f`` in that class are computed.
    Those with all changes at or before ``hz.h`` are *certified*: every model
    obtained by postponing their changes up to the extended horizon was
    checked.  Minimal ones changing later than ``hz.h`` are discarded if
    delaying their late changes further still satisfies ``f`` (they are then
    certainly not minimal); otherwise they are returned as *uncertified*.
    """
    sig = resolve_signature(sig, f)
    check_bound(sig, max_atoms)
    require_subjective_tel(f)
    hz = hz or default_horizon(sig.n_atoms, f)
    return _minimal_cached(f, sig.atoms, hz, max_models)


def entail_mtel(
    alpha: Formula,
    beta: Formula,
    hz: Horizon | None = None,
    sig: Signature | Sequence[str] | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    max_models: int = DEFAULT_MAX_MODELS,
) -> Verdict:
    sig = resolve_signature(sig, alpha, beta)
    check_bound(sig, max_atoms)
    require_subjective_tel(alpha, beta)
    hz = hz or default_horizon(sig.n_atoms, alpha, beta)
    mm = minimal_models_mtel(alpha, hz, sig, max_atoms, max_models)
    return verdict_on(mm, beta)


def verdict_on(mm: MinimalModels, beta: Formula) -> Verdict:
    if not all(_sat_models(beta, mm.certified)):
        return Verdict.FALSE
    if all(_sat_models(beta, mm.uncertified)):
        return Verdict.TRUE
    return Verdict.UNKNOWN


def sim_equiv(
    f: Formula,
    g: Formula,
    hz: Horizon | None = None,
    sig: Signature | Sequence[str] | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> bool:
    """Agreement of ``f`` and ``g`` on every enumerated model.

    ``False`` is a definite refutation; ``True`` only covers models changing
    no later than ``hz.h`` plus the formulas' temporal depth.
    """
    sig = resolve_signature(sig, f, g)
    check_bound(sig, max_atoms)
    require_subjective_tel(f, g)
    hz = hz or default_horizon(sig.n_atoms, f, g)
    cls = TelcClass(sig.atoms, hz.h + temporal_depth(And(f, g)))
    return bool(np.array_equal(cls.sat(f), cls.sat(g)))


def entail_classical_mtel(alpha: Formula, beta: Formula, cls: TelcClass) -> bool:
    """Monotonic consequence over the enumerated class."""
    return not bool(np.any(cls.sat(alpha) & ~cls.sat(beta)))


# ----------------------------------------------------------- expressibility


def at_time(i: int) -> Formula:
    """True exactly at time ``i``: ``P^i T & H^(i+1) _|_``."""
    past: Formula = Top()
    for _ in range(i):
        past = TPast(past)
    hist: Formula = Bot()
    for _ in range(i + 1):
        hist = THist(hist)
    return And(past, hist)


def expressibility_witness_mtel(m: TelcModel) -> Formula:
    """A formula satisfied by exactly the models ``n`` with ``telc_leq(m, n)``."""
    parts = []
    for i in range(m.last_change + 1):
        w = state_witness(m.state_at(i), m.atoms)
        if isinstance(w, Top):
            continue
        parts.append(TAlways(Implies(at_time(i), w)))
    return conj(parts)


__all__ = [
    "Horizon",
    "MinimalModels",
    "TelcClass",
    "TelcModel",
    "Verdict",
    "closure_states",
    "default_horizon",
    "entail_classical_mtel",
    "entail_mtel",
    "enumerate_telc",
    "expressibility_witness_mtel",
    "is_totally_ignorant",
    "minimal_models_mtel",
    "model_sat",
    "postponements",
    "sim_equiv",
    "tel_sat",
    "telc_leq",
    "totally_ignorant",
    "verdict_on",
]
