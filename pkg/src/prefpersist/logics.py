"""Uniform handles over the enumerated model classes of each preferential logic.

A handle fixes a finite class of models, a satisfaction vector per formula and
the preference matrix ``leq[i, j]`` (model ``i`` is preferred to model ``j``).
The oracles in :mod:`prefpersist.persistence` work only through this interface.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from functools import cached_property
from typing import Sequence

import numpy as np

from . import fincirc as fc
from . import mtel
from . import s5
from .analysis import (
    BOX,
    DIAM,
    EXISTENTIAL,
    TB,
    TD,
    UNIVERSAL,
    NegativeIn,
    PositiveIn,
    SyntacticClass,
    is_subjective,
    temporal_depth,
)
from .errors import BoundExceeded, LanguageError
from .syntax import Formula, Signature, has_temporal, is_first_order


class LogicHandle(ABC):
    name: str
    smooth: bool
    #: every model has a formula true exactly above it (proved for all logics here, checked in tests)
    expressible: bool = True
    #: preferential entailment is decided exactly by minimality in the enumerated class
    exact_minimality: bool = True

    @property
    @abstractmethod
    def size(self) -> int: ...

    @abstractmethod
    def sat(self, f: Formula) -> np.ndarray: ...

    @property
    @abstractmethod
    def leq(self) -> np.ndarray: ...

    @abstractmethod
    def model_str(self, i: int) -> str: ...

    @abstractmethod
    def witness(self, i: int) -> Formula:
        """Formula satisfied by exactly the models above model ``i``."""

    @abstractmethod
    def check(self, f: Formula) -> None:
        """Raise :class:`LanguageError` unless ``f`` is in the logic's language."""

    def above(self, i: int) -> np.ndarray:
        """Models the witness of ``i`` must pick out."""
        return self.leq[i]

    @cached_property
    def strict(self) -> np.ndarray:
        out = self.leq & ~self.leq.T
        out.setflags(write=False)
        return out

    def minimal_vec(self, sat: np.ndarray) -> np.ndarray:
        return sat & ~(sat[:, None] & self.strict).any(axis=0)

    def entails(self, alpha: Formula, beta: Formula) -> bool | None:
        """Preferential entailment; ``None`` when the engine cannot certify."""
        return not bool(np.any(self.minimal_vec(self.sat(alpha)) & ~self.sat(beta)))

    def classical(self, alpha: Formula, beta: Formula) -> bool:
        return not bool(np.any(self.sat(alpha) & ~self.sat(beta)))

    def dp_classes(self) -> list[SyntacticClass]:
        return []

    def up_classes(self) -> list[SyntacticClass]:
        return []

    def describe(self) -> str:
        return self.name


class GroundS5Logic(LogicHandle):
    """Ground S5 over every nonempty world set; model ``i`` is mask ``i + 1``."""

    smooth = True

    def __init__(self, atoms: Sequence[str] | Signature, max_atoms: int = s5.DEFAULT_MAX_ATOMS):
        sig = atoms if isinstance(atoms, Signature) else Signature.of(atoms)
        s5.check_bound(sig, max_atoms)
        self.sig = sig
        self.atoms = sig.atoms
        self.name = "gs5"
        self.max_atoms = max_atoms

    @property
    def size(self) -> int:
        return s5.full_mask(len(self.atoms))

    def check(self, f: Formula) -> None:
        if is_first_order(f) or has_temporal(f) or not is_subjective(f):
            raise LanguageError(f"Ground S5 takes subjective S5 formulas; got {f}")

    def sat(self, f: Formula) -> np.ndarray:
        self.check(f)
        return s5.sat_vector(f, self.atoms)

    @cached_property
    def leq(self) -> np.ndarray:
        masks = np.arange(1, self.size + 1, dtype=np.int64)
        out = (masks[:, None] & masks[None, :]) == masks[None, :]
        out.setflags(write=False)
        return out

    def model_str(self, i: int) -> str:
        return s5.format_state(i + 1, len(self.atoms))

    def witness(self, i: int) -> Formula:
        return s5.state_witness(i + 1, self.atoms)

    def entails(self, alpha, beta):
        return s5.entail_gs5(alpha, beta, self.sig, self.max_atoms)

    def dp_classes(self):
        return [DIAM]

    def up_classes(self):
        return [BOX]

    def describe(self):
        return f"gs5 atoms={','.join(self.atoms)}"


class MtelLogic(LogicHandle):
    """MTEL over the conservative models changing no later than a class horizon.

    The class horizon is ``hz.h`` or, if larger, ``(2^|P| - 1) * (depth + 1)``:
    a formula of temporal depth at most ``depth`` cannot tell a constant stretch
    longer than ``depth + 1`` from a shorter one, so every model agrees at time
    0 with an enumerated one.  Satisfaction, order and witnesses are exact on
    the class; preferential entailment goes through the certified engine,
    which may answer ``None``.
    """

    smooth = False
    exact_minimality = False

    def __init__(self, atoms: Sequence[str] | Signature, hz: mtel.Horizon | int | None = None,
                 depth: int = 2, max_atoms: int = s5.DEFAULT_MAX_ATOMS):
        sig = atoms if isinstance(atoms, Signature) else Signature.of(atoms)
        s5.check_bound(sig, max_atoms)
        self.sig = sig
        self.atoms = sig.atoms
        self.hz = mtel.Horizon(hz) if isinstance(hz, int) else hz
        self.depth = depth
        self.max_atoms = max_atoms
        self.name = "mtel"
        changes = (1 << len(self.atoms)) - 1
        self.class_h = max(1, self.hz.h if self.hz is not None else 0, changes * (depth + 1))

    @cached_property
    def telc(self) -> mtel.TelcClass:
        return mtel.TelcClass(self.atoms, self.class_h)

    @property
    def size(self) -> int:
        return len(self.telc)

    def check(self, f: Formula) -> None:
        mtel.require_subjective_tel(f)

    def covers(self, *formulas: Formula) -> bool:
        """Truth on the class decides truth on all models for these formulas."""
        return all(temporal_depth(f) <= self.depth for f in formulas)

    def sat(self, f: Formula) -> np.ndarray:
        self.check(f)
        return self.telc.sat(f)

    @cached_property
    def leq(self) -> np.ndarray:
        out = self.telc.leq_matrix()
        out.setflags(write=False)
        return out

    def model_str(self, i: int) -> str:
        return str(self.telc.models[i])

    def witness(self, i: int) -> Formula:
        return mtel.expressibility_witness_mtel(self.telc.models[i])

    def entails(self, alpha, beta):
        v = mtel.entail_mtel(alpha, beta, self.hz, self.sig, self.max_atoms)
        return None if v is mtel.Verdict.UNKNOWN else v is mtel.Verdict.TRUE

    def ti_index(self) -> int:
        for i, m in enumerate(self.telc.models):
            if mtel.is_totally_ignorant(m):
                return i
        raise AssertionError("the totally ignorant model is always enumerated")

    def dp_classes(self):
        return [TD]

    def up_classes(self):
        return [TB]

    def describe(self):
        h = "default" if self.hz is None else f"{self.hz.h}+{self.hz.postpone_rounds}"
        return f"mtel atoms={','.join(self.atoms)} horizon={h}"


class FinCircLogic(LogicHandle):
    """Finite predicate or domain circumscription over labeled structures."""

    smooth = True

    def __init__(self, sig: Signature, mode: fc.CircMode, max_size: int = 3, bound: int = fc.DEFAULT_MAX_SIZE):
        if max_size > bound:
            raise BoundExceeded(f"domain size {max_size} exceeds the bound of {bound}")
        if mode.kind is fc.Mode.PRED and sig.arity(mode.pred) is None:
            raise LanguageError(f"predicate {mode.pred} is not in the signature")
        self.sig = sig
        self.mode = mode
        self.max_size = max_size
        self.cls = fc.fo_class(sig, max_size)
        self.name = "circ"

    @property
    def size(self) -> int:
        return len(self.cls)

    def check(self, f: Formula) -> None:
        fc.check_sentence(f, self.sig)

    def sat(self, f: Formula) -> np.ndarray:
        return self.cls.sat(f)

    @property
    def leq(self) -> np.ndarray:
        return self.cls.leq_matrix(self.mode)

    def model_str(self, i: int) -> str:
        return str(self.cls.structures[i])

    def witness(self, i: int) -> Formula:
        return fc.expressibility_witness_fo(self.cls.structures[i], self.mode, self.sig)

    def above(self, i: int) -> np.ndarray:
        # labeled structures: the witness is isomorphism invariant
        m = self.cls.structures[i]
        return np.array([fc.embeds_below(m, n, self.mode) for n in self.cls.structures], dtype=bool)

    def dp_classes(self):
        return [NegativeIn(self.mode.pred)] if self.mode.kind is fc.Mode.PRED else [UNIVERSAL]

    def up_classes(self):
        return [PositiveIn(self.mode.pred)] if self.mode.kind is fc.Mode.PRED else [EXISTENTIAL]

    def describe(self):
        preds = ",".join(f"{n}/{a}" for n, a in self.sig.predicates)
        return f"circ {self.mode} signature={preds} max_size={self.max_size}"


def FinPredCirc(sig: Signature, pred: str, max_size: int = 3) -> FinCircLogic:
    return FinCircLogic(sig, fc.CircMode.of_pred(pred), max_size)


def FinDomCirc(sig: Signature, max_size: int = 3) -> FinCircLogic:
    return FinCircLogic(sig, fc.CircMode.dom(), max_size)
