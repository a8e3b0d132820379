"""Normal S5 semantics and Ground S5 preferential entailment.

Worlds are propositional valuations over the signature's atoms, indexed so
that world ``j`` printed as a bit string (first atom first) is ``format(j,
'0nb')``.  An S5 model is a nonempty set of worlds, stored as an int bitmask
over world indices.  Models are enumerated in increasing mask order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .analysis import is_subjective
from .errors import BoundExceeded, LanguageError
from .syntax import (
    TEMPORAL,
    And,
    Atom,
    Bot,
    Formula,
    Implies,
    K,
    M,
    Not,
    Or,
    Signature,
    Top,
    atoms_of,
    conj,
    is_first_order,
    walk,
)

DEFAULT_MAX_ATOMS = 4


def n_worlds(n_atoms: int) -> int:
    return 1 << n_atoms


def full_mask(n_atoms: int) -> int:
    return (1 << n_worlds(n_atoms)) - 1


def world_string(world: int, n_atoms: int) -> str:
    return format(world, f"0{n_atoms}b") if n_atoms else ""


def world_from_string(bits: str) -> int:
    return int(bits, 2) if bits else 0


def atom_true(world: int, i: int, n_atoms: int) -> bool:
    return bool((world >> (n_atoms - 1 - i)) & 1)


@lru_cache(maxsize=None)
def atom_mask(i: int, n_atoms: int) -> int:
    """Worlds in which atom ``i`` is true."""
    out = 0
    for w in range(n_worlds(n_atoms)):
        if atom_true(w, i, n_atoms):
            out |= 1 << w
    return out


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_worlds(mask: int) -> list[int]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def format_state(mask: int, n_atoms: int) -> str:
    """Sorted comma-separated valuation bit strings, e.g. ``10,11``."""
    return ",".join(world_string(w, n_atoms) for w in mask_worlds(mask))


def parse_state(text: str, n_atoms: int) -> int:
    mask = 0
    for bits in text.split(","):
        bits = bits.strip()
        if len(bits) != n_atoms or set(bits) - {"0", "1"}:
            raise ValueError(f"bad valuation {bits!r} for {n_atoms} atoms")
        mask |= 1 << world_from_string(bits)
    if mask == 0:
        raise ValueError("an S5 model needs at least one world")
    return mask


@dataclass(frozen=True)
class S5Model:
    """A normal S5 model: a nonempty set of valuations over ``atoms``."""

    atoms: tuple[str, ...]
    mask: int

    def __post_init__(self):
        if self.mask <= 0 or self.mask > full_mask(len(self.atoms)):
            raise ValueError(f"invalid world set {self.mask} for {len(self.atoms)} atoms")

    @classmethod
    def from_worlds(cls, atoms: Sequence[str], worlds: Iterable[int | str]) -> "S5Model":
        mask = 0
        for w in worlds:
            mask |= 1 << (world_from_string(w) if isinstance(w, str) else w)
        return cls(tuple(atoms), mask)

    @classmethod
    def full(cls, atoms: Sequence[str]) -> "S5Model":
        return cls(tuple(atoms), full_mask(len(atoms)))

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def worlds(self) -> list[int]:
        return mask_worlds(self.mask)

    def __len__(self):
        return popcount(self.mask)

    def __str__(self):
        return format_state(self.mask, self.n_atoms)


def resolve_signature(sig: Signature | Sequence[str] | None, *formulas: Formula) -> Signature:
    """Explicit signature, or the sorted atoms occurring in ``formulas``."""
    if sig is None:
        names: set[str] = set()
        for f in formulas:
            names.update(atoms_of(f))
        return Signature(tuple(sorted(names)))
    if isinstance(sig, Signature):
        return sig
    return Signature.of(sig)


def check_bound(sig: Signature, max_atoms: int) -> None:
    if sig.n_atoms > max_atoms:
        raise BoundExceeded(f"{sig.n_atoms} atoms exceed the enumeration bound of {max_atoms}")


def _check_s5(f: Formula) -> None:
    if is_first_order(f) or any(isinstance(n, TEMPORAL) for n in walk(f)):
        raise LanguageError(f"not an S5 formula: {f}")


def _require_subjective(*formulas: Formula) -> None:
    for f in formulas:
        _check_s5(f)
        if not is_subjective(f):
            raise LanguageError(f"Ground S5 is defined on subjective formulas; got {f}")


@lru_cache(maxsize=65536)
def prop_mask(f: Formula, atoms: tuple[str, ...]) -> int:
    """Worlds (over all valuations) satisfying the propositional formula ``f``."""
    n = len(atoms)
    full = full_mask(n)
    if isinstance(f, Atom):
        try:
            return atom_mask(atoms.index(f.name), n)
        except ValueError:
            raise LanguageError(f"atom {f.name!r} not in signature {atoms}") from None
    if isinstance(f, Top):
        return full
    if isinstance(f, Bot):
        return 0
    if isinstance(f, Not):
        return full & ~prop_mask(f.arg, atoms)
    if isinstance(f, And):
        return prop_mask(f.left, atoms) & prop_mask(f.right, atoms)
    if isinstance(f, Or):
        return prop_mask(f.left, atoms) | prop_mask(f.right, atoms)
    if isinstance(f, Implies):
        return (full & ~prop_mask(f.left, atoms)) | prop_mask(f.right, atoms)
    raise LanguageError(f"not propositional: {f}")


@lru_cache(maxsize=None)
def _modal_free(f: Formula) -> bool:
    return not any(isinstance(n, (K, M)) for n in walk(f))


def extension(f: Formula, model: int, atoms: tuple[str, ...]) -> int:
    """Worlds of ``model`` (a mask) at which ``f`` holds."""
    if _modal_free(f):
        return prop_mask(f, atoms) & model
    if isinstance(f, Not):
        return model & ~extension(f.arg, model, atoms)
    if isinstance(f, And):
        return extension(f.left, model, atoms) & extension(f.right, model, atoms)
    if isinstance(f, Or):
        return extension(f.left, model, atoms) | extension(f.right, model, atoms)
    if isinstance(f, Implies):
        return (model & ~extension(f.left, model, atoms)) | extension(f.right, model, atoms)
    if isinstance(f, K):
        return model if extension(f.arg, model, atoms) == model else 0
    if isinstance(f, M):
        return model if extension(f.arg, model, atoms) else 0
    raise LanguageError(f"not an S5 formula: {f}")


def holds(f: Formula, model: int, atoms: tuple[str, ...]) -> bool:
    """Model-level truth of a subjective formula (true at some/all worlds)."""
    return extension(f, model, atoms) != 0


def s5_sat(model: S5Model, world: int | str, f: Formula) -> bool:
    """Truth of ``f`` at ``world`` of ``model``."""
    _check_s5(f)
    w = world_from_string(world) if isinstance(world, str) else world
    if not (model.mask >> w) & 1:
        raise ValueError(f"world {world_string(w, model.n_atoms)} is not in model {model}")
    return bool((extension(f, model.mask, model.atoms) >> w) & 1)


def model_sat(model: S5Model, f: Formula) -> bool:
    """Truth of a subjective formula in ``model``."""
    _require_subjective(f)
    return holds(f, model.mask, model.atoms)


def dok_leq(m1: S5Model, m2: S5Model) -> bool:
    """Degree-of-knowledge order: ``m1`` is at most as knowledgeable as ``m2``."""
    if m1.atoms != m2.atoms:
        raise ValueError("models over different signatures")
    return m1.mask & m2.mask == m2.mask


def all_masks(n_atoms: int) -> range:
    return range(1, full_mask(n_atoms) + 1)


def all_models(sig: Signature) -> list[S5Model]:
    return [S5Model(sig.atoms, m) for m in all_masks(sig.n_atoms)]


@lru_cache(maxsize=4096)
def sat_vector(f: Formula, atoms: tuple[str, ...]) -> np.ndarray:
    """Truth of subjective ``f`` in every model, indexed by ``mask - 1``."""
    out = np.fromiter(
        (holds(f, m, atoms) for m in all_masks(len(atoms))), dtype=bool, count=full_mask(len(atoms))
    )
    out.setflags(write=False)
    return out


def minimal_masks(sat_masks: Iterable[int]) -> list[int]:
    """Masks with no proper superset among ``sat_masks``, in increasing order."""
    ordered = sorted(set(sat_masks), key=lambda m: (-popcount(m), m))
    minimal: list[int] = []
    for m in ordered:
        if not any(s & m == m for s in minimal):
            minimal.append(m)
    return sorted(minimal)


def _sat_masks(f: Formula, sig: Signature) -> list[int]:
    vec = sat_vector(f, sig.atoms)
    return [int(i) + 1 for i in np.flatnonzero(vec)]


def minimal_models_gs5(
    f: Formula, sig: Signature | Sequence[str] | None = None, max_atoms: int = DEFAULT_MAX_ATOMS
) -> list[S5Model]:
    """All Ground S5 minimal models of ``f``: models of ``f`` with no model of
    ``f`` containing strictly more worlds."""
    sig = resolve_signature(sig, f)
    check_bound(sig, max_atoms)
    _require_subjective(f)
    return [S5Model(sig.atoms, m) for m in minimal_masks(_sat_masks(f, sig))]


def entail_gs5(
    alpha: Formula,
    beta: Formula,
    sig: Signature | Sequence[str] | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> bool:
    sig = resolve_signature(sig, alpha, beta)
    check_bound(sig, max_atoms)
    _require_subjective(alpha, beta)
    return all(holds(beta, m, sig.atoms) for m in minimal_masks(_sat_masks(alpha, sig)))


def entail_classical_s5(
    alpha: Formula,
    beta: Formula,
    sig: Signature | Sequence[str] | None = None,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> bool:
    sig = resolve_signature(sig, alpha, beta)
    check_bound(sig, max_atoms)
    _require_subjective(alpha, beta)
    a = sat_vector(alpha, sig.atoms)
    b = sat_vector(beta, sig.atoms)
    return not bool(np.any(a & ~b))


def is_honest(f: Formula, sig: Signature | Sequence[str] | None = None, max_atoms: int = DEFAULT_MAX_ATOMS) -> bool:
    return len(minimal_models_gs5(f, sig, max_atoms)) == 1


def world_description(world: int, atoms: Sequence[str]) -> Formula:
    """Conjunction of literals true exactly at ``world``."""
    n = len(atoms)
    lits = [Atom(a) if atom_true(world, i, n) else Not(Atom(a)) for i, a in enumerate(atoms)]
    return conj(lits)


def expressibility_witness_gs5(m: S5Model) -> Formula:
    """A formula true in exactly the models whose worlds are a subset of ``m``'s."""
    missing = [w for w in range(n_worlds(m.n_atoms)) if not (m.mask >> w) & 1]
    return conj([K(Not(world_description(w, m.atoms))) for w in missing])


def state_witness(mask: int, atoms: Sequence[str]) -> Formula:
    return expressibility_witness_gs5(S5Model(tuple(atoms), mask))


def is_smooth_gs5(
    sample: Iterable[Formula], sig: Signature | Sequence[str] | None = None, max_atoms: int = DEFAULT_MAX_ATOMS
) -> bool:
    """Every model of every sampled formula lies above one of its minimal models."""
    sample = list(sample)
    sig = resolve_signature(sig, *sample)
    check_bound(sig, max_atoms)
    for f in sample:
        _require_subjective(f)
        sat = _sat_masks(f, sig)
        minimal = minimal_masks(sat)
        for m in sat:
            if not any(n & m == m for n in minimal):
                return False
    return True
