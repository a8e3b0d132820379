"""Preferential entailment, persistence oracles and persistence-based query routing
for Ground S5, minimal temporal epistemic logic and finite circumscription."""

from .parser import Lang, parse, parse_fo, parse_s5, parse_tel
from .syntax import Formula, Signature, normalize, to_text

__version__ = "0.1.0"

__all__ = ["Formula", "Lang", "Signature", "normalize", "parse", "parse_fo", "parse_s5", "parse_tel", "to_text"]
