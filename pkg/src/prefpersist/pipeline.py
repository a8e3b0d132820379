"""Query answering that tries cheap persistence-based reductions before full search.

Routes are tried in order:

1. ``conservative-reduction``: the conclusion is conservative, so preferential
   and classical entailment coincide; answer classically.
2. ``downward-persistent-add``: the added formula is downward persistent, so
   any conclusion of the premise without it survives.
3. ``upward-persistent-keep``: in a smooth logic an upward persistent
   conclusion of the premise without the added formula survives it (only
   reachable when route 1 is disabled).
4. ``local-split``: the conclusion follows from a caller-chosen part of the
   premise and the rest is downward persistent.
5. ``direct``: full preferential entailment.

Routes 2 to 4 only ever answer ``true``; on failure the next route runs.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import mtel
from .analysis import SyntacticClass, classify, temporal_depth
from .errors import LanguageError, SignatureError
from .fincirc import CircMode, resolve_fo_signature
from .logics import FinCircLogic, GroundS5Logic, LogicHandle, MtelLogic
from .parser import Lang, parse
from .persistence import true_beyond_ignorance
from .s5 import resolve_signature
from .syntax import And, Formula, Signature, conj, to_text


class Route(str, Enum):
    CONSERVATIVE_REDUCTION = "conservative-reduction"
    DOWNWARD_PERSISTENT_ADD = "downward-persistent-add"
    UPWARD_PERSISTENT_KEEP = "upward-persistent-keep"
    LOCAL_SPLIT = "local-split"
    DIRECT = "direct"


@dataclass(frozen=True)
class Query:
    logic: LogicHandle
    premises: tuple[Formula, ...]
    conclusion: Formula
    phi: Formula | None = None
    #: indices of ``premises`` to try alone (local split)
    split: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.premises:
            raise ValueError("a query needs at least one premise part")
        for f in self.formulas():
            self.logic.check(f)
        if self.split is not None and not all(0 <= i < len(self.premises) for i in self.split):
            raise ValueError(f"split indices {self.split} out of range")

    def formulas(self) -> list[Formula]:
        return list(self.premises) + ([self.phi] if self.phi is not None else []) + [self.conclusion]

    def base(self) -> Formula:
        return conj(list(self.premises))

    def full_premise(self) -> Formula:
        return And(self.base(), self.phi) if self.phi is not None else self.base()


@dataclass
class QueryReport:
    verdict: str
    route: Route
    logic: str
    premises: list[str]
    conclusion: str
    phi: str | None = None
    classifier: str | None = None
    certification: dict | None = None
    witnesses: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "verdict": self.verdict,
            "route": self.route.value,
            "logic": self.logic,
            "premises": self.premises,
            "phi": self.phi,
            "conclusion": self.conclusion,
            "classifier": self.classifier,
            "certification": self.certification,
            "witnesses": self.witnesses,
            "notes": self.notes,
        }
        if timings:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out

    def to_text(self, timings: bool = False) -> str:
        lines = [
            f"logic: {self.logic}",
            f"premise: {' ; '.join(self.premises)}",
        ]
        if self.phi is not None:
            lines.append(f"added: {self.phi}")
        lines += [f"conclusion: {self.conclusion}", f"route: {self.route.value}"]
        if self.classifier:
            lines.append(f"classifier: {self.classifier}")
        if self.certification:
            lines.append("certification: " + ", ".join(f"{k}={v}" for k, v in self.certification.items()))
        for w in self.witnesses:
            lines.append(f"witness: {w}")
        for n in self.notes:
            lines.append(f"note: {n}")
        if timings:
            lines.append("timings: " + ", ".join(f"{k}={v:.6f}s" for k, v in self.timings.items()))
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Options:
    disabled: frozenset[Route] = frozenset()


class _Clock:
    def __init__(self):
        self.times: dict[str, float] = {}

    def __call__(self, stage: str):
        clock = self

        class _Stage:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                clock.times[stage] = clock.times.get(stage, 0.0) + time.perf_counter() - self.t0

        return _Stage()


def _first_class(f: Formula, classes: Sequence[SyntacticClass]) -> SyntacticClass | None:
    for c in classes:
        try:
            if classify(f, c):
                return c
        except LanguageError:
            continue
    return None


def _all_in(parts: Iterable[Formula], classes: Sequence[SyntacticClass]) -> SyntacticClass | None:
    found = None
    for p in parts:
        c = _first_class(p, classes)
        if c is None:
            return None
        found = found or c
    return found


def _verdict(v: bool | None) -> str:
    return mtel.Verdict.of(v).value


def _conservative_gate(q: Query) -> tuple[SyntacticClass | str | None, list[str]]:
    """Why the conclusion may be treated as conservative, or None."""
    logic = q.logic
    if not logic.expressible:
        return None, []
    if isinstance(logic, MtelLogic):
        # upward persistence is not enough without smoothness; use the semantic test
        if not logic.covers(*q.formulas()):
            return None, [f"temporal depth exceeds the class depth {logic.depth}"]
        if bool(logic.sat(q.conclusion).all()):
            return "valid", []
        if true_beyond_ignorance(logic, q.conclusion):
            return "true-except-totally-ignorant", []
        return None, []
    if not logic.smooth:
        return None, []
    return _first_class(q.conclusion, logic.up_classes()), []


def _direct(q: Query, premise: Formula, clock: _Clock) -> tuple[str, dict | None, list[str]]:
    logic = q.logic
    if isinstance(logic, MtelLogic):
        with clock("direct"):
            hz = logic.hz or mtel.default_horizon(len(logic.atoms), premise, q.conclusion)
            mm = mtel.minimal_models_mtel(premise, hz, logic.sig, logic.max_atoms)
            v = mtel.verdict_on(mm, q.conclusion)
        cert = {
            "horizon": hz.h,
            "postpone_rounds": hz.postpone_rounds,
            "certified": len(mm.certified),
            "uncertified": len(mm.uncertified),
            "refuted_by_postponement": mm.refuted_by_postponement,
        }
        bad = [str(m) for m in mm.certified if not mtel.model_sat(m, q.conclusion)]
        return v.value, cert, bad[:3]
    with clock("direct"):
        sat_b = logic.sat(q.conclusion)
        mins = logic.minimal_vec(logic.sat(premise))
        bad_idx = np.flatnonzero(mins & ~sat_b)
    return _verdict(len(bad_idx) == 0), None, [logic.model_str(int(i)) for i in bad_idx[:3]]


def run_query(q: Query, options: Options = Options()) -> QueryReport:
    logic = q.logic
    clock = _Clock()
    report = QueryReport(
        verdict="unknown",
        route=Route.DIRECT,
        logic=logic.describe(),
        premises=[to_text(p) for p in q.premises],
        conclusion=to_text(q.conclusion),
        phi=to_text(q.phi) if q.phi is not None else None,
    )
    premise = q.full_premise()

    def done(verdict, route, classifier=None):
        report.verdict = verdict
        report.route = route
        report.classifier = None if classifier is None else str(classifier)
        report.timings = clock.times
        return report

    if Route.CONSERVATIVE_REDUCTION not in options.disabled:
        with clock("classify"):
            gate, notes = _conservative_gate(q)
        report.notes += notes
        if gate is not None:
            with clock("classical"):
                ok = logic.classical(premise, q.conclusion)
            if not ok:
                report.witnesses = _classical_witness(logic, premise, q.conclusion)
            return done(_verdict(ok), Route.CONSERVATIVE_REDUCTION, gate)

    if q.phi is not None and Route.DOWNWARD_PERSISTENT_ADD not in options.disabled:
        with clock("classify"):
            cls = _first_class(q.phi, logic.dp_classes())
        if cls is not None:
            with clock("reduced"):
                v = logic.entails(q.base(), q.conclusion)
            if v is True:
                return done("true", Route.DOWNWARD_PERSISTENT_ADD, cls)
            report.notes.append(f"added formula is in {cls} but the premise alone gives {_verdict(v)}")

    if q.phi is not None and logic.smooth and Route.UPWARD_PERSISTENT_KEEP not in options.disabled:
        with clock("classify"):
            cls = _first_class(q.conclusion, logic.up_classes())
        if cls is not None:
            with clock("reduced"):
                v = logic.entails(q.base(), q.conclusion)
            if v is True:
                return done("true", Route.UPWARD_PERSISTENT_KEEP, cls)

    if q.split is not None and Route.LOCAL_SPLIT not in options.disabled:
        part = [q.premises[i] for i in q.split]
        rest = [p for i, p in enumerate(q.premises) if i not in q.split]
        if q.phi is not None:
            rest.append(q.phi)
        with clock("classify"):
            cls = _all_in(rest, logic.dp_classes()) if rest else "empty-rest"
        if cls is not None and part:
            with clock("reduced"):
                v = logic.entails(conj(part), q.conclusion)
            if v is True:
                return done("true", Route.LOCAL_SPLIT, cls)
            report.notes.append(f"split part gives {_verdict(v)}")

    verdict, cert, witnesses = _direct(q, premise, clock)
    report.certification = cert
    report.witnesses = witnesses
    return done(verdict, Route.DIRECT)


def _classical_witness(logic: LogicHandle, alpha: Formula, beta: Formula) -> list[str]:
    bad = np.flatnonzero(logic.sat(alpha) & ~logic.sat(beta))
    return [logic.model_str(int(i)) for i in bad[:3]]


# ------------------------------------------------------------- construction


def make_logic(name: str, formulas: Sequence[Formula] = (), atoms: Sequence[str] | None = None,
               horizon: int | None = None, postpone: int = mtel.DEFAULT_POSTPONE_ROUNDS,
               max_size: int = 3, predicates: dict[str, int] | None = None) -> LogicHandle:
    """Build a handle from ``gs5``, ``mtel``, ``circ:dom`` or ``circ:pred:P``."""
    name = name.strip().lower()
    if name == "gs5":
        return GroundS5Logic(resolve_signature(list(atoms) if atoms else None, *formulas))
    if name == "mtel":
        sig = resolve_signature(list(atoms) if atoms else None, *formulas)
        hz = mtel.Horizon(horizon, postpone) if horizon is not None else None
        depth = max((temporal_depth(f) for f in formulas), default=0)
        return MtelLogic(sig, hz, depth=max(depth, 1))
    if name.startswith("circ"):
        mode = CircMode.parse(name.split(":", 1)[1] if ":" in name else "dom")
        if mode.kind.value == "pred":
            mode = CircMode.of_pred(mode.pred.upper() if mode.pred.islower() else mode.pred)
        sig = resolve_fo_signature(predicates, *formulas)
        if mode.pred is not None and sig.arity(mode.pred) is None:
            sig = Signature((), tuple(sorted(sig.predicates + ((mode.pred, 1),))))
        return FinCircLogic(sig, mode, max_size)
    raise ValueError(f"unknown logic {name!r}; expected gs5, mtel, circ:dom or circ:pred:P")


def lang_of(name: str) -> Lang:
    name = name.strip().lower()
    if name == "gs5":
        return Lang.S5
    if name == "mtel":
        return Lang.TEL
    if name.startswith("circ"):
        return Lang.FO
    raise ValueError(f"unknown logic {name!r}")


def build_query(logic_name: str, premises: Sequence[str], conclusion: str, phi: str | None = None,
                split: Sequence[int] | None = None, **kw) -> Query:
    lang = lang_of(logic_name)
    prem = [parse(p, lang=lang) for p in premises]
    concl = parse(conclusion, lang=lang)
    add = parse(phi, lang=lang) if phi else None
    forms = prem + [concl] + ([add] if add is not None else [])
    logic = make_logic(logic_name, forms, **kw)
    if isinstance(logic, GroundS5Logic) or isinstance(logic, MtelLogic):
        # re-parse against the signature so unknown atoms are reported
        for text in list(premises) + [conclusion] + ([phi] if phi else []):
            parse(text, logic.sig, lang)
    return Query(logic, tuple(prem), concl, add, tuple(split) if split is not None else None)


# ------------------------------------------------------------------- batches


def split_fields(line: str) -> list[str]:
    """Split a batch line on ``|``; ``_|_`` is kept intact."""
    guarded = line.replace("_|_", "\0")
    return [f.replace("\0", "_|_").strip() for f in guarded.split("|")]


def parse_batch_line(line: str) -> tuple[str, list[str], str | None, str]:
    """``logic | premise | [phi |] conclusion``; premise parts separated by ``;``.

    Inside a batch line write disjunction as ``\\/``.
    """
    fields = split_fields(line)
    if len(fields) not in (3, 4):
        raise ValueError(f"expected 3 or 4 '|'-separated fields, got {len(fields)}")
    logic, premise = fields[0], fields[1]
    phi = fields[2] if len(fields) == 4 and fields[2] else None
    parts = [p.strip() for p in premise.split(";") if p.strip()]
    return logic, parts, phi, fields[-1]


def read_batch(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append((lineno, line))
    return out


@dataclass
class BatchRow:
    line: int
    report: QueryReport | None
    error: str | None = None


def run_batch(text: str, atoms: Sequence[str] | None = None, horizon: int | None = None,
              postpone: int = mtel.DEFAULT_POSTPONE_ROUNDS, max_size: int = 3,
              options: Options = Options()) -> list[BatchRow]:
    rows = []
    for lineno, line in read_batch(text):
        try:
            logic, parts, phi, concl = parse_batch_line(line)
            q = build_query(logic, parts, concl, phi, atoms=atoms, horizon=horizon, postpone=postpone,
                            max_size=max_size)
            rows.append(BatchRow(lineno, run_query(q, options)))
        except (ValueError, LanguageError, SignatureError) as e:
            rows.append(BatchRow(lineno, None, str(e)))
    return rows


TSV_COLUMNS = ("line", "logic", "premise", "phi", "conclusion", "route", "classifier", "verdict", "error")


def rows_to_tsv(rows: Sequence[BatchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(TSV_COLUMNS)
    for r in rows:
        rep = r.report
        if rep is None:
            w.writerow([r.line, "", "", "", "", "", "", "", r.error])
        else:
            w.writerow([r.line, rep.logic, " ; ".join(rep.premises), rep.phi or "", rep.conclusion,
                        rep.route.value, rep.classifier or "", rep.verdict, ""])
    return buf.getvalue()


def rows_to_json(rows: Sequence[BatchRow], timings: bool = False) -> str:
    data = [
        {"line": r.line, **(r.report.to_dict(timings) if r.report else {}), **({"error": r.error} if r.error else {})}
        for r in rows
    ]
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def report_json(report: QueryReport, timings: bool = False) -> str:
    return json.dumps(report.to_dict(timings), indent=2, sort_keys=True) + "\n"
