"""Command-line interface.

Exit status: 0 when a verdict was produced (including ``false``), 1 on usage
or input errors, 2 when an enumeration bound was exceeded or a verdict is
``unknown`` and ``--allow-unknown`` was not given.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from . import fincirc as fc
from . import mtel
from . import s5
from .analysis import SyntacticClass, classify, odd_negation_heuristic, temporal_depth
from .corpus import fo_corpus, subjective_corpus, tel_corpus
from .defaults import (
    default_horizon,
    default_to_mtel,
    parse_default_theory,
    reiter_extensions,
    sceptical_consequence,
    sceptically_follows,
)
from .errors import BoundExceeded, FormulaSyntaxError, LanguageError, PrefPersistError, SignatureError
from .logics import FinCircLogic, GroundS5Logic, LogicHandle, MtelLogic
from .parser import Lang, parse
from .persistence import (
    conservativity_violation,
    expressibility_failures,
    monotonicity_violation,
    persistence_oracle,
)
from .pipeline import (
    Options,
    Route,
    build_query,
    lang_of,
    make_logic,
    report_json,
    rows_to_json,
    rows_to_tsv,
    run_batch,
    run_query,
)
from .syntax import Formula, Signature, atoms_of, to_text


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ------------------------------------------------------------------ helpers


def _atoms(args) -> list[str] | None:
    if not getattr(args, "atoms", None):
        return None
    return [a.strip() for a in args.atoms.split(",") if a.strip()]


def _predicates(args) -> dict[str, int] | None:
    text = getattr(args, "predicates", None)
    if not text:
        return None
    out = {}
    for item in text.split(","):
        name, _, arity = item.strip().partition("/")
        if not arity.isdigit():
            raise UsageError(f"predicates are written Name/arity, got {item!r}")
        out[name] = int(arity)
    return out


def _logic(args, formulas: Sequence[Formula]) -> LogicHandle:
    return make_logic(args.logic, formulas, atoms=_atoms(args), horizon=args.horizon, postpone=args.postpone,
                      max_size=args.max_size, predicates=_predicates(args))


def _parse_for(args, texts: Sequence[str]) -> list[Formula]:
    lang = lang_of(args.logic)
    atoms = _atoms(args)
    sig = Signature.of(atoms) if atoms and lang is not Lang.FO else None
    return [parse(t, sig, lang) for t in texts]


def _emit(args, text: str, data: dict | list) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _verdict_exit(args, verdict: str) -> int:
    return 2 if verdict == "unknown" and not args.allow_unknown else 0


def _hz(args, *formulas, n_atoms: int) -> mtel.Horizon:
    if args.horizon is not None:
        return mtel.Horizon(args.horizon, args.postpone)
    base = mtel.default_horizon(n_atoms, *formulas)
    return mtel.Horizon(base.h, args.postpone)


# ----------------------------------------------------------------- commands


def cmd_entail(args) -> int:
    alpha, beta = _parse_for(args, [args.alpha, args.beta])
    logic = _logic(args, [alpha, beta])
    if args.classical:
        verdict = "true" if logic.classical(alpha, beta) else "false"
        data = {"logic": logic.describe(), "mode": "classical", "verdict": verdict}
    elif isinstance(logic, MtelLogic):
        hz = _hz(args, alpha, beta, n_atoms=len(logic.atoms))
        mm = mtel.minimal_models_mtel(alpha, hz, logic.sig)
        verdict = mtel.verdict_on(mm, beta).value
        data = {"logic": logic.describe(), "verdict": verdict, "horizon": hz.h, "postpone_rounds": hz.postpone_rounds,
                "certified": len(mm.certified), "uncertified": len(mm.uncertified)}
    else:
        verdict = "true" if logic.entails(alpha, beta) else "false"
        data = {"logic": logic.describe(), "verdict": verdict}
    _emit(args, verdict, data)
    return _verdict_exit(args, verdict)


def cmd_classify(args) -> int:
    cls = SyntacticClass.parse(args.cls)
    lang = Lang(args.lang) if args.lang else (
        Lang.FO if cls.kind.value in ("negative", "positive", "universal", "existential")
        else Lang.TEL if cls.kind.value in ("td", "tb", "subjective-tel") else Lang.S5)
    f = parse(args.formula, lang=lang)
    result = classify(f, cls)
    data = {"formula": to_text(f), "class": str(cls), "member": result}
    if lang is Lang.S5:
        data["odd_negation"] = odd_negation_heuristic(f)
    if lang is not Lang.FO:
        data["temporal_depth"] = temporal_depth(f)
    _emit(args, "true" if result else "false", data)
    return 0


def _corpus(args, logic: LogicHandle) -> list[Formula]:
    if isinstance(logic, GroundS5Logic):
        return subjective_corpus(logic.atoms, args.corpus, args.seed, max_size=8)
    if isinstance(logic, MtelLogic):
        return tel_corpus(logic.atoms, args.corpus, args.seed, max_size=7, max_depth=1)
    return fo_corpus(logic.sig, args.corpus, args.seed, max_size=7)


def _persist_one(logic: LogicHandle, f: Formula, corpus: list[Formula]) -> dict:
    v = persistence_oracle(logic, f)
    row = {
        "formula": to_text(f),
        "downward": v.downward,
        "upward": v.upward,
        "down_witness": None if v.down_witness is None else [logic.model_str(i) for i in v.down_witness],
        "up_witness": None if v.up_witness is None else [logic.model_str(i) for i in v.up_witness],
    }
    if corpus:
        mv = monotonicity_violation(logic, f, corpus, corpus)
        cv = conservativity_violation(logic, f, corpus, corpus)
        row["respects_monotonicity"] = mv is None
        row["monotonicity_violation"] = None if mv is None else [to_text(x) for x in mv]
        row["conservative"] = cv is None
        row["conservativity_violation"] = None if cv is None else [to_text(x) for x in cv]
    return row


def cmd_persist(args) -> int:
    texts = list(args.formula)
    if args.batch:
        texts += [t.strip() for t in Path(args.batch).read_text().splitlines() if t.strip() and not t.startswith("#")]
    if not texts:
        raise UsageError("give a formula or --batch FILE")
    formulas = _parse_for(args, texts)
    logic = _logic(args, formulas)
    corpus = _corpus(args, logic) if args.corpus else []
    rows = [_persist_one(logic, f, corpus) for f in formulas]
    if args.format == "tsv":
        cols = ["formula", "downward", "upward"] + (["respects_monotonicity", "conservative"] if corpus else [])
        lines = ["\t".join(cols)] + ["\t".join(str(r[c]).lower() if isinstance(r[c], bool) else str(r[c])
                                               for c in cols) for r in rows]
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        out = []
        for r in rows:
            out.append(f"formula: {r['formula']}")
            out.append(f"downward: {str(r['downward']).lower()}" +
                       (f"  witness: m={r['down_witness'][0]} n={r['down_witness'][1]}" if r["down_witness"] else ""))
            out.append(f"upward: {str(r['upward']).lower()}" +
                       (f"  witness: m={r['up_witness'][0]} n={r['up_witness'][1]}" if r["up_witness"] else ""))
            if corpus:
                out.append(f"respects monotonicity (corpus of {len(corpus)}): {str(r['respects_monotonicity']).lower()}")
                out.append(f"conservative (corpus of {len(corpus)}): {str(r['conservative']).lower()}")
        _emit(args, "\n".join(out), {"logic": logic.describe(), "results": rows})
    if args.figure:
        from .plotting import persistence_figure, persistence_summary_figure

        if len(formulas) == 1:
            persistence_figure(logic, formulas[0], args.figure)
        else:
            persistence_summary_figure([(r["formula"], r["downward"], r["upward"]) for r in rows], args.figure)
    return 0


def cmd_honest(args) -> int:
    f = parse(args.formula, Signature.of(_atoms(args)) if _atoms(args) else None, Lang.S5)
    mins = s5.minimal_models_gs5(f, _atoms(args))
    honest = len(mins) == 1
    _emit(args, "true" if honest else "false",
          {"formula": to_text(f), "honest": honest, "minimal_models": [str(m) for m in mins]})
    return 0


def cmd_minimal(args) -> int:
    (f,) = _parse_for(args, [args.formula])
    logic = _logic(args, [f])
    if isinstance(logic, MtelLogic):
        hz = _hz(args, f, n_atoms=len(logic.atoms))
        mm = mtel.minimal_models_mtel(f, hz, logic.sig)
        data = {"certified": [str(m) for m in mm.certified], "uncertified": [str(m) for m in mm.uncertified],
                "refuted_by_postponement": mm.refuted_by_postponement, "horizon": hz.h,
                "postpone_rounds": hz.postpone_rounds}
        text = "\n".join([f"certified: {m}" for m in data["certified"]] +
                         [f"uncertified: {m}" for m in data["uncertified"]] +
                         [f"refuted by postponement: {mm.refuted_by_postponement}"])
        _emit(args, text, data)
        return 0 if mm.is_certain or args.allow_unknown else 2
    if isinstance(logic, FinCircLogic) and args.dedup:
        models = [str(s) for s in fc.minimal_structures(f, logic.mode, logic.max_size, logic.sig, dedup=True)]
    else:
        import numpy as np

        models = [logic.model_str(int(i)) for i in np.flatnonzero(logic.minimal_vec(logic.sat(f)))]
    _emit(args, "\n".join(models) if models else "(none)", {"minimal_models": models})
    return 0


def cmd_witness(args) -> int:
    logic = _logic(args, [])
    if args.model:
        if isinstance(logic, GroundS5Logic):
            w = s5.state_witness(s5.parse_state(args.model, len(logic.atoms)), logic.atoms)
        elif isinstance(logic, MtelLogic):
            w = mtel.expressibility_witness_mtel(mtel.TelcModel.parse(logic.atoms, args.model))
        else:
            w = fc.expressibility_witness_fo(fc.parse_structure(args.model, logic.sig), logic.mode, logic.sig)
        _emit(args, to_text(w), {"model": args.model, "witness": to_text(w)})
        return 0
    fails = expressibility_failures(logic, limit=5)
    ok = not fails
    data = {"logic": logic.describe(), "models": logic.size, "expressible": ok,
            "failures": [[logic.model_str(i), logic.model_str(j)] for i, j in fails]}
    _emit(args, f"{'true' if ok else 'false'} ({logic.size} models checked)", data)
    return 0


def cmd_default(args) -> int:
    theory = parse_default_theory(Path(args.theory).read_text())
    psi = default_to_mtel(theory)
    if not args.query:
        _emit(args, to_text(psi), {"translation": to_text(psi)})
        return 0
    phi = parse(args.query, lang=Lang.S5)
    atoms = _atoms(args) or sorted(set(theory.atoms()) | set(atoms_of(phi)))
    hz = mtel.Horizon(args.horizon, args.postpone) if args.horizon is not None else default_horizon(theory, phi)
    verdict = sceptical_consequence(theory, phi, hz, atoms).value
    exts = reiter_extensions(theory, atoms)
    reiter = sceptically_follows(exts, phi, atoms)
    data = {"translation": to_text(psi), "query": to_text(phi), "verdict": verdict, "horizon": hz.h,
            "extensions": [s5.format_state(e, len(atoms)) if e else "inconsistent" for e in exts],
            "reiter": reiter}
    text = "\n".join([f"translation: {data['translation']}", f"horizon: {hz.h}",
                      *[f"extension: {e}" for e in data["extensions"]],
                      f"reiter: {str(reiter).lower()}", f"verdict: {verdict}"])
    _emit(args, text, data)
    return _verdict_exit(args, verdict)


def cmd_circ(args) -> int:
    mode = fc.CircMode.parse(args.mode)
    alpha = parse(args.alpha, lang=Lang.FO)
    beta = parse(args.beta, lang=Lang.FO)
    sig = _predicates(args)
    result = fc.entail_fincirc(alpha, beta, mode, args.max_size, sig, dedup=args.dedup)
    data = {"mode": str(mode), "max_size": args.max_size, "verdict": "true" if result else "false"}
    if args.minimal:
        data["minimal_models"] = [str(s) for s in fc.minimal_structures(alpha, mode, args.max_size, sig, dedup=True)]
        if not data["minimal_models"]:
            data["note"] = "unsatisfiable at this bound"
    text = data["verdict"]
    if args.minimal:
        text += "".join(f"\nminimal: {m}" for m in data["minimal_models"]) + (f"\nnote: {data['note']}" if "note" in data else "")
    _emit(args, text, data)
    return 0


def cmd_pipeline(args) -> int:
    options = Options(frozenset(Route(r) for r in args.disable))
    if args.batch:
        rows = run_batch(Path(args.batch).read_text(), atoms=_atoms(args), horizon=args.horizon,
                         postpone=args.postpone, max_size=args.max_size, options=options)
        if args.format == "json":
            sys.stdout.write(rows_to_json(rows, args.timings))
        elif args.format == "tsv":
            sys.stdout.write(rows_to_tsv(rows))
        else:
            for r in rows:
                sys.stdout.write(f"# line {r.line}\n")
                sys.stdout.write(r.report.to_text(args.timings) if r.report else f"error: {r.error}\n")
        if args.figure:
            from .plotting import route_figure

            route_figure(rows, args.figure)
        if any(r.report is None for r in rows):
            return 1
        if any(r.report.verdict == "unknown" for r in rows) and not args.allow_unknown:
            return 2
        return 0
    if not args.premise or not args.conclusion or not args.logic:
        raise UsageError("pipeline needs --logic, --premise and --conclusion, or --batch FILE")
    split = [int(x) for x in args.split.split(",")] if args.split else None
    q = build_query(args.logic, args.premise, args.conclusion, args.phi, split, atoms=_atoms(args),
                    horizon=args.horizon, postpone=args.postpone, max_size=args.max_size,
                    predicates=_predicates(args))
    report = run_query(q, options)
    if args.format == "json":
        sys.stdout.write(report_json(report, args.timings))
    elif args.format == "tsv":
        from .pipeline import BatchRow

        sys.stdout.write(rows_to_tsv([BatchRow(1, report)]))
    else:
        sys.stdout.write(report.to_text(args.timings))
    if args.figure:
        from .pipeline import BatchRow
        from .plotting import route_figure

        route_figure([BatchRow(1, report)], args.figure)
    return _verdict_exit(args, report.verdict)


def cmd_selftest(args) -> int:
    from .regression import run_all

    results = run_all()
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}" for name, ok in results]
    _emit(args, "\n".join(lines), [{"case": n, "pass": ok} for n, ok in results])
    return 0 if all(ok for _, ok in results) else 1


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--atoms", help="comma-separated atoms (default: those occurring, sorted)")
    common.add_argument("--predicates", help="first-order signature, e.g. P/1,R/2")
    common.add_argument("--horizon", type=int, help="MTEL horizon (latest change point)")
    common.add_argument("--postpone", type=int, default=mtel.DEFAULT_POSTPONE_ROUNDS, help="MTEL postponement rounds")
    common.add_argument("--max-size", type=int, default=3, help="largest domain for circumscription")
    common.add_argument("--format", choices=("text", "json", "tsv"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for generated corpora")
    common.add_argument("--allow-unknown", action="store_true", help="exit 0 on unknown verdicts")

    p = _Parser(prog="prefpersist", description="Preferential entailment and persistence toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def logic_arg(sp, required=True):
        sp.add_argument("--logic", required=required, help="gs5, mtel, circ:dom or circ:pred:P")

    sp = sub.add_parser("entail", parents=[common], help="preferential (or classical) entailment")
    logic_arg(sp)
    sp.add_argument("alpha")
    sp.add_argument("beta")
    sp.add_argument("--classical", action="store_true")
    sp.set_defaults(func=cmd_entail)

    sp = sub.add_parser("classify", parents=[common], help="syntactic class membership")
    sp.add_argument("--class", dest="cls", required=True)
    sp.add_argument("--lang", choices=[lang.value for lang in Lang])
    sp.add_argument("formula")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("persist", parents=[common], help="persistence oracles")
    logic_arg(sp)
    sp.add_argument("formula", nargs="*")
    sp.add_argument("--batch", help="file with one formula per line")
    sp.add_argument("--corpus", type=int, default=0, help="also run corpus oracles over N generated formulas")
    sp.add_argument("--figure", help="write a figure to this path")
    sp.set_defaults(func=cmd_persist)

    sp = sub.add_parser("honest", parents=[common], help="Ground S5 honesty")
    sp.add_argument("formula")
    sp.set_defaults(func=cmd_honest)

    sp = sub.add_parser("minimal-models", parents=[common], help="list minimal models")
    logic_arg(sp)
    sp.add_argument("formula")
    sp.add_argument("--dedup", action="store_true", help="one structure per isomorphism class (circ)")
    sp.set_defaults(func=cmd_minimal)

    sp = sub.add_parser("witness", parents=[common], help="expressibility witnesses")
    logic_arg(sp)
    sp.add_argument("--model", help="print the witness for this model instead of checking all")
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("default", parents=[common], help="default theories")
    sp.add_argument("theory", help="file with 'fact:' and 'default:' lines")
    sp.add_argument("--query", help="propositional formula to test for sceptical consequence")
    sp.set_defaults(func=cmd_default)

    sp = sub.add_parser("circ", parents=[common], help="finite circumscription entailment")
    sp.add_argument("--mode", required=True, help="dom or pred:P")
    sp.add_argument("alpha")
    sp.add_argument("beta")
    sp.add_argument("--minimal", action="store_true", help="also list minimal structures")
    sp.add_argument("--dedup", action="store_true")
    sp.set_defaults(func=cmd_circ)

    sp = sub.add_parser("pipeline", parents=[common], help="routed query answering")
    logic_arg(sp, required=False)
    sp.add_argument("--premise", action="append", default=[], help="premise part (repeatable)")
    sp.add_argument("--phi", help="formula added to the premise")
    sp.add_argument("--conclusion")
    sp.add_argument("--split", help="comma-separated premise indices for a local split")
    sp.add_argument("--batch", help="file of 'logic | premise | [phi |] conclusion' lines")
    sp.add_argument("--disable", action="append", default=[], choices=[r.value for r in Route])
    sp.add_argument("--timings", action="store_true", help="include stage timings (not byte-stable)")
    sp.add_argument("--figure", help="write a route summary figure to this path")
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("selftest", parents=[common], help="run the worked-example regression suite")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BoundExceeded as e:
        print(f"bound exceeded: {e}", file=sys.stderr)
        return 2
    except (FormulaSyntaxError, SignatureError, LanguageError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except PrefPersistError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
