"""Command-line workbench.

Exit codes: 0 when the query was answered (including "invalid" and "not
found"), 1 on user error (unparsable input, invalid matrix or proof file),
2 when a resource limit was hit. Payloads go to stdout, diagnostics to
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .checks import rule_preservation, schema_soundness
from .embedding import render_classical, verify_embedding
from .formula import (MalformedFormula, MalformedSequent, UniverseTooLarge,
                      parse_formula, parse_sequent, render_sequent)
from .matrix import (MatrixError, TooManyVariables, decide_consequence, dump_matrix,
                     load_matrix, preset_matrix, truth_table, validate_matrix)
from .proofs import (LineError, MalformedProof, SystemId, check_proof, parse_proof,
                     render_proof)
from .search import NotFound, Proved, SearchConfig, find_proof


class UserError(Exception):
    pass


def _dumps(payload) -> str:
    return json.dumps(payload, ensure_ascii=False)


def _valuation_text(v) -> str:
    return ", ".join(f"{k}={x}" for k, x in v.items())


def render_report(kind: str, report: dict, fmt: str = "text") -> str:
    """Serialise a command result; JSON keys keep insertion order."""
    if fmt == "json":
        return _dumps(report)
    if kind == "validity":
        if report["valid"]:
            return "valid"
        return f"invalid; countermodel: {_valuation_text(report['countermodel'])}"
    if kind == "truth-table":
        return "\n".join(f"{_valuation_text(row['valuation'])} -> {row['value']}"
                         for row in report["rows"])
    if kind == "prove":
        status = report["status"]
        if status == "proved":
            return "\n".join(report["proof"])
        if status == "refuted":
            return f"refuted; countermodel: {_valuation_text(report['countermodel'])}"
        suffix = " (budget exhausted)" if report.get("budget_exhausted") else ""
        return f"not found{suffix}"
    if kind == "check-proof":
        if report["valid"]:
            return f"ok: {report['lines']} lines"
        return f"rejected at line {report['line']}: {report['reason']}"
    if kind == "verify-axioms":
        lines = [f"{'system':<8}{'schema':<8}{'own':<9}{'other':<9}"]
        for sysname, rows in report["systems"].items():
            for sid, row in rows.items():
                lines.append(f"{sysname:<8}{sid:<8}"
                             f"{'valid' if row['own'] else 'INVALID':<9}"
                             f"{'valid' if row['other'] else 'invalid':<9}")
        lines.append("")
        lines.append(f"{'matrix':<8}{'rule':<8}{'applied':>9}{'failures':>10}")
        for mname, rules in report["rules"].items():
            for rule, row in rules.items():
                lines.append(f"{mname:<8}{rule:<8}{row['applications']:>9}{row['failures']:>10}")
        return "\n".join(line.rstrip() for line in lines)
    if kind == "verify-embedding":
        lines = [f"mode: {report['mode']}", f"pairs checked: {report['pairs_checked']}",
                 f"discrepancies: {report['discrepancy_count']}"]
        for d in report["discrepancies"]:
            lines.append(f"  {d['a']}  vs  {d['b']}: {d['verdicts']}")
        return "\n".join(lines)
    raise KeyError(kind)


def _parse_seq(text: str):
    try:
        return parse_sequent(text)
    except MalformedSequent as exc:
        raise UserError(f"cannot parse sequent: {exc}") from exc


def _matrix_arg(args):
    if args.matrix:
        try:
            return load_matrix(args.matrix)
        except (OSError, json.JSONDecodeError) as exc:
            raise UserError(f"cannot read matrix file: {exc}") from exc
        except MatrixError as exc:
            raise UserError("invalid matrix: " + "; ".join(exc.errors)) from exc
    return preset_matrix(args.logic)


def cmd_validity(args) -> dict:
    s = _parse_seq(args.sequent)
    verdict = decide_consequence(s, _matrix_arg(args))
    out = {"valid": verdict.valid}
    if not verdict.valid:
        out["countermodel"] = {k: str(v) for k, v in verdict.countermodel.items()}
    return out


def cmd_truth_table(args) -> dict:
    try:
        f = parse_formula(args.formula)
    except MalformedFormula as exc:
        raise UserError(f"cannot parse formula: {exc}") from exc
    rows = truth_table(f, _matrix_arg(args))
    return {"rows": [{"valuation": {k: str(x) for k, x in v.items()}, "value": str(val)}
                     for v, val in rows]}


def _read_hints(path) -> tuple:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UserError(f"cannot read hints file: {exc}") from exc
    return tuple(_parse_seq(line) for line in text.splitlines()
                 if line.strip() and not line.lstrip().startswith("#"))


def cmd_prove(args) -> dict:
    s = _parse_seq(args.sequent)
    system = SystemId.parse(args.system)
    try:
        cfg = SearchConfig(neg_degree=args.neg_degree, combine=not args.no_combine,
                           max_sequents=args.budget,
                           hints=_read_hints(args.hints) if args.hints else ())
    except ValueError as exc:
        raise UserError(str(exc)) from exc
    result = find_proof(s, system, cfg)
    if isinstance(result, Proved):
        return {"status": "proved", "proof": render_proof(result.proof).splitlines()}
    if isinstance(result, NotFound):
        return {"status": "not_found", "budget_exhausted": result.budget_exhausted}
    return {"status": "refuted",
            "countermodel": {k: str(v) for k, v in result.countermodel.items()}}


def cmd_check_proof(args) -> dict:
    system = SystemId.parse(args.system)
    try:
        with open(args.file, encoding="utf-8") as fh:
            proof = parse_proof(fh.read())
    except OSError as exc:
        raise UserError(f"cannot read proof file: {exc}") from exc
    except MalformedProof as exc:
        raise UserError(f"malformed proof: {exc}") from exc
    try:
        check_proof(proof, system)
    except LineError as exc:
        return {"valid": False, "line": exc.index, "reason": exc.reason}
    return {"valid": True, "lines": len(proof), "proves": render_sequent(proof[-1].sequent)}


def cmd_verify_axioms(args) -> dict:
    rules = {}
    for name in ("4q", "4lq"):
        stats = rule_preservation(preset_matrix(name), args.rule_samples, args.seed)
        rules[name] = {r: {"applications": row["applications"], "failures": len(row["failures"])}
                       for r, row in stats.items()}
    return {"systems": schema_soundness(), "rules": rules}


def cmd_verify_embedding(args) -> dict:
    if args.samples is not None and args.seed is None:
        raise UserError("--samples requires --seed")
    try:
        report = verify_embedding(args.vars, args.depth, args.samples, args.seed)
    except ValueError as exc:
        raise UserError(str(exc)) from exc
    return {
        "mode": report.mode,
        "pairs_checked": report.pairs_checked,
        "discrepancy_count": report.discrepancy_count,
        "discrepancies": [{"a": render_classical(a), "b": render_classical(b),
                           "verdicts": list(v)} for a, b, v in report.discrepancies],
    }


def cmd_matrix(args) -> str | dict:
    if args.matrix_cmd == "show":
        return dump_matrix(preset_matrix(args.preset), args.form)
    try:
        with open(args.file, encoding="utf-8") as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UserError(f"cannot read matrix file: {exc}") from exc
    errors = validate_matrix(spec) if isinstance(spec, dict) else ["not a JSON object"]
    if errors:
        raise UserError("invalid matrix:\n" + "\n".join(f"  {e}" for e in errors))
    return "ok"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cnl4", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_logic(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--logic", choices=["4q", "4lq"])
        g.add_argument("--matrix", metavar="FILE")

    p = sub.add_parser("validity", help="decide a sequent in a matrix")
    add_logic(p)
    p.add_argument("--sequent", required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("truth-table", help="tabulate a formula")
    add_logic(p)
    p.add_argument("--formula", required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("prove", help="search for a proof")
    p.add_argument("--system", required=True, choices=["cnl", "cnll"])
    p.add_argument("--sequent", required=True)
    p.add_argument("--neg-degree", type=int, default=SearchConfig.neg_degree)
    p.add_argument("--budget", type=int, default=SearchConfig.max_sequents)
    p.add_argument("--no-combine", action="store_true")
    p.add_argument("--hints", metavar="FILE")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("check-proof", help="check a proof file")
    p.add_argument("--system", required=True, choices=["cnl", "cnll"])
    p.add_argument("--file", required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify-axioms", help="schema soundness and rule preservation")
    p.add_argument("--rule-samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify-embedding", help="check the classical embedding")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("matrix", help="matrix files")
    msub = p.add_subparsers(dest="matrix_cmd", required=True)
    mv = msub.add_parser("validate")
    mv.add_argument("file")
    ms = msub.add_parser("show")
    ms.add_argument("--preset", required=True, choices=["4q", "4lq"])
    ms.add_argument("--form", choices=["order", "tables"], default="order")
    return parser


COMMANDS = {
    "validity": cmd_validity,
    "truth-table": cmd_truth_table,
    "prove": cmd_prove,
    "check-proof": cmd_check_proof,
    "verify-axioms": cmd_verify_axioms,
    "verify-embedding": cmd_verify_embedding,
    "matrix": cmd_matrix,
}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        result = COMMANDS[args.command](args)
    except UserError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except (TooManyVariables, UniverseTooLarge) as exc:
        print(f"resource limit: {exc}", file=stderr)
        return 2
    if isinstance(result, str):
        print(result, file=stdout)
    else:
        fmt = "json" if getattr(args, "json", False) else "text"
        print(render_report(args.command, result, fmt), file=stdout)
    return 0


def main() -> None:
    sys.exit(run())
