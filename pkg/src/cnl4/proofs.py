"""The binary-consequence calculi CNL42 and CNLL42 and their proof checker.

A proof file has one line per step::

    1. p & q |- p ; ax a1
    2. ~~p |- ~~(p & q) ; r4 from 1

Premise indices are 1-based and must point to earlier lines.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .formula import (And, Formula, MalformedSequent, Neg, Or, Pattern, Sequent,
                      match_sequent, parse_pattern, parse_sequent, render_sequent)
from .matrix import LogicMatrix, preset_matrix


class SystemId(enum.Enum):
    CNL42 = "cnl"
    CNLL42 = "cnll"

    @classmethod
    def parse(cls, text: str) -> "SystemId":
        key = text.strip().lower()
        for sys in cls:
            if key in (sys.value, sys.name.lower()):
                return sys
        raise ValueError(f"unknown system {text!r}; expected cnl or cnll")

    @property
    def preset(self) -> str:
        return "4q" if self is SystemId.CNL42 else "4lq"

    def matrix(self) -> LogicMatrix:
        return preset_matrix(self.preset)


_COMMON = [
    ("a1", "A & B", "A"),
    ("a2", "A & B", "B"),
    ("a3", "B", "A | B"),
    ("a4", "A", "A | B"),
    ("a5", "A", "~~~~A"),
    ("a6", "~~~~A", "A"),
    ("a7", "~A & ~B", "~(A & B)"),
    ("a8", "~(A | B)", "~A | ~B"),
    ("a9", "A & ~~A", "B"),
    ("a10", "A & (B | C)", "A & B | A & C"),
]
_CNL_EXTRA = [
    ("b1", "~(A & B)", "~A & ~B"),
    ("b2", "~A | ~B", "~(A | B)"),
]
_CNLL_EXTRA = [
    ("c1", "~A & ~B", "~(A | B)"),
    ("c2", "~(A & B)", "~A | ~B"),
    ("c3", "~A & ~~A", "~(A & B)"),
    ("c4", "A & ~A", "~(A | B)"),
    ("c5", "~(A | B)", "~A | B"),
    ("c6", "~(A | B)", "~(B | A)"),
    ("c7", "~(A & B)", "~(B & A)"),
    ("c8", "~(A | B) & ~(A & B)", "~A & ~B"),
]

SCHEMATA: dict[str, tuple[Pattern, Pattern]] = {
    sid: (parse_pattern(lhs), parse_pattern(rhs))
    for sid, lhs, rhs in _COMMON + _CNL_EXTRA + _CNLL_EXTRA
}

_SYSTEM_IDS = {
    SystemId.CNL42: [s for s, _, _ in _COMMON + _CNL_EXTRA],
    SystemId.CNLL42: [s for s, _, _ in _COMMON + _CNLL_EXTRA],
}

RULES = ("r1", "r2", "r3", "r4")
RULE_ARITY = {"r1": 2, "r2": 2, "r3": 2, "r4": 1}


def schemata_of(sys: SystemId) -> list[tuple[str, tuple[Pattern, Pattern]]]:
    return [(sid, SCHEMATA[sid]) for sid in _SYSTEM_IDS[sys]]


def apply_rule(rule: str, premises: Sequence[Sequent]) -> Sequent | None:
    """Conclusion of ``rule`` on ``premises``, or ``None`` if the shapes clash."""
    if len(premises) != RULE_ARITY[rule]:
        return None
    if rule == "r4":
        (p,) = premises
        return Sequent(Neg(Neg(p.rhs)), Neg(Neg(p.lhs)))
    p, q = premises
    if rule == "r1":
        return Sequent(p.lhs, q.rhs) if p.rhs == q.lhs else None
    if rule == "r2":
        return Sequent(p.lhs, And(p.rhs, q.rhs)) if p.lhs == q.lhs else None
    if rule == "r3":
        return Sequent(Or(p.lhs, q.lhs), p.rhs) if p.rhs == q.rhs else None
    raise KeyError(rule)


# -- proof objects -----------------------------------------------------------

@dataclass(frozen=True)
class Axiom:
    schema: str
    subst: Mapping[str, Formula] | None = None

    def __str__(self) -> str:
        return f"ax {self.schema}"


@dataclass(frozen=True)
class RuleApp:
    rule: str
    premises: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.rule} from " + ", ".join(str(i) for i in self.premises)


Justification = Axiom | RuleApp


@dataclass(frozen=True)
class ProofLine:
    sequent: Sequent
    justification: Justification


Proof = tuple[ProofLine, ...]


class MalformedProof(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class LineError(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"line {index}: {reason}")
        self.index = index
        self.reason = reason


_LINE = re.compile(r"^\s*(\d+)\s*\.\s*(.*?)\s*;\s*(.*?)\s*$")
_AX = re.compile(r"^ax\s+(\S+)$")
_RULE = re.compile(r"^(r[1-4])\s+from\s+(\d+)(?:\s*,\s*(\d+))?$")


def parse_proof(text: str) -> Proof:
    lines = []
    expected = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        m = _LINE.match(raw)
        if m is None:
            raise MalformedProof(lineno, "expected '<index>. <sequent> ; <justification>'")
        index, seq_text, just_text = int(m.group(1)), m.group(2), m.group(3)
        if index != expected:
            raise MalformedProof(lineno, f"index {index} out of order, expected {expected}")
        try:
            seq = parse_sequent(seq_text)
        except MalformedSequent as exc:
            raise MalformedProof(lineno, str(exc)) from exc
        if (ax := _AX.match(just_text)) is not None:
            if ax.group(1) not in SCHEMATA:
                raise MalformedProof(lineno, f"unknown schema id {ax.group(1)!r}")
            just: Justification = Axiom(ax.group(1))
        elif (rule := _RULE.match(just_text)) is not None:
            prem = tuple(int(g) for g in rule.groups()[1:] if g is not None)
            just = RuleApp(rule.group(1), prem)
        else:
            raise MalformedProof(lineno, f"bad justification {just_text!r}")
        lines.append(ProofLine(seq, just))
        expected += 1
    if not lines:
        raise MalformedProof(0, "empty proof")
    return tuple(lines)


def render_proof(proof: Proof) -> str:
    return "".join(f"{i}. {render_sequent(line.sequent)} ; {line.justification}\n"
                   for i, line in enumerate(proof, start=1))


def check_proof(proof: Proof, sys: SystemId) -> None:
    """Raise ``LineError`` at the first line not justified in ``sys``."""
    if not proof:
        raise LineError(0, "empty proof")
    allowed = set(_SYSTEM_IDS[sys])
    for index, line in enumerate(proof, start=1):
        just = line.justification
        if isinstance(just, Axiom):
            if just.schema not in allowed:
                raise LineError(index, f"schema {just.schema} is not an axiom of {sys.name}")
            lhs, rhs = SCHEMATA[just.schema]
            sigma = match_sequent(line.sequent, lhs, rhs)
            if sigma is None:
                raise LineError(index, f"schema mismatch: not an instance of {just.schema}")
            if just.subst is not None and dict(just.subst) != sigma:
                raise LineError(index, "annotated substitution differs from the inferred one")
            continue
        if just.rule not in RULE_ARITY:
            raise LineError(index, f"unknown rule {just.rule}")
        if len(just.premises) != RULE_ARITY[just.rule]:
            raise LineError(index, f"arity: {just.rule} takes {RULE_ARITY[just.rule]} "
                                   f"premise(s), got {len(just.premises)}")
        for p in just.premises:
            if p >= index:
                raise LineError(index, f"forward reference to line {p}")
            if p < 1:
                raise LineError(index, f"no line {p}")
        premises = [proof[p - 1].sequent for p in just.premises]
        concl = apply_rule(just.rule, premises)
        if concl is None:
            reason = {"r1": "middle-formula mismatch", "r2": "antecedent mismatch",
                      "r3": "consequent mismatch"}[just.rule]
            raise LineError(index, f"rule-shape mismatch: {just.rule} {reason}")
        if concl != line.sequent:
            raise LineError(index, f"rule-shape mismatch: {just.rule} yields "
                                   f"{render_sequent(concl)}")


def proof_is_valid(proof: Proof, sys: SystemId) -> bool:
    try:
        check_proof(proof, sys)
    except LineError:
        return False
    return True
