"""Object-language syntax: formulas, sequents, schema patterns and matching.

Grammar (ASCII only)::

    sequent  := formula '|-' formula
    formula  := conj ('|' conj)*          left-associative
    conj     := unary ('&' unary)*        left-associative
    unary    := '~' unary | atom
    atom     := VAR | '(' formula ')'
    VAR      := [a-z][a-z0-9_]*

Schema patterns use the same grammar with metavariables ``A``, ``B``, ``C``
as leaves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


class MalformedFormula(ValueError):
    def __init__(self, position: int, message: str):
        super().__init__(f"at position {position}: {message}")
        self.position = position
        self.message = message


class MalformedSequent(ValueError):
    pass


class UnboundMetavariable(KeyError):
    pass


class UniverseTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Meta:
    """Schema metavariable leaf (A, B, C)."""

    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Union[Var, Neg, And, Or]
Pattern = Union[Meta, Var, Neg, And, Or]
Substitution = Mapping[str, Formula]


@dataclass(frozen=True)
class Sequent:
    lhs: Formula
    rhs: Formula

    def __str__(self) -> str:
        return render_sequent(self)


def negs(f: Formula, n: int) -> Formula:
    """Wrap ``f`` in ``n`` negations."""
    for _ in range(n):
        f = Neg(f)
    return f


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\|-)|([~&|()!])|([a-zA-Z][a-zA-Z0-9_]*))")
_VAR = re.compile(r"[a-z][a-z0-9_]*\Z")
_META = re.compile(r"[A-C]\Z")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise MalformedFormula(pos, f"unexpected character {text[pos]!r}")
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, *, metas: bool, neg_token: str = "~",
                 builders=None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.metas = metas
        self.neg_token = neg_token
        self.mk = builders or (Var, Neg, And, Or)

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise MalformedFormula(0, "empty formula")
        f = self.disj()
        if self.peek() is not None:
            raise MalformedFormula(self.pos(), f"unexpected token {self.peek()!r}")
        return f

    def disj(self):
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = self.mk[3](f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = self.mk[2](f, self.unary())
        return f

    def unary(self):
        if self.peek() == self.neg_token:
            self.take()
            return self.mk[1](self.unary())
        return self.atom()

    def atom(self):
        tok, pos = self.peek(), self.pos()
        if tok is None:
            raise MalformedFormula(pos, "unexpected end of input")
        if tok == "(":
            self.take()
            f = self.disj()
            if self.peek() != ")":
                raise MalformedFormula(self.pos(), "expected ')'")
            self.take()
            return f
        if _VAR.match(tok):
            self.take()
            return self.mk[0](tok)
        if self.metas and _META.match(tok):
            self.take()
            return Meta(tok)
        raise MalformedFormula(pos, f"unexpected token {tok!r}")


def parse_formula(text: str) -> Formula:
    return _Parser(text, metas=False).parse()


def parse_pattern(text: str) -> Pattern:
    return _Parser(text, metas=True).parse()


def parse_sequent(text: str) -> Sequent:
    parts = text.split("|-")
    if len(parts) != 2:
        raise MalformedSequent(
            f"expected exactly one '|-' in {text!r}, found {len(parts) - 1}")
    sides = []
    for label, part in zip(("antecedent", "consequent"), parts):
        try:
            sides.append(parse_formula(part))
        except MalformedFormula as exc:
            raise MalformedSequent(f"{label}: {exc}") from exc
    return Sequent(*sides)


# -- rendering ---------------------------------------------------------------

_ASCII = {"neg": "~", "and": " & ", "or": " | ", "turnstile": " |- "}
_UNICODE = {"neg": "∼", "and": " ∧ ", "or": " ∨ ", "turnstile": " ⊢ "}


def _prec(f) -> int:
    if isinstance(f, Or):
        return 1
    if isinstance(f, And):
        return 2
    return 3


def render_formula(f, unicode: bool = False) -> str:
    """Render with minimal parentheses; ``parse_formula`` inverts the ASCII form."""
    sym = _UNICODE if unicode else _ASCII
    return _render(f, sym)


def _render(f, sym) -> str:
    if isinstance(f, (Var, Meta)):
        return f.name
    if isinstance(f, Neg):
        inner = _render(f.operand, sym)
        return sym["neg"] + (inner if _prec(f.operand) == 3 else f"({inner})")
    p = _prec(f)
    op = sym["or"] if isinstance(f, Or) else sym["and"]
    left = _render(f.left, sym)
    right = _render(f.right, sym)
    if _prec(f.left) < p:
        left = f"({left})"
    # right operand needs parens at equal precedence (left associativity)
    if _prec(f.right) <= p:
        right = f"({right})"
    return left + op + right


def render_sequent(s: Sequent, unicode: bool = False) -> str:
    sym = _UNICODE if unicode else _ASCII
    return _render(s.lhs, sym) + sym["turnstile"] + _render(s.rhs, sym)


# -- structure ---------------------------------------------------------------

def size(f) -> int:
    if isinstance(f, (Var, Meta)):
        return 1
    if isinstance(f, Neg):
        return 1 + size(f.operand)
    return 1 + size(f.left) + size(f.right)


def variables(f) -> set[str]:
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, Meta):
        return set()
    if isinstance(f, Neg):
        return variables(f.operand)
    return variables(f.left) | variables(f.right)


def metavariables(p) -> set[str]:
    if isinstance(p, Meta):
        return {p.name}
    if isinstance(p, Var):
        return set()
    if isinstance(p, Neg):
        return metavariables(p.operand)
    return metavariables(p.left) | metavariables(p.right)


def subformulas(f) -> Iterator[Formula]:
    yield f
    if isinstance(f, Neg):
        yield from subformulas(f.operand)
    elif isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def canonical_key(f) -> tuple[int, str]:
    """Total order used wherever output must be deterministic."""
    return (size(f), render_formula(f))


# -- matching ----------------------------------------------------------------

def match_schema(f: Formula, pat: Pattern,
                 partial: Substitution | None = None) -> dict[str, Formula] | None:
    """One-way match of ``pat`` against ``f`` extending ``partial``.

    Returns the extended substitution, or ``None`` when no consistent
    binding exists.
    """
    sigma = dict(partial) if partial else {}
    return sigma if _match(f, pat, sigma) else None


def _match(f, pat, sigma: dict) -> bool:
    if isinstance(pat, Meta):
        bound = sigma.get(pat.name)
        if bound is None:
            sigma[pat.name] = f
            return True
        return bound == f
    if type(pat) is not type(f):
        return False
    if isinstance(pat, Var):
        return pat == f
    if isinstance(pat, Neg):
        return _match(f.operand, pat.operand, sigma)
    return _match(f.left, pat.left, sigma) and _match(f.right, pat.right, sigma)


def match_sequent(s: Sequent, lhs: Pattern, rhs: Pattern,
                  partial: Substitution | None = None) -> dict[str, Formula] | None:
    """Match both sides of a sequent against a schema simultaneously."""
    sigma = match_schema(s.lhs, lhs, partial)
    if sigma is None:
        return None
    return match_schema(s.rhs, rhs, sigma)


def apply_substitution(pat: Pattern, sigma: Substitution) -> Formula:
    if isinstance(pat, Meta):
        try:
            return sigma[pat.name]
        except KeyError:
            raise UnboundMetavariable(pat.name) from None
    if isinstance(pat, Var):
        return pat
    if isinstance(pat, Neg):
        return Neg(apply_substitution(pat.operand, sigma))
    return type(pat)(apply_substitution(pat.left, sigma),
                     apply_substitution(pat.right, sigma))


# -- universe construction ---------------------------------------------------

DEFAULT_UNIVERSE_CAP = 20000


def subformula_closure(seeds: Iterable[Formula], neg_degree: int,
                       combine: bool = False,
                       cap: int = DEFAULT_UNIVERSE_CAP) -> list[Formula]:
    """Subformulas of ``seeds``, each wrapped in 0..neg_degree negations.

    With ``combine`` set, one further layer of pairwise ``&`` and ``|`` over
    that negation-closed set is added. Output is in canonical order.
    """
    if neg_degree < 0:
        raise ValueError("neg_degree must be >= 0")
    subs: set[Formula] = set()
    for seed in seeds:
        subs.update(subformulas(seed))
    base = set()
    for f in subs:
        for k in range(neg_degree + 1):
            base.add(negs(f, k))
    if len(base) > cap:
        raise UniverseTooLarge(f"{len(base)} formulas exceed cap {cap}")
    universe = set(base)
    if combine:
        if len(base) ** 2 > cap:
            raise UniverseTooLarge(
                f"combining {len(base)} formulas exceeds cap {cap}")
        ordered = sorted(base, key=canonical_key)
        for x in ordered:
            for y in ordered:
                universe.add(And(x, y))
                universe.add(Or(x, y))
    if len(universe) > cap:
        raise UniverseTooLarge(f"{len(universe)} formulas exceed cap {cap}")
    return sorted(universe, key=canonical_key)
