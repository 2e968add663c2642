"""Forward-chaining proof search over a finite formula universe.

Formulas are interned to integer ids. The saturation loop is a given-clause
loop: the lightest unprocessed sequent (by total formula size plus a penalty
for formulas outside an optional core set, ties broken by insertion order)
is combined with every processed sequent under r1-r4, and
conclusions whose formulas lie in the universe are kept. The derivation order
does not depend on the budget, so a larger budget only extends the result.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from .formula import (And, Formula, Neg, Or, Sequent, match_schema, metavariables,
                      apply_substitution, size, subformula_closure)
from .matrix import decide_consequence
from .proofs import Axiom, Proof, ProofLine, RuleApp, SystemId, schemata_of

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 50_000
OUTSIDE_CORE_PENALTY = 8


@dataclass(frozen=True)
class SearchConfig:
    neg_degree: int = 4
    combine: bool = True
    max_sequents: int = DEFAULT_BUDGET
    hints: tuple[Sequent, ...] = ()

    def __post_init__(self):
        if self.max_sequents <= 0:
            raise ValueError("max_sequents must be positive")
        if self.neg_degree < 0:
            raise ValueError("neg_degree must be >= 0")


@dataclass(frozen=True)
class Proved:
    proof: Proof
    derived: int = 0


@dataclass(frozen=True)
class Refuted:
    countermodel: dict[str, str]


@dataclass(frozen=True)
class NotFound:
    budget_exhausted: bool
    derived: int = 0


class _Universe:
    def __init__(self, formulas: Sequence[Formula], core: set[Formula] | None = None):
        self.formulas = list(formulas)
        self.ids = {f: i for i, f in enumerate(self.formulas)}
        # formulas outside the core are pushed back in the processing order
        self.weight = [size(f) + (0 if core is None or f in core else OUTSIDE_CORE_PENALTY)
                       for f in self.formulas]
        self.neg2 = [self.ids.get(Neg(Neg(f)), -1) for f in self.formulas]
        self.conj: dict[tuple[int, int], int] = {}
        self.disj: dict[tuple[int, int], int] = {}
        for i, f in enumerate(self.formulas):
            if isinstance(f, And) and f.left in self.ids and f.right in self.ids:
                self.conj[self.ids[f.left], self.ids[f.right]] = i
            elif isinstance(f, Or) and f.left in self.ids and f.right in self.ids:
                self.disj[self.ids[f.left], self.ids[f.right]] = i

    def sequent(self, key: tuple[int, int]) -> Sequent:
        return Sequent(self.formulas[key[0]], self.formulas[key[1]])


def _axiom_instances(sys: SystemId, uni: _Universe):
    """Every schema instance of ``sys`` with both sides in the universe."""
    for sid, (lpat, rpat) in schemata_of(sys):
        rmetas = metavariables(rpat)
        for li, f in enumerate(uni.formulas):
            sigma = match_schema(f, lpat)
            if sigma is None:
                continue
            if rmetas <= sigma.keys():
                ri = uni.ids.get(apply_substitution(rpat, sigma))
                if ri is not None:
                    yield (li, ri), sid
                continue
            for ri, g in enumerate(uni.formulas):
                if match_schema(g, rpat, sigma) is not None:
                    yield (li, ri), sid


class Saturation:
    """Result of saturating a universe; maps each derived sequent to a proof."""

    def __init__(self, uni: _Universe, derived: dict, axioms: int, exhausted: bool):
        self._uni = uni
        self._derived = derived
        self.axiom_count = axioms
        self.budget_exhausted = exhausted

    def __len__(self) -> int:
        return len(self._derived)

    def __contains__(self, s: Sequent) -> bool:
        return self._key(s) in self._derived

    def _key(self, s: Sequent):
        return (self._uni.ids.get(s.lhs, -1), self._uni.ids.get(s.rhs, -1))

    @property
    def derived_count(self) -> int:
        return len(self._derived) - self.axiom_count

    def sequents(self) -> list[Sequent]:
        return [self._uni.sequent(k) for k in self._derived]

    def proof(self, s: Sequent) -> Proof:
        """The goal's ancestors in dependency order, last line the goal."""
        goal = self._key(s)
        if goal not in self._derived:
            raise KeyError(f"{s} was not derived")
        order: list[tuple[int, int]] = []
        seen = set()
        stack = [(goal, False)]
        while stack:
            key, expanded = stack.pop()
            if expanded:
                order.append(key)
                continue
            if key in seen:
                continue
            seen.add(key)
            stack.append((key, True))
            just = self._derived[key]
            if just[0] != "ax":
                for parent in reversed(just[1]):
                    if parent not in seen:
                        stack.append((parent, False))
        number = {key: i for i, key in enumerate(order, start=1)}
        lines = []
        for key in order:
            just = self._derived[key]
            if just[0] == "ax":
                j = Axiom(just[1])
            else:
                j = RuleApp(just[0], tuple(number[p] for p in just[1]))
            lines.append(ProofLine(self._uni.sequent(key), j))
        return tuple(lines)


def _saturate(sys: SystemId, uni: _Universe, budget: int,
              goal: tuple[int, int] | None = None) -> Saturation:
    derived: dict[tuple[int, int], tuple] = {}
    heap: list[tuple[int, int, int, int]] = []
    counter = 0

    def push(key, just) -> None:
        nonlocal counter
        derived[key] = just
        heapq.heappush(heap, (uni.weight[key[0]] + uni.weight[key[1]], counter, *key))
        counter += 1

    for key, sid in _axiom_instances(sys, uni):
        if key not in derived:
            push(key, ("ax", sid))
    axioms = len(derived)
    if goal is not None and goal in derived:
        return Saturation(uni, derived, axioms, False)

    by_lhs: dict[int, list[int]] = {}
    by_rhs: dict[int, list[int]] = {}
    added = 0
    exhausted = False

    while heap and not exhausted:
        _, _, l, r = heapq.heappop(heap)
        by_lhs.setdefault(l, []).append(r)
        by_rhs.setdefault(r, []).append(l)
        given = (l, r)
        new = []
        # r1, given as left premise then as right premise
        for c in by_lhs.get(r, ()):
            new.append(((l, c), ("r1", (given, (r, c)))))
        for a in by_rhs.get(l, ()):
            new.append(((a, r), ("r1", ((a, l), given))))
        # r2 on shared antecedent, both operand orders
        for c in by_lhs[l]:
            k = uni.conj.get((r, c))
            if k is not None:
                new.append(((l, k), ("r2", (given, (l, c)))))
            k = uni.conj.get((c, r))
            if k is not None:
                new.append(((l, k), ("r2", ((l, c), given))))
        # r3 on shared consequent, both operand orders
        for b in by_rhs[r]:
            k = uni.disj.get((l, b))
            if k is not None:
                new.append(((k, r), ("r3", (given, (b, r)))))
            k = uni.disj.get((b, l))
            if k is not None:
                new.append(((k, r), ("r3", ((b, r), given))))
        nr, nl = uni.neg2[r], uni.neg2[l]
        if nr >= 0 and nl >= 0:
            new.append(((nr, nl), ("r4", (given,))))
        for key, just in new:
            if key in derived:
                continue
            if added >= budget:
                exhausted = True
                break
            push(key, just)
            added += 1
            if key == goal:
                return Saturation(uni, derived, axioms, False)
    return Saturation(uni, derived, axioms, exhausted)


def saturate(sys: SystemId, universe: Iterable[Formula], budget: int = DEFAULT_BUDGET,
             goal: Sequent | None = None,
             core: Iterable[Formula] | None = None) -> Saturation:
    """Close the axiom instances over ``universe`` under r1-r4.

    ``budget`` caps the number of rule-derived sequents (axiom instances are
    always included; ``budget=0`` yields exactly them). With ``goal`` set,
    saturation stops as soon as the goal is derived. Sequents mentioning
    formulas outside ``core`` (when given) are processed later.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    uni = _Universe(universe, None if core is None else set(core))
    goal_key = None
    if goal is not None:
        goal_key = (uni.ids.get(goal.lhs, -1), uni.ids.get(goal.rhs, -1))
    return _saturate(sys, uni, budget, goal_key)


def find_proof(s: Sequent, sys: SystemId, cfg: SearchConfig = SearchConfig()):
    """Return ``Proved``, ``Refuted`` (semantic countermodel) or ``NotFound``."""
    verdict = decide_consequence(s, sys.matrix())
    if not verdict.valid:
        return Refuted(verdict.countermodel)
    seeds = [s.lhs, s.rhs]
    for h in cfg.hints:
        seeds += [h.lhs, h.rhs]
    universe = subformula_closure(seeds, cfg.neg_degree, cfg.combine)
    log.debug("universe of %d formulas for %s", len(universe), s)
    core = subformula_closure(seeds, cfg.neg_degree, combine=False)
    result = saturate(sys, universe, cfg.max_sequents, goal=s, core=core)
    if s in result:
        return Proved(result.proof(s), result.derived_count)
    return NotFound(result.budget_exhausted, result.derived_count)
