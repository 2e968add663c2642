"""Semantic sweeps: schema soundness, rule preservation and value-level laws."""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from typing import Sequence

from .formula import (And, Formula, Neg, Or, Sequent, Var, apply_substitution,
                      metavariables)
from .matrix import ANTI, LogicMatrix, decide_consequence
from .proofs import RULES, SystemId, apply_rule, schemata_of

FRESH = {"A": Var("p"), "B": Var("q"), "C": Var("r")}


def generic_instance(lhs, rhs) -> Sequent:
    """Instance with a distinct fresh variable per metavariable."""
    return Sequent(apply_substitution(lhs, FRESH), apply_substitution(rhs, FRESH))


def schema_soundness() -> dict[str, dict[str, dict[str, bool]]]:
    """For each system and schema: valid in its own preset, and in the other one."""
    presets = {s: s.matrix() for s in SystemId}
    out: dict[str, dict[str, dict[str, bool]]] = {}
    for sys in SystemId:
        other = presets[SystemId.CNLL42 if sys is SystemId.CNL42 else SystemId.CNL42]
        rows = {}
        for sid, (lhs, rhs) in schemata_of(sys):
            s = generic_instance(lhs, rhs)
            rows[sid] = {"own": decide_consequence(s, presets[sys]).valid,
                         "other": decide_consequence(s, other).valid}
        out[sys.value] = rows
    return out


def random_formula(rng: random.Random, names: Sequence[str], depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.25:
        return Var(rng.choice(names))
    kind = rng.randrange(3)
    if kind == 0:
        return Neg(random_formula(rng, names, depth - 1))
    ctor = And if kind == 1 else Or
    return ctor(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))


def random_instance(pat, rng: random.Random, names: Sequence[str], depth: int = 3) -> Sequent:
    """Substitute independent random formulas for the metavariables of ``pat``."""
    lhs, rhs = pat
    sigma = {name: random_formula(rng, names, depth)
             for name in sorted(metavariables(lhs) | metavariables(rhs))}
    return Sequent(apply_substitution(lhs, sigma), apply_substitution(rhs, sigma))


def sample_valid_sequents(m: LogicMatrix, count: int, seed: int,
                          names: Sequence[str] = ("p", "q", "r"),
                          pool_step: int = 40, depth: int = 3) -> list[Sequent]:
    """Distinct valid sequents whose sides come from a small random pool.

    Drawing both sides from one pool makes shared antecedents, consequents
    and middle formulas common, so every rule finds premises to apply to.
    The pool grows by ``pool_step`` formulas until enough sequents are valid.
    """
    rng = random.Random(seed)
    pool: list[Formula] = []
    out: list[Sequent] = []
    while len(out) < count:
        fresh = []
        while len(fresh) < pool_step:
            f = random_formula(rng, names, depth)
            if f not in pool and f not in fresh:
                fresh.append(f)
        candidates = [Sequent(a, b) for a in fresh for b in pool + fresh]
        candidates += [Sequent(a, b) for a in pool for b in fresh]
        pool += fresh
        rng.shuffle(candidates)
        for s in candidates:
            if len(out) == count:
                break
            if decide_consequence(s, m).valid:
                out.append(s)
    return out


def rule_preservation(m: LogicMatrix, samples: int = 1000, seed: int = 0) -> dict[str, dict]:
    """Apply every rule to every applicable premise tuple among sampled valid
    sequents and decide each conclusion.

    Returns per rule the number of applications and the failing instances.
    """
    valid = sample_valid_sequents(m, samples, seed)
    by_lhs = defaultdict(list)
    by_rhs = defaultdict(list)
    for s in valid:
        by_lhs[s.lhs].append(s)
        by_rhs[s.rhs].append(s)
    premise_sets = {
        "r1": [(s, t) for s in valid for t in by_lhs[s.rhs]],
        "r2": [(s, t) for s in valid for t in by_lhs[s.lhs]],
        "r3": [(s, t) for s in valid for t in by_rhs[s.rhs]],
        "r4": [(s,) for s in valid],
    }
    out = {}
    cache: dict[Sequent, bool] = {}
    for rule in RULES:
        failures = []
        for prem in premise_sets[rule]:
            concl = apply_rule(rule, prem)
            if concl not in cache:
                cache[concl] = decide_consequence(concl, m).valid
            if not cache[concl]:
                failures.append((prem, concl))
        out[rule] = {"applications": len(premise_sets[rule]), "failures": failures}
    return out


def _extreme(m: LogicMatrix, top: bool) -> str:
    table = m.join if top else m.meet
    return next(x for x in m.values if all(table[x][y] == x for y in m.values))


def law_witnesses(m: LogicMatrix, anti=ANTI) -> dict[str, list]:
    """Counterexamples to each value-level law in ``m`` (empty list = holds).

    Unary laws report values, binary laws report pairs. ``anti`` is the
    auxiliary set whose membership the negation lemma tracks.
    """
    vals, d = m.values, m.designated
    neg, meet, join = m.neg, m.meet, m.join
    top, bottom = _extreme(m, True), _extreme(m, False)

    def neg_n(x, n):
        for _ in range(n):
            x = neg[x]
        return x

    pairs = list(itertools.product(vals, repeat=2))
    leq = {(x, y) for x, y in pairs if meet[x][y] == x}
    laws = {
        "neg_period": [x for x in vals
                       if neg_n(x, 4) != x or neg_n(x, 1) == x or neg_n(x, 2) == x],
        "designation_flip": [x for x in vals if (x in d) == (neg_n(x, 2) in d)],
        "complement_meet": [x for x in vals if meet[x][neg_n(x, 2)] != bottom],
        "complement_join": [x for x in vals if join[x][neg_n(x, 2)] != top],
        "weak_meet": [x for x in vals if meet[x][neg_n(x, 2)] in d],
        "weak_join": [x for x in vals if join[x][neg_n(x, 2)] not in d],
        "filter_upward": [(x, y) for x, y in leq if x in d and y not in d],
        "filter_meet": [(x, y) for x, y in pairs if x in d and y in d and meet[x][y] not in d],
        "filter_prime": [(x, y) for x, y in pairs if join[x][y] in d and x not in d and y not in d],
        "neg_designated": [x for x in vals if (neg[x] in d) != (x not in anti)],
        "neg_anti": [x for x in vals if (neg[x] in anti) != (x in d)],
        "meet_designated": [(x, y) for x, y in pairs
                            if (meet[x][y] in d) != (x in d and y in d)],
        "meet_anti": [(x, y) for x, y in pairs
                      if (meet[x][y] in anti) != (x in anti or y in anti)],
        "join_designated": [(x, y) for x, y in pairs
                            if (join[x][y] in d) != (x in d or y in d)],
        "join_anti": [(x, y) for x, y in pairs
                      if (join[x][y] in anti) != (x in anti and y in anti)],
    }
    return laws
