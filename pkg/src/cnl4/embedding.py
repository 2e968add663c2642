"""Classical formulas, the double-negation translation and embedding checks.

Classical syntax is the formula grammar with ``!`` as negation. The
translation sends ``!A`` to ``~~A`` and is homomorphic on ``&`` and ``|``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .formula import And, Formula, Neg, Or, Sequent, Var, _Parser, render_formula
from .matrix import (DEFAULT_VARIABLE_CAP, LogicMatrix, T,
                     TooManyVariables, _ROTATIONS, decide_consequence, preset_matrix,
                     valuation_grid)


@dataclass(frozen=True)
class CVar:
    name: str


@dataclass(frozen=True)
class CNot:
    operand: "ClassicalFormula"


@dataclass(frozen=True)
class CAnd:
    left: "ClassicalFormula"
    right: "ClassicalFormula"


@dataclass(frozen=True)
class COr:
    left: "ClassicalFormula"
    right: "ClassicalFormula"


ClassicalFormula = CVar | CNot | CAnd | COr


def parse_classical(text: str) -> ClassicalFormula:
    return _Parser(text, metas=False, neg_token="!",
                   builders=(CVar, CNot, CAnd, COr)).parse()


def render_classical(a: ClassicalFormula) -> str:
    return render_formula(_shape(a)).replace("~", "!")


def _shape(a: ClassicalFormula) -> Formula:
    """Same tree with ``!`` read as a single ``~`` (not the translation)."""
    if isinstance(a, CVar):
        return Var(a.name)
    if isinstance(a, CNot):
        return Neg(_shape(a.operand))
    return (And if isinstance(a, CAnd) else Or)(_shape(a.left), _shape(a.right))


def translate(a: ClassicalFormula) -> Formula:
    if isinstance(a, CVar):
        return Var(a.name)
    if isinstance(a, CNot):
        return Neg(Neg(translate(a.operand)))
    if isinstance(a, CAnd):
        return And(translate(a.left), translate(a.right))
    if isinstance(a, COr):
        return Or(translate(a.left), translate(a.right))
    raise TypeError(f"not a classical formula: {a!r}")


def cvariables(a: ClassicalFormula) -> set[str]:
    if isinstance(a, CVar):
        return {a.name}
    if isinstance(a, CNot):
        return cvariables(a.operand)
    return cvariables(a.left) | cvariables(a.right)


def _eval2(a: ClassicalFormula, v: Mapping[str, bool]) -> bool:
    if isinstance(a, CVar):
        return v[a.name]
    if isinstance(a, CNot):
        return not _eval2(a.operand, v)
    if isinstance(a, CAnd):
        return _eval2(a.left, v) and _eval2(a.right, v)
    return _eval2(a.left, v) or _eval2(a.right, v)


def classical_consequence_2v(a: ClassicalFormula, b: ClassicalFormula) -> bool:
    names = sorted(cvariables(a) | cvariables(b))
    for bits in itertools.product((True, False), repeat=len(names)):
        v = dict(zip(names, bits))
        if _eval2(a, v) and not _eval2(b, v):
            return False
    return True


def boolean_4q() -> LogicMatrix:
    """4Q read as a Boolean algebra: complement is the double cyclic negation."""
    m = preset_matrix("4q")
    comp = {x: m.neg[m.neg[x]] for x in m.values}
    return LogicMatrix("4q-boolean", m.values, frozenset({T}), m.meet, m.join, comp)


def classical_consequence_4q(a: ClassicalFormula, b: ClassicalFormula,
                             cap: int = DEFAULT_VARIABLE_CAP) -> bool:
    """Truth (T) preservation over the four-element Boolean algebra."""
    return decide_consequence(Sequent(_shape(a), _shape(b)), boolean_4q(), cap).valid


def four_way(a: ClassicalFormula, b: ClassicalFormula,
             matrices: Sequence[LogicMatrix] | None = None) -> tuple[bool, ...]:
    """Verdicts: 2-valued, 4Q-Boolean, and the translation in each matrix."""
    if matrices is None:
        matrices = (preset_matrix("4q"), preset_matrix("4lq"))
    s = Sequent(translate(a), translate(b))
    return (classical_consequence_2v(a, b), classical_consequence_4q(a, b),
            *(decide_consequence(s, m).valid for m in matrices))


# -- enumeration -------------------------------------------------------------

VARIABLE_NAMES = "pqrstuvw"


def variable_names(n: int) -> list[str]:
    if not 1 <= n <= len(VARIABLE_NAMES):
        raise ValueError(f"vars must be between 1 and {len(VARIABLE_NAMES)}")
    return list(VARIABLE_NAMES[:n])


@dataclass(frozen=True)
class _Algebra:
    """Vectorised interpretation: value arrays over all valuations."""

    leaves: dict[str, np.ndarray]
    neg: object
    meet: object
    join: object


def _two_valued(names) -> _Algebra:
    k = np.arange(2 ** len(names))
    leaves = {n: ((k >> (len(names) - 1 - i)) & 1) == 0 for i, n in enumerate(names)}
    return _Algebra(leaves, np.logical_not, np.logical_and, np.logical_or)


def _four_valued(names, m: LogicMatrix, negation_power: int) -> _Algebra:
    meet, join, neg, _ = m.arrays
    unary = np.arange(len(m.values))
    for _ in range(negation_power):
        unary = neg[unary]
    return _Algebra(valuation_grid(names, m), lambda x: unary[x],
                    lambda x, y: meet[x, y], lambda x, y: join[x, y])


class FormulaSpace:
    """All classical formulas over ``names`` up to ``depth``, in canonical order.

    ``values[k]`` holds, per supplied algebra, the array of values of formula
    ``k`` under every valuation.
    """

    def __init__(self, names: Sequence[str], depth: int, algebras: Sequence[_Algebra]):
        if depth < 0:
            raise ValueError("depth must be >= 0")
        # exact-depth layers; each entry is (formula, size)
        formulas: list[ClassicalFormula] = [CVar(n) for n in names]
        sizes = [1] * len(names)
        vals = [np.stack([alg.leaves[n] for n in names]) for alg in algebras]
        layer = list(range(len(names)))
        for _ in range(depth):
            older = list(range(len(formulas)))
            last = set(layer)
            new_f, new_s = [], []
            new_v: list[list[np.ndarray]] = [[] for _ in algebras]
            idx = np.array(layer)
            for j, alg in enumerate(algebras):
                new_v[j].append(alg.neg(vals[j][idx]))
            new_f += [CNot(formulas[i]) for i in layer]
            new_s += [sizes[i] + 1 for i in layer]
            pairs = [(x, y) for x in older for y in older if x in last or y in last]
            left = np.array([x for x, _ in pairs], dtype=np.int64)
            right = np.array([y for _, y in pairs], dtype=np.int64)
            for ctor, op in ((CAnd, "meet"), (COr, "join")):
                for j, alg in enumerate(algebras):
                    new_v[j].append(getattr(alg, op)(vals[j][left], vals[j][right]))
                new_f += [ctor(formulas[x], formulas[y]) for x, y in pairs]
                new_s += [sizes[x] + sizes[y] + 1 for x, y in pairs]
            start = len(formulas)
            formulas += new_f
            sizes += new_s
            vals = [np.concatenate([vals[j]] + new_v[j]) for j in range(len(algebras))]
            layer = list(range(start, len(formulas)))
        keys = [(s, render_classical(f)) for f, s in zip(formulas, sizes)]
        order = sorted(range(len(formulas)), key=keys.__getitem__)
        self.formulas = [formulas[i] for i in order]
        perm = np.array(order, dtype=np.int64)
        self.values = [v[perm] for v in vals]

    def __len__(self) -> int:
        return len(self.formulas)


# -- embedding verification --------------------------------------------------

MAX_REPORTED = 50


@dataclass
class EmbeddingReport:
    pairs_checked: int = 0
    discrepancy_count: int = 0
    discrepancies: list[tuple[ClassicalFormula, ClassicalFormula, tuple[bool, ...]]] = \
        field(default_factory=list)
    mode: str = "exhaustive"

    @property
    def ok(self) -> bool:
        return self.discrepancy_count == 0


def _masks(rows: np.ndarray) -> list[int]:
    """Each boolean row as an integer bitset."""
    packed = np.packbits(rows.astype(bool), axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


def verify_embedding(vars: int, depth: int, sample: int | None = None,
                     seed: int | None = None,
                     matrices: Sequence[LogicMatrix] | None = None) -> EmbeddingReport:
    """Check that the four consequence relations agree on formula pairs.

    Exhaustive mode covers every ordered pair; formulas are grouped into
    classes with identical designation patterns, which fix all four
    verdicts, so each class pair is decided once and weighted by its
    multiplicity. Sampling mode draws ``sample`` pairs with a seeded
    generator and calls the consequence functions directly on each.
    """
    if vars < 1:
        raise ValueError("vars must be >= 1")
    if matrices is None:
        matrices = (preset_matrix("4q"), preset_matrix("4lq"))
    names = variable_names(vars)
    if vars > DEFAULT_VARIABLE_CAP:
        raise TooManyVariables(f"{vars} variables exceed cap {DEFAULT_VARIABLE_CAP}")
    if sample is not None:
        if seed is None:
            raise ValueError("sampling mode requires a seed")
        return _verify_sampled(names, depth, sample, seed, matrices)

    algebras = [_two_valued(names), _four_valued(names, boolean_4q(), 1)]
    algebras += [_four_valued(names, m, 2) for m in matrices]
    space = FormulaSpace(names, depth, algebras)
    truth = [space.values[0], space.values[1] == 0]  # T is index 0 in the Boolean algebra
    truth += [m.arrays[3][v] for m, v in zip(matrices, space.values[2:])]
    columns = [_masks(t) for t in truth]
    classes: dict[tuple[int, ...], list[int]] = {}
    for k in range(len(space)):
        classes.setdefault(tuple(c[k] for c in columns), []).append(k)
    report = EmbeddingReport(pairs_checked=len(space) ** 2)
    found = []
    for sig_a, members_a in classes.items():
        for sig_b, members_b in classes.items():
            verdicts = tuple(a & ~b == 0 for a, b in zip(sig_a, sig_b))
            if len(set(verdicts)) > 1:
                report.discrepancy_count += len(members_a) * len(members_b)
                found.append((members_a[0], members_b[0], verdicts))
    found.sort()
    report.discrepancies = [(space.formulas[a], space.formulas[b], v)
                            for a, b, v in found[:MAX_REPORTED]]
    return report


def _tree_counts(n_vars: int, depth: int) -> list[int]:
    """counts[k] = number of distinct formulas of depth at most k."""
    counts = [n_vars]
    for _ in range(depth):
        c = counts[-1]
        counts.append(n_vars + c + 2 * c * c)
    return counts


def random_classical(rng: random.Random, names: Sequence[str], depth: int,
                     counts: list[int] | None = None) -> ClassicalFormula:
    """Uniform draw from the formulas of depth at most ``depth``."""
    if counts is None:
        counts = _tree_counts(len(names), depth)
    k = rng.randrange(counts[depth])
    if k < len(names) or depth == 0:
        return CVar(names[k % len(names)])
    k -= len(names)
    sub = counts[depth - 1]
    if k < sub:
        return CNot(random_classical(rng, names, depth - 1, counts))
    ctor = CAnd if k < sub + sub * sub else COr
    return ctor(random_classical(rng, names, depth - 1, counts),
                random_classical(rng, names, depth - 1, counts))


def _pair_key(d) -> tuple:
    a, b = render_classical(d[0]), render_classical(d[1])
    return len(a), a, len(b), b


def _verify_sampled(names, depth, sample, seed, matrices) -> EmbeddingReport:
    rng = random.Random(seed)
    counts = _tree_counts(len(names), depth)
    found = set()
    report = EmbeddingReport(pairs_checked=sample, mode="sampled")
    for _ in range(sample):
        a = random_classical(rng, names, depth, counts)
        b = random_classical(rng, names, depth, counts)
        verdicts = four_way(a, b, matrices)
        if len(set(verdicts)) > 1:
            report.discrepancy_count += 1
            found.add((a, b, verdicts))
    report.discrepancies = sorted(found, key=_pair_key)[:MAX_REPORTED]
    return report


# -- rotations ---------------------------------------------------------------

def rotation_failures(vars: int, depth: int, m: LogicMatrix, direction: str,
                      limit: int = MAX_REPORTED) -> tuple[int, list]:
    """Count (formula, valuation) pairs where rotating the valuation does not
    agree with collapsing the translated formula's value.

    Returns the failure count and up to ``limit`` witnesses
    ``(formula, valuation, value, rotated value)``.
    """
    names = variable_names(vars)
    space = FormulaSpace(names, depth, [_four_valued(names, m, 2)])
    values = space.values[0]
    n = len(m.values)
    table = _ROTATIONS[direction]
    collapse = np.array([m.index(table[x]) for x in m.values])
    # index of the rotated valuation for every valuation
    digits = np.array(list(itertools.product(range(n), repeat=len(names))))
    rotated = collapse[digits]
    target = (rotated * n ** np.arange(len(names) - 1, -1, -1)).sum(axis=1)
    bad = values[:, target] != collapse[values]
    count = int(bad.sum())
    witnesses = []
    for f_idx, v_idx in zip(*np.nonzero(bad)):
        if len(witnesses) >= limit:
            break
        valuation = {name: m.values[d] for name, d in zip(names, digits[v_idx])}
        witnesses.append((space.formulas[f_idx], valuation,
                          m.values[values[f_idx, v_idx]],
                          m.values[values[f_idx, target[v_idx]]]))
    return count, witnesses
