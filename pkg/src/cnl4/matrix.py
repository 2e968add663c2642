"""Four-valued matrices with cyclic negation, evaluation and consequence.

Values are plain strings; the four named ones are available as the
``TruthValue`` enum (a ``str`` subclass) in canonical order T, TU, F, FU.
User matrices may use any carrier.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .formula import And, Formula, Neg, Or, Sequent, Var, variables


class TruthValue(str, enum.Enum):
    T = "T"
    TU = "TU"
    F = "F"
    FU = "FU"

    def __str__(self) -> str:
        return self.value


T, TU, F, FU = TruthValue.T, TruthValue.TU, TruthValue.F, TruthValue.FU
CANONICAL_ORDER = (T, TU, F, FU)

#: the auxiliary set pairing with the designated set to encode all four values
ANTI = frozenset({TU, F})

DEFAULT_VARIABLE_CAP = 12

CYCLIC_NEG = {T: TU, TU: F, F: FU, FU: T}

_ROTATIONS = {
    "plus": {T: T, TU: T, F: F, FU: F},
    "minus": {T: T, TU: F, F: F, FU: T},
}


class MatrixError(ValueError):
    """A candidate matrix violates one or more laws; ``errors`` lists them."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


class UnassignedVariable(KeyError):
    pass


class TooManyVariables(RuntimeError):
    pass


@dataclass(frozen=True)
class LogicMatrix:
    id: str
    values: tuple[str, ...]
    designated: frozenset[str]
    meet: Mapping[str, Mapping[str, str]] = field(repr=False)
    join: Mapping[str, Mapping[str, str]] = field(repr=False)
    neg: Mapping[str, str] = field(repr=False)

    def __post_init__(self):
        idx = {v: i for i, v in enumerate(self.values)}
        n = len(self.values)
        meet = np.empty((n, n), dtype=np.int8)
        join = np.empty((n, n), dtype=np.int8)
        for a, b in itertools.product(self.values, repeat=2):
            meet[idx[a], idx[b]] = idx[self.meet[a][b]]
            join[idx[a], idx[b]] = idx[self.join[a][b]]
        neg = np.array([idx[self.neg[v]] for v in self.values], dtype=np.int8)
        desig = np.array([v in self.designated for v in self.values])
        object.__setattr__(self, "_index", idx)
        object.__setattr__(self, "_arrays", (meet, join, neg, desig))

    def index(self, value: str) -> int:
        return self._index[value]

    @property
    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Integer-coded (meet, join, neg, designated) tables."""
        return self._arrays

    def with_neg(self, neg: Mapping[str, str], id: str | None = None) -> "LogicMatrix":
        return LogicMatrix(id or self.id, self.values, self.designated,
                           self.meet, self.join, dict(neg))


@dataclass(frozen=True)
class Verdict:
    valid: bool
    countermodel: dict[str, str] | None = None


# -- construction and validation ---------------------------------------------

def _leq_closure(values: Sequence[str], covers: Iterable[tuple[str, str]]) -> dict[str, set[str]]:
    """Map each value to the set of values above or equal to it."""
    up = {v: {v} for v in values}
    for lo, hi in covers:
        up[lo].add(hi)
    changed = True
    while changed:
        changed = False
        for v in values:
            extra = set().union(*(up[w] for w in up[v])) - up[v]
            if extra:
                up[v] |= extra
                changed = True
    return up


def _bound(values, up, a, b, upper: bool) -> str | None:
    if upper:
        cands = [c for c in values if c in up[a] and c in up[b]]
        best = [c for c in cands if all(d in up[c] for d in cands)]
    else:
        cands = [c for c in values if a in up[c] and b in up[c]]
        best = [c for c in cands if all(c in up[d] for d in cands)]
    return best[0] if best else None


def tables_from_order(values: Sequence[str], order: Iterable[Sequence[str]]):
    """Compile covering pairs ``[lower, upper]`` into meet/join tables.

    Returns ``(meet, join, errors)``; tables are ``None`` when errors exist.
    """
    errors = []
    pairs = []
    for pair in order:
        if len(pair) != 2 or any(v not in values for v in pair):
            errors.append(f"order pair {list(pair)} mentions unknown value")
        else:
            pairs.append((pair[0], pair[1]))
    if errors:
        return None, None, errors
    up = _leq_closure(values, pairs)
    for a, b in itertools.combinations(values, 2):
        if b in up[a] and a in up[b]:
            errors.append(f"order not antisymmetric for ({a}, {b})")
    if errors:
        return None, None, errors
    meet: dict[str, dict[str, str]] = {a: {} for a in values}
    join: dict[str, dict[str, str]] = {a: {} for a in values}
    for a, b in itertools.product(values, repeat=2):
        lub = _bound(values, up, a, b, upper=True)
        glb = _bound(values, up, a, b, upper=False)
        if lub is None and values.index(a) < values.index(b):
            errors.append(f"no least upper bound for ({a}, {b})")
        if glb is None and values.index(a) < values.index(b):
            errors.append(f"no greatest lower bound for ({a}, {b})")
        if lub is not None:
            join[a][b] = lub
        if glb is not None:
            meet[a][b] = glb
    if errors:
        return None, None, errors
    return meet, join, []


def _check_table(name, table, values) -> list[str]:
    errors = []
    for a, b in itertools.product(values, repeat=2):
        try:
            r = table[a][b]
        except (KeyError, TypeError):
            errors.append(f"{name} not total: missing ({a}, {b})")
            continue
        if r not in values:
            errors.append(f"{name}({a}, {b}) = {r} outside the carrier")
    return errors


def _lattice_laws(meet, join, values) -> list[str]:
    errors = []
    for name, op in (("meet", meet), ("join", join)):
        for a in values:
            if op[a][a] != a:
                errors.append(f"{name} not idempotent at ({a}, {a})")
        for a, b in itertools.product(values, repeat=2):
            if op[a][b] != op[b][a]:
                errors.append(f"{name} not commutative at ({a}, {b})")
        for a, b, c in itertools.product(values, repeat=3):
            if op[op[a][b]][c] != op[a][op[b][c]]:
                errors.append(f"{name} not associative at ({a}, {b}, {c})")
    for a, b in itertools.product(values, repeat=2):
        if meet[a][join[a][b]] != a:
            errors.append(f"absorption meet(x, join(x, y)) = x fails at ({a}, {b})")
        if join[a][meet[a][b]] != a:
            errors.append(f"absorption join(x, meet(x, y)) = x fails at ({a}, {b})")
    return errors


def validate_matrix(spec: Mapping) -> list[str]:
    """Check a matrix description (file-format dict); return violated laws.

    An empty list means the description compiles to a lattice matrix.
    """
    errors = []
    if "id" not in spec:
        errors.append("missing key 'id'")
    values = list(spec.get("values") or [])
    if not values:
        return errors + ["carrier 'values' is empty or missing"]
    if len(set(values)) != len(values):
        errors.append("duplicate values in carrier")
    designated = list(spec.get("designated") or [])
    for v in designated:
        if v not in values:
            errors.append(f"designated value {v} outside the carrier")
    if not designated:
        errors.append("designated set is empty")
    elif set(designated) >= set(values):
        errors.append("designated set is not proper")

    neg = spec.get("neg")
    if not isinstance(neg, Mapping) or any(v not in neg for v in values):
        missing = [v for v in values if not isinstance(neg, Mapping) or v not in neg]
        errors.append(f"neg not total: missing {', '.join(missing)}")
    else:
        for v in values:
            if neg[v] not in values:
                errors.append(f"neg({v}) = {neg[v]} outside the carrier")

    has_order = "order" in spec
    has_tables = "meet" in spec or "join" in spec
    if has_order and has_tables:
        return errors + ["give either 'order' or 'meet'/'join', not both"]
    if not has_order and not has_tables:
        return errors + ["one of 'order' or 'meet'/'join' is required"]
    if has_order:
        _, _, order_errors = tables_from_order(values, spec["order"])
        return errors + order_errors
    meet, join = spec.get("meet"), spec.get("join")
    table_errors = _check_table("meet", meet, values) + _check_table("join", join, values)
    if table_errors:
        return errors + table_errors
    return errors + _lattice_laws(meet, join, values)


def matrix_from_spec(spec: Mapping) -> LogicMatrix:
    errors = validate_matrix(spec)
    if errors:
        raise MatrixError(errors)
    values = tuple(spec["values"])
    if "order" in spec:
        meet, join, _ = tables_from_order(values, spec["order"])
    else:
        meet, join = spec["meet"], spec["join"]
    return LogicMatrix(
        id=str(spec["id"]),
        values=values,
        designated=frozenset(spec["designated"]),
        meet={a: dict(meet[a]) for a in values},
        join={a: dict(join[a]) for a in values},
        neg=dict(spec["neg"]),
    )


def covering_pairs(m: LogicMatrix) -> list[list[str]]:
    """Hasse edges [lower, upper] of the order induced by the meet table."""
    below = {(a, b) for a in m.values for b in m.values if a != b and m.meet[a][b] == a}
    return [[a, b] for a, b in sorted(below, key=lambda p: (m.index(p[0]), m.index(p[1])))
            if not any((a, c) in below and (c, b) in below for c in m.values)]


def matrix_to_spec(m: LogicMatrix, form: str = "order") -> dict:
    spec = {
        "id": m.id,
        "values": list(m.values),
        "designated": [v for v in m.values if v in m.designated],
    }
    if form == "order":
        spec["order"] = covering_pairs(m)
    elif form == "tables":
        spec["meet"] = {a: {b: m.meet[a][b] for b in m.values} for a in m.values}
        spec["join"] = {a: {b: m.join[a][b] for b in m.values} for a in m.values}
    else:
        raise ValueError(f"unknown form {form!r}")
    spec["neg"] = {v: m.neg[v] for v in m.values}
    return spec


def load_matrix(path) -> LogicMatrix:
    with open(path, encoding="utf-8") as fh:
        spec = json.load(fh)
    if not isinstance(spec, dict):
        raise MatrixError(["matrix file must hold a JSON object"])
    return matrix_from_spec(spec)


def dump_matrix(m: LogicMatrix, form: str = "order") -> str:
    return json.dumps(matrix_to_spec(m, form))


_PRESET_ORDERS = {
    "4q": [["F", "TU"], ["F", "FU"], ["TU", "T"], ["FU", "T"]],
    "4lq": [["FU", "F"], ["F", "TU"], ["TU", "T"]],
}


def preset_matrix(name: str) -> LogicMatrix:
    """The diamond ``4q`` or the chain ``4lq``, both with cyclic negation."""
    key = name.lower()
    if key not in _PRESET_ORDERS:
        raise KeyError(f"unknown preset {name!r}; expected 4q or 4lq")
    values = [v.value for v in CANONICAL_ORDER]
    meet, join, _ = tables_from_order(values, _PRESET_ORDERS[key])
    lift = {v.value: v for v in CANONICAL_ORDER}
    return LogicMatrix(
        id=key,
        values=CANONICAL_ORDER,
        designated=frozenset({T, TU}),
        meet={lift[a]: {lift[b]: lift[c] for b, c in row.items()} for a, row in meet.items()},
        join={lift[a]: {lift[b]: lift[c] for b, c in row.items()} for a, row in join.items()},
        neg=dict(CYCLIC_NEG),
    )


# -- evaluation --------------------------------------------------------------

def evaluate(f: Formula, v: Mapping[str, str], m: LogicMatrix) -> str:
    if isinstance(f, Var):
        try:
            return v[f.name]
        except KeyError:
            raise UnassignedVariable(f.name) from None
    if isinstance(f, Neg):
        return m.neg[evaluate(f.operand, v, m)]
    if isinstance(f, And):
        return m.meet[evaluate(f.left, v, m)][evaluate(f.right, v, m)]
    if isinstance(f, Or):
        return m.join[evaluate(f.left, v, m)][evaluate(f.right, v, m)]
    raise TypeError(f"not a formula: {f!r}")


def valuation_grid(names: Sequence[str], m: LogicMatrix) -> dict[str, np.ndarray]:
    """Integer value of each variable across all valuations, canonical order.

    Valuation ``k`` assigns the variables (in the given order) the base-|carrier|
    digits of ``k``, most significant first, so the last variable varies fastest.
    """
    n = len(m.values)
    k = np.arange(n ** len(names), dtype=np.int64)
    out = {}
    for i, name in enumerate(names):
        out[name] = ((k // n ** (len(names) - 1 - i)) % n).astype(np.int8)
    return out


def value_vector(f: Formula, grid: Mapping[str, np.ndarray], m: LogicMatrix,
                 cache: dict | None = None) -> np.ndarray:
    """Integer-coded value of ``f`` under every valuation in ``grid``."""
    if cache is not None and f in cache:
        return cache[f]
    meet, join, neg, _ = m.arrays
    if isinstance(f, Var):
        try:
            out = grid[f.name]
        except KeyError:
            raise UnassignedVariable(f.name) from None
    elif isinstance(f, Neg):
        out = neg[value_vector(f.operand, grid, m, cache)]
    elif isinstance(f, And):
        out = meet[value_vector(f.left, grid, m, cache), value_vector(f.right, grid, m, cache)]
    elif isinstance(f, Or):
        out = join[value_vector(f.left, grid, m, cache), value_vector(f.right, grid, m, cache)]
    else:
        raise TypeError(f"not a formula: {f!r}")
    if cache is not None:
        cache[f] = out
    return out


def _sorted_vars(*formulas: Formula, cap: int) -> list[str]:
    names = sorted(set().union(*(variables(f) for f in formulas)))
    if len(names) > cap:
        raise TooManyVariables(f"{len(names)} variables exceed cap {cap}")
    return names


def _valuation_at(k: int, names: Sequence[str], m: LogicMatrix) -> dict[str, str]:
    n = len(m.values)
    out = {}
    for i, name in enumerate(names):
        out[name] = m.values[(k // n ** (len(names) - 1 - i)) % n]
    return out


def decide_consequence(s: Sequent, m: LogicMatrix,
                       cap: int = DEFAULT_VARIABLE_CAP) -> Verdict:
    """Designation preservation over every valuation; first countermodel wins."""
    names = _sorted_vars(s.lhs, s.rhs, cap=cap)
    grid = valuation_grid(names, m)
    desig = m.arrays[3]
    cache: dict = {}
    bad = desig[value_vector(s.lhs, grid, m, cache)] & ~desig[value_vector(s.rhs, grid, m, cache)]
    if not bad.any():
        return Verdict(True)
    return Verdict(False, _valuation_at(int(np.argmax(bad)), names, m))


def is_valid(s: Sequent, m: LogicMatrix) -> bool:
    return decide_consequence(s, m).valid


def truth_table(f: Formula, m: LogicMatrix,
                cap: int = DEFAULT_VARIABLE_CAP) -> list[tuple[dict[str, str], str]]:
    names = _sorted_vars(f, cap=cap)
    vec = value_vector(f, valuation_grid(names, m), m)
    return [(_valuation_at(k, names, m), m.values[int(x)]) for k, x in enumerate(vec)]


def rotate(v: Mapping[str, str], direction: str) -> dict[str, str]:
    table = _ROTATIONS[direction]
    return {name: table[x] for name, x in v.items()}


def collapse(x: str, direction: str) -> TruthValue:
    """Where a formula's value lands after the matching valuation rotation."""
    return _ROTATIONS[direction][x]
