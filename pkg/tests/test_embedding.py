import itertools
import random

import pytest
from hypothesis import given, strategies as st

from cnl4.embedding import (CAnd, CNot, COr, CVar, FormulaSpace, _four_valued, _two_valued,
                            boolean_4q, classical_consequence_2v, classical_consequence_4q,
                            four_way, parse_classical, random_classical, render_classical,
                            rotation_failures, translate, verify_embedding)
from cnl4.formula import MalformedFormula, parse_formula, render_formula
from cnl4.matrix import T, collapse, evaluate, preset_matrix, rotate, valuation_grid

p, q = CVar("p"), CVar("q")


def classical(max_leaves=8):
    return st.recursive(
        st.sampled_from("pqr").map(CVar),
        lambda sub: st.one_of(sub.map(CNot), st.tuples(sub, sub).map(lambda t: CAnd(*t)),
                              st.tuples(sub, sub).map(lambda t: COr(*t))),
        max_leaves=max_leaves,
    )


def test_parse_classical():
    assert parse_classical("!(p & !q)") == CNot(CAnd(p, CNot(q)))
    assert parse_classical("p | q & p") == COr(p, CAnd(q, p))
    with pytest.raises(MalformedFormula):
        parse_classical("~p")


@given(classical())
def test_classical_round_trip(a):
    assert parse_classical(render_classical(a)) == a


@pytest.mark.parametrize("src, out", [
    ("!p", "~~p"),
    ("!(p & !q)", "~~(p & ~~q)"),
    ("p | q", "p | q"),
    ("!!p", "~~~~p"),
])
def test_translate(src, out):
    assert render_formula(translate(parse_classical(src))) == out


@given(classical())
def test_translate_doubles_negations(a):
    src, out = render_classical(a), render_formula(translate(a))
    assert out.count("~") == 2 * src.count("!")
    assert out.replace("~~", "!") == src


@pytest.mark.parametrize("a, b, expected", [
    ("p", "p", True),
    ("p", "q", False),
    ("p & !p", "q", True),
    ("q", "p | !p", True),
    ("p | !p", "q", False),
    ("!(p & q)", "!p | !q", True),
    ("!!p", "p", True),
])
def test_oracles(a, b, expected):
    a, b = parse_classical(a), parse_classical(b)
    assert classical_consequence_2v(a, b) is expected
    assert classical_consequence_4q(a, b) is expected
    assert four_way(a, b) == (expected,) * 4


def test_boolean_4q_is_boolean():
    m = boolean_4q()
    top, bot = T, m.neg[T]
    for x in m.values:
        assert m.meet[x][m.neg[x]] == bot and m.join[x][m.neg[x]] == top
        assert m.neg[m.neg[x]] == x


def test_verify_small_is_clean():
    report = verify_embedding(1, 2)
    assert report.ok and report.discrepancies == []
    assert report.pairs_checked == len(FormulaSpace(["p"], 2, [])) ** 2


def test_identity_negation_breaks_embedding():
    broken = [preset_matrix(n).with_neg({x: x for x in preset_matrix(n).values})
              for n in ("4q", "4lq")]
    report = verify_embedding(1, 2, matrices=broken)
    assert report.discrepancy_count > 0
    a, b, verdicts = report.discrepancies[0]
    assert verdicts[:2] != verdicts[2:]
    assert four_way(a, b, broken) == verdicts


def test_sampled_mode():
    first = verify_embedding(2, 2, sample=200, seed=5)
    again = verify_embedding(2, 2, sample=200, seed=5)
    assert first.mode == "sampled" and first.pairs_checked == 200
    assert first.ok and first == again
    with pytest.raises(ValueError):
        verify_embedding(2, 2, sample=10)


def test_sampling_draws_from_the_enumerated_space():
    space = FormulaSpace(["p", "q"], 2, [])
    members = set(space.formulas)
    rng = random.Random(0)
    draws = [random_classical(rng, ["p", "q"], 2) for _ in range(3000)]
    # 302 formulas; 3000 uniform draws miss one with probability about 1e-11
    assert len(members) == 302
    assert set(draws) == members


def test_sampled_mode_finds_broken_negation():
    broken = [preset_matrix(n).with_neg({x: x for x in preset_matrix(n).values})
              for n in ("4q", "4lq")]
    report = verify_embedding(2, 2, sample=300, seed=1, matrices=broken)
    assert report.discrepancy_count > 0
    for a, b, verdicts in report.discrepancies:
        assert four_way(a, b, broken) == verdicts


def test_formula_space_order_and_count():
    space = FormulaSpace(["p", "q"], 1, [])
    # 2 atoms, 2 negations, 4 conjunctions, 4 disjunctions
    assert len(space) == 12
    rendered = [render_classical(f) for f in space.formulas]
    assert rendered[:4] == ["p", "q", "!p", "!q"]
    assert len(set(rendered)) == len(rendered)


def test_formula_space_values_match_direct_evaluation():
    names = ["p", "q"]
    m = preset_matrix("4lq")
    space = FormulaSpace(names, 2, [_two_valued(names), _four_valued(names, m, 2)])
    rows = list(itertools.product(m.values, repeat=2))
    for k in range(0, len(space), 37):
        a = space.formulas[k]
        for r, vals in enumerate(rows):
            v = dict(zip(names, vals))
            assert m.values[space.values[1][k, r]] == evaluate(translate(a), v, m)
        for r, bits in enumerate(itertools.product((True, False), repeat=2)):
            f = render_classical(a).replace("!", " not ").replace("&", " and ").replace("|", " or ")
            assert bool(space.values[0][k, r]) == eval(f, {}, dict(zip(names, bits)))


def test_class_verdicts_match_direct_calls():
    """Exhaustive route's class decision agrees with direct oracle calls."""
    names = ["p", "q"]
    space = FormulaSpace(names, 2, [])
    rng = random.Random(11)
    for _ in range(150):
        a, b = rng.choice(space.formulas), rng.choice(space.formulas)
        verdicts = four_way(a, b)
        assert len(set(verdicts)) == 1, (render_classical(a), render_classical(b))


def test_three_variables_depth_two_exhaustive():
    assert verify_embedding(3, 2).ok


# -- rotations ---------------------------------------------------------------

@pytest.mark.parametrize("name", ["4q", "4lq"])
def test_rotation_plus(name):
    count, witnesses = rotation_failures(2, 2, preset_matrix(name), "plus")
    assert count == 0 and witnesses == []


def test_rotation_minus_in_diamond():
    assert rotation_failures(2, 2, preset_matrix("4q"), "minus")[0] == 0


def test_rotation_minus_in_chain_has_witness():
    m = preset_matrix("4lq")
    count, witnesses = rotation_failures(2, 1, m, "minus")
    assert count > 0
    for a, v, value, rotated in witnesses:
        f = translate(a)
        assert evaluate(f, v, m) == value
        assert evaluate(f, rotate(v, "minus"), m) == rotated
        assert collapse(value, "minus") != rotated


@pytest.mark.parametrize("name, direction", [("4q", "plus"), ("4q", "minus"),
                                             ("4lq", "plus")])
def test_rotation_direct_route(name, direction):
    """Independent check with ``evaluate`` on a slice of formulas."""
    m = preset_matrix(name)
    names = ["p", "q"]
    space = FormulaSpace(names, 2, [])
    for a in space.formulas[::23]:
        f = translate(a)
        for vals in itertools.product(m.values, repeat=2):
            v = dict(zip(names, vals))
            assert evaluate(f, rotate(v, direction), m) == collapse(evaluate(f, v, m), direction)


def test_valuation_grid_shape():
    grid = valuation_grid(["p", "q"], preset_matrix("4q"))
    assert grid["p"].shape == (16,) and grid["q"][:4].tolist() == [0, 1, 2, 3]


def test_parse_formula_rejects_classical_bang():
    with pytest.raises(MalformedFormula):
        parse_formula("!p")
