import pytest
from hypothesis import given, strategies as st

from cnl4.formula import (And, MalformedFormula, MalformedSequent, Meta, Neg, Or, Sequent,
                          UnboundMetavariable, UniverseTooLarge, Var, apply_substitution,
                          match_schema, match_sequent, parse_formula, parse_pattern,
                          parse_sequent, render_formula, render_sequent, subformula_closure,
                          subformulas)

p, q, r = Var("p"), Var("q"), Var("r")

names = st.sampled_from(["p", "q", "r", "x1", "long_name"])


def formulas(max_depth=8):
    return st.recursive(
        names.map(Var),
        lambda sub: st.one_of(sub.map(Neg), st.tuples(sub, sub).map(lambda t: And(*t)),
                              st.tuples(sub, sub).map(lambda t: Or(*t))),
        max_leaves=max_depth * 2,
    )


@pytest.mark.parametrize("text, expected", [
    ("p & ~~p", And(p, Neg(Neg(p)))),
    ("~p | q & r", Or(Neg(p), And(q, r))),
    ("p & q & r", And(And(p, q), r)),
    ("p | (q | r)", Or(p, Or(q, r))),
    ("~(p | q)", Neg(Or(p, q))),
    ("  x1_a  ", Var("x1_a")),
])
def test_parse_formula(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize("text", ["p &", "", "(p", "p q", "P", "p & |q", "p |- q", "!p"])
def test_parse_formula_rejects(text):
    with pytest.raises(MalformedFormula):
        parse_formula(text)


def test_malformed_position():
    with pytest.raises(MalformedFormula) as exc:
        parse_formula("p & ")
    assert exc.value.position == 4


@pytest.mark.parametrize("f, text", [
    (And(p, Or(q, r)), "p & (q | r)"),
    (Neg(Neg(p)), "~~p"),
    (Var("x1"), "x1"),
    (Or(Or(p, q), r), "p | q | r"),
    (And(p, And(q, r)), "p & (q & r)"),
    (Neg(And(p, q)), "~(p & q)"),
    (Or(And(p, q), And(p, r)), "p & q | p & r"),
])
def test_render_formula(f, text):
    assert render_formula(f) == text


def test_render_unicode():
    assert render_sequent(Sequent(Neg(And(p, q)), Or(p, q)), unicode=True) == "∼(p ∧ q) ⊢ p ∨ q"


@given(formulas())
def test_round_trip(f):
    assert parse_formula(render_formula(f)) == f


def test_parse_sequent():
    assert parse_sequent("p & q |- p") == Sequent(And(p, q), p)


@pytest.mark.parametrize("text", ["p & q", "p |- q |- r", "p |- ", "|- p"])
def test_parse_sequent_rejects(text):
    with pytest.raises(MalformedSequent):
        parse_sequent(text)


def test_match_conjunction():
    f = parse_formula("q & (r | q)")
    assert match_schema(f, parse_pattern("A & B")) == {"A": q, "B": Or(r, q)}


def test_match_sequent_against_a5():
    lhs, rhs = parse_pattern("A"), parse_pattern("~~~~A")
    assert match_sequent(parse_sequent("p |- ~~~~p"), lhs, rhs) == {"A": p}
    assert match_sequent(parse_sequent("p |- ~~~~q"), lhs, rhs) is None


def test_match_respects_partial():
    pat = parse_pattern("A & B")
    assert match_schema(And(p, q), pat, {"A": q}) is None
    assert match_schema(And(p, q), pat, {"A": p}) == {"A": p, "B": q}


def test_match_literal_variables_in_pattern():
    assert match_schema(And(p, q), And(Meta("A"), Var("q"))) == {"A": p}
    assert match_schema(And(p, r), And(Meta("A"), Var("q"))) is None


@pytest.mark.parametrize("pat, sigma, text", [
    ("A & B", {"A": p, "B": Neg(q)}, "p & ~q"),
    ("A", {"A": Or(p, q)}, "p | q"),
])
def test_apply_substitution(pat, sigma, text):
    assert render_formula(apply_substitution(parse_pattern(pat), sigma)) == text


def test_apply_substitution_unbound():
    with pytest.raises(UnboundMetavariable):
        apply_substitution(parse_pattern("A & B"), {"A": p})


PATTERNS = [parse_pattern(t) for t in
            ["A", "A & B", "~(A | B)", "A & ~~A", "~A & ~B", "A & (B | C)", "~~~~A"]]


@given(formulas(6), st.sampled_from(PATTERNS))
def test_match_soundness(f, pat):
    sigma = match_schema(f, pat)
    if sigma is not None:
        assert apply_substitution(pat, sigma) == f


@given(st.sampled_from(PATTERNS), st.fixed_dictionaries(
    {"A": formulas(4), "B": formulas(4), "C": formulas(4)}))
def test_match_finds_instances_uniquely(pat, sigma):
    f = apply_substitution(pat, sigma)
    found = match_schema(f, pat)
    assert found is not None
    assert all(found[k] == sigma[k] for k in found)
    assert match_schema(f, pat) == found


@pytest.mark.parametrize("seeds, degree, expected", [
    (["p"], 2, ["p", "~p", "~~p"]),
    (["p | q"], 0, ["p", "q", "p | q"]),
    (["p"], 4, ["p", "~p", "~~p", "~~~p", "~~~~p"]),
])
def test_subformula_closure(seeds, degree, expected):
    out = subformula_closure([parse_formula(s) for s in seeds], degree)
    assert [render_formula(f) for f in out] == expected


def test_subformula_closure_combine():
    out = subformula_closure([p, q], 0, combine=True)
    assert len(out) == 2 + 8
    assert And(q, p) in out and Or(p, p) in out


def test_subformula_closure_cap():
    with pytest.raises(UniverseTooLarge):
        subformula_closure([parse_formula("p & q | r & ~p")], 4, combine=True, cap=100)


@given(st.lists(formulas(4), min_size=1, max_size=3), st.integers(0, 3), st.booleans())
def test_closure_monotone_and_subformula_closed(seeds, degree, combine):
    out = set(subformula_closure(seeds, degree, combine))
    assert set(seeds) <= out
    for f in out:
        assert set(subformulas(f)) <= out
