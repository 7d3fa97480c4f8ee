import random

import pytest
from hypothesis import given, settings, strategies as st

from expcut.gen import random_formula
from expcut.parser import ParseError, parse_formula, parse_formulas, parse_term, tokenize
from expcut.syntax import (
    All, App, CaptureError, Ex, Lit, Or, Var, apply_subst, bound_vars, dual, free_vars, instantiate,
    is_positive, rectify, show,
)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_print_parse_roundtrip(seed):
    f = random_formula(random.Random(seed), depth=4, pool=("u", "v"))
    assert parse_formula(show(f), variables=("u", "v")) == f


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_dual_is_involutive_and_flips_polarity(seed):
    f = random_formula(random.Random(seed), depth=4)
    assert dual(dual(f)) == f
    assert is_positive(f) != is_positive(dual(f))


def test_unbound_identifiers_are_constants():
    f = parse_formula("P(x) & ex x Q(x)")
    assert free_vars(f) == set()
    assert f.left.args == (App("x", ()),)


def test_declared_variables_are_free():
    f = parse_formula("P(x) & ex x Q(x,y)", variables=("x", "y"))
    assert free_vars(f) == {"x", "y"}


def test_rectify_renames_clashing_binders():
    f = rectify(parse_formula("ex x (P(x) | ex x Q(x))"))
    assert isinstance(f, Ex) and isinstance(f.body, Or)
    inner = f.body.right
    assert inner.var != "x"
    assert show(f) == "ex x (P(x) | ex %s Q(%s))" % (inner.var, inner.var)


def test_rectify_keeps_rectified_formula():
    f = parse_formula("all x ex y R(x,y)")
    assert rectify(f) is f or rectify(f) == f


def test_substitution_refuses_capture():
    f = parse_formula("ex x Q(x,y)", variables=("y",))
    with pytest.raises(CaptureError):
        apply_subst(f, {"y": Var("x")})


def test_substitution_skips_bound_occurrences():
    f = parse_formula("P(y) & all y R(y,y)", variables=("y",))
    g = apply_subst(f, {"y": App("a", ())})
    assert show(g) == "P(a) & all y R(y,y)"


def test_instantiate():
    f = parse_formula("all x ex y R(x,y)")
    assert show(instantiate(f, parse_term("f(a)"))) == "ex y R(f(a),y)"


def test_dual_of_quantifier():
    f = parse_formula("ex x all y (P(x) & ~Q(y))")
    assert show(dual(f)) == "all x ex y (~P(x) | Q(y))"
    assert isinstance(dual(f), All)


def test_bound_vars():
    assert bound_vars(parse_formula("ex x all y R(x,y) | P(a)")) == {"x", "y"}


def test_formula_document():
    doc = "formula A = ex x (P(x) | ex x Q(x));\nformula B = ~P(a);\n"
    (na, a), (nb, b) = parse_formulas(doc)
    assert (na, nb) == ("A", "B")
    assert len(bound_vars(a)) == 2
    assert b == Lit("P", (App("a", ()),), False)


@pytest.mark.parametrize("text", ["", "P(a", "ex (P(a))", "P(a) &", "~ex x P(x)"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_formula(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse_formula("P(a) &\n  & Q(b)")
    assert err.value.line == 2


def test_tokenizer_skips_comments():
    texts = [t.text for t in tokenize("P(a) # comment\n") if t.kind != "eof"]
    assert texts == ["P", "(", "a", ")"]
