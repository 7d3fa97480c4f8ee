import random

import pytest
from hypothesis import given, settings, strategies as st

from expcut.gen import random_qf_sequent
from expcut.parser import parse_formula
from expcut.syntax import And, Lit, Or, dual
from expcut.taut import check_tautology, dpll, equivalent, evaluate, is_tautology

from truth_table import is_valid, table


def _check(seq):
    res = check_tautology(seq)
    assert res.valid == is_valid(seq)
    if not res.valid:
        assert not any(evaluate(f, res.countermodel) for f in seq)


def test_oracle_on_small_cases():
    a, na = parse_formula("A"), parse_formula("~A")
    assert is_valid([a, na])
    assert not is_valid([a])
    atoms, sat, full = table([parse_formula("A & B")])
    assert atoms == ["A", "B"] and bin(sat).count("1") == 1 and full == 0b1111


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 16))
def test_agrees_with_truth_table(seed, n):
    _check(random_qf_sequent(random.Random(seed), n, size=4))


def _wide(rng, names, depth):
    if depth == 0:
        return Lit(rng.choice(names), (), rng.random() < 0.5)
    return (And if rng.random() < 0.5 else Or)(_wide(rng, names, depth - 1), _wide(rng, names, depth - 1))


@pytest.mark.parametrize("seed", range(12))
def test_sixteen_atom_sequents(seed):
    rng = random.Random(seed)
    names = ["A%d" % k for k in range(16)]
    f = _wide(rng, names, 6)
    g = _wide(rng, names, 5)
    for seq in ([f, dual(f)], [f, g], [f, dual(f) if seed % 2 else g, g]):
        _check(seq)


def test_excluded_middle_over_sixteen_atoms():
    names = ["A%d" % k for k in range(16)]
    f = Lit(names[0], ())
    for n in names[1:]:
        f = Or(f, Lit(n, ())) if len(n) % 2 else And(f, Lit(n, ()))
    assert is_tautology([f, dual(f)])
    assert is_valid([f, dual(f)])


def test_countermodel_reported():
    res = check_tautology([parse_formula("P(a) | ~P(b)")])
    assert not res.valid
    assert res.countermodel == {"P(a)": False, "P(b)": True}


def test_empty_sequent_is_not_valid():
    assert not is_tautology([])


def test_rejects_quantifiers():
    with pytest.raises(ValueError):
        check_tautology([parse_formula("ex x P(x)")])


def test_equivalent():
    assert equivalent(parse_formula("A & (B | C)"), parse_formula("A & B | A & C"))
    assert not equivalent(parse_formula("A | B"), parse_formula("A & B"))


def test_dpll_unsat_and_sat():
    assert dpll([frozenset([1]), frozenset([-1])], 1) is None
    model = dpll([frozenset([1, 2]), frozenset([-1])], 2)
    assert model[1] is False and model[2] is True
