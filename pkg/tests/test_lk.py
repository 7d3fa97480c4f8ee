import json
import random

import pytest

from expcut.cutelim import canonical_key, eliminate_cuts
from expcut.expansion import show_proof
from expcut.gen import random_expansion_proof, random_lk
from expcut.lk import (
    LKNode, expansion_of, lk_check, lk_from_json, lk_to_json, sequentialize, show_lk,
)
from expcut.order import check_proof
from expcut.parser import parse_formula, parse_lk
from expcut.syntax import show

from conftest import FIXTURES, GOOD, load_exp, load_lk


def kinds(violations):
    return {v.kind for v in violations}


def test_translated_lk_proof_matches_cut_example():
    pi = load_lk("cut_example")
    assert lk_check(pi) == []
    text = (FIXTURES / "lk" / "cut_example.lk").read_text()
    assert show_lk(pi) == text
    assert canonical_key(expansion_of(pi)) == canonical_key(load_exp("cut_example"))


def test_generated_lk_proofs_translate():
    rng = random.Random(99)
    cut_free = 0
    for k in range(150):
        pi = random_lk(rng, depth=rng.randint(1, 4), cut_rate=0.0 if k % 4 == 0 else 0.4,
                       formula_depth=rng.randint(1, 3))
        assert lk_check(pi) == [], show_lk(pi)
        p = expansion_of(pi)
        rep = check_proof(p)
        assert rep.ok, rep.lines()
        assert set(p.shallow) == set(pi.concl)
        if pi.is_cut_free():
            cut_free += 1
            assert p.is_cut_free()
    assert cut_free >= 30


@pytest.mark.parametrize("name", GOOD)
def test_corpus_sequentializes(name):
    p = load_exp(name)
    pi = sequentialize(p)
    assert lk_check(pi) == []
    assert pi.concl == frozenset(p.shallow)
    assert pi.is_cut_free() == p.is_cut_free()
    q = expansion_of(pi)
    assert check_proof(q).ok


@pytest.mark.parametrize("name", GOOD)
def test_cut_free_corpus_sequentializes_cut_free(name):
    q, _ = eliminate_cuts(load_exp(name))
    pi = sequentialize(q)
    assert lk_check(pi) == [] and pi.is_cut_free()
    assert pi.concl == frozenset(q.shallow)


def test_random_expansion_proofs_sequentialize():
    rng = random.Random(5)
    for _ in range(60):
        p = random_expansion_proof(rng, max_nodes=40)
        pi = sequentialize(p)
        assert lk_check(pi) == []
        assert pi.concl == frozenset(p.shallow)


def test_json_roundtrip():
    pi = load_lk("cut_example")
    d = lk_to_json(pi)
    assert lk_from_json(json.loads(json.dumps(d))) == pi


def _seq(*fs):
    return frozenset(parse_formula(f, variables=("alpha",)) for f in fs)


def test_init_shape_violation():
    pi = LKNode("init", parse_formula("P(a)"), None, _seq("P(a)", "~P(b)"))
    assert kinds(lk_check(pi)) == {"InitShape"}


def test_eigenvariable_condition():
    # alpha occurs free in the conclusion, so it cannot be the eigenvariable
    concl = _seq("all x P(x)", "~P(alpha)")
    prem = _seq("P(alpha)", "~P(alpha)")
    pi = LKNode("forall", parse_formula("all x P(x)"), "alpha", concl,
                (LKNode("init", parse_formula("P(alpha)", variables=("alpha",)), None, prem),))
    assert "EigenvariableViolation" in kinds(lk_check(pi))


def test_regularity():
    text = """
    and[all x P(x) & all x P(x) | ~P(a)] {ex x ~P(x), all x P(x) & (all x P(x) | ~P(a))} (
      forall[all x P(x); alpha] {ex x ~P(x), all x P(x)} (
        exists[ex x ~P(x); alpha] {ex x ~P(x), P(alpha)} (init[P(alpha)] {ex x ~P(x), P(alpha), ~P(alpha)})
      ),
      forall[all x P(x); alpha] {ex x ~P(x), all x P(x) | ~P(a)} (
        exists[ex x ~P(x); alpha] {ex x ~P(x), P(alpha)} (init[P(alpha)] {ex x ~P(x), P(alpha), ~P(alpha)})
      )
    )
    """
    pi = parse_lk(text)
    assert "RegularityViolation" in kinds(lk_check(pi))


def test_cut_shape_violation():
    good = load_lk("cut_example")
    bad = LKNode("cut", parse_formula("ex x Q(x)"), None, good.concl, good.premises)
    assert "CutShape" in kinds(lk_check(bad))


def test_show_or_init():
    pi = load_lk("or_init")
    assert lk_check(pi) == []
    assert show_proof(expansion_of(pi)) == "tree ~P(a);\ntree P(a) | P(a);\n"
    assert sorted(show(f) for f in pi.concl) == ["P(a) | P(a)", "~P(a)"]
