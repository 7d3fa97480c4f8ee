import pytest

from expcut.expansion import AllNode, expansions
from expcut.order import (
    check_proof, critical_max_set, degrees, dependency_edges, domination_rank, dual_expansions, find_cycle,
    order_profile, proof_rank, rank,
)
from expcut.parser import parse_formula, parse_proof
from expcut.syntax import show

from conftest import GOOD, load_exp

CUT_C = "cut:ex x all y (P(x) & ~Q(f(y)))"

CUT_EXAMPLE_EDGES = {
    ("∀gamma", "∃f(gamma)", 1), ("∀beta", "∃beta", 1), ("∀alpha", "∃alpha", 1),
    ("∃a", "∀gamma", 2), ("∀beta", "∃alpha", 2), ("∀alpha", "∃beta", 2),
    (CUT_C, "∃a", 3), (CUT_C, "∀gamma", 3), (CUT_C, "∀beta", 3), (CUT_C, "∃alpha", 3),
}


def test_cut_example_shallow_and_deep(cut_example):
    from expcut.expansion import deep_sequent
    assert [show(f) for f in cut_example.shallow] == ["all y ex x (P(x) & ~Q(f(y)))", "~P(a) | ex z Q(z)"]
    names = ("alpha", "beta", "gamma")
    expected = [
        "(P(a) & ~Q(f(gamma))) & (~P(beta) | Q(f(alpha)))",
        "P(beta) & ~Q(f(alpha))",
        "~P(a) | Q(f(gamma))",
    ]
    assert set(deep_sequent(cut_example)) == {parse_formula(e, variables=names) for e in expected}


def test_cut_example_dependency_edges(cut_example):
    g = dependency_edges(cut_example)
    assert g.labelled_edges() == CUT_EXAMPLE_EDGES
    assert not any(g.vertices[v].kind == "cut" for (_, v) in g.edges)
    assert find_cycle(g) is None


def test_cut_example_checks(cut_example):
    rep = check_proof(cut_example)
    assert rep.ok, rep.lines()


@pytest.mark.parametrize("name", GOOD)
def test_corpus_proofs_check(name):
    rep = check_proof(load_exp(name))
    assert rep.ok, rep.lines()


def test_broken_example_has_countermodel():
    rep = check_proof(load_exp("cut_example_broken"))
    assert not rep.ok and rep.tautology is False
    assert rep.cycle is None
    assert rep.countermodel["Q(gamma)"] is False


def test_cycle_detected():
    p = parse_proof("""
        tree ex x all y (P(x) | ~P(y)) [+alpha all y (P(alpha) | ~P(y)) [+^alpha P(alpha) | ~P(alpha)]];
    """)
    rep = check_proof(p)
    assert rep.cycle is not None
    assert "∀alpha" in rep.cycle_labels and "∃alpha" in rep.cycle_labels


def test_clause_four_edge():
    p = load_exp("rank_degree")
    g = dependency_edges(p)
    assert ("∀alpha", "cut:ex x Q(alpha,x)", 4) in g.labelled_edges()


def test_dot_output(cut_example):
    dot = dependency_edges(cut_example).to_dot()
    assert dot.startswith("digraph deps {") and dot.rstrip().endswith("}")
    assert dot.count("->") == len(dependency_edges(cut_example).edges)


# expansions of the rank example, left to right and top to bottom
RANK_LAYOUT = [
    (0, "pos", ["∃c", "∀gamma"]),
    (0, "neg", ["∀alpha", "∃c"]),
    (1, "pos", ["∃alpha", "∃c"]),
    (1, "neg", ["∀beta"]),
    (2, "pos", ["∃beta", "∀lambda"]),
    (2, "neg", ["∀delta", "∃c", "∃alpha"]),
]


def _label(x):
    return "∀" + x.eigen if isinstance(x, AllNode) else "∃" + str(x.term)


def rank_example_nodes():
    p = load_exp("rank_degree")
    w = {}
    k = 1
    for ci, side, labels in RANK_LAYOUT:
        c = p.cuts[ci]
        found = {_label(x): x for x in expansions(c.pos if side == "pos" else c.neg)}
        assert sorted(found) == sorted(labels)
        for lab in labels:
            w[k] = found[lab]
            k += 1
    return p, w


def test_rank_degrees():
    _, w = rank_example_nodes()
    assert {i for i in w if rank(w[i]) == 1} == {2, 4, 5, 6, 7, 9, 11, 12}
    assert {j for j in w if rank(w[j]) == 2} == {1, 3, 8, 10}
    for x in w.values():
        assert domination_rank(x) == rank(x)


def test_rank_example_degrees():
    p, w = rank_example_nodes()
    g = dependency_edges(p)
    deg = degrees(g)
    assert (deg[w[9].id], deg[w[8].id], deg[w[7].id], deg[w[3].id]) == (3, 2, 1, 0)
    # w9 has maximal degree among the cut expansions; the cut-free tree is not part of the example
    assert max(deg[x.id] for x in w.values()) == 3
    assert [k for k in w if deg[w[k].id] == 3] == [9]
    assert g.less(w[8].id, w[9].id) and g.less(w[7].id, w[8].id) and g.less(w[3].id, w[7].id)


def test_rank_example_dual_expansions():
    p, w = rank_example_nodes()
    cl = dual_expansions(p)
    assert cl[w[9].id] == {w[11].id, w[12].id}
    assert cl[w[8].id] == {w[10].id} and cl[w[10].id] == {w[8].id}
    assert cl[w[11].id] == {w[9].id} and cl[w[12].id] == {w[9].id}


def test_rank_degree_and_order():
    p, w = rank_example_nodes()
    assert proof_rank(p) == 2
    assert order_profile(p) == {2: 2, 1: 3}
    assert {x.id for x in critical_max_set(p)} == {w[i].id for i in (1, 3, 8, 10)}

