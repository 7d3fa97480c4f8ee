import random

import pytest

from expcut.expansion import (
    AllNode, ExNode, Merge, Proof, deep, eigenvariables, expansions, nodes, shallow, show_proof,
)
from expcut.gen import random_formula, random_term, random_tree
from expcut.order import check_proof, dominators, rank
from expcut.parser import parse_proof
from expcut.rewrite import (
    MergeError, admissible, all_merge_normal_forms, canonical, compose_pred, has_merge_nodes, merge_measure,
    merge_normalize, merge_proofs, merge_step, subst_tree,
)
from expcut.syntax import Var, VarSupply, apply_subst, bound_vars, free_vars
from expcut.taut import equivalent

from conftest import FIXTURES, load_exp, load_merge

POOL = ("u", "v")


def random_case(rng):
    """A random tree and a substitution admissible for it."""
    while True:
        f = random_formula(rng, depth=rng.randint(2, 4), pool=POOL)
        supply = VarSupply(bound_vars(f) | free_vars(f) | set(POOL))
        e = random_tree(rng, f, supply, pool=POOL, width=3)
        evs = eigenvariables(e)
        sigma = {}
        for x in POOL:
            if rng.random() < 0.7:
                sigma[x] = random_term(rng, list(POOL) + evs, depth=0)
        for a in evs:
            if rng.random() < 0.3:
                sigma[a] = Var(supply.fresh("r"))
        ok, _ = admissible(Proof((), (e,)), sigma)
        if ok and sigma:
            return e, sigma


def _merges(e):
    return sum(1 for n in nodes(e) if isinstance(n, Merge))


def test_substitution_commutes_on_random_trees():
    rng = random.Random(20161)
    merged = 0
    for _ in range(400):
        e, sigma = random_case(rng)
        es, pred_s = subst_tree(e, sigma)
        # shallow formula commutes exactly
        assert shallow(es) == apply_subst(shallow(e), sigma)
        # deep formula commutes up to equivalence
        assert equivalent(deep(es), apply_subst(deep(e), sigma)), show_proof(Proof((), (e,)))
        merged += _merges(es) > 0
        q, trace = merge_normalize(Proof((), (es,)), check_measure=True)
        assert not has_merge_nodes(q)
        maps = [pred_s] + trace.maps()
        before = {x.id: x for x in expansions(e)}
        dom0 = dominators(Proof((), (e,)))
        dom1 = dominators(q)
        after = list(expansions(q.trees[0]))
        for v in after:
            for v0 in compose_pred(maps, v.id):
                assert rank(before[v0]) == rank(v)
        # merged instances have several predecessors, so dominance is compared set-wise
        for v in after:
            pv = compose_pred(maps, v.id)
            for w in after:
                pw = compose_pred(maps, w.id)
                if v.id in dom1[w.id]:
                    assert all(any(v0 in dom0[w0] for v0 in pv) for w0 in pw)
                else:
                    assert not any(v0 in dom0[w0] for v0 in pv for w0 in pw)
    assert merged >= 15  # enough cases exercise merging


def test_inadmissible_substitution_rejected():
    p = parse_proof("vars u; tree ex x all y R(x,y) [+u all y R(u,y) [+^beta R(u,beta)]];")
    # the instance u dominates the expansion of beta, so u may not become beta
    ok, why = admissible(p, {"u": Var("beta")})
    assert not ok and why.startswith("(b)")
    assert admissible(load_exp("cut_example"), {"alpha": Var("gamma")})[0]
    p = load_exp("cut_example")
    ok, why = admissible(p, {"gamma": parse_proof("tree P(f(a));").trees[0].lit.args[0]})
    assert not ok and why.startswith("(a)")


def test_substitution_merges_instances():
    p = parse_proof("vars u; tree ex x P(x) [+u P(u) +a P(a)];")
    es, pred = subst_tree(p.trees[0], {"u": parse_proof("tree P(a);").trees[0].lit.args[0]})
    assert isinstance(es, ExNode) and len(es.insts) == 1
    assert isinstance(es.insts[0].child, Merge)
    assert len(pred[es.insts[0].id]) == 2


MERGE_FIXTURES = sorted(p.stem for p in (FIXTURES / "merge").glob("*.exp") if p.stem != "subst_example")


def test_subst_exampleitution_example():
    e = load_merge("subst_example").trees[0]
    es, _ = subst_tree(e, {"alpha": parse_proof("tree P(c);").trees[0].lit.args[0]})
    assert _merges(es) == 1
    q, _ = merge_normalize(Proof((), (es,)), check_measure=True)
    r, _ = merge_normalize(load_merge("subst_merged"), check_measure=True)
    assert canonical(q) == canonical(r)
    assert not has_merge_nodes(q)


@pytest.mark.parametrize("name", MERGE_FIXTURES)
def test_merge_normal_form_unique(name):
    p = load_merge(name)
    count = sum(_merges(e) for e in p.components())
    assert 1 <= count <= 3
    forms = all_merge_normal_forms(p)
    assert len(forms) == 1
    q, trace = merge_normalize(p, check_measure=True)
    assert not has_merge_nodes(q)
    assert canonical(q) in forms


@pytest.mark.parametrize("name", MERGE_FIXTURES)
def test_merge_measure_decreases(name):
    p = load_merge(name)
    while True:
        m = merge_measure(p)
        nxt = merge_step(p)
        if nxt is None:
            break
        p = nxt[0]
        assert merge_measure(p) < m


def test_three_way_normal_form():
    q, _ = merge_normalize(load_merge("three_way"))
    assert show_proof(q) == (
        "tree all x ex y Q(x,y) [+^u ex y Q(u,y) [+u Q(u,u) +a Q(u,a) +b Q(u,b)]];\n"
        "tree ex x (P(x) | P(x)) [+a P(a) | P(a)];\n"
    )


def test_eigenvariables_identified():
    q, trace = merge_normalize(load_merge("eigen_unify"))
    evs = q.eigenvariables()
    assert len(evs) == len(set(evs))
    assert any(s.renaming for s in trace.steps)


def test_merge_of_two_proofs():
    q = merge_proofs(load_exp("merge_a"), load_exp("merge_b"))
    assert show_proof(q) == "tree ex x P(x) [+a P(a) +b P(b)];\ntree ~P(a);\ntree ~P(b);\n"
    assert check_proof(q).ok


def test_merge_rejects_eigenvariable_clash():
    p = parse_proof("tree all x P(x) [+^alpha P(alpha)];")
    r = parse_proof("tree all x Q(x) [+^alpha Q(alpha)];")
    with pytest.raises(MergeError):
        merge_proofs(p, r)
    q = merge_proofs(p, r, rename=True)
    assert len(set(q.eigenvariables())) == 2


def test_all_node_merge_renames_globally():
    p = parse_proof("""
        tree (all x P(x) [+^alpha P(alpha)]) ⊔ (all x P(x) [+^beta P(beta)]);
        tree ex y ~P(y) [+beta ~P(beta)];
    """)
    q, _ = merge_normalize(p)
    (a,) = [n for n in nodes(q.trees[0]) if isinstance(n, AllNode)]
    assert str(q.trees[1].insts[0].term) == a.eigen
