"""Substitution on expansion trees, the merge reduction system and the ∪ operation.

Every rewrite returns, besides its result, a predecessor map
``new id -> frozenset(old ids)``.  Ids missing from a map are their own
predecessors, so maps compose by walking a trace backwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

from .expansion import (
    AllNode, Bin, Cut, ExNode, Inst, Leaf, Merge, Proof, eigenvariables, expansions, new_id,
    nodes,
)
from .syntax import Var, apply_subst, name_key, show, subst_term, term_vars


class SubstitutionError(ValueError):
    pass


class MergeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# predecessor bookkeeping


@dataclass
class Step:
    rule: str  # "1".."4" for node rules, "trees"/"cuts" for component merges
    redex: int
    produced: tuple = ()
    pred: dict = field(default_factory=dict)
    renaming: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"rule": self.rule, "redex": self.redex, "produced": list(self.produced),
                "renaming": dict(self.renaming)}


@dataclass
class Trace:
    steps: list = field(default_factory=list)

    def append(self, step: Step):
        self.steps.append(step)

    def maps(self) -> list:
        return [s.pred for s in self.steps]

    def pred(self, i: int) -> frozenset:
        return compose_pred(self.maps(), i)

    def to_json(self) -> list:
        return [s.to_json() for s in self.steps]


def compose_pred(maps, i) -> frozenset:
    """Predecessors of ``i`` through a sequence of maps (oldest first)."""
    ids = {i}
    for m in reversed(list(maps)):
        nxt = set()
        for x in ids:
            nxt |= m.get(x, {x})
        ids = nxt
    return frozenset(ids)


# ---------------------------------------------------------------------------
# substitution


def _new(old, copy, pred, make):
    """Build a node that replaces ``old``; keeps the id unless copying."""
    if copy:
        n = make(new_id())
        pred[n.id] = frozenset([old.id])
    else:
        n = make(old.id)
    return n


def _subst(e, sigma, copy, pred):
    if isinstance(e, Leaf):
        lit = apply_subst(e.lit, sigma)
        if not copy and lit == e.lit:
            return e
        return _new(e, copy, pred, lambda i: Leaf(lit, id=i))
    if isinstance(e, (Bin, Merge)):
        l = _subst(e.left, sigma, copy, pred)
        r = _subst(e.right, sigma, copy, pred)
        if not copy and l is e.left and r is e.right:
            return e
        if isinstance(e, Bin):
            return _new(e, copy, pred, lambda i: Bin(e.op, l, r, id=i))
        return _new(e, copy, pred, lambda i: Merge(l, r, id=i))
    if isinstance(e, AllNode):
        img = sigma.get(e.eigen, Var(e.eigen))
        if not isinstance(img, Var):
            raise SubstitutionError("eigenvariable %s mapped to non-variable %s" % (e.eigen, img))
        sh = apply_subst(e.shallow, sigma)
        child = _subst(e.child, sigma, copy, pred)
        if not copy and child is e.child and img.name == e.eigen and sh == e.shallow:
            return e
        return _new(e, copy, pred, lambda i: AllNode(sh, img.name, child, id=i))
    if isinstance(e, ExNode):
        sh = apply_subst(e.shallow, sigma)
        groups = {}
        for inst in e.insts:
            s = subst_term(inst.term, sigma)
            groups.setdefault(s, []).append((inst, _subst(inst.child, sigma, copy, pred)))
        insts = []
        same = not copy and sh == e.shallow
        for s, members in groups.items():
            if len(members) == 1:
                inst, child = members[0]
                if not copy and s == inst.term and child is inst.child:
                    insts.append(inst)
                    continue
                same = False
                insts.append(_new(inst, copy, pred, lambda i: Inst(s, child, id=i)))
            else:
                same = False
                child = reduce(lambda a, b: Merge(a, b), [c for _, c in members])
                ni = Inst(s, child)
                pred[ni.id] = frozenset(m.id for m, _ in members)
                insts.append(ni)
        if same:
            return e
        return _new(e, copy, pred, lambda i: ExNode(sh, tuple(insts), id=i))
    raise TypeError(e)


def subst_tree(e, sigma, copy: bool = False):
    """``(eσ, pred_s)``.  With ``copy`` every node is fresh, otherwise untouched
    subtrees are shared and rebuilt nodes keep their ids."""
    pred = {}
    if not sigma and not copy:
        return e, pred
    return _subst(e, dict(sigma or {}), copy, pred), pred


def subst_proof(p: Proof, sigma, copy: bool = False):
    pred = {}
    sigma = dict(sigma or {})
    if not sigma and not copy:
        return p, pred
    cuts = []
    for c in p.cuts:
        a = _subst(c.pos, sigma, copy, pred)
        b = _subst(c.neg, sigma, copy, pred)
        if not copy and a is c.pos and b is c.neg:
            cuts.append(c)
        else:
            cuts.append(_new(c, copy, pred, lambda i: Cut(a, b, id=i)))
    trees = tuple(_subst(t, sigma, copy, pred) for t in p.trees)
    return Proof(tuple(cuts), trees), pred


def copy_proof(p: Proof):
    return subst_proof(p, {}, copy=True)


def admissible(p: Proof, sigma):
    """``(True, "")`` or ``(False, reason)``."""
    from .order import dependency_edges

    owner = {}
    for e in p.components():
        for x in expansions(e):
            if isinstance(x, AllNode):
                owner[x.eigen] = x.id
    for alpha in owner:
        if alpha in sigma and not isinstance(sigma[alpha], Var):
            return False, "(a) eigenvariable %s is mapped to the non-variable %s" % (alpha, sigma[alpha])
    g = None
    for alpha, t in sigma.items():
        for beta in term_vars(t):
            if beta not in owner:
                continue
            q = owner[beta]
            for e in p.components():
                for x in expansions(e):
                    if isinstance(x, Inst) and alpha in term_vars(x.term):
                        g = g or dependency_edges(p, allow_merges=True)
                        if g.less(x.id, q):
                            return False, "(b) instance %s lies below the expansion of %s" % (x.term, beta)
    return True, ""


# ---------------------------------------------------------------------------
# merge reduction


def tree_size(e) -> int:
    n = 0
    for x in nodes(e):
        n += 1
        if isinstance(x, ExNode):
            n += len(x.insts)
    return n


def merge_weight(p: Proof) -> int:
    return sum(tree_size(m) - 1 for e in p.components() for m in nodes(e) if isinstance(m, Merge))


def merge_measure(p: Proof) -> tuple:
    """Lexicographic termination measure of the merge reduction."""
    ev = set(p.eigenvariables())
    return (len(ev), len(p.cuts) + len(p.trees), merge_weight(p))


def _replace(e, tid, new):
    if e.id == tid:
        return new
    if isinstance(e, (Bin, Merge)):
        l = _replace(e.left, tid, new)
        r = _replace(e.right, tid, new) if l is e.left else e.right
        if l is e.left and r is e.right:
            return e
        return Bin(e.op, l, r, id=e.id) if isinstance(e, Bin) else Merge(l, r, id=e.id)
    if isinstance(e, AllNode):
        c = _replace(e.child, tid, new)
        return e if c is e.child else AllNode(e.shallow, e.eigen, c, id=e.id)
    if isinstance(e, ExNode):
        insts = list(e.insts)
        for k, inst in enumerate(insts):
            c = _replace(inst.child, tid, new)
            if c is not inst.child:
                insts[k] = Inst(inst.term, c, id=inst.id)
                return ExNode(e.shallow, tuple(insts), id=e.id)
        return e
    return e


def _innermost(e):
    """Leftmost-innermost merge redex of ``e`` in post-order, or ``None``."""
    if isinstance(e, (Bin, Merge)):
        r = _innermost(e.left) or _innermost(e.right)
        if r is not None:
            return r
        if isinstance(e, Merge) and not isinstance(e.left, Merge) and not isinstance(e.right, Merge):
            return e
        return None
    if isinstance(e, AllNode):
        return _innermost(e.child)
    if isinstance(e, ExNode):
        for i in e.insts:
            r = _innermost(i.child)
            if r is not None:
                return r
    return None


def _redexes(e, out):
    for m in nodes(e):
        if isinstance(m, Merge) and not isinstance(m.left, Merge) and not isinstance(m.right, Merge):
            out.append(m)
    return out


def contract(m: Merge):
    """One rule application at ``m``: ``(replacement, rule, pred, renaming)``."""
    a, b = m.left, m.right
    if a.shallow != b.shallow:
        raise MergeError("merge of %s and %s" % (show(a.shallow), show(b.shallow)))
    pred = {}
    if isinstance(a, Leaf) and isinstance(b, Leaf):
        new = Leaf(a.lit)
        rule, ren = "1", {}
    elif isinstance(a, Bin) and isinstance(b, Bin) and a.op == b.op:
        new = Bin(a.op, Merge(a.left, b.left), Merge(a.right, b.right))
        rule, ren = "2", {}
    elif isinstance(a, AllNode) and isinstance(b, AllNode):
        keep = min(a.eigen, b.eigen, key=name_key)
        drop = b.eigen if keep == a.eigen else a.eigen
        new = AllNode(a.shallow, keep, Merge(a.child, b.child))
        rule, ren = "3", ({drop: keep} if drop != keep else {})
    elif isinstance(a, ExNode) and isinstance(b, ExNode):
        right = {i.term: i for i in b.insts}
        insts = []
        for i in a.insts:
            j = right.pop(i.term, None)
            if j is None:
                insts.append(i)
            else:
                ni = Inst(i.term, Merge(i.child, j.child))
                pred[ni.id] = frozenset([i.id, j.id])
                insts.append(ni)
        insts.extend(right.values())
        new = ExNode(a.shallow, tuple(insts))
        rule, ren = "4", {}
    else:
        raise MergeError("cannot merge %s with %s" % (type(a).__name__, type(b).__name__))
    pred[new.id] = frozenset([a.id, b.id])
    return new, rule, pred, ren


def _component_redexes(p: Proof) -> list:
    out = []
    for i, s in enumerate(p.trees):
        for j in range(i + 1, len(p.trees)):
            if p.trees[j].shallow == s.shallow:
                out.append(("trees", i, j))
    for i, c in enumerate(p.cuts):
        for j in range(i + 1, len(p.cuts)):
            d = p.cuts[j]
            if d.pos.shallow == c.pos.shallow and d.neg.shallow == c.neg.shallow:
                out.append(("cuts", i, j))
    return out


def redexes(p: Proof) -> list:
    """Every applicable merge step, as opaque handles for :func:`apply_redex`."""
    out = list(_component_redexes(p))
    for e in p.components():
        out.extend(("node", m.id) for m in _redexes(e, []))
    return out


def apply_redex(p: Proof, handle):
    kind = handle[0]
    if kind == "trees":
        _, i, j = handle
        a, b = p.trees[i], p.trees[j]
        m = Merge(a, b)
        trees = list(p.trees)
        trees[i] = m
        del trees[j]
        return Proof(p.cuts, tuple(trees)), Step("trees", a.id, (m.id,), {m.id: frozenset([a.id, b.id])})
    if kind == "cuts":
        _, i, j = handle
        c, d = p.cuts[i], p.cuts[j]
        nc = Cut(Merge(c.pos, d.pos), Merge(c.neg, d.neg))
        cuts = list(p.cuts)
        cuts[i] = nc
        del cuts[j]
        return Proof(tuple(cuts), p.trees), Step("cuts", c.id, (nc.id,), {nc.id: frozenset([c.id, d.id])})
    _, mid = handle
    target = next((m for e in p.components() for m in nodes(e) if m.id == mid), None)
    if target is None:
        raise KeyError(mid)
    return _apply_node(p, target)


def _apply_node(p: Proof, target: Merge):
    mid = target.id
    new, rule, pred, ren = contract(target)
    q = _replace_in_proof(p, mid, new)
    if ren:
        (drop, keep), = ren.items()
        q, spred = subst_proof(q, {drop: Var(keep)})
        pred = _chain(pred, spred)
    return q, Step(rule, mid, (new.id,), pred, ren)


def _chain(first: dict, second: dict) -> dict:
    """Predecessor map of doing ``first`` then ``second``."""
    out = dict(first)
    for k, v in second.items():
        s = set()
        for x in v:
            s |= first.get(x, {x})
        out[k] = frozenset(s)
    return out


def _replace_in_proof(p: Proof, tid, new) -> Proof:
    cuts = []
    for c in p.cuts:
        a = _replace(c.pos, tid, new)
        b = _replace(c.neg, tid, new)
        cuts.append(c if a is c.pos and b is c.neg else Cut(a, b, id=c.id))
    trees = tuple(_replace(t, tid, new) for t in p.trees)
    return Proof(tuple(cuts), trees)


def merge_step(p: Proof):
    """One merge step in the fixed strategy, or ``None`` at a normal form."""
    comp = _first_component_redex(p)
    if comp:
        return apply_redex(p, comp)
    for e in p.components():
        m = _innermost(e)
        if m is not None:
            return _apply_node(p, m)
    return None


def _first_component_redex(p: Proof):
    seen = {}
    for j, t in enumerate(p.trees):
        if t.shallow in seen:
            return ("trees", seen[t.shallow], j)
        seen[t.shallow] = j
    seen = {}
    for j, c in enumerate(p.cuts):
        key = (c.pos.shallow, c.neg.shallow)
        if key in seen:
            return ("cuts", seen[key], j)
        seen[key] = j
    return None


def merge_normalize(p: Proof, trace: Optional[Trace] = None, check_measure: bool = False):
    """Merge normal form of ``p`` and the trace of steps leading to it."""
    trace = trace if trace is not None else Trace()
    measure = merge_measure(p) if check_measure else None
    while True:
        r = merge_step(p)
        if r is None:
            return p, trace
        p, step = r
        trace.append(step)
        if check_measure:
            m = merge_measure(p)
            if not m < measure:
                raise AssertionError("merge measure did not decrease: %s -> %s" % (measure, m))
            measure = m


def has_merge_nodes(p: Proof) -> bool:
    return any(isinstance(n, Merge) for e in p.components() for n in nodes(e))


def rename_apart(e_or_p, avoid, supply=None):
    """Rename the eigenvariables of a tree or proof to names outside ``avoid``."""
    from .syntax import VarSupply

    supply = supply or VarSupply(set(avoid))
    if isinstance(e_or_p, Proof):
        evs = e_or_p.eigenvariables()
        supply.reserve(*e_or_p.names())
        return subst_proof(e_or_p, {a: Var(supply.fresh(a)) for a in evs})[0]
    from .expansion import tree_names
    supply.reserve(*tree_names(e_or_p))
    return subst_tree(e_or_p, {a: Var(supply.fresh(a)) for a in eigenvariables(e_or_p)})[0]


def merge_trees(e1, e2, rename: bool = False):
    """``E1 ∪ E2``: the merge normal form of ``E1 ⊔ E2``."""
    if e1.shallow != e2.shallow:
        raise MergeError("shallow formulas differ: %s / %s" % (show(e1.shallow), show(e2.shallow)))
    if rename:
        from .expansion import tree_names
        e2 = rename_apart(e2, tree_names(e1))
    q, _ = merge_normalize(Proof((), (Merge(e1, e2),)))
    return q.trees[0]


def merge_proofs(p1: Proof, p2: Proof, rename: bool = False, shared_ok: bool = False):
    """``P1 ∪ P2``: equal trees and cuts are merged, the rest is united."""
    if rename:
        p2 = rename_apart(p2, p1.names())
    elif not shared_ok:
        clash = set(p1.eigenvariables()) & set(p2.eigenvariables())
        if clash:
            raise MergeError("eigenvariables %s occur in both proofs; pass rename=True to rename apart"
                             % ", ".join(sorted(clash)))
    q, _ = merge_normalize(Proof(p1.cuts + p2.cuts, p1.trees + p2.trees))
    return q


def merge_proofs_traced(p1: Proof, p2: Proof):
    return merge_normalize(Proof(p1.cuts + p2.cuts, p1.trees + p2.trees))


def canonical(p: Proof) -> tuple:
    """Order-insensitive structural key of a proof (ignores ids)."""
    from .expansion import show_tree
    cuts = sorted("%s / %s" % (show_tree(c.pos), show_tree(c.neg)) for c in p.cuts)
    trees = sorted(show_tree(t) for t in p.trees)
    return tuple(cuts), tuple(trees)


def all_merge_normal_forms(p: Proof, limit: int = 100000) -> set:
    """Normal forms over every order of merge steps (exhaustive search)."""
    seen = {}
    out = set()
    stack = [p]
    while stack:
        q = stack.pop()
        key = canonical(q)
        if key in seen:
            continue
        seen[key] = True
        if len(seen) > limit:
            raise RuntimeError("state budget exceeded")
        hs = redexes(q)
        if not hs:
            out.add(key)
        m0 = merge_measure(q)
        for h in hs:
            r, _ = apply_redex(q, h)
            if not merge_measure(r) < m0:
                raise AssertionError("merge measure did not decrease")
            stack.append(r)
    return out
