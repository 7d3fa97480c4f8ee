"""Set-based sequent calculus LK with cut, and the translations to and from expansion proofs."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .expansion import (
    AllNode, Bin, ExNode, Inst, Leaf, Merge, Proof, coerce, mk_cut,
)
from .syntax import (
    All, And, CaptureError, Ex, Lit, Or, Var, VarSupply, bound_vars, dual, free_vars,
    instantiate, show, term_vars,
)

RULES = ("init", "and", "or", "forall", "exists", "cut")


@dataclass(frozen=True)
class LKNode:
    rule: str
    principal: object  # the principal formula; the atom for init; the cut formula for cut
    aux: object  # eigenvariable name (forall) or term (exists)
    concl: frozenset
    premises: tuple = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def walk(self):
        yield self
        for p in self.premises:
            yield from p.walk()

    def is_cut_free(self) -> bool:
        return all(n.rule != "cut" for n in self.walk())

    def eigenvariables(self) -> list:
        return [n.aux for n in self.walk() if n.rule == "forall"]

    def __str__(self):
        return show_lk(self)


@dataclass(frozen=True)
class LKViolation:
    kind: str
    detail: str = ""

    def __str__(self):
        return "%s: %s" % (self.kind, self.detail) if self.detail else self.kind


def _seq(fs) -> str:
    return "{%s}" % ", ".join(sorted(show(f) for f in fs))


def lk_check(pi: LKNode) -> list:
    """Violations; the empty list means ``pi`` is a regular LK proof."""
    out = []
    seen = {}
    for n in pi.walk():
        out.extend(_check_rule(n))
        if n.rule == "forall":
            if n.aux in seen:
                out.append(LKViolation("RegularityViolation", n.aux))
            seen[n.aux] = True
    return out


def _premise_ok(prem, concl, principal, added, keep_only=False) -> bool:
    base = concl - {principal}
    options = [concl | added] if keep_only else [base | added, concl | added]
    return prem in options


def _check_rule(n: LKNode) -> list:
    bad = []
    c, p, prems = n.concl, n.principal, n.premises
    arity = {"init": 0, "and": 2, "or": 1, "forall": 1, "exists": 1, "cut": 2}
    if n.rule not in arity:
        return [LKViolation("UnknownRule", n.rule)]
    if len(prems) != arity[n.rule]:
        return [LKViolation("Arity", "%s with %d premises" % (n.rule, len(prems)))]
    ps = [q.concl for q in prems]
    if n.rule == "init":
        if not (isinstance(p, Lit) and p.positive):
            bad.append(LKViolation("InitShape", "%s is not an atom" % show(p)))
        elif p not in c or dual(p) not in c:
            bad.append(LKViolation("InitShape", "%s lacks %s or its dual" % (_seq(c), show(p))))
        return bad
    if n.rule == "cut":
        if not (ps[0] == c | {p} and ps[1] == c | {dual(p)}):
            bad.append(LKViolation("CutShape", "cut on %s below %s" % (show(p), _seq(c))))
        return bad
    if p not in c:
        return [LKViolation("PrincipalMissing", "%s not in %s" % (show(p), _seq(c)))]
    if n.rule == "or":
        if not isinstance(p, Or) or not _premise_ok(ps[0], c, p, {p.left, p.right}):
            bad.append(LKViolation("OrShape", show(p)))
    elif n.rule == "and":
        if not isinstance(p, And) or not (_premise_ok(ps[0], c, p, {p.left}) and _premise_ok(ps[1], c, p, {p.right})):
            bad.append(LKViolation("AndShape", show(p)))
    elif n.rule == "forall":
        if not isinstance(p, All) or not isinstance(n.aux, str):
            return [LKViolation("ForallShape", show(p))]
        if n.aux in bound_vars(p):
            return [LKViolation("Capture", "eigenvariable %s is bound in %s" % (n.aux, show(p)))]
        if not _premise_ok(ps[0], c, p, {instantiate(p, Var(n.aux))}):
            bad.append(LKViolation("ForallShape", show(p)))
        if any(n.aux in free_vars(f) for f in c):
            bad.append(LKViolation("EigenvariableViolation", "%s occurs in %s" % (n.aux, _seq(c))))
    elif n.rule == "exists":
        if not isinstance(p, Ex) or n.aux is None:
            return [LKViolation("ExistsShape", show(p))]
        if term_vars(n.aux) & bound_vars(p.body):
            return [LKViolation("Capture", "term %s under %s" % (n.aux, show(p)))]
        try:
            inst = instantiate(p, n.aux)
        except CaptureError as err:
            return [LKViolation("Capture", str(err))]
        if not _premise_ok(ps[0], c, p, {inst}, keep_only=True):
            bad.append(LKViolation("ExistsShape", show(p)))
    return bad


def end_sequent(pi: LKNode) -> frozenset:
    return pi.concl


# ---------------------------------------------------------------------------
# LK -> expansion proofs


def _names(pi: LKNode) -> set:
    out = set()
    for n in pi.walk():
        for f in n.concl:
            out |= free_vars(f) | bound_vars(f)
        if n.rule == "forall":
            out.add(n.aux)
        elif n.rule == "exists":
            out |= term_vars(n.aux)
    return out


class _Exp:
    def __init__(self, pi):
        self.supply = VarSupply(_names(pi))

    def weak(self, f):
        return coerce(f, self.supply, allow_free=True)

    def run(self, n: LKNode) -> Proof:
        from .rewrite import merge_normalize

        if n.rule == "init":
            a, na = n.principal, dual(n.principal)
            trees = [Leaf(a), Leaf(na)] + [self.weak(f) for f in sorted(n.concl - {a, na}, key=show)]
            return Proof((), tuple(trees))
        subs = [self.run(q) for q in n.premises]
        p = n.principal
        cuts, trees = [], []
        if n.rule == "or":
            (s,) = subs
            ea = _take(s, p.left)
            eb = _take(s, p.right) if p.right != p.left else self.weak(p.right)
            new = [Bin("|", ea, eb)]
            rest = [s]
        elif n.rule == "and":
            sa, sb = subs
            new = [Bin("&", _take(sa, p.left), _take(sb, p.right))]
            rest = [sa, sb]
        elif n.rule == "forall":
            (s,) = subs
            new = [AllNode(p, n.aux, _take(s, instantiate(p, Var(n.aux))))]
            rest = [s]
        elif n.rule == "exists":
            (s,) = subs
            inst = instantiate(p, n.aux)
            et = _take(s, inst) if inst != p else self.weak(inst)
            e = _take(s, p)
            if e is None:
                e = self.weak(p)
            new = [Merge(e, ExNode(p, (Inst(n.aux, et),)))]
            rest = [s]
        else:  # cut
            sp, sn = subs
            ep, en = _take(sp, p), _take(sn, dual(p))
            cuts.append(mk_cut(ep, en))
            new = []
            rest = [sp, sn]
        for s in rest:
            cuts.extend(s.cuts)
            trees.extend(t for t in s.trees if t is not None)
        trees.extend(new)
        q, _ = merge_normalize(Proof(tuple(cuts), tuple(trees)))
        return self.reconcile(q, n.concl)

    def reconcile(self, q: Proof, concl) -> Proof:
        have = {t.shallow: t for t in q.trees}
        extra = [f for f in have if f not in concl]
        if extra:
            raise AssertionError("translation left trees for %s" % ", ".join(map(show, extra)))
        trees = list(q.trees) + [self.weak(f) for f in sorted(concl, key=show) if f not in have]
        return Proof(q.cuts, tuple(trees))


def _take(s: Proof, f):
    """Remove and return the tree of ``f`` from ``s`` (mutates the proof's tree tuple)."""
    for k, t in enumerate(s.trees):
        if t is not None and t.shallow == f:
            trees = list(s.trees)
            trees[k] = None
            object.__setattr__(s, "trees", tuple(trees))
            return t
    return None


def expansion_of(pi: LKNode, check: bool = True) -> Proof:
    """``Exp(π)``."""
    if check:
        bad = lk_check(pi)
        if bad:
            raise ValueError("not a regular LK proof: %s" % "; ".join(map(str, bad)))
    ex = _Exp(pi)
    q = ex.run(pi)
    fv = set()
    for f in pi.concl:
        fv |= free_vars(f)
    clash = fv & set(q.eigenvariables())
    if clash:
        raise AssertionError("free variables %s of the end-sequent became eigenvariables" % sorted(clash))
    return q


# ---------------------------------------------------------------------------
# expansion proofs -> LK


class SequentializationError(RuntimeError):
    pass


class _Seq:
    def __init__(self, p: Proof):
        self.supply = p.supply()

    def shallow(self, trees) -> frozenset:
        return frozenset(t.shallow for t in trees)

    def rename(self, cuts, trees):
        """Rename the eigenvariables still present to fresh names (keeps LK regular)."""
        from .rewrite import subst_proof

        p = Proof(tuple(cuts), tuple(trees))
        evs = p.eigenvariables()
        if not evs:
            return list(cuts), list(trees)
        q, _ = subst_proof(p, {a: Var(self.supply.fresh(a)) for a in evs}, copy=True)
        return list(q.cuts), list(q.trees)

    def prune(self, cuts, trees):
        """Drop trees whose deep formulas are not needed for the tautology.

        Dropped trees stay in the sequent as passive formulas that are never
        decomposed, which keeps the context of a branching rule small.  Cuts
        are always kept.
        """
        from .expansion import deep, deep_cut
        from .taut import is_tautology

        fixed = [deep_cut(c) for c in cuts]
        keep = list(range(len(trees)))
        dropped = []
        for k in sorted(keep, key=lambda k: -_size(trees[k])):
            rest = [i for i in keep if i != k]
            if is_tautology(fixed + [deep(trees[i]) for i in rest]):
                keep = rest
                dropped.append(trees[k].shallow)
        return list(cuts), [trees[i] for i in keep], frozenset(dropped)

    def branch(self, cuts, trees, passive, rename=False):
        if rename:
            cuts, trees = self.rename(cuts, trees)
        cuts, trees, dropped = self.prune(cuts, trees)
        return self.run(cuts, trees, passive | dropped)

    def run(self, cuts, trees, passive=frozenset()) -> LKNode:
        concl = self.shallow(trees) | passive
        lits = {f for f in concl if isinstance(f, Lit)}
        for l in sorted(lits, key=show):
            if l.positive and dual(l) in lits:
                return LKNode("init", l, None, concl)
        for k, t in enumerate(trees):
            if isinstance(t, Bin) and t.op == "|":
                rest = trees[:k] + trees[k + 1:]
                prem = self.run(cuts, rest + [t.left, t.right], passive)
                return LKNode("or", t.shallow, None, concl, (prem,))
        for k, t in enumerate(trees):
            if isinstance(t, Bin) and t.op == "&":
                rest = trees[:k] + trees[k + 1:]
                left = self.branch(cuts, rest + [t.left], passive)
                right = self.branch(cuts, rest + [t.right], passive, rename=True)
                return LKNode("and", t.shallow, None, concl, (left, right))
        from .order import dependency_edges

        p = Proof(tuple(cuts), tuple(trees))
        g = dependency_edges(p)
        pred = g.pred()
        for c in sorted(cuts, key=lambda c: c.id):
            if not pred[c.id]:
                rest = [d for d in cuts if d.id != c.id]
                left = self.branch(rest, trees + [c.pos], passive)
                right = self.branch(rest, trees + [c.neg], passive, rename=True)
                return LKNode("cut", c.shallow, None, concl, (left, right))
        cands = []
        for k, t in enumerate(trees):
            if isinstance(t, AllNode):
                cands.append((t.id, k, None))
            elif isinstance(t, ExNode):
                cands.extend((i.id, k, i) for i in t.insts)
        for vid, k, inst in sorted(cands, key=lambda c: c[0]):
            if pred[vid]:
                continue
            t = trees[k]
            rest = trees[:k] + trees[k + 1:]
            if inst is None:
                if any(t.eigen in free_vars(f) for f in concl):
                    raise SequentializationError("eigenvariable condition fails for %s" % t.eigen)
                prem = self.run(cuts, rest + [t.child], passive)
                return LKNode("forall", t.shallow, t.eigen, concl, (prem,))
            left = ExNode(t.shallow, tuple(i for i in t.insts if i.id != inst.id), id=t.id)
            prem = self.run(cuts, rest[:k] + [left] + rest[k:] + [inst.child], passive)
            return LKNode("exists", t.shallow, inst.term, concl, (prem,))
        if cuts or cands:
            raise SequentializationError("no minimal cut or quantifier; the dependency relation is cyclic")
        raise SequentializationError("no axiom applies to %s" % _seq(concl))


def _size(e) -> int:
    from .expansion import nodes

    return sum(1 for _ in nodes(e))


def sequentialize(p: Proof, check: bool = True) -> LKNode:
    """``Seq(P)``: an LK proof of ``Sh(P)``."""
    if check:
        from .order import check_proof

        rep = check_proof(p)
        if not rep.ok:
            raise SequentializationError("not an expansion proof: %s" % "; ".join(rep.lines()))
    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        return _Seq(p).run(list(p.cuts), list(p.trees))
    finally:
        sys.setrecursionlimit(old)


# ---------------------------------------------------------------------------
# printing and JSON


def show_lk(pi: LKNode, indent: int = 0) -> str:
    out = []
    fv = set()
    for f in pi.concl:
        fv |= free_vars(f)
    fv -= set(pi.eigenvariables())
    if indent == 0 and fv:
        out.append("vars %s;" % ", ".join(sorted(fv)))
    _show(pi, indent, out)
    return "\n".join(out) + "\n"


def _header(n: LKNode) -> str:
    arg = show(n.principal)
    if n.rule == "forall":
        arg += "; " + n.aux
    elif n.rule == "exists":
        arg += "; " + str(n.aux)
    return "%s[%s] %s" % (n.rule, arg, _seq(n.concl))


def _show(n: LKNode, indent: int, out: list, last: bool = True):
    pad = "  " * indent
    comma = "" if last else ","
    if not n.premises:
        out.append(pad + _header(n) + comma)
        return
    out.append(pad + _header(n) + " (")
    for k, q in enumerate(n.premises):
        _show(q, indent + 1, out, k == len(n.premises) - 1)
    out.append(pad + ")" + comma)


def lk_to_json(n: LKNode) -> dict:
    d = {"rule": n.rule, "principal": show(n.principal),
         "sequent": sorted(show(f) for f in n.concl),
         "premises": [lk_to_json(q) for q in n.premises]}
    if n.rule == "forall":
        d["aux"] = n.aux
    elif n.rule == "exists":
        d["aux"] = str(n.aux)
    return d


def lk_from_json(d) -> LKNode:
    from .parser import parse_formula, parse_term

    if isinstance(d, str):
        d = json.loads(d)
    eigen = set(d.get("vars", ()))

    def collect(x):
        if x["rule"] == "forall":
            eigen.add(x["aux"])
        for q in x.get("premises", ()):
            collect(q)

    collect(d)

    def build(x):
        f = lambda s: parse_formula(s, variables=eigen)
        aux = x.get("aux")
        if x["rule"] == "exists":
            aux = parse_term(aux, variables=eigen)
        return LKNode(x["rule"], f(x["principal"]), aux, frozenset(f(s) for s in x["sequent"]),
                      tuple(build(q) for q in x.get("premises", ())))

    return build(d)


def premise_sequents(rule: str, principal, aux, concl: frozenset, keep: bool = False) -> list:
    """Premise sequents of an inference; ``keep`` retains the principal formula."""
    base = concl if keep else concl - {principal}
    if rule == "init":
        return []
    if rule == "or":
        return [base | {principal.left, principal.right}]
    if rule == "and":
        return [base | {principal.left}, base | {principal.right}]
    if rule == "forall":
        return [base | {instantiate(principal, Var(aux))}]
    if rule == "exists":
        return [concl | {instantiate(principal, aux)}]
    if rule == "cut":
        return [concl | {principal}, concl | {dual(principal)}]
    raise ValueError("unknown rule %r" % rule)
