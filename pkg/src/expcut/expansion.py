"""Expansion trees (optionally with merge nodes), cuts and expansion pre-proofs.

Every node carries an integer ``id`` that is ignored by ``==``.  Ids come
from a process-wide counter, so they are unique inside any proof object and
rewrites can record which old nodes a new node stems from.

The existential instances of an ``ExNode`` are stored as :class:`Inst`
records, each with its own id: an instance is an expansion in its own right
(it can be dominated, critical, ordered), the ``ExNode`` itself is not.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Union

from .syntax import (
    All, And, CaptureError, Ex, Formula, Lit, Or, Term, Var, VarSupply,
    big_or, bound_vars, dual, free_vars, instantiate, is_positive,
    show, show_unary, term_key, term_vars,
)

_ids = itertools.count(1)


def new_id() -> int:
    return next(_ids)


def _id():
    return field(default_factory=new_id, compare=False, repr=False)


@dataclass(frozen=True)
class Leaf:
    lit: Lit
    id: int = _id()

    @property
    def shallow(self) -> Lit:
        return self.lit


@dataclass(frozen=True)
class Bin:
    op: str  # "&" or "|"
    left: "Node"
    right: "Node"
    id: int = _id()
    shallow: Formula = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.op not in ("&", "|"):
            raise ValueError("unknown connective %r" % self.op)
        cls = And if self.op == "&" else Or
        object.__setattr__(self, "shallow", cls(self.left.shallow, self.right.shallow))


@dataclass(frozen=True)
class Inst:
    """One existential expansion ``+^t E``."""

    term: Term
    child: "Node"
    id: int = _id()


@dataclass(frozen=True)
class ExNode:
    shallow: Ex
    insts: tuple = ()
    id: int = _id()

    def __post_init__(self):
        insts = tuple(sorted(self.insts, key=lambda i: term_key(i.term)))
        for a, b in zip(insts, insts[1:]):
            if a.term == b.term:
                raise ValueError("duplicate instance term %s in %s" % (a.term, show(self.shallow)))
        object.__setattr__(self, "insts", insts)

    @property
    def terms(self):
        return tuple(i.term for i in self.insts)


@dataclass(frozen=True)
class AllNode:
    shallow: All
    eigen: str
    child: "Node"
    id: int = _id()


@dataclass(frozen=True)
class Merge:
    left: "Node"
    right: "Node"
    id: int = _id()

    @property
    def shallow(self) -> Formula:
        return self.left.shallow


Node = Union[Leaf, Bin, ExNode, AllNode, Merge]


def conj(left, right) -> Bin:
    return Bin("&", left, right)


def disj(left, right) -> Bin:
    return Bin("|", left, right)


# ---------------------------------------------------------------------------
# cuts and proofs


@dataclass(frozen=True)
class Cut:
    pos: Node
    neg: Node
    id: int = _id()

    @property
    def shallow(self) -> Formula:
        return self.pos.shallow

    def sides(self):
        return (self.pos, self.neg)


@dataclass(frozen=True)
class Proof:
    """Expansion pre-proof: a tuple of cuts and a tuple of trees."""

    cuts: tuple = ()
    trees: tuple = ()

    @property
    def shallow(self) -> tuple:
        return tuple(t.shallow for t in self.trees)

    def components(self) -> Iterator[Node]:
        for c in self.cuts:
            yield c.pos
            yield c.neg
        yield from self.trees

    def is_cut_free(self) -> bool:
        return not self.cuts

    def eigenvariables(self) -> list:
        return [v for e in self.components() for v in eigenvariables(e)]

    def names(self) -> set:
        """Every variable name occurring anywhere, bound or free."""
        out = set()
        for e in self.components():
            out |= tree_names(e)
        return out

    def supply(self) -> VarSupply:
        return VarSupply(self.names())

    def size(self) -> int:
        return sum(1 for e in self.components() for _ in nodes(e))

    def __str__(self):
        return show_proof(self)


def mk_cut(e1: Node, e2: Node, relaxed: bool = False) -> Cut:
    """Orient a pair of dual trees so that the positive one comes first."""
    a, b = e1.shallow, e2.shallow
    if not relaxed and a != dual(b):
        raise ValueError("cut sides are not dual: %s / %s" % (show(a), show(b)))
    pa, pb = is_positive(a), is_positive(b)
    if pa == pb:
        raise AssertionError("cut sides with equal polarity: %s / %s" % (show(a), show(b)))
    return Cut(e1, e2) if pa else Cut(e2, e1)


# ---------------------------------------------------------------------------
# traversals


def nodes(e: Node) -> Iterator[Node]:
    """Pre-order traversal of the tree nodes (instances excluded)."""
    stack = [e]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, (Bin, Merge)):
            stack.append(n.right)
            stack.append(n.left)
        elif isinstance(n, ExNode):
            stack.extend(i.child for i in reversed(n.insts))
        elif isinstance(n, AllNode):
            stack.append(n.child)


def expansions(e: Node) -> Iterator[Union[AllNode, Inst]]:
    """All expansions of a tree, in pre-order: ``AllNode`` and ``Inst`` records."""
    for n in nodes(e):
        if isinstance(n, AllNode):
            yield n
        elif isinstance(n, ExNode):
            yield from n.insts


def top_expansions(e: Node) -> list:
    """Expansions not dominated by any expansion of ``e``."""
    if isinstance(e, AllNode):
        return [e]
    if isinstance(e, ExNode):
        return list(e.insts)
    if isinstance(e, (Bin, Merge)):
        return top_expansions(e.left) + top_expansions(e.right)
    return []


def dominated(x: Union[AllNode, Inst]) -> Iterator:
    """Expansions strictly below ``x``."""
    yield from expansions(x.child)


def eigenvariables(e: Node) -> list:
    return [n.eigen for n in nodes(e) if isinstance(n, AllNode)]


def has_merges(e: Node) -> bool:
    return any(isinstance(n, Merge) for n in nodes(e))


def tree_names(e: Node) -> set:
    out = set()
    for n in nodes(e):
        if isinstance(n, AllNode):
            out.add(n.eigen)
        elif isinstance(n, ExNode):
            for i in n.insts:
                out |= term_vars(i.term)
        if not isinstance(n, (Bin, Merge)):
            out |= free_vars(n.shallow) | bound_vars(n.shallow)
    return out


def tree_free_vars(e: Node) -> set:
    """Free variables of terms and shallow formulas occurring in ``e``."""
    out = set()
    for n in nodes(e):
        if isinstance(n, ExNode):
            for i in n.insts:
                out |= term_vars(i.term)
        if isinstance(n, (Leaf, ExNode, AllNode)):
            out |= free_vars(n.shallow)
    return out


def shallow(e: Node) -> Formula:
    return e.shallow


def deep(e: Node) -> Formula:
    if isinstance(e, Leaf):
        return e.lit
    if isinstance(e, Bin):
        cls = And if e.op == "&" else Or
        return cls(deep(e.left), deep(e.right))
    if isinstance(e, ExNode):
        return big_or(deep(i.child) for i in e.insts)
    if isinstance(e, AllNode):
        return deep(e.child)
    if isinstance(e, Merge):
        return Or(deep(e.left), deep(e.right))
    raise TypeError(e)


def deep_cut(c: Cut) -> Formula:
    return And(deep(c.pos), deep(c.neg))


def deep_sequent(p: Proof) -> list:
    """Deep formulas of the trees followed by those of the cuts."""
    return [deep(t) for t in p.trees] + [deep_cut(c) for c in p.cuts]


def coerce(f: Formula, supply: VarSupply, allow_free: bool = False) -> Node:
    """The weakest expansion tree of ``f``: no existential instances at all."""
    if not allow_free and free_vars(f):
        raise ValueError("cannot coerce open formula %s" % show(f))
    if isinstance(f, Lit):
        return Leaf(f)
    if isinstance(f, (And, Or)):
        op = "&" if isinstance(f, And) else "|"
        return Bin(op, coerce(f.left, supply, True), coerce(f.right, supply, True))
    if isinstance(f, Ex):
        return ExNode(f, ())
    if isinstance(f, All):
        alpha = supply.fresh(f.var)
        return AllNode(f, alpha, coerce(instantiate(f, Var(alpha)), supply, True))
    raise TypeError(f)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str = ""
    nodes: tuple = ()

    def __str__(self):
        return "%s: %s" % (self.kind, self.detail) if self.detail else self.kind


def structural_violations(e: Node) -> list:
    out = []
    for n in nodes(e):
        if isinstance(n, Merge):
            if n.left.shallow != n.right.shallow:
                out.append(Violation("ShallowMismatch", "merge of different formulas", (n.id,)))
        elif isinstance(n, ExNode):
            for i in n.insts:
                try:
                    want = instantiate(n.shallow, i.term)
                except CaptureError as err:
                    out.append(Violation("Capture", str(err), (i.id,)))
                    continue
                if i.child.shallow != want:
                    out.append(Violation(
                        "ShallowMismatch",
                        "instance %s of %s has shallow %s" % (i.term, show(n.shallow), show(i.child.shallow)),
                        (i.id,)))
        elif isinstance(n, AllNode):
            if n.eigen in bound_vars(n.shallow):
                out.append(Violation("Capture", "eigenvariable %s is bound in %s" % (n.eigen, show(n.shallow)), (n.id,)))
            elif n.child.shallow != instantiate(n.shallow, Var(n.eigen)):
                out.append(Violation(
                    "ShallowMismatch",
                    "child of %s +^%s has shallow %s" % (show(n.shallow), n.eigen, show(n.child.shallow)),
                    (n.id,)))
    return out


def validate_preproof(p: Proof) -> list:
    """Diagnostics; the empty list means ``p`` is an expansion pre-proof."""
    out = []
    for e in p.components():
        for n in nodes(e):
            if isinstance(n, Merge):
                out.append(Violation("MergeNode", "merge node present", (n.id,)))
        out.extend(structural_violations(e))
    for c in p.cuts:
        if c.pos.shallow != dual(c.neg.shallow):
            out.append(Violation("CutMismatch", "%s is not dual to %s" % (show(c.pos.shallow), show(c.neg.shallow)), (c.id,)))
        elif not is_positive(c.pos.shallow):
            out.append(Violation("CutOrientation", "first side of cut %s is not positive" % show(c.shallow), (c.id,)))
    seen = {}
    for c in p.cuts:
        if c.shallow in seen:
            out.append(Violation("DuplicateCutFormula", show(c.shallow), (seen[c.shallow], c.id)))
        seen.setdefault(c.shallow, c.id)
    seen = {}
    for t in p.trees:
        if t.shallow in seen:
            out.append(Violation("DuplicateTreeFormula", show(t.shallow), (seen[t.shallow], t.id)))
        seen.setdefault(t.shallow, t.id)
    owner = {}
    for e in p.components():
        for n in nodes(e):
            if isinstance(n, AllNode):
                if n.eigen in owner:
                    out.append(Violation("RegularityViolation", n.eigen, (owner[n.eigen], n.id)))
                owner.setdefault(n.eigen, n.id)
    for t in p.trees:
        fv = free_vars(t.shallow)
        if fv:
            out.append(Violation("OpenEndSequent", "%s has free variables %s" % (show(t.shallow), sorted(fv)), (t.id,)))
    ids = set()
    for e in p.components():
        for n in nodes(e):
            group = [n] + (list(n.insts) if isinstance(n, ExNode) else [])
            for x in group:
                if x.id in ids:
                    out.append(Violation("DuplicateNodeId", str(x.id), (x.id,)))
                ids.add(x.id)
    return out


# ---------------------------------------------------------------------------
# printing


def show_tree(e: Node) -> str:
    if isinstance(e, Leaf):
        return str(e.lit)
    if isinstance(e, Merge):
        return "%s ⊔ %s" % (_show_operand(e.left, 0, False), _show_operand(e.right, 0, True))
    if isinstance(e, Bin):
        p = 2 if e.op == "&" else 1
        return "%s %s %s" % (_show_operand(e.left, p, False), e.op, _show_operand(e.right, p, True))
    if isinstance(e, ExNode):
        body = " ".join("+%s %s" % (i.term, show_tree(i.child)) for i in e.insts)
        return "ex %s %s [%s]" % (e.shallow.var, show_unary(e.shallow.body), body)
    if isinstance(e, AllNode):
        return "all %s %s [+^%s %s]" % (e.shallow.var, show_unary(e.shallow.body), e.eigen, show_tree(e.child))
    raise TypeError(e)


def _prec(e):
    if isinstance(e, Merge):
        return 0
    if isinstance(e, Bin):
        return 2 if e.op == "&" else 1
    return 9


def _show_operand(e, p, right):
    s = show_tree(e)
    q = _prec(e)
    if q < p or (right and q == p):
        return "(%s)" % s
    return s


def dangling_vars(p: Proof) -> list:
    """Free variables that are not eigenvariables of ``p``."""
    fv = set()
    for e in p.components():
        fv |= tree_free_vars(e)
    return sorted(fv - set(p.eigenvariables()))


def show_proof(p: Proof) -> str:
    lines = []
    extra = dangling_vars(p)
    if extra:
        lines.append("vars %s;" % ", ".join(extra))
    for c in p.cuts:
        lines.append("cut(%s, %s);" % (show_tree(c.pos), show_tree(c.neg)))
    for t in p.trees:
        lines.append("tree %s;" % show_tree(t))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON


def tree_to_json(e: Node) -> dict:
    d = {"kind": None, "id": e.id, "shallow": show(e.shallow)}
    if isinstance(e, Leaf):
        d["kind"] = "lit"
        d["children"] = []
    elif isinstance(e, Bin):
        d["kind"] = "and" if e.op == "&" else "or"
        d["children"] = [tree_to_json(e.left), tree_to_json(e.right)]
    elif isinstance(e, Merge):
        d["kind"] = "merge"
        d["children"] = [tree_to_json(e.left), tree_to_json(e.right)]
    elif isinstance(e, ExNode):
        d["kind"] = "ex"
        d["children"] = [
            {"kind": "inst", "id": i.id, "term": str(i.term), "children": [tree_to_json(i.child)]}
            for i in e.insts
        ]
    elif isinstance(e, AllNode):
        d["kind"] = "all"
        d["eigen"] = e.eigen
        d["children"] = [tree_to_json(e.child)]
    return d


def proof_to_json(p: Proof) -> dict:
    return {
        "vars": dangling_vars(p),
        "cuts": [[tree_to_json(c.pos), tree_to_json(c.neg)] for c in p.cuts],
        "trees": [tree_to_json(t) for t in p.trees],
    }


def proof_from_json(d) -> Proof:
    from .parser import parse_formula, parse_term

    if isinstance(d, str):
        d = json.loads(d)
    eigen = set(d.get("vars", ()))

    def collect(n):
        if n.get("kind") == "all":
            eigen.add(n["eigen"])
        for c in n.get("children", ()):
            collect(c)

    for pair in d.get("cuts", ()):
        for n in pair:
            collect(n)
    for n in d.get("trees", ()):
        collect(n)

    def build(n):
        kind = n["kind"]
        sh = parse_formula(n["shallow"], variables=eigen)
        kids = n.get("children", [])
        if kind == "lit":
            return Leaf(sh)
        if kind in ("and", "or"):
            return Bin("&" if kind == "and" else "|", build(kids[0]), build(kids[1]))
        if kind == "merge":
            return Merge(build(kids[0]), build(kids[1]))
        if kind == "ex":
            return ExNode(sh, tuple(Inst(parse_term(k["term"], variables=eigen), build(k["children"][0])) for k in kids))
        if kind == "all":
            return AllNode(sh, n["eigen"], build(kids[0]))
        raise ValueError("unknown node kind %r" % kind)

    cuts = tuple(Cut(build(a), build(b)) for a, b in d.get("cuts", ()))
    trees = tuple(build(t) for t in d.get("trees", ()))
    return Proof(cuts, trees)
