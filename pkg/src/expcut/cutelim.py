"""Cut-reduction steps, ∨∧-normalization, the rank/degree strategy and reduction-space exploration."""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

from .expansion import (
    AllNode, Bin, Cut, ExNode, Leaf, Proof, conj, disj, eigenvariables, expansions, mk_cut,
    show_proof, validate_preproof,
)
from .order import (
    check_proof, critical_max_set, degrees, dependency_edges, order_at, order_profile, proof_rank,
)
from .rewrite import Trace, compose_pred, merge_normalize, subst_proof, subst_tree
from .syntax import Var, show


class ReductionError(RuntimeError):
    pass


@dataclass
class ReductionStep:
    kind: str  # "atomic", "propositional" or "quantifier"
    cut: int
    cut_formula: str
    proof: Proof
    forall: Optional[int] = None
    terms: tuple = ()
    renamings: tuple = ()
    pred_c: dict = field(default_factory=dict)
    measure: Optional[tuple] = None  # (rank, order) before and after, for quantifier steps

    def to_json(self) -> dict:
        d = {"kind": self.kind, "cut": self.cut, "cut_formula": self.cut_formula}
        if self.kind == "quantifier":
            d["forall"] = self.forall
            d["terms"] = [str(t) for t in self.terms]
            d["renamings"] = [dict(r) for r in self.renamings]
        if self.measure is not None:
            d["measure"] = [list(m) for m in self.measure]
        d["proof"] = show_proof(self.proof)
        return d


def _without(p: Proof, c: Cut) -> Proof:
    return Proof(tuple(d for d in p.cuts if d.id != c.id), p.trees)


def _pred_c(maps, q: Proof) -> dict:
    out = {}
    for e in q.components():
        for x in expansions(e):
            out[x.id] = min(compose_pred(maps, x.id))
    return out


def _finish(q: Proof, trace: Trace, base: dict):
    bad = validate_preproof(q)
    if bad:
        raise ReductionError("reduction produced an ill-formed proof: %s" % "; ".join(map(str, bad)))
    return _pred_c([base] + trace.maps(), q)


def reduce_cut(p: Proof, c: Cut) -> tuple:
    """One cut-reduction step on the cut ``c`` of ``p``."""
    if all(d.id != c.id for d in p.cuts):
        raise KeyError("cut %d is not part of the proof" % c.id)
    rest = _without(p, c)
    if isinstance(c.pos, Leaf):
        q = rest
        return q, ReductionStep("atomic", c.id, show(c.shallow), q, pred_c=_pred_c([], q))
    if isinstance(c.pos, Bin):
        a, b = c.pos, c.neg
        if not isinstance(b, Bin):
            raise ReductionError("propositional cut with a non-binary side")
        new = (mk_cut(a.left, b.left, relaxed=True), mk_cut(a.right, b.right, relaxed=True))
        q, trace = merge_normalize(Proof(rest.cuts + new, rest.trees))
        pred = _finish(q, trace, {})
        return q, ReductionStep("propositional", c.id, show(c.shallow), q, pred_c=pred)
    if isinstance(c.pos, ExNode):
        return _reduce_quantifier(p, c, rest)
    raise ReductionError("cannot reduce cut on %s" % show(c.shallow))


def _reduce_quantifier(p: Proof, c: Cut, rest: Proof):
    ex, al = c.pos, c.neg
    if not isinstance(al, AllNode):
        raise ReductionError("quantifier cut without a universal side")
    if not ex.insts:
        q = rest
        return q, ReductionStep("quantifier", c.id, show(c.shallow), q, forall=al.id, pred_c=_pred_c([], q))
    alpha, body = al.eigen, al.child
    evs = rest.eigenvariables() + eigenvariables(body)
    supply = p.supply()
    base = {}
    negs, renamings = [], []
    cuts, trees = list(rest.cuts), list(rest.trees)
    for inst in ex.insts:
        eta = {b: Var(supply.fresh(b)) for b in evs}
        tau = dict(eta)
        tau[alpha] = inst.term
        e_i, pr = subst_tree(body, tau, copy=True)
        base.update(pr)
        negs.append(e_i)
        q_i, pr = subst_proof(rest, tau, copy=True)
        base.update(pr)
        cuts.extend(q_i.cuts)
        trees.extend(q_i.trees)
        renamings.append({k: v.name for k, v in eta.items()})
    poss = [i.child for i in ex.insts]
    if len(poss) == 1:
        new = mk_cut(poss[0], negs[0], relaxed=True)
    else:
        new = Cut(reduce(disj, poss), reduce(conj, negs))
    # P first, then the new cut, then the copies
    big = Proof(tuple(cuts[:len(rest.cuts)]) + (new,) + tuple(cuts[len(rest.cuts):]), tuple(trees))
    q, trace = merge_normalize(big)
    pred = _finish(q, trace, base)
    step = ReductionStep("quantifier", c.id, show(c.shallow), q, forall=al.id,
                         terms=ex.terms, renamings=tuple(renamings), pred_c=pred)
    return q, step


def find_cut(p: Proof, forall_id: int) -> Cut:
    """The cut whose universal side is the expansion ``forall_id``."""
    for c in p.cuts:
        if c.neg.id == forall_id and isinstance(c.neg, AllNode):
            return c
    for c in p.cuts:
        for x in expansions(c.neg):
            if x.id == forall_id:
                raise ReductionError("the universal expansion is dominated or below a connective; "
                                     "apply orland_normalize first")
    raise KeyError("no critical universal expansion with id %d" % forall_id)


def reduce_forall(p: Proof, forall_id: int):
    return reduce_cut(p, find_cut(p, forall_id))


# ---------------------------------------------------------------------------
# strategy


def is_orland_normal(p: Proof) -> bool:
    return not any(isinstance(c.pos, Bin) for c in p.cuts)


def orland_normalize(p: Proof, steps: Optional[list] = None):
    """Exhaustive propositional and atomic reduction."""
    steps = steps if steps is not None else []
    while True:
        c = next((c for c in p.cuts if isinstance(c.pos, (Bin, Leaf))), None)
        if c is None:
            return p, steps
        p, s = reduce_cut(p, c)
        steps.append(s)


def choose_forall(p: Proof):
    """A universal expansion of maximal degree in ``M(P)``; ties go to the smallest id."""
    cands = [x for x in critical_max_set(p) if isinstance(x, AllNode)]
    if not cands:
        raise ReductionError("no universal expansion of maximal rank among the critical ones")
    deg = degrees(dependency_edges(p))
    return max(cands, key=lambda x: (deg[x.id], -x.id))


def eliminate_cuts(p: Proof, assert_invariants: bool = False, max_steps: int = 100000):
    """Cut-free proof of the same end-sequent, and the list of reduction steps."""
    steps = []
    shallow = sorted(map(show, p.shallow))
    for _ in range(max_steps):
        before = len(steps)
        p, steps = orland_normalize(p, steps)
        if assert_invariants:
            for s in steps[before:]:
                _check(s.proof, shallow)
        if not p.cuts:
            return p, steps
        w = choose_forall(p)
        r, o = proof_rank(p), order_at(p, proof_rank(p))
        q, s = reduce_cut(p, find_cut(p, w.id))
        r2 = proof_rank(q)
        o2 = order_at(q, r2)
        s.measure = ((r, o), (r2, o2))
        if not (r2, o2) < (r, o) or r2 > r:
            raise ReductionError("measure did not decrease: (%d, %d) -> (%d, %d)\n%s"
                                 % (r, o, r2, o2, show_proof(p)))
        if assert_invariants:
            _check(q, shallow)
        steps.append(s)
        p = q
    raise ReductionError("step limit reached")


def _check(q: Proof, shallow):
    rep = check_proof(q)
    if not rep.ok:
        raise ReductionError("invariant violated after reduction: %s" % "; ".join(rep.lines()))
    if sorted(map(show, q.shallow)) != shallow:
        raise ReductionError("end-sequent changed")


# ---------------------------------------------------------------------------
# exploration


def canonical_key(p: Proof) -> tuple:
    """Structural key modulo renaming of variables and order of components."""
    from .expansion import show_tree, tree_free_vars

    names = set(p.eigenvariables())
    for e in p.components():
        names |= tree_free_vars(e)
    blank = {n: Var("_") for n in names}

    def skeleton(q):
        # variables blanked: invariant under renaming, used to order components
        out = []
        for c in q.cuts:
            out.append(("c", show_tree(subst_tree(c.pos, blank)[0]) + "/" + show_tree(subst_tree(c.neg, blank)[0]), c))
        for t in q.trees:
            out.append(("t", show_tree(subst_tree(t, blank)[0]), t))
        return out

    try:
        comps = sorted(skeleton(p), key=lambda x: (x[0], x[1]))
    except ValueError:
        comps = [("c", "", c) for c in p.cuts] + [("t", "", t) for t in p.trees]
    order = []
    for kind, _, obj in comps:
        parts = (obj.pos, obj.neg) if kind == "c" else (obj,)
        for e in parts:
            for n in _var_occurrences(e):
                if n in names and n not in order:
                    order.append(n)
    ren = {n: Var("?%d" % (k + 1)) for k, n in enumerate(order)}
    q, _ = subst_proof(p, ren)
    cuts = sorted("%s / %s" % (show_tree(c.pos), show_tree(c.neg)) for c in q.cuts)
    trees = sorted(show_tree(t) for t in q.trees)
    return tuple(cuts), tuple(trees)


def _var_occurrences(e):
    from .expansion import nodes
    from .syntax import free_vars, term_vars

    for n in nodes(e):
        if isinstance(n, AllNode):
            yield n.eigen
        if isinstance(n, ExNode):
            for i in n.insts:
                yield from sorted(term_vars(i.term))
        if isinstance(n, (Leaf, ExNode, AllNode)):
            yield from sorted(free_vars(n.shallow))


@dataclass
class Exploration:
    states: int
    normal_forms: list  # canonical keys
    normal_proofs: list
    frontier: int  # states at the depth limit that still have cuts
    budget_exceeded: bool
    max_depth: int
    errors: list = field(default_factory=list)  # reductions whose result is not a pre-proof
    first_steps: dict = field(default_factory=dict)  # normal-form index -> first reduced cut formulas
    non_proofs: int = 0  # reachable states failing acyclicity or tautology

    @property
    def complete(self) -> bool:
        return not self.budget_exceeded and self.frontier == 0

    @property
    def terminating(self) -> bool:
        """Every explored sequence ends in a normal form."""
        return self.complete and not self.errors

    def divergences(self) -> list:
        """Pairs of first steps that lead to different sets of normal forms."""
        reach = {}
        for k, firsts in self.first_steps.items():
            for f in firsts:
                reach.setdefault(f, set()).add(k)
        labels = sorted(reach)
        return [(a, b) for i, a in enumerate(labels) for b in labels[i + 1:] if reach[a] != reach[b]]

    def summary(self) -> str:
        n = len(self.normal_forms)
        lines = ["%d normal form%s" % (n, "" if n == 1 else "s"),
                 "%d states explored, deepest reduction sequence %d" % (self.states, self.max_depth)]
        for k in sorted(self.first_steps):
            lines.append("normal form %d reached by first reducing: %s" % (k + 1, "; ".join(self.first_steps[k])))
        if self.non_proofs:
            lines.append("%d reachable states are not expansion proofs" % self.non_proofs)
        if self.errors:
            lines.append("%d reductions produced no pre-proof" % len(self.errors))
        if self.frontier:
            lines.append("%d states left unexplored" % self.frontier)
        if self.budget_exceeded:
            lines.append("state or time budget exceeded; the report is partial")
        return "\n".join(lines)


def successors(p: Proof) -> list:
    return [reduce_cut(p, c)[0] for c in p.cuts]


def enumerate_reductions(p: Proof, max_depth: int = 50, budget: int = 100000,
                         max_nodes: int = 400, check_states: bool = False,
                         time_limit: Optional[float] = None) -> Exploration:
    """Breadth-first closure of one-step reduction, up to ``max_depth`` steps.

    States are identified modulo renaming of variables.  ``max_nodes`` guards
    the input size only; ``check_states`` runs the full proof check on every
    reachable state.  Running out of ``budget`` states or ``time_limit``
    seconds stops the search and marks the report as partial.
    """
    stop_at = None if time_limit is None else time.monotonic() + time_limit
    if p.size() > max_nodes:
        raise ValueError("proof too large to explore (%d nodes)" % p.size())
    key = canonical_key(p)
    depth = {key: 0}
    succ = {}
    roots = {}  # first reduced cut formula -> successor key
    queue = deque([(p, key, 0)])
    normal, normal_proofs = [], []
    frontier = 0
    exceeded = False
    deepest = 0
    errors = []
    bad = 0
    while queue:
        if stop_at is not None and time.monotonic() > stop_at:
            exceeded = True
            frontier += len(queue)
            break
        q, qk, d = queue.popleft()
        deepest = max(deepest, d)
        if check_states and d > 0 and not check_proof(q).ok:
            bad += 1
        if not q.cuts:
            normal.append(qk)
            normal_proofs.append(q)
            continue
        if d >= max_depth:
            frontier += 1
            continue
        out = succ.setdefault(qk, set())
        for c in q.cuts:
            try:
                r, _ = reduce_cut(q, c)
            except ReductionError as err:
                errors.append(str(err))
                continue
            k = canonical_key(r)
            if d == 0:
                roots.setdefault(show(c.shallow), set()).add(k)
            if k not in depth:
                if len(depth) >= budget:
                    exceeded = True
                    continue
                depth[k] = d + 1
                queue.append((r, k, d + 1))
            out.add(k)
    index = {k: i for i, k in enumerate(normal)}
    first_steps = {}
    for label, starts in roots.items():
        seen, stack = set(starts), list(starts)
        while stack:
            x = stack.pop()
            if x in index:
                first_steps.setdefault(index[x], []).append(label)
            for y in succ.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    first_steps = {i: sorted(v) for i, v in first_steps.items()}
    return Exploration(len(depth), normal, normal_proofs, frontier, exceeded, deepest, errors,
                       first_steps, bad)


__all__ = [
    "ReductionError", "ReductionStep", "reduce_cut", "reduce_forall", "orland_normalize",
    "is_orland_normal", "eliminate_cuts", "enumerate_reductions", "canonical_key",
    "choose_forall", "find_cut", "order_profile", "successors", "Exploration",
]
