"""The dependency relation between expansions and cuts, and the measures built on it."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .expansion import (
    AllNode, Bin, ExNode, Merge, Proof, deep_sequent, expansions,
    has_merges, validate_preproof,
)
from .syntax import free_vars, quantifier_depth, show, term_vars
from .taut import check_tautology

CLAUSES = (1, 2, 3, 4)


@dataclass
class Vertex:
    id: int
    kind: str  # "all", "ex" or "cut"
    obj: object
    cut: Optional[int] = None  # id of the cut containing it, if any

    @property
    def label(self) -> str:
        if self.kind == "all":
            return "∀" + self.obj.eigen
        if self.kind == "ex":
            return "∃" + str(self.obj.term)
        return "cut:" + show(self.obj.shallow)


@dataclass
class DependencyGraph:
    vertices: dict = field(default_factory=dict)  # id -> Vertex
    edges: dict = field(default_factory=dict)  # (u, v) -> set of clause numbers, u <0 v

    def add(self, u, v, clause):
        self.edges.setdefault((u, v), set()).add(clause)

    def succ(self) -> dict:
        out = {v: [] for v in self.vertices}
        for (u, v) in self.edges:
            out[u].append(v)
        for v in out:
            out[v].sort()
        return out

    def pred(self) -> dict:
        out = {v: [] for v in self.vertices}
        for (u, v) in self.edges:
            out[v].append(u)
        return out

    def expansions(self) -> list:
        return [v for v in self.vertices.values() if v.kind != "cut"]

    def labelled_edges(self) -> set:
        """Edges as ``(label, label, clause)`` triples, for comparison with hand-written lists."""
        out = set()
        for (u, v), cs in self.edges.items():
            for c in cs:
                out.add((self.vertices[u].label, self.vertices[v].label, c))
        return out

    def less(self, u, v) -> bool:
        """``u < v`` in the transitive closure."""
        succ = self.succ()
        seen = set()
        stack = list(succ[u])
        while stack:
            x = stack.pop()
            if x == v:
                return True
            if x not in seen:
                seen.add(x)
                stack.extend(succ[x])
        return False

    def below(self, v) -> set:
        """All ``u`` with ``u < v``."""
        pred = self.pred()
        seen = set()
        stack = list(pred[v])
        while stack:
            x = stack.pop()
            if x not in seen:
                seen.add(x)
                stack.extend(pred[x])
        return seen

    def to_dot(self) -> str:
        lines = ["digraph deps {"]
        for vid in sorted(self.vertices):
            v = self.vertices[vid]
            shape = "box" if v.kind == "cut" else "ellipse"
            lines.append('  n%d [label="%s", shape=%s];' % (vid, v.label.replace('"', '\\"'), shape))
        for (u, v) in sorted(self.edges):
            lab = ",".join(str(c) for c in sorted(self.edges[(u, v)]))
            lines.append('  n%d -> n%d [label="%s"];' % (u, v, lab))
        lines.append("}")
        return "\n".join(lines) + "\n"


def _vertices(p: Proof, allow_merges: bool) -> dict:
    out = {}
    comps = [(c.id, side) for c in p.cuts for side in c.sides()] + [(None, t) for t in p.trees]
    for cid, e in comps:
        if not allow_merges and has_merges(e):
            raise ValueError("dependency relation needs a merge-free proof")
        for x in expansions(e):
            kind = "all" if isinstance(x, AllNode) else "ex"
            out[x.id] = Vertex(x.id, kind, x, cid)
    for c in p.cuts:
        out[c.id] = Vertex(c.id, "cut", c)
    return out


def dependency_edges(p: Proof, allow_merges: bool = False) -> DependencyGraph:
    g = DependencyGraph(_vertices(p, allow_merges))
    owners = {}
    for v in g.vertices.values():
        if v.kind == "all":
            owners.setdefault(v.obj.eigen, []).append(v.id)
    for v in g.vertices.values():
        if v.kind == "ex":
            for name in term_vars(v.obj.term):
                for u in owners.get(name, ()):
                    g.add(u, v.id, 1)
        if v.kind != "cut":
            for w in expansions(v.obj.child):
                g.add(v.id, w.id, 2)
            if v.cut is not None:
                g.add(v.cut, v.id, 3)
    for c in p.cuts:
        for name in free_vars(c.shallow):
            for u in owners.get(name, ()):
                g.add(u, c.id, 4)
    return g


def find_cycle(g: DependencyGraph) -> Optional[list]:
    """``None`` if acyclic, else the shortest cycle through the least id lying on a cycle."""
    succ = g.succ()
    on_cycle = _cyclic_vertices(g, succ)
    if not on_cycle:
        return None
    start = min(on_cycle)
    parent = {}
    queue = deque([start])
    seen = {start}
    while queue:
        x = queue.popleft()
        for y in succ[x]:
            if y == start:
                path = [x]
                while path[-1] != start:
                    path.append(parent[path[-1]])
                return list(reversed(path))
            if y not in seen:
                seen.add(y)
                parent[y] = x
                queue.append(y)
    raise AssertionError("cycle vanished")


def _cyclic_vertices(g, succ) -> set:
    # Tarjan, iterative
    index, low, onstack, stack = {}, {}, set(), []
    out = set()
    counter = [0]
    for root in sorted(g.vertices):
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        onstack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in onstack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) > 1 or (v, v) in g.edges:
                    out.update(comp)
    return out


def is_acyclic(g: DependencyGraph) -> bool:
    return find_cycle(g) is None


# ---------------------------------------------------------------------------
# measures


def rank(x) -> int:
    """Rank of an expansion: one more than the quantifier depth of the formula below it.

    This coincides with the domination-based rank whenever no existential
    node below ``x`` is empty, and it never changes under substitution or
    merging since it only depends on shallow formulas.
    """
    return 1 + quantifier_depth(x.child.shallow)


def domination_rank(x) -> int:
    """``max{rank(u) | x dominates u} + 1`` computed from the tree itself."""
    below = [domination_rank(u) for u in _top(x.child)]
    return max(below, default=0) + 1


def _top(e):
    if isinstance(e, (AllNode,)):
        return [e]
    if isinstance(e, ExNode):
        return list(e.insts)
    if isinstance(e, (Bin, Merge)):
        return _top(e.left) + _top(e.right)
    return []


def degrees(g: DependencyGraph) -> dict:
    """Length of the longest descending chain of expansions, for every expansion."""
    pred = g.pred()
    memo = {}

    def go(v):
        # longest chain strictly below v, counting expansions only
        if v in memo:
            return memo[v]
        memo[v] = None
        best = 0
        for u in pred[v]:
            d = go(u)
            if d is None:
                raise ValueError("degree of a cyclic dependency relation")
            best = max(best, d + (1 if g.vertices[u].kind != "cut" else 0))
        memo[v] = best
        return best

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10000))
    try:
        return {v.id: go(v.id) for v in g.expansions()}
    finally:
        sys.setrecursionlimit(old)


def degree(p: Proof, x) -> int:
    return degrees(dependency_edges(p))[x.id]


def critical(p: Proof) -> list:
    """Expansions occurring in some cut."""
    return [x for c in p.cuts for side in c.sides() for x in expansions(side)]


def proof_rank(p: Proof) -> int:
    return max((rank(x) for x in critical(p)), default=0)


def order_at(p: Proof, r: int) -> int:
    return sum(1 for x in critical(p) if isinstance(x, AllNode) and rank(x) == r)


def order_profile(p: Proof) -> dict:
    out = {}
    for x in critical(p):
        if isinstance(x, AllNode):
            out[rank(x)] = out.get(rank(x), 0) + 1
    return out


def critical_max_set(p: Proof) -> list:
    r = proof_rank(p)
    return [x for x in critical(p) if rank(x) == r]


def dominators(p: Proof) -> dict:
    """id -> set of ids of expansions dominating it."""
    out = {}
    for e in p.components():
        for x in expansions(e):
            out.setdefault(x.id, set())
            for y in expansions(x.child):
                out.setdefault(y.id, set()).add(x.id)
    return out


def dual_expansions(p: Proof) -> dict:
    """id -> set of ids of the dual expansions on the other side of its cut."""
    out = {}

    def link(a, b):
        out.setdefault(a.id, set()).add(b.id)
        out.setdefault(b.id, set()).add(a.id)

    def walk(e, f):
        if isinstance(e, Merge):
            walk(e.left, f)
            walk(e.right, f)
        elif isinstance(f, Merge):
            walk(e, f.left)
            walk(e, f.right)
        elif isinstance(e, Bin) and isinstance(f, Bin):
            walk(e.left, f.left)
            walk(e.right, f.right)
        elif isinstance(e, ExNode) and isinstance(f, AllNode):
            for i in e.insts:
                link(i, f)
                walk(i.child, f.child)
        elif isinstance(e, AllNode) and isinstance(f, ExNode):
            walk(f, e)

    for c in p.cuts:
        walk(c.pos, c.neg)
    return out


# ---------------------------------------------------------------------------
# full check


@dataclass
class CheckReport:
    violations: list = field(default_factory=list)
    cycle: Optional[list] = None
    cycle_labels: Optional[list] = None
    tautology: Optional[bool] = None
    countermodel: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return not self.violations and self.cycle is None and bool(self.tautology)

    def __bool__(self):
        return self.ok

    def lines(self) -> list:
        out = [str(v) for v in self.violations]
        if self.cycle is not None:
            out.append("cyclic dependency: " + " < ".join(self.cycle_labels + self.cycle_labels[:1]))
        if self.tautology is False:
            model = ", ".join("%s=%s" % (k, "T" if v else "F") for k, v in sorted(self.countermodel.items()))
            out.append("deep sequent is not a tautology; countermodel: " + (model or "(empty)"))
        return out


def check_proof(p: Proof) -> CheckReport:
    rep = CheckReport(validate_preproof(p))
    merges = any(v.kind == "MergeNode" for v in rep.violations)
    g = dependency_edges(p, allow_merges=merges)
    cyc = find_cycle(g)
    if cyc is not None:
        rep.cycle = cyc
        rep.cycle_labels = [g.vertices[v].label for v in cyc]
    res = check_tautology(deep_sequent(p))
    rep.tautology = res.valid
    rep.countermodel = res.countermodel
    return rep


def is_expansion_proof(p: Proof) -> bool:
    return check_proof(p).ok
