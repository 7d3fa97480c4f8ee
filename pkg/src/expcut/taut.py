"""Propositional validity of quantifier-free sequents.

Atoms are compared by their printed form.  A sequent is valid iff the
conjunction of the duals of its members is unsatisfiable; that conjunction
is turned into clauses (by distribution for small inputs, otherwise by
polarity-aware definitional clausification) and handed to a DPLL search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .syntax import And, Bot, Lit, Or, Top, big_and, dual, is_quantifier_free, show

NAIVE_ATOM_LIMIT = 12
NAIVE_CLAUSE_LIMIT = 4096


def atom_key(lit: Lit) -> str:
    return str(lit.atom())


def evaluate(f, model: dict) -> bool:
    """Truth value under ``model`` (printed atom -> bool); missing atoms are false."""
    if isinstance(f, Lit):
        v = model.get(atom_key(f), False)
        return v if f.positive else not v
    if isinstance(f, And):
        return evaluate(f.left, model) and evaluate(f.right, model)
    if isinstance(f, Or):
        return evaluate(f.left, model) or evaluate(f.right, model)
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    raise ValueError("not quantifier-free: %s" % show(f))


def prop_atoms(f, out=None) -> list:
    """Atom keys in order of first occurrence."""
    out = [] if out is None else out
    if isinstance(f, Lit):
        k = atom_key(f)
        if k not in out:
            out.append(k)
    elif isinstance(f, (And, Or)):
        prop_atoms(f.left, out)
        prop_atoms(f.right, out)
    return out


@dataclass
class TautResult:
    valid: bool
    countermodel: Optional[dict] = None
    atoms: list = field(default_factory=list)

    def __bool__(self):
        return self.valid


def _simplify(f):
    if isinstance(f, (And, Or)):
        a, b = _simplify(f.left), _simplify(f.right)
        unit, zero = (Top, Bot) if isinstance(f, And) else (Bot, Top)
        if isinstance(a, zero) or isinstance(b, zero):
            return zero()
        if isinstance(a, unit):
            return b
        if isinstance(b, unit):
            return a
        return type(f)(a, b)
    return f


class _Clausifier:
    def __init__(self):
        self.index = {}
        self.names = []
        self.clauses = []

    def var(self, key) -> int:
        if key not in self.index:
            self.names.append(key)
            self.index[key] = len(self.names)
        return self.index[key]

    def lit(self, l: Lit) -> int:
        v = self.var(atom_key(l))
        return v if l.positive else -v

    # distribution
    def cnf(self, f) -> list:
        if isinstance(f, Lit):
            return [frozenset([self.lit(f)])]
        if isinstance(f, And):
            return self.cnf(f.left) + self.cnf(f.right)
        if isinstance(f, Or):
            left, right = self.cnf(f.left), self.cnf(f.right)
            if len(left) * len(right) > NAIVE_CLAUSE_LIMIT:
                raise OverflowError
            out = []
            for a in left:
                for b in right:
                    c = a | b
                    if not any(-x in c for x in c):
                        out.append(c)
            return out
        raise TypeError(f)

    # definitional, positive polarity only: x -> f
    def define(self, f) -> int:
        if isinstance(f, Lit):
            return self.lit(f)
        x = self.var(("#def", len(self.names)))
        a, b = self.define(f.left), self.define(f.right)
        if isinstance(f, And):
            self.clauses.append(frozenset([-x, a]))
            self.clauses.append(frozenset([-x, b]))
        else:
            self.clauses.append(frozenset([-x, a, b]))
        return x


def dpll(clauses: list, nvars: int) -> Optional[dict]:
    """A satisfying assignment (var -> bool) or ``None``."""
    clauses = [list(c) for c in clauses]
    occurs = {}
    for i, c in enumerate(clauses):
        for l in c:
            occurs.setdefault(-l, []).append(i)
    assign = {}
    trail = []

    def value(l):
        v = assign.get(abs(l))
        if v is None:
            return None
        return v if l > 0 else not v

    def propagate(start):
        queue = list(start)
        while queue:
            l = queue.pop()
            for ci in occurs.get(l, ()):
                unassigned = None
                count = 0
                sat = False
                for x in clauses[ci]:
                    v = value(x)
                    if v is True:
                        sat = True
                        break
                    if v is None:
                        count += 1
                        unassigned = x
                        if count > 1:
                            break
                if sat or count > 1:
                    continue
                if count == 0:
                    return False
                assign[abs(unassigned)] = unassigned > 0
                trail.append(abs(unassigned))
                queue.append(unassigned)
        return True

    def set_lit(l):
        assign[abs(l)] = l > 0
        trail.append(abs(l))
        return propagate([l])

    def undo(mark):
        while len(trail) > mark:
            del assign[trail.pop()]

    for c in clauses:
        if not c:
            return None
    units = [c[0] for c in clauses if len(c) == 1]
    for u in units:
        v = value(u)
        if v is False:
            return None
        if v is None and not set_lit(u):
            return None

    def choose():
        best, score = None, -1
        counts = {}
        for c in clauses:
            if any(value(x) is True for x in c):
                continue
            free = [x for x in c if value(x) is None]
            for x in free:
                counts[x] = counts.get(x, 0) + (4 if len(free) == 2 else 1)
        for x, s in counts.items():
            if s > score:
                best, score = x, s
        return best

    def search():
        l = choose()
        if l is None:
            return True
        for cand in (l, -l):
            mark = len(trail)
            if set_lit(cand) and search():
                return True
            undo(mark)
        return False

    if not search():
        return None
    return {v: assign.get(v, False) for v in range(1, nvars + 1)}


def check_tautology(seq) -> TautResult:
    seq = list(seq)
    for f in seq:
        if not is_quantifier_free(f):
            raise ValueError("quantifier in sequent member %s" % show(f))
    atoms = []
    for f in seq:
        prop_atoms(f, atoms)
    neg = _simplify(big_and(dual(f) for f in seq))
    if isinstance(neg, Bot):
        return TautResult(True, None, atoms)
    if isinstance(neg, Top):
        return TautResult(False, {a: False for a in atoms}, atoms)
    cl = _Clausifier()
    for a in atoms:
        cl.var(a)
    clauses = None
    if len(atoms) <= NAIVE_ATOM_LIMIT:
        try:
            clauses = cl.cnf(neg)
        except OverflowError:
            clauses = None
    if clauses is None:
        cl.clauses = []
        root = cl.define(neg)
        clauses = cl.clauses + [frozenset([root])]
    sol = dpll(clauses, len(cl.names))
    if sol is None:
        return TautResult(True, None, atoms)
    model = {a: sol[cl.index[a]] for a in atoms}
    if any(evaluate(f, model) for f in seq):
        raise AssertionError("countermodel does not falsify the sequent")
    return TautResult(False, model, atoms)


def is_tautology(seq) -> bool:
    return check_tautology(seq).valid


def equivalent(f, g) -> bool:
    """Logical equivalence of two quantifier-free formulas."""
    return is_tautology([dual(f), g]) and is_tautology([dual(g), f])
