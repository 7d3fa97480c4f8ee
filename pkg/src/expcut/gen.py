"""Random formulas, expansion trees and LK proofs for property tests."""

from __future__ import annotations

import random
from typing import Optional

from .expansion import AllNode, Bin, ExNode, Inst, Leaf
from .lk import LKNode, premise_sequents
from .syntax import (
    All, And, App, Ex, Lit, Or, Var, VarSupply, dual, free_vars, instantiate, is_quantifier_free, bound_vars,
)

PREDICATES = (("P", 1), ("Q", 1), ("R", 2))
CONSTANTS = ("a", "b")


def random_term(rng: random.Random, pool=(), depth: int = 1):
    choices = [App(c, ()) for c in CONSTANTS] + [Var(v) for v in pool]
    t = rng.choice(choices)
    if depth > 0 and rng.random() < 0.3:
        t = App("f", (random_term(rng, pool, depth - 1),))
    return t


def random_formula(rng: random.Random, depth: int = 3, bound=(), pool=(), quantifiers: bool = True):
    """A rectified NNF formula; free variables come from ``bound`` and ``pool``."""
    counter = [len(bound)]

    def go(d, scope):
        r = rng.random()
        if d <= 0 or r < 0.25:
            name, arity = rng.choice(PREDICATES)
            args = tuple(random_term(rng, tuple(scope) + tuple(pool), 0) for _ in range(arity))
            return Lit(name, args, rng.random() < 0.5)
        if quantifiers and r < 0.6:
            counter[0] += 1
            x = "x%d" % counter[0]
            body = go(d - 1, scope + [x])
            return (Ex if rng.random() < 0.5 else All)(x, body)
        op = And if rng.random() < 0.5 else Or
        return op(go(d - 1, scope), go(d - 1, scope))

    return go(depth, list(bound))


def random_qf_sequent(rng: random.Random, atoms: int, size: int = 3) -> list:
    """Quantifier-free sequent over at most ``atoms`` nullary atoms."""
    names = ["A%d" % k for k in range(atoms)]

    def go(d):
        if d <= 0 or rng.random() < 0.3:
            return Lit(rng.choice(names), (), rng.random() < 0.5)
        return (And if rng.random() < 0.5 else Or)(go(d - 1), go(d - 1))

    return [go(rng.randint(0, 4)) for _ in range(rng.randint(1, size))]


def random_tree(rng: random.Random, f, supply: VarSupply, pool=(), width: int = 2):
    """A random expansion tree of ``f``; ∃-instances use terms over ``pool`` and the eigenvariables above."""
    if isinstance(f, Lit) or is_quantifier_free(f) and not isinstance(f, (And, Or)):
        return Leaf(f)
    if isinstance(f, (And, Or)):
        op = "&" if isinstance(f, And) else "|"
        return Bin(op, random_tree(rng, f.left, supply, pool, width), random_tree(rng, f.right, supply, pool, width))
    if isinstance(f, All):
        a = supply.fresh("e")
        return AllNode(f, a, random_tree(rng, instantiate(f, Var(a)), supply, tuple(pool) + (a,), width))
    insts = {}
    for _ in range(rng.randint(0, width)):
        t = random_term(rng, [v for v in pool if v not in bound_vars(f)])
        if str(t) not in insts:
            insts[str(t)] = Inst(t, random_tree(rng, instantiate(f, t), supply, pool, width))
    return ExNode(f, tuple(insts.values()))


# ---------------------------------------------------------------------------
# LK proofs


class _LKGen:
    def __init__(self, rng: random.Random, supply: VarSupply, cut_rate: float):
        self.rng = rng
        self.supply = supply
        self.cut_rate = cut_rate

    def identity(self, g, concl: frozenset) -> LKNode:
        """Proof of ``concl`` which contains both ``g`` and its dual, by decomposing ``g``."""
        gd = dual(g)
        if isinstance(g, Lit):
            atom = g if g.positive else gd
            return LKNode("init", atom, None, concl)
        if isinstance(g, And):
            g, gd = gd, g
        if isinstance(g, Or):
            # decompose the disjunction, then split the dual conjunction
            c1 = premise_sequents("or", g, None, concl, keep=True)[0]
            left, right = premise_sequents("and", gd, None, c1, keep=True)
            return LKNode("or", g, None, concl, (
                LKNode("and", gd, None, c1, (self.identity(g.left, left), self.identity(g.right, right))),))
        if isinstance(g, All):
            g, gd = gd, g
        # g existential, gd universal
        a = self.supply.fresh("alpha")
        c1 = premise_sequents("forall", gd, a, concl, keep=True)[0]
        inner = self.extra_instances(g, c1, lambda c: self.finish_exists(g, Var(a), c))
        return LKNode("forall", gd, a, concl, (inner,))

    def finish_exists(self, g, t, concl):
        c = premise_sequents("exists", g, t, concl)[0]
        return LKNode("exists", g, t, concl, (self.identity(instantiate(g, t), c),))

    def extra_instances(self, g, concl, k):
        """Optionally add ∃-instances with random terms before continuing with ``k``."""
        if self.rng.random() < 0.3:
            pool = sorted(set().union(*(free_vars(f) for f in concl)))
            t = random_term(self.rng, pool)
            inst = instantiate(g, t)
            c = premise_sequents("exists", g, t, concl)[0]
            if inst not in concl:
                return LKNode("exists", g, t, concl, (k(c),))
        return k(concl)

    def prove(self, core, concl: frozenset, depth: int) -> LKNode:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.2:
            return self.identity(core, concl)
        if rng.random() < self.cut_rate:
            c = self.cut_formula(core, concl)
            c1, c2 = premise_sequents("cut", c, None, concl)
            return LKNode("cut", c, None, concl, (self.prove(core, c1, depth - 1), self.prove(core, c2, depth - 1)))
        cands = sorted((f for f in concl if not isinstance(f, Lit)), key=str)
        if not cands:
            return self.identity(core, concl)
        f = rng.choice(cands)
        keep = f in (core, dual(core)) or rng.random() < 0.5
        if isinstance(f, Or):
            (c1,) = premise_sequents("or", f, None, concl, keep)
            return LKNode("or", f, None, concl, (self.prove(core, c1, depth - 1),))
        if isinstance(f, And):
            c1, c2 = premise_sequents("and", f, None, concl, keep)
            return LKNode("and", f, None, concl, (self.prove(core, c1, depth - 1), self.prove(core, c2, depth - 1)))
        if isinstance(f, All):
            a = self.supply.fresh("beta")
            (c1,) = premise_sequents("forall", f, a, concl, keep)
            return LKNode("forall", f, a, concl, (self.prove(core, c1, depth - 1),))
        pool = sorted(set().union(*(free_vars(g) for g in concl)) - bound_vars(f))
        t = random_term(rng, pool)
        (c1,) = premise_sequents("exists", f, t, concl)
        return LKNode("exists", f, t, concl, (self.prove(core, c1, depth - 1),))

    def cut_formula(self, core, concl):
        rng = self.rng
        r = rng.random()
        fv = sorted(set().union(*(free_vars(f) for f in concl)))
        if r < 0.4:
            return rng.choice(sorted(concl, key=str))
        if r < 0.7:
            return core
        return random_formula(rng, depth=2, pool=fv)


def random_lk(rng: random.Random, depth: int = 4, cut_rate: float = 0.3, formula_depth: int = 3,
              weakenings: int = 1) -> LKNode:
    """A regular LK proof of a sequent containing a dual pair plus random weakenings."""
    core = random_formula(rng, formula_depth)
    side = [random_formula(rng, 2) for _ in range(rng.randint(0, weakenings))]
    concl = frozenset([core, dual(core)] + side)
    names = set()
    for f in concl:
        names |= bound_vars(f) | free_vars(f)
    gen = _LKGen(rng, VarSupply(names), cut_rate)
    return gen.prove(core, concl, depth)


def random_expansion_proof(rng: random.Random, max_nodes: int = 40, with_cuts: bool = True,
                           attempts: int = 200) -> Optional[object]:
    """An expansion proof obtained from a random LK proof, at most ``max_nodes`` nodes."""
    from .lk import expansion_of

    for _ in range(attempts):
        pi = random_lk(rng, depth=rng.randint(2, 4), cut_rate=0.45 if with_cuts else 0.0,
                       formula_depth=rng.randint(1, 3))
        p = expansion_of(pi)
        if p.size() <= max_nodes and (p.cuts or not with_cuts):
            return p
    return None
