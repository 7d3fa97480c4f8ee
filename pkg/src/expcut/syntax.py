"""First-order terms and formulas in negation normal form.

Formulas are immutable and hashable.  Negation only occurs on atoms; the
de Morgan dual of a formula is computed by :func:`dual`.  ``Bot`` and ``Top``
exist only as the values of empty disjunctions/conjunctions produced by deep
formulas; the parser never produces them from quantified input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union


class CaptureError(ValueError):
    """A substitution would capture a variable under a quantifier."""


def _cache_hash(cls):
    # formulas are hashed over and over as dict keys; compute once per object
    base = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = base(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@_cache_hash
@dataclass(frozen=True)
class App:
    fun: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.fun
        return "%s(%s)" % (self.fun, ",".join(str(a) for a in self.args))


Term = Union[Var, App]


def const(name: str) -> App:
    return App(name, ())


def term_vars(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    out = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def subst_term(t: Term, sigma: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if not t.args:
        return t
    return App(t.fun, tuple(subst_term(a, sigma) for a in t.args))


def term_key(t: Term):
    """Structural total order on terms, used for canonical instance lists."""
    if isinstance(t, Var):
        return (0, t.name)
    return (1, t.fun, len(t.args), tuple(term_key(a) for a in t.args))


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


# ---------------------------------------------------------------------------
# formulas


@_cache_hash
@dataclass(frozen=True)
class Lit:
    pred: str
    args: tuple = ()
    positive: bool = True

    def atom(self) -> "Lit":
        return self if self.positive else Lit(self.pred, self.args, True)

    def __str__(self):
        body = self.pred
        if self.args:
            body += "(%s)" % ",".join(str(a) for a in self.args)
        return body if self.positive else "~" + body


@_cache_hash
@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return show(self)


@_cache_hash
@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return show(self)


@_cache_hash
@dataclass(frozen=True)
class Ex:
    var: str
    body: "Formula"

    def __str__(self):
        return show(self)


@_cache_hash
@dataclass(frozen=True)
class All:
    var: str
    body: "Formula"

    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class Bot:
    def __str__(self):
        return "$false"


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return "$true"


Formula = Union[Lit, And, Or, Ex, All, Bot, Top]


def neg(pred: str, *args: Term) -> Lit:
    return Lit(pred, tuple(args), False)


def pos(pred: str, *args: Term) -> Lit:
    return Lit(pred, tuple(args), True)


def big_or(parts: Iterable[Formula]) -> Formula:
    """Left-associated disjunction; the empty disjunction is ``Bot``."""
    out = None
    for p in parts:
        out = p if out is None else Or(out, p)
    return Bot() if out is None else out


def big_and(parts: Iterable[Formula]) -> Formula:
    out = None
    for p in parts:
        out = p if out is None else And(out, p)
    return Top() if out is None else out


def dual(f: Formula) -> Formula:
    if isinstance(f, Lit):
        return Lit(f.pred, f.args, not f.positive)
    if isinstance(f, And):
        return Or(dual(f.left), dual(f.right))
    if isinstance(f, Or):
        return And(dual(f.left), dual(f.right))
    if isinstance(f, Ex):
        return All(f.var, dual(f.body))
    if isinstance(f, All):
        return Ex(f.var, dual(f.body))
    if isinstance(f, Bot):
        return Top()
    if isinstance(f, Top):
        return Bot()
    raise TypeError(f)


def is_literal(f: Formula) -> bool:
    return isinstance(f, Lit)


def is_positive(f: Formula) -> bool:
    """Top connective is a disjunction, an existential or a positive atom."""
    if isinstance(f, Lit):
        return f.positive
    return isinstance(f, (Or, Ex, Bot))


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Ex, All)):
        return False
    if isinstance(f, (And, Or)):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return True


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, (Ex, All)):
        return 1 + quantifier_depth(f.body)
    if isinstance(f, (And, Or)):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 0


def free_vars(x) -> set:
    """Free variables of a term or a formula."""
    if isinstance(x, (Var, App)):
        return term_vars(x)
    if isinstance(x, Lit):
        out = set()
        for a in x.args:
            out |= term_vars(a)
        return out
    if isinstance(x, (And, Or)):
        return free_vars(x.left) | free_vars(x.right)
    if isinstance(x, (Ex, All)):
        return free_vars(x.body) - {x.var}
    if isinstance(x, (Bot, Top)):
        return set()
    raise TypeError(x)


def bound_vars(f: Formula) -> set:
    if isinstance(f, (And, Or)):
        return bound_vars(f.left) | bound_vars(f.right)
    if isinstance(f, (Ex, All)):
        return {f.var} | bound_vars(f.body)
    return set()


def atoms(f: Formula) -> set:
    """Positive atoms occurring in ``f``."""
    if isinstance(f, Lit):
        return {f.atom()}
    if isinstance(f, (And, Or)):
        return atoms(f.left) | atoms(f.right)
    if isinstance(f, (Ex, All)):
        return atoms(f.body)
    return set()


def apply_subst(f: Formula, sigma: Mapping[str, Term]) -> Formula:
    """Simultaneous substitution of free variables.

    Raises :class:`CaptureError` if a term of the range would be captured by
    a quantifier of ``f``; rectified input never triggers this.
    """
    if not sigma:
        return f
    return _subst(f, dict(sigma))


def _subst(f, sigma):
    if isinstance(f, Lit):
        if not f.args:
            return f
        return Lit(f.pred, tuple(subst_term(a, sigma) for a in f.args), f.positive)
    if isinstance(f, And):
        return And(_subst(f.left, sigma), _subst(f.right, sigma))
    if isinstance(f, Or):
        return Or(_subst(f.left, sigma), _subst(f.right, sigma))
    if isinstance(f, (Ex, All)):
        inner = {k: v for k, v in sigma.items() if k != f.var}
        if not inner:
            return f
        body_free = free_vars(f.body)
        for k, v in inner.items():
            if k in body_free and f.var in term_vars(v):
                raise CaptureError("substituting %s for %s captures %s" % (v, k, f.var))
        return type(f)(f.var, _subst(f.body, inner))
    return f


def instantiate(f: Union[Ex, All], t: Term) -> Formula:
    """Body of a quantified formula with the bound variable replaced by ``t``."""
    return apply_subst(f.body, {f.var: t})


def rectify(f: Formula, avoid: Iterable[str] = ()) -> Formula:
    """Rename bound variables apart from each other and from ``avoid``.

    Quantifiers whose variable is already distinct keep their name, so a
    rectified formula is returned unchanged.
    """
    used = set(avoid) | free_vars(f)
    supply = VarSupply(used | bound_vars(f))
    seen = set(used)

    def go(g):
        if isinstance(g, (And, Or)):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, (Ex, All)):
            v = g.var
            body = g.body
            if v in seen:
                new = supply.fresh(v)
                body = apply_subst(body, {v: Var(new)})
                v = new
            seen.add(v)
            return type(g)(v, go(body))
        return g

    return go(f)


# ---------------------------------------------------------------------------
# printing

_PREC = {Or: 1, And: 2}


def show(f: Formula) -> str:
    """Concrete syntax: ``~P(t)``, ``&``, ``|``, ``ex x A``, ``all x A``."""
    if isinstance(f, (Lit, Bot, Top)):
        return str(f)
    if isinstance(f, (Ex, All)):
        kw = "ex" if isinstance(f, Ex) else "all"
        return "%s %s %s" % (kw, f.var, show_unary(f.body))
    op = " | " if isinstance(f, Or) else " & "
    p = _PREC[type(f)]
    left = show(f.left)
    if _PREC.get(type(f.left), 9) < p:
        left = "(%s)" % left
    right = show(f.right)
    if _PREC.get(type(f.right), 9) <= p:
        right = "(%s)" % right
    return left + op + right


def show_unary(f: Formula) -> str:
    if isinstance(f, (And, Or)):
        return "(%s)" % show(f)
    return show(f)


# ---------------------------------------------------------------------------
# fresh names

_SUFFIX = re.compile(r"^(.*?)_(\d+)$")


def name_stem(name: str) -> str:
    m = _SUFFIX.match(name)
    return m.group(1) if m else name


def name_key(name: str):
    """Orders ``alpha < alpha_1 < alpha_2 < alpha_10``."""
    m = _SUFFIX.match(name)
    if m:
        return (m.group(1), int(m.group(2)))
    return (name, 0)


@dataclass
class VarSupply:
    """Deterministic generator of names ``base_k`` avoiding reserved names."""

    used: set = field(default_factory=set)
    counters: dict = field(default_factory=dict)

    def reserve(self, *names: str):
        self.used.update(names)

    def fresh(self, base: str) -> str:
        stem = name_stem(base)
        k = self.counters.get(stem, 1)
        while "%s_%d" % (stem, k) in self.used:
            k += 1
        name = "%s_%d" % (stem, k)
        self.counters[stem] = k + 1
        self.used.add(name)
        return name
