"""Concrete syntax for formulas, expansion trees, expansion proofs and LK proofs.

A bare identifier in term position denotes a variable when it is bound by an
enclosing quantifier, is the eigenvariable of some ``+^name`` (or
``forall[..; name]``) in the same document, or is declared by a ``vars``
statement.  Every other identifier is a constant.  Function application
requires the parenthesis to follow the symbol without whitespace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import All, And, App, Bot, Ex, Lit, Or, Top, Var, rectify

KEYWORDS = {"ex", "all"}


class ParseError(ValueError):
    def __init__(self, msg, line=0, col=0):
        super().__init__("%d:%d: %s" % (line, col, msg))
        self.msg = msg
        self.line = line
        self.col = col


@dataclass
class Tok:
    kind: str  # "id", "sym", "eof"
    text: str
    line: int
    col: int
    glued: bool  # no whitespace before this token


_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<id>[A-Za-z0-9_']+|\$true|\$false)|(?P<sym>⊔|[()\[\],;~&|+^{}:=])")


def tokenize(text: str) -> list:
    out = []
    pos = 0
    line, line_start = 1, 0
    glued = False
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character %r" % text[pos], line, pos - line_start + 1)
        kind = m.lastgroup
        if kind is None:
            chunk = m.group(0)
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rfind("\n") + 1
            glued = False
        else:
            out.append(Tok(kind, m.group(0), line, pos - line_start + 1, glued))
            glued = True
        pos = m.end()
    out.append(Tok("eof", "", line, pos - line_start + 1, False))
    return out


def eigen_names(tokens) -> set:
    """Names introduced by ``+^name`` or by ``forall[...; name]`` headers."""
    out = set()
    for i, t in enumerate(tokens):
        if t.text == "^" and i > 0 and tokens[i - 1].text == "+" and tokens[i + 1].kind == "id":
            out.add(tokens[i + 1].text)
        if (t.text == "forall" and i + 1 < len(tokens) and tokens[i + 1].text == "["
                and tokens[i + 1].glued):
            depth = 0
            for j in range(i + 1, len(tokens)):
                if tokens[j].text in "([{":
                    depth += 1
                elif tokens[j].text in ")]}":
                    depth -= 1
                    if depth == 0:
                        break
                elif tokens[j].text == ";" and depth == 1 and tokens[j + 1].kind == "id":
                    out.add(tokens[j + 1].text)
    return out


class Parser:
    def __init__(self, text: str, variables=()):
        self.toks = tokenize(text)
        self.i = 0
        self.variables = set(variables) | eigen_names(self.toks)
        self.bound = []

    # -- helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def eat(self, text) -> Tok:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error("expected %r, found %r" % (text, found))
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "id" or self.tok.text in KEYWORDS or self.tok.text.startswith("$"):
            raise self.error("expected identifier, found %r" % (self.tok.text or "end of input"))
        t = self.tok
        self.i += 1
        return t.text

    def done(self):
        if self.tok.kind != "eof":
            raise self.error("unexpected %r" % self.tok.text)

    # -- terms
    def term(self):
        name = self.ident()
        if self.at("(") and self.tok.glued:
            return App(name, self.args())
        if name in self.bound or name in self.variables:
            return Var(name)
        return App(name, ())

    def args(self) -> tuple:
        self.eat("(")
        out = [self.term()]
        while self.at(","):
            self.eat(",")
            out.append(self.term())
        self.eat(")")
        return tuple(out)

    # -- formulas
    def formula(self):
        left = self.conj()
        while self.at("|"):
            self.eat("|")
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.eat("&")
            left = And(left, self.unary())
        return left

    def unary(self):
        t = self.tok
        if self.at("("):
            self.eat("(")
            f = self.formula()
            self.eat(")")
            return f
        if self.at("~"):
            self.eat("~")
            a = self.atom()
            return Lit(a.pred, a.args, False)
        if t.kind == "id" and t.text in KEYWORDS:
            self.i += 1
            var = self.ident()
            self.bound.append(var)
            try:
                body = self.unary()
            finally:
                self.bound.pop()
            return (Ex if t.text == "ex" else All)(var, body)
        if t.text == "$false":
            self.i += 1
            return Bot()
        if t.text == "$true":
            self.i += 1
            return Top()
        return self.atom()

    def atom(self) -> Lit:
        name = self.ident()
        args = ()
        if self.at("(") and self.tok.glued:
            args = self.args()
        return Lit(name, args, True)

    # -- expansion trees
    def tree(self):
        left = self.tree_or()
        while self.at("⊔"):
            self.eat("⊔")
            from .expansion import Merge
            left = Merge(left, self.tree_or())
        return left

    def tree_or(self):
        from .expansion import Bin
        left = self.tree_and()
        while self.at("|"):
            self.eat("|")
            left = Bin("|", left, self.tree_and())
        return left

    def tree_and(self):
        from .expansion import Bin
        left = self.tree_unary()
        while self.at("&"):
            self.eat("&")
            left = Bin("&", left, self.tree_unary())
        return left

    def tree_unary(self):
        from .expansion import AllNode, ExNode, Inst, Leaf
        t = self.tok
        if self.at("("):
            self.eat("(")
            e = self.tree()
            self.eat(")")
            return e
        if t.kind == "id" and t.text in KEYWORDS:
            sh = self.unary()
            self.eat("[")
            if isinstance(sh, Ex):
                insts = []
                while self.at("+"):
                    self.eat("+")
                    term = self.term()
                    insts.append(Inst(term, self.tree()))
                self.eat("]")
                try:
                    return ExNode(sh, tuple(insts))
                except ValueError as err:
                    raise ParseError(str(err), t.line, t.col) from None
            self.eat("+")
            self.eat("^")
            eigen = self.ident()
            child = self.tree()
            self.eat("]")
            return AllNode(sh, eigen, child)
        f = self.unary()
        if not isinstance(f, Lit):
            raise self.error("expected a literal or expansion tree", t)
        return Leaf(f)

    # -- proofs
    def var_decl(self):
        names = [self.ident()]
        while self.at(","):
            self.eat(",")
            names.append(self.ident())
        self.eat(";")
        self.variables.update(names)

    def proof(self):
        from .expansion import Cut, Proof
        cuts, trees = [], []
        while self.tok.kind != "eof":
            t = self.tok
            if self.at("vars"):
                self.i += 1
                self.var_decl()
            elif self.at("cut"):
                self.i += 1
                self.eat("(")
                a = self.tree()
                self.eat(",")
                b = self.tree()
                self.eat(")")
                self.eat(";")
                cuts.append(Cut(a, b))
            elif self.at("tree"):
                self.i += 1
                trees.append(self.tree())
                self.eat(";")
            else:
                raise self.error("expected 'cut', 'tree' or 'vars', found %r" % t.text)
        return Proof(tuple(cuts), tuple(trees))

    # -- LK proofs
    def sequent(self) -> frozenset:
        self.eat("{")
        out = []
        if not self.at("}"):
            out.append(self.formula())
            while self.at(","):
                self.eat(",")
                out.append(self.formula())
        self.eat("}")
        return frozenset(out)

    def lk(self):
        from .lk import LKNode, RULES
        t = self.tok
        rule = self.ident()
        if rule not in RULES:
            raise self.error("unknown rule %r" % rule, t)
        self.eat("[")
        principal = self.formula()
        aux = None
        if self.at(";"):
            self.eat(";")
            if rule == "forall":
                aux = self.ident()
            else:
                aux = self.term()
        self.eat("]")
        concl = self.sequent()
        prem = []
        if self.at("("):
            self.eat("(")
            if not self.at(")"):
                prem.append(self.lk())
                while self.at(","):
                    self.eat(",")
                    prem.append(self.lk())
            self.eat(")")
        return LKNode(rule, principal, aux, concl, tuple(prem))

    def lk_document(self):
        while self.at("vars"):
            self.i += 1
            self.var_decl()
        p = self.lk()
        self.done()
        return p


def parse_formula(text: str, variables=(), rect: bool = False):
    p = Parser(text, variables)
    f = p.formula()
    p.done()
    return rectify(f) if rect else f


def parse_term(text: str, variables=()):
    p = Parser(text, variables)
    t = p.term()
    p.done()
    return t


def parse_tree(text: str, variables=()):
    p = Parser(text, variables)
    e = p.tree()
    p.done()
    return e


def parse_proof(text: str, variables=()):
    p = Parser(text, variables)
    if p.tok.kind == "eof":
        raise ParseError("empty input", 1, 1)
    return p.proof()


def parse_lk(text: str, variables=()):
    p = Parser(text, variables)
    if p.tok.kind == "eof":
        raise ParseError("empty input", 1, 1)
    return p.lk_document()


def parse_formulas(text: str) -> list:
    """A formula document: ``formula NAME = A;`` statements. Returns (name, formula) pairs."""
    p = Parser(text)
    out = []
    if p.tok.kind == "eof":
        raise ParseError("empty input", 1, 1)
    while p.tok.kind != "eof":
        if p.at("vars"):
            p.i += 1
            p.var_decl()
            continue
        p.eat("formula")
        name = p.ident()
        p.eat("=")
        f = p.formula()
        p.eat(";")
        out.append((name, rectify(f)))
    return out


def detect_kind(text: str) -> str:
    """``"proof"``, ``"lk"``, ``"formulas"`` or ``"json"`` from the first statement."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return "json"
    toks = tokenize(text)
    i = 0
    while i < len(toks) and toks[i].text == "vars":
        while i < len(toks) and toks[i].text != ";":
            i += 1
        i += 1
    if i >= len(toks) or toks[i].kind == "eof":
        raise ParseError("empty input", toks[-1].line if toks else 1, 1)
    head = toks[i].text
    nxt = toks[i + 1].text if i + 1 < len(toks) else ""
    if head == "tree" or (head == "cut" and nxt == "("):
        return "proof"
    if head == "formula":
        return "formulas"
    from .lk import RULES
    if head in RULES:
        return "lk"
    raise ParseError("cannot tell what kind of document starts with %r" % head, toks[i].line, toks[i].col)


