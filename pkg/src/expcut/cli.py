"""Command-line interface.

Exit codes: 0 when the object checks (or the command succeeded), 1 on a
semantic failure, 2 on a parse or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cutelim, lk, order, rewrite
from .expansion import Proof, deep_sequent, proof_from_json, proof_to_json, show_proof
from .parser import ParseError, detect_kind, parse_formulas, parse_lk, parse_proof
from .syntax import show

OK, FAIL, USAGE = 0, 1, 2


class CliError(Exception):
    def __init__(self, msg, code=FAIL):
        super().__init__(msg)
        self.code = code


def load(path: str):
    """``(kind, object)`` with kind one of ``proof``, ``lk``, ``formulas``."""
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise CliError("cannot read %s: %s" % (path, err.strerror), USAGE)
    try:
        kind = detect_kind(text)
        if kind == "json":
            try:
                d = json.loads(text)
            except json.JSONDecodeError as err:
                raise ParseError(err.msg, err.lineno, err.colno)
            if "rule" in d:
                return "lk", lk.lk_from_json(d)
            return "proof", proof_from_json(d)
        if kind == "proof":
            return kind, parse_proof(text)
        if kind == "lk":
            return kind, parse_lk(text)
        return kind, parse_formulas(text)
    except ParseError as err:
        raise CliError("%s: %s" % (path, err), USAGE)


def load_proof(path: str) -> Proof:
    kind, obj = load(path)
    if kind == "lk":
        return lk.expansion_of(obj)
    if kind != "proof":
        raise CliError("%s does not contain an expansion proof" % path, USAGE)
    return obj


def emit_proof(p: Proof, as_json: bool):
    if as_json:
        print(json.dumps(proof_to_json(p), indent=2, ensure_ascii=False))
    else:
        sys.stdout.write(show_proof(p))


def require_proof(p: Proof):
    rep = order.check_proof(p)
    if not rep.ok:
        for line in rep.lines():
            print(line, file=sys.stderr)
        raise CliError("input is not an expansion proof")


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    kind, obj = load(args.path)
    if kind == "formulas":
        for name, f in obj:
            print("%s = %s" % (name, show(f)))
        return OK
    if kind == "lk":
        bad = lk.lk_check(obj)
        for v in bad:
            print(v)
        print("ok: regular LK proof" if not bad else "not an LK proof")
        return FAIL if bad else OK
    rep = order.check_proof(obj)
    for line in rep.lines():
        print(line)
    print("ok: expansion proof" if rep.ok else "not an expansion proof")
    return OK if rep.ok else FAIL


def cmd_elim(args) -> int:
    p = load_proof(args.path)
    require_proof(p)
    try:
        q, steps = cutelim.eliminate_cuts(p, assert_invariants=args.assert_invariants)
    except cutelim.ReductionError as err:
        print(str(err), file=sys.stderr)
        return FAIL
    if args.trace:
        Path(args.trace).write_text(json.dumps([s.to_json() for s in steps], indent=2, ensure_ascii=False) + "\n",
                                    encoding="utf-8")
    emit_proof(q, args.json)
    return OK


def cmd_deps(args) -> int:
    p = load_proof(args.path)
    g = order.dependency_edges(p, allow_merges=True)
    if args.dot:
        sys.stdout.write(g.to_dot())
    else:
        for (u, v) in sorted(g.edges):
            lab = ",".join(str(c) for c in sorted(g.edges[(u, v)]))
            print("%s <0 %s  (%s)" % (g.vertices[u].label, g.vertices[v].label, lab))
    cyc = order.find_cycle(g)
    if cyc is not None:
        print("cycle: " + " < ".join(g.vertices[v].label for v in cyc + cyc[:1]), file=sys.stderr)
        return FAIL
    return OK


def cmd_dp(args) -> int:
    p = load_proof(args.path)
    for f in deep_sequent(p):
        print(show(f))
    return OK


def cmd_sh(args) -> int:
    kind, obj = load(args.path)
    if kind == "lk":
        seq = obj.concl
    elif kind == "proof":
        seq = obj.shallow
    else:
        seq = [f for _, f in obj]
    for f in sorted(seq, key=show) if kind == "lk" else seq:
        print(show(f))
    return OK


def cmd_to_lk(args) -> int:
    p = load_proof(args.path)
    require_proof(p)
    pi = lk.sequentialize(p)
    if args.json:
        print(json.dumps(lk.lk_to_json(pi), indent=2, ensure_ascii=False))
    else:
        sys.stdout.write(lk.show_lk(pi))
    return OK


def cmd_from_lk(args) -> int:
    kind, obj = load(args.path)
    if kind != "lk":
        raise CliError("%s does not contain an LK proof" % args.path, USAGE)
    bad = lk.lk_check(obj)
    if bad:
        for v in bad:
            print(v, file=sys.stderr)
        return FAIL
    emit_proof(lk.expansion_of(obj), args.json)
    return OK


def cmd_explore(args) -> int:
    p = load_proof(args.path)
    require_proof(p)
    try:
        ex = cutelim.enumerate_reductions(p, max_depth=args.depth, budget=args.budget,
                                          time_limit=args.time_limit)
    except ValueError as err:
        raise CliError(str(err))
    print(ex.summary())
    for k, q in enumerate(ex.normal_proofs[:args.show], 1):
        print("--- normal form %d" % k)
        sys.stdout.write(show_proof(q))
    for first, second in ex.divergences()[:args.show]:
        print("--- diverging first steps: %s / %s" % (first, second))
    return OK


def cmd_merge(args) -> int:
    a, b = load_proof(args.a), load_proof(args.b)
    try:
        q = rewrite.merge_proofs(a, b, rename=args.rename)
    except rewrite.MergeError as err:
        print(str(err), file=sys.stderr)
        return FAIL
    emit_proof(q, args.json)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="expcut", description="Expansion proofs with cut: check, reduce, translate.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, json_flag=False):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        if json_flag:
            sp.add_argument("--json", action="store_true", help="print JSON instead of text")
        return sp

    sp = add("check", cmd_check, "check an expansion proof, LK proof or formula file")
    sp.add_argument("path")
    sp = add("elim", cmd_elim, "eliminate cuts", json_flag=True)
    sp.add_argument("path")
    sp.add_argument("--trace", metavar="OUT.json", help="write the reduction steps as JSON")
    sp.add_argument("--assert-invariants", action="store_true", help="re-check the proof after every step")
    sp = add("deps", cmd_deps, "print the dependency relation")
    sp.add_argument("path")
    sp.add_argument("--dot", action="store_true", help="emit a DOT graph")
    sp = add("dp", cmd_dp, "print the deep sequent")
    sp.add_argument("path")
    sp = add("sh", cmd_sh, "print the shallow sequent")
    sp.add_argument("path")
    sp = add("to-lk", cmd_to_lk, "sequentialize an expansion proof", json_flag=True)
    sp.add_argument("path")
    sp = add("from-lk", cmd_from_lk, "translate an LK proof to an expansion proof", json_flag=True)
    sp.add_argument("path")
    sp = add("explore", cmd_explore, "explore all cut-reduction sequences")
    sp.add_argument("path")
    sp.add_argument("--depth", type=int, default=20)
    sp.add_argument("--budget", type=int, default=100000)
    sp.add_argument("--time-limit", type=float, metavar="SECONDS", help="stop exploring after this long")
    sp.add_argument("--show", type=int, default=2, help="number of normal forms and divergences to print")
    sp = add("merge", cmd_merge, "merge two expansion proofs", json_flag=True)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--rename", action="store_true", help="rename the eigenvariables of the second proof apart")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.fn(args)
    except CliError as err:
        print("error: %s" % err, file=sys.stderr)
        return err.code
    except (lk.SequentializationError, cutelim.ReductionError) as err:
        print("error: %s" % err, file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
