"""Check the single-cut example, print its dependencies, then eliminate cuts step by step."""

from importlib import resources

from expcut.cutelim import eliminate_cuts
from expcut.expansion import deep_sequent, show_proof
from expcut.order import check_proof, dependency_edges
from expcut.parser import parse_proof
from expcut.syntax import show


def fixture(name):
    return parse_proof(resources.files("expcut").joinpath("fixtures/exp/%s.exp" % name).read_text())


def main():
    p = fixture("cut_example")
    print(show_proof(p))
    print("deep sequent:")
    for f in deep_sequent(p):
        print("  ", show(f))
    g = dependency_edges(p)
    print("dependencies:")
    for u, v, clause in sorted(g.labelled_edges()):
        print("   %s <0 %s  (clause %d)" % (u, v, clause))
    print("check:", "ok" if check_proof(p).ok else check_proof(p).lines())

    q = fixture("quantifier_walkthrough")
    print("\n" + show_proof(q))
    r, steps = eliminate_cuts(q, assert_invariants=True)
    for k, s in enumerate(steps, 1):
        extra = ""
        if s.kind == "quantifier":
            extra = " terms %s, measure %s -> %s" % ([str(t) for t in s.terms], s.measure[0], s.measure[1])
        print("step %d: %s on %s%s" % (k, s.kind, s.cut_formula, extra))
    print("\ncut-free:\n" + show_proof(r))


if __name__ == "__main__":
    main()
