"""The translated proof-forest counterexample: one quantifier step creates a cut that depends on itself."""

import sys
from importlib import resources

from expcut.cutelim import eliminate_cuts, enumerate_reductions, reduce_cut
from expcut.order import check_proof, dependency_edges, find_cycle
from expcut.parser import parse_proof


def main(seconds=20.0):
    text = resources.files("expcut").joinpath("fixtures/exp/forest_counterexample.exp").read_text()
    p = parse_proof(text)
    print("input is an expansion proof:", check_proof(p).ok)

    for c in p.cuts:
        q, _ = reduce_cut(p, c)
        g = dependency_edges(q)
        cyc = find_cycle(g)
        labels = [g.vertices[v].label for v in cyc] if cyc else []
        print("reducing %s: %d cuts after the step, cycle %s" % (
            c.shallow, len(q.cuts), " < ".join(labels + labels[:1]) if cyc else "none"))

    r, steps = eliminate_cuts(p)
    print("strategy: %d steps, cut-free result with %d nodes, check %s" % (
        len(steps), r.size(), "ok" if check_proof(r).ok else "failed"))

    ex = enumerate_reductions(p, budget=10 ** 5, time_limit=seconds)
    print(ex.summary())


if __name__ == "__main__":
    main(float(sys.argv[1]) if len(sys.argv) > 1 else 20.0)
