"""Translate between LK and expansion proofs on a few random samples."""

import random

from expcut.expansion import show_proof
from expcut.gen import random_expansion_proof, random_lk
from expcut.lk import expansion_of, lk_check, sequentialize, show_lk
from expcut.order import check_proof


def main(seed=3):
    rng = random.Random(seed)
    pi = random_lk(rng, depth=3, cut_rate=0.5, formula_depth=2)
    print(show_lk(pi))
    p = expansion_of(pi)
    print(show_proof(p))
    print("LK violations:", lk_check(pi), " expansion proof:", check_proof(p).ok)

    q = random_expansion_proof(rng, max_nodes=20)
    print("\n" + show_proof(q))
    sigma = sequentialize(q)
    print(show_lk(sigma))
    print("LK violations:", lk_check(sigma), " size:", sigma.size())


if __name__ == "__main__":
    main()
