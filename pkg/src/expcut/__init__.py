"""Expansion proofs with cut: checking, cut reduction and translation to LK."""

from .cutelim import eliminate_cuts, enumerate_reductions
from .expansion import Cut, Proof, deep_sequent, show_proof
from .lk import expansion_of, lk_check, sequentialize
from .order import check_proof, dependency_edges
from .parser import parse_formula, parse_lk, parse_proof, parse_tree
from .rewrite import merge_normalize, merge_proofs, subst_proof
from .syntax import dual, show
from .taut import check_tautology, is_tautology

__version__ = "0.1.0"

__all__ = [
    "Cut", "Proof", "check_proof", "check_tautology", "deep_sequent", "dependency_edges", "dual",
    "eliminate_cuts", "enumerate_reductions", "expansion_of", "is_tautology", "lk_check", "merge_normalize",
    "merge_proofs", "parse_formula", "parse_lk", "parse_proof", "parse_tree", "sequentialize", "show",
    "show_proof", "subst_proof",
]
