"""Workbench for four-valued logics with cyclic negation.

Two matrices over the values T, TU, F, FU share a negation of period four
and the designated set {T, TU}; they differ in order (a diamond ``4q`` and a
chain ``4lq``). Each has a binary-consequence calculus (``cnl`` and
``cnll``). The package decides consequence with countermodels, checks and
searches proofs, and verifies the double-negation embedding of classical
logic.
"""

from .formula import (And, Neg, Or, Sequent, Var, parse_formula, parse_sequent,
                      render_formula, render_sequent)
from .matrix import (ANTI, F, FU, T, TU, LogicMatrix, TruthValue, Verdict,
                     decide_consequence, evaluate, preset_matrix, rotate, truth_table)
from .proofs import SystemId, check_proof, parse_proof, render_proof, schemata_of
from .search import SearchConfig, find_proof, saturate

__all__ = [
    "And", "Neg", "Or", "Sequent", "Var", "parse_formula", "parse_sequent",
    "render_formula", "render_sequent", "ANTI", "F", "FU", "T", "TU", "LogicMatrix",
    "TruthValue", "Verdict", "decide_consequence", "evaluate", "preset_matrix",
    "rotate", "truth_table", "SystemId", "check_proof", "parse_proof", "render_proof",
    "schemata_of", "SearchConfig", "find_proof", "saturate",
]
