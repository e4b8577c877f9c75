"""Verification toolkit for hidden-variable models, steering and complementarity
in general probabilistic theories.

Modules
-------
tables
    2x2 probability tables, behaviors, the determinant criterion, tetrahedron data.
hvt
    Hidden-variable models and their locality predicates.
lp
    Dense simplex (compiled kernel with a numpy fallback).
gpt
    Polytopal theories: propositions, sharp states, complementarity, discrimination.
quantum
    Density matrices, Born-rule tables, steering, the cat scenarios.
steering
    Assemblages, ensembles and the steering/determinant certificates.
serialize
    JSON and CSV formats.
cli
    The ``gptcheck`` command.
oracle
    Vertex-enumeration LP solver used to cross-check the simplex.
"""

from ._tolerance import eps, tolerance
from .lp import BACKEND
from .tables import JointTable, Purity, Verdict, spooky_determinant, spooky_verdict

__version__ = "0.1.0"

__all__ = ["eps", "tolerance", "BACKEND", "JointTable", "Purity", "Verdict",
           "spooky_determinant", "spooky_verdict"]
