"""Context-theoretic semantics toolkit.

Strings, logical forms, taxonomy concepts and link-grammar entries all
live in lattice-ordered algebras carrying a probability functional phi;
one entailment formula phi(x ^ y) / phi(x) works across every
representation.
"""

__version__ = "0.1.0"

from . import corpus, distsim, entail, linkgrammar, logic, munn, riesz, taxonomy, topics
from .errors import ContextAlgebraError

__all__ = [
    "ContextAlgebraError",
    "corpus",
    "distsim",
    "entail",
    "linkgrammar",
    "logic",
    "munn",
    "riesz",
    "taxonomy",
    "topics",
    "__version__",
]
