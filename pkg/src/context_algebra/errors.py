"""Exception hierarchy shared by all modules.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented exit statuses: 2 for data/format problems, 3 for numeric
failures (undefined ratios, unparseable sentences).
"""


class ContextAlgebraError(Exception):
    exit_code = 2


# --- data / format errors (exit code 2) ---

class ModeError(ContextAlgebraError):
    """Exact and float values mixed in one expression."""


class WeightError(ContextAlgebraError):
    """Negative weight where a positive linear functional is required."""


class FormatError(ContextAlgebraError):
    """Malformed input file or literal."""


class EmptyCorpus(ContextAlgebraError):
    """Corpus ingestion received no documents."""


class SpanError(ContextAlgebraError):
    """Vector lies outside the span of the chosen algebra basis."""


class BasisError(ContextAlgebraError):
    """Basis strings have linearly dependent context vectors."""


class NormalizeError(ContextAlgebraError):
    """Vector cannot be normalized to a probability distribution."""


class SupportError(ContextAlgebraError):
    """Association function has empty support."""


class SizeError(ContextAlgebraError):
    """Input exceeds a combinatorial guard."""


class RankError(ContextAlgebraError):
    """Requested rank outside 1..min(rows, cols)."""


class DegenerateInput(ContextAlgebraError):
    """All-zero count matrix."""


class AlphaError(ContextAlgebraError):
    """Dirichlet parameter must be strictly positive."""


class NotInLanguage(ContextAlgebraError):
    """Unknown logical class or sentence."""


class ParamError(ContextAlgebraError):
    """Parameter outside its legal range."""


class NormError(ContextAlgebraError):
    """Distribution fails its normalization requirement."""


class AssignmentError(ContextAlgebraError):
    """Sense assignment does not cover all contexts of the word."""


class NotFound(ContextAlgebraError):
    """Unknown taxonomy node."""


class HypothesisError(ContextAlgebraError):
    """A construction's hypothesis is violated (zero weight, zero norm...)."""


class StructureError(ContextAlgebraError):
    """Operation requires a tree-shaped taxonomy."""


class OOV(ContextAlgebraError):
    """Word missing from the lexicon."""


class ParseError(ContextAlgebraError):
    """Malformed expression (categorial category, generator word...)."""


# --- numeric failures (exit code 3) ---

class Undefined(ContextAlgebraError):
    """Entailment ratio with zero denominator."""
    exit_code = 3


class DegenerateCorpus(Undefined):
    """Corpus with zero total context mass."""


class NoParse(Undefined):
    """No disjunct combination survives the product."""
