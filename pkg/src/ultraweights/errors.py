"""Exception types shared across the package."""


class UltraweightsError(Exception):
    """Base class for domain errors raised by this package."""


class DivergentTail(UltraweightsError):
    """A reciprocal-quotient tail sum has no finite upper bracket."""


class NotAWeightSequence(UltraweightsError):
    """Operation requires log-convexity / increasing quotients and the input lacks them."""


class TruncationExhausted(UltraweightsError):
    """An index scan hit the finite domain of an array-backed sequence."""


class UnboundedConjugate(UltraweightsError):
    """Young-conjugate maximization found no finite bracket (growth is at most logarithmic)."""


class QuasianalyticInput(UltraweightsError):
    """Integral transform refused: the weight grows too fast for a convergent tail."""


class EnvelopeRequired(UltraweightsError):
    """Integral transform refused: no certified growth envelope is attached."""


class MaximizerUnbounded(UltraweightsError):
    """Sup over the radial grid kept increasing up to the hard cap."""


class CatalogError(UltraweightsError):
    """Unknown catalog entry or malformed entry URI."""
