"""
Exceptions raised across anthroscan.

Everything derives from :class:`AnthroscanError`, so the command line can
report any of them with a one-line message. Errors caused by bad input values
also subclass :class:`ValueError`.
"""


class AnthroscanError(Exception):
    pass


class ConfigError(AnthroscanError, ValueError):
    """An invalid configuration value. `field` names the offending setting."""

    def __init__(self, field: str, reason: str) -> None:
        super().__init__(f"{field}: {reason}")
        self.field = field
        self.reason = reason


# --- Scoring ---------------------------------------------------------------


class InventoryError(AnthroscanError, ValueError):
    """The pronoun inventory is malformed (empty, duplicated or overlapping sets)."""


class ZeroProbabilityMass(AnthroscanError, ArithmeticError):
    """A pronoun set summed to zero, so no log-ratio can be taken."""

    def __init__(self, which: str) -> None:
        super().__init__(f"zero probability mass for {which} pronouns")
        self.which = which


class MissingPronoun(AnthroscanError, KeyError):
    def __init__(self, pronouns) -> None:
        self.pronouns = tuple(sorted(pronouns))
        super().__init__(f"distribution lacks pronouns: {', '.join(self.pronouns)}")

    def __str__(self) -> str:
        return self.args[0]


class EmptyCollection(AnthroscanError, ValueError):
    pass


class InvalidThresholds(AnthroscanError, ValueError):
    pass


class MaskError(AnthroscanError, ValueError):
    """A masked sentence breaks its own invariants."""


class OverlappingMask(MaskError):
    pass


# --- Backends --------------------------------------------------------------


class BackendError(AnthroscanError):
    pass


class BackendUnreachable(BackendError):
    pass


class MaskTokenizationError(BackendError):
    """The model could not place exactly one mask token in the text."""


class VocabularyMiss(BackendError):
    def __init__(self, pronoun: str, model_id: str) -> None:
        super().__init__(f"pronoun {pronoun!r} has no vocabulary entry in {model_id!r}")
        self.pronoun = pronoun
        self.model_id = model_id


class CacheCorruption(BackendError):
    pass


class CacheMiss(BackendError, KeyError):
    def __str__(self) -> str:
        return self.args[0]


# --- Text ------------------------------------------------------------------


class CorpusFormatError(AnthroscanError, ValueError):
    def __init__(self, path, line_number: int, reason: str) -> None:
        super().__init__(f"{path}:{line_number}: {reason}")
        self.path = path
        self.line_number = line_number
        self.reason = reason


class LexiconError(AnthroscanError, ValueError):
    pass


class ConlluParseError(AnthroscanError, ValueError):
    pass


# --- Analytics -------------------------------------------------------------


class DegenerateInput(AnthroscanError, ValueError):
    pass


class ZeroMarginal(AnthroscanError, ValueError):
    pass


class EmptyGroup(AnthroscanError, ValueError):
    pass


class EmptyCorpus(AnthroscanError, ValueError):
    pass


class UnknownPronoun(AnthroscanError, KeyError):
    def __str__(self) -> str:
        return self.args[0]


class LastPronoun(AnthroscanError, ValueError):
    """Removing the pronoun would leave one side of the inventory empty."""
