try:
    from ._version import version as __version__
except ImportError:
    __version__ = "Unknown/Not Installed"

from .scoring import (
    DEFAULT_INVENTORY,
    MaskedSentence,
    PronounInventory,
    ScoredSentence,
    anthroscore_sentence,
    mean_anthroscore,
    partition_extremes,
)

__all__ = (
    "DEFAULT_INVENTORY",
    "MaskedSentence",
    "PronounInventory",
    "ScoredSentence",
    "__version__",
    "anthroscore_sentence",
    "mean_anthroscore",
    "partition_extremes",
)
