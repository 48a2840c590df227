from ._inventory import inventory_without, load_inventory, swap_inventory
from ._model import (
    DEFAULT_INVENTORY,
    PLACEHOLDER,
    ExtremesPartition,
    GrammaticalRole,
    MaskedSentence,
    PronounInventory,
    ScoredSentence,
)
from ._score import (
    EPSILON,
    aggregate_pronoun_probabilities,
    anthroscore_sentence,
    entity_means,
    mean_anthroscore,
    partition_extremes,
    score_distribution,
)

__all__ = (
    "DEFAULT_INVENTORY",
    "EPSILON",
    "PLACEHOLDER",
    "ExtremesPartition",
    "GrammaticalRole",
    "MaskedSentence",
    "PronounInventory",
    "ScoredSentence",
    "aggregate_pronoun_probabilities",
    "anthroscore_sentence",
    "entity_means",
    "inventory_without",
    "load_inventory",
    "mean_anthroscore",
    "partition_extremes",
    "score_distribution",
    "swap_inventory",
)
