"""
The score itself: the log-ratio of human to non-human pronoun probability at
the mask position, and the corpus-level summaries built from it.
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Callable, Hashable, Iterable, Mapping

from anthroscan.errors import (
    EmptyCollection,
    InvalidThresholds,
    MissingPronoun,
    ZeroProbabilityMass,
)

from ._model import ExtremesPartition, MaskedSentence, PronounInventory, ScoredSentence

# Added to every pronoun probability before summing, so exact zeros from a
# backend don't produce infinite scores.
EPSILON = 1e-12


def aggregate_pronoun_probabilities(
    dist: Mapping[str, float], inventory: PronounInventory
) -> tuple[float, float]:
    """
    Sum the human and non-human pronoun probabilities.

    >>> from anthroscan.scoring import DEFAULT_INVENTORY
    >>> h, n = aggregate_pronoun_probabilities(
    ...     {w: 0.01 for w in DEFAULT_INVENTORY.pronouns}, DEFAULT_INVENTORY
    ... )
    >>> round(h, 12), round(n, 12)
    (0.07, 0.04)
    """
    missing = [w for w in inventory.pronouns if w not in dist]
    if missing:
        raise MissingPronoun(missing)
    _check_probabilities(dist, inventory)
    return (
        math.fsum(dist[w] for w in inventory.human),
        math.fsum(dist[w] for w in inventory.non_human),
    )


def anthroscore_sentence(
    sentence: MaskedSentence,
    dist: Mapping[str, float],
    inventory: PronounInventory,
    epsilon: float = EPSILON,
) -> ScoredSentence:
    """
    Score one masked sentence from its pronoun distribution.

    The stored probabilities are the smoothed sums, so that
    ``score_a == ln(p_human / p_non_human)`` holds for the record itself.
    """
    missing = [w for w in inventory.pronouns if w not in dist]
    if missing:
        raise MissingPronoun(missing)
    _check_probabilities(dist, inventory)

    p_human = math.fsum(dist[w] + epsilon for w in inventory.human)
    p_non_human = math.fsum(dist[w] + epsilon for w in inventory.non_human)
    if p_human <= 0:
        raise ZeroProbabilityMass("human")
    if p_non_human <= 0:
        raise ZeroProbabilityMass("non-human")

    return ScoredSentence(
        sentence=sentence,
        p_human=p_human,
        p_non_human=p_non_human,
        score_a=math.log(p_human) - math.log(p_non_human),
    )


def score_distribution(
    distribution,
    inventory: PronounInventory,
    sentence: MaskedSentence,
    epsilon: float = EPSILON,
) -> ScoredSentence:
    """Score a sentence from a backend's PronounDistribution."""
    return anthroscore_sentence(
        sentence, distribution.probabilities, inventory, epsilon=epsilon
    )


def _check_probabilities(dist: Mapping[str, float], inventory: PronounInventory):
    for w in inventory.pronouns:
        p = dist[w]
        if not (p >= 0):
            raise ValueError(f"Probability for {w!r} must be non-negative, got {p!r}")


def mean_anthroscore(scores: Iterable[ScoredSentence | float]) -> float:
    """
    The arithmetic mean score of a collection.

    >>> mean_anthroscore([1.0])
    1.0
    >>> mean_anthroscore([1.0, -1.0])
    0.0
    >>> mean_anthroscore([])
    Traceback (most recent call last):
    ...
    anthroscan.errors.EmptyCollection: cannot take the mean of no scores
    """
    values = [s if isinstance(s, (int, float)) else s.score_a for s in scores]
    if not values:
        raise EmptyCollection("cannot take the mean of no scores")
    return math.fsum(values) / len(values)


def partition_extremes(
    scores: Iterable[ScoredSentence], hi: float = 1.0, lo: float = -1.0
) -> ExtremesPartition:
    """
    Split out the strongly anthropomorphic (score > hi) and strongly
    non-anthropomorphic (score < lo) sentences. Scores equal to a threshold
    belong to neither.
    """
    if not hi > lo:
        raise InvalidThresholds(f"hi ({hi}) must be greater than lo ({lo})")
    return ExtremesPartition.of(scores, hi_threshold=hi, lo_threshold=lo)


def entity_means(
    scores: Iterable[ScoredSentence],
    key: Callable[[ScoredSentence], Hashable] = lambda s: s.sentence.entity_keyword.lower(),
) -> dict[Hashable, tuple[int, float]]:
    """Count and mean score per group, keyed by entity keyword unless told otherwise."""
    groups: dict[Hashable, list[float]] = defaultdict(list)
    for s in scores:
        groups[key(s)].append(s.score_a)
    return {k: (len(v), mean_anthroscore(v)) for k, v in sorted(groups.items())}
