"""
Robustness checks: rescoring without one pronoun, and dropping sentences by verb.
"""

from __future__ import annotations

from collections.abc import Collection, Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

import structlog

from anthroscan.errors import DegenerateInput
from anthroscan.scoring import (
    PronounInventory,
    ScoredSentence,
    inventory_without,
    score_distribution,
)
from anthroscan.text import has_verb_morphology, lemmatize_verb, tokenize

from ._stats import spearman

_LOG = structlog.get_logger()


class VerbFilterMode(Enum):
    # Remove sentences containing a lexicon verb anywhere (e.g. reporting verbs).
    DROP_SENTENCES = "drop_sentences"
    # Remove sentences whose triple verb is among the given (top log-odds) verbs.
    DROP_VERBS = "drop_verbs"


@dataclass(frozen=True)
class AblationResult:
    removed: str | None
    inventory: PronounInventory
    original: tuple[ScoredSentence, ...]
    modified: tuple[ScoredSentence, ...]
    # None when the modified scores are all equal, so no rank correlation exists.
    spearman_r: float | None
    p_value: float | None


def ablate_pronoun(
    scores_input: Sequence[ScoredSentence],
    inventory: PronounInventory,
    pronoun_to_remove: str | None,
    backend,
) -> AblationResult:
    """
    Rescore every sentence without one pronoun, and correlate with the
    original scores.

    Distributions are fetched with the full inventory, so a cache filled by
    the original scoring run answers every request. `pronoun_to_remove=None`
    rescores with the full inventory.
    """
    reduced = inventory if pronoun_to_remove is None else inventory_without(
        inventory, pronoun_to_remove
    )
    distributions = backend.fill_mask_many(
        [s.sentence.masked_sentence for s in scores_input], inventory
    )
    modified = tuple(
        score_distribution(dist, reduced, s.sentence)
        for s, dist in zip(scores_input, distributions)
    )

    original_a = [s.score_a for s in scores_input]
    modified_a = [s.score_a for s in modified]
    r: float | None
    p: float | None
    if original_a == modified_a:
        r, p = 1.0, 0.0
    else:
        try:
            r, p = spearman(original_a, modified_a)
        except DegenerateInput as e:
            _LOG.warning("ablation.degenerate", removed=pronoun_to_remove, reason=str(e))
            r = p = None

    _LOG.info("ablation.pronoun", removed=pronoun_to_remove, sentences=len(modified), r=r)
    return AblationResult(
        pronoun_to_remove, reduced, tuple(scores_input), modified, r, p
    )


def filter_by_verbs(
    records: Iterable[ScoredSentence],
    verb_lexicon: Collection[str],
    mode: VerbFilterMode | str = VerbFilterMode.DROP_SENTENCES,
) -> list[ScoredSentence]:
    """
    Drop records by verb, keeping the rest in order.

    `drop_sentences` drops a record when its sentence contains any of the
    lexicon's verbs: the triple's own verb, or another word inflected as a
    verb (-ed, -ing, irregular past) whose lemma is listed. `drop_verbs`
    looks at the triple's verb only, for removing the top log-odds verbs.

    `drop_verbs` keeps records without a triple verb.
    """
    mode = VerbFilterMode(mode)
    verbs = frozenset(v.lower() for v in verb_lexicon)
    if not verbs:
        raise ValueError(f"{mode.value}: the verb list is empty")

    if mode is VerbFilterMode.DROP_VERBS:
        kept = [r for r in records if not _head_verb_in(r, verbs)]
    else:
        kept = [
            r for r in records if not (_head_verb_in(r, verbs) or _mentions_verb(r, verbs))
        ]
    _LOG.debug("ablation.verbs.filtered", mode=mode.value, verbs=len(verbs), kept=len(kept))
    return kept


def _head_verb_in(record: ScoredSentence, verbs: frozenset[str]) -> bool:
    return bool(record.verb_lemma) and record.verb_lemma.lower() in verbs


def _mentions_verb(record: ScoredSentence, verbs: frozenset[str]) -> bool:
    return any(
        has_verb_morphology(t.text) and lemmatize_verb(t.text) in verbs
        for t in tokenize(record.sentence.original_sentence)
    )
