from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from anthroscan._utils import sha256_hex
from anthroscan.errors import InventoryError, MaskError

# Stands in for the entity inside a MaskedSentence. Backends swap it for
# their own model-specific mask token.
PLACEHOLDER = "[MASK]"


@dataclass(frozen=True)
class PronounInventory:
    """
    The human and non-human pronoun surface forms whose probabilities are
    compared. Matching is exact, so case variants are listed separately.
    """

    human: tuple[str, ...]
    non_human: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "human", tuple(self.human))
        object.__setattr__(self, "non_human", tuple(self.non_human))

        for name, words in (("human", self.human), ("non_human", self.non_human)):
            if not words:
                raise InventoryError(f"{name} pronoun list is empty")
            if any(not isinstance(w, str) or not w for w in words):
                raise InventoryError(f"{name} pronoun list contains an empty entry")
            if len(set(words)) != len(words):
                dupes = sorted({w for w in words if words.count(w) > 1})
                raise InventoryError(f"duplicate {name} pronouns: {', '.join(dupes)}")

        overlap = set(self.human) & set(self.non_human)
        if overlap:
            raise InventoryError(
                f"pronouns listed as both human and non-human: {', '.join(sorted(overlap))}"
            )

    @property
    def pronouns(self) -> tuple[str, ...]:
        return self.human + self.non_human

    def fingerprint(self) -> str:
        """
        An order-insensitive digest of both lists.

        >>> a = PronounInventory(('he', 'she'), ('it',))
        >>> b = PronounInventory(('she', 'he'), ('it',))
        >>> a.fingerprint() == b.fingerprint()
        True
        >>> a.fingerprint() == PronounInventory(('it',), ('he', 'she')).fingerprint()
        False
        """
        return sha256_hex(
            {"human": sorted(self.human), "non_human": sorted(self.non_human)}
        )

    def to_dict(self) -> dict:
        return {"human": list(self.human), "non_human": list(self.non_human)}


DEFAULT_INVENTORY = PronounInventory(
    human=("he", "she", "her", "him", "He", "She", "Her"),
    non_human=("it", "its", "It", "Its"),
)


class GrammaticalRole(Enum):
    SUBJECT = "subject"
    OBJECT = "object"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class MaskedSentence:
    """One entity mention, masked in the context of its sentence."""

    doc_id: str
    original_sentence: str
    masked_sentence: str
    entity_surface: str
    entity_keyword: str
    span: tuple[int, int]
    grammatical_role: GrammaticalRole = GrammaticalRole.UNKNOWN
    verb_lemma: str | None = None
    sentence_index: int = 0
    # Name of the entity lexicon that matched.
    lexicon: str | None = None
    placeholder: str = PLACEHOLDER

    def __post_init__(self) -> None:
        object.__setattr__(self, "span", tuple(self.span))
        start, end = self.span
        if not (0 <= start < end <= len(self.original_sentence)):
            raise MaskError(
                f"span {self.span} out of bounds for a sentence of length "
                f"{len(self.original_sentence)}"
            )
        if self.original_sentence[start:end] != self.entity_surface:
            raise MaskError(
                f"span {self.span} covers {self.original_sentence[start:end]!r}, "
                f"not {self.entity_surface!r}"
            )
        count = self.masked_sentence.count(self.placeholder)
        if count != 1:
            raise MaskError(
                f"masked sentence contains the placeholder {count} times: "
                f"{self.masked_sentence!r}"
            )
        if self.reconstruct() != self.original_sentence:
            raise MaskError(
                f"unmasking {self.masked_sentence!r} does not reproduce the original sentence"
            )

    def reconstruct(self) -> str:
        return self.masked_sentence.replace(self.placeholder, self.entity_surface, 1)

    @property
    def sort_key(self) -> tuple[str, int, int]:
        return self.doc_id, self.sentence_index, self.span[0]

    def to_dict(self) -> dict[str, Any]:
        return {
            "doc_id": self.doc_id,
            "sentence_index": self.sentence_index,
            "original_sentence": self.original_sentence,
            "masked_sentence": self.masked_sentence,
            "entity_surface": self.entity_surface,
            "entity_keyword": self.entity_keyword,
            "span": list(self.span),
            "grammatical_role": self.grammatical_role.value,
            "verb_lemma": self.verb_lemma,
            "lexicon": self.lexicon,
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> MaskedSentence:
        return cls(
            doc_id=doc["doc_id"],
            original_sentence=doc["original_sentence"],
            masked_sentence=doc["masked_sentence"],
            entity_surface=doc["entity_surface"],
            entity_keyword=doc["entity_keyword"],
            span=tuple(doc["span"]),
            grammatical_role=GrammaticalRole(doc.get("grammatical_role", "unknown")),
            verb_lemma=doc.get("verb_lemma"),
            sentence_index=doc.get("sentence_index", 0),
            lexicon=doc.get("lexicon"),
        )


@dataclass(frozen=True)
class ScoredSentence:
    sentence: MaskedSentence
    p_human: float
    p_non_human: float
    score_a: float

    @property
    def doc_id(self) -> str:
        return self.sentence.doc_id

    @property
    def verb_lemma(self) -> str | None:
        return self.sentence.verb_lemma

    def to_dict(self) -> dict[str, Any]:
        return {
            **self.sentence.to_dict(),
            "p_human": self.p_human,
            "p_non_human": self.p_non_human,
            "score_a": self.score_a,
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> ScoredSentence:
        return cls(
            sentence=MaskedSentence.from_dict(doc),
            p_human=doc["p_human"],
            p_non_human=doc["p_non_human"],
            score_a=doc["score_a"],
        )


@dataclass(frozen=True)
class ExtremesPartition:
    """Sentences scoring strictly above `hi_threshold` or strictly below `lo_threshold`."""

    high: tuple[ScoredSentence, ...]
    low: tuple[ScoredSentence, ...]
    hi_threshold: float = 1.0
    lo_threshold: float = -1.0
    # Count of sentences falling in neither set.
    middle_count: int = field(default=0, compare=False)

    @classmethod
    def of(
        cls,
        scores: Iterable[ScoredSentence],
        hi_threshold: float,
        lo_threshold: float,
    ) -> ExtremesPartition:
        high, low, middle = [], [], 0
        for s in scores:
            if s.score_a > hi_threshold:
                high.append(s)
            elif s.score_a < lo_threshold:
                low.append(s)
            else:
                middle += 1
        return cls(tuple(high), tuple(low), hi_threshold, lo_threshold, middle)
