"""
The contract every fill-mask backend meets: given a masked sentence and a
pronoun inventory, return each pronoun's probability at the mask position.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from anthroscan.errors import (
    ConfigError,
    MaskTokenizationError,
    MissingPronoun,
    VocabularyMiss,
)
from anthroscan.scoring import PLACEHOLDER, PronounInventory

DEFAULT_MODEL_ID = "roberta-base"
DEFAULT_MASK_TOKEN = "<mask>"
DEFAULT_BATCH_SIZE = 32

# Used to resolve every pronoun's vocabulary variants before a run starts.
CHECK_SENTENCE = f"{PLACEHOLDER} said it was ready."


class BackendKind(Enum):
    REMOTE = "remote"
    STUB = "stub"
    CACHED = "cached"


@dataclass(frozen=True)
class BackendDescriptor:
    kind: BackendKind = BackendKind.STUB
    model_id: str = DEFAULT_MODEL_ID
    endpoint: str | None = None
    mask_token: str = DEFAULT_MASK_TOKEN
    stub_mode: str = "uniform"
    # A JSON file for the `table` and `per_text` stub modes.
    stub_table: Path | None = None
    timeout: float = 60.0
    batch_size: int = DEFAULT_BATCH_SIZE
    max_attempts: int = 3

    def __post_init__(self) -> None:
        if isinstance(self.kind, str):
            try:
                object.__setattr__(self, "kind", BackendKind(self.kind))
            except ValueError:
                raise ConfigError(
                    "backend.kind",
                    f"unknown backend {self.kind!r}, "
                    f"expected one of {', '.join(k.value for k in BackendKind)}",
                ) from None
        if self.kind is BackendKind.REMOTE and not self.endpoint:
            raise ConfigError("backend.endpoint", "a remote backend needs an endpoint")
        if not self.mask_token:
            raise ConfigError("backend.mask_token", "must not be empty")
        if self.batch_size < 1:
            raise ConfigError("backend.batch_size", "must be at least 1")
        if self.max_attempts < 1:
            raise ConfigError("backend.max_attempts", "must be at least 1")

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "model_id": self.model_id,
            "endpoint": self.endpoint,
            "mask_token": self.mask_token,
            "stub_mode": self.stub_mode if self.kind is BackendKind.STUB else None,
        }


@dataclass(frozen=True)
class PronounDistribution:
    probabilities: Mapping[str, float]
    model_id: str
    resolved_variants: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for word, p in self.probabilities.items():
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"probability for {word!r} out of range: {p!r}")

    def check_against(self, inventory: PronounInventory) -> None:
        """Keys must be exactly the inventory's pronouns."""
        missing = set(inventory.pronouns) - set(self.probabilities)
        if missing:
            raise MissingPronoun(missing)
        extra = set(self.probabilities) - set(inventory.pronouns)
        if extra:
            raise ValueError(
                f"distribution has unrequested pronouns: {', '.join(sorted(extra))}"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model_id,
            "probabilities": dict(self.probabilities),
            "resolved_variants": {k: list(v) for k, v in self.resolved_variants.items()},
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> PronounDistribution:
        return cls(
            probabilities=dict(doc["probabilities"]),
            model_id=doc["model"],
            resolved_variants={
                k: tuple(v) for k, v in doc.get("resolved_variants", {}).items()
            },
        )


class FillMaskBackend(ABC):
    model_id: str = DEFAULT_MODEL_ID
    mask_token: str = DEFAULT_MASK_TOKEN

    @abstractmethod
    def fill_mask_pronouns(
        self, masked_sentence: str, inventory: PronounInventory
    ) -> PronounDistribution: ...

    def fill_mask_many(
        self, masked_sentences: Sequence[str], inventory: PronounInventory
    ) -> list[PronounDistribution]:
        return [self.fill_mask_pronouns(s, inventory) for s in masked_sentences]

    def to_model_text(self, masked_sentence: str) -> str:
        """
        Swap our placeholder for the model's own mask token.

        >>> from anthroscan.backend import StubBackend
        >>> StubBackend().to_model_text('[MASK] works.')
        '<mask> works.'
        """
        count = masked_sentence.count(PLACEHOLDER)
        if count != 1:
            raise MaskTokenizationError(
                f"expected one {PLACEHOLDER} in the sentence, found {count}"
            )
        if self.mask_token in masked_sentence:
            raise MaskTokenizationError(
                f"sentence already contains the model mask token {self.mask_token!r}"
            )
        return masked_sentence.replace(PLACEHOLDER, self.mask_token)

    @property
    def uncached(self) -> FillMaskBackend:
        """The backend that answers queries, without any cache in front of it."""
        return self

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def check_inventory(backend: FillMaskBackend, inventory: PronounInventory) -> None:
    """
    Fail early if any pronoun has no vocabulary entry in the backend's model.
    The check sentence goes straight to the model and is never cached.
    """
    distribution = backend.uncached.fill_mask_pronouns(CHECK_SENTENCE, inventory)
    for pronoun in inventory.pronouns:
        if not distribution.resolved_variants.get(pronoun):
            raise VocabularyMiss(pronoun, backend.model_id)


def fill_mask_pronouns(
    masked_sentence: str,
    inventory: PronounInventory,
    descriptor: BackendDescriptor,
) -> PronounDistribution:
    """One-off query, opening (and closing) a backend from its descriptor."""
    from anthroscan.backend import open_backend

    with open_backend(descriptor) as backend:
        return backend.fill_mask_pronouns(masked_sentence, inventory)
