"""
A deterministic, in-process backend for tests and offline runs.
"""

from __future__ import annotations

import hashlib
from collections.abc import Iterable, Mapping
from enum import Enum
from pathlib import Path

from orjson import orjson
from typing_extensions import override

from anthroscan.errors import ConfigError
from anthroscan.scoring import PronounInventory

from .api import DEFAULT_MASK_TOKEN, FillMaskBackend, PronounDistribution


class StubMode(Enum):
    # Every pronoun gets the same probability.
    UNIFORM = "uniform"
    # A fixed pronoun -> probability table. Unlisted pronouns get 0.0.
    TABLE = "table"
    # A masked text -> table map, falling back to `table` (or uniform).
    PER_TEXT = "per_text"
    # Pseudo-random but reproducible, derived from a hash of the text.
    HASHED = "hashed"


class StubBackend(FillMaskBackend):
    def __init__(
        self,
        mode: StubMode | str = StubMode.UNIFORM,
        *,
        table: Mapping[str, float] | None = None,
        per_text: Mapping[str, Mapping[str, float]] | None = None,
        uniform_probability: float = 0.01,
        model_id: str = "stub",
        mask_token: str = DEFAULT_MASK_TOKEN,
    ) -> None:
        try:
            self.mode = StubMode(mode)
        except ValueError:
            raise ConfigError(
                "backend.stub_mode",
                f"unknown stub mode {mode!r}, expected one of "
                f"{', '.join(m.value for m in StubMode)}",
            ) from None
        if self.mode is StubMode.TABLE and table is None:
            raise ConfigError("backend.stub_table", "table mode needs a table")
        if self.mode is StubMode.PER_TEXT and per_text is None:
            raise ConfigError("backend.stub_table", "per_text mode needs a text table")

        self.table = dict(table or {})
        self.per_text = {k: dict(v) for k, v in (per_text or {}).items()}
        self.uniform_probability = uniform_probability
        self.model_id = model_id
        self.mask_token = mask_token

    @classmethod
    def from_file(
        cls, mode: StubMode | str, path: Path | None, **kwargs
    ) -> StubBackend:
        """
        Load the tables for `table` or `per_text` mode from a JSON file.

        `table` files map pronouns to probabilities. `per_text` files hold
        `{"texts": {masked sentence: table}, "default": table}`.
        """
        if path is None:
            return cls(mode, **kwargs)
        mode = cls(mode, per_text={}, table={}, **kwargs).mode
        try:
            doc = orjson.loads(Path(path).read_bytes())
        except (OSError, orjson.JSONDecodeError) as e:
            raise ConfigError("backend.stub_table", f"cannot read {path}: {e}") from e
        if mode is StubMode.PER_TEXT:
            return cls(mode, per_text=doc["texts"], table=doc.get("default"), **kwargs)
        return cls(mode, table=doc, **kwargs)

    @override
    def fill_mask_pronouns(
        self, masked_sentence: str, inventory: PronounInventory
    ) -> PronounDistribution:
        model_text = self.to_model_text(masked_sentence)
        return self.distribution_for(model_text, inventory.pronouns, masked_sentence)

    def distribution_for(
        self, model_text: str, targets: Iterable[str], lookup_text: str | None = None
    ) -> PronounDistribution:
        """
        Probabilities for arbitrary target words. `lookup_text` is the key for
        `per_text` mode (the sentence with our own placeholder in it).
        """
        targets = list(targets)
        if self.mode is StubMode.UNIFORM:
            probabilities = {w: self.uniform_probability for w in targets}
        elif self.mode is StubMode.TABLE:
            probabilities = {w: float(self.table.get(w, 0.0)) for w in targets}
        elif self.mode is StubMode.PER_TEXT:
            row = self.per_text.get(lookup_text if lookup_text is not None else model_text)
            if row is None and self.table:
                row = self.table
            if row is None:
                probabilities = {w: self.uniform_probability for w in targets}
            else:
                probabilities = {w: float(row.get(w, 0.0)) for w in targets}
        else:
            probabilities = {w: hashed_probability(model_text, w) for w in targets}

        return PronounDistribution(
            probabilities=probabilities,
            model_id=self.model_id,
            resolved_variants={w: _variants(w) for w in targets},
        )


def hashed_probability(text: str, word: str) -> float:
    """
    A reproducible probability in [0.001, 0.1) for a (text, word) pair.

    >>> hashed_probability('<mask> works.', 'he') == hashed_probability('<mask> works.', 'he')
    True
    >>> 0.001 <= hashed_probability('<mask> works.', 'it') < 0.1
    True
    """
    digest = hashlib.sha256(f"{word}\x00{text}".encode()).digest()
    fraction = int.from_bytes(digest[:8], "big") / 2**64
    return 0.001 + fraction * 0.099


def _variants(word: str) -> tuple[str, ...]:
    # Byte-pair vocabularies hold a separate entry for the word after a space.
    return word, f"Ġ{word}"
