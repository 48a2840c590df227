"""
A persistent read-through cache of pronoun distributions.

The cache file is an append-only log. Each record is a 4-byte big-endian
length followed by that many bytes of JSON:

    {"key": [model_id, masked_sentence, inventory_fingerprint],
     "value": <PronounDistribution>, "checksum": <sha256 of key+value>}

Records that fail their checksum, or whose length is damaged, are skipped
with a warning and reading resumes at the next readable record. Only a
partial record with nothing readable after it (an interrupted write) is cut
off on open, so later appends stay aligned.
"""

from __future__ import annotations

import os
import struct
import threading
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import structlog
from orjson import orjson
from typing_extensions import override

from anthroscan._utils import atomic_write, dumps, sha256_hex
from anthroscan.errors import CacheCorruption, CacheMiss
from anthroscan.scoring import PronounInventory

from .api import FillMaskBackend, PronounDistribution

_LOG = structlog.get_logger()

_LENGTH = struct.Struct(">I")
_RECORD_START = b'{"checksum":'


@dataclass(frozen=True)
class CacheKey:
    model_id: str
    masked_sentence: str
    inventory_fingerprint: str

    def __post_init__(self) -> None:
        for name in ("model_id", "masked_sentence", "inventory_fingerprint"):
            if not getattr(self, name):
                raise ValueError(f"cache key {name} must not be empty")

    @classmethod
    def of(
        cls, model_id: str, masked_sentence: str, inventory: PronounInventory
    ) -> CacheKey:
        return cls(model_id, masked_sentence, inventory.fingerprint())

    def as_list(self) -> list[str]:
        return [self.model_id, self.masked_sentence, self.inventory_fingerprint]


class DistributionCache:
    """
    The log and its in-memory index.

    A read-only cache never writes to its file: a damaged tail is ignored
    rather than cut off, and `put` is refused.
    """

    def __init__(self, path: Path, *, read_only: bool = False) -> None:
        self.path = Path(path)
        self.read_only = read_only
        self._index: dict[CacheKey, dict] = {}
        self._lock = threading.Lock()
        self._load()

    @classmethod
    def open(cls, path: Path, *, read_only: bool = False) -> DistributionCache:
        return cls(path, read_only=read_only)

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, key: CacheKey) -> bool:
        return key in self._index

    def get(self, key: CacheKey) -> PronounDistribution | None:
        value = self._index.get(key)
        if value is None:
            return None
        return PronounDistribution.from_dict(value)

    def put(self, key: CacheKey, value: PronounDistribution) -> None:
        if self.read_only:
            raise CacheCorruption(f"cache {self.path} is open read-only")
        doc = value.to_dict()
        record = _encode(key, doc)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("ab") as f:
                f.write(record)
                f.flush()
                os.fsync(f.fileno())
            self._index[key] = doc

    def compact(self) -> int:
        """Rewrite the log with one record per live key. Returns the record count."""
        if self.read_only:
            raise CacheCorruption(f"cache {self.path} is open read-only")
        with self._lock:
            with atomic_write(self.path) as f:
                for key, doc in self._index.items():
                    f.write(_encode(key, doc))
            _LOG.info("cache.compacted", path=self.path, records=len(self._index))
            return len(self._index)

    def _load(self) -> None:
        if not self.path.exists():
            return
        data = self.path.read_bytes()
        offset = 0
        corrupt = 0
        while offset < len(data):
            try:
                key, value, end = _read_record(data, offset)
            except _IncompleteRecord:
                resume = _next_record(data, offset)
                if resume is None:
                    self._drop_tail(offset, len(data))
                    break
                corrupt += 1
                _LOG.warning(
                    "cache.corrupt_record",
                    path=self.path,
                    offset=offset,
                    reason="length runs past the next record",
                )
                offset = resume
                continue
            except CacheCorruption as e:
                corrupt += 1
                _LOG.warning("cache.corrupt_record", path=self.path, offset=offset, reason=str(e))
                resume = _next_record(data, offset)
                if resume is None:
                    break
                offset = resume
                continue
            self._index[key] = value
            offset = end

        _LOG.debug("cache.loaded", path=self.path, records=len(self._index), corrupt=corrupt)

    def _drop_tail(self, offset: int, size: int) -> None:
        """An interrupted final write: cut it off so later appends stay aligned."""
        _LOG.warning(
            "cache.truncated_record",
            path=self.path,
            offset=offset,
            dropped_bytes=size - offset,
            read_only=self.read_only,
        )
        if self.read_only:
            return
        with self.path.open("r+b") as f:
            f.truncate(offset)


class _IncompleteRecord(CacheCorruption):
    pass


def _encode(key: CacheKey, value: dict) -> bytes:
    body = {"key": key.as_list(), "value": value}
    payload = dumps({**body, "checksum": sha256_hex(body)})
    return _LENGTH.pack(len(payload)) + payload


def _read_record(data: bytes, offset: int) -> tuple[CacheKey, dict, int]:
    if len(data) - offset < _LENGTH.size:
        raise _IncompleteRecord("partial length header")
    (length,) = _LENGTH.unpack_from(data, offset)
    end = offset + _LENGTH.size + length
    if end > len(data):
        raise _IncompleteRecord(f"record of {length} bytes runs past the end")
    key, value = _decode(data[offset + _LENGTH.size : end])
    return key, value, end


def _next_record(data: bytes, offset: int) -> int | None:
    """
    The start of the first readable record after `offset`, if any.

    Payloads are written with sorted keys, so every record's JSON begins with
    the checksum field and that text can't occur unescaped inside one.
    """
    found = data.find(_RECORD_START, offset + _LENGTH.size + 1)
    while found >= 0:
        start = found - _LENGTH.size
        try:
            _read_record(data, start)
        except CacheCorruption:
            pass
        else:
            return start
        found = data.find(_RECORD_START, found + 1)
    return None


def _decode(payload: bytes) -> tuple[CacheKey, dict]:
    try:
        doc = orjson.loads(payload)
        body = {"key": doc["key"], "value": doc["value"]}
        checksum = doc["checksum"]
    except (orjson.JSONDecodeError, KeyError, TypeError) as e:
        raise CacheCorruption(f"unreadable record: {e}") from e
    if sha256_hex(body) != checksum:
        raise CacheCorruption("checksum mismatch")
    try:
        return CacheKey(*body["key"]), body["value"]
    except (TypeError, ValueError) as e:
        raise CacheCorruption(f"malformed key: {e}") from e


class CachedBackend(FillMaskBackend):
    """
    Answer from the cache when possible, otherwise ask `inner` and remember.

    With no inner backend, a miss raises CacheMiss: this is how analyses reuse
    the distributions of an earlier scoring run without a model.
    """

    def __init__(
        self,
        cache: DistributionCache,
        inner: FillMaskBackend | None = None,
        *,
        model_id: str | None = None,
    ) -> None:
        self.cache = cache
        self.inner = inner
        if inner is not None:
            self.model_id = inner.model_id
            self.mask_token = inner.mask_token
        if model_id is not None:
            self.model_id = model_id
        self.hits = 0
        self.misses = 0
        # Worker threads share one backend.
        self._counts_lock = threading.Lock()

    @property
    @override
    def uncached(self) -> FillMaskBackend:
        return self.inner.uncached if self.inner is not None else self

    def _count(self, hits: int = 0, misses: int = 0) -> None:
        with self._counts_lock:
            self.hits += hits
            self.misses += misses

    @override
    def fill_mask_pronouns(
        self, masked_sentence: str, inventory: PronounInventory
    ) -> PronounDistribution:
        key = CacheKey.of(self.model_id, masked_sentence, inventory)
        found = self.cache.get(key)
        if found is not None:
            self._count(hits=1)
            return found

        self._count(misses=1)
        if self.inner is None:
            raise CacheMiss(
                f"no cached distribution for {masked_sentence!r} under {self.model_id!r}"
            )
        distribution = self.inner.fill_mask_pronouns(masked_sentence, inventory)
        self.cache.put(key, distribution)
        return distribution

    @override
    def fill_mask_many(
        self, masked_sentences: Sequence[str], inventory: PronounInventory
    ) -> list[PronounDistribution]:
        if self.inner is None:
            return super().fill_mask_many(masked_sentences, inventory)

        found: dict[str, PronounDistribution] = {}
        missing: list[str] = []
        for text in dict.fromkeys(masked_sentences):
            hit = self.cache.get(CacheKey.of(self.model_id, text, inventory))
            if hit is None:
                missing.append(text)
            else:
                found[text] = hit
        self._count(hits=len(found), misses=len(missing))

        for text, distribution in zip(
            missing, self.inner.fill_mask_many(missing, inventory)
        ):
            self.cache.put(CacheKey.of(self.model_id, text, inventory), distribution)
            found[text] = distribution
        return [found[text] for text in masked_sentences]

    @override
    def close(self) -> None:
        if self.inner is not None:
            self.inner.close()
