from __future__ import annotations

import os
from pathlib import Path

from .api import (
    DEFAULT_BATCH_SIZE,
    DEFAULT_MASK_TOKEN,
    DEFAULT_MODEL_ID,
    BackendDescriptor,
    BackendKind,
    FillMaskBackend,
    PronounDistribution,
    check_inventory,
    fill_mask_pronouns,
)
from .cache import CachedBackend, CacheKey, DistributionCache
from .remote import RemoteBackend
from .stub import StubBackend, StubMode

CACHE_ENV = "ANTHROSCAN_CACHE"


def open_backend(
    descriptor: BackendDescriptor, cache_path: Path | None = None
) -> FillMaskBackend:
    """
    Build the backend a descriptor asks for, wrapped in a persistent cache
    when `cache_path` is given.

    A `cached` descriptor reads only from the cache (the path comes from the
    argument or the ANTHROSCAN_CACHE environment variable).
    """
    if descriptor.kind is BackendKind.CACHED:
        cache_path = cache_path or os.environ.get(CACHE_ENV)
        if not cache_path:
            from anthroscan.errors import ConfigError

            raise ConfigError("cache_path", "a cached backend needs a cache file")
        return CachedBackend(
            DistributionCache.open(Path(cache_path), read_only=True), model_id=descriptor.model_id
        )

    if descriptor.kind is BackendKind.REMOTE:
        backend: FillMaskBackend = RemoteBackend(descriptor)
    else:
        backend = StubBackend.from_file(
            descriptor.stub_mode,
            descriptor.stub_table,
            model_id=descriptor.model_id,
            mask_token=descriptor.mask_token,
        )

    if cache_path is not None:
        return CachedBackend(DistributionCache.open(Path(cache_path)), backend)
    return backend


__all__ = (
    "CACHE_ENV",
    "DEFAULT_BATCH_SIZE",
    "DEFAULT_MASK_TOKEN",
    "DEFAULT_MODEL_ID",
    "BackendDescriptor",
    "BackendKind",
    "CacheKey",
    "CachedBackend",
    "DistributionCache",
    "FillMaskBackend",
    "PronounDistribution",
    "RemoteBackend",
    "StubBackend",
    "StubMode",
    "check_inventory",
    "fill_mask_pronouns",
    "open_backend",
)
