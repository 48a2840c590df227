"""
Run settings.

Values come from, in increasing precedence: the defaults below, a TOML file,
environment variables, then command-line flags. The TOML keys are the field
names of :class:`RunConfig`, with backend settings in a ``[backend]`` table:

    corpus_path = "abstracts.jsonl"
    lexicons = ["artifact", "lm"]
    output_dir = "out"
    seed = 7

    [backend]
    kind = "remote"
    endpoint = "http://localhost:8080"
    model_id = "roberta-base"
"""

from __future__ import annotations

import os
import sys
from collections.abc import Mapping
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import structlog

from anthroscan.backend import CACHE_ENV, BackendDescriptor, BackendKind
from anthroscan.errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

_LOG = structlog.get_logger()

ENDPOINT_ENV = "ANTHROSCAN_ENDPOINT"
API_KEY_ENV = "ANTHROSCAN_API_KEY"

MAX_SEED = 2**64 - 1
CACHE_FILE_NAME = "distributions.cache"

BACKEND_KEYS = frozenset(
    {
        "kind",
        "model_id",
        "endpoint",
        "mask_token",
        "stub_mode",
        "stub_table",
        "timeout",
        "batch_size",
        "max_attempts",
    }
)


@dataclass(frozen=True)
class RunConfig:
    corpus_path: Path | None = None
    lexicons: tuple[str, ...] = ("artifact",)
    # Keep only documents mentioning language models.
    lm_only: bool = False
    lm_keywords: str = "lm_keywords"
    # A CoNLL-U manifest. When set, triples come from the parses.
    parses_path: Path | None = None
    backend: BackendDescriptor = field(default_factory=BackendDescriptor)
    inventory_path: Path | None = None
    hi: float = 1.0
    lo: float | None = None
    prior_band: float = 0.5
    prior_scale: float = 1.0
    smoothing: float = 0.01
    seed: int = 0
    n_boot: int = 1000
    output_dir: Path = Path("anthroscan-out")
    workers: int = 1
    cache: bool = True
    cache_path: Path | None = None

    def __post_init__(self) -> None:
        if self.lo is None:
            object.__setattr__(self, "lo", -self.hi)
        if not self.hi > self.prior_band > 0:
            raise ConfigError(
                "prior_band",
                f"must be positive and below hi ({self.hi}), got {self.prior_band}",
            )
        if not self.lo < self.hi:
            raise ConfigError("lo", f"must be below hi ({self.hi}), got {self.lo}")
        if isinstance(self.seed, bool) or not (0 <= self.seed <= MAX_SEED):
            raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {self.seed}")
        if self.workers < 1:
            raise ConfigError("workers", f"must be at least 1, got {self.workers}")
        if self.n_boot < 1:
            raise ConfigError("n_boot", f"must be at least 1, got {self.n_boot}")
        if self.smoothing <= 0:
            raise ConfigError("smoothing", f"must be positive, got {self.smoothing}")
        if self.prior_scale < 0:
            raise ConfigError("prior_scale", f"must not be negative, got {self.prior_scale}")
        if not self.lexicons:
            raise ConfigError("lexicons", "at least one entity lexicon is needed")

    @property
    def resolved_cache_path(self) -> Path | None:
        """Where distributions are cached, or None when caching is off."""
        if not self.cache:
            return None
        return self.cache_path or self.output_dir / CACHE_FILE_NAME

    def to_dict(self) -> dict[str, Any]:
        """Settings as recorded in run summaries. Secrets are never included."""
        doc = {f.name: getattr(self, f.name) for f in fields(self)}
        doc["backend"] = self.backend.to_dict()
        return doc


_FIELD_TYPES = {
    "corpus_path": Path,
    "parses_path": Path,
    "inventory_path": Path,
    "output_dir": Path,
    "cache_path": Path,
    "hi": float,
    "lo": float,
    "prior_band": float,
    "prior_scale": float,
    "smoothing": float,
    "seed": int,
    "n_boot": int,
    "workers": int,
    "lm_only": bool,
    "cache": bool,
    "lm_keywords": str,
    "lexicons": tuple,
}
_BACKEND_TYPES = {
    "stub_table": Path,
    "timeout": float,
    "batch_size": int,
    "max_attempts": int,
}


def load_config(
    config_file: Path | None = None,
    overrides: Mapping[str, Any] | None = None,
    environ: Mapping[str, str] | None = None,
) -> RunConfig:
    """
    Build a RunConfig. `overrides` (from command-line flags) use field names,
    or ``backend.<key>`` for backend settings; None values are ignored.

    >>> load_config(overrides={'seed': 7, 'backend.kind': 'stub'}).seed
    7
    >>> load_config(overrides={'prior_band': 2.0})
    Traceback (most recent call last):
    ...
    anthroscan.errors.ConfigError: prior_band: must be positive and below hi (1.0), got 2.0
    """
    environ = os.environ if environ is None else environ
    values: dict[str, Any] = {}
    backend: dict[str, Any] = {}

    if config_file is not None:
        _merge(_read_toml(Path(config_file)), values, backend)

    if environ.get(ENDPOINT_ENV):
        backend["endpoint"] = environ[ENDPOINT_ENV]
    if environ.get(CACHE_ENV):
        values["cache_path"] = environ[CACHE_ENV]

    flags: dict[str, Any] = {}
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key.startswith("backend."):
            flags.setdefault("backend", {})[key.removeprefix("backend.")] = value
        else:
            flags[key] = value
    _merge(flags, values, backend)

    # An endpoint without an explicit kind means the remote backend.
    if "kind" not in backend and backend.get("endpoint"):
        backend["kind"] = BackendKind.REMOTE.value

    try:
        descriptor = BackendDescriptor(
            **{
                k: _coerce(f"backend.{k}", v, _BACKEND_TYPES.get(k, str))
                for k, v in backend.items()
            }
        )
        config = RunConfig(
            backend=descriptor,
            **{k: _coerce(k, v, _FIELD_TYPES[k]) for k, v in values.items()},
        )
    except ConfigError as e:
        _LOG.debug("config.invalid", field=e.field, reason=e.reason)
        raise
    _LOG.debug("config.loaded", config_file=config_file)
    return config


def _read_toml(path: Path) -> dict[str, Any]:
    try:
        with path.open("rb") as f:
            return tomllib.load(f)
    except OSError as e:
        raise ConfigError("config", f"cannot read {path}: {e.strerror or e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("config", f"{path} is not valid TOML: {e}") from e


def _merge(doc: Mapping[str, Any], values: dict, backend: dict) -> None:
    for key, value in doc.items():
        if key == "backend":
            if not isinstance(value, Mapping):
                raise ConfigError("backend", "must be a table of backend settings")
            for backend_key, backend_value in value.items():
                if backend_key not in BACKEND_KEYS:
                    raise ConfigError(f"backend.{backend_key}", "unknown setting")
                backend[backend_key] = backend_value
        elif key in _FIELD_TYPES:
            values[key] = value
        else:
            raise ConfigError(key, "unknown setting")


def _coerce(name: str, value: Any, kind: type) -> Any:
    """
    >>> _coerce('lexicons', 'artifact', tuple)
    ('artifact',)
    >>> _coerce('seed', 'x', int)
    Traceback (most recent call last):
    ...
    anthroscan.errors.ConfigError: seed: expected int, got 'x'
    """
    if kind is tuple:
        if isinstance(value, str):
            return (value,)
        if isinstance(value, (list, tuple)) and all(isinstance(v, str) for v in value):
            return tuple(value)
        raise ConfigError(name, f"expected a list of strings, got {value!r}")
    if kind is bool:
        if isinstance(value, bool):
            return value
        raise ConfigError(name, f"expected true or false, got {value!r}")
    if kind is Path:
        if isinstance(value, (str, os.PathLike)):
            return Path(value)
        raise ConfigError(name, f"expected a path, got {value!r}")
    if kind is str:
        if isinstance(value, str):
            return value
        raise ConfigError(name, f"expected a string, got {value!r}")
    if isinstance(value, bool):
        raise ConfigError(name, f"expected {kind.__name__}, got {value!r}")
    try:
        coerced = kind(value)
    except (TypeError, ValueError):
        raise ConfigError(name, f"expected {kind.__name__}, got {value!r}") from None
    if kind is int and isinstance(value, float) and coerced != value:
        raise ConfigError(name, f"expected an integer, got {value!r}")
    return coerced
