"""
Run settings from defaults, files, environment and flags.
"""

from pathlib import Path

import pytest

from anthroscan.backend import BackendKind
from anthroscan.config import RunConfig, load_config
from anthroscan.errors import ConfigError


@pytest.fixture()
def config_file(tmp_path) -> Path:
    path = tmp_path / "anthroscan.toml"
    path.write_text(
        'corpus_path = "abstracts.jsonl"\n'
        'lexicons = ["artifact", "lm"]\n'
        "seed = 7\n"
        "hi = 1.5\n"
        "\n"
        "[backend]\n"
        'kind = "stub"\n'
        'stub_mode = "hashed"\n'
        "batch_size = 8\n"
    )
    return path


def test_defaults():
    config = load_config(environ={})
    assert config == RunConfig()
    assert config.lo == -1.0
    assert config.backend.kind is BackendKind.STUB
    assert config.backend.model_id == "roberta-base"
    assert config.resolved_cache_path == Path("anthroscan-out") / "distributions.cache"


def test_file_values(config_file):
    config = load_config(config_file, environ={})
    assert config.corpus_path == Path("abstracts.jsonl")
    assert config.lexicons == ("artifact", "lm")
    assert config.seed == 7
    assert (config.hi, config.lo) == (1.5, -1.5)
    assert config.backend.stub_mode == "hashed"
    assert config.backend.batch_size == 8


def test_flags_beat_environment_beats_file(config_file, tmp_path):
    environ = {"ANTHROSCAN_CACHE": str(tmp_path / "env.cache")}
    config = load_config(config_file, environ=environ)
    assert config.cache_path == tmp_path / "env.cache"

    config = load_config(
        config_file,
        overrides={"seed": 11, "cache_path": tmp_path / "flag.cache", "backend.batch_size": None},
        environ=environ,
    )
    assert config.seed == 11
    assert config.cache_path == tmp_path / "flag.cache"
    # Unset flags leave the file's value alone.
    assert config.backend.batch_size == 8


def test_endpoint_implies_remote_backend():
    config = load_config(environ={"ANTHROSCAN_ENDPOINT": "http://localhost:8080"})
    assert config.backend.kind is BackendKind.REMOTE
    assert config.backend.endpoint == "http://localhost:8080"

    # An explicit kind wins.
    config = load_config(
        overrides={"backend.kind": "stub"}, environ={"ANTHROSCAN_ENDPOINT": "http://x"}
    )
    assert config.backend.kind is BackendKind.STUB


def test_caching_can_be_turned_off():
    assert load_config(overrides={"cache": False}, environ={}).resolved_cache_path is None


def test_secrets_are_not_recorded(monkeypatch):
    monkeypatch.setenv("ANTHROSCAN_API_KEY", "hunter2")
    config = load_config(overrides={"backend.endpoint": "http://localhost:8080"}, environ={})
    assert "hunter2" not in repr(config.to_dict())
    assert config.to_dict()["backend"]["kind"] == "remote"


@pytest.mark.parametrize(
    ("text", "field"),
    [
        ("colour = 3\n", "colour"),
        ("[backend]\nflavour = 'x'\n", "backend.flavour"),
        ("backend = 3\n", "backend"),
        ("seed = 'seven'\n", "seed"),
        ("seed = -1\n", "seed"),
        ("seed = true\n", "seed"),
        ("lm_only = 'yes'\n", "lm_only"),
        ("lexicons = [1, 2]\n", "lexicons"),
        ("lexicons = []\n", "lexicons"),
        ("prior_band = 1.5\n", "prior_band"),
        ("hi = 1.0\nlo = 2.0\n", "lo"),
        ("workers = 0\n", "workers"),
        ("smoothing = 0\n", "smoothing"),
        ("[backend]\nkind = 'psychic'\n", "backend.kind"),
        ("[backend]\nkind = 'remote'\n", "backend.endpoint"),
        ("[backend]\nbatch_size = 0\n", "backend.batch_size"),
        ("this is not toml", "config"),
    ],
)
def test_invalid_settings_name_their_field(tmp_path, text, field):
    path = tmp_path / "bad.toml"
    path.write_text(text)
    with pytest.raises(ConfigError) as raised:
        load_config(path, environ={})
    assert raised.value.field == field


def test_missing_file():
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(Path("/nonexistent/anthroscan.toml"), environ={})


def test_numbers_are_coerced():
    config = load_config(overrides={"hi": "2", "workers": "4", "seed": 3.0}, environ={})
    assert config.hi == 2.0
    assert config.workers == 4
    assert config.seed == 3

    with pytest.raises(ConfigError, match="expected an integer"):
        load_config(overrides={"seed": 3.5}, environ={})
