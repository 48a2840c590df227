"""
Shared pytest fixtures: the synthetic corpora written to disk, and the
bundled example sentences.
"""

import os
from importlib import resources
from pathlib import Path

import pytest

from anthroscan import logs
from anthroscan.backend import StubBackend, StubMode
from anthroscan.scoring import DEFAULT_INVENTORY, ScoredSentence, score_distribution
from anthroscan.text import Document, build_masked_corpus, load_lexicon, read_corpus

from .corpus import SyntheticCorpus, ablation_corpus, synthetic_corpus

REMOTE_ENDPOINT_ENV = "ANTHROSCAN_TEST_ENDPOINT"


@pytest.fixture(autouse=True, scope="session")
def _init_logs(pytestconfig) -> None:
    # Doctests compare stdout, so events must stay on stderr.
    logs.init_logging(
        verbosity=pytestconfig.getoption("verbose"), cache_logger_on_first_use=False
    )


@pytest.fixture(scope="session")
def synthetic() -> SyntheticCorpus:
    """The 200-document corpus, with five planted duplicate sentences."""
    return synthetic_corpus()


@pytest.fixture(scope="session")
def synthetic_files(synthetic: SyntheticCorpus, tmp_path_factory) -> tuple[Path, Path]:
    """(corpus.jsonl, stub_table.json) for the synthetic corpus."""
    return synthetic.write(tmp_path_factory.mktemp("synthetic"))


@pytest.fixture(scope="session")
def synthetic_backend(synthetic: SyntheticCorpus) -> StubBackend:
    return StubBackend(StubMode.PER_TEXT, per_text=synthetic.distributions)


@pytest.fixture(scope="session")
def synthetic_scores(synthetic, synthetic_backend) -> list[ScoredSentence]:
    """Every deduplicated synthetic sentence, scored by the stub."""
    return score_corpus(synthetic, synthetic_backend)


@pytest.fixture(scope="session")
def small_corpus() -> SyntheticCorpus:
    """The 50-sentence corpus with per-pronoun probabilities, for ablations."""
    return ablation_corpus()


@pytest.fixture(scope="session")
def small_backend(small_corpus: SyntheticCorpus) -> StubBackend:
    return StubBackend(StubMode.PER_TEXT, per_text=small_corpus.distributions)


@pytest.fixture(scope="session")
def small_scores(small_corpus, small_backend) -> list[ScoredSentence]:
    return score_corpus(small_corpus, small_backend)


@pytest.fixture(scope="session")
def example_documents() -> list[Document]:
    """The six bundled example abstract sentences, three high and three low."""
    with resources.as_file(
        resources.files("anthroscan.data") / "examples" / "example_sentences.jsonl"
    ) as path:
        return read_corpus(path)


@pytest.fixture(scope="session")
def example_files(tmp_path_factory) -> tuple[Path, Path]:
    """
    (corpus.jsonl, stub_table.json) for the example sentences. The table
    holds frozen distributions that put each sentence in its expected band.
    """
    directory = tmp_path_factory.mktemp("examples")
    examples = resources.files("anthroscan.data") / "examples"
    paths = []
    for name in ("example_sentences.jsonl", "example_distributions.json"):
        path = directory / name
        path.write_bytes((examples / name).read_bytes())
        paths.append(path)
    return paths[0], paths[1]


@pytest.fixture(scope="session")
def remote_endpoint() -> str:
    """A live fill-mask service, or skip."""
    endpoint = os.environ.get(REMOTE_ENDPOINT_ENV)
    if not endpoint:
        pytest.skip(f"set {REMOTE_ENDPOINT_ENV} to run against a real model")
    return endpoint


def score_corpus(corpus: SyntheticCorpus, backend: StubBackend) -> list[ScoredSentence]:
    records = build_masked_corpus(
        corpus.documents, [load_lexicon("artifact"), load_lexicon("lm")]
    )
    return [
        score_distribution(
            backend.fill_mask_pronouns(r.masked_sentence, DEFAULT_INVENTORY),
            DEFAULT_INVENTORY,
            r,
        )
        for r in records
    ]
