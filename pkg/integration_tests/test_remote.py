"""
Scores from a real masked language model behind the fill-mask protocol.

Skipped unless ANTHROSCAN_TEST_ENDPOINT points at a service for roberta-base.
"""

import pytest

from anthroscan.analytics import in_band
from anthroscan.backend import BackendDescriptor, RemoteBackend, check_inventory
from anthroscan.scoring import DEFAULT_INVENTORY, mean_anthroscore, score_distribution
from anthroscan.text import build_masked_corpus, load_lexicon


@pytest.fixture(scope="module")
def remote(remote_endpoint):
    backend = RemoteBackend(
        BackendDescriptor(kind="remote", endpoint=remote_endpoint, model_id="roberta-base")
    )
    yield backend
    backend.close()


def test_every_pronoun_is_in_the_vocabulary(remote):
    check_inventory(remote, DEFAULT_INVENTORY)


def test_dogs_are_it(remote):
    distribution = remote.fill_mask_pronouns("[MASK] is a good dog.", DEFAULT_INVENTORY)
    assert distribution.probabilities["It"] > distribution.probabilities["Its"]


def test_example_sentences_fall_in_their_bands(remote, example_documents):
    expected = {d.doc_id: (d.extra["entity"], d.extra["expected_band"]) for d in example_documents}
    records = [
        r
        for r in build_masked_corpus(example_documents, [load_lexicon("artifact")], dedup=False)
        if r.entity_surface == expected[r.doc_id][0]
    ]
    assert sorted(r.doc_id for r in records) == sorted(expected)

    distributions = remote.fill_mask_many([r.masked_sentence for r in records], DEFAULT_INVENTORY)
    scores = [score_distribution(d, DEFAULT_INVENTORY, r) for d, r in zip(distributions, records)]
    for s in scores:
        assert in_band(s.score_a, expected[s.doc_id][1]), (s.doc_id, s.score_a)

    values = [s.score_a for s in scores]
    assert min(values) < mean_anthroscore(scores) < max(values)
