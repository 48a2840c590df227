"""
Scoring of single sentences and of collections.
"""

import math

import numpy as np
import pytest

from anthroscan.backend import StubBackend, StubMode
from anthroscan.errors import (
    EmptyCollection,
    InventoryError,
    InvalidThresholds,
    LastPronoun,
    MissingPronoun,
    UnknownPronoun,
    ZeroProbabilityMass,
)
from anthroscan.scoring import (
    DEFAULT_INVENTORY,
    EPSILON,
    MaskedSentence,
    PronounInventory,
    ScoredSentence,
    anthroscore_sentence,
    entity_means,
    inventory_without,
    load_inventory,
    mean_anthroscore,
    partition_extremes,
    score_distribution,
    swap_inventory,
)

UNIFORM_SCORE = math.log(7 / 4)


def _sentence(doc_id="d1", keyword="model") -> MaskedSentence:
    return MaskedSentence(
        doc_id=doc_id,
        original_sentence="The model decides.",
        masked_sentence="[MASK] decides.",
        entity_surface="The model",
        entity_keyword=keyword,
        span=(0, 9),
    )


def _scored(a: float, doc_id="d1", keyword="model") -> ScoredSentence:
    return ScoredSentence(_sentence(doc_id, keyword), 0.5, 0.5, a)


def _random_distributions(n: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        values = rng.uniform(0.0, 0.2, size=len(DEFAULT_INVENTORY.pronouns))
        # Some exact zeros, to exercise the smoothing.
        values[rng.random(len(values)) < 0.1] = 0.0
        yield dict(zip(DEFAULT_INVENTORY.pronouns, values.tolist()))


def _oracle_score(dist: dict, inventory: PronounInventory) -> float:
    p_human = math.fsum(dist[w] + EPSILON for w in inventory.human)
    p_non_human = math.fsum(dist[w] + EPSILON for w in inventory.non_human)
    return math.log(p_human) - math.log(p_non_human)


def test_uniform_distribution_scores_seven_over_four():
    dist = {w: 0.01 for w in DEFAULT_INVENTORY.pronouns}
    scored = anthroscore_sentence(_sentence(), dist, DEFAULT_INVENTORY)
    assert scored.score_a == pytest.approx(UNIFORM_SCORE, abs=1e-9)
    assert scored.score_a == pytest.approx(0.559616, abs=1e-6)


def test_uniform_stub_backend_gives_constant_score():
    backend = StubBackend()
    for text in ("[MASK] decides.", "We evaluate [MASK] on two tasks.", "[MASK] works."):
        distribution = backend.fill_mask_pronouns(text, DEFAULT_INVENTORY)
        scored = score_distribution(distribution, DEFAULT_INVENTORY, _sentence())
        assert scored.score_a == pytest.approx(UNIFORM_SCORE, abs=1e-9)


def test_scores_match_direct_formula_on_random_distributions():
    for dist in _random_distributions(1000):
        scored = anthroscore_sentence(_sentence(), dist, DEFAULT_INVENTORY)
        assert scored.score_a == pytest.approx(_oracle_score(dist, DEFAULT_INVENTORY), abs=1e-12)
        assert math.isfinite(scored.score_a)
        # The record holds the smoothed sums it was computed from.
        assert scored.score_a == pytest.approx(
            math.log(scored.p_human / scored.p_non_human), abs=1e-9
        )


def test_swapping_pronoun_sets_negates_the_score():
    swapped = swap_inventory(DEFAULT_INVENTORY)
    for dist in _random_distributions(1000, seed=1):
        a = anthroscore_sentence(_sentence(), dist, DEFAULT_INVENTORY).score_a
        b = anthroscore_sentence(_sentence(), dist, swapped).score_a
        assert a == -b


def test_more_human_probability_raises_the_score():
    for dist in _random_distributions(200, seed=2):
        before = anthroscore_sentence(_sentence(), dist, DEFAULT_INVENTORY).score_a
        more_human = {**dist, "she": dist["she"] + 0.05}
        after = anthroscore_sentence(_sentence(), more_human, DEFAULT_INVENTORY).score_a
        assert after > before

        more_it = {**dist, "it": dist["it"] + 0.05}
        assert anthroscore_sentence(_sentence(), more_it, DEFAULT_INVENTORY).score_a < before


def test_all_zero_distribution_is_smoothed_not_infinite():
    dist = {w: 0.0 for w in DEFAULT_INVENTORY.pronouns}
    scored = anthroscore_sentence(_sentence(), dist, DEFAULT_INVENTORY)
    assert scored.score_a == pytest.approx(UNIFORM_SCORE, abs=1e-9)


def test_zero_mass_without_smoothing():
    dist = {w: 0.0 for w in DEFAULT_INVENTORY.pronouns}
    with pytest.raises(ZeroProbabilityMass):
        anthroscore_sentence(_sentence(), dist, DEFAULT_INVENTORY, epsilon=0.0)


def test_missing_pronoun_is_named():
    dist = {w: 0.01 for w in DEFAULT_INVENTORY.pronouns if w != "Its"}
    with pytest.raises(MissingPronoun, match="Its"):
        anthroscore_sentence(_sentence(), dist, DEFAULT_INVENTORY)


def test_mean_lies_within_the_scores():
    backend = StubBackend(StubMode.HASHED)
    texts = [f"[MASK] handles case {i}." for i in range(6)]
    scores = [
        score_distribution(
            backend.fill_mask_pronouns(t, DEFAULT_INVENTORY), DEFAULT_INVENTORY, _sentence()
        )
        for t in texts
    ]
    mean = mean_anthroscore(scores)
    values = [s.score_a for s in scores]
    assert min(values) < mean < max(values)
    assert mean_anthroscore([0.25]) == 0.25


def test_mean_of_nothing():
    with pytest.raises(EmptyCollection):
        mean_anthroscore([])


def test_partition_recovers_planted_extremes():
    rng = np.random.default_rng(3)
    high = [_scored(a) for a in rng.uniform(1.01, 5.0, size=40)]
    low = [_scored(a) for a in rng.uniform(-5.0, -1.01, size=40)]
    mid = [_scored(a) for a in rng.uniform(-1.0, 1.0, size=40)] + [_scored(1.0), _scored(-1.0)]
    everything = high + mid + low
    rng.shuffle(everything)

    partition = partition_extremes(everything, 1.0, -1.0)
    assert sorted(s.score_a for s in partition.high) == sorted(s.score_a for s in high)
    assert sorted(s.score_a for s in partition.low) == sorted(s.score_a for s in low)
    assert partition.middle_count == len(mid)


def test_partition_thresholds_must_be_ordered():
    with pytest.raises(InvalidThresholds):
        partition_extremes([_scored(0.0)], hi=-1.0, lo=1.0)


def test_entity_means_groups_by_keyword():
    scores = [
        _scored(1.0, keyword="model"),
        _scored(3.0, keyword="Model"),
        _scored(-1.0, keyword="system"),
    ]
    assert entity_means(scores) == {"model": (2, 2.0), "system": (1, -1.0)}


def test_bundled_inventory():
    inventory = load_inventory()
    assert inventory == DEFAULT_INVENTORY
    assert len(inventory.human) == 7
    assert len(inventory.non_human) == 4


def test_inventory_from_file(tmp_path):
    path = tmp_path / "pronouns.toml"
    path.write_text('human = ["he", "she"]\nnon_human = ["it"]\n')
    assert load_inventory(path) == PronounInventory(("he", "she"), ("it",))

    path.write_text('human = ["he"]\nnon_human = ["he"]\n')
    with pytest.raises(InventoryError, match="both"):
        load_inventory(path)

    path.write_text('human = ["he"]\nnon_human = ["it"]\nother = ["x"]\n')
    with pytest.raises(InventoryError, match="other"):
        load_inventory(path)


@pytest.mark.parametrize(
    ("human", "non_human"),
    [((), ("it",)), (("he", "he"), ("it",)), (("he", ""), ("it",))],
)
def test_invalid_inventories(human, non_human):
    with pytest.raises(InventoryError):
        PronounInventory(human, non_human)


def test_removing_pronouns():
    reduced = inventory_without(DEFAULT_INVENTORY, "him")
    assert "him" not in reduced.pronouns
    assert len(reduced.human) == 6
    assert reduced.non_human == DEFAULT_INVENTORY.non_human

    with pytest.raises(UnknownPronoun):
        inventory_without(DEFAULT_INVENTORY, "they")
    with pytest.raises(LastPronoun):
        inventory_without(PronounInventory(("he", "she"), ("it",)), "it")
