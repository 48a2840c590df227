"""
Log-odds of verbs between strongly and weakly anthropomorphic sentences.
"""

import math

import numpy as np
import pytest

from anthroscan.analytics import (
    Band,
    fightin_words,
    in_band,
    significant,
    top_verbs,
    verb_counts,
    verb_log_odds,
)
from anthroscan.errors import DegenerateInput, EmptyCorpus
from anthroscan.testutils.corpus import HIGH_VERBS, LOW_VERBS


def _oracle(counts_a, counts_b, prior, smoothing=0.01):
    vocabulary = sorted(set(counts_a) | set(counts_b) | set(prior))
    alpha = np.array([prior.get(w, 0) + smoothing for w in vocabulary])
    y_a = np.array([counts_a.get(w, 0) for w in vocabulary], dtype=float)
    y_b = np.array([counts_b.get(w, 0) for w in vocabulary], dtype=float)
    n_a, n_b, alpha_0 = y_a.sum(), y_b.sum(), alpha.sum()

    odds_a = (y_a + alpha) / (n_a + alpha_0 - y_a - alpha)
    odds_b = (y_b + alpha) / (n_b + alpha_0 - y_b - alpha)
    delta = np.log(odds_a) - np.log(odds_b)
    z = delta / np.sqrt(1 / (y_a + alpha) + 1 / (y_b + alpha))
    return {w: z[i] for i, w in enumerate(vocabulary) if y_a[i] or y_b[i]}


def test_toy_counts_match_the_formula():
    a = {"learn": 5, "use": 1, "show": 4}
    b = {"learn": 1, "use": 5, "show": 4}
    prior = {"learn": 1.0, "use": 1.0, "show": 1.0}
    results = fightin_words(a, b, prior)

    assert [r.word for r in results] == ["learn", "show", "use"]
    expected = _oracle(a, b, prior)
    for r in results:
        assert r.z == pytest.approx(expected[r.word], abs=1e-12)
    z = {r.word: r.z for r in results}
    assert z["learn"] > 0 > z["use"]
    assert z["learn"] == pytest.approx(-z["use"], abs=1e-12)
    assert z["show"] == pytest.approx(0.0, abs=1e-12)

    # By hand, for "learn": alpha = 1.01 per word, alpha_0 = 3.03.
    delta = math.log(6.01 / (10 + 3.03 - 6.01)) - math.log(2.01 / (10 + 3.03 - 2.01))
    assert results[0].delta == pytest.approx(delta, abs=1e-12)
    assert results[0].variance == pytest.approx(1 / 6.01 + 1 / 2.01, abs=1e-12)


def test_random_counts_match_the_formula():
    rng = np.random.default_rng(7)
    for _ in range(100):
        words = [f"w{i}" for i in range(int(rng.integers(2, 21)))]

        def counts():
            return {w: int(c) for w, c in zip(words, rng.integers(0, 51, len(words))) if c}

        a, b, prior = counts(), counts(), counts()
        if not a or not b or len(set(a) | set(b) | set(prior)) < 2:
            continue
        expected = _oracle(a, b, prior)
        results = fightin_words(a, b, prior)
        assert {r.word for r in results} == set(expected)
        for r in results:
            assert r.z == pytest.approx(expected[r.word], abs=1e-9)


def test_swapping_corpora_negates_z():
    rng = np.random.default_rng(11)
    words = [f"w{i}" for i in range(15)]
    a = {w: int(c) + 1 for w, c in zip(words, rng.integers(0, 30, 15))}
    b = {w: int(c) + 1 for w, c in zip(words, rng.integers(0, 30, 15))}
    prior = {w: 2.0 for w in words}

    forward = {r.word: r.z for r in fightin_words(a, b, prior)}
    backward = {r.word: r.z for r in fightin_words(b, a, prior)}
    for w in words:
        assert forward[w] == pytest.approx(-backward[w], abs=1e-12)


def test_results_are_sorted_by_z_then_word():
    results = fightin_words({"b": 1, "a": 1, "c": 3}, {"b": 1, "a": 1, "c": 1}, {})
    assert [r.word for r in results] == ["c", "a", "b"]


def test_empty_or_degenerate_corpora():
    with pytest.raises(EmptyCorpus):
        fightin_words({}, {"learn": 1}, {})
    with pytest.raises(EmptyCorpus):
        fightin_words({"learn": 1}, {"learn": 0}, {})
    with pytest.raises(DegenerateInput):
        fightin_words({"learn": 2}, {"learn": 1}, {})
    with pytest.raises(ValueError):
        fightin_words({"learn": -1, "use": 2}, {"learn": 1}, {})


def test_bands():
    assert in_band(1.5, Band.HIGH) and not in_band(1.0, Band.HIGH)
    assert in_band(-1.5, "low") and not in_band(-1.0, "low")
    assert in_band(0.3, "mid") and not in_band(0.5, "mid")
    assert in_band(0.6, "mid", prior_band=0.7)


def test_planted_verbs_separate_the_bands(synthetic_scores):
    results = verb_log_odds(synthetic_scores)
    z = {r.word: r.z for r in results}

    assert z["learn"] > 1.96
    assert z["propose"] < -1.96
    found = {r.word for r in significant(results)}
    assert found <= set(HIGH_VERBS) | set(LOW_VERBS)
    assert {"learn", "propose"} <= found

    assert set(top_verbs(results, 3)) <= set(HIGH_VERBS)
    assert set(top_verbs(results, 3, Band.LOW)) <= set(LOW_VERBS)


@pytest.mark.parametrize("prior_band", [0.2, 0.5, 0.7])
def test_prior_band_does_not_change_the_findings(synthetic_scores, prior_band):
    # No synthetic score lies between the mid band and 1.0.
    baseline = verb_log_odds(synthetic_scores)
    results = verb_log_odds(synthetic_scores, prior_band=prior_band)
    assert {r.word for r in significant(results)} == {r.word for r in significant(baseline)}


def test_mid_band_is_the_prior_pool(synthetic_scores):
    mid = verb_counts(synthetic_scores, Band.MID)
    assert sum(mid.values()) == sum(1 for s in synthetic_scores if abs(s.score_a) < 0.5)


def test_restricting_the_verbs(synthetic_scores):
    results = verb_log_odds(synthetic_scores, verbs={"learn", "propose", "show"})
    assert {r.word for r in results} <= {"learn", "propose", "show"}
