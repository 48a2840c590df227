"""
Robustness of scores and findings to the pronoun set and to verb filtering.
"""

import math
from collections import defaultdict

import pytest

from anthroscan.analytics import (
    VerbFilterMode,
    ablate_pronoun,
    filter_by_verbs,
    top_verbs,
    verb_log_odds,
)
from anthroscan.scoring import (
    DEFAULT_INVENTORY,
    EPSILON,
    MaskedSentence,
    ScoredSentence,
    mean_anthroscore,
)
from anthroscan.text import load_lexicon


def _means(scores, key):
    groups = defaultdict(list)
    for s in scores:
        groups[key(s)].append(s.score_a)
    return {k: mean_anthroscore(v) for k, v in groups.items()}


def test_rescoring_with_every_pronoun_changes_nothing(small_scores, small_backend):
    result = ablate_pronoun(small_scores, DEFAULT_INVENTORY, None, small_backend)
    assert result.spearman_r == 1.0
    assert result.inventory == DEFAULT_INVENTORY
    assert [s.score_a for s in result.modified] == [s.score_a for s in small_scores]


def test_removing_a_pronoun_matches_hand_summation(small_corpus, small_scores, small_backend):
    result = ablate_pronoun(small_scores, DEFAULT_INVENTORY, "him", small_backend)
    assert "him" not in result.inventory.pronouns
    assert len(result.modified) == len(small_scores) == 50

    for scored in result.modified:
        dist = small_corpus.distributions[scored.sentence.masked_sentence]
        human = math.fsum(dist[w] + EPSILON for w in DEFAULT_INVENTORY.human if w != "him")
        non_human = math.fsum(dist[w] + EPSILON for w in DEFAULT_INVENTORY.non_human)
        assert scored.score_a == pytest.approx(math.log(human) - math.log(non_human), abs=1e-12)

    # Less human mass can only lower a score.
    for before, after in zip(small_scores, result.modified):
        assert after.score_a < before.score_a
    assert -1.0 <= result.spearman_r <= 1.0
    assert result.p_value is not None


@pytest.mark.parametrize("pronoun", ["her", "It"])
def test_every_pronoun_can_be_removed(small_scores, small_backend, pronoun):
    result = ablate_pronoun(small_scores, DEFAULT_INVENTORY, pronoun, small_backend)
    assert pronoun not in result.inventory.pronouns
    assert [s.sentence for s in result.modified] == [s.sentence for s in small_scores]


def test_reporting_verbs_are_dropped(synthetic_scores):
    reporting = load_lexicon("reporting_verbs", allow_plural=False).keywords
    kept = filter_by_verbs(synthetic_scores, reporting)

    expected = [s for s in synthetic_scores if s.verb_lemma not in reporting]
    assert kept == expected
    # "show", "suggest", "demonstrate" and "find" are planted in the mid band.
    assert 0 < len(kept) < len(synthetic_scores)
    assert not {s.verb_lemma for s in kept} & set(reporting)


def test_verb_lists_must_not_be_empty(synthetic_scores):
    with pytest.raises(ValueError, match="empty"):
        filter_by_verbs(synthetic_scores, [], VerbFilterMode.DROP_VERBS)


def _about_the_model(rest: str, verb: str | None) -> ScoredSentence:
    sentence = MaskedSentence(
        "d1", f"The model {rest}", f"[MASK] {rest}", "The model", "model", (0, 9),
        verb_lemma=verb,
    )  # fmt: skip
    return ScoredSentence(sentence, 0.2, 0.8, math.log(0.2 / 0.8))


def test_verb_filter_modes_differ():
    records = [
        _about_the_model("fails where others demonstrated gains.", "fail"),
        _about_the_model("shows gains.", "show"),
        _about_the_model("fails.", "fail"),
        _about_the_model("in the showing.", None),
    ]
    reporting = ["demonstrate", "show"]

    kept = filter_by_verbs(records, reporting, VerbFilterMode.DROP_SENTENCES)
    assert [r.sentence.original_sentence for r in kept] == ["The model fails."]

    kept = filter_by_verbs(records, reporting, VerbFilterMode.DROP_VERBS)
    assert [r.verb_lemma for r in kept] == ["fail", "fail", None]

def test_findings_survive_robustness_checks(synthetic, synthetic_scores):
    source_of = {d.doc_id: d.source.value for d in synthetic.documents}
    results = verb_log_odds(synthetic_scores)
    top = top_verbs(results, 3) + top_verbs(results, 3, "low")

    variants = {
        "original": synthetic_scores,
        "no_reporting": filter_by_verbs(
            synthetic_scores, load_lexicon("reporting_verbs", allow_plural=False).keywords
        ),
        "no_top_verbs": filter_by_verbs(synthetic_scores, top, VerbFilterMode.DROP_VERBS),
    }
    for name, scores in variants.items():
        by_source = _means(scores, lambda s: source_of[s.doc_id])
        assert by_source["news"] > by_source["papers"], name

        by_lexicon = _means(scores, lambda s: s.sentence.lexicon)
        assert by_lexicon["lm"] > by_lexicon["artifact"], name
