"""
Weighted log-odds ratios with an informative Dirichlet prior ("Fightin' Words"),
used to find the verbs that separate strongly anthropomorphic sentences from
strongly non-anthropomorphic ones.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Collection, Iterable, Mapping, Sequence
from dataclasses import dataclass
from enum import Enum

from anthroscan.errors import DegenerateInput, EmptyCorpus
from anthroscan.scoring import ScoredSentence

DEFAULT_SMOOTHING = 0.01
DEFAULT_PRIOR_BAND = 0.5
SIGNIFICANT_Z = 1.96


class Band(Enum):
    HIGH = "high"
    LOW = "low"
    MID = "mid"


@dataclass(frozen=True)
class LogOddsResult:
    word: str
    count_a: int
    count_b: int
    delta: float
    variance: float
    z: float

    def to_row(self) -> dict:
        return {
            "word": self.word,
            "count_a": self.count_a,
            "count_b": self.count_b,
            "delta": self.delta,
            "variance": self.variance,
            "z": self.z,
        }


def fightin_words(
    counts_a: Mapping[str, int],
    counts_b: Mapping[str, int],
    prior_counts: Mapping[str, float],
    smoothing: float = DEFAULT_SMOOTHING,
    prior_scale: float = 1.0,
) -> list[LogOddsResult]:
    """
    Log-odds of each word in corpus `a` against corpus `b`, sorted by z
    descending (ties by word).

    Every word of the two corpora and the prior gets pseudo-count
    ``prior_scale * prior_counts[w] + smoothing``. Only words seen in `a` or
    `b` are reported.

    >>> same = {'learn': 2, 'use': 1}
    >>> [(r.word, r.z) for r in fightin_words(same, same, {'learn': 1, 'use': 1})]
    [('learn', 0.0), ('use', 0.0)]
    """
    if smoothing <= 0 and prior_scale <= 0:
        raise ValueError("smoothing or prior_scale must be positive")
    for name, counts in (("a", counts_a), ("b", counts_b), ("prior", prior_counts)):
        if any(c < 0 for c in counts.values()):
            raise ValueError(f"counts of corpus {name} must be non-negative")

    n_a = sum(counts_a.values())
    n_b = sum(counts_b.values())
    if n_a == 0:
        raise EmptyCorpus("corpus a has no words")
    if n_b == 0:
        raise EmptyCorpus("corpus b has no words")

    vocabulary = sorted(set(counts_a) | set(counts_b) | set(prior_counts))
    if len(vocabulary) < 2:
        raise DegenerateInput("log-odds need at least two word types")
    alpha = {w: prior_scale * prior_counts.get(w, 0) + smoothing for w in vocabulary}
    alpha_0 = math.fsum(alpha.values())

    results = []
    for w in vocabulary:
        y_a = counts_a.get(w, 0)
        y_b = counts_b.get(w, 0)
        if not (y_a or y_b):
            continue
        a_w = alpha[w]
        delta = math.log((y_a + a_w) / (n_a + alpha_0 - y_a - a_w)) - math.log(
            (y_b + a_w) / (n_b + alpha_0 - y_b - a_w)
        )
        variance = 1.0 / (y_a + a_w) + 1.0 / (y_b + a_w)
        results.append(LogOddsResult(w, y_a, y_b, delta, variance, delta / math.sqrt(variance)))

    results.sort(key=lambda r: (-r.z, r.word))
    return results


def in_band(
    score_a: float,
    which: Band | str,
    hi: float = 1.0,
    lo: float = -1.0,
    prior_band: float = DEFAULT_PRIOR_BAND,
) -> bool:
    which = Band(which)
    if which is Band.HIGH:
        return score_a > hi
    if which is Band.LOW:
        return score_a < lo
    return abs(score_a) < prior_band


def verb_counts(
    records: Iterable[ScoredSentence],
    which: Band | str,
    hi: float = 1.0,
    lo: float = -1.0,
    prior_band: float = DEFAULT_PRIOR_BAND,
) -> Counter:
    """
    Verb lemma counts among records in one score band. `mid` is the prior
    pool, |A| < prior_band. Records without a verb are skipped.
    """
    return Counter(
        r.verb_lemma
        for r in records
        if r.verb_lemma and in_band(r.score_a, which, hi, lo, prior_band)
    )


def verb_log_odds(
    records: Sequence[ScoredSentence],
    hi: float = 1.0,
    lo: float = -1.0,
    prior_band: float = DEFAULT_PRIOR_BAND,
    smoothing: float = DEFAULT_SMOOTHING,
    prior_scale: float = 1.0,
    verbs: Collection[str] | None = None,
) -> list[LogOddsResult]:
    """
    High-band verbs against low-band verbs, with the mid band as prior.
    `verbs`, when given, restricts the comparison to those lemmas.
    """

    def counts(which: Band) -> Counter:
        found = verb_counts(records, which, hi, lo, prior_band)
        if verbs is not None:
            found = Counter({w: c for w, c in found.items() if w in verbs})
        return found

    return fightin_words(
        counts(Band.HIGH),
        counts(Band.LOW),
        counts(Band.MID),
        smoothing=smoothing,
        prior_scale=prior_scale,
    )


def significant(
    results: Iterable[LogOddsResult], z: float = SIGNIFICANT_Z
) -> list[LogOddsResult]:
    return [r for r in results if abs(r.z) > z]


def top_verbs(
    results: Sequence[LogOddsResult], k: int, side: Band | str = Band.HIGH
) -> list[str]:
    """
    The `k` words most associated with one side: highest z for `high`,
    lowest z for `low`.

    >>> rs = [LogOddsResult(w, 0, 0, z, 1.0, z) for w, z in [('a', 3.0), ('b', 0.1), ('c', -2.0)]]
    >>> top_verbs(rs, 1), top_verbs(rs, 1, 'low')
    (['a'], ['c'])
    """
    side = Band(side)
    if side is Band.MID:
        raise ValueError("top verbs are taken from the high or low side")
    ordered = sorted(results, key=lambda r: (-r.z, r.word))
    if side is Band.LOW:
        ordered = sorted(results, key=lambda r: (r.z, r.word))
    return [r.word for r in ordered[:k]]
