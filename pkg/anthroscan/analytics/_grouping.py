from __future__ import annotations

import hashlib
from collections import defaultdict
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np
import structlog

from anthroscan.errors import DegenerateInput, EmptyGroup
from anthroscan.scoring import ScoredSentence, mean_anthroscore

from ._stats import spearman

_LOG = structlog.get_logger()

DEFAULT_RESAMPLES = 1000

# A key function may return one group, several (a document in many
# categories) or None when the record lacks the metadata.
KeyFunction = Callable[[ScoredSentence], "Hashable | Iterable[Hashable] | None"]


@dataclass(frozen=True)
class GroupedScore:
    group_key: str
    n: int
    mean_a: float
    ci_low: float
    ci_high: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise EmptyGroup(f"group {self.group_key!r} has no scores")

    def to_row(self) -> dict:
        return {
            "group": self.group_key,
            "n": self.n,
            "mean_a": self.mean_a,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
        }


@dataclass(frozen=True)
class TrendResult:
    keys: tuple
    values: tuple[float, ...]
    spearman_r: float
    p_value: float | None
    # Fewer than three points: r is only the direction, and there is no p-value.
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "keys": list(self.keys),
            "values": list(self.values),
            "spearman_r": self.spearman_r,
            "p_value": self.p_value,
            "degenerate": self.degenerate,
        }


def group_scores(
    scores: Iterable[ScoredSentence], key_fn: KeyFunction
) -> tuple[dict[str, list[float]], int]:
    """Scores per group key, plus the number of records with no key."""
    groups: dict[str, list[float]] = defaultdict(list)
    unkeyed = 0
    for s in scores:
        keys = key_fn(s)
        if keys is None:
            unkeyed += 1
            continue
        if isinstance(keys, str) or not isinstance(keys, Iterable):
            keys = (keys,)
        keys = list(keys)
        if not keys:
            unkeyed += 1
        for key in keys:
            groups[str(key)].append(s.score_a)
    return dict(sorted(groups.items())), unkeyed


def group_mean_ci(
    scores: Iterable[ScoredSentence],
    key_fn: KeyFunction,
    n_boot: int = DEFAULT_RESAMPLES,
    seed: int = 0,
    confidence: float = 0.95,
) -> list[GroupedScore]:
    """
    Mean score per group, with a percentile bootstrap confidence interval.

    Each group's resamples are drawn from seeds derived from `seed` and the
    group key, so results don't depend on which groups are present or on the
    order they are computed in.
    """
    groups, unkeyed = group_scores(scores, key_fn)
    if unkeyed:
        _LOG.warning("analyze.records.unkeyed", count=unkeyed)
    return [
        bootstrap_group(key, values, n_boot=n_boot, seed=seed, confidence=confidence)
        for key, values in groups.items()
    ]


def bootstrap_group(
    group_key: str,
    values: Sequence[float],
    n_boot: int = DEFAULT_RESAMPLES,
    seed: int = 0,
    confidence: float = 0.95,
) -> GroupedScore:
    """
    >>> bootstrap_group('a', [0.5] * 10)
    GroupedScore(group_key='a', n=10, mean_a=0.5, ci_low=0.5, ci_high=0.5)
    """
    if not values:
        raise EmptyGroup(f"group {group_key!r} has no scores")
    mean = mean_anthroscore(values)
    if len(values) == 1 or n_boot < 1:
        return GroupedScore(group_key, len(values), mean, mean, mean)

    data = np.asarray(values, dtype=float)
    n = len(data)
    root = np.random.SeedSequence([seed, _stable_key(group_key)])
    means = np.empty(n_boot)
    for i, child in enumerate(root.spawn(n_boot)):
        sample = data[np.random.default_rng(child).integers(0, n, size=n)]
        means[i] = sample.mean()

    tail = (1.0 - confidence) / 2.0 * 100.0
    low, high = np.percentile(means, [tail, 100.0 - tail])
    # Percentile intervals of skewed samples can miss the point estimate.
    return GroupedScore(group_key, n, mean, min(float(low), mean), max(float(high), mean))


def _stable_key(group_key: str) -> int:
    return int.from_bytes(hashlib.sha256(group_key.encode("utf-8")).digest()[:8], "big")


def temporal_trend(
    scores: Iterable[ScoredSentence],
    year_of: Callable[[ScoredSentence], int | None],
) -> TrendResult:
    """
    Rank correlation between year and the mean score of that year.

    >>> from anthroscan.scoring import MaskedSentence
    >>> def scored(year, a):
    ...     m = MaskedSentence(str(year), 'It runs.', '[MASK] runs.', 'It', 'it', (0, 2))
    ...     return ScoredSentence(m, 0.5, 0.5, a)
    >>> trend = temporal_trend([scored(2020, 0.1), scored(2021, 0.5)], lambda s: int(s.doc_id))
    >>> trend.spearman_r, trend.p_value, trend.degenerate
    (1.0, None, True)
    """
    by_year: dict[int, list[float]] = defaultdict(list)
    for s in scores:
        year = year_of(s)
        if year is not None:
            by_year[year].append(s.score_a)

    keys = tuple(sorted(by_year))
    values = tuple(mean_anthroscore(by_year[k]) for k in keys)
    if len(keys) < 2:
        raise DegenerateInput(f"a trend needs at least two years, got {len(keys)}")

    if len(keys) == 2:
        if values[0] == values[1]:
            raise DegenerateInput("both years have the same mean score")
        _LOG.warning("trend.degenerate", years=len(keys))
        r = 1.0 if values[1] > values[0] else -1.0
        return TrendResult(keys, values, r, None, degenerate=True)

    r, p = spearman(keys, values)
    return TrendResult(keys, values, r, p)


def compare_groups(
    original: Sequence[GroupedScore], modified: Sequence[GroupedScore]
) -> list[dict]:
    """Side-by-side rows of an original and a modified grouping."""
    changed = {g.group_key: g for g in modified}
    rows = []
    for g in original:
        m = changed.get(g.group_key)
        rows.append(
            {
                "group": g.group_key,
                "n": g.n,
                "mean_a": g.mean_a,
                "modified_n": m.n if m else 0,
                "modified_mean_a": m.mean_a if m else None,
                "difference": (m.mean_a - g.mean_a) if m else None,
            }
        )
    return rows
