"""
Rank correlation and 2×2 association tests.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from itertools import islice, permutations
from typing import NamedTuple

import numpy as np
from scipy import special
from scipy import stats as scipy_stats

from anthroscan.errors import DegenerateInput, ZeroMarginal

MAX_PERMUTATION_N = 10
_PERMUTATION_CHUNK = 50_000


class Correlation(NamedTuple):
    r: float
    p: float


class ChiSquare(NamedTuple):
    chi2: float
    p: float


def spearman(
    x: Sequence[float], y: Sequence[float], *, method: str = "t"
) -> Correlation:
    """
    Spearman's rank correlation, with tied values given their average rank.

    The p-value is two-sided: from the t distribution with n-2 degrees of
    freedom (`method="t"`), or by enumerating every ordering of `y`
    (`method="permutation"`, at most ten values).

    >>> spearman([1, 2, 3], [10, 20, 30])
    Correlation(r=1.0, p=0.0)
    >>> spearman([1, 2, 3], [30, 20, 10]).r
    -1.0
    >>> spearman([1, 2, 3], [5, 5, 5])
    Traceback (most recent call last):
    ...
    anthroscan.errors.DegenerateInput: y is constant, so its rank correlation is undefined
    """
    if len(x) != len(y):
        raise DegenerateInput(f"series differ in length: {len(x)} and {len(y)}")
    n = len(x)
    if n < 3:
        raise DegenerateInput(f"need at least 3 pairs for a rank correlation, got {n}")

    rx = _ranks(x, "x")
    ry = _ranks(y, "y")
    r = _pearson(rx, ry)

    if method == "t":
        return Correlation(r, _t_test_p(r, n))
    if method == "permutation":
        return Correlation(r, _permutation_p(rx, ry, r))
    raise ValueError(f"unknown p-value method {method!r}: expected 't' or 'permutation'")


def _ranks(values: Sequence[float], name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(array)):
        raise DegenerateInput(f"{name} contains non-finite values")
    if np.all(array == array[0]):
        raise DegenerateInput(f"{name} is constant, so its rank correlation is undefined")
    return scipy_stats.rankdata(array, method="average")


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    da = a - a.mean()
    db = b - b.mean()
    r = float(np.dot(da, db) / math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db))))
    return max(-1.0, min(1.0, r))


def _t_test_p(r: float, n: int) -> float:
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return float(min(1.0, 2.0 * scipy_stats.t.sf(abs(t), n - 2)))


def _permutation_p(rx: np.ndarray, ry: np.ndarray, r: float) -> float:
    """Share of all orderings of `ry` that correlate with `rx` at least as strongly."""
    n = len(rx)
    if n > MAX_PERMUTATION_N:
        raise ValueError(
            f"exact permutation p-values are limited to n <= {MAX_PERMUTATION_N}, got {n}"
        )
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    denominator = math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy)))
    # Rounding slack, so orderings tying the observed statistic are counted.
    threshold = abs(r) - 1e-12

    extreme = 0
    orderings = permutations(dy)
    while chunk := list(islice(orderings, _PERMUTATION_CHUNK)):
        rs = np.asarray(chunk) @ dx / denominator
        extreme += int(np.count_nonzero(np.abs(rs) >= threshold))
    return extreme / math.factorial(n)


def chi_square_2x2(table: Sequence[Sequence[float]]) -> ChiSquare:
    """
    Pearson's chi-square for a 2×2 contingency table, without continuity
    correction. The p-value is for one degree of freedom.

    >>> chi_square_2x2([[10, 10], [10, 10]])
    ChiSquare(chi2=0.0, p=1.0)
    >>> chi_square_2x2([[20, 0], [0, 20]]).chi2
    40.0
    >>> chi_square_2x2([[0, 0], [3, 4]])
    Traceback (most recent call last):
    ...
    anthroscan.errors.ZeroMarginal: row 0 of the table sums to zero
    """
    observed = np.asarray(table, dtype=float)
    if observed.shape != (2, 2):
        raise ValueError(f"expected a 2×2 table, got shape {observed.shape}")
    if np.any(observed < 0) or not np.all(np.isfinite(observed)):
        raise ValueError("table cells must be finite non-negative counts")

    rows = observed.sum(axis=1)
    columns = observed.sum(axis=0)
    for axis_name, marginals in (("row", rows), ("column", columns)):
        for i, total in enumerate(marginals):
            if total == 0:
                raise ZeroMarginal(f"{axis_name} {i} of the table sums to zero")

    total = observed.sum()
    chi2 = math.fsum(
        (observed[i, j] - rows[i] * columns[j] / total) ** 2 / (rows[i] * columns[j] / total)
        for i in range(2)
        for j in range(2)
    )
    return ChiSquare(chi2, float(special.erfc(math.sqrt(chi2 / 2.0))))


def threshold_contingency(
    scores: Sequence[float],
    human_labels: Sequence[bool],
    threshold: float | None = None,
) -> list[list[int]]:
    """
    Cross human judgements with scores above a threshold (by default the mean
    score of the labelled set).

    Rows are judged anthropomorphic / not; columns are above / not above.

    >>> threshold_contingency([2.0, 1.5, -1.0, -2.0], [True, True, False, True])
    [[2, 1], [0, 1]]
    """
    if len(scores) != len(human_labels):
        raise ValueError(
            f"{len(scores)} scores but {len(human_labels)} human labels"
        )
    if not scores:
        raise DegenerateInput("no labelled scores")
    if threshold is None:
        threshold = math.fsum(scores) / len(scores)

    table = [[0, 0], [0, 0]]
    for score, judged in zip(scores, human_labels):
        table[0 if judged else 1][0 if score > threshold else 1] += 1
    return table
