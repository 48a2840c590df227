from ._fightin import (
    DEFAULT_PRIOR_BAND,
    DEFAULT_SMOOTHING,
    SIGNIFICANT_Z,
    Band,
    LogOddsResult,
    fightin_words,
    in_band,
    significant,
    top_verbs,
    verb_counts,
    verb_log_odds,
)
from ._frequency import chunk_head, entity_frequency_report
from ._grouping import (
    DEFAULT_RESAMPLES,
    GroupedScore,
    TrendResult,
    bootstrap_group,
    compare_groups,
    group_mean_ci,
    group_scores,
    temporal_trend,
)
from ._robustness import AblationResult, VerbFilterMode, ablate_pronoun, filter_by_verbs
from ._stats import (
    ChiSquare,
    Correlation,
    chi_square_2x2,
    spearman,
    threshold_contingency,
)

__all__ = (
    "DEFAULT_PRIOR_BAND",
    "DEFAULT_RESAMPLES",
    "DEFAULT_SMOOTHING",
    "SIGNIFICANT_Z",
    "AblationResult",
    "Band",
    "ChiSquare",
    "Correlation",
    "GroupedScore",
    "LogOddsResult",
    "TrendResult",
    "VerbFilterMode",
    "ablate_pronoun",
    "bootstrap_group",
    "chi_square_2x2",
    "chunk_head",
    "compare_groups",
    "entity_frequency_report",
    "fightin_words",
    "filter_by_verbs",
    "group_mean_ci",
    "group_scores",
    "in_band",
    "significant",
    "spearman",
    "temporal_trend",
    "threshold_contingency",
    "top_verbs",
    "verb_counts",
    "verb_log_odds",
)
