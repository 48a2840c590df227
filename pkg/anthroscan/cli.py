"""
Measure implicit anthropomorphism in a corpus.

Entity mentions (e.g. "the model", "these algorithms") are masked, and a
masked language model is asked how likely a human pronoun ("he", "she") is
to fill the mask, against a non-human one ("it"). The log of that ratio is
the sentence's score: positive when the entity is framed like a person.

---

A typical run scores a corpus, then analyses the scores:

    anthroscan score --corpus abstracts.jsonl --endpoint http://localhost:8080
    anthroscan analyze --group-by year --corpus abstracts.jsonl
    anthroscan verbs
    anthroscan ablate --ablation pronoun:him

Settings can also come from a TOML file (--config), and from the
ANTHROSCAN_ENDPOINT, ANTHROSCAN_API_KEY, ANTHROSCAN_CACHE and
ANTHROSCAN_LOG_FORMAT environment variables. Flags win over both.

Exit codes: 0 on success, 1 for bad settings or input, 2 when some
sentences failed at the backend (see errors.jsonl).
"""

from __future__ import annotations

import collections
import contextlib
import sys
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import partial
from pathlib import Path
from textwrap import dedent
from typing import Any

import click
import structlog
from click import secho as click_secho
from click import style
from typing_extensions import override

from anthroscan import run
from anthroscan._utils import chunked, read_jsonl, write_csv, write_json, write_jsonl
from anthroscan.analytics import (
    Band,
    GroupedScore,
    VerbFilterMode,
    ablate_pronoun,
    compare_groups,
    entity_frequency_report,
    filter_by_verbs,
    group_mean_ci,
    significant,
    spearman,
    temporal_trend,
    top_verbs,
    verb_log_odds,
)
from anthroscan.backend import (
    DEFAULT_BATCH_SIZE,
    BackendDescriptor,
    BackendKind,
    FillMaskBackend,
    PronounDistribution,
    StubMode,
    check_inventory,
    open_backend,
)
from anthroscan.config import RunConfig, load_config
from anthroscan.errors import (
    AnthroscanError,
    BackendError,
    CacheMiss,
    DegenerateInput,
    MaskError,
    MaskTokenizationError,
    MissingPronoun,
    ZeroProbabilityMass,
)
from anthroscan.logs import LogFormat, bind_run, init_logging
from anthroscan.scoring import (
    MaskedSentence,
    PronounInventory,
    ScoredSentence,
    load_inventory,
    mean_anthroscore,
    partition_extremes,
    score_distribution,
)
from anthroscan.text import (
    AnalysisSource,
    Document,
    build_masked_corpus,
    filter_lm_documents,
    load_lexicon,
    load_parses,
    read_corpus,
)

# Machine (json) logging.
_LOG = structlog.get_logger()

# Interactive messages for a human go to stderr.
user_message = partial(click_secho, err=True)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_BACKEND_FAILURES = 2

GROUP_BY_CHOICES = ("category", "year", "entity", "source", "lexicon")
_NEEDS_CORPUS = frozenset({"category", "year", "source"})

GROUP_HEADER = ("group", "n", "mean_a", "ci_low", "ci_high")
VERB_HEADER = ("word", "count_a", "count_b", "delta", "variance", "z")


class ScoreResult(Enum):
    SCORED = 1
    # Not scorable (the model can't place the mask, or no probability mass).
    SKIPPED = 2
    # The backend failed.
    FAILED = 3


def _print_version(ctx, param, value) -> None:
    """Print version information and exit"""
    if not value or ctx.resilient_parsing:
        return

    import anthroscan

    click.echo(f"{style('anthroscan', bold=True)} version: {anthroscan.__version__}")
    ctx.exit()


@contextlib.contextmanager
def _exit_on_input_errors() -> Iterator[None]:
    """Report our own errors as a one-line message and exit 1."""
    try:
        yield
    except AnthroscanError as e:
        _LOG.debug("cli.error", error=type(e).__name__, message=str(e))
        user_message(f"{type(e).__name__}: {e}", fg="red")
        sys.exit(EXIT_INPUT_ERROR)


def _config(ctx: click.Context, **overrides: Any) -> RunConfig:
    with _exit_on_input_errors():
        return load_config(ctx.obj["config_file"], overrides)


def _fail(message: str) -> None:
    user_message(message, fg="red")
    sys.exit(EXIT_INPUT_ERROR)


@click.group(help=__doc__)
@click.option(
    "--version",
    is_flag=True,
    callback=_print_version,
    expose_value=False,
    is_eager=True,
)
@click.option(
    "-c",
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="TOML file of settings. Flags override it.",
)
@click.option(
    "--verbose",
    "-v",
    count=True,
    help=dedent(
        """\
        Enable info log messages, instead of just warnings and errors.

        Logging goes to stderr unless `--event-log-file` is specified.

        Logging is coloured plain-text if going to a tty, and jsonl format otherwise
        (see `--log-format`).

        Use twice to enable debug logging too.
        """
    ),
)
@click.option(
    "-l",
    "--event-log-file",
    help="Append log messages to file, in jsonl format",
    type=click.Path(writable=True, dir_okay=False),
)
@click.option(
    "--log-format",
    type=click.Choice([f.value for f in LogFormat]),
    default=LogFormat.AUTO.value,
    envvar="ANTHROSCAN_LOG_FORMAT",
    show_default=True,
    help="Log rendering: auto picks console for a terminal and json otherwise",
)
@click.pass_context
def cli(
    ctx: click.Context,
    config_file: Path | None,
    verbose: int,
    event_log_file: str | None,
    log_format: str,
):
    log_format_ = LogFormat(log_format)
    if event_log_file and log_format_ is LogFormat.AUTO:
        log_format_ = LogFormat.JSON
    init_logging(
        open(event_log_file, "ab") if event_log_file else None,
        verbosity=verbose,
        cache_logger_on_first_use=False,
        log_format=log_format_,
    )
    bind_run(ctx.invoked_subcommand)
    ctx.obj = {"config_file": config_file}


def output_dir_option(f):
    return click.option(
        "-o",
        "--output-dir",
        type=click.Path(file_okay=False, path_type=Path),
        help="Directory for results (default: anthroscan-out)",
    )(f)


def corpus_option(f):
    return click.option(
        "--corpus",
        "corpus_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="JSONL corpus, one document per line",
    )(f)


def parses_option(f):
    return click.option(
        "--parses",
        "parses_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help=dedent(
            """\
            Manifest of CoNLL-U dependency parses for the corpus sentences.
            When given, subjects and objects come from the parses instead of
            the built-in rules.
            """
        ),
    )(f)


def scored_option(f):
    return click.option(
        "--scored",
        "scored_path",
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="Scored sentences from `anthroscan score` (default: <output-dir>/scored.jsonl)",
    )(f)


# --- score -----------------------------------------------------------------


@cli.command()
@corpus_option
@click.option(
    "--lexicon",
    "lexicons",
    multiple=True,
    help=dedent(
        """\
        Entity lexicon to mask: a bundled name (artifact, lm, human) or a
        word-list file. Repeatable. (default: artifact)
        """
    ),
)
@click.option(
    "--lm-only/--all-documents",
    default=None,
    help="Keep only documents that mention language models (default: all)",
)
@parses_option
@click.option(
    "--backend",
    "backend_kind",
    type=click.Choice([k.value for k in BackendKind]),
    help="Where pronoun probabilities come from (default: remote if an endpoint is set, else stub)",
)
@click.option("--endpoint", help="Base URL of a fill-mask service")
@click.option("--model-id", help="Model to ask for (default: roberta-base)")
@click.option("--mask-token", help="The model's mask token (default: <mask>)")
@click.option(
    "--stub-mode",
    type=click.Choice([m.value for m in StubMode]),
    help="Stub backend mode (default: uniform)",
)
@click.option(
    "--stub-table",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="JSON probability table for the `table` and `per_text` stub modes",
)
@click.option(
    "--cache/--no-cache",
    default=None,
    help=dedent(
        """\
        Keep every distribution in a persistent cache (default: on), so an
        interrupted run resumes where it stopped and ablations need no model.
        """
    ),
)
@click.option(
    "--cache-path",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Cache file (default: <output-dir>/distributions.cache)",
)
@click.option(
    "--inventory",
    "inventory_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="TOML pronoun inventory (default: the bundled lists)",
)
@click.option(
    "-j",
    "--workers",
    type=int,
    help="Number of concurrent workers (default: 1). Output doesn't depend on it.",
)
@click.option("--seed", type=int, help="Random seed, recorded for later analyses")
@output_dir_option
@click.pass_context
def score(
    ctx: click.Context,
    corpus_path,
    lexicons,
    lm_only,
    parses_path,
    backend_kind,
    endpoint,
    model_id,
    mask_token,
    stub_mode,
    stub_table,
    cache,
    cache_path,
    inventory_path,
    workers,
    seed,
    output_dir,
):
    """
    Mask entity mentions in a corpus and score each one.

    Writes masked.jsonl, scored.jsonl, errors.jsonl and summary.json.
    """
    config = _config(
        ctx,
        corpus_path=corpus_path,
        lexicons=lexicons or None,
        lm_only=lm_only,
        parses_path=parses_path,
        inventory_path=inventory_path,
        workers=workers,
        seed=seed,
        output_dir=output_dir,
        cache=cache,
        cache_path=cache_path,
        **{
            "backend.kind": backend_kind,
            "backend.endpoint": endpoint,
            "backend.model_id": model_id,
            "backend.mask_token": mask_token,
            "backend.stub_mode": stub_mode,
            "backend.stub_table": stub_table,
        },
    )
    if config.corpus_path is None:
        _fail("corpus_path: no corpus given (use --corpus or set corpus_path)")

    with _exit_on_input_errors():
        documents = _read_documents(config)
        inventory = load_inventory(config.inventory_path)
        lexicons_ = [load_lexicon(name) for name in config.lexicons]
        parses = load_parses(config.parses_path) if config.parses_path else None
    if not documents:
        _fail(f"no documents in {config.corpus_path}")

    user_message(
        f"Masking mentions in {len(documents)} documents with "
        f"{style(', '.join(lex.name for lex in lexicons_), bold=True)}"
    )
    with _exit_on_input_errors():
        masked = build_masked_corpus(
            documents,
            lexicons_,
            workers=config.workers,
            analysis_source=(
                AnalysisSource.CONLLU if parses is not None else AnalysisSource.BUILTIN_RULES
            ),
            parses=parses,
        )
    output_dir = config.output_dir
    write_jsonl(output_dir / "masked.jsonl", (m.to_dict() for m in masked))

    with _exit_on_input_errors():
        backend = open_backend(config.backend, config.resolved_cache_path)
    with backend:
        if config.backend.kind is not BackendKind.CACHED:
            with _exit_on_input_errors():
                check_inventory(backend, inventory)
        user_message(
            f"Scoring {len(masked)} masked sentences with "
            f"{style(backend.model_id, bold=True)}"
        )
        outcomes = score_all(
            backend,
            masked,
            inventory,
            workers=config.workers,
            batch_size=config.backend.batch_size,
        )

    counts = collections.Counter(result for result, _, _ in outcomes)
    scored = [s for _, s, _ in outcomes if s is not None]
    errors = [e for _, _, e in outcomes if e is not None]

    write_jsonl(output_dir / "scored.jsonl", (s.to_dict() for s in scored))
    write_jsonl(output_dir / "errors.jsonl", errors)

    summary = {
        "documents": len(documents),
        "masked_sentences": len(masked),
        "counts": {r.name.lower(): counts[r] for r in ScoreResult},
        "mean_a": mean_anthroscore(scored) if scored else None,
        "model_id": config.backend.model_id,
        "inventory": inventory.to_dict(),
        "inventory_fingerprint": inventory.fingerprint(),
        "lexicons": list(config.lexicons),
        "analysis_source": "conllu" if parses is not None else "builtin_rules",
        "seed": config.seed,
    }
    if scored:
        extremes = partition_extremes(scored, config.hi, config.lo)
        summary["extremes"] = {
            "hi": config.hi,
            "lo": config.lo,
            "high": len(extremes.high),
            "low": len(extremes.low),
            "middle": extremes.middle_count,
        }
    write_json(output_dir / "summary.json", summary)

    failure_count = counts[ScoreResult.FAILED]
    status_messages = ", ".join(
        f"{counts[r]} {r.name.lower()}" for r in ScoreResult if counts[r]
    )
    user_message(
        f"finished. {status_messages or 'nothing to score'}",
        fg="red" if failure_count else "green" if scored else None,
    )
    if scored:
        user_message(f"mean score: {summary['mean_a']:.4f} over {len(scored)} sentences")
    _LOG.info(
        "score.completed",
        output_dir=output_dir,
        **{f"was_{r.name.lower()}": counts[r] for r in ScoreResult},
    )
    sys.exit(EXIT_BACKEND_FAILURES if failure_count else EXIT_OK)


def _read_documents(config: RunConfig) -> list[Document]:
    documents = read_corpus(config.corpus_path)
    if config.lm_only:
        keywords = load_lexicon(config.lm_keywords, allow_plural=False).keywords
        documents = [d for d in documents if filter_lm_documents(d, keywords)]
        _LOG.info("corpus.lm_filtered", documents=len(documents))
    return documents


def score_one(
    backend: FillMaskBackend,
    sentence: MaskedSentence,
    inventory: PronounInventory,
    distribution: PronounDistribution | None = None,
) -> tuple[ScoreResult, ScoredSentence | None, dict | None]:
    """Score a sentence, asking the backend unless its distribution is given."""
    log = _LOG.bind(doc_id=sentence.doc_id, sentence_index=sentence.sentence_index)
    try:
        if distribution is None:
            distribution = backend.fill_mask_pronouns(sentence.masked_sentence, inventory)
        return ScoreResult.SCORED, score_distribution(distribution, inventory, sentence), None
    except (MaskTokenizationError, ZeroProbabilityMass, MaskError) as e:
        log.warning("score.sentence.skipped", reason=str(e))
        return ScoreResult.SKIPPED, None, _error_record(sentence, ScoreResult.SKIPPED, e)
    except (BackendError, MissingPronoun) as e:
        log.warning("score.sentence.failed", error=type(e).__name__, reason=str(e))
        return ScoreResult.FAILED, None, _error_record(sentence, ScoreResult.FAILED, e)


def score_batch(
    backend: FillMaskBackend, batch: Sequence[MaskedSentence], inventory: PronounInventory
) -> list[tuple[ScoreResult, ScoredSentence | None, dict | None]]:
    """
    Score a batch with one backend call. If the call fails, each sentence is
    asked for on its own, so the outcome of one bad sentence stays its own.
    """
    try:
        distributions = backend.fill_mask_many([s.masked_sentence for s in batch], inventory)
    except (BackendError, MaskError) as e:
        _LOG.debug(
            "score.batch.split", sentences=len(batch), error=type(e).__name__, reason=str(e)
        )
        return [score_one(backend, s, inventory) for s in batch]
    return [score_one(backend, s, inventory, d) for s, d in zip(batch, distributions)]


def score_all(
    backend: FillMaskBackend,
    masked: Sequence[MaskedSentence],
    inventory: PronounInventory,
    workers: int = 1,
    batch_size: int = DEFAULT_BATCH_SIZE,
) -> list[tuple[ScoreResult, ScoredSentence | None, dict | None]]:
    """Score every sentence, `batch_size` at a time. Results keep the input order."""
    batches = list(chunked(masked, batch_size))
    # If one worker, avoid any threads. This makes test tracing far easier.
    if workers == 1:
        results = [score_batch(backend, b, inventory) for b in batches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: score_batch(backend, b, inventory), batches))
    return [outcome for batch in results for outcome in batch]


def _error_record(sentence: MaskedSentence, result: ScoreResult, error: Exception) -> dict:
    return {
        "doc_id": sentence.doc_id,
        "sentence_index": sentence.sentence_index,
        "masked_sentence": sentence.masked_sentence,
        "result": result.name.lower(),
        "error": type(error).__name__,
        "message": str(error),
    }


# --- reading scores back ----------------------------------------------------


def read_scored(path: Path) -> list[ScoredSentence]:
    try:
        return [ScoredSentence.from_dict(doc) for _, doc in read_jsonl(path)]
    except FileNotFoundError:
        _fail(f"scored: no file {path}; run `anthroscan score` first")
    except (KeyError, TypeError, ValueError) as e:
        _fail(f"scored: {path} is not a scored sentence file: {e}")


def _load_scored(config: RunConfig, scored_path: Path | None) -> list[ScoredSentence]:
    scored = read_scored(scored_path or config.output_dir / "scored.jsonl")
    if not scored:
        _fail("no scored sentences to analyse")
    return scored


def group_key_function(
    group_by: str, documents: dict[str, Document] | None
) -> Callable[[ScoredSentence], Any]:
    if group_by == "entity":
        return lambda s: s.sentence.entity_keyword.lower()
    if group_by == "lexicon":
        return lambda s: s.sentence.lexicon
    if documents is None:
        raise click.UsageError(f"grouping by {group_by} needs the corpus (--corpus)")

    def metadata(s: ScoredSentence):
        doc = documents.get(s.doc_id)
        if doc is None:
            return None
        if group_by == "category":
            return doc.categories or None
        if group_by == "year":
            return doc.year
        return doc.source.value

    return metadata


def _documents_by_id(config: RunConfig, group_by: str) -> dict[str, Document] | None:
    if group_by not in _NEEDS_CORPUS or config.corpus_path is None:
        return None
    with _exit_on_input_errors():
        return {d.doc_id: d for d in read_corpus(config.corpus_path)}


def _group_rows(groups: Sequence[GroupedScore]) -> list[dict]:
    return [g.to_row() for g in groups]


# --- analyze ---------------------------------------------------------------


@cli.command()
@click.option(
    "--group-by",
    type=click.Choice(GROUP_BY_CHOICES),
    default="source",
    show_default=True,
    help="What to group sentences by",
)
@corpus_option
@scored_option
@click.option("--seed", type=int, help="Seed for the bootstrap confidence intervals")
@click.option("--n-boot", type=int, help="Bootstrap resamples per group (default: 1000)")
@output_dir_option
@click.pass_context
def analyze(ctx, group_by, corpus_path, scored_path, seed, n_boot, output_dir):
    """
    Mean score per group, with 95% bootstrap confidence intervals.

    Writes groups_<group-by>.csv, plus trend.json (rank correlation of
    year against mean score) when grouping by year.
    """
    config = _config(
        ctx, corpus_path=corpus_path, seed=seed, n_boot=n_boot, output_dir=output_dir
    )
    scored = _load_scored(config, scored_path)
    key_fn = group_key_function(group_by, _documents_by_id(config, group_by))

    unkeyed = [s.doc_id for s in scored if key_fn(s) is None]
    if unkeyed:
        user_message(
            f"{len(unkeyed)} sentences have no {group_by} and are skipped: "
            f"{', '.join(sorted(set(unkeyed))[:10])}"
            + (" ..." if len(set(unkeyed)) > 10 else ""),
            fg="yellow",
        )

    groups = group_mean_ci(scored, key_fn, n_boot=config.n_boot, seed=config.seed)
    if not groups:
        _fail(f"no sentences have a {group_by}")
    write_csv(config.output_dir / f"groups_{group_by}.csv", GROUP_HEADER, _group_rows(groups))

    for g in groups:
        user_message(
            f"{style(g.group_key, bold=True)}: {g.mean_a:.4f} "
            f"[{g.ci_low:.4f}, {g.ci_high:.4f}] n={g.n}"
        )

    if group_by == "year":
        try:
            trend = temporal_trend(scored, key_fn)
        except DegenerateInput as e:
            user_message(f"no trend: {e}", fg="yellow")
        else:
            write_json(config.output_dir / "trend.json", trend.to_dict())
            if trend.degenerate:
                user_message(
                    f"only {len(trend.keys)} years: the trend is a direction, not a test",
                    fg="yellow",
                )
            user_message(f"trend over years: r={trend.spearman_r:.3f} p={trend.p_value}")


# --- verbs -----------------------------------------------------------------


@cli.command()
@scored_option
@click.option("--prior-band", type=float, help="|A| below this forms the prior (default: 0.5)")
@click.option("--prior-scale", type=float, help="Multiplier on prior counts (default: 1.0)")
@click.option(
    "--lexicon",
    "verb_lexicon",
    help="Restrict the comparison to a verb lexicon (e.g. cognitive_verbs)",
)
@output_dir_option
@click.pass_context
def verbs(ctx, scored_path, prior_band, prior_scale, verb_lexicon, output_dir):
    """
    Verbs that separate high-scoring from low-scoring sentences.

    Writes verbs.csv (every verb, by z-score) and verbs_significant.csv
    (|z| > 1.96).
    """
    config = _config(
        ctx, prior_band=prior_band, prior_scale=prior_scale, output_dir=output_dir
    )
    scored = _load_scored(config, scored_path)
    with _exit_on_input_errors():
        restrict = load_lexicon(verb_lexicon).folded if verb_lexicon else None
        results = verb_log_odds(
            scored,
            hi=config.hi,
            lo=config.lo,
            prior_band=config.prior_band,
            smoothing=config.smoothing,
            prior_scale=config.prior_scale,
            verbs=restrict,
        )
    notable = significant(results)
    write_csv(config.output_dir / "verbs.csv", VERB_HEADER, (r.to_row() for r in results))
    write_csv(
        config.output_dir / "verbs_significant.csv", VERB_HEADER, (r.to_row() for r in notable)
    )
    user_message(f"{len(results)} verbs, {len(notable)} significant")
    for r in notable:
        user_message(f"  {r.word}: z={r.z:.2f}", fg="green" if r.z > 0 else "blue")


# --- ablate ----------------------------------------------------------------


@dataclass(frozen=True)
class Ablation:
    kind: str
    argument: str | None = None

    @property
    def name(self) -> str:
        return f"{self.kind}_{self.argument}" if self.argument else self.kind


class AblationParam(click.ParamType):
    """
    One of `pronoun:<word>`, `reporting_verbs` or `top_verbs:<k>`.
    """

    name = "ablation"

    @override
    def convert(self, value, param, ctx):
        if isinstance(value, Ablation):
            return value
        kind, _, argument = value.partition(":")
        if kind == "pronoun" and argument:
            return Ablation(kind, argument)
        if kind == "reporting_verbs" and not argument:
            return Ablation(kind)
        if kind == "top_verbs":
            try:
                if int(argument) < 1:
                    raise ValueError
            except ValueError:
                self.fail(f"top_verbs needs a positive count, got {argument!r}")
            return Ablation(kind, argument)
        self.fail(
            f"{value!r} is not one of pronoun:<word>, reporting_verbs, top_verbs:<k>"
        )


@cli.command()
@click.option("--ablation", type=AblationParam(), required=True, help=AblationParam.__doc__)
@click.option(
    "--group-by",
    type=click.Choice(GROUP_BY_CHOICES),
    default="entity",
    show_default=True,
    help="Grouping for the side-by-side comparison",
)
@corpus_option
@scored_option
@click.option(
    "--inventory",
    "inventory_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="The pronoun inventory used for scoring (default: the bundled lists)",
)
@click.option(
    "--cache-path",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Cache written by `anthroscan score` (default: <output-dir>/distributions.cache)",
)
@click.option("--model-id", help="Model the scores came from (default: roberta-base)")
@click.option("--seed", type=int)
@output_dir_option
@click.pass_context
def ablate(
    ctx,
    ablation: Ablation,
    group_by,
    corpus_path,
    scored_path,
    inventory_path,
    cache_path,
    model_id,
    seed,
    output_dir,
):
    """
    Check how much the scores depend on one pronoun or on a few verbs.

    Writes ablation_<name>.csv (original and modified means per group) and
    ablation_<name>.json (overall means and rank correlations).
    """
    config = _config(
        ctx,
        corpus_path=corpus_path,
        inventory_path=inventory_path,
        cache_path=cache_path,
        seed=seed,
        output_dir=output_dir,
        **{"backend.model_id": model_id},
    )
    scored = _load_scored(config, scored_path)
    key_fn = group_key_function(group_by, _documents_by_id(config, group_by))

    report: dict[str, Any] = {"ablation": ablation.name, "sentences": len(scored)}
    with _exit_on_input_errors():
        if ablation.kind == "pronoun":
            modified = _ablate_pronoun(config, scored, ablation.argument, report)
        elif ablation.kind == "reporting_verbs":
            reporting = load_lexicon("reporting_verbs").keywords
            modified = filter_by_verbs(scored, reporting, VerbFilterMode.DROP_SENTENCES)
        else:
            results = verb_log_odds(
                scored,
                hi=config.hi,
                lo=config.lo,
                prior_band=config.prior_band,
                smoothing=config.smoothing,
                prior_scale=config.prior_scale,
            )
            k = int(ablation.argument)
            dropped = top_verbs(results, k, Band.HIGH) + top_verbs(results, k, Band.LOW)
            report["dropped_verbs"] = dropped
            modified = filter_by_verbs(scored, dropped, VerbFilterMode.DROP_VERBS)

    if not modified:
        _fail(f"{ablation.name}: no sentences are left")

    original_groups = group_mean_ci(scored, key_fn, n_boot=config.n_boot, seed=config.seed)
    modified_groups = group_mean_ci(modified, key_fn, n_boot=config.n_boot, seed=config.seed)
    rows = compare_groups(original_groups, modified_groups)

    report.update(
        modified_sentences=len(modified),
        mean_a=mean_anthroscore(scored),
        modified_mean_a=mean_anthroscore(modified),
        group_spearman_r=_group_correlation(rows),
    )
    name = ablation.name
    write_csv(
        config.output_dir / f"ablation_{name}.csv",
        ("group", "n", "mean_a", "modified_n", "modified_mean_a", "difference"),
        rows,
    )
    write_json(config.output_dir / f"ablation_{name}.json", report)

    user_message(
        f"{ablation.name}: mean {report['mean_a']:.4f} -> {report['modified_mean_a']:.4f} "
        f"({len(modified)} of {len(scored)} sentences)"
    )
    if report.get("spearman_r") is not None:
        user_message(f"rank correlation with the original scores: {report['spearman_r']:.4f}")


def _ablate_pronoun(
    config: RunConfig, scored: Sequence[ScoredSentence], pronoun: str, report: dict
) -> list[ScoredSentence]:
    inventory = load_inventory(config.inventory_path)
    descriptor = BackendDescriptor(
        kind=BackendKind.CACHED,
        model_id=config.backend.model_id,
        mask_token=config.backend.mask_token,
    )
    cache_path = config.cache_path or config.output_dir / "distributions.cache"
    if not cache_path.exists():
        _fail(
            f"no distribution cache at {cache_path}: rerun `anthroscan score` "
            f"with --cache to keep the distributions"
        )
    with open_backend(descriptor, cache_path) as backend:
        try:
            result = ablate_pronoun(scored, inventory, pronoun, backend)
        except CacheMiss as e:
            _fail(f"{e}: rerun `anthroscan score` with --cache to fill the cache")
    report.update(
        removed=pronoun,
        inventory=result.inventory.to_dict(),
        spearman_r=result.spearman_r,
        p_value=result.p_value,
    )
    return list(result.modified)


def _group_correlation(rows: Sequence[dict]) -> float | None:
    pairs = [
        (r["mean_a"], r["modified_mean_a"]) for r in rows if r["modified_mean_a"] is not None
    ]
    if len(pairs) < 3:
        return None
    try:
        return spearman([a for a, _ in pairs], [b for _, b in pairs]).r
    except DegenerateInput:
        return None


# --- freq-report -----------------------------------------------------------


@cli.command("freq-report")
@corpus_option
@parses_option
@click.option("--top-k", type=int, default=100, show_default=True)
@output_dir_option
@click.pass_context
def freq_report(ctx, corpus_path, parses_path, top_k, output_dir):
    """
    The most common subject and object heads in a corpus, as a starting point
    for building an entity lexicon.

    Writes entity_frequency.csv.
    """
    config = _config(
        ctx, corpus_path=corpus_path, parses_path=parses_path, output_dir=output_dir
    )
    if config.corpus_path is None:
        _fail("corpus_path: no corpus given (use --corpus or set corpus_path)")
    with _exit_on_input_errors():
        documents = read_corpus(config.corpus_path)
        parses = load_parses(config.parses_path) if config.parses_path else None
        ranked = entity_frequency_report(
            documents,
            top_k,
            AnalysisSource.CONLLU if parses is not None else AnalysisSource.BUILTIN_RULES,
            parses,
        )
    write_csv(
        config.output_dir / "entity_frequency.csv",
        ("rank", "head", "count"),
        ((i, head, count) for i, (head, count) in enumerate(ranked, start=1)),
    )
    user_message(f"{len(ranked)} entity heads from {len(documents)} documents")


cli.add_command(run.cli, "serve-stub")


if __name__ == "__main__":
    cli()
