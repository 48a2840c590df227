"""
End-to-end runs of the command line on the synthetic corpus.
"""

import math

import pytest

from anthroscan import cli as cli_module
from anthroscan.analytics import in_band
from anthroscan.backend import StubBackend, StubMode
from anthroscan.cli import cli
from anthroscan.errors import BackendUnreachable, MaskTokenizationError
from anthroscan.scoring import mean_anthroscore

from .asserts import assert_same_output_files, read_csv, read_json, read_jsonl, read_scored
from .conftest import disable_logging


@pytest.fixture()
def scored_dir(run_score):
    return run_score()


def test_score_writes_every_result(scored_dir, synthetic):
    summary = read_json(scored_dir / "summary.json")
    assert summary["documents"] == 200
    assert summary["masked_sentences"] == 800
    assert summary["counts"] == {"scored": 800, "skipped": 0, "failed": 0}
    assert summary["lexicons"] == ["artifact"]
    assert summary["analysis_source"] == "builtin_rules"
    assert summary["model_id"] == "roberta-base"
    assert summary["inventory"]["non_human"] == ["it", "its", "It", "Its"]

    assert len(read_jsonl(scored_dir / "masked.jsonl")) == 800
    assert read_jsonl(scored_dir / "errors.jsonl") == []
    assert (scored_dir / "distributions.cache").exists()

    scored = read_scored(scored_dir / "scored.jsonl")
    for s in scored:
        assert s.score_a == pytest.approx(synthetic.targets[s.sentence.masked_sentence], abs=1e-6)
    assert summary["mean_a"] == pytest.approx(mean_anthroscore(scored), abs=1e-12)

    extremes = summary["extremes"]
    assert extremes["high"] + extremes["low"] + extremes["middle"] == 800
    assert extremes["middle"] == sum(1 for b in synthetic.bands.values() if b == "mid")


def test_worker_count_does_not_change_results(run_score, tmp_path):
    one = run_score(output_dir=tmp_path / "one")
    with disable_logging():
        many = run_score(output_dir=tmp_path / "many", workers=8)
    assert_same_output_files(one, many, ["masked.jsonl", "scored.jsonl", "summary.json"])


def test_rerun_reads_the_cache(scored_dir, run_score, tmp_path):
    cache_size = (scored_dir / "distributions.cache").stat().st_size
    again = run_score(
        "--cache-path", str(scored_dir / "distributions.cache"), output_dir=tmp_path / "again"
    )
    assert (scored_dir / "distributions.cache").stat().st_size == cache_size
    assert_same_output_files(scored_dir, again, ["scored.jsonl"])


def test_version(clirunner):
    result = clirunner(cli, ["--version"])
    assert "anthroscan" in result.output
    assert "version" in result.output


def test_event_log_file_is_jsonl(clirunner, synthetic_files, tmp_path):
    corpus_path, table_path = synthetic_files
    log_file = tmp_path / "events.jsonl"
    # fmt: off
    clirunner(cli, [
        "-v", "-l", str(log_file),
        "score",
        "--corpus", str(corpus_path),
        "--backend", "stub", "--stub-mode", "per_text", "--stub-table", str(table_path),
        "-o", str(tmp_path / "out"),
    ])
    # fmt: on
    events = read_jsonl(log_file)
    [completed] = [e for e in events if e["event"] == "score.completed"]
    assert completed["was_scored"] == 800
    assert completed["level"] == "info"
    assert {e["command"] for e in events} == {"score"}
    assert len({e["run_id"] for e in events}) == 1


def test_bad_settings_exit_with_one(clirunner, synthetic_files, tmp_path):
    corpus_path, _ = synthetic_files
    config = tmp_path / "bad.toml"
    config.write_text("seed = -4\n")

    result = clirunner(
        cli, ["-c", str(config), "score", "--corpus", str(corpus_path)], expect_success=False
    )
    assert result.exit_code == 1
    assert "ConfigError" in result.output

    result = clirunner(cli, ["score", "-o", str(tmp_path)], expect_success=False)
    assert result.exit_code == 1
    assert "no corpus" in result.output


def test_unreadable_corpus_exits_with_one(clirunner, tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text('{"doc_id": "a", "text": "One."}\n{"doc_id": "a", "text": "Two."}\n')
    result = clirunner(
        cli, ["score", "--corpus", str(corpus), "-o", str(tmp_path / "out")], expect_success=False
    )
    assert result.exit_code == 1
    assert "CorpusFormatError" in result.output


class FlakyBackend(StubBackend):
    """Fails on sentences about fooling, and can't place the mask on guiding ones."""

    def fill_mask_pronouns(self, masked_sentence, inventory):
        if " fool" in masked_sentence:
            raise BackendUnreachable("service went away")
        if " guide" in masked_sentence:
            raise MaskTokenizationError("mask split in two")
        return super().fill_mask_pronouns(masked_sentence, inventory)


def test_backend_failures_exit_with_two(clirunner, synthetic_files, tmp_path, monkeypatch):
    monkeypatch.setattr(
        cli_module, "open_backend", lambda descriptor, cache_path: FlakyBackend(StubMode.HASHED)
    )
    corpus_path, _ = synthetic_files
    out = tmp_path / "out"
    result = clirunner(
        cli, ["score", "--corpus", str(corpus_path), "-o", str(out)], expect_success=False
    )
    assert result.exit_code == 2

    masked = [m["masked_sentence"] for m in read_jsonl(out / "masked.jsonl")]
    failed = sum(1 for m in masked if " fool" in m)
    skipped = sum(1 for m in masked if " guide" in m)
    assert failed and skipped

    summary = read_json(out / "summary.json")
    assert summary["counts"] == {
        "scored": len(masked) - failed - skipped,
        "skipped": skipped,
        "failed": failed,
    }
    errors = read_jsonl(out / "errors.jsonl")
    assert len(errors) == failed + skipped
    assert {e["error"] for e in errors if e["result"] == "failed"} == {"BackendUnreachable"}
    assert {e["result"] for e in errors if e["error"] == "MaskTokenizationError"} == {"skipped"}


class BatchCountingBackend(StubBackend):
    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.batch_sizes = []

    def fill_mask_many(self, masked_sentences, inventory):
        self.batch_sizes.append(len(masked_sentences))
        return super().fill_mask_many(masked_sentences, inventory)


@pytest.mark.parametrize(("batch_size", "batches"), [(32, 25), (100, 8)])
def test_score_asks_the_backend_in_batches(
    clirunner, synthetic_files, tmp_path, monkeypatch, batch_size, batches
):
    backend = BatchCountingBackend(StubMode.HASHED)
    monkeypatch.setattr(cli_module, "open_backend", lambda descriptor, cache_path: backend)
    config = tmp_path / "anthroscan.toml"
    config.write_text(f"[backend]\nbatch_size = {batch_size}\n")
    corpus_path, _ = synthetic_files

    clirunner(
        cli,
        ["-c", str(config), "score", "--corpus", str(corpus_path), "-o", str(tmp_path / "out")],
    )
    assert len(backend.batch_sizes) == batches
    assert sum(backend.batch_sizes) == 800
    assert max(backend.batch_sizes) == batch_size


def test_example_sentences_score_in_their_bands(
    clirunner, example_files, example_documents, tmp_path
):
    corpus_path, table_path = example_files
    # fmt: off
    clirunner(cli, [
        "score",
        "--corpus", str(corpus_path),
        "--backend", "stub", "--stub-mode", "per_text", "--stub-table", str(table_path),
        "-o", str(tmp_path),
    ])
    # fmt: on
    expected = {d.doc_id: (d.extra["entity"], d.extra["expected_band"]) for d in example_documents}
    scored = [
        s
        for s in read_scored(tmp_path / "scored.jsonl")
        if s.sentence.entity_surface == expected[s.doc_id][0]
    ]
    assert sorted(s.doc_id for s in scored) == sorted(expected)
    for s in scored:
        assert in_band(s.score_a, expected[s.doc_id][1]), (s.doc_id, s.score_a)


def test_analyze_by_source(clirunner, scored_dir, synthetic_files):
    corpus_path, _ = synthetic_files
    clirunner(
        cli,
        ["analyze", "--group-by", "source", "--corpus", str(corpus_path), "-o", str(scored_dir)],
    )
    rows = {r["group"]: r for r in read_csv(scored_dir / "groups_source.csv")}
    assert set(rows) == {"news", "papers"}
    assert int(rows["news"]["n"]) + int(rows["papers"]["n"]) == 800
    assert float(rows["news"]["mean_a"]) > float(rows["papers"]["mean_a"])
    for r in rows.values():
        assert float(r["ci_low"]) <= float(r["mean_a"]) <= float(r["ci_high"])


def test_analyze_is_reproducible(clirunner, scored_dir, tmp_path):
    for name in ("a", "b"):
        clirunner(
            cli,
            [
                "analyze", "--group-by", "entity", "--seed", "5", "--n-boot", "200",
                "--scored", str(scored_dir / "scored.jsonl"), "-o", str(tmp_path / name),
            ],
        )  # fmt: skip
    assert_same_output_files(tmp_path / "a", tmp_path / "b", ["groups_entity.csv"])


def test_analyze_by_year_writes_a_trend(clirunner, scored_dir, synthetic_files):
    corpus_path, _ = synthetic_files
    clirunner(
        cli, ["analyze", "--group-by", "year", "--corpus", str(corpus_path), "-o", str(scored_dir)]
    )
    trend = read_json(scored_dir / "trend.json")
    assert trend["keys"] == list(range(2016, 2023))
    assert -1.0 <= trend["spearman_r"] <= 1.0
    assert not trend["degenerate"]


def test_grouping_by_metadata_needs_the_corpus(clirunner, scored_dir):
    result = clirunner(
        cli, ["analyze", "--group-by", "year", "-o", str(scored_dir)], expect_success=False
    )
    assert result.exit_code == 2
    assert "--corpus" in result.output


def test_verbs(clirunner, scored_dir):
    clirunner(cli, ["verbs", "-o", str(scored_dir)])
    z = {r["word"]: float(r["z"]) for r in read_csv(scored_dir / "verbs.csv")}
    assert z["learn"] > 1.96
    assert z["propose"] < -1.96

    notable = read_csv(scored_dir / "verbs_significant.csv")
    assert {r["word"] for r in notable} >= {"learn", "propose"}
    assert all(abs(float(r["z"])) > 1.96 for r in notable)


def test_verbs_within_a_lexicon(clirunner, scored_dir, tmp_path):
    verb_list = tmp_path / "some_verbs.txt"
    verb_list.write_text("# A few planted verbs.\nlearn\npropose\nshow\n")
    clirunner(cli, ["verbs", "--lexicon", str(verb_list), "-o", str(scored_dir)])
    # "show" only occurs in the prior band.
    words = {r["word"] for r in read_csv(scored_dir / "verbs.csv")}
    assert words == {"learn", "propose"}

    # A single compared verb gives no log-odds.
    result = clirunner(
        cli, ["verbs", "--lexicon", "cognitive_verbs", "-o", str(scored_dir)], expect_success=False
    )
    assert result.exit_code == 1


def test_pronoun_ablation(clirunner, scored_dir):
    clirunner(cli, ["ablate", "--ablation", "pronoun:him", "-o", str(scored_dir)])
    report = read_json(scored_dir / "ablation_pronoun_him.json")
    assert report["removed"] == "him"
    assert report["modified_sentences"] == report["sentences"] == 800
    assert "him" not in report["inventory"]["human"]
    # Each set's pronouns share its mass equally, so losing one of seven
    # human pronouns moves every score by the same amount.
    assert report["modified_mean_a"] == pytest.approx(
        report["mean_a"] + math.log(6 / 7), abs=1e-6
    )
    assert report["spearman_r"] > 0.99

    rows = read_csv(scored_dir / "ablation_pronoun_him.csv")
    assert rows
    for r in rows:
        assert float(r["difference"]) == pytest.approx(math.log(6 / 7), abs=1e-6)


def test_pronoun_ablation_needs_the_cache(clirunner, run_score, tmp_path):
    out = run_score("--no-cache", output_dir=tmp_path / "uncached")
    result = clirunner(
        cli, ["ablate", "--ablation", "pronoun:him", "-o", str(out)], expect_success=False
    )
    assert result.exit_code == 1
    assert "no distribution cache" in result.output


def test_verb_ablations(clirunner, scored_dir):
    clirunner(cli, ["ablate", "--ablation", "reporting_verbs", "-o", str(scored_dir)])
    report = read_json(scored_dir / "ablation_reporting_verbs.json")
    assert 0 < report["modified_sentences"] < report["sentences"]

    clirunner(cli, ["ablate", "--ablation", "top_verbs:2", "-o", str(scored_dir)])
    report = read_json(scored_dir / "ablation_top_verbs_2.json")
    assert len(report["dropped_verbs"]) == 4
    assert report["modified_sentences"] < report["sentences"]
    assert (scored_dir / "ablation_top_verbs_2.csv").exists()


@pytest.mark.parametrize("ablation", ["pronoun", "top_verbs:0", "top_verbs:x", "everything"])
def test_bad_ablations_are_usage_errors(clirunner, scored_dir, ablation):
    result = clirunner(
        cli, ["ablate", "--ablation", ablation, "-o", str(scored_dir)], expect_success=False
    )
    assert result.exit_code == 2


def test_freq_report(clirunner, synthetic_files, tmp_path):
    corpus_path, _ = synthetic_files
    clirunner(
        cli,
        ["freq-report", "--corpus", str(corpus_path), "--top-k", "20", "-o", str(tmp_path)],
    )
    rows = read_csv(tmp_path / "entity_frequency.csv")
    assert len(rows) == 20
    assert [int(r["rank"]) for r in rows] == list(range(1, 21))
    counts = [int(r["count"]) for r in rows]
    assert counts == sorted(counts, reverse=True)
    assert {"model", "models"} & {r["head"] for r in rows}
