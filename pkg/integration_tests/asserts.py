import csv
from collections.abc import Iterable
from pathlib import Path
from pprint import pformat
from textwrap import indent

import orjson
from deepdiff import DeepDiff

from anthroscan.scoring import ScoredSentence


def read_json(path: Path) -> dict:
    return orjson.loads(Path(path).read_bytes())


def read_jsonl(path: Path) -> list[dict]:
    with Path(path).open("rb") as f:
        return [orjson.loads(line) for line in f if line.strip()]


def read_csv(path: Path) -> list[dict[str, str]]:
    with Path(path).open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def read_scored(path: Path) -> list[ScoredSentence]:
    return [ScoredSentence.from_dict(doc) for doc in read_jsonl(path)]


def assert_same_output_files(dir_a: Path, dir_b: Path, names: Iterable[str]) -> None:
    """The named result files are byte-identical in both directories."""
    for name in names:
        a = (Path(dir_a) / name).read_bytes()
        b = (Path(dir_b) / name).read_bytes()
        assert a == b, f"{name} differs between {dir_a} and {dir_b}"


def format_doc_diffs(left: dict, right: dict) -> Iterable[str]:
    """
    Get a human-readable list of differences in the given documents.

    Returns a list of lines to print.
    """
    doc_diffs = DeepDiff(left, right, significant_digits=6)
    out = []
    if doc_diffs:
        out.append("Documents differ:")
    else:
        out.append("Doc differs in minor float precision:")
        doc_diffs = DeepDiff(left, right)

    out.append(indent(pformat(doc_diffs), " " * 4))

    # If pytest verbose:
    out.extend(("Full output document: ", repr(left)))
    return out
