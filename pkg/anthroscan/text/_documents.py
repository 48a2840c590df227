from __future__ import annotations

import datetime
import re
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import structlog
from dateutil.parser import isoparse
from orjson import orjson

from anthroscan._utils import read_jsonl
from anthroscan.errors import CorpusFormatError

_LOG = structlog.get_logger()

# A time, if any, may follow the date.
_FULL_DATE = re.compile(r"\d{4}-\d{2}-\d{2}(?:[T ].*)?")


class Source(Enum):
    PAPERS = "papers"
    NEWS = "news"
    OTHER = "other"


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str
    title: str | None = None
    date: datetime.date | None = None
    categories: tuple[str, ...] = ()
    source: Source = Source.OTHER
    language: str | None = None
    # Anything else in the input row, kept for grouping.
    extra: Mapping[str, Any] = field(default_factory=dict, compare=False)

    @property
    def year(self) -> int | None:
        return self.date.year if self.date else None

    def to_dict(self) -> dict[str, Any]:
        doc = {
            "doc_id": self.doc_id,
            "text": self.text,
            "title": self.title,
            "date": self.date.isoformat() if self.date else None,
            "categories": list(self.categories),
            "source": self.source.value,
        }
        if self.language is not None:
            doc["language"] = self.language
        return {**self.extra, **doc}

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> Document:
        """
        Build a document from one corpus row, raising ValueError for bad fields.

        >>> d = Document.from_dict({'doc_id': 'a1', 'text': 'Hi.', 'date': '2021-03-04',
        ...                         'source': 'news'})
        >>> d.year, d.source
        (2021, <Source.NEWS: 'news'>)
        """
        if not isinstance(doc, Mapping):
            raise ValueError("each line must be a JSON object")
        doc_id = doc.get("doc_id")
        if not isinstance(doc_id, str) or not doc_id:
            raise ValueError("doc_id: must be a non-empty string")
        text = doc.get("text")
        if not isinstance(text, str) or not text.strip():
            raise ValueError("text: must be a non-empty string")

        title = doc.get("title")
        if title is not None and not isinstance(title, str):
            raise ValueError("title: must be a string")

        categories = doc.get("categories") or []
        if not isinstance(categories, list) or not all(isinstance(c, str) for c in categories):
            raise ValueError("categories: must be a list of strings")

        try:
            source = Source(doc.get("source", "other"))
        except ValueError:
            raise ValueError(
                f"source: expected one of {', '.join(s.value for s in Source)}"
            ) from None

        known = {"doc_id", "text", "title", "date", "categories", "source", "language"}
        return cls(
            doc_id=doc_id,
            text=text,
            title=title,
            date=parse_date(doc.get("date")),
            categories=tuple(categories),
            source=source,
            language=doc.get("language"),
            extra={k: v for k, v in doc.items() if k not in known},
        )


def parse_date(value: str | None) -> datetime.date | None:
    """
    A calendar date from YYYY-MM-DD, optionally followed by a time.

    Year-only and year-month values are refused.

    >>> parse_date('2023-02-28')
    datetime.date(2023, 2, 28)
    >>> parse_date('2023-02-28T09:30:00Z')
    datetime.date(2023, 2, 28)
    >>> parse_date('2023-02-30')
    Traceback (most recent call last):
    ...
    ValueError: date: '2023-02-30' is not a valid calendar date
    >>> parse_date('2023-02')
    Traceback (most recent call last):
    ...
    ValueError: date: '2023-02' is not a full YYYY-MM-DD date
    """
    if value is None:
        return None
    if not isinstance(value, str):
        raise ValueError(f"date: expected an ISO-8601 string, got {value!r}")
    if not _FULL_DATE.fullmatch(value):
        raise ValueError(f"date: {value!r} is not a full YYYY-MM-DD date")
    try:
        return isoparse(value).date()
    except ValueError:
        raise ValueError(f"date: {value!r} is not a valid calendar date") from None


def read_corpus(path: Path) -> list[Document]:
    """
    Read a JSONL corpus, one document per line.

    Documents tagged with a language other than English are skipped.
    """
    return list(iter_corpus(path))


def iter_corpus(path: Path) -> Iterator[Document]:
    path = Path(path)
    seen: set[str] = set()
    skipped = 0
    try:
        for line_number, row in read_jsonl(path):
            try:
                document = Document.from_dict(row)
            except ValueError as e:
                raise CorpusFormatError(path, line_number, str(e)) from e
            if document.doc_id in seen:
                raise CorpusFormatError(
                    path, line_number, f"doc_id: duplicate {document.doc_id!r}"
                )
            seen.add(document.doc_id)

            if document.language and document.language.lower() not in ("en", "eng", "english"):
                skipped += 1
                _LOG.warning(
                    "corpus.document.skipped",
                    doc_id=document.doc_id,
                    language=document.language,
                )
                continue
            yield document
    except orjson.JSONDecodeError as e:
        raise CorpusFormatError(path, _line_of(e, path), f"invalid JSON: {e}") from e

    _LOG.info("corpus.read", path=path, documents=len(seen) - skipped, skipped=skipped)


def _line_of(error: orjson.JSONDecodeError, path: Path) -> int:
    # read_jsonl decodes line by line, so count lines up to the failure.
    with path.open("rb") as f:
        for line_number, line in enumerate(f, start=1):
            try:
                if line.strip():
                    orjson.loads(line)
            except orjson.JSONDecodeError:
                return line_number
    return 0
