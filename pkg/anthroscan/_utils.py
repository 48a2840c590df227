"""
Common file and serialisation helpers.
"""

import contextlib
import csv
import hashlib
import io
import os
import tempfile
from collections.abc import Iterable, Iterator, Mapping, Sequence
from pathlib import Path
from typing import Any

import structlog
from orjson import orjson

from anthroscan.logs import lenient_json_fallback

_LOG = structlog.get_logger()


def dumps(doc: Any) -> bytes:
    """
    Stable json encoding: sorted keys, no whitespace.

    >>> dumps({'b': 1, 'a': [0.5, None]})
    b'{"a":[0.5,null],"b":1}'
    """
    return orjson.dumps(doc, option=orjson.OPT_SORT_KEYS, default=lenient_json_fallback)


def sha256_hex(doc: Any) -> str:
    """
    >>> sha256_hex({'a': 1}) == sha256_hex({'a': 1})
    True
    >>> len(sha256_hex([]))
    64
    """
    return hashlib.sha256(dumps(doc)).hexdigest()


@contextlib.contextmanager
def atomic_write(path: Path, mode: str = "wb") -> Iterator[io.IOBase]:
    """
    Write to a temporary sibling of `path`, then rename it into place.

    Readers see either the old file or the complete new one, never a half-written
    file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, mode, **({} if "b" in mode else {"newline": ""})) as f:
            yield f
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp_name)
        raise


def write_jsonl(path: Path, records: Iterable[Any]) -> int:
    count = 0
    with atomic_write(path) as f:
        for record in records:
            f.write(dumps(record))
            f.write(b"\n")
            count += 1
    _LOG.debug("file.written", path=path, records=count)
    return count


def write_json(path: Path, doc: Any) -> None:
    with atomic_write(path) as f:
        f.write(
            orjson.dumps(
                doc,
                option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2,
                default=lenient_json_fallback,
            )
        )
        f.write(b"\n")


def read_jsonl(path: Path) -> Iterator[tuple[int, Any]]:
    """Yield (line_number, document) pairs, skipping blank lines."""
    with Path(path).open("rb") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            yield line_number, orjson.loads(line)


def write_csv(
    path: Path, header: Sequence[str], rows: Iterable[Sequence[Any] | Mapping]
) -> None:
    with atomic_write(path, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if isinstance(row, Mapping):
                row = [row.get(h) for h in header]
            writer.writerow([format_cell(v) for v in row])


def format_cell(value: Any) -> str:
    """
    Render a value for a csv cell. Floats use repr(), so they survive a
    round trip unchanged.

    >>> format_cell(None)
    ''
    >>> format_cell(0.1)
    '0.1'
    >>> format_cell(('he', 'she'))
    'he;she'
    """
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list, frozenset, set)):
        return ";".join(str(v) for v in value)
    return str(value)


def chunked(items: Sequence, size: int) -> Iterator[Sequence]:
    """
    >>> [list(c) for c in chunked([1, 2, 3, 4, 5], 2)]
    [[1, 2], [3, 4], [5]]
    """
    if size < 1:
        raise ValueError(f"Chunk size must be positive, got {size}")
    for i in range(0, len(items), size):
        yield items[i : i + size]
