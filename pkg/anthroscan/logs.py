"""
Structured event logs for scoring runs.

Events go to stderr (or an event log file) so that stdout and the output
directory hold results only. Each event carries the subcommand and run id
bound with :func:`bind_run`.
"""

import datetime
import enum
import io
import pathlib
import sys
import uuid
from functools import partial

import numpy as np
import structlog
from orjson import orjson
from structlog.types import EventDict, WrappedLogger
from typing_extensions import override


class LogFormat(enum.Enum):
    AUTO = "auto"
    JSON = "json"
    CONSOLE = "console"


# -v count to the levels that are dropped.
_HIDDEN_LEVELS = {
    0: ("info", "debug"),
    1: ("debug",),
}


def init_logging(
    output_file: io.BufferedIOBase | None = None,
    verbosity: int = 0,
    cache_logger_on_first_use: bool = True,
    log_format: LogFormat = LogFormat.AUTO,
) -> None:
    """
    Configure structlog.

    With AUTO, a terminal gets coloured console lines and anything else
    (a pipe, a file) gets jsonl.
    """
    if output_file is None:
        output_file = sys.stderr.buffer

    if log_format is LogFormat.AUTO:
        write_as_json = not _is_terminal(output_file)
    else:
        write_as_json = log_format is LogFormat.JSON

    # functools.partial won't do: JSONRenderer passes its own 'default' argument.
    def lenient_json_dump(obj, *args, **kwargs):
        return orjson.dumps(
            obj,
            option=orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY,
            default=lenient_json_fallback,
        )

    processors = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="ISO"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        (
            structlog.processors.JSONRenderer(serializer=lenient_json_dump)
            if write_as_json
            else BytesConsoleRenderer()
        ),
    ]
    hide_levels = _HIDDEN_LEVELS.get(verbosity, ())
    if hide_levels:
        processors.insert(0, partial(_filter_levels, hide_levels=hide_levels))

    structlog.configure(
        processors=processors,
        context_class=dict,
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=cache_logger_on_first_use,
        logger_factory=structlog.BytesLoggerFactory(file=output_file),
    )


def bind_run(command: str | None, run_id: str | None = None) -> str:
    """Tag every later event in this context with the command and a run id."""
    run_id = run_id or uuid.uuid4().hex[:12]
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(command=command, run_id=run_id)
    return run_id


def _is_terminal(f) -> bool:
    try:
        return f.isatty()
    except (AttributeError, ValueError):
        return False


class BytesConsoleRenderer(structlog.dev.ConsoleRenderer):
    """
    Console lines as bytes (to match the orjson renderer), with scores and
    paths shown briefly.
    """

    @override
    def _repr(self, val):
        if isinstance(val, (datetime.datetime, datetime.date)):
            return val.isoformat()
        if isinstance(val, pathlib.PurePath):
            return val.as_posix()
        if isinstance(val, (float, np.floating)):
            return f"{float(val):.4g}"
        if isinstance(val, (set, frozenset)):
            return ",".join(sorted(map(str, val)))
        return super()._repr(val)

    @override
    def __call__(
        self, logger: WrappedLogger, name: str, event_dict: EventDict
    ) -> bytes:
        return super().__call__(logger, name, event_dict).encode("utf-8")


def _filter_levels(logger, log_method, event_dict, hide_levels=("debug", "info")):
    if log_method in hide_levels:
        raise structlog.DropEvent
    return event_dict


def lenient_json_fallback(obj):
    """
    Never fails, so an event is never lost to serialisation.

    >>> lenient_json_fallback(pathlib.PurePosixPath('/tmp/scored.jsonl'))
    '/tmp/scored.jsonl'
    >>> lenient_json_fallback(frozenset({'she', 'he'}))
    ['he', 'she']
    >>> lenient_json_fallback(np.float32(0.5))
    0.5
    >>> lenient_json_fallback(LogFormat.JSON)
    'json'
    """
    if isinstance(obj, (datetime.datetime, datetime.date)):
        return obj.isoformat()
    if isinstance(obj, (pathlib.PurePath, uuid.UUID)):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, enum.Enum):
        return obj.value
    try:
        return obj.to_dict()
    except AttributeError:
        return repr(obj)
