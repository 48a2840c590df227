from contextlib import contextmanager
from pathlib import Path
from textwrap import indent

import pytest
import structlog
from click.testing import CliRunner
from flask.testing import FlaskClient
from structlog import DropEvent

from anthroscan import _server, logs
from anthroscan.backend import StubBackend, StubMode
from anthroscan.testutils.corpus import SyntheticCorpus

from .asserts import format_doc_diffs


@pytest.fixture()
def clirunner(pytestconfig):
    def _run_cli(cli_method, opts, catch_exceptions=False, expect_success=True):
        runner = CliRunner()
        result = runner.invoke(cli_method, opts, catch_exceptions=catch_exceptions)
        # The command pointed logging at the runner's stderr, which is now closed.
        logs.init_logging(
            verbosity=pytestconfig.getoption("verbose"), cache_logger_on_first_use=False
        )
        if expect_success:
            assert 0 == result.exit_code, (
                f"Error for {opts}. Out:\n{indent(result.output, ' ' * 4)}"
            )
        return result

    return _run_cli


@pytest.fixture()
def run_score(clirunner, synthetic_files, tmp_path):
    """Score the synthetic corpus into a fresh output directory."""
    from anthroscan.cli import cli

    corpus_path, table_path = synthetic_files

    def do(*args, output_dir: Path | None = None, expect_success=True, workers=1):
        output_dir = output_dir or tmp_path / "out"
        opts = (
            "score",
            "--corpus", str(corpus_path),
            "--backend", "stub",
            "--stub-mode", "per_text",
            "--stub-table", str(table_path),
            "-j", str(workers),
            "--output-dir", str(output_dir),
            *args,
        )  # fmt: skip
        clirunner(cli, opts, expect_success=expect_success)
        return output_dir

    return do


@pytest.fixture()
def stub_client() -> FlaskClient:
    app = _server.create_app(StubBackend(StubMode.UNIFORM, model_id="stub-test"))
    app.config["TESTING"] = True
    return app.test_client()


@pytest.fixture()
def synthetic_client(synthetic: SyntheticCorpus) -> FlaskClient:
    app = _server.create_app(StubBackend(StubMode.PER_TEXT, per_text=synthetic.distributions))
    app.config["TESTING"] = True
    return app.test_client()


@contextmanager
def disable_logging():
    """
    Turn off logging within the if-block

    Used for repetitive environment setup that makes test errors too verbose.
    """
    original_processors = structlog.get_config()["processors"]

    def swallow_log(_logger, _log_method, _event_dict):
        raise DropEvent

    structlog.configure(processors=[swallow_log])
    try:
        yield
    finally:
        structlog.configure(processors=original_processors)


def pytest_assertrepr_compare(op, left, right):
    """
    Custom pytest error messages for large documents.

    The default pytest dict==dict error messages are unreadable for
    nested document-like dicts. (Such as our summary and result docs!)

    We just want to know which fields differ.
    """

    def is_a_doc(o: object):
        """
        Is it a dict that's not printable on one line?
        """
        return isinstance(o, dict) and len(repr(o)) > 79

    if (is_a_doc(left) or is_a_doc(right)) and op == "==":
        return format_doc_diffs(left, right)
