"""
Serve the stub backend over HTTP, speaking the fill-mask protocol.

Point a remote backend at it to exercise the whole client path without a
model:

    anthroscan serve-stub --port 8080 --stub-mode hashed
    anthroscan score --corpus abstracts.jsonl --endpoint http://localhost:8080
"""

from textwrap import dedent

import click
from werkzeug.serving import run_simple

from anthroscan.backend import DEFAULT_MASK_TOKEN, StubBackend, StubMode


@click.command(help=__doc__)
@click.option("--debug", "debug_mode", is_flag=True, default=False, help="Enable debug mode")
@click.option(
    "--verbose",
    "-v",
    count=True,
    help=dedent(
        """\
        Enable all log messages, instead of just warnings.

        Use twice to enable debug logging too.
        """
    ),
)
@click.option(
    "-l",
    "--event-log-file",
    help="Output jsonl logs to file",
    type=click.Path(writable=True, dir_okay=False),
)
@click.option("-h", "--host", "hostname", default="localhost")
@click.option("-p", "--port", type=int, default=8080)
@click.option(
    "--stub-mode",
    type=click.Choice([m.value for m in StubMode]),
    default=StubMode.UNIFORM.value,
    help="How the stub picks pronoun probabilities (default: uniform)",
)
@click.option(
    "--stub-table",
    type=click.Path(exists=True, dir_okay=False),
    help="JSON table for the `table` and `per_text` modes",
)
@click.option("--model-id", default="stub", help="Model name reported in responses")
@click.option("--mask-token", default=DEFAULT_MASK_TOKEN, show_default=True)
def cli(
    debug_mode: bool,
    verbose: int,
    event_log_file: str | None,
    hostname: str,
    port: int,
    stub_mode: str,
    stub_table: str | None,
    model_id: str,
    mask_token: str,
) -> None:
    from anthroscan._server import create_app
    from anthroscan.logs import bind_run, init_logging

    init_logging(open(event_log_file, "ab") if event_log_file else None, verbosity=verbose)
    bind_run("run")

    backend = StubBackend.from_file(
        stub_mode, stub_table, model_id=model_id, mask_token=mask_token
    )
    app = create_app(backend)
    if debug_mode:
        app.debug = True
    run_simple(hostname, port, app, use_reloader=debug_mode, threaded=True)
