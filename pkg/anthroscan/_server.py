"""
A fill-mask HTTP service backed by a StubBackend, for integration tests and
offline demos of the remote protocol.
"""

from __future__ import annotations

import flask
import orjson
import structlog
from flask import Blueprint, current_app, request

from anthroscan.backend import StubBackend
from anthroscan.scoring import PLACEHOLDER

_LOG = structlog.get_logger()

bp = Blueprint("fill_mask", __name__)


def as_json(o, status: int = 200) -> flask.Response:
    """Serialise an object into a json flask response."""
    return flask.Response(
        orjson.dumps(o, option=orjson.OPT_SORT_KEYS),
        status=status,
        content_type="application/json",
    )


def _error(status: int, error: str, message: str) -> flask.Response:
    _LOG.info("server.request.rejected", status=status, error=error, message=message)
    return as_json({"error": error, "message": message}, status=status)


@bp.route("/fill-mask", methods=["POST"])
def fill_mask():
    backend: StubBackend = current_app.config["ANTHROSCAN_BACKEND"]

    doc = request.get_json(silent=True)
    if not isinstance(doc, dict):
        return _error(400, "bad_request", "body must be a JSON object")
    text = doc.get("text")
    targets = doc.get("targets")
    if not isinstance(text, str) or not text:
        return _error(400, "bad_request", "text: must be a non-empty string")
    if (
        not isinstance(targets, list)
        or not targets
        or not all(isinstance(t, str) and t for t in targets)
    ):
        return _error(400, "bad_request", "targets: must be a non-empty list of strings")

    if text.count(backend.mask_token) != 1:
        return _error(
            422,
            "mask_tokenization",
            f"expected exactly one {backend.mask_token!r} in the text",
        )

    distribution = backend.distribution_for(
        text, targets, lookup_text=text.replace(backend.mask_token, PLACEHOLDER)
    )
    return as_json(
        {
            "model": doc.get("model") or backend.model_id,
            "probabilities": dict(distribution.probabilities),
            "resolved_variants": {
                k: list(v) for k, v in distribution.resolved_variants.items()
            },
        }
    )


@bp.route("/health")
def health():
    backend: StubBackend = current_app.config["ANTHROSCAN_BACKEND"]
    return as_json({"status": "ok", "model": backend.model_id, "mode": backend.mode.value})


def create_app(backend: StubBackend | None = None) -> flask.Flask:
    app = flask.Flask("anthroscan")
    app.config["ANTHROSCAN_BACKEND"] = backend or StubBackend()
    app.register_blueprint(bp)
    return app
