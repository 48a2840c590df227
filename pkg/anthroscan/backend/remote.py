"""
Client for a fill-mask service speaking our JSON protocol:

    POST {endpoint}/fill-mask
    {"model": ..., "text": "... <mask> ...", "targets": [pronouns]}

which answers with `probabilities` and `resolved_variants` per target, or
HTTP 422 `{"error": "mask_tokenization"}` when the mask isn't one token.
"""

from __future__ import annotations

import os
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import requests
import structlog
from typing_extensions import override

from anthroscan._utils import chunked
from anthroscan.errors import (
    BackendUnreachable,
    MaskTokenizationError,
    MissingPronoun,
    VocabularyMiss,
)
from anthroscan.scoring import PronounInventory

from .api import BackendDescriptor, FillMaskBackend, PronounDistribution

_LOG = structlog.get_logger()

API_KEY_ENV = "ANTHROSCAN_API_KEY"

_RETRYABLE_STATUS = frozenset({429, 500, 502, 503, 504})


class RemoteBackend(FillMaskBackend):
    def __init__(
        self,
        descriptor: BackendDescriptor,
        *,
        session: requests.Session | None = None,
        api_key: str | None = None,
        backoff_seconds: float = 0.5,
    ) -> None:
        self.descriptor = descriptor
        self.model_id = descriptor.model_id
        self.mask_token = descriptor.mask_token
        self.url = f"{descriptor.endpoint.rstrip('/')}/fill-mask"
        self.backoff_seconds = backoff_seconds

        # One keep-alive session for every request of a run.
        self.session = session or requests.Session()
        api_key = api_key or os.environ.get(API_KEY_ENV)
        if api_key:
            self.session.headers["Authorization"] = f"Bearer {api_key}"

    @override
    def fill_mask_pronouns(
        self, masked_sentence: str, inventory: PronounInventory
    ) -> PronounDistribution:
        return self._request(self.to_model_text(masked_sentence), inventory)

    @override
    def fill_mask_many(
        self, masked_sentences: Sequence[str], inventory: PronounInventory
    ) -> list[PronounDistribution]:
        """
        Query in batches of `descriptor.batch_size`, each batch's requests in
        flight together. Results keep the input order.
        """
        results: list[PronounDistribution] = []
        batch_size = self.descriptor.batch_size
        with ThreadPoolExecutor(max_workers=batch_size) as pool:
            for batch_number, batch in enumerate(chunked(masked_sentences, batch_size)):
                _LOG.debug("backend.batch", batch=batch_number, size=len(batch))
                results.extend(
                    pool.map(lambda s: self.fill_mask_pronouns(s, inventory), batch)
                )
        return results

    def _request(self, model_text: str, inventory: PronounInventory) -> PronounDistribution:
        payload = {
            "model": self.model_id,
            "text": model_text,
            "targets": list(inventory.pronouns),
        }
        attempts = self.descriptor.max_attempts
        for attempt in range(1, attempts + 1):
            try:
                response = self.session.post(
                    self.url, json=payload, timeout=self.descriptor.timeout
                )
            except (requests.ConnectionError, requests.Timeout) as e:
                if attempt == attempts:
                    raise BackendUnreachable(
                        f"{self.url}: no response after {attempts} attempts: {e}"
                    ) from e
                self._back_off(attempt, reason=type(e).__name__)
                continue
            except requests.RequestException as e:
                raise BackendUnreachable(f"{self.url}: {e}") from e

            if response.status_code in _RETRYABLE_STATUS:
                if attempt == attempts:
                    raise BackendUnreachable(
                        f"{self.url}: HTTP {response.status_code} after {attempts} attempts"
                    )
                self._back_off(attempt, reason=f"HTTP {response.status_code}")
                continue
            return self._parse(response, inventory)

        raise AssertionError("unreachable")

    def _back_off(self, attempt: int, reason: str) -> None:
        delay = self.backoff_seconds * 2 ** (attempt - 1)
        _LOG.warning("backend.retry", url=self.url, attempt=attempt, reason=reason, delay=delay)
        time.sleep(delay)

    def _parse(
        self, response: requests.Response, inventory: PronounInventory
    ) -> PronounDistribution:
        if response.status_code == 422:
            error = _json_or_none(response) or {}
            if error.get("error") == "mask_tokenization":
                raise MaskTokenizationError(
                    f"{self.model_id} cannot place the mask on a single token"
                )
        try:
            response.raise_for_status()
        except requests.HTTPError as e:
            raise BackendUnreachable(f"{self.url}: {e}") from e

        doc = _json_or_none(response)
        if not isinstance(doc, dict) or "probabilities" not in doc:
            raise BackendUnreachable(f"{self.url}: malformed response body")

        probabilities = doc["probabilities"]
        variants = doc.get("resolved_variants", {})
        missing = [w for w in inventory.pronouns if w not in probabilities]
        if missing:
            raise MissingPronoun(missing)
        for w in inventory.pronouns:
            if not variants.get(w):
                raise VocabularyMiss(w, self.model_id)

        return PronounDistribution(
            probabilities={w: float(probabilities[w]) for w in inventory.pronouns},
            model_id=doc.get("model", self.model_id),
            resolved_variants={w: tuple(variants[w]) for w in inventory.pronouns},
        )

    @override
    def close(self) -> None:
        self.session.close()


def _json_or_none(response: requests.Response):
    try:
        return response.json()
    except ValueError:
        return None
