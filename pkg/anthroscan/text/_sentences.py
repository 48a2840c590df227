"""
Sentence segmentation for abstract and headline prose.

Splitting is done by nltk's Punkt tokenizer with a fixed abbreviation list
rather than trained parameters, so results don't depend on downloaded
models. Sentences never cross a blank line.
"""

from __future__ import annotations

import re
from collections.abc import Iterator

from nltk.tokenize.punkt import PunktParameters, PunktSentenceTokenizer

# Punkt stores abbreviations lower-cased, without their final period.
ABBREVIATIONS = frozenset(
    """
    al approx cf ch co corp dept dr e.g eq eqs est et etc fig figs i.e inc jr
    ltd mr mrs ms p pp prof ref refs resp sec sr st tab u.k u.s vol vs
    viz w.r.t
    """.split()
)

_PARAGRAPH = re.compile(r"\n\s*\n")


def _tokenizer() -> PunktSentenceTokenizer:
    params = PunktParameters()
    params.abbrev_types = set(ABBREVIATIONS)
    return PunktSentenceTokenizer(params)


_TOKENIZER = _tokenizer()


def split_sentences(text: str) -> list[tuple[int, int]]:
    """
    Character spans of the sentences in `text`, in order. Spans exclude
    surrounding whitespace.

    >>> text = "A works. B fails."
    >>> [text[s:e] for s, e in split_sentences(text)]
    ['A works.', 'B fails.']
    >>> split_sentences("See Fig. 2 for details.")
    [(0, 23)]
    >>> text = "Smith et al. reported 3.5 points. The U.S. team agreed"
    >>> [text[s:e] for s, e in split_sentences(text)]
    ['Smith et al. reported 3.5 points.', 'The U.S. team agreed']
    >>> split_sentences("   ")
    []
    """
    spans: list[tuple[int, int]] = []
    for block_start, block_end in _blocks(text):
        block = text[block_start:block_end]
        for start, end in _TOKENIZER.span_tokenize(block):
            start, end = _trimmed(text, block_start + start, block_start + end)
            if start < end:
                spans.append((start, end))
    return spans


def _blocks(text: str) -> Iterator[tuple[int, int]]:
    start = 0
    for m in _PARAGRAPH.finditer(text):
        yield start, m.start()
        start = m.end()
    yield start, len(text)


def _trimmed(text: str, start: int, end: int) -> tuple[int, int]:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    return start, end
