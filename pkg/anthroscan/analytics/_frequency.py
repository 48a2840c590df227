from __future__ import annotations

from collections import Counter
from collections.abc import Iterable

from anthroscan.text import AnalysisSource, Document, document_triples


def chunk_head(chunk_text: str) -> str:
    """
    The last word of a chunk, lower-cased.

    >>> chunk_head("OpenAI's large language Models")
    'models'
    """
    words = chunk_text.split()
    return words[-1].strip(".,;:!?\"'()[]").casefold() if words else ""


def entity_frequency_report(
    corpus: Iterable[Document],
    top_k: int = 100,
    analysis_source: AnalysisSource | str = AnalysisSource.BUILTIN_RULES,
    parses=None,
) -> list[tuple[str, int]]:
    """
    The most common subject and object chunk heads, most frequent first,
    ties alphabetical. A chunk shared by several triples counts once.

    Used to draft entity lexicons by hand.
    """
    counts: Counter = Counter()
    for doc in corpus:
        for _, _, triples in document_triples(doc, (), analysis_source, parses):
            chunks = {
                chunk.span: chunk
                for t in triples
                for chunk in (t.subject_chunk, t.object_chunk)
                if chunk is not None
            }
            counts.update(chunk_head(c.text) for c in chunks.values() if chunk_head(c.text))
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:top_k]
