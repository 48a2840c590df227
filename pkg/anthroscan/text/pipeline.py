"""
Documents in, masked sentences out.

Each document is split into sentences, each sentence into triples; subject
and object chunks that end in a lexicon keyword are masked, one record per
mention.
"""

from __future__ import annotations

import multiprocessing
from collections.abc import Iterable, Iterator, Mapping, Sequence

import structlog

from anthroscan.errors import OverlappingMask
from anthroscan.scoring import PLACEHOLDER, MaskedSentence

from ._conllu import ConlluSentence
from ._documents import Document
from ._lexicon import EntityLexicon
from ._mentions import deduplicate, find_entity_mentions, mask_mention, merge_mentions
from ._sentences import split_sentences
from ._triples import AnalysisSource, SemanticTriple, extract_triples

_LOG = structlog.get_logger()

Parses = Mapping[tuple[str, int], ConlluSentence]


def document_triples(
    document: Document,
    heads: Iterable[str] = (),
    analysis_source: AnalysisSource | str = AnalysisSource.BUILTIN_RULES,
    parses: Parses | None = None,
) -> Iterator[tuple[int, str, list[SemanticTriple]]]:
    """(sentence_index, sentence, triples) for every sentence of the document."""
    source = AnalysisSource(analysis_source)
    heads = frozenset(heads)
    for sentence_index, (start, end) in enumerate(split_sentences(document.text)):
        sentence = document.text[start:end]
        parse = None
        if source is AnalysisSource.CONLLU:
            parse = (parses or {}).get((document.doc_id, sentence_index))
            if parse is None:
                _LOG.warning(
                    "pipeline.parse.missing",
                    doc_id=document.doc_id,
                    sentence_index=sentence_index,
                )
                continue
        triples = extract_triples(
            sentence,
            source,
            sentence_index=sentence_index,
            parse=parse,
            heads=heads,
        )
        yield sentence_index, sentence, triples


def extract_masked_sentences(
    document: Document,
    lexicons: Sequence[EntityLexicon],
    analysis_source: AnalysisSource | str = AnalysisSource.BUILTIN_RULES,
    parses: Parses | None = None,
    placeholder: str = PLACEHOLDER,
) -> list[MaskedSentence]:
    log = _LOG.bind(doc_id=document.doc_id)
    heads = frozenset().union(*(lex.head_forms() for lex in lexicons))

    records = []
    for sentence_index, sentence, triples in document_triples(
        document, heads, analysis_source, parses
    ):
        mentions = merge_mentions(
            find_entity_mentions(sentence, triples, lex) for lex in lexicons
        )
        masked_spans: list[tuple[int, int]] = []
        for mention in mentions:
            try:
                records.append(
                    mask_mention(
                        sentence,
                        mention,
                        placeholder,
                        doc_id=document.doc_id,
                        sentence_index=sentence_index,
                        masked_spans=masked_spans,
                    )
                )
            except OverlappingMask as e:
                log.warning(
                    "pipeline.mention.skipped",
                    sentence_index=sentence_index,
                    mention=mention.chunk.text,
                    reason=str(e),
                )
                continue
            masked_spans.append(mention.span)
    return records


def _extract_job(args) -> list[MaskedSentence]:
    return extract_masked_sentences(*args)


def build_masked_corpus(
    documents: Sequence[Document],
    lexicons: Sequence[EntityLexicon],
    workers: int = 1,
    analysis_source: AnalysisSource | str = AnalysisSource.BUILTIN_RULES,
    parses: Parses | None = None,
    dedup: bool = True,
) -> list[MaskedSentence]:
    """
    Masked sentences for a whole corpus, ordered by (doc_id, sentence_index,
    span start) whatever the number of workers.
    """
    source = AnalysisSource(analysis_source)

    def jobs():
        for doc in documents:
            doc_parses = None
            if parses:
                doc_parses = {k: v for k, v in parses.items() if k[0] == doc.doc_id}
            yield doc, tuple(lexicons), source, doc_parses

    records: list[MaskedSentence] = []
    # If one worker, avoid any subprocesses/forking.
    if workers == 1:
        for job in jobs():
            records.extend(_extract_job(job))
    else:
        with multiprocessing.Pool(workers) as pool:
            for found in pool.imap_unordered(_extract_job, jobs(), chunksize=4):
                records.extend(found)
        pool.join()

    records.sort(key=lambda r: r.sort_key)
    total = len(records)
    if dedup:
        records = deduplicate(records)
    _LOG.info(
        "pipeline.masked",
        documents=len(documents),
        records=len(records),
        duplicates=total - len(records),
    )
    return records
