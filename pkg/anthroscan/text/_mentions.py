from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from anthroscan.errors import OverlappingMask
from anthroscan.scoring import PLACEHOLDER, GrammaticalRole, MaskedSentence

from ._documents import Document
from ._lexicon import EntityLexicon
from ._triples import Chunk, SemanticTriple


@dataclass(frozen=True)
class Mention:
    chunk: Chunk
    keyword: str
    grammatical_role: GrammaticalRole
    verb_lemma: str | None
    lexicon: str | None = None

    @property
    def span(self) -> tuple[int, int]:
        return self.chunk.span


def find_entity_mentions(
    sentence: str, triples: Iterable[SemanticTriple], lexicon: EntityLexicon
) -> list[Mention]:
    """
    Subject and object chunks ending in a lexicon keyword.

    A chunk shared by several triples (a subject with two verbs, say) is one
    mention, attributed to the first of them.
    """
    mentions: dict[tuple[int, int], Mention] = {}
    for triple in triples:
        triple.check_bounds(sentence)
        for chunk, role in (
            (triple.subject_chunk, GrammaticalRole.SUBJECT),
            (triple.object_chunk, GrammaticalRole.OBJECT),
        ):
            if chunk is None or chunk.span in mentions:
                continue
            keyword = lexicon.match_chunk(chunk.text)
            if keyword is not None:
                mentions[chunk.span] = Mention(
                    chunk, keyword, role, triple.verb_lemma, lexicon.name
                )
    return sorted(mentions.values(), key=lambda m: m.span)


def merge_mentions(mention_lists: Iterable[Sequence[Mention]]) -> list[Mention]:
    """
    Combine the mentions found with several lexicons. When two lexicons match
    the same chunk, the longer keyword wins ("language model" over "model"),
    then the earlier lexicon.
    """
    best: dict[tuple[int, int], Mention] = {}
    for mentions in mention_lists:
        for m in mentions:
            current = best.get(m.span)
            if current is None or _keyword_rank(m.keyword) > _keyword_rank(current.keyword):
                best[m.span] = m
    return sorted(best.values(), key=lambda m: m.span)


def _keyword_rank(keyword: str) -> tuple[int, int]:
    return len(keyword.split()), len(keyword)


def mask_mention(
    sentence: str,
    mention: Mention,
    placeholder: str = PLACEHOLDER,
    *,
    doc_id: str = "",
    sentence_index: int = 0,
    masked_spans: Iterable[tuple[int, int]] = (),
) -> MaskedSentence:
    """
    Replace the whole mention chunk with one placeholder.

    `masked_spans` are spans already masked in the same sentence; a mention
    overlapping one of them is refused.

    >>> from anthroscan.text import Chunk
    >>> m = Mention(Chunk(0, 10, 'The system'), 'system', GrammaticalRole.SUBJECT, 'work')
    >>> mask_mention('The system works.', m).masked_sentence
    '[MASK] works.'
    """
    start, end = mention.span
    if placeholder in sentence:
        raise OverlappingMask(f"sentence already contains {placeholder!r}: {sentence!r}")
    for s, e in masked_spans:
        if start < e and s < end:
            raise OverlappingMask(f"span {mention.span} overlaps masked span {(s, e)}")

    return MaskedSentence(
        doc_id=doc_id,
        original_sentence=sentence,
        masked_sentence=sentence[:start] + placeholder + sentence[end:],
        entity_surface=sentence[start:end],
        entity_keyword=mention.keyword,
        span=(start, end),
        grammatical_role=mention.grammatical_role,
        verb_lemma=mention.verb_lemma,
        sentence_index=sentence_index,
        lexicon=mention.lexicon,
        placeholder=placeholder,
    )


def deduplicate(records: Iterable[MaskedSentence]) -> list[MaskedSentence]:
    """
    Drop records whose masked text was already seen, keeping the first.

    >>> from anthroscan.scoring import MaskedSentence
    >>> a = MaskedSentence('d1', 'It works.', '[MASK] works.', 'It', 'it', (0, 2))
    >>> b = MaskedSentence('d2', 'It works.', '[MASK] works.', 'It', 'it', (0, 2))
    >>> [r.doc_id for r in deduplicate([a, b])]
    ['d1']
    """
    seen: set[str] = set()
    kept = []
    for record in records:
        if record.masked_sentence in seen:
            continue
        seen.add(record.masked_sentence)
        kept.append(record)
    return kept


def filter_lm_documents(doc: Document, lm_keywords: Iterable[str]) -> bool:
    """
    Whether the title or text mentions any of the keywords as whole words.
    Hyphens count as word boundaries, and a trailing plural is tolerated.

    >>> doc = Document('a', 'We fine-tune BERT and GPT-4 models.')
    >>> filter_lm_documents(doc, ['BERT']), filter_lm_documents(doc, ['GPT'])
    (True, True)
    >>> filter_lm_documents(Document('b', 'Roberta likes camembert cheese.'), ['BERT'])
    False
    >>> filter_lm_documents(Document('c', 'Large language models.'), ['language model'])
    True
    """
    pattern = _keyword_pattern(tuple(lm_keywords))
    if pattern is None:
        return False
    return any(pattern.search(text) for text in (doc.title, doc.text) if text)


@lru_cache(maxsize=16)
def _keyword_pattern(keywords: tuple[str, ...]) -> re.Pattern | None:
    alternatives = [
        r"[\s\-]+".join(re.escape(part) for part in re.split(r"[\s\-]+", k.strip()))
        for k in keywords
        if k.strip()
    ]
    if not alternatives:
        return None
    # Longest first, so "GPT-4" is tried before "GPT".
    alternatives.sort(key=len, reverse=True)
    return re.compile(
        r"(?<![0-9a-z])(?:" + "|".join(alternatives) + r")(?:e?s)?(?![0-9a-z])",
        re.IGNORECASE,
    )
