"""
Subject-verb-object triples.

Two analysis sources are supported: `builtin_rules`, which chunks and finds
verbs from word position and morphology alone, and `conllu`, which reads the
dependency relations of a sentence parsed ahead of time by any external tool.
"""

from __future__ import annotations

from collections.abc import Collection
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

from anthroscan.errors import ConlluParseError

from ._words import (
    AUXILIARIES,
    IRREGULAR_PAST,
    SUBJECT_PRONOUNS,
    Kind,
    Token,
    has_adjective_suffix,
    has_noun_suffix,
    has_verb_morphology,
    is_plural_noun_form,
    known_verbs,
    lemmatize_verb,
    tokenize,
)


class AnalysisSource(Enum):
    BUILTIN_RULES = "builtin_rules"
    CONLLU = "conllu"


@dataclass(frozen=True)
class Chunk:
    start: int
    end: int
    text: str

    @property
    def span(self) -> tuple[int, int]:
        return self.start, self.end

    def overlaps(self, other: Chunk) -> bool:
        return self.start < other.end and other.start < self.end

    def to_dict(self) -> dict:
        return {"span": [self.start, self.end], "text": self.text}


@dataclass(frozen=True)
class SemanticTriple:
    sentence_index: int
    subject_chunk: Chunk
    verb_lemma: str
    object_chunk: Chunk | None = None

    def __post_init__(self) -> None:
        if self.object_chunk is not None and self.object_chunk.overlaps(self.subject_chunk):
            raise ValueError(
                f"subject {self.subject_chunk.text!r} and object "
                f"{self.object_chunk.text!r} overlap"
            )

    def check_bounds(self, sentence: str) -> None:
        for chunk in (self.subject_chunk, self.object_chunk):
            if chunk is None:
                continue
            if not (0 <= chunk.start < chunk.end <= len(sentence)) or (
                sentence[chunk.start : chunk.end] != chunk.text
            ):
                raise ValueError(f"chunk {chunk.text!r} doesn't match the sentence")


def extract_triples(
    sentence: str,
    analysis_source: AnalysisSource | str = AnalysisSource.BUILTIN_RULES,
    *,
    sentence_index: int = 0,
    parse=None,
    heads: Collection[str] = frozenset(),
) -> list[SemanticTriple]:
    """
    Triples for one sentence, in verb order.

    `heads` are lower-cased words known to head entity chunks (the lexicon's
    keywords); the rules never treat them as verbs. `parse` is the sentence's
    ConlluSentence, required for the conllu source.

    >>> [(t.subject_chunk.text, t.verb_lemma, t.object_chunk.text)
    ...  for t in extract_triples("The system rejects the job.")]
    [('The system', 'reject', 'the job')]
    """
    source = AnalysisSource(analysis_source)
    if source is AnalysisSource.CONLLU:
        if parse is None:
            raise ConlluParseError(
                f"no dependency parse supplied for sentence {sentence_index}: {sentence!r}"
            )
        from ._conllu import triples_from_parse

        return triples_from_parse(sentence, parse, sentence_index=sentence_index)
    return _RuleBasedTriples(sentence, heads).triples(sentence_index)


class _Verb(NamedTuple):
    index: int
    lemma: str
    # Non-finite verbs (infinitives, gerunds, coordinated verbs) take the
    # subject of their governing clause.
    finite: bool


# Pre-nominal modifiers that make a following -ed word adjectival: "a novel learned metric".
_PRENOMINAL = frozenset(
    "novel new well simple self fine large small deep good high low recent "
    "standard".split()
)


class _RuleBasedTriples:
    def __init__(self, sentence: str, heads: Collection[str]) -> None:
        self.sentence = sentence
        self.heads = frozenset(h.lower() for h in heads)
        self.tokens = _resolve_that(tokenize(sentence))
        # Closing comma -> opening comma of each relative clause or appositive.
        self._asides = _asides(self.tokens)
        self._in_aside = frozenset(
            j for close, open_ in self._asides.items() for j in range(open_, close + 1)
        )
        self._first_start = next(
            (t.start for t in self.tokens if t.kind is not Kind.PUNCT), 0
        )
        self.verbs: dict[int, _Verb] = {}
        self._find_verbs()

        self.chunks = self._find_chunks()
        self._chunk_ending_at = {last: (first, last) for first, last in self.chunks}
        self._chunk_starting_at = {first: (first, last) for first, last in self.chunks}

    def triples(self, sentence_index: int) -> list[SemanticTriple]:
        subjects = {
            i: self._subject_of(i)
            for i, verb in self.verbs.items()
            if verb.finite and i not in self._in_aside
        }
        triples = []
        for i in sorted(self.verbs):
            if i in self._in_aside:
                continue
            verb = self.verbs[i]
            subject = subjects.get(i) if verb.finite else self._governing_subject(i, subjects)
            if subject is None:
                continue
            obj = self._object_of(i)
            if obj is not None and obj.overlaps(subject):
                obj = None
            triples.append(SemanticTriple(sentence_index, subject, verb.lemma, obj))
        return triples

    # --- verbs -----------------------------------------------------------

    def _find_verbs(self) -> None:
        toks = self.tokens
        i = 0
        while i < len(toks):
            tok = toks[i]
            if tok.kind in (Kind.AUX, Kind.MODAL):
                i = self._resolve_chain(i)
                continue
            if tok.kind is Kind.WORD:
                finite = self._verb_finiteness(i)
                if finite is not None:
                    self.verbs[i] = _Verb(i, lemmatize_verb(tok.text), finite)
            i += 1

    def _resolve_chain(self, i: int) -> int:
        """Auxiliary chains: "must decide", "have been developed", "is a ..."."""
        toks = self.tokens
        chain = []
        j = i
        while j < len(toks) and toks[j].kind in (Kind.AUX, Kind.MODAL, Kind.ADV):
            if toks[j].kind is not Kind.ADV:
                chain.append(j)
            j += 1

        if j < len(toks) and self._is_main_verb_after(toks[chain[-1]], toks[j]):
            self.verbs[j] = _Verb(j, lemmatize_verb(toks[j].text), True)
            return j + 1

        last = toks[chain[-1]]
        if last.kind is Kind.AUX:
            # A copular or auxiliary-only predicate.
            self.verbs[chain[-1]] = _Verb(chain[-1], AUXILIARIES[_norm(last.lower)], True)
        return j

    def _is_main_verb_after(self, last_aux: Token, tok: Token) -> bool:
        if tok.kind is not Kind.WORD or self._is_head(tok) or self._is_proper(tok):
            return False
        if has_verb_morphology(tok.text):
            return True
        return last_aux.kind is Kind.MODAL or AUXILIARIES.get(_norm(last_aux.lower)) == "do"

    def _verb_finiteness(self, i: int) -> bool | None:
        """True for a finite verb, False for a non-finite one, None for no verb."""
        toks = self.tokens
        tok = toks[i]
        if self._is_head(tok) or self._is_proper(tok):
            return None
        prev_i = self._previous(i)
        if prev_i is None:
            return None
        prev = toks[prev_i]
        nxt = toks[i + 1] if i + 1 < len(toks) else None
        w = tok.lower
        lemma_known = lemmatize_verb(w) in known_verbs()
        inflected = has_verb_morphology(w) or (is_plural_noun_form(w) and lemma_known)

        if "-" in w and prev.kind not in (Kind.PRON, Kind.TO):
            return None
        if prev_i in self._asides:
            return True if (lemma_known or inflected) and not has_noun_suffix(w) else None

        if prev.kind is Kind.TO:
            if lemma_known and not has_noun_suffix(w) and not is_plural_noun_form(w):
                return False
            return None
        if prev.kind is Kind.PREP:
            return False if (w.endswith("ing") and len(w) > 4) else None
        if prev.kind is Kind.REL:
            return True if (lemma_known or inflected) and not has_noun_suffix(w) else None
        if prev.kind is Kind.PRON:
            if prev.lower in SUBJECT_PRONOUNS:
                return True
            if prev.lower in ("it", "one") and (lemma_known or inflected):
                return True
            return None
        if prev.kind is Kind.CONJ:
            if not any(v < i for v in self.verbs) or has_noun_suffix(w):
                return None
            if inflected:
                return False
            if lemma_known and nxt is not None and nxt.kind in (
                Kind.DET, Kind.PRON, Kind.TO, Kind.PART, Kind.PREP
            ):  # fmt: skip
                return False
            return None
        if prev.kind is Kind.WORD and prev_i not in self.verbs:
            return True if self._finite_after_noun(tok, prev, nxt) else None
        return None

    def _finite_after_noun(self, tok: Token, prev: Token, nxt: Token | None) -> bool:
        """A word continuing a noun run that is really the clause's verb."""
        w = tok.lower
        p = prev.lower
        if nxt is not None and nxt.kind in (Kind.AUX, Kind.MODAL):
            return False
        if has_noun_suffix(w) or "-" in p:
            return False
        if (len(w) > 4 and w.endswith("ed")) or w in IRREGULAR_PAST:
            return not (has_adjective_suffix(p) or p in _PRENOMINAL)
        if is_plural_noun_form(w):
            if is_plural_noun_form(p):
                return False
            if lemmatize_verb(w) in known_verbs():
                return True
            return nxt is not None and nxt.kind in (Kind.DET, Kind.PRON)
        return w in known_verbs() and is_plural_noun_form(p)

    def _previous(self, i: int) -> int | None:
        j = i - 1
        while j >= 0 and self.tokens[j].kind is Kind.ADV:
            j -= 1
        return j if j >= 0 else None

    def _is_head(self, tok: Token) -> bool:
        return tok.lower in self.heads

    def _is_proper(self, tok: Token) -> bool:
        # Capitalised mid-sentence: a name, not a verb.
        return tok.start > self._first_start and tok.text[0].isupper()

    # --- chunks ----------------------------------------------------------

    def _find_chunks(self) -> list[tuple[int, int]]:
        toks = self.tokens
        chunks = []
        i = 0
        while i < len(toks):
            if toks[i].kind is Kind.PRON:
                chunks.append((i, i))
                i += 1
                continue
            if toks[i].kind in (Kind.DET, Kind.WORD) and i not in self.verbs:
                j = i
                while j < len(toks) and toks[j].kind is Kind.DET:
                    j += 1
                k = j
                while k < len(toks) and toks[k].kind is Kind.WORD and k not in self.verbs:
                    k += 1
                if k > j:
                    chunks.append((i, k - 1))
                    i = k
                else:
                    i = max(j, i + 1)
                continue
            i += 1
        return chunks

    def _chunk(self, first: int, last: int) -> Chunk:
        start, end = self.tokens[first].start, self.tokens[last].end
        return Chunk(start, end, self.sentence[start:end])

    def _subject_of(self, v: int) -> Chunk | None:
        toks = self.tokens
        j = v - 1
        while j >= 0 and toks[j].kind in (Kind.ADV, Kind.AUX, Kind.MODAL):
            j -= 1
        if j in self._asides:
            j = self._asides[j] - 1
        if j >= 0 and toks[j].kind is Kind.REL:
            j -= 1
            while j >= 0 and toks[j].text == ",":
                j -= 1
        found = self._chunk_ending_at.get(j)
        return self._chunk(*found) if found else None

    def _object_of(self, v: int) -> Chunk | None:
        toks = self.tokens
        j = v + 1
        while j < len(toks) and toks[j].kind in (Kind.ADV, Kind.PART):
            j += 1
        found = self._chunk_starting_at.get(j)
        return self._chunk(*found) if found else None

    def _governing_subject(self, v: int, subjects: dict[int, Chunk | None]) -> Chunk | None:
        before = [i for i in subjects if i < v and subjects[i] is not None]
        if before:
            return subjects[max(before)]
        after = [i for i in subjects if i > v and subjects[i] is not None]
        if after:
            return subjects[min(after)]
        return None


def _resolve_that(tokens: list[Token]) -> list[Token]:
    """
    "that" is a determiner ("that model"), a relative pronoun ("models that
    learn") or a complementiser ("show that the model ...").
    """
    resolved = list(tokens)
    for i, tok in enumerate(tokens):
        if tok.lower != "that":
            continue
        prev = tokens[i - 1] if i > 0 else None
        nxt = tokens[i + 1] if i + 1 < len(tokens) else None
        if nxt is None or nxt.kind is Kind.PUNCT:
            kind = Kind.SUBORD
        elif prev is not None and prev.kind is Kind.WORD and _starts_predicate(nxt):
            kind = Kind.REL
        elif nxt.kind in (Kind.DET, Kind.PRON, Kind.AUX, Kind.MODAL):
            kind = Kind.SUBORD
        else:
            continue
        resolved[i] = replace(tok, kind=kind)
    return resolved


def _asides(tokens: list[Token]) -> dict[int, int]:
    """
    Comma-bracketed relative clauses (", which was trained on X,") and
    appositives (", a transformer,") following a word, as closing comma ->
    opening comma. A relative clause with no closing comma runs to the end.
    """
    asides = {}
    i = 1
    while i < len(tokens) - 1:
        if tokens[i].text == "," and tokens[i - 1].kind is Kind.WORD:
            close = next((j for j in range(i + 1, len(tokens)) if tokens[j].text == ","), None)
            opener = tokens[i + 1].kind
            if opener is Kind.REL:
                close = len(tokens) if close is None else close
            elif not (
                opener is Kind.DET and close is not None and _is_noun_phrase(tokens[i + 1 : close])
            ):
                close = None
            if close is not None:
                asides[close] = i
                i = close
        i += 1
    return asides


def _is_noun_phrase(tokens: list[Token]) -> bool:
    for tok in tokens:
        if tok.kind is Kind.DET:
            continue
        if tok.kind is not Kind.WORD or "-" in tok.text:
            return False
        lemma = lemmatize_verb(tok.text)
        if has_verb_morphology(tok.text) or (lemma != tok.lower and lemma in known_verbs()):
            return False
    return True


def _starts_predicate(tok: Token) -> bool:
    if tok.kind in (Kind.AUX, Kind.MODAL, Kind.ADV):
        return True
    return tok.kind is Kind.WORD and (
        has_verb_morphology(tok.text) or lemmatize_verb(tok.text) in known_verbs()
    )


def _norm(word: str) -> str:
    return word.replace("’", "'")
