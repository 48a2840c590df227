"""
Reading dependency parses in CoNLL-U format, and turning them into triples.

Parses are tied to corpus sentences through a manifest (JSONL), one row per
sentence:

    {"doc_id": "...", "sentence_index": 0, "path": "parses/a.conllu", "sent_id": "a-0"}

where `sent_id` matches a `# sent_id = ...` comment in the CoNLL-U file.
Relative paths are resolved against the manifest's directory.
"""

from __future__ import annotations

import io
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path

import conllu
import structlog
from conllu.exceptions import ParseException

from anthroscan._utils import read_jsonl
from anthroscan.errors import ConlluParseError

from ._triples import Chunk, SemanticTriple
from ._words import lemmatize_verb

_LOG = structlog.get_logger()

SUBJECT_RELATIONS = frozenset({"nsubj", "nsubj:pass", "nsubjpass"})
OBJECT_RELATIONS = frozenset({"obj", "dobj", "iobj"})
# Predicates without a subject of their own take the one of the verb they hang off.
INHERITING_RELATIONS = frozenset({"xcomp", "conj", "advcl"})
_CHUNK_RELATIONS = frozenset({"det", "amod", "compound", "nummod", "flat"})
_REQUIRED_FIELDS = ("id", "form", "head", "deprel")


@dataclass(frozen=True)
class ConlluToken:
    id: int
    form: str
    lemma: str | None
    upos: str | None
    head: int
    deprel: str

    @property
    def verb_lemma(self) -> str:
        if self.lemma and self.lemma != "_":
            return self.lemma.lower()
        return lemmatize_verb(self.form)

    @classmethod
    def from_token(cls, token: Mapping) -> ConlluToken:
        return cls(
            id=token["id"],
            form=token["form"],
            lemma=token.get("lemma"),
            upos=token.get("upos"),
            head=token["head"],
            deprel=token["deprel"],
        )


@dataclass(frozen=True)
class ConlluSentence:
    tokens: tuple[ConlluToken, ...]
    comments: Mapping[str, str | None] = field(default_factory=dict, compare=False)

    @property
    def sent_id(self) -> str | None:
        return self.comments.get("sent_id")

    @property
    def text(self) -> str | None:
        return self.comments.get("text")

    @classmethod
    def from_token_list(cls, tokens: conllu.TokenList, source: str) -> ConlluSentence:
        """
        Keep the syntactic words of a parsed sentence. Multiword token ranges
        and empty nodes have tuple ids and are left out.
        """
        words = []
        for token in tokens:
            if not isinstance(token["id"], int):
                continue
            missing = [f for f in _REQUIRED_FIELDS if token.get(f) is None]
            if missing:
                raise ConlluParseError(
                    f"{source}: sentence {tokens.metadata.get('sent_id')!r}, "
                    f"token {token.get('form')!r}: missing {', '.join(missing)}"
                )
            words.append(ConlluToken.from_token(token))
        return cls(tuple(words), dict(tokens.metadata))


def parse_conllu(text: str, source: str = "<string>") -> Iterator[ConlluSentence]:
    """
    Parse CoNLL-U text. Multiword token ranges and empty nodes are skipped.

    >>> rows = ["# sent_id = s1",
    ...         "1\\tThe\\tthe\\tDET\\t_\\t_\\t2\\tdet\\t_\\t_",
    ...         "2\\tsystem\\tsystem\\tNOUN\\t_\\t_\\t3\\tnsubj\\t_\\t_",
    ...         "3\\tworks\\twork\\tVERB\\t_\\t_\\t0\\troot\\t_\\t_", ""]
    >>> [s] = parse_conllu("\\n".join(rows))
    >>> s.sent_id, [t.form for t in s.tokens]
    ('s1', ['The', 'system', 'works'])
    """
    return _read_token_lists(conllu.parse_incr(io.StringIO(text)), source)


def _read_token_lists(
    token_lists: Iterable[conllu.TokenList], source: str
) -> Iterator[ConlluSentence]:
    try:
        for tokens in token_lists:
            if tokens:
                yield ConlluSentence.from_token_list(tokens, source)
    except ParseException as e:
        raise ConlluParseError(f"{source}: {e}") from e


def read_conllu(path: Path) -> list[ConlluSentence]:
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as f:
            return list(_read_token_lists(conllu.parse_incr(f), str(path)))
    except OSError as e:
        raise ConlluParseError(f"cannot read {path}: {e}") from e


def load_parses(manifest_path: Path) -> dict[tuple[str, int], ConlluSentence]:
    """Parses keyed by (doc_id, sentence_index), as listed in a manifest."""
    manifest_path = Path(manifest_path)
    by_file: dict[Path, dict[str, ConlluSentence]] = {}
    parses: dict[tuple[str, int], ConlluSentence] = {}

    for line_number, row in read_jsonl(manifest_path):
        try:
            doc_id = row["doc_id"]
            sentence_index = int(row["sentence_index"])
            conllu_path = manifest_path.parent / row["path"]
            sent_id = row["sent_id"]
        except (KeyError, TypeError, ValueError) as e:
            raise ConlluParseError(
                f"{manifest_path}:{line_number}: bad manifest row: {e}"
            ) from e

        if conllu_path not in by_file:
            by_file[conllu_path] = {
                s.sent_id: s for s in read_conllu(conllu_path) if s.sent_id is not None
            }
        sentence = by_file[conllu_path].get(sent_id)
        if sentence is None:
            raise ConlluParseError(
                f"{manifest_path}:{line_number}: no sentence {sent_id!r} in {conllu_path}"
            )
        parses[(doc_id, sentence_index)] = sentence

    _LOG.info("parses.loaded", manifest=manifest_path, sentences=len(parses))
    return parses


def triples_from_parse(
    sentence: str, parse: ConlluSentence, *, sentence_index: int = 0
) -> list[SemanticTriple]:
    offsets = _align(sentence, parse)
    by_id = {t.id: t for t in parse.tokens}
    children: dict[int, list[ConlluToken]] = defaultdict(list)
    for t in parse.tokens:
        children[t.head].append(t)

    def subject_of(token: ConlluToken) -> ConlluToken | None:
        for c in children[token.id]:
            if c.deprel in SUBJECT_RELATIONS:
                return c
        return None

    def chunk(head: ConlluToken) -> Chunk:
        ids = {head.id}
        for c in children[head.id]:
            if c.id < head.id and _is_chunk_relation(c.deprel):
                ids |= _subtree(c, children)
        start = offsets[min(ids)][0]
        end = offsets[head.id][1]
        return Chunk(start, end, sentence[start:end])

    triples = []
    for token in parse.tokens:
        subject = subject_of(token)
        if subject is None and token.deprel in INHERITING_RELATIONS:
            governor = by_id.get(token.head)
            visited = {token.id}
            while governor is not None and subject is None and governor.id not in visited:
                visited.add(governor.id)
                subject = subject_of(governor)
                governor = by_id.get(governor.head)
        if subject is None:
            continue

        copula = next((c for c in children[token.id] if c.deprel == "cop"), None)
        verb_lemma = copula.verb_lemma if copula else token.verb_lemma
        obj = next((c for c in children[token.id] if c.deprel in OBJECT_RELATIONS), None)

        subject_chunk = chunk(subject)
        object_chunk = chunk(obj) if obj is not None else None
        if object_chunk is not None and object_chunk.overlaps(subject_chunk):
            object_chunk = None
        triples.append(SemanticTriple(sentence_index, subject_chunk, verb_lemma, object_chunk))
    return triples


def _is_chunk_relation(deprel: str) -> bool:
    return deprel in ("nmod:poss", "det:poss") or deprel.split(":")[0] in _CHUNK_RELATIONS


def _subtree(token: ConlluToken, children: dict[int, list[ConlluToken]]) -> set[int]:
    ids = set()
    stack = [token]
    while stack:
        t = stack.pop()
        if t.id in ids:
            continue
        ids.add(t.id)
        stack.extend(children[t.id])
    return ids


def _align(sentence: str, parse: ConlluSentence) -> dict[int, tuple[int, int]]:
    """Character offsets of each token, found in order in the sentence text."""
    offsets = {}
    cursor = 0
    for t in parse.tokens:
        start = sentence.find(t.form, cursor)
        if start < 0:
            raise ConlluParseError(
                f"parse {parse.sent_id!r}: token {t.form!r} not found in {sentence!r}"
            )
        offsets[t.id] = (start, start + len(t.form))
        cursor = start + len(t.form)
    return offsets
