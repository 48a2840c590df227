"""
Deterministic synthetic corpora, so tests and demos can run end to end
against the stub backend without a model.

Every sentence is "<entity> <verb> the <adjective> <noun>.", so the subject
chunk is the only mention and the masked text is known up front. Each masked
text gets a stub distribution producing a chosen score, and each sentence can
be written out with a gold dependency parse.
"""

from __future__ import annotations

import datetime
import itertools
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import orjson

from anthroscan._utils import write_jsonl
from anthroscan.scoring import DEFAULT_INVENTORY, PLACEHOLDER, PronounInventory
from anthroscan.text import Document, Source

# Verbs of strongly anthropomorphic, strongly non-anthropomorphic and neutral
# sentences.
HIGH_VERBS = (
    "learn", "guide", "fool", "decide", "struggle", "understand", "mislead", "assist",
)  # fmt: skip
LOW_VERBS = (
    "propose", "present", "develop", "evaluate", "introduce", "adopt", "use", "compare",
)  # fmt: skip
MID_VERBS = ("show", "achieve", "provide", "demonstrate", "suggest", "find")

# (surface, plural?)
ARTIFACT_SUBJECTS = (
    ("The model", False),
    ("The system", False),
    ("The algorithm", False),
    ("These networks", True),
    ("The framework", False),
    ("Our approach", False),
    ("The models", True),
)
LM_SUBJECTS = (
    ("The language model", False),
    ("The language models", True),
    ("Large language models", True),
)

_ADJECTIVES = (
    "quiet narrow bright hidden ancient rural coastal dense sparse noisy sudden "
    "steady broad faint remote urban frozen humid rapid gentle harsh shallow "
    "distant fragile hollow minor vivid stable subtle rigid"
).split()
_NOUNS = (
    "harbor valley glacier orchard canyon lagoon meadow estuary plateau delta "
    "reef tundra prairie marsh fjord savanna dune crater basin ridge archipelago "
    "peninsula wetland grove cliff summit volcano island forest river"
).split()

_CATEGORIES = (["cs.LG"], ["cs.CV"], ["stat.ME"])

# Part of speech and dependency relation of each non-head word of a subject.
_MODIFIERS = {
    "the": ("DET", "det"),
    "these": ("DET", "det"),
    "our": ("PRON", "nmod:poss"),
    "large": ("ADJ", "amod"),
    "language": ("NOUN", "compound"),
}

HIGH_SCORES = (1.3, 2.3)
LOW_SCORES = (-2.8, -1.8)
MID_SCORES = (-0.15, 0.15)
# Added to high and low scores of news documents and language-model entities.
HIGH_BOOST = 0.4
LOW_BOOST = 0.6


@dataclass(frozen=True)
class PlantedSentence:
    subject: str
    plural: bool
    verb: str
    adjective: str
    noun: str

    @property
    def predicate(self) -> str:
        form = self.verb if self.plural else _third_person(self.verb)
        if self.verb == "struggle":
            form += " with"
        return f"{form} the {self.adjective} {self.noun}."

    @property
    def text(self) -> str:
        return f"{self.subject} {self.predicate}"

    @property
    def masked(self) -> str:
        return f"{PLACEHOLDER} {self.predicate}"

    @property
    def gold_triple(self) -> tuple[str, str, str | None]:
        """(subject chunk, verb lemma, object chunk)"""
        obj = None if self.verb == "struggle" else f"the {self.adjective} {self.noun}"
        return self.subject, self.verb, obj

    def to_conllu(self, sent_id: str) -> str:
        subject_words = self.subject.split()
        head = len(subject_words)
        verb_id = head + 1
        rows = []
        for i, w in enumerate(subject_words[:-1], start=1):
            upos, deprel = _MODIFIERS[w.lower()]
            rows.append((i, w, w.lower(), upos, head, deprel))
        rows.append((head, subject_words[-1], subject_words[-1].lower(), "NOUN", verb_id, "nsubj"))
        form = self.predicate.split()[0]
        rows.append((verb_id, form, self.verb, "VERB", 0, "root"))

        i = verb_id + 1
        noun_id = i + 2
        object_relation = "obj"
        if self.verb == "struggle":
            rows.append((i, "with", "with", "ADP", i + 3, "case"))
            i += 1
            noun_id += 1
            object_relation = "obl"
        rows.append((i, "the", "the", "DET", noun_id, "det"))
        rows.append((i + 1, self.adjective, self.adjective, "ADJ", noun_id, "amod"))
        rows.append((noun_id, self.noun, self.noun, "NOUN", verb_id, object_relation))
        rows.append((noun_id + 1, ".", ".", "PUNCT", verb_id, "punct"))

        lines = [f"# sent_id = {sent_id}", f"# text = {self.text}"]
        lines.extend(
            "\t".join(str(c) for c in (tid, w, lemma, upos, "_", "_", h, rel, "_", "_"))
            for tid, w, lemma, upos, h, rel in rows
        )
        return "\n".join(lines) + "\n\n"


@dataclass(frozen=True)
class SyntheticCorpus:
    documents: tuple[Document, ...]
    # (doc_id, sentence_index) -> sentence.
    sentences: Mapping[tuple[str, int], PlantedSentence]
    # masked text -> pronoun -> probability, for a `per_text` stub.
    distributions: Mapping[str, Mapping[str, float]]
    # masked text -> the score its distribution was built for.
    targets: Mapping[str, float] = field(default_factory=dict)
    # masked text -> "high", "low" or "mid".
    bands: Mapping[str, str] = field(default_factory=dict)
    planted_duplicates: int = 0

    def stub_table(self) -> dict:
        return {"texts": {k: dict(v) for k, v in self.distributions.items()}}

    def write(self, directory: Path) -> tuple[Path, Path]:
        """Write corpus.jsonl and stub_table.json, returning both paths."""
        directory = Path(directory)
        corpus_path = directory / "corpus.jsonl"
        table_path = directory / "stub_table.json"
        write_jsonl(corpus_path, (d.to_dict() for d in self.documents))
        table_path.write_bytes(orjson.dumps(self.stub_table(), option=orjson.OPT_SORT_KEYS))
        return corpus_path, table_path

    def write_parses(self, directory: Path) -> Path:
        """Write gold parses of every sentence, returning the manifest path."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        rows = []
        with (directory / "parses.conllu").open("w", encoding="utf-8") as f:
            for (doc_id, sentence_index), sentence in sorted(self.sentences.items()):
                sent_id = f"{doc_id}-{sentence_index}"
                f.write(sentence.to_conllu(sent_id))
                rows.append(
                    {
                        "doc_id": doc_id,
                        "sentence_index": sentence_index,
                        "path": "parses.conllu",
                        "sent_id": sent_id,
                    }
                )
        manifest = directory / "parses.jsonl"
        write_jsonl(manifest, rows)
        return manifest


def pronoun_distribution(
    score: float, inventory: PronounInventory = DEFAULT_INVENTORY
) -> dict[str, float]:
    """
    Per-pronoun probabilities whose human/non-human log-ratio is `score`.

    >>> d = pronoun_distribution(0.0)
    >>> round(sum(d[w] for w in DEFAULT_INVENTORY.human), 12)
    0.6
    """
    if score >= 0:
        p_human, p_non_human = 0.6, 0.6 * math.exp(-score)
    else:
        p_human, p_non_human = 0.6 * math.exp(score), 0.6
    return {
        **{w: p_human / len(inventory.human) for w in inventory.human},
        **{w: p_non_human / len(inventory.non_human) for w in inventory.non_human},
    }


def _third_person(verb: str) -> str:
    """
    >>> _third_person('learn'), _third_person('guide'), _third_person('approach')
    ('learns', 'guides', 'approaches')
    """
    if verb.endswith(("s", "sh", "ch", "x")):
        return verb + "es"
    return verb + "s"


class _VerbPicker:
    """
    Round-robin verbs per band. One in ten high or low sentences takes a verb
    of the opposite band, and half the mid sentences take a high or low verb,
    so every compared verb also has prior counts.
    """

    def __init__(self) -> None:
        self.counts = {"high": 0, "low": 0, "mid": 0}

    def __call__(self, band: str) -> str:
        n = self.counts[band]
        self.counts[band] += 1
        if band == "mid":
            if n % 2:
                mixed = HIGH_VERBS + LOW_VERBS
                return mixed[(n // 2) % len(mixed)]
            return MID_VERBS[(n // 2) % len(MID_VERBS)]
        own, other = (HIGH_VERBS, LOW_VERBS) if band == "high" else (LOW_VERBS, HIGH_VERBS)
        if n % 10 == 9:
            return other[(n // 10) % len(other)]
        return own[(n - n // 10) % len(own)]


def synthetic_corpus(
    n_docs: int = 200,
    sentences_per_doc: int = 4,
    seed: int = 0,
    planted_duplicates: int = 5,
) -> SyntheticCorpus:
    """
    A corpus of papers and news in which news documents and language-model
    entities score higher, and high, low and mid scores each come with their
    own verbs. No score falls between the mid band and the high or low band.

    Every fourth document (from the second) is a language-model paper, and
    every fourth (from the fourth) a news item. The last `planted_duplicates`
    documents repeat, verbatim, the first sentence of the earliest documents
    that aren't about language models, so the duplicates never change which
    documents mention one.
    """
    if n_docs * sentences_per_doc > len(_ADJECTIVES) * len(_NOUNS):
        raise ValueError("not enough distinct objects for that many sentences")
    if planted_duplicates > n_docs // 2:
        raise ValueError("too many duplicates for the number of documents")

    rng = np.random.default_rng(seed)
    objects = list(itertools.product(_ADJECTIVES, _NOUNS))
    order = rng.permutation(len(objects))
    pick_verb = _VerbPicker()

    documents: list[Document] = []
    sentences: dict[tuple[str, int], PlantedSentence] = {}
    distributions: dict[str, dict[str, float]] = {}
    targets: dict[str, float] = {}
    bands: dict[str, str] = {}
    repeatable: list[PlantedSentence] = []

    next_object = 0
    for i in range(n_docs):
        doc_id = f"synth-{i:03d}"
        is_news = i % 4 == 3
        is_lm_paper = i % 4 == 1
        planted = []
        for j in range(sentences_per_doc):
            lm_subject = is_lm_paper and j % 2 == 0
            pool = LM_SUBJECTS if lm_subject else ARTIFACT_SUBJECTS
            subject, plural = pool[int(rng.integers(len(pool)))]
            boosted = is_news or lm_subject

            band = str(
                rng.choice(
                    ["high", "low", "mid"],
                    p=[0.45, 0.30, 0.25] if boosted else [0.25, 0.50, 0.25],
                )
            )
            if band == "high":
                score = rng.uniform(*HIGH_SCORES) + (HIGH_BOOST if boosted else 0.0)
            elif band == "low":
                score = rng.uniform(*LOW_SCORES) + (LOW_BOOST if boosted else 0.0)
            else:
                score = rng.uniform(*MID_SCORES)

            adjective, noun = objects[order[next_object]]
            next_object += 1
            sentence = PlantedSentence(subject, plural, pick_verb(band), adjective, noun)

            distributions[sentence.masked] = pronoun_distribution(float(score))
            targets[sentence.masked] = float(score)
            bands[sentence.masked] = band
            planted.append(sentence)
        if not is_lm_paper:
            repeatable.append(planted[0])

        if i >= n_docs - planted_duplicates:
            planted.append(repeatable[i - (n_docs - planted_duplicates)])

        if is_news:
            source, categories, title = Source.NEWS, [], None
        elif is_lm_paper:
            source, categories, title = Source.PAPERS, ["cs.CL"], "Evaluating language models"
        else:
            source, categories, title = Source.PAPERS, _CATEGORIES[i % 3], None
        for j, sentence in enumerate(planted):
            sentences[(doc_id, j)] = sentence
        documents.append(
            Document(
                doc_id=doc_id,
                text=" ".join(s.text for s in planted),
                title=title,
                date=datetime.date(2016 + i % 7, 1 + i % 12, 1),
                categories=tuple(categories),
                source=source,
            )
        )

    return SyntheticCorpus(
        documents=tuple(documents),
        sentences=sentences,
        distributions=distributions,
        targets=targets,
        bands=bands,
        planted_duplicates=planted_duplicates,
    )


def ablation_corpus(
    n_sentences: int = 50, seed: int = 1, inventory: PronounInventory = DEFAULT_INVENTORY
) -> SyntheticCorpus:
    """
    Five-sentence documents whose pronoun probabilities vary pronoun by
    pronoun, so removing any one pronoun changes the scores.
    """
    rng = np.random.default_rng(seed)
    objects = list(itertools.product(_ADJECTIVES, _NOUNS))
    order = rng.permutation(len(objects))
    verbs = HIGH_VERBS + LOW_VERBS + MID_VERBS
    subjects = ARTIFACT_SUBJECTS + LM_SUBJECTS

    documents = []
    sentences: dict[tuple[str, int], PlantedSentence] = {}
    distributions: dict[str, dict[str, float]] = {}
    for start in range(0, n_sentences, 5):
        doc_id = f"ablate-{start // 5:02d}"
        planted = []
        for k in range(start, min(start + 5, n_sentences)):
            subject, plural = subjects[k % len(subjects)]
            adjective, noun = objects[order[k]]
            sentence = PlantedSentence(subject, plural, verbs[k % len(verbs)], adjective, noun)
            distributions[sentence.masked] = {
                w: float(rng.uniform(0.001, 0.05)) for w in inventory.pronouns
            }
            sentences[(doc_id, k - start)] = sentence
            planted.append(sentence)
        documents.append(
            Document(
                doc_id=doc_id,
                text=" ".join(s.text for s in planted),
                source=Source.PAPERS,
            )
        )
    return SyntheticCorpus(
        documents=tuple(documents), sentences=sentences, distributions=distributions
    )
