"""
Tokens, closed word classes and a conservative verb lemmatizer.

Nothing here knows parts of speech. Words are classified only when they
belong to a small closed class (determiners, pronouns, auxiliaries, ...).
Everything else is a plain WORD, which the triple finder interprets by
position and morphology.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources


class Kind(Enum):
    WORD = "word"
    DET = "det"
    PRON = "pron"
    AUX = "aux"
    MODAL = "modal"
    ADV = "adv"
    PREP = "prep"
    CONJ = "conj"
    SUBORD = "subord"
    REL = "rel"
    TO = "to"
    PART = "part"
    PUNCT = "punct"


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    kind: Kind

    @property
    def lower(self) -> str:
        return self.text.lower()


# Words, numbers, hyphenated compounds and contractions stay whole;
# everything else is one punctuation character.
_TOKEN = re.compile(r"[^\W_](?:[\w’'.\-]*[^\W_])?|[^\w\s]")

DETERMINERS = frozenset(
    "a an the this that these those our their its his her my your some any "
    "each every all both no another such several many most more few other "
    "various".split()
)
SUBJECT_PRONOUNS = frozenset("i we they you he she".split())
PRONOUNS = SUBJECT_PRONOUNS | frozenset("it them us me him one itself themselves".split())
AUXILIARIES = {
    "be": "be", "am": "be", "is": "be", "are": "be", "was": "be", "were": "be",
    "been": "be", "being": "be", "isn't": "be", "aren't": "be", "wasn't": "be",
    "weren't": "be",
    "have": "have", "has": "have", "had": "have", "having": "have",
    "hasn't": "have", "haven't": "have", "hadn't": "have",
    "do": "do", "does": "do", "did": "do", "don't": "do", "doesn't": "do",
    "didn't": "do",
}  # fmt: skip
MODALS = frozenset(
    "can could may might must shall should will would cannot can't couldn't "
    "won't wouldn't shouldn't mustn't".split()
)
ADVERBS = frozenset(
    "not also often only still even just then thus hence therefore however "
    "already always never sometimes now further first again yet very much "
    "well rather instead moreover furthermore meanwhile too".split()
)
# -ly words that are not adverbs.
_NOT_ADVERBS = frozenset(
    "apply supply reply rely imply multiply comply family assembly anomaly "
    "early fly ally italy july monopoly".split()
)
PREPOSITIONS = frozenset(
    "in on at by for with from of into onto over under about against between "
    "through during without within across after before among around towards "
    "toward via per upon than including despite beyond like".split()
)
CONJUNCTIONS = frozenset("and or but nor".split())
SUBORDINATORS = frozenset(
    "when while whether if because although though since unless until where "
    "whereas as so".split()
)
RELATIVES = frozenset("who which whom whose".split())
PARTICLES = frozenset("up out off down away back".split())

NOUN_SUFFIXES = (
    "tion", "tions", "sion", "sions", "ment", "ments", "ness", "nesses",
    "ity", "ities", "ism", "isms", "ship", "ships", "ology", "ologies", "ics",
)  # fmt: skip
ADJECTIVE_SUFFIXES = (
    "al", "ic", "ive", "ous", "ful", "less", "able", "ible", "ary", "ent",
    "ant", "ical",
)  # fmt: skip


def tokenize(sentence: str) -> list[Token]:
    """
    >>> [t.text for t in tokenize("The CNN-based model doesn't work, e.g. here.")]
    ['The', 'CNN-based', 'model', "doesn't", 'work', ',', 'e.g', '.', 'here', '.']
    """
    tokens = []
    for m in _TOKEN.finditer(sentence):
        text = m.group()
        tokens.append(Token(text, m.start(), m.end(), classify(text)))
    return tokens


def classify(word: str) -> Kind:
    """
    >>> classify('The'), classify('must'), classify('quickly'), classify('model')
    (<Kind.DET: 'det'>, <Kind.MODAL: 'modal'>, <Kind.ADV: 'adv'>, <Kind.WORD: 'word'>)
    """
    w = word.lower().replace("’", "'")
    if not w[0].isalnum():
        return Kind.PUNCT
    if w == "to":
        return Kind.TO
    if w in AUXILIARIES:
        return Kind.AUX
    if w in MODALS:
        return Kind.MODAL
    if w in DETERMINERS:
        return Kind.DET
    if w in PRONOUNS:
        return Kind.PRON
    if w in PREPOSITIONS:
        return Kind.PREP
    if w in CONJUNCTIONS:
        return Kind.CONJ
    if w in SUBORDINATORS:
        return Kind.SUBORD
    if w in RELATIVES:
        return Kind.REL
    if w in PARTICLES:
        return Kind.PART
    if w in ADVERBS or (w.endswith("ly") and len(w) > 4 and w not in _NOT_ADVERBS):
        return Kind.ADV
    return Kind.WORD


@lru_cache(maxsize=1)
def known_verbs() -> frozenset[str]:
    """Base forms from the bundled verb list."""
    text = resources.files("anthroscan.data").joinpath("lexicons/verbs.txt").read_text()
    return frozenset(
        line.strip().lower()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    )


IRREGULAR_VERBS = {
    "was": "be", "were": "be", "is": "be", "are": "be", "am": "be",
    "been": "be", "being": "be", "has": "have", "had": "have",
    "having": "have", "does": "do", "did": "do", "done": "do",
    "arose": "arise", "arisen": "arise", "ate": "eat", "beat": "beat",
    "beaten": "beat", "became": "become", "began": "begin", "begun": "begin",
    "bought": "buy", "broke": "break", "broken": "break", "brought": "bring",
    "built": "build", "caught": "catch", "chose": "choose", "chosen": "choose",
    "came": "come", "dealt": "deal", "drew": "draw", "drawn": "draw",
    "drove": "drive", "driven": "drive", "fed": "feed", "fell": "fall",
    "fallen": "fall", "felt": "feel", "fought": "fight", "found": "find",
    "forgot": "forget", "forgotten": "forget", "gave": "give", "given": "give",
    "got": "get", "gotten": "get", "went": "go", "gone": "go", "grew": "grow",
    "grown": "grow", "held": "hold", "hid": "hide", "hidden": "hide",
    "kept": "keep", "knew": "know", "known": "know", "led": "lead",
    "learnt": "learn", "left": "leave", "lost": "lose", "made": "make",
    "meant": "mean", "met": "meet", "misled": "mislead", "overcame": "overcome",
    "paid": "pay", "ran": "run", "rose": "rise", "risen": "rise",
    "said": "say", "saw": "see", "seen": "see", "sent": "send", "sold": "sell",
    "sought": "seek", "spent": "spend", "spoke": "speak", "spoken": "speak",
    "stood": "stand", "struck": "strike", "taught": "teach", "took": "take",
    "taken": "take", "thought": "think", "told": "tell",
    "understood": "understand", "undertook": "undertake", "undergone": "undergo",
    "underwent": "undergo", "won": "win", "wrote": "write", "written": "write",
    "can't": "can", "won't": "will", "isn't": "be", "aren't": "be",
    "wasn't": "be", "weren't": "be", "don't": "do", "doesn't": "do",
    "didn't": "do", "hasn't": "have", "haven't": "have", "hadn't": "have",
}  # fmt: skip

# Past forms that don't end in -ed.
IRREGULAR_PAST = frozenset(
    w for w, lemma in IRREGULAR_VERBS.items() if lemma not in ("be", "have", "do")
    and "'" not in w and not w.endswith("ing")
)

# Stem endings after which a dropped final "e" is restored: evaluat(ed) -> evaluate.
_E_ENDINGS = (
    "at", "iz", "yz", "bl", "cl", "dl", "gl", "pl", "tl", "us", "uc", "iv",
    "ov", "av", "ev", "dg", "rg", "nc", "rc", "ut", "ur", "ir", "id",
)  # fmt: skip


def lemmatize_verb(word: str) -> str:
    """
    Reduce an inflected verb to its base form.

    >>> [lemmatize_verb(w) for w in ['rejects', 'demonstrated', 'using', 'was', 'studies']]
    ['reject', 'demonstrate', 'use', 'be', 'study']
    >>> [lemmatize_verb(w) for w in ['approaches', 'stopped', 'running', 'embed', 'fools']]
    ['approach', 'stop', 'run', 'embed', 'fool']
    >>> [lemmatize_verb(w) for w in ['found', 'evaluated', 'achieves', 'learned']]
    ['find', 'evaluate', 'achieve', 'learn']
    """
    w = word.lower().replace("’", "'")
    if w in IRREGULAR_VERBS:
        return IRREGULAR_VERBS[w]
    known = known_verbs()
    if w in known:
        return w

    if len(w) > 4 and w.endswith(("ies", "ied")):
        return w[:-3] + "y"
    if len(w) > 4 and w.endswith("ing"):
        return _restore_stem(w[:-3])
    if len(w) > 4 and w.endswith("ed"):
        return _restore_stem(w[:-2])
    if len(w) > 3 and w.endswith("es"):
        stem = w[:-2]
        if stem in known:
            return stem
        if w[:-1] in known:
            return w[:-1]
        if stem.endswith(("s", "x", "z", "ch", "sh", "o")):
            return stem
        return w[:-1]
    if len(w) > 2 and w.endswith("s") and not w.endswith(("ss", "us", "is")):
        return w[:-1]
    return w


def _restore_stem(stem: str) -> str:
    known = known_verbs()
    undoubled = None
    if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in "lsz":
        undoubled = stem[:-1]

    for candidate in (stem, stem + "e", undoubled):
        if candidate and candidate in known:
            return candidate
    if undoubled:
        return undoubled
    if stem.endswith(_E_ENDINGS):
        return stem + "e"
    return stem


def has_verb_morphology(word: str) -> bool:
    """
    Inflected like a verb (-ed, -ing, or an irregular past).

    >>> has_verb_morphology('developed'), has_verb_morphology('algorithm')
    (True, False)
    """
    w = word.lower()
    return (
        (len(w) > 4 and w.endswith("ed"))
        or (len(w) > 4 and w.endswith("ing"))
        or w in IRREGULAR_PAST
    )


def is_plural_noun_form(word: str) -> bool:
    """
    >>> is_plural_noun_form('models'), is_plural_noun_form('business'), is_plural_noun_form('job')
    (True, False, False)
    """
    w = word.lower()
    return len(w) > 2 and w.endswith("s") and not w.endswith(("ss", "us", "is"))


def has_noun_suffix(word: str) -> bool:
    return word.lower().endswith(NOUN_SUFFIXES)


def has_adjective_suffix(word: str) -> bool:
    return word.lower().endswith(ADJECTIVE_SUFFIXES)
