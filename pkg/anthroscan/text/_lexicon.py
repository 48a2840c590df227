from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from cachetools import LRUCache, cached

from anthroscan.errors import LexiconError

BUNDLED_LEXICONS = (
    "artifact",
    "lm",
    "human",
    "lm_keywords",
    "reporting_verbs",
    "cognitive_verbs",
)


@dataclass(frozen=True)
class EntityLexicon:
    """A named set of keywords (single words or phrases) to look for."""

    name: str
    keywords: tuple[str, ...]
    match_mode: str = "case_insensitive"
    allow_plural: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "keywords", tuple(k.strip() for k in self.keywords))
        if not self.keywords:
            raise LexiconError(f"lexicon {self.name!r} has no keywords")
        if self.match_mode != "case_insensitive":
            raise LexiconError(f"unsupported match mode {self.match_mode!r}")
        seen: dict[str, str] = {}
        for k in self.keywords:
            if not k:
                raise LexiconError(f"lexicon {self.name!r} has an empty keyword")
            folded = " ".join(k.casefold().split())
            if folded in seen:
                raise LexiconError(
                    f"lexicon {self.name!r} lists {seen[folded]!r} and {k!r}, "
                    f"which are the same keyword"
                )
            seen[folded] = k

    @property
    def folded(self) -> frozenset[str]:
        return frozenset(k.casefold() for k in self.keywords)

    def head_forms(self) -> frozenset[str]:
        """
        Every word that can end a matching chunk.

        >>> sorted(EntityLexicon('t', ('language model',)).head_forms())
        ['model', 'modeles', 'models']
        """
        heads = set()
        for k in self.keywords:
            last = k.casefold().split()[-1]
            heads.add(last)
            if self.allow_plural:
                heads.update((last + "s", last + "es"))
        return frozenset(heads)

    def match_chunk(self, chunk_text: str) -> str | None:
        """
        The longest keyword that the chunk ends with, if any.

        >>> lex = EntityLexicon('t', ('model', 'language model', 'algorithm'))
        >>> lex.match_chunk('these CNN-based forensic algorithms')
        'algorithm'
        >>> lex.match_chunk("OpenAI's large language models")
        'language model'
        >>> lex.match_chunk('the modeling pipeline') is None
        True
        """
        words = chunk_text.casefold().split()
        best: str | None = None
        best_rank = (0, 0)
        for keyword in self.keywords:
            kw_words = keyword.casefold().split()
            if len(kw_words) > len(words):
                continue
            tail = words[-len(kw_words) :]
            if tail[:-1] != kw_words[:-1]:
                continue
            if not self._word_matches(tail[-1], kw_words[-1]):
                continue
            rank = (len(kw_words), len(keyword))
            if rank > best_rank:
                best, best_rank = keyword, rank
        return best

    def _word_matches(self, word: str, keyword_word: str) -> bool:
        if word == keyword_word:
            return True
        return self.allow_plural and word in (keyword_word + "s", keyword_word + "es")


def read_word_list(path: Path) -> tuple[str, ...]:
    """One entry per line. Blank lines and lines starting with '#' are ignored."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise LexiconError(f"cannot read lexicon {path}: {e}") from e
    return _parse_word_list(text)


def _parse_word_list(text: str) -> tuple[str, ...]:
    """
    >>> _parse_word_list('# comment\\nmodel\\n\\n  system  \\n')
    ('model', 'system')
    """
    return tuple(
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    )


@cached(cache=LRUCache(maxsize=32))
def load_lexicon(name_or_path: str | Path, allow_plural: bool = True) -> EntityLexicon:
    """
    A bundled lexicon by name, or a word-list file.

    >>> load_lexicon('artifact').keywords[:3]
    ('algorithm', 'system', 'model')
    """
    if isinstance(name_or_path, str) and name_or_path in BUNDLED_LEXICONS:
        text = (
            resources.files("anthroscan.data")
            .joinpath(f"lexicons/{name_or_path}.txt")
            .read_text(encoding="utf-8")
        )
        return EntityLexicon(name_or_path, _parse_word_list(text), allow_plural=allow_plural)

    path = Path(name_or_path)
    if not path.exists():
        raise LexiconError(
            f"{name_or_path!r} is neither a bundled lexicon "
            f"({', '.join(BUNDLED_LEXICONS)}) nor a file"
        )
    return EntityLexicon(path.stem, read_word_list(path), allow_plural=allow_plural)
