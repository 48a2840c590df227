from ._conllu import ConlluSentence, ConlluToken, load_parses, parse_conllu, read_conllu
from ._documents import Document, Source, iter_corpus, parse_date, read_corpus
from ._lexicon import BUNDLED_LEXICONS, EntityLexicon, load_lexicon, read_word_list
from ._mentions import (
    Mention,
    deduplicate,
    filter_lm_documents,
    find_entity_mentions,
    mask_mention,
    merge_mentions,
)
from ._sentences import split_sentences
from ._triples import AnalysisSource, Chunk, SemanticTriple, extract_triples
from ._words import has_verb_morphology, lemmatize_verb, tokenize
from .pipeline import build_masked_corpus, document_triples, extract_masked_sentences

__all__ = (
    "BUNDLED_LEXICONS",
    "AnalysisSource",
    "Chunk",
    "ConlluSentence",
    "ConlluToken",
    "Document",
    "EntityLexicon",
    "Mention",
    "SemanticTriple",
    "Source",
    "build_masked_corpus",
    "deduplicate",
    "document_triples",
    "extract_masked_sentences",
    "extract_triples",
    "filter_lm_documents",
    "find_entity_mentions",
    "iter_corpus",
    "has_verb_morphology",
    "lemmatize_verb",
    "load_lexicon",
    "load_parses",
    "mask_mention",
    "merge_mentions",
    "parse_conllu",
    "parse_date",
    "read_conllu",
    "read_corpus",
    "read_word_list",
    "split_sentences",
    "tokenize",
)
