"""Paragraph/sentence data model, manifest I/O, position coding, synthetic
corpus generation and corpus statistics."""

from paraspeech.corpus.records import (
    BOUNDARY_SYMBOL,
    PAD_SYMBOL,
    CorpusManifest,
    ParagraphRecord,
    PhonemeSequence,
    PositionCode,
    SentenceRecord,
    build_paragraph_sequence,
    load_manifest,
    paragraph_alignment,
    paragraph_sentence_spans,
    save_manifest,
    sentence_position_codes,
)
from paraspeech.corpus.stats import StatsReport, corpus_stats
from paraspeech.corpus.synthetic import SynthConfig, generate_synthetic_corpus

__all__ = [
    "BOUNDARY_SYMBOL",
    "PAD_SYMBOL",
    "CorpusManifest",
    "ParagraphRecord",
    "PhonemeSequence",
    "PositionCode",
    "SentenceRecord",
    "StatsReport",
    "SynthConfig",
    "build_paragraph_sequence",
    "corpus_stats",
    "generate_synthetic_corpus",
    "load_manifest",
    "paragraph_alignment",
    "paragraph_sentence_spans",
    "save_manifest",
    "sentence_position_codes",
]
