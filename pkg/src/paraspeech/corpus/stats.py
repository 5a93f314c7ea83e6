"""Corpus-level statistics: text length and duration distributions."""

from __future__ import annotations

import wave
from dataclasses import dataclass, field

import numpy as np

from paraspeech.corpus.records import CorpusManifest


def _summary(values: list[float]) -> dict[str, float]:
    arr = np.asarray(values, dtype=np.float64)
    return {
        "count": int(arr.size),
        "mean": float(arr.mean()),
        "std": float(arr.std()),
        "min": float(arr.min()),
        "median": float(np.median(arr)),
        "max": float(arr.max()),
    }


@dataclass
class StatsReport:
    """Distributions and means over a manifest.

    Character counts are phone counts for synthetic corpora; the report
    labels them as a character proxy.
    """

    n_paragraphs: int
    n_sentences: int
    sentences_per_paragraph: dict[str, float]
    sentences_per_paragraph_hist: dict[int, int]
    chars_per_sentence: dict[str, float]
    chars_per_paragraph: dict[str, float]
    sentence_duration_s: dict[str, float]
    paragraph_duration_s: dict[str, float]
    notes: list[str] = field(default_factory=list)

    def kv_lines(self) -> list[str]:
        lines = [
            f"n_paragraphs = {self.n_paragraphs}",
            f"n_sentences = {self.n_sentences}",
        ]
        groups = {
            "sentences_per_paragraph": self.sentences_per_paragraph,
            "chars_per_sentence": self.chars_per_sentence,
            "chars_per_paragraph": self.chars_per_paragraph,
            "sentence_duration_s": self.sentence_duration_s,
            "paragraph_duration_s": self.paragraph_duration_s,
        }
        for name, summ in groups.items():
            for k, v in summ.items():
                lines.append(f"{name}.{k} = {v:.6g}")
        for count in sorted(self.sentences_per_paragraph_hist):
            lines.append(
                f"sentences_per_paragraph.hist.{count} = "
                f"{self.sentences_per_paragraph_hist[count]}"
            )
        for note in self.notes:
            lines.append(f"note = {note}")
        return lines

    def table(self) -> str:
        rows = [
            ("quantity", "mean", "std", "min", "median", "max"),
            ("-" * 26, "-" * 8, "-" * 8, "-" * 8, "-" * 8, "-" * 8),
        ]
        groups = [
            ("sentences / paragraph", self.sentences_per_paragraph),
            ("chars* / sentence", self.chars_per_sentence),
            ("chars* / paragraph", self.chars_per_paragraph),
            ("sentence duration (s)", self.sentence_duration_s),
            ("paragraph duration (s)", self.paragraph_duration_s),
        ]
        for name, s in groups:
            rows.append(
                (
                    name,
                    f"{s['mean']:.3f}",
                    f"{s['std']:.3f}",
                    f"{s['min']:.3f}",
                    f"{s['median']:.3f}",
                    f"{s['max']:.3f}",
                )
            )
        widths = [max(len(r[i]) for r in rows) for i in range(6)]
        out = []
        for r in rows:
            out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        out.append("")
        out.append(f"paragraphs: {self.n_paragraphs}, sentences: {self.n_sentences}")
        for note in self.notes:
            out.append(f"* {note}")
        return "\n".join(out) + "\n"


def _wav_duration_s(path: str) -> float:
    with wave.open(path, "rb") as fh:
        return fh.getnframes() / fh.getframerate()


def corpus_stats(manifest: CorpusManifest) -> StatsReport:
    sent_counts = [len(p.sentences) for p in manifest.paragraphs]
    chars_sent = [s.char_count for p in manifest.paragraphs for s in p.sentences]
    chars_par = [sum(s.char_count for s in p.sentences) for p in manifest.paragraphs]
    dur_sent = [s.duration_s for p in manifest.paragraphs for s in p.sentences]
    dur_par = [_wav_duration_s(manifest.resolve_audio(p)) for p in manifest.paragraphs]
    hist: dict[int, int] = {}
    for c in sent_counts:
        hist[c] = hist.get(c, 0) + 1
    return StatsReport(
        n_paragraphs=len(manifest.paragraphs),
        n_sentences=sum(sent_counts),
        sentences_per_paragraph=_summary([float(c) for c in sent_counts]),
        sentences_per_paragraph_hist=hist,
        chars_per_sentence=_summary([float(c) for c in chars_sent]),
        chars_per_paragraph=_summary([float(c) for c in chars_par]),
        sentence_duration_s=_summary(dur_sent),
        paragraph_duration_s=_summary(dur_par),
        notes=["char counts are phone counts (character proxy for synthetic data)"],
    )
