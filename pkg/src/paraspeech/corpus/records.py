"""Core corpus records and manifest I/O.

The manifest is line-delimited JSON. Line 1 is a header record:

    {"schema": "paraspeech-manifest-v1", "symbol_table": {"<pad>": 0, ...}}

Every following line is one paragraph record:

    {"paragraph_id": str, "split": "train"|"test", "audio_path": str,
     "sample_rate": int,
     "sentences": [{"phonemes": [symbol, ...],
                    "alignment": [[start_s, end_s], ...],
                    "syllables": [[start_phone, end_phone), ...],
                    "char_count": int (optional)}, ...]}

`audio_path` is resolved relative to the manifest file. Alignment times are
seconds, absolute within the paragraph audio. Syllable spans are half-open
phone-index ranges and must partition [0, n_phones).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from paraspeech.errors import ManifestError

MANIFEST_SCHEMA = "paraspeech-manifest-v1"

PAD_SYMBOL = "<pad>"
BOUNDARY_SYMBOL = "<sil>"

# Relative slack for float comparisons on alignment times.
_TIME_EPS = 1e-9


@dataclass(frozen=True)
class PhonemeSequence:
    """Integer-ID phoneme sequence over a declared symbol table."""

    ids: tuple[int, ...]

    def __post_init__(self):
        if len(self.ids) < 1:
            raise ManifestError("phoneme sequence must contain at least one symbol")

    def __len__(self) -> int:
        return len(self.ids)


@dataclass
class SentenceRecord:
    phonemes: PhonemeSequence
    symbols: list[str]
    char_count: int
    position_index: int
    audio_span: tuple[float, float]
    alignment: list[tuple[float, float]]
    syllable_map: list[tuple[int, int]]

    @property
    def duration_s(self) -> float:
        return self.audio_span[1] - self.audio_span[0]


@dataclass
class ParagraphRecord:
    id: str
    sentences: list[SentenceRecord]
    audio_path: str
    sample_rate: int
    split: str = "train"

    def __post_init__(self):
        if not self.sentences:
            raise ManifestError(f"paragraph {self.id!r} has no sentences")


@dataclass(frozen=True)
class PositionCode:
    """Sentence position within its paragraph: 0 first, 1 interior, 2 last."""

    code: int

    def __post_init__(self):
        if self.code not in (0, 1, 2):
            raise ValueError(f"position code must be 0, 1 or 2, got {self.code}")

    @property
    def one_hot(self) -> tuple[int, int, int]:
        vec = [0, 0, 0]
        vec[self.code] = 1
        return tuple(vec)


@dataclass
class CorpusManifest:
    paragraphs: list[ParagraphRecord]
    symbol_table: dict[str, int]
    root: str = "."

    def resolve_audio(self, p: ParagraphRecord) -> str:
        return os.path.normpath(os.path.join(self.root, p.audio_path))

    def split_paragraphs(self, split: str) -> list[ParagraphRecord]:
        return [p for p in self.paragraphs if p.split == split]

    @property
    def boundary_id(self) -> int:
        if BOUNDARY_SYMBOL not in self.symbol_table:
            raise ManifestError(f"symbol table lacks the boundary symbol {BOUNDARY_SYMBOL!r}")
        return self.symbol_table[BOUNDARY_SYMBOL]


def sentence_position_codes(p: ParagraphRecord) -> list[PositionCode]:
    """First sentence is 0, last is 2, interior ones are 1.

    A single-sentence paragraph takes code 0: first position dominates
    because the paragraph-initial reset is the strongest positional cue.
    """
    n = len(p.sentences)
    codes = []
    for i in range(n):
        if i == 0:
            codes.append(PositionCode(0))
        elif i == n - 1:
            codes.append(PositionCode(2))
        else:
            codes.append(PositionCode(1))
    return codes


def build_paragraph_sequence(p: ParagraphRecord, boundary_id: int | None) -> PhonemeSequence:
    """Concatenate sentence phoneme sequences in order.

    When `boundary_id` is given, one boundary-silence symbol is inserted
    between consecutive sentences; `None` disables insertion. The returned
    length defines the paragraph phoneme length m.
    """
    ids: list[int] = []
    for i, s in enumerate(p.sentences):
        if i > 0 and boundary_id is not None:
            ids.append(boundary_id)
        ids.extend(s.phonemes.ids)
    return PhonemeSequence(tuple(ids))


def paragraph_sentence_spans(p: ParagraphRecord, with_boundary: bool) -> list[tuple[int, int]]:
    """Half-open row spans of each sentence's own phones inside the
    paragraph sequence built by :func:`build_paragraph_sequence`.

    Boundary symbols (when enabled) sit between spans and belong to none.
    """
    spans = []
    pos = 0
    for i, s in enumerate(p.sentences):
        if i > 0 and with_boundary:
            pos += 1
        spans.append((pos, pos + len(s.phonemes)))
        pos += len(s.phonemes)
    return spans


def paragraph_alignment(p: ParagraphRecord, with_boundary: bool) -> list[tuple[float, float]]:
    """Per-phone (start_s, end_s) spans for the full paragraph sequence.

    Boundary symbols take the gap between the surrounding sentences'
    audio spans, which is exactly the inter-sentence pause.
    """
    spans: list[tuple[float, float]] = []
    for i, s in enumerate(p.sentences):
        if i > 0 and with_boundary:
            prev_end = p.sentences[i - 1].audio_span[1]
            spans.append((prev_end, s.audio_span[0]))
        spans.extend(s.alignment)
    return spans


def _validate_sentence(pid: str, idx: int, sent: SentenceRecord, n_symbols: int) -> None:
    where = f"paragraph {pid!r} sentence {idx}"
    n = len(sent.phonemes)
    for sid in sent.phonemes.ids:
        if not 0 <= sid < n_symbols:
            raise ManifestError(f"{where}: phoneme id {sid} outside symbol table")
    if len(sent.alignment) != n:
        raise ManifestError(
            f"{where}: alignment length {len(sent.alignment)} != phoneme count {n}"
        )
    prev_end = None
    for j, (a, b) in enumerate(sent.alignment):
        if b < a - _TIME_EPS:
            raise ManifestError(f"{where}: phone {j} span ends before it starts")
        if prev_end is not None and a < prev_end - _TIME_EPS:
            raise ManifestError(f"{where}: phone {j} overlaps the previous phone")
        prev_end = b
    # syllable spans must partition [0, n)
    expect = 0
    for a, b in sent.syllable_map:
        if a != expect or b <= a:
            raise ManifestError(f"{where}: syllable spans do not partition the phone indices")
        expect = b
    if expect != n:
        raise ManifestError(f"{where}: syllable spans cover {expect} of {n} phones")


def _validate_manifest(m: CorpusManifest) -> None:
    ids = list(m.symbol_table.values())
    if len(set(ids)) != len(ids):
        raise ManifestError("symbol table IDs are not unique")
    n_symbols = max(ids) + 1 if ids else 0
    seen = set()
    for p in m.paragraphs:
        if p.id in seen:
            raise ManifestError(f"duplicate paragraph id {p.id!r}")
        seen.add(p.id)
        if p.split not in ("train", "test"):
            raise ManifestError(f"paragraph {p.id!r}: unknown split {p.split!r}")
        audio = m.resolve_audio(p)
        if not os.path.isfile(audio):
            raise ManifestError(f"paragraph {p.id!r}: audio file missing: {audio}")
        for i, s in enumerate(p.sentences):
            _validate_sentence(p.id, i, s, n_symbols)


def _sentence_from_json(obj: dict, idx: int, table: dict[str, int], pid: str) -> SentenceRecord:
    try:
        symbols = list(obj["phonemes"])
        alignment = [(float(a), float(b)) for a, b in obj["alignment"]]
        syllables = [(int(a), int(b)) for a, b in obj["syllables"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError(f"paragraph {pid!r} sentence {idx}: malformed record ({exc})")
    unknown = [s for s in symbols if s not in table]
    if unknown:
        raise ManifestError(f"paragraph {pid!r} sentence {idx}: unknown symbols {unknown}")
    ids = tuple(table[s] for s in symbols)
    if not ids:
        raise ManifestError(f"paragraph {pid!r} sentence {idx}: empty phoneme sequence")
    if not alignment:
        raise ManifestError(f"paragraph {pid!r} sentence {idx}: empty alignment")
    span = (alignment[0][0], alignment[-1][1])
    return SentenceRecord(
        phonemes=PhonemeSequence(ids),
        symbols=symbols,
        char_count=int(obj.get("char_count", len(symbols))),
        position_index=idx,
        audio_span=span,
        alignment=alignment,
        syllable_map=syllables,
    )


def load_manifest(path: str) -> CorpusManifest:
    """Load and fully validate a manifest file.

    Raises FileNotFoundError for a missing file and ManifestError (naming
    the offending paragraph/sentence) for any invariant violation.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise ManifestError(f"manifest {path!r} is empty")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path!r}: bad header line ({exc})")
    if header.get("schema") != MANIFEST_SCHEMA:
        raise ManifestError(f"manifest {path!r}: unknown schema {header.get('schema')!r}")
    table = {str(k): int(v) for k, v in header.get("symbol_table", {}).items()}
    if not table:
        raise ManifestError(f"manifest {path!r}: empty symbol table")

    paragraphs = []
    for ln in lines[1:]:
        try:
            obj = json.loads(ln)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"manifest {path!r}: bad record line ({exc})")
        pid = str(obj.get("paragraph_id", "<missing id>"))
        try:
            sentences = [
                _sentence_from_json(s, i, table, pid)
                for i, s in enumerate(obj["sentences"])
            ]
            paragraphs.append(
                ParagraphRecord(
                    id=pid,
                    sentences=sentences,
                    audio_path=str(obj["audio_path"]),
                    sample_rate=int(obj["sample_rate"]),
                    split=str(obj.get("split", "train")),
                )
            )
        except KeyError as exc:
            raise ManifestError(f"paragraph {pid!r}: missing field {exc}")

    manifest = CorpusManifest(
        paragraphs=paragraphs, symbol_table=table, root=os.path.dirname(os.path.abspath(path))
    )
    _validate_manifest(manifest)
    return manifest


def save_manifest(manifest: CorpusManifest, path: str) -> None:
    records = [{"schema": MANIFEST_SCHEMA, "symbol_table": manifest.symbol_table}]
    for p in manifest.paragraphs:
        records.append(
            {
                "paragraph_id": p.id,
                "split": p.split,
                "audio_path": p.audio_path,
                "sample_rate": p.sample_rate,
                "sentences": [
                    {
                        "phonemes": s.symbols,
                        "alignment": [[a, b] for a, b in s.alignment],
                        "syllables": [[a, b] for a, b in s.syllable_map],
                        "char_count": s.char_count,
                    }
                    for s in p.sentences
                ],
            }
        )
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
