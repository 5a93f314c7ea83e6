"""Deterministic synthetic paragraph corpus.

Each phone renders as a short harmonic tone. Sentence-level F0, level and
speaking rate follow configurable intra-paragraph patterns:

  * declination: F0 and level fall with sentence position,
  * reset: the first sentence of a paragraph gets an extra boost,
  * edge lengthening: first and last sentences are slowed down, with an
    additional progressive slowdown so rate also declines net of the
    symmetric edge factors.

Every paragraph restarts the pattern, so across-paragraph diffs carry the
opposite sign of within-paragraph diffs by construction. Alignments are
sample-exact. Output (manifest + WAV files) is a pure function of
(config, seed) at the byte level.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

from paraspeech.corpus.records import (
    BOUNDARY_SYMBOL,
    PAD_SYMBOL,
    CorpusManifest,
    ParagraphRecord,
    PhonemeSequence,
    SentenceRecord,
    save_manifest,
)
from paraspeech.errors import ValidationError


@dataclass
class SynthConfig:
    n_paragraphs: int = 10
    sentences_min: int = 2
    sentences_max: int = 4
    phones_min: int = 4
    phones_max: int = 7
    n_symbols: int = 20          # regular phones, on top of <pad> and <sil>
    sample_rate: int = 16000
    test_fraction: float = 0.2

    base_f0_hz: float = 220.0
    f0_declination_hz: float = -8.0   # per sentence position
    f0_reset_hz: float = 12.0         # extra boost on the first sentence
    symbol_f0_spread_hz: float = 15.0

    base_level_db: float = -10.0
    level_declination_db: float = -1.5
    level_reset_db: float = 1.5
    symbol_level_spread_db: float = 0.8

    rate_slowdown: float = 0.08       # duration growth per sentence position
    edge_lengthening: float = 0.15    # extra duration at first and last sentence

    phone_dur_min_s: float = 0.060
    phone_dur_max_s: float = 0.110
    pause_min_s: float = 0.15
    pause_max_s: float = 0.35
    edge_pad_s: float = 0.05
    n_harmonics: int = 3
    fade_s: float = 0.005

    def validate(self) -> None:
        if self.n_paragraphs < 1:
            raise ValidationError("n_paragraphs must be >= 1")
        if not 1 <= self.sentences_min <= self.sentences_max:
            raise ValidationError("sentence count range invalid")
        if not 1 <= self.phones_min <= self.phones_max:
            raise ValidationError("phones-per-sentence range invalid")
        if self.n_symbols < 2:
            raise ValidationError("need at least 2 regular symbols")
        if not 0.0 <= self.test_fraction < 1.0:
            raise ValidationError("test_fraction must be in [0, 1)")
        if self.phone_dur_min_s <= 0 or self.phone_dur_max_s < self.phone_dur_min_s:
            raise ValidationError("phone duration range invalid")
        if self.pause_min_s < 0 or self.pause_max_s < self.pause_min_s:
            raise ValidationError("pause range invalid")


def _duration_scale(cfg: SynthConfig, i: int, n: int) -> float:
    edge = 1.0 + cfg.edge_lengthening if (i == 0 or i == n - 1) else 1.0
    return (1.0 + cfg.rate_slowdown * i) * edge


def _phone_tone(cfg: SynthConfig, f0: float, amp: float, n_samples: int) -> np.ndarray:
    t = np.arange(n_samples, dtype=np.float64) / cfg.sample_rate
    x = np.zeros(n_samples, dtype=np.float64)
    for k in range(1, cfg.n_harmonics + 1):
        x += (0.6 ** (k - 1)) * np.sin(2.0 * np.pi * k * f0 * t)
    x *= amp
    fade = min(int(cfg.fade_s * cfg.sample_rate), n_samples // 2)
    if fade > 0:
        ramp = 0.5 - 0.5 * np.cos(np.pi * np.arange(fade) / fade)
        x[:fade] *= ramp
        x[-fade:] *= ramp[::-1]
    return x


def generate_synthetic_corpus(cfg: SynthConfig, seed: int, out_dir: str) -> CorpusManifest:
    """Generate audio + manifest under `out_dir` and return the loaded-form
    manifest. Must be invoked once per output directory."""
    cfg.validate()
    rng = np.random.default_rng(seed)
    sr = cfg.sample_rate

    os.makedirs(os.path.join(out_dir, "audio"), exist_ok=True)

    symbol_table = {PAD_SYMBOL: 0, BOUNDARY_SYMBOL: 1}
    names = [f"p{k:02d}" for k in range(cfg.n_symbols)]
    for k, name in enumerate(names):
        symbol_table[name] = 2 + k

    # intrinsic per-symbol character so spectra depend on the text
    sym_f0_off = rng.uniform(-cfg.symbol_f0_spread_hz, cfg.symbol_f0_spread_hz, cfg.n_symbols)
    sym_level_off = rng.uniform(
        -cfg.symbol_level_spread_db, cfg.symbol_level_spread_db, cfg.n_symbols
    )
    sym_dur = rng.uniform(cfg.phone_dur_min_s, cfg.phone_dur_max_s, cfg.n_symbols)

    n_test = int(round(cfg.n_paragraphs * cfg.test_fraction))
    paragraphs = []
    for pi in range(cfg.n_paragraphs):
        pid = f"par{pi:04d}"
        n_sent = int(rng.integers(cfg.sentences_min, cfg.sentences_max + 1))
        pad = np.zeros(int(cfg.edge_pad_s * sr), dtype=np.float64)
        chunks = [pad]
        cursor = len(pad)
        sentences = []
        for si in range(n_sent):
            if si > 0:
                pause = float(rng.uniform(cfg.pause_min_s, cfg.pause_max_s))
                n_pause = int(round(pause * sr))
                chunks.append(np.zeros(n_pause, dtype=np.float64))
                cursor += n_pause
            n_ph = int(rng.integers(cfg.phones_min, cfg.phones_max + 1))
            syms = rng.integers(0, cfg.n_symbols, n_ph)
            scale = _duration_scale(cfg, si, n_sent)
            f0_sent = (
                cfg.base_f0_hz
                + (cfg.f0_reset_hz if si == 0 else 0.0)
                + cfg.f0_declination_hz * si
            )
            level_sent = (
                cfg.base_level_db
                + (cfg.level_reset_db if si == 0 else 0.0)
                + cfg.level_declination_db * si
            )
            alignment = []
            for k in syms:
                f0 = float(np.clip(f0_sent + sym_f0_off[k], 60.0, 520.0))
                amp = 10.0 ** ((level_sent + sym_level_off[k]) / 20.0)
                n_samples = int(round(sym_dur[k] * scale * sr))
                chunks.append(_phone_tone(cfg, f0, amp, n_samples))
                alignment.append((cursor / sr, (cursor + n_samples) / sr))
                cursor += n_samples
            # syllables greedily group 1-2 phones
            syllables = []
            j = 0
            while j < n_ph:
                step = int(rng.integers(1, 3))
                step = min(step, n_ph - j)
                syllables.append((j, j + step))
                j += step
            symbols = [names[k] for k in syms]
            sentences.append(
                SentenceRecord(
                    phonemes=PhonemeSequence(tuple(symbol_table[s] for s in symbols)),
                    symbols=symbols,
                    char_count=n_ph,
                    position_index=si,
                    audio_span=(alignment[0][0], alignment[-1][1]),
                    alignment=alignment,
                    syllable_map=syllables,
                )
            )
        chunks.append(pad)
        wav = np.concatenate(chunks)
        pcm = np.clip(np.round(wav * 32767.0), -32768, 32767).astype(np.int16)
        rel = os.path.join("audio", f"{pid}.wav")
        wavfile.write(os.path.join(out_dir, rel), sr, pcm)
        paragraphs.append(
            ParagraphRecord(
                id=pid,
                sentences=sentences,
                audio_path=rel,
                sample_rate=sr,
                split="test" if pi >= cfg.n_paragraphs - n_test else "train",
            )
        )

    manifest = CorpusManifest(paragraphs=paragraphs, symbol_table=symbol_table, root=out_dir)
    save_manifest(manifest, os.path.join(out_dir, "manifest.jsonl"))
    return manifest
