"""Waveform front end: log-mel spectrograms, frame-level F0/intensity,
phone-level pooling and mean-variance normalization.

Frames are centered at t * hop for t = 0 .. ceil(n_samples / hop) - 1, with
zero padding at the edges; every operation here shares that grid.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

from paraspeech.errors import ValidationError

MEL_POWER_FLOOR = 1e-10
INTENSITY_FLOOR_DB = -100.0


@dataclass(frozen=True)
class FrameConfig:
    sample_rate: int = 16000
    win_s: float = 0.050
    hop_s: float = 0.0125
    n_fft: int = 1024
    n_mels: int = 80
    fmin_hz: float = 0.0
    fmax_hz: float = 8000.0
    f0_min_hz: float = 50.0
    f0_max_hz: float = 600.0
    voicing_threshold: float = 0.6
    silence_db: float = -60.0

    @property
    def hop(self) -> int:
        return int(round(self.hop_s * self.sample_rate))

    @property
    def win(self) -> int:
        return int(round(self.win_s * self.sample_rate))


@dataclass
class MelSpectrogram:
    """T x n_mels matrix of natural-log mel band powers."""

    frames: np.ndarray
    hop_s: float
    sample_rate: int

    def __post_init__(self):
        if self.frames.ndim != 2:
            raise ValidationError("mel frames must be a 2-D matrix")
        if not np.all(np.isfinite(self.frames)):
            raise ValidationError("mel frames contain non-finite values")


@dataclass
class FrameProsody:
    f0_hz: np.ndarray
    intensity_db: np.ndarray
    voiced: np.ndarray


@dataclass
class ProsodyMatrix:
    """L x 3 matrix, columns (LF0, intensity, duration)."""

    values: np.ndarray
    voiced: np.ndarray
    level: str = "phone"
    normalized: bool = False


@dataclass
class ProsodyStats:
    mean: np.ndarray
    std: np.ndarray


def read_wav(path: str) -> tuple[np.ndarray, int]:
    sr, data = wavfile.read(path)
    if data.dtype == np.int16:
        x = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        x = data.astype(np.float64) / 2147483648.0
    else:
        x = data.astype(np.float64)
    if x.ndim > 1:
        x = x.mean(axis=1)
    return x, int(sr)


def write_wav(path: str, x: np.ndarray, sample_rate: int) -> None:
    pcm = np.clip(np.round(x * 32767.0), -32768, 32767).astype(np.int16)
    wavfile.write(path, sample_rate, pcm)


def n_frames(n_samples: int, cfg: FrameConfig) -> int:
    return int(np.ceil(n_samples / cfg.hop))


def _frame_signal(wav: np.ndarray, cfg: FrameConfig) -> np.ndarray:
    if wav.size == 0:
        raise ValidationError("empty waveform")
    hop, win = cfg.hop, cfg.win
    total = n_frames(wav.size, cfg)
    half = win // 2
    padded = np.zeros((total - 1) * hop + win, dtype=np.float64)
    padded[half : half + wav.size] = wav
    idx = np.arange(win)[None, :] + hop * np.arange(total)[:, None]
    return padded[idx]


def mel_filterbank(cfg: FrameConfig) -> np.ndarray:
    """Unit-height triangular filters on the mel scale, fmin..fmax."""

    def to_mel(f):
        return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)

    def from_mel(m):
        return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)

    n_bins = cfg.n_fft // 2 + 1
    fft_freqs = np.arange(n_bins) * cfg.sample_rate / cfg.n_fft
    pts = from_mel(np.linspace(to_mel(cfg.fmin_hz), to_mel(cfg.fmax_hz), cfg.n_mels + 2))
    bank = np.zeros((cfg.n_mels, n_bins), dtype=np.float64)
    for i in range(cfg.n_mels):
        left, center, right = pts[i], pts[i + 1], pts[i + 2]
        up = (fft_freqs - left) / max(center - left, 1e-12)
        down = (right - fft_freqs) / max(right - center, 1e-12)
        bank[i] = np.maximum(0.0, np.minimum(up, down))
    return bank


def mel_center_freqs(cfg: FrameConfig) -> np.ndarray:
    def to_mel(f):
        return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)

    def from_mel(m):
        return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)

    pts = from_mel(np.linspace(to_mel(cfg.fmin_hz), to_mel(cfg.fmax_hz), cfg.n_mels + 2))
    return pts[1:-1]


def mel_spectrogram(wav: np.ndarray, cfg: FrameConfig) -> MelSpectrogram:
    """Log-compressed mel spectrogram: log(max(mel power, 1e-10))."""
    frames = _frame_signal(wav, cfg)
    window = np.hanning(cfg.win)
    spec = np.abs(np.fft.rfft(frames * window, n=cfg.n_fft, axis=1)) ** 2
    mel = spec @ mel_filterbank(cfg).T
    logmel = np.log(np.maximum(mel, MEL_POWER_FLOOR))
    return MelSpectrogram(frames=logmel, hop_s=cfg.hop_s, sample_rate=cfg.sample_rate)


def extract_frame_prosody(wav: np.ndarray, cfg: FrameConfig) -> FrameProsody:
    """Frame-level F0 (normalized autocorrelation with parabolic peak
    interpolation) and intensity (dB re full scale, floored at -100)."""
    frames = _frame_signal(wav, cfg)
    total, win = frames.shape

    intensity = 10.0 * np.log10(np.mean(frames**2, axis=1) + 1e-10)

    lag_min = max(2, int(np.floor(cfg.sample_rate / cfg.f0_max_hz)))
    lag_max = min(win - 2, int(np.ceil(cfg.sample_rate / cfg.f0_min_hz)))
    if lag_max <= lag_min:
        raise ValidationError("window too short for the configured F0 range")

    nfft = 1
    while nfft < 2 * win:
        nfft *= 2
    spectrum = np.fft.rfft(frames, n=nfft, axis=1)
    raw_ac = np.fft.irfft(np.abs(spectrum) ** 2, n=nfft, axis=1)[:, : lag_max + 2]

    sq = frames**2
    csum = np.cumsum(sq, axis=1)
    energy = csum[:, -1]
    lags = np.arange(lag_max + 2)
    # head(tau) = sum_{t < win-tau} x_t^2 ; tail(tau) = sum_{t >= tau} x_t^2
    head = csum[:, win - 1 - lags]
    tail = energy[:, None] - np.concatenate(
        [np.zeros((total, 1)), csum[:, : lag_max + 1]], axis=1
    )
    norm_ac = raw_ac / np.sqrt(head * tail + 1e-20)

    f0 = np.zeros(total, dtype=np.float64)
    voiced = np.zeros(total, dtype=bool)
    band = norm_ac[:, lag_min : lag_max + 1]
    peak_val = band.max(axis=1)
    for t in range(total):
        if peak_val[t] < cfg.voicing_threshold or intensity[t] <= cfg.silence_db:
            continue
        row = norm_ac[t]
        # earliest strong local maximum, to avoid octave-down errors at
        # multiples of the true period
        floor_val = max(cfg.voicing_threshold, 0.85 * peak_val[t])
        lag = None
        for tau in range(lag_min, lag_max + 1):
            if row[tau] >= floor_val and row[tau] >= row[tau - 1] and row[tau] >= row[tau + 1]:
                lag = tau
                break
        if lag is None:
            lag = lag_min + int(np.argmax(band[t]))
        denom = row[lag - 1] - 2.0 * row[lag] + row[lag + 1]
        delta = 0.0 if abs(denom) < 1e-12 else 0.5 * (row[lag - 1] - row[lag + 1]) / denom
        delta = float(np.clip(delta, -0.5, 0.5))
        cand = cfg.sample_rate / (lag + delta)
        if cfg.f0_min_hz <= cand <= cfg.f0_max_hz:
            f0[t] = cand
            voiced[t] = True
    return FrameProsody(f0_hz=f0, intensity_db=intensity, voiced=voiced)


def _span_frames(start_s: float, end_s: float, hop_s: float, total: int) -> np.ndarray:
    """Frames whose centers (t * hop) fall in [start, end); never empty."""
    first = int(np.ceil(start_s / hop_s - 1e-9))
    last = int(np.ceil(end_s / hop_s - 1e-9))  # exclusive
    first = max(first, 0)
    last = min(last, total)
    if first >= last:
        mid = int(round(0.5 * (start_s + end_s) / hop_s))
        mid = min(max(mid, 0), total - 1)
        return np.array([mid])
    return np.arange(first, last)


def pool_to_phone(
    fp: FrameProsody, alignment: list[tuple[float, float]], hop_s: float
) -> ProsodyMatrix:
    """Pool frame prosody to phone level over alignment spans.

    Per phone: LF0 is the mean of log(f0) over voiced frames in the span
    (0 with the voiced flag cleared if none), intensity is the mean over
    all frames in the span, duration is the span length in seconds.
    """
    total = fp.f0_hz.size
    duration_s = total * hop_s
    values = np.zeros((len(alignment), 3), dtype=np.float64)
    voiced = np.zeros(len(alignment), dtype=bool)
    for i, (a, b) in enumerate(alignment):
        if a < -1e-9 or b > duration_s + hop_s:
            raise ValidationError(f"phone span ({a:.3f}, {b:.3f}) outside the audio")
        idx = _span_frames(a, b, hop_s, total)
        vmask = fp.voiced[idx]
        if vmask.any():
            values[i, 0] = np.log(fp.f0_hz[idx][vmask]).mean()
            voiced[i] = True
        values[i, 1] = fp.intensity_db[idx].mean()
        values[i, 2] = b - a
    return ProsodyMatrix(values=values, voiced=voiced, level="phone", normalized=False)


def prosody_stats(matrices: list[ProsodyMatrix]) -> ProsodyStats:
    """Columnwise mean/std over raw matrices; unvoiced LF0 rows are
    excluded from the LF0 column's moments. Std floored at 1e-8."""
    values = np.concatenate([m.values for m in matrices], axis=0)
    voiced = np.concatenate([m.voiced for m in matrices], axis=0)
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    if voiced.any():
        mean[0] = values[voiced, 0].mean()
        std[0] = values[voiced, 0].std()
    else:
        mean[0], std[0] = 0.0, 1.0
    return ProsodyStats(mean=mean, std=np.maximum(std, 1e-8))


def normalize_prosody(pm: ProsodyMatrix, stats: ProsodyStats) -> ProsodyMatrix:
    if pm.normalized:
        raise ValidationError("prosody matrix already normalized")
    out = (pm.values - stats.mean) / stats.std
    out[~pm.voiced, 0] = 0.0
    return ProsodyMatrix(values=out, voiced=pm.voiced.copy(), level=pm.level, normalized=True)


def denormalize_prosody(pm: ProsodyMatrix, stats: ProsodyStats) -> ProsodyMatrix:
    if not pm.normalized:
        raise ValidationError("prosody matrix is not normalized")
    out = pm.values * stats.std + stats.mean
    out[~pm.voiced, 0] = 0.0
    return ProsodyMatrix(values=out, voiced=pm.voiced.copy(), level=pm.level, normalized=False)


def save_array(path: str, arr: np.ndarray, level: str) -> None:
    """Binary array container: 3 header lines (dims, dtype, level) then raw
    little-endian C-order bytes."""
    arr = np.ascontiguousarray(arr)
    with open(path, "wb") as fh:
        fh.write(f"dims: {' '.join(str(d) for d in arr.shape)}\n".encode())
        fh.write(f"dtype: {arr.dtype.name}\n".encode())
        fh.write(f"level: {level}\n".encode())
        fh.write(arr.tobytes())


def load_array(path: str) -> tuple[np.ndarray, str]:
    with open(path, "rb") as fh:
        dims = fh.readline().decode().strip()
        dtype = fh.readline().decode().strip()
        level = fh.readline().decode().strip()
        if not (dims.startswith("dims: ") and dtype.startswith("dtype: ") and level.startswith("level: ")):
            raise ValidationError(f"{path}: not an array container")
        shape = tuple(int(d) for d in dims[6:].split())
        arr = np.frombuffer(fh.read(), dtype=np.dtype(dtype[7:])).reshape(shape)
    return arr.copy(), level[7:]


def save_prosody(path_prefix: str, pm: ProsodyMatrix) -> None:
    save_array(path_prefix + ".pros.bin", pm.values, pm.level)
    save_array(path_prefix + ".voiced.bin", pm.voiced, pm.level)


def load_prosody(path_prefix: str, normalized: bool) -> ProsodyMatrix:
    values, level = load_array(path_prefix + ".pros.bin")
    voiced, _ = load_array(path_prefix + ".voiced.bin")
    return ProsodyMatrix(values=values, voiced=voiced.astype(bool), level=level, normalized=normalized)
