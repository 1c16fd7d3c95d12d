"""IID Rayleigh frequency-selective channel draws and their frequency responses.

A realization is a complex (M, K, L) array of small-scale taps h[m, k, l] with
per-tap variance p[l].  The frequency response uses the plain (non-unitary)
forward DFT of the zero-padded taps; signals elsewhere use the unitary pair in
waveform.py.  Do not mix up the two conventions.
"""
from __future__ import annotations

import struct

import numpy as np

from .config import SystemConfig

_DUMP_MAGIC = b"QMTAPS1\x00"


def substream(seed: int, *path: int) -> np.random.Generator:
    """Deterministic, order-independent RNG substream for (seed, *path).

    Each (point, trial, role) tuple maps to an independent stream, so
    concurrent Monte-Carlo trials reproduce bit-identically regardless of
    execution order or worker count.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, path)]))


def draw_complex_gaussian(rng: np.random.Generator, shape, variance=1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with the given variance."""
    scale = np.sqrt(np.asarray(variance) / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def draw_channel(config: SystemConfig, rng: np.random.Generator) -> np.ndarray:
    """One channel realization: taps[m, k, l] ~ CN(0, p[l]), independent in m, k, l."""
    m, k, num_taps = config.antennas, config.num_users, config.num_taps
    p = np.asarray(config.pdp.taps)
    return draw_complex_gaussian(rng, (m, k, num_taps), variance=p)


def freq_response(taps: np.ndarray, block_len: int) -> np.ndarray:
    """Frequency response h~[..., v] = sum_l h[..., l] exp(-2j pi l v / N).

    Non-unitary forward transform (no 1/sqrt(N)); Parseval then reads
    (1/N) sum_v |h~[v]|^2 = sum_l |h[l]|^2.
    """
    if block_len < taps.shape[-1]:
        raise ValueError(f"block_len {block_len} shorter than channel ({taps.shape[-1]} taps)")
    return np.fft.fft(taps, n=block_len, axis=-1)


def dump_taps(path, taps: np.ndarray) -> None:
    """Binary regression fixture: dims header + little-endian interleaved re/im."""
    arr = np.ascontiguousarray(taps, dtype="<c16")
    with open(path, "wb") as fh:
        fh.write(_DUMP_MAGIC)
        fh.write(struct.pack("<III", *arr.shape))
        fh.write(arr.tobytes())


def load_taps(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(len(_DUMP_MAGIC))
        if magic != _DUMP_MAGIC:
            raise ValueError("not a channel tap dump")
        shape = struct.unpack("<III", fh.read(12))
        flat = np.frombuffer(fh.read(), dtype="<c16")
    return flat.reshape(shape)
