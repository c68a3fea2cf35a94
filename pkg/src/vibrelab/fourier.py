"""Discrete Fourier transform engine for arbitrary lengths.

Power-of-two lengths use an iterative radix-2 decimation-in-time transform
with cached twiddle factors; every other length is handled by Bluestein's
chirp-z identity, whose internal convolution reuses the radix-2 path. The
chirp exponents are reduced modulo 2N before evaluating the complex
exponential so the angles stay small and accurate for large N.
"""

from __future__ import annotations

import numpy as np

_MAX_CACHED = 64
_TWIDDLES: dict[int, np.ndarray] = {}
_BITREV: dict[int, np.ndarray] = {}


def _twiddles(size: int) -> np.ndarray:
    tw = _TWIDDLES.get(size)
    if tw is None:
        half = size // 2
        tw = np.exp(-2j * np.pi * np.arange(half) / size)
        if len(_TWIDDLES) < _MAX_CACHED:
            _TWIDDLES[size] = tw
    return tw


def _bit_reverse_indices(n: int) -> np.ndarray:
    idx = _BITREV.get(n)
    if idx is None:
        bits = n.bit_length() - 1
        fwd = np.arange(n)
        idx = np.zeros(n, dtype=np.intp)
        for b in range(bits):
            idx |= ((fwd >> b) & 1) << (bits - 1 - b)
        if len(_BITREV) < _MAX_CACHED:
            _BITREV[n] = idx
    return idx


def _fft_pow2(x: np.ndarray) -> np.ndarray:
    n = x.size
    if n == 1:
        return x.astype(complex, copy=True)
    y = np.ascontiguousarray(x[_bit_reverse_indices(n)], dtype=complex)
    size = 2
    while size <= n:
        half = size // 2
        tw = _twiddles(size)
        blocks = y.reshape(-1, size)
        even = blocks[:, :half].copy()
        odd = blocks[:, half:] * tw
        blocks[:, :half] = even + odd
        blocks[:, half:] = even - odd
        size *= 2
    return y


def _fft_bluestein(x: np.ndarray) -> np.ndarray:
    n = x.size
    k = np.arange(n)
    expo = (k * k) % (2 * n)  # k^2 mod 2n: same chirp, bounded angles
    w = np.exp(-1j * np.pi * expo / n)
    m = 1 << (2 * n - 1).bit_length()
    a = np.zeros(m, dtype=complex)
    a[:n] = x * w
    b = np.zeros(m, dtype=complex)
    wc = np.conj(w)
    b[:n] = wc
    b[m - (n - 1) :] = wc[1:][::-1]
    conv = _fft_pow2(a) * _fft_pow2(b)
    conv = np.conj(_fft_pow2(np.conj(conv))) / m
    return conv[:n] * w


def fft(x: np.ndarray) -> np.ndarray:
    """Forward DFT of a 1-D real or complex array, any length >= 1."""
    x = np.asarray(x)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("fft expects a non-empty 1-D array")
    n = x.size
    if n & (n - 1) == 0:
        return _fft_pow2(x)
    return _fft_bluestein(x)


def ifft(x: np.ndarray) -> np.ndarray:
    """Inverse DFT, any length >= 1."""
    x = np.asarray(x)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("ifft expects a non-empty 1-D array")
    return np.conj(fft(np.conj(x))) / x.size
