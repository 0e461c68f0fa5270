"""Daubechies-6 wavelet denoising for multichannel series.

The decomposition extends each signal symmetrically by one filter length,
then expands it over the orthonormal shifts {h(.-2k), g(.-2k)} keeping
every coefficient with support overlap, so analysis followed by synthesis
reconstructs the padded signal exactly (to rounding) and the crop back to
the original support is artifact-free.  Denoising soft-thresholds all
detail levels at the universal threshold sigma * sqrt(2 ln L), with sigma
estimated from the finest-level details by the median absolute deviation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_finite

# Orthonormal Daubechies-6 scaling filter (12 taps, sum = sqrt(2)).
# Standard published values; the test suite re-derives them by spectral
# factorization and checks the double-shift orthonormality conditions.
DB6_LO = np.array(
    [
        0.11154074335008017,
        0.4946238903983854,
        0.7511339080215775,
        0.3152503517092432,
        -0.22626469396516913,
        -0.12976686756709563,
        0.09750160558707936,
        0.02752286553001629,
        -0.031582039318031156,
        0.000553842200993802,
        0.004777257511010651,
        -0.00107730108499558,
    ]
)

# Quadrature-mirror highpass: g[n] = (-1)^n h[F-1-n].
DB6_HI = DB6_LO[::-1].copy()
DB6_HI[1::2] *= -1.0

MAD_TO_SIGMA = 0.6745  # Gaussian consistency constant for the MAD


@dataclass(frozen=True)
class WaveletSpec:
    """Denoising configuration; only the db6/universal-soft combination
    is supported."""

    family: str = "db6"
    levels: int = 4
    threshold_rule: str = "universal_soft"

    def __post_init__(self):
        if self.family != "db6":
            raise ValueError(f"unsupported wavelet family {self.family!r}")
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if self.threshold_rule != "universal_soft":
            raise ValueError(f"unsupported threshold rule {self.threshold_rule!r}")


def soft_threshold(coeffs, tau):
    """Shrink towards zero: sign(c) * max(|c| - tau, 0)."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    return np.sign(coeffs) * np.maximum(np.abs(coeffs) - tau, 0.0)


def _analyze_level(signal):
    """One decomposition level with symmetric boundary extension.

    Returns (approx, detail); every coefficient whose basis function
    overlaps the padded signal is kept, which makes the level exactly
    invertible.
    """
    taps = len(DB6_LO)
    padded = np.pad(signal, taps - 1, mode="symmetric")
    start = (taps - 1) % 2  # indices of even lags in the full correlation
    approx = np.convolve(padded, DB6_LO[::-1])[start::2]
    detail = np.convolve(padded, DB6_HI[::-1])[start::2]
    return approx, detail


def _synthesize_level(approx, detail, signal_len):
    """Invert :func:`_analyze_level` and crop the padding."""
    taps = len(DB6_LO)
    lag_min = -(taps - 1) + (taps - 1) % 2
    up_a = np.zeros(2 * len(approx) - 1)
    up_a[::2] = approx
    up_d = np.zeros(2 * len(detail) - 1)
    up_d[::2] = detail
    rec = np.convolve(up_a, DB6_LO) + np.convolve(up_d, DB6_HI)
    pad = taps - 1
    offset = -lag_min + pad
    return rec[offset : offset + signal_len]


def dwt(signal, levels):
    """Multi-level decomposition of a 1-D signal.

    Returns (approx, details, lengths): the deepest approximation, the
    detail arrays from finest (level 1) to coarsest, and the per-level
    input lengths needed for reconstruction.
    """
    signal = np.asarray(signal, dtype=np.float64)
    if signal.ndim != 1:
        raise ValueError(f"signal must be 1-D, got shape {signal.shape}")
    if len(signal) < len(DB6_LO):
        raise ValueError(
            f"signal of length {len(signal)} is shorter than the "
            f"{len(DB6_LO)}-tap filter"
        )
    details = []
    lengths = []
    approx = signal
    for _ in range(levels):
        lengths.append(len(approx))
        approx, detail = _analyze_level(approx)
        details.append(detail)
    return approx, details, lengths


def idwt(approx, details, lengths):
    """Invert :func:`dwt`."""
    signal = approx
    for detail, length in zip(reversed(details), reversed(lengths)):
        signal = _synthesize_level(signal, detail, length)
    return signal


def denoise_channel(signal, spec: WaveletSpec = WaveletSpec()):
    """Denoise one channel; output length equals input length."""
    approx, details, lengths = dwt(signal, spec.levels)
    sigma = np.median(np.abs(details[0])) / MAD_TO_SIGMA
    tau = sigma * np.sqrt(2.0 * np.log(len(signal)))
    details = [soft_threshold(d, tau) for d in details]
    return idwt(approx, details, lengths)


def dwt_denoise(x, spec: WaveletSpec = WaveletSpec()):
    """Denoise a series channel by channel.

    ``x`` is (n_points,) or (n_points, d); the same shape comes back.
    """
    x = np.asarray(x, dtype=np.float64)
    check_finite(x, "x")
    if x.ndim == 1:
        return denoise_channel(x, spec)
    if x.ndim != 2:
        raise ValueError(f"x must be 1-D or 2-D, got shape {x.shape}")
    out = np.empty_like(x)
    for ch in range(x.shape[1]):
        out[:, ch] = denoise_channel(x[:, ch], spec)
    return out
