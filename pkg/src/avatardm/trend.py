"""Haar wavelet trend analysis over the scalarized belief series.

The full multi-level decomposition halves the working length each level until
a single approximation coefficient remains. Sharp variation points are strict
sign changes between consecutive detail coefficients, counted on every level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientHistory

SQRT2 = np.sqrt(2.0)

# Detail coefficients below this magnitude carry no sign; they are skipped so
# floating-point noise cannot fabricate crossings.
SIGN_EPS = 1e-12


@dataclass(frozen=True)
class DwtResult:
    """Per-level (approximation, detail) pairs, shallowest level first."""

    levels: tuple[tuple[np.ndarray, np.ndarray], ...]
    original_len: int
    padded_len: int

    @property
    def deepest_approx(self) -> np.ndarray:
        return self.levels[-1][0]

    def detail_coefficients(self) -> list[np.ndarray]:
        return [detail for _, detail in self.levels]


@dataclass(frozen=True)
class TrendResult:
    ncp: int
    ncp_ratio: float
    dwt: DwtResult


def _pad_to_power_of_two(signal: np.ndarray) -> np.ndarray:
    """Right-pad by repeating the final value; zero padding would fabricate an
    artificial edge (and crossings) at the tail."""
    n = len(signal)
    padded = 1 << max(1, (n - 1).bit_length())
    if padded == n:
        return signal
    return np.concatenate([signal, np.full(padded - n, signal[-1])])


def haar_dwt(signal) -> DwtResult:
    """Orthonormal Haar decomposition of a series of length >= 2.

    Per level: approx[i] = (x[2i] + x[2i+1]) / sqrt(2),
               detail[i] = (x[2i] - x[2i+1]) / sqrt(2),
    iterated on the approximation until one coefficient remains.
    """
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if len(x) < 2:
        raise InsufficientHistory(f"need at least 2 samples, got {len(x)}")
    original_len = len(x)
    work = _pad_to_power_of_two(x)
    padded_len = len(work)
    levels = []
    while len(work) > 1:
        approx = (work[0::2] + work[1::2]) / SQRT2
        detail = (work[0::2] - work[1::2]) / SQRT2
        levels.append((approx, detail))
        work = approx
    return DwtResult(levels=tuple(levels), original_len=original_len, padded_len=padded_len)


def inverse_haar(dwt: DwtResult) -> np.ndarray:
    """Reconstruct the padded input from the decomposition."""
    work = dwt.deepest_approx
    for approx, detail in reversed(dwt.levels):
        rec = np.empty(2 * len(detail))
        rec[0::2] = (work + detail) / SQRT2
        rec[1::2] = (work - detail) / SQRT2
        work = rec
    return work


def count_sharp_points(dwt: DwtResult) -> int:
    """Strict sign changes between consecutive detail coefficients, summed
    across all levels. Near-zero coefficients carry no sign."""
    crossings = 0
    for _, detail in dwt.levels:
        signs = np.sign(detail[np.abs(detail) >= SIGN_EPS])
        if len(signs) > 1:
            crossings += int(np.sum(signs[:-1] != signs[1:]))
    return crossings


def max_crossings(dwt: DwtResult) -> int:
    """Upper bound on crossings: adjacent detail pairs across all levels."""
    return sum(max(len(detail) - 1, 0) for _, detail in dwt.levels)


def ncp_ratio(ncp: int, dwt: DwtResult) -> float:
    """Crossing count normalized to [0, 1] by the maximum possible count."""
    bound = max_crossings(dwt)
    if ncp < 0 or ncp > bound:
        raise ValueError(f"ncp {ncp} outside [0, {bound}]")
    if bound == 0:
        return 0.0
    return ncp / bound


def analyze(signal) -> TrendResult:
    """Decompose, count sharp variation points, and normalize in one call."""
    dwt = haar_dwt(signal)
    ncp = count_sharp_points(dwt)
    return TrendResult(ncp=ncp, ncp_ratio=ncp_ratio(ncp, dwt), dwt=dwt)
