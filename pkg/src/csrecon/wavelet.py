"""Multilevel orthogonal Daubechies-4 wavelet transform with periodic boundaries.

The 4-tap analysis pair is the classic (1 +/- sqrt 3) family, unit l2 norm, so
the transform matrix is exactly orthogonal on circularly-extended grids and the
inverse equals the adjoint. Coefficients use the standard quadrant layout with
the approximation bin at the top-left.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import SPACE, ImageGrid

_SQRT3 = np.sqrt(3.0)
# Analysis low-pass; high-pass is the alternating flip.
DB4_LO = np.array([1.0 + _SQRT3, 3.0 + _SQRT3, 3.0 - _SQRT3, 1.0 - _SQRT3]) / (4.0 * np.sqrt(2.0))
DB4_HI = np.array([DB4_LO[3], -DB4_LO[2], DB4_LO[1], -DB4_LO[0]])


@dataclass(frozen=True)
class WaveletPyramid:
    """Wavelet coefficients stored in-place: same element count as the image."""

    data: np.ndarray
    levels: int

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        if data.ndim != 2:
            raise ValueError("wavelet coefficients must form a 2-D grid")
        _check_divisible(data.shape[0], data.shape[1], self.levels)
        data = np.array(data, order="C")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def lowfreq_block(self) -> np.ndarray:
        h, w = wavelet_lowfreq_extent(self.rows, self.cols, self.levels)
        return self.data[:h, :w]


def _check_divisible(rows: int, cols: int, levels: int):
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    d = 2**levels
    if rows % d or cols % d:
        raise ValueError(f"grid {rows}x{cols} is not divisible by 2^{levels}")


def max_levels(rows: int, cols: int) -> int:
    """Largest level count both dimensions admit (largest power of two dividing both)."""
    lev = 0
    while rows % 2 == 0 and cols % 2 == 0 and min(rows, cols) > 1:
        rows //= 2
        cols //= 2
        lev += 1
    return lev


def clamp_levels(rows: int, cols: int, levels: int) -> int:
    """Clamp the requested level count to what the dimensions admit, warning on change."""
    admissible = max_levels(rows, cols)
    if admissible < 1:
        raise ValueError(f"grid {rows}x{cols} admits no wavelet decomposition")
    if levels > admissible:
        warnings.warn(
            f"clamping wavelet levels from {levels} to {admissible} for a {rows}x{cols} grid",
            stacklevel=2,
        )
        return admissible
    return levels


def _analysis_axis(x: np.ndarray, axis: int) -> np.ndarray:
    """One periodic analysis step along `axis`: lowpass half then highpass half."""
    x = np.moveaxis(x, axis, 0)
    n = x.shape[0]
    idx = (2 * np.arange(n // 2)[:, None] + np.arange(4)[None, :]) % n
    windows = x[idx]  # (n//2, 4, ...)
    lo = np.tensordot(DB4_LO, np.moveaxis(windows, 1, 0), axes=(0, 0))
    hi = np.tensordot(DB4_HI, np.moveaxis(windows, 1, 0), axes=(0, 0))
    return np.moveaxis(np.concatenate([lo, hi], axis=0), 0, axis)

def _synthesis_axis(x: np.ndarray, axis: int) -> np.ndarray:
    """Adjoint (= inverse) of one analysis step along `axis`."""
    x = np.moveaxis(x, axis, 0)
    n = x.shape[0]
    lo, hi = x[: n // 2], x[n // 2 :]
    out = np.zeros_like(x)
    k2 = 2 * np.arange(n // 2)
    for tap in range(4):
        idx = (k2 + tap) % n
        out[idx] += DB4_LO[tap] * lo + DB4_HI[tap] * hi
    return np.moveaxis(out, 0, axis)


def ddwt4_forward(img: ImageGrid, levels: int = 4) -> WaveletPyramid:
    """Multilevel 2-D DDWT-4, recursing on the approximation quadrant."""
    if img.domain != SPACE:
        raise ValueError("ddwt4_forward expects a space-domain image")
    _check_divisible(img.rows, img.cols, levels)
    out = np.array(img.data)
    r, c = img.rows, img.cols
    for _ in range(levels):
        block = _analysis_axis(out[:r, :c], 0)
        out[:r, :c] = _analysis_axis(block, 1)
        r //= 2
        c //= 2
    return WaveletPyramid(out, levels)


def ddwt4_inverse(pyr: WaveletPyramid) -> ImageGrid:
    """Inverse (= adjoint) multilevel DDWT-4."""
    out = np.array(pyr.data)
    r = pyr.rows // 2 ** (pyr.levels - 1)
    c = pyr.cols // 2 ** (pyr.levels - 1)
    for _ in range(pyr.levels):
        block = _synthesis_axis(out[:r, :c], 1)
        out[:r, :c] = _synthesis_axis(block, 0)
        r *= 2
        c *= 2
    return ImageGrid(out, SPACE)


def wavelet_lowfreq_extent(rows: int, cols: int, levels: int) -> tuple[int, int]:
    """Size of the lowest-frequency bin: (rows, cols) / 2^levels."""
    _check_divisible(rows, cols, levels)
    return rows // 2**levels, cols // 2**levels
