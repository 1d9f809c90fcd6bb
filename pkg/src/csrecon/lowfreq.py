"""Blurry image estimate from the fully-sampled center region, and residual data.

The estimate is the inverse DFT of the windowed FSR measurements; the window
is either a separable Kaiser-Bessel taper (reduces ringing) or the coarse
curvelet window, chosen by whichever transform has the larger low-frequency
region. Subtracting the estimate's predicted measurements from the data gives
the residual the structured solver works on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import i0

from .curvelet import CurveletGeometry, curvelet_lowfreq_extent
from .grid import (
    ImageGrid,
    Measurements,
    centered_slices,
    dft2_unitary,
    idft2_unitary,
    sample,
)

KAISER_BESSEL = "kaiser_bessel"
CURVELET_W0 = "curvelet_w0"

DEFAULT_KAISER_BETA = 4.0


@dataclass(frozen=True)
class LowpassWindow:
    """Real, centrally-symmetric taper on a centered support rectangle."""

    kind: str
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.kind not in (KAISER_BESSEL, CURVELET_W0):
            raise ValueError(f"unknown window kind {self.kind!r}")
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("window values must be 2-D")
        if values.size and (values.min() < 0 or values.max() > 1 + 1e-12):
            raise ValueError("window values must lie in [0, 1]")
        values = np.array(values, order="C")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def support(self) -> tuple[int, int]:
        return self.values.shape


def _kaiser_1d(length: int, beta: float) -> np.ndarray:
    # r = 0 at the FFT-center cell (length // 2), 1 at the left edge.
    r = np.abs(np.arange(length) - length // 2) / (length / 2)
    return i0(beta * np.sqrt(np.maximum(1.0 - r**2, 0.0))) / i0(beta)


def kaiser_bessel_window(extent: tuple[int, int], beta: float = DEFAULT_KAISER_BETA) -> LowpassWindow:
    """Separable 2-D Kaiser window on the extent, peak 1 at the center cell."""
    h, w = int(extent[0]), int(extent[1])
    if h < 1 or w < 1:
        raise ValueError(f"window extent must be positive, got {extent}")
    if beta < 0:
        raise ValueError(f"Kaiser beta must be nonnegative, got {beta}")
    return LowpassWindow(KAISER_BESSEL, np.outer(_kaiser_1d(h, beta), _kaiser_1d(w, beta)))


def curvelet_w0_window(geom: CurveletGeometry) -> LowpassWindow:
    """The coarse-scale curvelet window on its support box, applied once (amplitude)."""
    return LowpassWindow(CURVELET_W0, geom.tile(0, 0).window)


def choose_window(wavelet_extent: tuple[int, int] | None,
                  geom: CurveletGeometry | None,
                  beta: float = DEFAULT_KAISER_BETA) -> LowpassWindow:
    """Curvelet W0 when its region is elementwise larger, else Kaiser-Bessel.

    With only one transform active the choice is forced. When both are active
    but neither region dominates, the Kaiser window spans the elementwise max.
    """
    if wavelet_extent is None and geom is None:
        raise ValueError("choose_window needs at least one low-frequency extent")
    if wavelet_extent is None:
        return curvelet_w0_window(geom)
    if geom is None:
        return kaiser_bessel_window(wavelet_extent, beta)
    cur = curvelet_lowfreq_extent(geom)
    if cur[0] > wavelet_extent[0] and cur[1] > wavelet_extent[1]:
        return curvelet_w0_window(geom)
    extent = (max(cur[0], wavelet_extent[0]), max(cur[1], wavelet_extent[1]))
    return kaiser_bessel_window(extent, beta)


def blurry_estimate(meas: Measurements, window: LowpassWindow) -> ImageGrid:
    """Embed the FSR measurements, taper with the window, inverse-DFT."""
    mask = meas.mask
    if mask.fsr is None:
        raise ValueError("blurry_estimate requires a mask with a fully-sampled center region")
    h, w = window.support
    if h > mask.fsr[0] or w > mask.fsr[1]:
        raise ValueError(f"window support {window.support} exceeds the FSR {mask.fsr}")
    grid = np.zeros(mask.shape, dtype=np.complex128)
    grid[mask.flags] = meas.values
    sl = centered_slices(mask.rows, mask.cols, (h, w))
    windowed = np.zeros_like(grid)
    windowed[sl] = grid[sl] * window.values
    return idft2_unitary(ImageGrid(windowed, "frequency"))


def residual_data(meas: Measurements, x_low: ImageGrid) -> Measurements:
    """Subtract the estimate's predicted measurements: beta = b - M F x_L."""
    if x_low.shape != meas.mask.shape:
        raise ValueError(f"estimate shape {x_low.shape} != mask shape {meas.mask.shape}")
    predicted = sample(dft2_unitary(x_low), meas.mask)
    return Measurements(meas.mask, meas.values - predicted.values)
